"""
Deterministic k-threshold outdetect codec.

Every edge gets a nonzero locator α, and its parity-check row is (α^0, α^1, ..., α^(2k-1)). A vertex
label is the field sum of the rows of its incident edges, so the sum over a vertex set S is the
syndrome of the boundary of S: coordinate j is Σ α^j over the boundary edges. Syndrome decoding
recovers the boundary when it has at most k edges.

Syndromes are packed into a single integer with coordinate 0 in the most significant w-bit word:
aggregation is XOR, and the prefix of a syndrome is a right shift.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import (
    Callable,
    Dict,
    Iterable,
    List,
    Optional,
    Sequence,
    Tuple,
    Union,
)

from .exceptions import LabelMismatchError
from .gf2e import FieldElement, GF2Field, MultiplierTables

logger = logging.getLogger(__name__)

# Polynomials over GF(2^w) are lists of coefficients, lowest degree first, with no trailing zeroes:
# [] = 0, [3] = 3, [0, 1] = x, [2, 0, 5] = 5x^2 + 2.
Poly = List[FieldElement]


@dataclass(frozen=True, order=True)
class EdgeLocator:
    """
    Nonzero field element identifying an edge.

    element = (a·2^q + b) + 2^(2q), where a < b are the preorder positions of the endpoints and q is
    the ancestry width. The leading bit makes every locator nonzero, and 0 remains the formal zero
    meaning "no edge".
    """

    element: int

    @classmethod
    def from_positions(cls, a: int, b: int, q: int) -> "EdgeLocator":
        low, high = (a, b) if a < b else (b, a)
        return cls(element=((low << q) | high) | (1 << (2 * q)))

    def positions(self, q: int) -> Tuple[int, int]:
        mask = (1 << q) - 1
        return (self.element >> q) & mask, self.element & mask

    def is_well_formed(self, q: int, n: int) -> bool:
        """Whether this element can be the locator of an edge between two of n tree positions."""
        if self.element >> (2 * q) != 1:
            return False
        low, high = self.positions(q)
        return low < high < n


@dataclass(frozen=True)
class OutdetectSyndrome:
    """
    Length-2k vector of field elements, packed into `value`.

    Coordinate j occupies bits [(2k-1-j)·w, (2k-j)·w) of `value`.
    """

    k: int
    w: int
    value: int = 0

    @classmethod
    def zero(cls, k: int, w: int) -> "OutdetectSyndrome":
        return cls(k=k, w=w, value=0)

    @classmethod
    def from_coords(cls, coords: Sequence[FieldElement], w: int) -> "OutdetectSyndrome":
        assert len(coords) % 2 == 0, "a syndrome has an even number of coordinates"
        return cls(k=len(coords) // 2, w=w, value=pack_coords(coords, w))

    @property
    def coords(self) -> Tuple[FieldElement, ...]:
        mask = (1 << self.w) - 1
        length = 2 * self.k
        return tuple(
            (self.value >> ((length - 1 - j) * self.w)) & mask for j in range(length)
        )

    @property
    def bit_length(self) -> int:
        """Serialized size in bits, excluding the header."""
        return 2 * self.k * self.w

    def is_zero(self) -> bool:
        return self.value == 0

    def __add__(self, other: "OutdetectSyndrome") -> "OutdetectSyndrome":
        if (self.k, self.w) != (other.k, other.w):
            raise LabelMismatchError(
                f"cannot add syndromes with thresholds/widths {self.k}/{self.w} and "
                f"{other.k}/{other.w}"
            )
        return OutdetectSyndrome(k=self.k, w=self.w, value=self.value ^ other.value)

    def coords_bytes(self) -> bytes:
        """The 2k field elements, each big-endian and padded to whole bytes."""
        byte_width = (self.w + 7) // 8
        if byte_width * 8 == self.w:
            return self.value.to_bytes(2 * self.k * byte_width, "big")
        return b"".join(c.to_bytes(byte_width, "big") for c in self.coords)

    def to_bytes(self) -> bytes:
        """Serialize as a 32-bit big-endian threshold header followed by the coordinates."""
        return self.k.to_bytes(4, "big") + self.coords_bytes()

    @classmethod
    def from_coords_bytes(cls, data: bytes, k: int, w: int) -> "OutdetectSyndrome":
        byte_width = (w + 7) // 8
        if len(data) != 2 * k * byte_width:
            raise LabelMismatchError(
                f"expected {2 * k * byte_width} bytes of syndrome coordinates, got {len(data)}"
            )
        if byte_width * 8 == w:
            return cls(k=k, w=w, value=int.from_bytes(data, "big"))
        return cls.from_coords(
            [
                int.from_bytes(data[i : i + byte_width], "big")
                for i in range(0, len(data), byte_width)
            ],
            w,
        )

    @classmethod
    def from_bytes(cls, data: bytes, w: int) -> "OutdetectSyndrome":
        return cls.from_coords_bytes(data[4:], int.from_bytes(data[:4], "big"), w)


class DecodeStatus(Enum):
    EMPTY = "empty"
    EDGES = "edges"
    OVERFLOW = "overflow"


@dataclass(frozen=True)
class DecodeResult:
    status: DecodeStatus
    locators: Tuple[EdgeLocator, ...] = ()

    @classmethod
    def empty(cls) -> "DecodeResult":
        return cls(status=DecodeStatus.EMPTY)

    @classmethod
    def overflow(cls) -> "DecodeResult":
        return cls(status=DecodeStatus.OVERFLOW)


@dataclass
class DecodeStats:
    """Instrumentation hook: prefix lengths (in coordinates) consulted by each decode call."""

    consulted: List[int] = field(default_factory=list)
    windows: List[int] = field(default_factory=list)


def pack_coords(coords: Iterable[FieldElement], w: int) -> int:
    if w % 8 == 0:
        width = w // 8
        return int.from_bytes(b"".join(c.to_bytes(width, "big") for c in coords), "big")
    value = 0
    for coordinate in coords:
        value = (value << w) | coordinate
    return value


def prefix(s: OutdetectSyndrome, k_prime: int) -> OutdetectSyndrome:
    """Return the first 2k′ coordinates of s, identical to a syndrome built with threshold k′."""
    if not 0 <= k_prime <= s.k:
        raise LabelMismatchError(
            f"requested prefix threshold {k_prime} exceeds the syndrome threshold {s.k}"
        )
    return OutdetectSyndrome(
        k=k_prime, w=s.w, value=s.value >> (2 * (s.k - k_prime) * s.w)
    )


def aggregate(syndromes: Iterable[OutdetectSyndrome]) -> OutdetectSyndrome:
    """Component-wise field sum of syndromes with equal thresholds."""
    iterator = iter(syndromes)
    try:
        total = next(iterator)
    except StopIteration:
        raise LabelMismatchError("cannot aggregate an empty sequence of syndromes") from None
    for syndrome in iterator:
        total = total + syndrome
    return total


class RSCodec:
    """
    Reed-Solomon syndrome codec over a fixed field.

    validate:  optional predicate applied to every recovered locator; a locator that fails it makes
               the decode report an overflow.
    """

    def __init__(
        self,
        gf: GF2Field,
        validate: Optional[Callable[[EdgeLocator], bool]] = None,
    ) -> None:
        self.gf = gf
        self._validate = validate
        self._rows: Dict[Tuple[int, int], int] = {}

    def edge_row(self, loc: Union[EdgeLocator, int], k: int) -> List[FieldElement]:
        """Return (α^0, α^1, ..., α^(2k-1)) for the locator α."""
        element = loc.element if isinstance(loc, EdgeLocator) else loc
        assert element != 0, "the formal zero is not a locator"
        return self.gf.powers(element, 2 * k)

    def row_value(self, element: int, k: int) -> int:
        """Packed parity-check row of a locator, cached per (locator, threshold)."""
        key = (element, k)
        value = self._rows.get(key)
        if value is None:
            value = self._rows[key] = pack_coords(self.edge_row(element, k), self.gf.w)
        return value

    def row_syndrome(self, loc: EdgeLocator, k: int) -> OutdetectSyndrome:
        return OutdetectSyndrome(k=k, w=self.gf.w, value=self.row_value(loc.element, k))

    def vertex_labels(
        self, n: int, edges: Iterable[Tuple[int, int, EdgeLocator]], k: int
    ) -> List[OutdetectSyndrome]:
        """Outdetect labels of all vertices 0..n-1 for the given (u, v, locator) edges."""
        values = [0] * n
        for u, v, loc in edges:
            row = self.row_value(loc.element, k)
            values[u] ^= row
            values[v] ^= row
        return [OutdetectSyndrome(k=k, w=self.gf.w, value=value) for value in values]

    def vertex_label(
        self, edges: Iterable[Tuple[int, int, EdgeLocator]], v: int, k: int
    ) -> OutdetectSyndrome:
        """Field sum of the rows of the edges incident to v."""
        value = 0
        for a, b, loc in edges:
            if v in (a, b):
                value ^= self.row_value(loc.element, k)
        return OutdetectSyndrome(k=k, w=self.gf.w, value=value)

    def syndrome_decode(
        self,
        s: OutdetectSyndrome,
        k_prime: int,
        stats: Optional[DecodeStats] = None,
    ) -> DecodeResult:
        """
        Recover the support of s from its first 2k′ coordinates.

        Berlekamp-Massey runs on windows of 2, 4, 8, ... coordinates, up to the whole prefix. A
        candidate support is accepted only if its power sums reproduce all 2k′ coordinates; any
        accepted support of size <= k′ is the unique one, so the result equals that of a single
        run over the whole prefix. OVERFLOW is reported when no window yields an accepted support.
        """
        consulted = prefix(s, k_prime)
        if stats is not None:
            stats.consulted.append(2 * k_prime)
        if consulted.is_zero():
            return DecodeResult.empty()

        window = 1
        while True:
            window = min(window, k_prime)
            if stats is not None:
                stats.windows.append(2 * window)

            locators = self._decode_window(prefix(consulted, window).coords, window)
            if locators is not None and self._verify(locators, consulted):
                return DecodeResult(status=DecodeStatus.EDGES, locators=locators)

            if window == k_prime:
                logger.debug("Syndrome decode overflowed at k′=%d", k_prime)
                return DecodeResult.overflow()
            window *= 2

    def _decode_window(
        self, coords: Sequence[FieldElement], window: int
    ) -> Optional[Tuple[EdgeLocator, ...]]:
        connection, length = _berlekamp_massey(coords, self.gf)
        if length == 0 or length > window:
            return None
        # The connection polynomial is Π(1 - α·x); its reversal Π(x - α) has the locators as roots.
        # A reversal with a zero constant term would make 0 a root, which is no locator.
        padded = connection + [0] * (length + 1 - len(connection))
        if len(padded) != length + 1 or padded[length] == 0:
            return None
        roots = _find_roots(list(reversed(padded)), self.gf)
        if roots is None or len(roots) != length:
            return None

        locators = tuple(EdgeLocator(root) for root in roots)
        if self._validate is not None and not all(self._validate(l) for l in locators):
            return None
        return locators

    def _verify(
        self, locators: Sequence[EdgeLocator], consulted: OutdetectSyndrome
    ) -> bool:
        value = 0
        for loc in locators:
            value ^= self.row_value(loc.element, consulted.k)
        return value == consulted.value


def _berlekamp_massey(
    syndromes: Sequence[FieldElement], gf: GF2Field
) -> Tuple[Poly, int]:
    """
    Return the connection polynomial and linear complexity of the shortest LFSR generating the
    sequence.
    """
    current: Poly = [1]
    prev: Poly = [1]
    length = 0
    shift = 1
    b_inv = 1
    for n, discrepancy in enumerate(syndromes):
        for i in range(1, min(length, len(current) - 1) + 1):
            discrepancy ^= gf.mul(current[i], syndromes[n - i])

        if discrepancy == 0:
            shift += 1
            continue

        scale = gf.mul(discrepancy, b_inv)
        updated = current + [0] * max(0, len(prev) + shift - len(current))
        for i, coefficient in enumerate(prev):
            updated[i + shift] ^= gf.mul(scale, coefficient)

        if 2 * length <= n:
            prev = current
            length = n + 1 - length
            b_inv = gf.inv(discrepancy)
            shift = 1
        else:
            shift += 1
        current = updated

    while len(current) > 1 and current[-1] == 0:
        current.pop()
    return current, length


def _poly_monic(poly: Poly, gf: GF2Field) -> Poly:
    inv = gf.inv(poly[-1])
    return [gf.mul(inv, v) for v in poly]


def _poly_divmod(
    poly: Poly, mod: Poly, gf: GF2Field, tables: Optional[List[MultiplierTables]] = None
) -> Tuple[Poly, Poly]:
    """
    Return (quotient, remainder) of poly divided by the monic polynomial mod.

    tables, when given, holds multiplier tables for the coefficients of mod below the leading one.
    """
    assert len(mod) > 0 and mod[-1] == 1
    if len(poly) < len(mod):
        return [], list(poly)
    val = list(poly)
    div = [0] * (len(val) - len(mod) + 1)
    while len(val) >= len(mod):
        term = val.pop()
        div[len(val) + 1 - len(mod)] = term
        if term:
            if tables is None:
                for x in range(len(mod) - 1):
                    val[1 + x - len(mod)] ^= gf.mul(term, mod[x])
            else:
                for x in range(len(mod) - 1):
                    val[1 + x - len(mod)] ^= gf.table_mul(tables[x], term)
    while val and val[-1] == 0:
        val.pop()
    return div, val


def _poly_gcd(a: Poly, b: Poly, gf: GF2Field) -> Poly:
    if len(a) < len(b):
        a, b = b, a
    while b:
        b = _poly_monic(b, gf)
        (_, b), a = _poly_divmod(a, b, gf), b
    return _poly_monic(a, gf) if a else a


def _poly_sqr(poly: Poly, gf: GF2Field) -> Poly:
    # Frobenius: squaring squares every coefficient and interleaves zeroes
    if not poly:
        return []
    return [0 if i & 1 else gf.sqr(poly[i // 2]) for i in range(2 * len(poly) - 1)]


def _divisor_tables(poly: Poly, gf: GF2Field) -> Optional[List[MultiplierTables]]:
    """Multiplier tables for a divisor reused across many reductions, unless mul is a lookup."""
    if gf.has_log_tables:
        return None
    return [gf.multiplier_tables(c) for c in poly[:-1]]


def _poly_tracemod(poly: Poly, param: FieldElement, gf: GF2Field) -> Poly:
    """Compute y + y^2 + y^4 + ... + y^(2^(w-1)) mod poly, where y = param·x."""
    tables = _divisor_tables(poly, gf)
    out = [0, param]
    for _ in range(gf.w - 1):
        out = _poly_sqr(out, gf)
        while len(out) < 2:
            out.append(0)
        out[1] ^= param
        _, out = _poly_divmod(out, poly, gf, tables)
    return out


def _poly_frobeniusmod(poly: Poly, gf: GF2Field) -> Poly:
    """Compute x^(2^w) mod poly."""
    tables = _divisor_tables(poly, gf)
    out = [0, 1]
    for _ in range(gf.w):
        _, out = _poly_divmod(_poly_sqr(out, gf), poly, gf, tables)
    return out


def _find_roots(poly: Poly, gf: GF2Field) -> Optional[List[FieldElement]]:
    """
    Return the roots of poly in increasing order if it splits into distinct linear factors over
    GF(2^w), and None otherwise.

    The split-in-field part is gcd(x^(2^w) - x, poly); it must be all of poly. Splitting uses the
    trace maps Tr(x^i·y) for i = 0..w-1, which separate any two distinct roots.
    """
    if len(poly) <= 1:
        return [] if poly else None
    poly = _poly_monic(poly, gf)
    if len(poly) == 2:
        return [poly[0]]

    frobenius = _poly_frobeniusmod(poly, gf)
    frobenius += [0] * max(0, 2 - len(frobenius))
    frobenius[1] ^= 1
    while frobenius and frobenius[-1] == 0:
        frobenius.pop()
    if len(_poly_gcd(poly, frobenius, gf)) != len(poly):
        return None

    def split(factor: Poly, basis_index: int) -> Optional[List[FieldElement]]:
        if len(factor) == 2:
            return [factor[0]]
        for index in range(basis_index, gf.w):
            trace = _poly_tracemod(factor, 1 << index, gf)
            gcd = _poly_gcd(trace, factor, gf) if trace else factor
            if 1 < len(gcd) < len(factor):
                quotient, _ = _poly_divmod(factor, gcd, gf)
                left = split(gcd, index + 1)
                right = split(quotient, index + 1)
                if left is None or right is None:
                    return None
                return left + right
        return None

    roots = split(poly, 0)
    return sorted(roots) if roots is not None else None
