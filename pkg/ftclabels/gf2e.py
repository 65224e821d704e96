"""
Arithmetic in GF(2^w), the characteristic-two field underlying the Reed-Solomon parity-check rows.

Elements are represented as plain integers in [0, 2^w): bit i is the coefficient of x^i. Addition is
XOR.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import orjson

try:
    from functools import cache
except ImportError:
    from functools import lru_cache as cache

from . import data
from .exceptions import FieldArithmeticError

FieldElement = int
MultiplierTables = Tuple[Tuple[int, ...], ...]

DATA_DIR = Path(data.__file__).parent

# Below this many powers, building the multiply-by-constant tables costs more than it saves
_TABLE_THRESHOLD = 48

# Widest field that multiplies through exp/log tables
LOG_TABLE_WIDTH = 16


@cache
def shipped_moduli() -> Dict[int, int]:
    """Load the table of irreducible moduli shipped with the package, keyed by width."""
    with open(DATA_DIR / "irreducible_moduli.json", "rb") as file_:
        return {int(w): int(modulus, 16) for w, modulus in orjson.loads(file_.read()).items()}


def clmul(a: int, b: int) -> int:
    """Carryless product of two polynomials over GF(2)."""
    result = 0
    while b:
        if b & 1:
            result ^= a
        b >>= 1
        a <<= 1
    return result


def _poly_mod(a: int, modulus: int) -> int:
    """Remainder of a polynomial over GF(2) modulo another."""
    degree = modulus.bit_length() - 1
    while a.bit_length() - 1 >= degree:
        a ^= modulus << (a.bit_length() - 1 - degree)
    return a


def _poly_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, _poly_mod(a, b)
    return a


def _prime_factors(value: int) -> List[int]:
    factors = []
    candidate = 2
    while candidate * candidate <= value:
        if value % candidate == 0:
            factors.append(candidate)
            while value % candidate == 0:
                value //= candidate
        candidate += 1
    if value > 1:
        factors.append(value)
    return factors


@cache
def is_irreducible(modulus: int, w: int) -> bool:
    """
    Rabin's irreducibility test for a degree-w polynomial over GF(2).

    The polynomial is irreducible iff x^(2^w) = x mod modulus and, for every prime r dividing w,
    gcd(x^(2^(w/r)) - x, modulus) = 1.
    """
    if modulus.bit_length() != w + 1:
        return False

    def frobenius(times: int) -> int:
        value = 0b10
        for _ in range(times):
            value = _poly_mod(clmul(value, value), modulus)
        return value

    if frobenius(w) != _poly_mod(0b10, modulus):
        return False
    for r in _prime_factors(w):
        if _poly_gcd(modulus, frobenius(w // r) ^ 0b10) != 1:
            return False
    return True


class LogTables(NamedTuple):
    """exp[i] = g^i for i in [0, 2(2^w - 1)) and log[g^i] = i, for a generator g."""

    exp: Tuple[int, ...]
    log: Tuple[int, ...]


@cache
def log_tables(w: int, modulus: int) -> LogTables:
    """Build exp/log tables over the smallest generator of the multiplicative group."""
    period = (1 << w) - 1

    def slow_mul(a: int, b: int) -> int:
        return _poly_mod(clmul(a, b), modulus)

    def slow_pow(a: int, e: int) -> int:
        result = 1
        while e:
            if e & 1:
                result = slow_mul(result, a)
            a = slow_mul(a, a)
            e >>= 1
        return result

    factors = _prime_factors(period)
    generator = next(
        g
        for g in range(2 if w > 1 else 1, period + 1)
        if all(slow_pow(g, period // p) != 1 for p in factors)
    )

    exp = [0] * (2 * period)
    log = [0] * (period + 1)
    value = 1
    for i in range(period):
        exp[i] = exp[i + period] = value
        log[value] = i
        value = slow_mul(value, generator)
    return LogTables(exp=tuple(exp), log=tuple(log))


@dataclass(frozen=True)
class GF2Field:
    """
    The field GF(2^w) = GF(2)[x] / (modulus).

    w:        bit width, 1 <= w <= 64.
    modulus:  irreducible polynomial of degree w, as a bit mask including the x^w term.

    Fields of width at most 16 multiply through exp/log tables over a generator of the
    multiplicative group. Wider fields multiply carrylessly and reduce the high half through
    byte-sliced tables of x^(w+i) mod modulus.
    """

    w: int
    modulus: int
    _mask: int = field(init=False, repr=False, compare=False)
    _logs: Optional[LogTables] = field(init=False, repr=False, compare=False)
    _reduction: MultiplierTables = field(init=False, repr=False, compare=False)
    _squares: MultiplierTables = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not 1 <= self.w <= 64:
            raise FieldArithmeticError(f"field width must be in [1, 64], got {self.w}")
        if not is_irreducible(self.modulus, self.w):
            raise FieldArithmeticError(
                f"{self.modulus:#x} is not an irreducible polynomial of degree {self.w}"
            )
        object.__setattr__(self, "_mask", (1 << self.w) - 1)

        logs = log_tables(self.w, self.modulus) if self.w <= LOG_TABLE_WIDTH else None
        object.__setattr__(self, "_logs", logs)

        monomials = [1]
        for _ in range(2 * self.w - 1):
            monomials.append(self.mul2(monomials[-1]))
        object.__setattr__(self, "_reduction", self._byte_tables(monomials[self.w :]))
        object.__setattr__(
            self, "_squares", self._byte_tables(monomials[: 2 * self.w : 2])
        )

    @property
    def order(self) -> int:
        return 1 << self.w

    @property
    def byte_width(self) -> int:
        return (self.w + 7) // 8

    @property
    def has_log_tables(self) -> bool:
        return self._logs is not None

    @staticmethod
    def add(a: FieldElement, b: FieldElement) -> FieldElement:
        return a ^ b

    def mul2(self, a: FieldElement) -> FieldElement:
        """Multiply a by x."""
        a <<= 1
        if a >> self.w:
            a ^= self.modulus
        return a

    def mul(self, a: FieldElement, b: FieldElement) -> FieldElement:
        logs = self._logs
        if logs is not None:
            return logs.exp[logs.log[a] + logs.log[b]] if a and b else 0
        return self._reduce(clmul(a, b) if a.bit_length() >= b.bit_length() else clmul(b, a))

    def _reduce(self, product: int) -> FieldElement:
        result = product & self._mask
        high = product >> self.w
        for table in self._reduction:
            result ^= table[high & 0xFF]
            high >>= 8
        return result

    def sqr(self, a: FieldElement) -> FieldElement:
        logs = self._logs
        if logs is not None:
            return logs.exp[2 * logs.log[a]] if a else 0
        return self.table_mul(self._squares, a)

    def inv(self, a: FieldElement) -> FieldElement:
        """Look up the inverse, or run the extended Euclidean algorithm on (modulus, a)."""
        if a == 0:
            raise FieldArithmeticError("zero has no multiplicative inverse")
        if self._logs is not None:
            return self._logs.exp[self.order - 1 - self._logs.log[a]]
        t1, t2 = 0, 1
        r1, r2 = self.modulus, a
        r1l, r2l = self.w + 1, r2.bit_length()
        while r2:
            q = r1l - r2l
            r1 ^= r2 << q
            t1 ^= t2 << q
            r1l = r1.bit_length()
            if r1 < r2:
                t1, t2 = t2, t1
                r1, r2 = r2, r1
                r1l, r2l = r2l, r1l
        assert r1 == 1
        return t1

    def pow(self, a: FieldElement, e: int) -> FieldElement:
        """Raise a to a non-negative integer power through the logs or by square-and-multiply."""
        if e < 0:
            raise FieldArithmeticError(f"exponent must be non-negative, got {e}")
        if self._logs is not None and a:
            return self._logs.exp[self._logs.log[a] * e % (self.order - 1)]
        result = 1
        while e:
            if e & 1:
                result = self.mul(result, a)
            e >>= 1
            if e:
                a = self.sqr(a)
        return result

    def _byte_tables(self, base: Sequence[int]) -> MultiplierTables:
        """tables[j][v] is the XOR of base[8j + i] over the set bits i of v."""
        tables = []
        for j in range(self.byte_width):
            table = [0] * 256
            for v in range(1, 256):
                bit = 8 * j + (v & -v).bit_length() - 1
                table[v] = table[v & (v - 1)] ^ (base[bit] if bit < len(base) else 0)
            tables.append(tuple(table))
        return tuple(tables)

    def multiplier_tables(self, a: FieldElement) -> MultiplierTables:
        """
        Byte-sliced tables for multiplication by the constant a.

        tables[j][v] = a·(v·x^(8j)), so a·b is the XOR of tables[j][byte j of b].
        """
        shifted = [a]
        for _ in range(self.w - 1):
            shifted.append(self.mul2(shifted[-1]))
        return self._byte_tables(shifted)

    @staticmethod
    def table_mul(tables: MultiplierTables, b: FieldElement) -> FieldElement:
        """Multiply b by the constant the tables were built for."""
        product = 0
        for table in tables:
            product ^= table[b & 0xFF]
            b >>= 8
        return product

    def powers(self, a: FieldElement, count: int) -> List[FieldElement]:
        """Return [a^0, a^1, ..., a^(count-1)] by repeated multiplication."""
        result: List[FieldElement] = []
        logs = self._logs
        if logs is not None and a:
            step, position, period = logs.log[a], 0, self.order - 1
            for _ in range(count):
                result.append(logs.exp[position])
                position = (position + step) % period
            return result

        value = 1
        if count <= _TABLE_THRESHOLD:
            for _ in range(count):
                result.append(value)
                value = self.mul(value, a)
            return result

        tables = self.multiplier_tables(a)
        for _ in range(count):
            result.append(value)
            value = self.table_mul(tables, value)
        return result


@cache
def field_for_width(bits: int) -> GF2Field:
    """
    Return the shipped field of the smallest width that holds `bits`-bit values.

    Widths are rounded up to the next multiple of eight so that label bytes are portable.
    """
    for w, modulus in sorted(shipped_moduli().items()):
        if w >= bits:
            return GF2Field(w=w, modulus=modulus)
    raise FieldArithmeticError(
        f"no shipped field holds {bits}-bit edge identifiers; the widest field has 64 bits"
    )
