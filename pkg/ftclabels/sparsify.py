"""
Geometric sparsification of the non-tree edges into a nested hierarchy of edge sets.

A non-tree edge (u, v) becomes the plane point (min(c(u), c(v)), max(c(u), c(v))) of Euler-tour
coordinates. For a vertex set S whose tree cutset has c edges, the boundary non-tree edges of S are
exactly the points in the odd-coverage region of 4c halfspaces, a union of at most (2c+1)²/2
rectangles. An ε-net for rectangles therefore keeps a boundary edge of every such S with many
boundary edges, which is what the next level of the hierarchy needs.
"""

import logging
import random
import secrets
import time
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import ceil
from typing import (
    Dict,
    FrozenSet,
    Iterable,
    Iterator,
    List,
    Mapping,
    Optional,
    Sequence,
    Set,
    Tuple,
    Union,
)

from .config import HierarchyMode, SchemeConfig
from .exceptions import ConfigError
from .graph import AuxiliaryGraph, Edge, EulerCoords, RootedTree
from .utils import ceil_log2

logger = logging.getLogger(__name__)

ROOT_FRAGMENT = -1


@dataclass(frozen=True, order=True)
class PlanePoint:
    """Image of a non-tree edge; payload is the original index of that edge."""

    x: int
    y: int
    payload: int


class Anchor(str, Enum):
    LEFT = "left"
    RIGHT = "right"


@dataclass(frozen=True)
class Hierarchy:
    """
    Nested non-tree edge sets E_0 ⊇ E_1 ⊇ ... ⊇ E_h = ∅.

    levels:     sorted original edge indices of every level; the last level is always empty.
    threshold:  K, the decode budget that every level syndrome is built for.
    n_prime:    vertex count of the auxiliary graph, which all logarithms are taken of.
    """

    levels: Tuple[Tuple[int, ...], ...]
    threshold: int
    mode: HierarchyMode
    c_net: int
    n_prime: int
    seed: Optional[int] = None

    @property
    def h(self) -> int:
        return len(self.levels) - 1

    @property
    def sizes(self) -> Tuple[int, ...]:
        return tuple(len(level) for level in self.levels)

    def budget(self, cut_size: int) -> int:
        """
        Decode budget for a vertex set with the given tree cutset size.

        The deterministic hierarchy is universal in f, so a set with a small cutset only needs the
        threshold it would have been built with for f = cut_size.
        """
        if self.mode is HierarchyMode.DETERMINISTIC:
            return min(
                self.threshold, deterministic_threshold(cut_size, self.c_net, self.n_prime)
            )
        return self.threshold


@dataclass
class GoodnessReport:
    checked: int = 0
    violations: List[Tuple[int, int, int]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def deterministic_threshold(f: int, c_net: int, n_prime: int) -> int:
    """K = ⌈c_net·(2f+1)²·log2 n′⌉, at least 1."""
    return max(1, c_net * (2 * f + 1) ** 2 * ceil_log2(n_prime))


def randomized_threshold(f: int, factor: int, n_prime: int) -> int:
    return max(1, factor * f * ceil_log2(n_prime))


def map_edges(coords: EulerCoords, non_tree: Mapping[int, Edge]) -> List[PlanePoint]:
    """Map every non-tree edge of the auxiliary graph to its plane point, in edge index order."""
    points = []
    for index in sorted(non_tree):
        u, v = non_tree[index]
        a, b = coords.c[u], coords.c[v]
        points.append(PlanePoint(x=min(a, b), y=max(a, b), payload=index))
    return points


def three_sided_net(
    points: Sequence[PlanePoint], anchor: Anchor, eps: Union[Fraction, int, float]
) -> List[PlanePoint]:
    """
    Return an eps-net for rectangles with one vertical side on the given border of the range.

    The points are cut into slabs of ⌈eps·N/4⌉ consecutive points in y order, and the net holds
    the point of every slab that lies closest to the anchor border. A rectangle anchored on that
    border with at least eps·N points covers at least one full slab that it meets, so it contains
    that slab's representative.
    """
    eps = Fraction(eps)
    if not 0 < eps <= 1:
        raise ValueError(f"eps must be in (0, 1], got {eps}")
    if not points:
        return []

    slab = ceil(eps * len(points) / 4)
    ordered = sorted(points, key=lambda p: (p.y, p.x, p.payload))
    pick = max if anchor is Anchor.RIGHT else min
    net = [
        pick(ordered[i : i + slab], key=lambda p: (p.x, p.payload))
        for i in range(0, len(ordered), slab)
    ]
    return sorted(set(net))


def netfind(
    points: Sequence[PlanePoint], n: int, base: int = 4, eps_factor: int = 16
) -> List[PlanePoint]:
    """
    Return a subset hitting every axis-aligned rectangle that holds at least 2·eps_factor·log2 n
    of the points.

    Point sets of at most base·log2 n points yield nothing. Larger sets are bisected at their
    median x (ties broken by y, then payload); a rectangle meeting both halves holds at least half
    its points on one side, and there it is a rectangle anchored on the bisector, which the
    three-sided nets of the halves hit. Rectangles inside one half are handled by recursion.
    """
    log_n = ceil_log2(n)
    net: Set[PlanePoint] = set()
    stack = [sorted(points)]
    while stack:
        current = stack.pop()
        if len(current) <= max(base * log_n, 1):
            continue
        middle = (len(current) + 1) // 2
        halves = ((current[:middle], Anchor.RIGHT), (current[middle:], Anchor.LEFT))
        for half, anchor in halves:
            if eps_factor * log_n <= len(half):
                net.update(three_sided_net(half, anchor, Fraction(eps_factor * log_n, len(half))))
            stack.append(half)
    return sorted(net)


def build_hierarchy_det(
    points: Sequence[PlanePoint],
    f: int,
    n_prime: int,
    c_net: int = 32,
    base: int = 4,
    eps_factor: int = 16,
) -> Hierarchy:
    """Build the deterministic hierarchy, E_(i+1) = netfind(E_i) with N = |E_i|."""
    levels = [tuple(sorted(p.payload for p in points))]
    current = list(points)
    while current:
        following = netfind(current, len(current), base=base, eps_factor=eps_factor)
        if len(following) >= len(current):
            raise ConfigError(
                f"netfind constants base={base}, eps={eps_factor} do not shrink a level of "
                f"{len(current)} edges"
            )
        current = following
        levels.append(tuple(sorted(p.payload for p in current)))

    return Hierarchy(
        levels=tuple(levels),
        threshold=deterministic_threshold(f, c_net, n_prime),
        mode=HierarchyMode.DETERMINISTIC,
        c_net=c_net,
        n_prime=n_prime,
    )


def build_hierarchy_rand(
    points: Sequence[PlanePoint],
    f: int,
    n_prime: int,
    seed: int,
    factor: int = 5,
) -> Hierarchy:
    """
    Build the randomized hierarchy: every edge of E_i survives into E_(i+1) on a fair coin flip,
    until a level is small enough to be decoded whole.
    """
    rng = random.Random(seed)
    threshold = randomized_threshold(f, factor, n_prime)
    levels = [tuple(sorted(p.payload for p in points))]
    while levels[-1]:
        if len(levels[-1]) <= threshold:
            levels.append(())
        else:
            levels.append(tuple(e for e in levels[-1] if rng.getrandbits(1)))

    return Hierarchy(
        levels=tuple(levels),
        threshold=threshold,
        mode=HierarchyMode.RANDOMIZED,
        c_net=factor,
        n_prime=n_prime,
        seed=seed,
    )


def build_hierarchy(
    points: Sequence[PlanePoint], config: SchemeConfig, n_prime: int
) -> Hierarchy:
    """Build the hierarchy selected by the configured mode."""
    start = time.perf_counter()

    if config.mode is HierarchyMode.DETERMINISTIC:
        hierarchy = build_hierarchy_det(
            points,
            config.f,
            n_prime,
            c_net=config.c_net,
            base=config.netfind_base,
            eps_factor=config.netfind_eps,
        )
    elif config.mode is HierarchyMode.RANDOMIZED:
        seed = config.seed
        if seed is None:
            seed = secrets.randbits(64)
            logger.info("Drew hierarchy seed %d", seed)
        hierarchy = build_hierarchy_rand(
            points, config.f, n_prime, seed, factor=config.random_threshold
        )
    else:
        raise ConfigError(f"no hierarchy construction for mode {config.mode.value!r}")

    logger.debug(
        "Built %s hierarchy in %.3fs: K=%d, level sizes %s",
        hierarchy.mode.value,
        time.perf_counter() - start,
        hierarchy.threshold,
        hierarchy.sizes,
    )

    return hierarchy


def cut_region_parity(
    points: Iterable[PlanePoint], coords: EulerCoords, cut_children: Iterable[int]
) -> FrozenSet[int]:
    """
    Return the payloads of the points in the odd-coverage region of the cutset halfspaces.

    Each tree edge (parent(v), v) of the cutset contributes the halfspaces z >= c(v) and
    z >= exit(v) on both axes, whose parity at a coordinate tells whether the vertex with that
    coordinate lies below v. When the cutset is ∂_T(S), the region holds exactly the non-tree
    edges with one endpoint in S.
    """
    bounds = [a for v in cut_children for a in (coords.c[v], coords.exit[v])]

    def parity(z: int) -> int:
        return sum(1 for a in bounds if z >= a) & 1

    return frozenset(p.payload for p in points if parity(p.x) ^ parity(p.y))


def fragment_membership(t: RootedTree, fault_children: Iterable[int]) -> List[int]:
    """Map every vertex to the lower endpoint of its innermost fault edge, or ROOT_FRAGMENT."""
    faults = set(fault_children)
    fragment = [ROOT_FRAGMENT] * t.n
    for vertex in t.order:
        if vertex in faults:
            fragment[vertex] = vertex
        elif vertex != t.root:
            fragment[vertex] = fragment[t.parent[vertex]]
    return fragment


def sample_cuts(
    t: RootedTree, f: int, rng: random.Random, count: int
) -> Iterator[FrozenSet[int]]:
    """
    Yield random vertex sets whose tree cutsets have at most f edges.

    Each set is a random union of the fragments left by removing up to f random tree edges.
    """
    children = [v for v in t.order if v != t.root]
    for _ in range(count):
        faults = rng.sample(children, min(len(children), rng.randint(1, f)))
        fragment = fragment_membership(t, faults)
        chosen = {ROOT_FRAGMENT, *faults}
        chosen = {frag for frag in chosen if rng.getrandbits(1)}
        yield frozenset(v for v in range(t.n) if fragment[v] in chosen)


def single_fault_cuts(t: RootedTree) -> Iterator[FrozenSet[int]]:
    """Yield the vertex set of every proper subtree."""
    for v in t.order:
        if v != t.root:
            start = t.preorder[v]
            yield frozenset(t.order[start : start + t.size[v]])


def verify_goodness(
    hierarchy: Hierarchy, aux: AuxiliaryGraph, samples: Iterable[FrozenSet[int]]
) -> GoodnessReport:
    """
    Check every sampled vertex set S against the hierarchy contract: whenever S has more
    boundary edges at level i than its decode budget, it keeps a boundary edge at level i+1.

    Violations are recorded as (level, tree cutset size, boundary size at that level).
    """
    report = GoodnessReport()
    t = aux.t
    for s in samples:
        cut = sum(1 for v in s if v != t.root and t.parent[v] not in s) + sum(
            1 for v in range(t.n) if v not in s and v != t.root and t.parent[v] in s
        )
        budget = hierarchy.budget(cut)
        boundary: Dict[int, bool] = {
            index: (a in s) != (b in s) for index, (a, b) in aux.non_tree.items()
        }
        sizes = [sum(1 for e in level if boundary[e]) for level in hierarchy.levels]
        for i in range(hierarchy.h):
            if sizes[i] > budget and sizes[i + 1] == 0:
                report.violations.append((i, cut, sizes[i]))
                logger.warning(
                    "Hierarchy level %d loses every boundary edge of a set with tree cutset %d "
                    "and %d boundary edges",
                    i,
                    cut,
                    sizes[i],
                )
        report.checked += 1
    return report
