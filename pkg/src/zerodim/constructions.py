"""Ultrametric separation, ball partitions, and greedy half-open partitions.

All arithmetic uses :class:`fractions.Fraction`.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import InvalidInstance, InvariantBreach

HALF = Fraction(1, 2)


def to_fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, float):
        # go through repr so 1.9 means 19/10, not its binary expansion
        return Fraction(repr(v))
    return Fraction(v)


@dataclass(frozen=True)
class UltrametricInstance:
    points: tuple
    dist: tuple  # tuple of tuples of Fraction

    @property
    def n(self) -> int:
        return len(self.points)

    def d(self, i: int, j: int) -> Fraction:
        return self.dist[i][j]

    def index(self, label) -> int:
        try:
            return self.points.index(label)
        except ValueError:
            raise InvalidInstance("unknown_point", f"{label!r} is not a point", label) from None


def make_ultrametric(points: Sequence, dist: Sequence[Sequence]) -> UltrametricInstance:
    """Build an instance; checks shape, symmetry, sign and the zero pattern."""
    points = tuple(points)
    n = len(points)
    if len(set(points)) != n:
        raise InvalidInstance("duplicate_points", "point labels must be distinct")
    if len(dist) != n or any(len(row) != n for row in dist):
        raise InvalidInstance("bad_shape", f"distance matrix must be {n}x{n}")
    m = tuple(tuple(to_fraction(v) for v in row) for row in dist)
    for i in range(n):
        if m[i][i] != 0:
            raise InvalidInstance("nonzero_diagonal", "d(x,x) must be 0", [i])
        for j in range(n):
            if m[i][j] < 0:
                raise InvalidInstance("negative_distance", "distances must be nonnegative", [i, j])
            if m[i][j] != m[j][i]:
                raise InvalidInstance("asymmetric", "d(x,y) must equal d(y,x)", [i, j])
            if i != j and m[i][j] == 0:
                raise InvalidInstance("zero_distance", "distinct points at distance 0", [i, j])
    return UltrametricInstance(points, m)


@dataclass(frozen=True)
class UltrametricReport:
    ok: bool
    witness: tuple | None = None

    def __bool__(self):
        return self.ok


def validate_ultrametric(inst: UltrametricInstance) -> UltrametricReport:
    """Strong triangle inequality; the witness is the first failing ``(i, j, k)``
    in lexicographic order, i.e. ``d(i,k) > max(d(i,j), d(j,k))``."""
    # re-run the structural checks in case the instance was built by hand
    make_ultrametric(inst.points, inst.dist)
    n, d = inst.n, inst.dist
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if d[i][k] > max(d[i][j], d[j][k]):
                    return UltrametricReport(False, (i, j, k))
    return UltrametricReport(True)


def require_ultrametric(inst: UltrametricInstance) -> None:
    rep = validate_ultrametric(inst)
    if not rep:
        raise InvalidInstance("not_ultrametric", "strong triangle inequality fails", list(rep.witness))


def ball_partition(inst: UltrametricInstance, r) -> list[list[int]]:
    """Classes of ``d(x, y) <= r``, as sorted index lists sorted by first member."""
    r = to_fraction(r)
    if r < 0:
        raise InvalidInstance("negative_radius", "radius must be nonnegative", str(r))
    parent = list(range(inst.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in range(inst.n):
        for j in range(i + 1, inst.n):
            if inst.d(i, j) <= r:
                a, b = find(i), find(j)
                if a != b:
                    parent[max(a, b)] = min(a, b)
    groups: dict[int, list[int]] = {}
    for i in range(inst.n):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values())


def _indices(inst, S) -> frozenset:
    out = set()
    for s in S:
        out.add(s if isinstance(s, int) and not isinstance(s, bool) and s not in inst.points else inst.index(s))
    return frozenset(out)


def _check_sets(inst, C, D):
    C, D = _indices(inst, C), _indices(inst, D)
    if not C or not D:
        raise InvalidInstance("empty_set", "C and D must be nonempty")
    if C & D:
        raise InvalidInstance("overlapping_sets", "C and D must be disjoint", sorted(C & D))
    if not all(0 <= i < inst.n for i in C | D):
        raise InvalidInstance("unknown_point", "index out of range", sorted(C | D))
    return C, D


def set_distance(inst, S: Iterable[int], x: int) -> Fraction:
    return min(inst.d(s, x) for s in S)


@dataclass(frozen=True)
class SeparationResult:
    values: tuple  # f(x) per point
    epsilons: dict  # x -> eps(x) for x outside C and D
    certificate_ok: bool
    failure: tuple | None = None  # (x, y) with d(x,y) < eps(x) and f(y) != f(x)


def separation_function(inst: UltrametricInstance, C, D) -> SeparationResult:
    C, D = _check_sets(inst, C, D)
    f = []
    for x in range(inst.n):
        dc, dd = set_distance(inst, C, x), set_distance(inst, D, x)
        f.append(dc / (dc + dd))
    eps, failure = {}, None
    for x in range(inst.n):
        if x in C or x in D:
            continue
        e = min(set_distance(inst, C, x), set_distance(inst, D, x))
        eps[x] = e
        for y in range(inst.n):
            if failure is None and inst.d(x, y) < e and f[y] != f[x]:
                failure = (x, y)
    return SeparationResult(tuple(f), eps, failure is None, failure)


@dataclass(frozen=True)
class ClopenSeparator:
    members: frozenset
    radii: dict = field(default_factory=dict)  # x -> r with ball(x, r) on x's side


def clopen_separator(inst: UltrametricInstance, C, D) -> ClopenSeparator:
    C, D = _check_sets(inst, C, D)
    sep = separation_function(inst, C, D)
    members = frozenset(x for x in range(inst.n) if sep.values[x] < HALF)
    radii = {}
    for x in range(inst.n):
        if x in C:
            radii[x] = set_distance(inst, D, x)
        elif x in D:
            radii[x] = set_distance(inst, C, x)
        else:
            radii[x] = sep.epsilons[x]
        side = x in members
        for y in range(inst.n):
            if inst.d(x, y) < radii[x] and (y in members) != side:
                raise InvariantBreach(f"ball around {x} of radius {radii[x]} crosses the separator at {y}")
    return ClopenSeparator(members, radii)


def random_ultrametric(rng: random.Random, n: int) -> UltrametricInstance:
    """Random binary merge tree with strictly increasing merge heights."""
    if n < 1:
        raise InvalidInstance("empty_instance", "need at least one point")
    clusters = [[i] for i in range(n)]
    d = [[Fraction(0)] * n for _ in range(n)]
    height = Fraction(0)
    while len(clusters) > 1:
        height += Fraction(rng.randint(1, 4), rng.randint(1, 3))
        a, b = sorted(rng.sample(range(len(clusters)), 2))
        for i in clusters[a]:
            for j in clusters[b]:
                d[i][j] = d[j][i] = height
        clusters[a] += clusters.pop(b)
    return make_ultrametric([f"p{i}" for i in range(n)], d)


def hierarchical_instances(count: int = 100, max_points: int = 12, seed: int = 1) -> list[UltrametricInstance]:
    rng = random.Random(seed)
    return [random_ultrametric(rng, rng.randint(2, max_points)) for _ in range(count)]


# -- half-open interval covers ----------------------------------------------


@dataclass(frozen=True)
class HalfOpenCover:
    M: Fraction
    intervals: tuple  # of (a, b) Fraction pairs


def make_cover(M, intervals: Iterable[Sequence]) -> HalfOpenCover:
    M = to_fraction(M)
    if M <= 0:
        raise InvalidInstance("bad_bound", "M must be positive", str(M))
    ivs = []
    for iv in intervals:
        if len(iv) != 2:
            raise InvalidInstance("bad_interval", "intervals are [a, b) pairs", list(map(str, iv)))
        a, b = to_fraction(iv[0]), to_fraction(iv[1])
        if not a < b:
            raise InvalidInstance("bad_interval", "need a < b", [str(a), str(b)])
        ivs.append((a, b))
    return HalfOpenCover(M, tuple(ivs))


def first_gap(cover: HalfOpenCover) -> Fraction | None:
    """Least point of [0, M) not covered, if any."""
    x = Fraction(0)
    while x < cover.M:
        reach = [b for a, b in cover.intervals if a <= x < b]
        if not reach:
            return x
        x = max(reach)
    return None


def sorgenfrey_partition(cover: HalfOpenCover) -> list[Fraction]:
    """Breakpoints ``0 = x0 < ... < xk = M``; each step jumps to the farthest
    right end among intervals containing the current point."""
    xs = [Fraction(0)]
    while xs[-1] < cover.M:
        x = xs[-1]
        reach = [b for a, b in cover.intervals if a <= x < b]
        if not reach:
            raise InvalidInstance("not_a_cover", f"{x} is not covered", str(x))
        xs.append(min(cover.M, max(reach)))
    return xs


def is_refining_partition(cover: HalfOpenCover, xs: Sequence[Fraction]) -> bool:
    if not xs or xs[0] != 0 or xs[-1] != cover.M:
        return False
    if any(a >= b for a, b in zip(xs, xs[1:])):
        return False
    return all(
        any(a <= lo and hi <= b for a, b in cover.intervals) for lo, hi in zip(xs, xs[1:])
    )
