"""Finite frames and finite topological spaces.

Frame elements are the integers ``0 .. size-1``; the order is stored as one
bitmask per element (``up[i]`` has bit ``j`` set iff ``i <= j``). Space points
are indexed ``0 .. n-1`` and subsets of points are bitmasks.

Property reports give the defining conditions evaluated literally, on any
frame or space; the standard notions, which presuppose zero-dimensionality,
are assembled from these in :mod:`zerodim.explorer`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations, product
from typing import Iterable, Sequence

from .boolalg import BooleanAlgebra, Element, make_algebra
from .errors import InvalidInstance, InvariantBreach


def bits(mask: int) -> list[int]:
    return [i for i in range(mask.bit_length()) if mask >> i & 1]


def popcount(mask: int) -> int:
    return bin(mask).count("1")


# -- frames -------------------------------------------------------------------


@dataclass(frozen=True)
class FiniteFrame:
    size: int
    up: tuple
    labels: tuple = field(default=(), compare=False)
    _meet: tuple = field(default=(), compare=False, repr=False)
    _join: tuple = field(default=(), compare=False, repr=False)

    def leq(self, x: int, y: int) -> bool:
        return bool(self.up[x] >> y & 1)

    def meet(self, x: int, y: int) -> int:
        return self._meet[x][y]

    def join(self, x: int, y: int) -> int:
        return self._join[x][y]

    @cached_property
    def bottom(self) -> int:
        return next(i for i in range(self.size) if self.up[i] == (1 << self.size) - 1)

    @cached_property
    def top(self) -> int:
        return next(i for i in range(self.size) if self.up[i] == 1 << i)

    def join_all(self, xs: Iterable[int]) -> int:
        acc = self.bottom
        for x in xs:
            acc = self._join[acc][x]
        return acc

    def leq_pairs(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.size) for j in bits(self.up[i])]

    def complement(self, x: int) -> int | None:
        for y in range(self.size):
            if self._meet[x][y] == self.bottom and self._join[x][y] == self.top:
                return y
        return None

    @cached_property
    def complemented(self) -> frozenset:
        return frozenset(x for x in range(self.size) if self.complement(x) is not None)

    def label(self, x: int):
        return self.labels[x] if self.labels else x


def frame_from_order(size: int, leq_pairs: Iterable[Sequence[int]], labels: Sequence = ()) -> FiniteFrame:
    """Validate an order and build the frame.

    ``leq_pairs`` may be any generating set of the order: its reflexive,
    transitive closure is taken before checking antisymmetry.
    """
    if size < 1:
        raise InvalidInstance("missing_meet_or_join", "empty order has no bounds")
    up = [1 << i for i in range(size)]
    for i, j in leq_pairs:
        if not (0 <= i < size and 0 <= j < size):
            raise InvalidInstance("not_a_poset", f"pair ({i}, {j}) out of range", [i, j])
        up[i] |= 1 << j
    for k in range(size):
        for i in range(size):
            if up[i] >> k & 1:
                up[i] |= up[k]
    for i, j in combinations(range(size), 2):
        if up[i] >> j & 1 and up[j] >> i & 1:
            raise InvalidInstance("not_a_poset", f"{i} <= {j} <= {i}", [i, j])
    down = [sum(1 << i for i in range(size) if up[i] >> j & 1) for j in range(size)]

    def best(bounds, cone, i, j, what):
        for m in bits(bounds):
            if cone[m] & bounds == bounds:
                return m
        raise InvalidInstance("missing_meet_or_join", f"no {what} of {i} and {j}", [i, j, what])

    meet = [[0] * size for _ in range(size)]
    join = [[0] * size for _ in range(size)]
    for i in range(size):
        for j in range(i, size):
            meet[i][j] = meet[j][i] = best(down[i] & down[j], down, i, j, "meet")
            join[i][j] = join[j][i] = best(up[i] & up[j], up, i, j, "join")
    for x, y, z in product(range(size), repeat=3):
        if meet[x][join[y][z]] != join[meet[x][y]][meet[x][z]]:
            raise InvalidInstance(
                "not_distributive", f"x={x}, y={y}, z={z}", [x, y, z]
            )
    return FiniteFrame(
        size,
        tuple(up),
        tuple(labels),
        tuple(map(tuple, meet)),
        tuple(map(tuple, join)),
    )


def complemented_elements(L: FiniteFrame) -> frozenset:
    return L.complemented


def frame_partitions(L: FiniteFrame) -> list[frozenset]:
    """All subsets of L minus bottom with pairwise meets bottom and join top."""
    candidates = [x for x in range(L.size) if x != L.bottom]
    out = []

    def grow(start, chosen, acc):
        if acc == L.top and chosen:
            out.append(frozenset(chosen))
        for k in range(start, len(candidates)):
            x = candidates[k]
            if all(L.meet(x, y) == L.bottom for y in chosen):
                chosen.append(x)
                grow(k + 1, chosen, L.join(acc, x))
                chosen.pop()

    grow(0, [], L.bottom)
    return out


def minimal_frame_covers(L: FiniteFrame) -> list[frozenset]:
    """Covers (join = top) none of whose proper subsets is a cover."""
    candidates = [x for x in range(L.size) if x != L.bottom]
    n = len(candidates)
    joins = [L.bottom] * (1 << n)
    covers = []
    for mask in range(1, 1 << n):
        low = mask & -mask
        joins[mask] = L.join(joins[mask ^ low], candidates[low.bit_length() - 1])
        if joins[mask] != L.top:
            continue
        if all(joins[mask ^ (1 << i)] != L.top for i in bits(mask)):
            covers.append(frozenset(candidates[i] for i in bits(mask)))
    return covers


def frame_refines(L: FiniteFrame, R: Iterable[int], S: Iterable[int]) -> bool:
    S = list(S)
    return all(any(L.leq(r, s) for s in S) for r in R)


@dataclass(frozen=True)
class FramePropertyReport:
    zero_dimensional: bool
    ultranormal: bool
    ultraparacompact: bool
    complemented: frozenset
    witness: dict = field(default_factory=dict, compare=False)


def check_frame_properties(L: FiniteFrame) -> FramePropertyReport:
    comp = sorted(L.complemented)
    witness = {}
    zd = True
    for x in range(L.size):
        if L.join_all(c for c in comp if L.leq(c, x)) != x:
            zd = False
            witness["zero_dimensional"] = x
            break
    un = True
    for a, b in product(range(L.size), repeat=2):
        if L.join(a, b) != L.top:
            continue
        if not any(L.leq(c, a) and L.leq(L.complement(c), b) for c in comp):
            un = False
            witness["ultranormal"] = [a, b]
            break
    partitions = frame_partitions(L)
    upc = True
    for cover in minimal_frame_covers(L):
        if not any(frame_refines(L, p, cover) for p in partitions):
            upc = False
            witness["ultraparacompact"] = sorted(cover)
            break
    return FramePropertyReport(zd, un, upc, frozenset(comp), witness)


# -- spaces -------------------------------------------------------------------


@dataclass(frozen=True)
class FiniteSpace:
    points: tuple
    opens: frozenset

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def labels_of(self, mask: int) -> list:
        return [self.points[i] for i in bits(mask)]

    def mask_of(self, labels: Iterable) -> int:
        index = {p: i for i, p in enumerate(self.points)}
        mask = 0
        for p in labels:
            if p not in index:
                raise InvalidInstance("unknown_point", repr(p), p)
            mask |= 1 << index[p]
        return mask

    @cached_property
    def sorted_opens(self) -> tuple:
        return tuple(sorted(self.opens))

    @cached_property
    def closed(self) -> tuple:
        return tuple(sorted(self.full & ~u for u in self.opens))

    @cached_property
    def clopens(self) -> tuple:
        return tuple(u for u in self.sorted_opens if self.full & ~u in self.opens)

    @cached_property
    def neighbourhood(self) -> tuple:
        """Smallest open set containing each point."""
        out = []
        for x in range(self.n):
            acc = self.full
            for u in self.opens:
                if u >> x & 1:
                    acc &= u
            out.append(acc)
        return tuple(out)

    def smallest_open(self, mask: int) -> int:
        acc = 0
        for x in bits(mask):
            acc |= self.neighbourhood[x]
        return acc

    def smallest_clopen(self, mask: int) -> int:
        acc = self.full
        for c in self.clopens:
            if c & mask == mask:
                acc &= c
        return acc

    @cached_property
    def clopen_atoms(self) -> tuple:
        """Minimal nonempty clopen sets (a partition of the points)."""
        return tuple(sorted({self.smallest_clopen(1 << x) for x in range(self.n)}))

    @cached_property
    def components(self) -> tuple:
        """Connected components, by merging specialization-related points."""
        parent = list(range(self.n))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for x, y in product(range(self.n), repeat=2):
            if self.neighbourhood[y] >> x & 1:
                parent[find(x)] = find(y)
        groups: dict[int, int] = {}
        for x in range(self.n):
            groups[find(x)] = groups.get(find(x), 0) | 1 << x
        return tuple(sorted(groups.values()))


def space_from_opens(points: Sequence, opens: Iterable[Iterable]) -> FiniteSpace:
    points = tuple(points)
    if len(set(points)) != len(points):
        raise InvalidInstance("duplicate_point", str(points))
    proto = FiniteSpace(points, frozenset())
    masks = frozenset(proto.mask_of(u) for u in opens)
    return space_from_masks(points, masks)


def space_from_masks(points: Sequence, masks: Iterable[int]) -> FiniteSpace:
    X = FiniteSpace(tuple(points), frozenset(masks))
    if 0 not in X.opens or X.full not in X.opens:
        raise InvalidInstance("missing_empty_or_full", "opens must contain the empty and full sets")
    ordered = X.sorted_opens
    for u, v in combinations(ordered, 2):
        if u | v not in X.opens:
            raise InvalidInstance(
                "not_closed_under_union", "", [X.labels_of(u), X.labels_of(v)]
            )
    for u, v in combinations(ordered, 2):
        if u & v not in X.opens:
            raise InvalidInstance(
                "not_closed_under_intersection", "", [X.labels_of(u), X.labels_of(v)]
            )
    return X


def discrete_space(points: Sequence) -> FiniteSpace:
    n = len(points)
    return space_from_masks(points, range(1 << n))


def indiscrete_space(points: Sequence) -> FiniteSpace:
    return space_from_masks(points, {0, (1 << len(points)) - 1})


def sierpinski_space(points: Sequence = ("a", "b")) -> FiniteSpace:
    """Two points, the first one open."""
    return space_from_masks(points, {0, 1, 3})


def open_set_frame(X: FiniteSpace) -> FiniteFrame:
    opens = X.sorted_opens
    pairs = [(i, j) for i, u in enumerate(opens) for j, v in enumerate(opens) if u & v == u]
    return frame_from_order(len(opens), pairs, labels=opens)


@dataclass(frozen=True)
class ClopenAlgebra:
    """The clopen sets of a space as a finite atom-based Boolean algebra."""

    space: FiniteSpace
    algebra: BooleanAlgebra
    atoms: tuple

    def to_points(self, x: Element) -> int:
        return sum(a for i, a in enumerate(self.atoms) if x.bits >> i & 1)

    def from_points(self, mask: int) -> Element:
        b = 0
        for i, a in enumerate(self.atoms):
            if a & mask == a:
                b |= 1 << i
            elif a & mask:
                raise InvalidInstance("not_clopen", f"{self.space.labels_of(mask)}")
        return self.algebra.element(b)


def clopen_algebra(X: FiniteSpace) -> ClopenAlgebra:
    atoms = X.clopen_atoms
    return ClopenAlgebra(X, make_algebra("finite_atoms", len(atoms)), atoms)


def clopen_partitions(X: FiniteSpace) -> list[tuple]:
    """Partitions of the points into nonempty clopen sets (atom set partitions)."""
    atoms = X.clopen_atoms
    out = []

    def grow(i, blocks):
        if i == len(atoms):
            out.append(tuple(sorted(blocks)))
            return
        for j in range(len(blocks)):
            blocks[j] |= atoms[i]
            grow(i + 1, blocks)
            blocks[j] &= ~atoms[i]
        blocks.append(atoms[i])
        grow(i + 1, blocks)
        blocks.pop()

    grow(0, [])
    return out


def minimal_open_covers(X: FiniteSpace) -> list[frozenset]:
    """Every open cover that has no proper subcover."""
    found = set()

    def grow(chosen, covered):
        if covered == X.full:
            if all((u & ~_union(chosen - {u})) for u in chosen):
                found.add(frozenset(chosen))
            return
        x = (~covered & X.full & -(~covered & X.full)).bit_length() - 1
        for u in X.sorted_opens:
            if u >> x & 1:
                grow(chosen | {u}, covered | u)

    if X.n == 0:
        return [frozenset()]
    grow(frozenset(), 0)
    return sorted(found, key=lambda c: sorted(c))


def _union(masks: Iterable[int]) -> int:
    acc = 0
    for m in masks:
        acc |= m
    return acc


@dataclass(frozen=True)
class SpacePropertyReport:
    hausdorff: bool
    normal: bool
    ultranormal: bool
    zero_dimensional: bool
    strongly_zero_dimensional: bool
    ultraparacompact: bool
    completely_regular: bool
    witness: dict = field(default_factory=dict, compare=False)


def _disjoint_closed_pairs(X: FiniteSpace):
    for r, s in product(X.closed, repeat=2):
        if not r & s:
            yield r, s


def check_space_properties(X: FiniteSpace) -> SpacePropertyReport:
    w = {}
    nb = X.neighbourhood
    hausdorff = all(not nb[x] & nb[y] for x, y in combinations(range(X.n), 2))

    normal = True
    for r, s in _disjoint_closed_pairs(X):
        if X.smallest_open(r) & X.smallest_open(s):
            normal = False
            w["normal"] = [X.labels_of(r), X.labels_of(s)]
            break

    ultranormal = True
    for r, s in _disjoint_closed_pairs(X):
        if not any(c & r == r and not c & s for c in X.clopens):
            ultranormal = False
            w["ultranormal"] = [X.labels_of(r), X.labels_of(s)]
            break

    zero_dimensional = True
    for u in X.sorted_opens:
        if _union(c for c in X.clopens if c & u == c) != u:
            zero_dimensional = False
            w["zero_dimensional"] = X.labels_of(u)
            break

    comps = X.components
    completely_regular = all(
        not (comp & f)
        for f in X.closed
        for x in range(X.n)
        if not f >> x & 1
        for comp in comps
        if comp >> x & 1
    )
    # Continuous real functions are constant on components, and every union of
    # components is clopen, so zero sets are exactly unions of components.
    zero_sets = [_union(c for i, c in enumerate(comps) if k >> i & 1) for k in range(1 << len(comps))]
    szd_condition = True
    for z1, z2 in product(zero_sets, repeat=2):
        if z1 & z2:
            continue
        if not any(c & z1 == z1 and not c & z2 for c in X.clopens):
            szd_condition = False
            w["strongly_zero_dimensional"] = [X.labels_of(z1), X.labels_of(z2)]
            break

    parts = clopen_partitions(X)
    ultraparacompact = True
    for cover in minimal_open_covers(X):
        if not any(all(any(b & u == b for u in cover) for b in p) for p in parts):
            ultraparacompact = False
            w["ultraparacompact"] = [X.labels_of(u) for u in sorted(cover)]
            break

    return SpacePropertyReport(
        hausdorff=hausdorff,
        normal=normal,
        ultranormal=ultranormal,
        zero_dimensional=zero_dimensional,
        strongly_zero_dimensional=completely_regular and szd_condition,
        ultraparacompact=ultraparacompact,
        completely_regular=completely_regular,
        witness=w,
    )


# -- constructions on spaces --------------------------------------------------


def product_space(X: FiniteSpace, Y: FiniteSpace) -> FiniteSpace:
    """Product topology; point ``(x, y)`` gets index ``x * |Y| + y``."""
    points = tuple(f"({p},{q})" for p in X.points for q in Y.points)

    def rect(u, v):
        return _union(1 << (i * Y.n + j) for i in bits(u) for j in bits(v))

    opens = {0}
    for u, v in product(X.sorted_opens, Y.sorted_opens):
        r = rect(u, v)
        opens |= {o | r for o in opens}
    return space_from_masks(points, opens)


def subspace(X: FiniteSpace, labels: Iterable) -> FiniteSpace:
    S = X.mask_of(labels)
    idx = bits(S)

    def squeeze(u):
        return sum(1 << k for k, i in enumerate(idx) if u >> i & 1)

    return space_from_masks(tuple(X.points[i] for i in idx), {squeeze(u & S) for u in X.opens})


@dataclass(frozen=True)
class ShrinkResult:
    shrunk: tuple
    disjoint: tuple


def shrink_point_finite_cover(X: FiniteSpace, cover: Sequence[int], report=None) -> ShrinkResult:
    """Shrink an open cover to a clopen cover, then disjointify it.

    Indices are processed in input order. At step ``a`` the points covered by
    no other current member form a closed set inside ``cover[a]``; the new
    member is the smallest clopen set containing them (nonempty whenever
    ``cover[a]`` is).
    """
    cover = list(cover)
    for u in cover:
        if u not in X.opens:
            raise InvalidInstance("not_a_cover", "member is not open", X.labels_of(u))
    if _union(cover) != X.full:
        raise InvalidInstance("not_a_cover", "members miss points", X.labels_of(X.full & ~_union(cover)))
    report = report or check_space_properties(X)
    if not (report.ultranormal and report.zero_dimensional):
        raise InvalidInstance("not_ultranormal", "shrinking needs an ultranormal space")
    current = list(cover)
    for a, u in enumerate(cover):
        if not u:
            continue
        others = _union(current[:a]) | _union(current[a + 1:])
        forced = X.full & ~others
        v = X.smallest_clopen(forced if forced else 1 << bits(u)[0])
        if v & ~u:
            raise InvariantBreach(f"clopen {X.labels_of(v)} escapes {X.labels_of(u)}")
        current[a] = v
    seen, disjoint = 0, []
    for v in current:
        disjoint.append(v & ~seen)
        seen |= v
    return ShrinkResult(tuple(current), tuple(disjoint))
