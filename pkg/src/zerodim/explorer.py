"""Exhaustive enumeration, classification and implication checking.

Space flags ``ultranormal`` and ``ultraparacompact`` in a classification are
the literal predicates combined with ``zero_dimensional``; the literal values
are kept under ``raw_ultranormal`` / ``raw_ultraparacompact``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, permutations, product
from typing import Callable, Iterable, Iterator, Sequence

from .errors import InvalidInstance
from .frames import (
    FiniteFrame,
    FiniteSpace,
    bits,
    check_frame_properties,
    check_space_properties,
    clopen_partitions,
    frame_from_order,
    open_set_frame,
    popcount,
    product_space,
    space_from_masks,
    subspace,
)

MAX_TOPOLOGY_POINTS = 4
MAX_LATTICE_SIZE = 10

SPACE_PROPERTIES = (
    "hausdorff",
    "normal",
    "ultranormal",
    "zero_dimensional",
    "strongly_zero_dimensional",
    "ultraparacompact",
    "completely_regular",
    "raw_ultranormal",
    "raw_ultraparacompact",
)
FRAME_PROPERTIES = (
    "zero_dimensional",
    "ultranormal",
    "ultraparacompact",
    "boolean",
    "raw_ultranormal",
    "raw_ultraparacompact",
)


# -- topologies ---------------------------------------------------------------


def _check_points(n: int) -> None:
    if not 1 <= n <= MAX_TOPOLOGY_POINTS:
        raise InvalidInstance("out_of_range", f"n must be in 1..{MAX_TOPOLOGY_POINTS}", n)


def _preorders(n: int) -> Iterator[list[int]]:
    """Preorders as ``above[x]`` masks (reflexive, transitive)."""
    pairs = [(x, y) for x in range(n) for y in range(n) if x != y]
    for m in range(1 << len(pairs)):
        above = [1 << x for x in range(n)]
        for k, (x, y) in enumerate(pairs):
            if m >> k & 1:
                above[x] |= 1 << y
        if all(above[y] & ~above[x] == 0 for x in range(n) for y in bits(above[x])):
            yield above


def enumerate_topologies(n: int) -> Iterator[FiniteSpace]:
    """Every topology on points ``0..n-1``, once each, via up-sets of preorders."""
    _check_points(n)
    full = (1 << n) - 1
    for above in _preorders(n):
        opens = [u for u in range(full + 1) if all(above[x] & ~u == 0 for x in bits(u))]
        yield space_from_masks(tuple(range(n)), opens)


def count_topologies(n: int) -> int:
    return sum(1 for _ in enumerate_topologies(n))


def space_canonical_form(X: FiniteSpace) -> tuple[tuple, tuple]:
    """``(key, perm)``: the least sorted open-mask tuple over all relabelings,
    and the relabeling (old index -> new index) that attains it."""
    best, best_perm = None, None
    for perm in permutations(range(X.n)):
        key = tuple(sorted(sum(1 << perm[i] for i in bits(u)) for u in X.opens))
        if best is None or key < best:
            best, best_perm = key, perm
    return (X.n, best), best_perm


def canonical_topologies(max_n: int) -> list[FiniteSpace]:
    """One space per homeomorphism class for each ``n <= max_n``, in canonical order."""
    out = []
    for n in range(1, max_n + 1):
        seen = {}
        for X in enumerate_topologies(n):
            key, _ = space_canonical_form(X)
            seen.setdefault(key, space_from_masks(tuple(range(n)), key[1]))
        out.extend(seen[k] for k in sorted(seen))
    return out


# -- distributive lattices -----------------------------------------------------


def _linear_extensions(size: int, below: Sequence[int]) -> Iterator[list[int]]:
    """Orders listing each element after everything strictly below it."""
    order: list[int] = []

    def rec(placed):
        if len(order) == size:
            yield list(order)
            return
        for x in range(size):
            if not placed >> x & 1 and below[x] & ~placed == 0:
                order.append(x)
                yield from rec(placed | 1 << x)
                order.pop()

    yield from rec(0)


def frame_canonical_form(L: FiniteFrame) -> tuple[tuple, tuple]:
    """Least relabeled ``up`` tuple over order-preserving relabelings.

    Isomorphisms carry linear extensions to linear extensions, so minimizing
    over them alone is still an isomorphism invariant.
    """
    below = [sum(1 << y for y in range(L.size) if y != x and L.leq(y, x)) for x in range(L.size)]
    best, best_perm = None, None
    for order in _linear_extensions(L.size, below):
        perm = [0] * L.size
        for new, old in enumerate(order):
            perm[old] = new
        up = [0] * L.size
        for old in range(L.size):
            up[perm[old]] = sum(1 << perm[y] for y in range(L.size) if L.leq(old, y))
        key = tuple(up)
        if best is None or key < best:
            best, best_perm = key, tuple(perm)
    return (L.size, best), best_perm


def _frame_from_key(key) -> FiniteFrame:
    size, up = key
    return frame_from_order(size, [(x, y) for x in range(size) for y in bits(up[x])])


def _downset_lattice(k: int, below: Sequence[int], limit: int) -> list[int] | None:
    downs = []
    for m in range(1 << k):
        if all(below[x] & ~m == 0 for x in bits(m)):
            downs.append(m)
            if len(downs) > limit:
                return None
    return sorted(downs, key=lambda m: (popcount(m), m))


def _lattice_of(downs: list[int]) -> FiniteFrame:
    pairs = [(i, j) for i, a in enumerate(downs) for j, b in enumerate(downs) if a & ~b == 0]
    return frame_from_order(len(downs), pairs, labels=tuple(downs))


def enumerate_distributive_lattices(max_size: int) -> Iterator[FiniteFrame]:
    """One canonical representative per isomorphism class, sizes ``1..max_size``,
    built as down-set lattices of finite posets."""
    if not 1 <= max_size <= MAX_LATTICE_SIZE:
        raise InvalidInstance("out_of_range", f"max_size must be in 1..{MAX_LATTICE_SIZE}", max_size)
    found: dict = {}
    level = [[]]  # posets as strict-below masks; new elements are maximal
    while level:
        nxt, keys = [], set()
        for below in level:
            downs = _downset_lattice(len(below), below, max_size)
            if downs is None:
                continue
            key, _ = frame_canonical_form(_lattice_of(downs))
            if key in found or key in keys:
                continue
            keys.add(key)
            found[key] = True
            for d in downs:
                nxt.append(below + [d])
        level = nxt
    for key in sorted(found):
        yield _frame_from_key(key)


# -- ideal criteria on finite spaces -----------------------------------


def _ideals(elements: Sequence[int]) -> list[frozenset]:
    """All ideals of a finite set algebra (given as masks), found by closure search."""
    elements = sorted(elements)

    def close(s):
        s = set(s)
        while True:
            grown = {y for x in s for y in elements if y & ~x == 0} | {x | y for x in s for y in s}
            if grown <= s:
                return frozenset(s)
            s |= grown

    start = close({0})
    seen, stack = {start}, [start]
    while stack:
        I = stack.pop()
        for x in elements:
            if x not in I:
                J = close(I | {x})
                if J not in seen:
                    seen.add(J)
                    stack.append(J)
    return sorted(seen, key=lambda I: (len(I), sorted(I)))


def trace_ideals(X: FiniteSpace) -> list[frozenset]:
    """Ideals ``I`` of the clopen algebra with ``union(P & I)`` in ``I`` for every clopen partition ``P``."""
    parts = clopen_partitions(X)
    out = []
    for I in _ideals(X.clopens):
        if all(_union(b for b in P if b in I) in I for P in parts):
            out.append(I)
    return out


def _union(masks: Iterable[int]) -> int:
    acc = 0
    for m in masks:
        acc |= m
    return acc


def trace_ideal_criterion(X: FiniteSpace, zd: bool | None = None) -> bool:
    if zd is None:
        zd = check_space_properties(X).zero_dimensional
    if not zd:
        return False
    full = frozenset(X.clopens)
    return all(I == full for I in trace_ideals(X) if _union(I) == X.full)


def clopens_below(X: FiniteSpace, O: int) -> frozenset:
    return frozenset(c for c in X.clopens if c & ~O == 0)


def open_ideal_criterion(X: FiniteSpace, zd: bool | None = None) -> bool:
    if zd is None:
        zd = check_space_properties(X).zero_dimensional
    if not zd:
        return False
    shapes = {clopens_below(X, O) for O in X.opens}
    return all(I in shapes for I in trace_ideals(X))


@dataclass(frozen=True)
class BijectionReport:
    ok: bool
    reason: str = ""
    witness: object = None


def ideal_open_bijection(X: FiniteSpace) -> BijectionReport:
    """``O -> {clopen R : R <= O}`` should be a bijection from opens onto trace ideals."""
    ideals = set(trace_ideals(X))
    image = {}
    for O in X.sorted_opens:
        I = clopens_below(X, O)
        if I not in ideals:
            return BijectionReport(False, "image_not_trace_ideal", X.labels_of(O))
        if I in image:
            return BijectionReport(False, "not_injective", [X.labels_of(image[I]), X.labels_of(O)])
        image[I] = O
    missing = sorted((sorted(I) for I in ideals - set(image)))
    if missing:
        return BijectionReport(False, "not_surjective", missing[0])
    return BijectionReport(True)


def ultraparacompact_by_atoms(X: FiniteSpace) -> bool:
    """Literal ultraparacompactness, decided via the finest clopen partition.

    The clopen atoms refine every clopen partition, so they must refine every
    open cover; the cover by minimal neighbourhoods is the hardest case.
    """
    nb = X.neighbourhood
    return all(any(A & ~nb[x] == 0 for x in bits(A)) for A in X.clopen_atoms)


# -- classification --------------------------------------------------------------


@dataclass(frozen=True)
class ClassifiedInstance:
    instance: object
    properties: dict
    canonical_form: tuple
    isomorphism: tuple  # old index -> index in the canonical representative
    kind: str


def space_properties(X: FiniteSpace) -> dict:
    r = check_space_properties(X)
    return {
        "hausdorff": r.hausdorff,
        "normal": r.normal,
        "ultranormal": r.ultranormal and r.zero_dimensional,
        "zero_dimensional": r.zero_dimensional,
        "strongly_zero_dimensional": r.strongly_zero_dimensional,
        "ultraparacompact": r.ultraparacompact and r.zero_dimensional,
        "completely_regular": r.completely_regular,
        "raw_ultranormal": r.ultranormal,
        "raw_ultraparacompact": r.ultraparacompact,
    }


def frame_properties(L: FiniteFrame) -> dict:
    r = check_frame_properties(L)
    return {
        "zero_dimensional": r.zero_dimensional,
        "ultranormal": r.ultranormal and r.zero_dimensional,
        "ultraparacompact": r.ultraparacompact and r.zero_dimensional,
        "boolean": len(r.complemented) == L.size,
        "raw_ultranormal": r.ultranormal,
        "raw_ultraparacompact": r.ultraparacompact,
    }


def classify(instance) -> ClassifiedInstance:
    if isinstance(instance, FiniteSpace):
        key, perm = space_canonical_form(instance)
        return ClassifiedInstance(instance, space_properties(instance), key, perm, "space")
    if isinstance(instance, FiniteFrame):
        key, perm = frame_canonical_form(instance)
        return ClassifiedInstance(instance, frame_properties(instance), key, perm, "frame")
    raise InvalidInstance("unsupported_instance", type(instance).__name__)


def _instances(kind: str, bound: int) -> list:
    if kind == "spaces":
        return canonical_topologies(bound)
    if kind == "frames":
        return list(enumerate_distributive_lattices(bound))
    raise InvalidInstance("unknown_instance_class", kind, kind)


# -- implication registry ---------------------------------------------------------

THEOREM = "theorem"
FINITE_COLLAPSE = "finite_collapse"
NON_IMPLICATION = "non_implication"


@dataclass(frozen=True)
class Implication:
    name: str
    instance_class: str  # spaces | frames | space_pairs
    hypothesis: tuple
    conclusion: tuple
    kind: str = THEOREM
    biconditional: bool = False
    default_bound: int = 3


@dataclass(frozen=True)
class ImplicationReport:
    name: str
    instance_class: str
    bound: int
    kind: str
    status: str  # verified | verified (finite collapse) | refuted
    checked: int
    witness: object = None
    witness_properties: dict = field(default_factory=dict)

    @property
    def refuted(self) -> bool:
        return self.status == "refuted"


REGISTRY: tuple[Implication, ...] = (
    Implication("upc_implies_un", "spaces", ("ultraparacompact",), ("ultranormal",), default_bound=4),
    Implication("un_implies_zd", "spaces", ("ultranormal",), ("zero_dimensional",), default_bound=4),
    Implication("un_implies_normal", "spaces", ("ultranormal",), ("normal",), default_bound=4),
    Implication("un_iff_normal_and_szd", "spaces", ("ultranormal",), ("normal", "strongly_zero_dimensional"),
                biconditional=True),
    Implication("upc_iff_trace_ideal_criterion", "spaces", ("ultraparacompact",), ("trace_ideal_criterion",),
                biconditional=True),
    Implication("upc_iff_open_ideal_criterion", "spaces", ("ultraparacompact",), ("open_ideal_criterion",),
                biconditional=True),
    Implication("open_hereditary_implies_hereditary", "spaces", ("open_hereditary_upc",), ("hereditary_upc",)),
    Implication("product_upc_times_compact_zd", "space_pairs", ("x_ultraparacompact", "y_zero_dimensional"),
                ("product_ultraparacompact",), default_bound=3),
    Implication("zd_implies_upc", "spaces", ("zero_dimensional",), ("ultraparacompact",), FINITE_COLLAPSE,
                default_bound=4),
    Implication("normal_implies_un", "spaces", ("normal",), ("ultranormal",), NON_IMPLICATION, default_bound=2),
    Implication("frame_upc_implies_un", "frames", ("ultraparacompact",), ("ultranormal",), default_bound=8),
    Implication("frame_un_implies_zd", "frames", ("ultranormal",), ("zero_dimensional",), default_bound=8),
    Implication("frame_zd_implies_upc", "frames", ("zero_dimensional",), ("ultraparacompact",), FINITE_COLLAPSE,
                default_bound=8),
)

EXTRA_SPACE_FLAGS = ("trace_ideal_criterion", "open_ideal_criterion", "open_hereditary_upc", "hereditary_upc")


def _subspace_upc(X: FiniteSpace, masks: Iterable[int]) -> bool:
    for m in masks:
        if not m:
            continue
        S = subspace(X, X.labels_of(m))
        if not space_properties(S)["ultraparacompact"]:
            return False
    return True


def extended_space_properties(X: FiniteSpace, needed: Iterable[str] = EXTRA_SPACE_FLAGS) -> dict:
    props = space_properties(X)
    needed = set(needed)
    zd = props["zero_dimensional"]
    if "trace_ideal_criterion" in needed:
        props["trace_ideal_criterion"] = trace_ideal_criterion(X, zd)
    if "open_ideal_criterion" in needed:
        props["open_ideal_criterion"] = open_ideal_criterion(X, zd)
    if "open_hereditary_upc" in needed:
        props["open_hereditary_upc"] = _subspace_upc(X, X.sorted_opens)
    if "hereditary_upc" in needed:
        props["hereditary_upc"] = _subspace_upc(X, range(1, X.full + 1))
    return props


def pair_properties(X: FiniteSpace, Y: FiniteSpace, px: dict, py: dict) -> dict:
    props = {"x_" + k: v for k, v in px.items()} | {"y_" + k: v for k, v in py.items()}
    if px["ultraparacompact"] and py["zero_dimensional"]:
        P = product_space(X, Y)
        # the product of two zero-dimensional spaces is zero-dimensional; the
        # literal check is done through the clopen atoms (see ultraparacompact_by_atoms)
        pzd = check_space_properties(P).zero_dimensional if P.n <= 4 else _zero_dimensional(P)
        props["product_ultraparacompact"] = pzd and ultraparacompact_by_atoms(P)
    return props


def _zero_dimensional(X: FiniteSpace) -> bool:
    return all(_union(c for c in X.clopens if c & ~u == 0) == u for u in X.opens)


def _holds(props: dict, names: Iterable[str]) -> bool:
    return all(props[n] for n in names)


def _status(imp: Implication, refuted: bool) -> str:
    if refuted:
        return "refuted"
    return "verified (finite collapse)" if imp.kind == FINITE_COLLAPSE else "verified"


def _pairs(bound: int):
    spaces = [(X, space_properties(X)) for X in all_topologies(bound)]
    for (X, px), (Y, py) in product(spaces, repeat=2):
        yield (X, Y), px, py


def verify_implication(imp: Implication, bound: int | None = None, cache: dict | None = None) -> ImplicationReport:
    bound = imp.default_bound if bound is None else bound
    cache = {} if cache is None else cache
    needed = [f for f in imp.hypothesis + imp.conclusion]
    checked = 0
    if imp.instance_class == "space_pairs":
        for inst, px, py in _pairs(bound):
            props = pair_properties(*inst, px, py)
            checked += 1
            if not _check(imp, props):
                return ImplicationReport(imp.name, imp.instance_class, bound, imp.kind, "refuted", checked,
                                         inst, _visible(props, needed))
        return ImplicationReport(imp.name, imp.instance_class, bound, imp.kind, _status(imp, False), checked)
    for inst in _cached_instances(imp.instance_class, bound, cache):
        if imp.instance_class == "spaces":
            props = _cached_props(inst, cache, needed)
        else:
            props = cache.setdefault(("fp", _key(inst)), frame_properties(inst))
        checked += 1
        if not _check(imp, props):
            return ImplicationReport(imp.name, imp.instance_class, bound, imp.kind, "refuted", checked,
                                     inst, _visible(props, needed))
    return ImplicationReport(imp.name, imp.instance_class, bound, imp.kind, _status(imp, False), checked)


def _check(imp: Implication, props: dict) -> bool:
    hyp = _holds(props, imp.hypothesis)
    if not hyp and not imp.biconditional:
        return True
    return hyp == _holds(props, imp.conclusion)


def _visible(props, needed):
    return {k: props[k] for k in needed if k in props}


def _key(inst):
    if isinstance(inst, FiniteSpace):
        return ("s", inst.n, tuple(sorted(inst.opens)))
    return ("f", inst.size, inst.up)


def all_topologies(max_n: int) -> list[FiniteSpace]:
    """Every labeled topology on ``1..max_n`` points."""
    return [X for n in range(1, max_n + 1) for X in enumerate_topologies(n)]


def _cached_instances(kind, bound, cache):
    # implications run over every labeled instance, not just class representatives
    k = ("inst", kind, bound)
    if k not in cache:
        cache[k] = all_topologies(bound) if kind == "spaces" else _instances(kind, bound)
    return cache[k]


def _cached_props(X, cache, needed):
    k = ("sp", _key(X))
    props = cache.setdefault(k, space_properties(X))
    missing = [f for f in needed if f not in props]
    if missing:
        props.update({f: v for f, v in extended_space_properties(X, missing).items() if f in missing})
    return props


def verify_implications(bounds: dict | None = None, names: Iterable[str] | None = None) -> list[ImplicationReport]:
    """Run registered implications; ``bounds`` maps instance class to a bound
    overriding each entry's default."""
    bounds = bounds or {}
    cache: dict = {}
    chosen = REGISTRY if names is None else [registered(n) for n in names]
    return [verify_implication(imp, bounds.get(imp.instance_class), cache) for imp in chosen]


def registered(name: str) -> Implication:
    for imp in REGISTRY:
        if imp.name == name:
            return imp
    raise InvalidInstance("unknown_implication", name, name)


def expected_status(imp: Implication) -> str:
    if imp.kind == NON_IMPLICATION:
        return "refuted"
    return _status(imp, False)


# -- counterexample search ----------------------------------------------------------


@dataclass(frozen=True)
class SearchResult:
    found: bool
    instance: object = None
    properties: dict = field(default_factory=dict)
    checked: int = 0
    bound: int = 0
    instance_class: str = "spaces"

    @property
    def exhausted(self) -> bool:
        return not self.found


def search_separation(
    satisfy: Sequence[str] = (),
    violate: Sequence[str] = (),
    instance_class: str = "spaces",
    bound: int = 3,
) -> SearchResult:
    vocab = SPACE_PROPERTIES if instance_class == "spaces" else FRAME_PROPERTIES
    for name in list(satisfy) + list(violate):
        if name not in vocab:
            raise InvalidInstance("unknown_property", f"{name!r} is not a {instance_class} property", name)
    props_of: Callable = space_properties if instance_class == "spaces" else frame_properties
    checked = 0
    for inst in _instances(instance_class, bound):
        props = props_of(inst)
        checked += 1
        if all(props[s] for s in satisfy) and not any(props[v] for v in violate):
            return SearchResult(True, inst, props, checked, bound, instance_class)
    return SearchResult(False, None, {}, checked, bound, instance_class)


def agreement_space_frame(X: FiniteSpace) -> dict:
    """Literal space flags against the literal flags of the open-set frame;
    returns the disagreeing flag names (empty when they agree)."""
    s = check_space_properties(X)
    f = check_frame_properties(open_set_frame(X))
    out = {}
    for name in ("zero_dimensional", "ultranormal", "ultraparacompact"):
        if getattr(s, name) != getattr(f, name):
            out[name] = (getattr(s, name), getattr(f, name))
    return out
