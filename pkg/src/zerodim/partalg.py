"""Boolean partition algebras: filters of partitions and their frames.

Finite carriers are handled extensionally. A carrier may be a proper Boolean
subalgebra of the ambient algebra (``{0}`` plus the union of a filter); its
elements are kept as bit-vectors of the ambient algebra.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Iterable, Mapping

from .boolalg import (
    DEFAULT_SUPPORT_BOUND,
    BooleanAlgebra,
    Element,
    Partition,
    make_partition,
    partition_meet,
    refines,
    require_partition,
    validate_partition,
)
from .errors import InvalidInstance
from .frames import FiniteFrame, bits, frame_from_order, popcount


class Carrier:
    """A finite Boolean subalgebra, given by the bit-vectors of its elements."""

    def __init__(self, algebra: BooleanAlgebra, elements: Iterable[int] | None = None):
        self.algebra = algebra
        self.elements = frozenset(range(algebra.size) if elements is None else elements)
        nonzero = [x for x in sorted(self.elements) if x]
        self.atoms = tuple(x for x in nonzero if not any(y != x and y & x == y for y in nonzero))

    def partitions(self) -> list[frozenset]:
        out = []

        def grow(i, blocks):
            if i == len(self.atoms):
                out.append(frozenset(blocks))
                return
            for j in range(len(blocks)):
                old = blocks[j]
                blocks[j] = old | self.atoms[i]
                grow(i + 1, blocks)
                blocks[j] = old
            blocks.append(self.atoms[i])
            grow(i + 1, blocks)
            blocks.pop()

        grow(0, [])
        return sorted(out, key=lambda p: sorted(p))

    def partitions_of(self, a: int) -> list[frozenset]:
        """Partitions of the element ``a`` (nonzero disjoint carrier elements joining to ``a``)."""
        below = [t for t in self.atoms if t & a == t]
        return [p for p in Carrier(self.algebra, _span(below)).partitions()]


def _span(atoms: list[int]) -> set[int]:
    out = {0}
    for t in atoms:
        out |= {x | t for x in out}
    return out


def _refines(p: Iterable[int], q: Iterable[int]) -> bool:
    q = list(q)
    return all(any(a & b == a for b in q) for a in p)


def _meet(p: Iterable[int], q: Iterable[int]) -> frozenset:
    return frozenset(a & b for a in p for b in q) - {0}


def _to_bits(p: Partition) -> frozenset:
    return frozenset(x.bits for x in p.explicit)


def _to_partition(algebra: BooleanAlgebra, p: Iterable[int]) -> Partition:
    return make_partition(algebra, (algebra.element(b) for b in p))


@dataclass(frozen=True)
class PartitionFilter:
    """A filter of partitions: explicit ``members`` on finite carriers, or a
    meet-closed ``base`` plus upward closure (membership by refinement)."""

    algebra: BooleanAlgebra = field(repr=False)
    base: tuple
    members: frozenset | None = None

    def __contains__(self, q: Partition) -> bool:
        if self.members is not None:
            return q in self.members
        return any(refines(p, q, self.algebra) for p in self.base)

    def __iter__(self):
        if self.members is None:
            raise TypeError("filter on the fincof algebra is infinite; iterate .base")
        return iter(sorted(self.members, key=Partition.sort_key))

    def __len__(self):
        if self.members is None:
            raise TypeError("filter on the fincof algebra is infinite")
        return len(self.members)


def _meet_closure(parts: list[Partition]) -> list[Partition]:
    closed = list(dict.fromkeys(parts))
    grew = True
    while grew:
        grew = False
        for p, q in combinations(list(closed), 2):
            m = partition_meet(p, q)
            if m not in closed:
                closed.append(m)
                grew = True
    return sorted(closed, key=Partition.sort_key)


def generate_partition_filter(algebra: BooleanAlgebra, generators: Iterable[Partition]) -> PartitionFilter:
    generators = list(generators)
    for p in generators:
        require_partition(algebra, p)
    if not generators:
        # the top of the semilattice; empty on the one-element algebra
        generators = [make_partition(algebra, [algebra.top] if algebra.top != algebra.bottom else [])]
    base = _meet_closure(generators)
    if not algebra.is_finite:
        return PartitionFilter(algebra, tuple(base))
    carrier = Carrier(algebra)
    base_bits = [_to_bits(p) for p in base]
    members = {
        _to_partition(algebra, q)
        for q in carrier.partitions()
        if any(_refines(p, q) for p in base_bits)
    }
    return PartitionFilter(algebra, tuple(base), frozenset(members))


@dataclass(frozen=True)
class BooleanPartitionAlgebra:
    algebra: BooleanAlgebra
    filter: PartitionFilter
    carrier: frozenset | None = None

    def carrier_view(self) -> Carrier:
        return Carrier(self.algebra, self.carrier)


def _as_filter(algebra, filt) -> PartitionFilter:
    if isinstance(filt, PartitionFilter):
        return filt
    return PartitionFilter(algebra, (), frozenset(filt))


@dataclass(frozen=True)
class BPAReport:
    is_bpa: bool
    subcomplete: bool
    locally_refinable: bool | None
    witness: dict = field(default_factory=dict)


def validate_bpa(
    algebra: BooleanAlgebra,
    filt,
    carrier: Iterable[int] | None = None,
    support_bound: int = DEFAULT_SUPPORT_BOUND,
) -> BPAReport:
    filt = _as_filter(algebra, filt)
    if not algebra.is_finite:
        return _validate_fincof_bpa(algebra, filt, support_bound)
    C = Carrier(algebra, carrier)
    F = {_to_bits(p) for p in filt.members}
    witness = {}
    all_parts = C.partitions()
    for p in sorted(filt.members, key=Partition.sort_key):
        rep = validate_partition(algebra, p)
        if not rep.is_partition or not _to_bits(p) <= C.elements:
            witness["not_a_partition"] = p
            break
    if not F:
        witness["empty"] = True
    for p, q in combinations(sorted(F, key=sorted), 2):
        if _meet(p, q) not in F:
            witness.setdefault("not_meet_closed", [p, q])
    for p in sorted(F, key=sorted):
        for q in all_parts:
            if _refines(p, q) and q not in F:
                witness.setdefault("not_upward_closed", [p, q])
    covered = {0}.union(*F) if F else {0}
    missing = sorted(C.elements - covered)
    if missing:
        witness["carrier_not_covered"] = algebra.element(missing[0])
    is_bpa = not witness
    subcomplete = all(validate_partition(algebra, p).is_subcomplete for p in filt.members)
    lr = _locally_refinable(C, F, witness)
    return BPAReport(is_bpa, subcomplete, lr, _readable(algebra, witness))


def _locally_refinable(C: Carrier, F: set, witness: dict) -> bool:
    full = max(C.elements)
    for p in sorted(F, key=sorted):
        if len(p) <= 1:
            continue
        options = []
        for a in sorted(p):
            comp = full & ~a
            options.append([pa for pa in C.partitions_of(a) if (pa | {comp}) - {0} in F])
        for choice in product(*options):
            glued = frozenset().union(*choice)
            if glued not in F:
                witness["not_locally_refinable"] = [p, list(choice)]
                return False
    return True


def _readable(algebra, witness):
    def conv(v):
        if isinstance(v, frozenset):
            return _to_partition(algebra, v)
        if isinstance(v, list):
            return [conv(x) for x in v]
        return v

    return {k: conv(v) for k, v in witness.items()}


def _validate_fincof_bpa(algebra, filt: PartitionFilter, bound: int) -> BPAReport:
    witness = {}
    for p, q in combinations(filt.base, 2):
        if partition_meet(p, q) not in filt:
            witness.setdefault("not_meet_closed", [p, q])
    for b in algebra.elements(bound):
        if b in (algebra.bottom, algebra.top):
            continue
        if make_partition(algebra, [b, ~b]) not in filt:
            witness["carrier_not_covered"] = b
            break
    subcomplete = all(validate_partition(algebra, p).is_subcomplete for p in filt.base)
    return BPAReport(not witness, subcomplete, None, witness)


# -- homomorphisms ------------------------------------------------------------


@dataclass(frozen=True)
class PartitionMap:
    source: BooleanPartitionAlgebra
    target: BooleanPartitionAlgebra
    mapping: Mapping = field(default_factory=dict)


@dataclass(frozen=True)
class HomomorphismReport:
    ok: bool
    reason: str = ""
    witness: object = None

    def __bool__(self):
        return self.ok


def is_partition_homomorphism(phi: PartitionMap) -> HomomorphismReport:
    src, dst = phi.source, phi.target
    S, T = src.carrier_view(), dst.carrier_view()
    f = {int(k): int(v) for k, v in phi.mapping.items()}
    if set(f) != set(S.elements):
        return HomomorphismReport(False, "domain_mismatch", sorted(set(S.elements) ^ set(f)))
    if not set(f.values()) <= T.elements:
        return HomomorphismReport(False, "image_outside_carrier", sorted(set(f.values()) - T.elements))
    s_top, t_top = src.algebra.full_mask, dst.algebra.full_mask
    if f[0] != 0 or f[s_top] != t_top:
        return HomomorphismReport(False, "bounds_not_preserved")
    for x in sorted(S.elements):
        if f[s_top & ~x] != t_top & ~f[x]:
            return HomomorphismReport(False, "complement_not_preserved", x)
        for y in sorted(S.elements):
            if f[x & y] != f[x] & f[y] or f[x | y] != f[x] | f[y]:
                return HomomorphismReport(False, "lattice_not_preserved", (x, y))
    for p in src.filter:
        image = {f[x.bits] for x in p.explicit} - {0}
        if _to_partition(dst.algebra, image) not in dst.filter:
            return HomomorphismReport(False, "image_not_in_filter", p)
    return HomomorphismReport(True)


def compose(g: PartitionMap, f: PartitionMap) -> PartitionMap:
    """``g`` after ``f``."""
    return PartitionMap(f.source, g.target, {x: g.mapping[y] for x, y in f.mapping.items()})


def boolean_homomorphisms(source: BooleanPartitionAlgebra, target: BooleanPartitionAlgebra) -> list[dict]:
    """All Boolean homomorphisms between two finite carriers.

    A homomorphism is fixed by where it sends the source atoms: pairwise
    disjoint target elements joining to the top (zero allowed).
    """
    S, T = source.carrier_view(), target.carrier_view()
    top = target.algebra.full_mask
    out = []
    for images in product(sorted(T.elements), repeat=len(S.atoms)):
        if any(a & b for a, b in combinations(images, 2)):
            continue
        if (sum(images) if images else 0) != top and not (not images and top == 0):
            continue
        f = {x: sum(img for t, img in zip(S.atoms, images) if t & x == t) for x in sorted(S.elements)}
        out.append(f)
    return out


# -- restriction and the induced frame ----------------------------------------


def restriction_bpa(algebra: BooleanAlgebra, filt) -> BooleanPartitionAlgebra:
    filt = _as_filter(algebra, filt)
    if not algebra.is_finite:
        raise InvalidInstance("fincof_not_materialized", "restriction needs a finite carrier")
    carrier = {0}
    for p in filt.members:
        carrier |= _to_bits(p)
    top = algebra.full_mask
    for x in sorted(carrier):
        if top & ~x not in carrier:
            raise InvalidInstance("carrier_not_closed", "complement", [x])
        for y in sorted(carrier):
            if x & y not in carrier or x | y not in carrier:
                raise InvalidInstance("carrier_not_closed", "meet/join", [x, y])
    return BooleanPartitionAlgebra(algebra, filt, frozenset(carrier))


def bpa_to_frame(bpa: BooleanPartitionAlgebra) -> FiniteFrame:
    """Ideals ``I`` of the carrier with ``join(p & I)`` in ``I`` for every ``p`` in
    the filter, ordered by inclusion. Labels are the ideals as element lists."""
    alg = bpa.algebra
    if not alg.is_finite:
        raise InvalidInstance("precondition", "bpa_to_frame needs a finite carrier")
    report = validate_bpa(alg, bpa.filter, bpa.carrier)
    if not (report.is_bpa and report.subcomplete):
        raise InvalidInstance("precondition", "not a subcomplete Boolean partition algebra", report.witness)
    C = bpa.carrier_view()
    elems = sorted(C.elements)
    F = [_to_bits(p) for p in bpa.filter]
    ideals = []
    for m in range(1 << len(elems)):
        I = {elems[i] for i in bits(m)}
        if 0 not in I:
            continue
        if any(y & x == y and y not in I for x in I for y in elems):
            continue
        if any(x | y not in I for x in I for y in I):
            continue
        if all(_join(p & I) in I for p in F):
            ideals.append(frozenset(I))
    ideals.sort(key=lambda I: (len(I), sorted(I)))
    pairs = [(i, j) for i, a in enumerate(ideals) for j, b in enumerate(ideals) if a <= b]
    return frame_from_order(len(ideals), pairs, labels=tuple(tuple(sorted(I)) for I in ideals))


def _join(xs: Iterable[int]) -> int:
    acc = 0
    for x in xs:
        acc |= x
    return acc
