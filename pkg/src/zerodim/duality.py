"""Boolean admissibility systems and Boolean based frames.

On a finite algebra with ``k`` atoms, elements are the integers
``0 .. 2**k - 1`` (their bit-vectors) and a *subset* of the algebra is a
bitmask over those integers ("family mask"). Families of the fincof algebra
are :class:`~zerodim.boolalg.Family` values, decided by the two named
families only.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import permutations, product
from typing import Iterable

from .boolalg import (
    FINITE_SETS_IDEAL,
    PRINCIPAL,
    BooleanAlgebra,
    Element,
    Family,
    IdealDescription,
    SingletonBlock,
    ALL_SINGLETONS,
    EVEN_SINGLETONS,
    ODD_SINGLETONS,
    DEFAULT_SUPPORT_BOUND,
    as_family,
    disjointify,
    lub,
    make_algebra,
    refines,
    sorted_elements,
    validate_ideal,
)
from .errors import InvalidInstance
from .frames import FiniteFrame, bits, check_frame_properties, frame_from_order, popcount

ALL_WITH_LUB = "all_with_lub"
FINITELY_GENERATED = "finitely_generated"
EXPLICIT = "explicit"
DEFAULT_SEED = 1
DEFAULT_SAMPLES = 500
MAX_DUALITY_ATOMS = 4


def family_mask(xs: Iterable) -> int:
    """Family mask of a collection of finite-algebra elements (or their bits)."""
    m = 0
    for x in xs:
        m |= 1 << (x.bits if isinstance(x, Element) else x)
    return m


class FiniteTables:
    """Join table of all subsets and the upset of each element."""

    def __init__(self, algebra: BooleanAlgebra):
        self.algebra = algebra
        self.n = algebra.size
        self.up = [sum(1 << y for y in range(self.n) if x & y == x) for x in range(self.n)]
        self.down = [sum(1 << y for y in range(self.n) if x & y == y) for x in range(self.n)]
        sj = [0] * (1 << self.n)
        for m in range(1, 1 << self.n):
            low = m & -m
            sj[m] = sj[m ^ low] | (low.bit_length() - 1)
        self.subset_join = sj

    def refines(self, r_mask: int, s_mask: int) -> bool:
        return all(self.up[r] & s_mask for r in bits(r_mask))

    def meet_with(self, a: int, r_mask: int) -> int:
        return family_mask(a & r for r in bits(r_mask))

    def pairwise_disjoint(self, mask: int) -> bool:
        members = bits(mask)
        return all(not (a & b) for i, a in enumerate(members) for b in members[i + 1:])


@dataclass(frozen=True)
class AdmissibilitySystem:
    algebra: BooleanAlgebra
    family: str
    explicit: frozenset = field(default=frozenset(), repr=False)

    def admits(self, R) -> bool:
        if self.algebra.is_finite:
            return _to_mask(self.algebra, R) in self.explicit
        fam = as_family(self.algebra, R)
        v = lub(self.algebra, fam)
        if v is None:
            return False
        if self.family == ALL_WITH_LUB or not fam.blocks:
            return True
        return self.algebra.join_all(fam.members).cofinite

    @property
    def is_full(self) -> bool:
        return self.algebra.is_finite and len(self.explicit) == 1 << self.algebra.size

    def members(self) -> list[frozenset]:
        """Finite carriers: the admissible subsets as sets of elements."""
        return [
            frozenset(self.algebra.element(b) for b in bits(m)) for m in sorted(self.explicit)
        ]


def _to_mask(algebra: BooleanAlgebra, R) -> int:
    if isinstance(R, int):
        return R
    if isinstance(R, Family):
        R = R.members
    algebra._check(*[x for x in R if isinstance(x, Element)])
    return family_mask(R)


def make_admissibility(algebra: BooleanAlgebra, family, check: bool = True) -> AdmissibilitySystem:
    """Build a system from ``all_with_lub``, ``finitely_generated`` or an
    explicit iterable of element sets (finite carriers only)."""
    if algebra.is_finite and algebra.atom_count > MAX_DUALITY_ATOMS:
        raise InvalidInstance("too_large", f"admissibility systems support <= {MAX_DUALITY_ATOMS} atoms")
    if family in (ALL_WITH_LUB, FINITELY_GENERATED):
        if algebra.is_finite:
            # every subset of a finite algebra has a lub and is finite
            return AdmissibilitySystem(algebra, family, frozenset(range(1 << (1 << algebra.atom_count))))
        return AdmissibilitySystem(algebra, family)
    if not algebra.is_finite:
        raise InvalidInstance("explicit_family_on_fincof", "fincof takes only named families")
    if isinstance(family, str):
        raise InvalidInstance("unknown_family", family)
    sys = AdmissibilitySystem(algebra, EXPLICIT, frozenset(_to_mask(algebra, R) for R in family))
    if check:
        report = check_admissibility_axioms(sys)
        bad = next((i for i in (1, 2, 3, 4) if not report.axioms[i]), None)
        if bad is not None:
            raise InvalidInstance("axiom_violated", f"axiom {bad}", [bad, report.witnesses[bad]])
    return sys


# -- axioms -------------------------------------------------------------------


@dataclass(frozen=True)
class AxiomReport:
    axioms: dict
    witnesses: dict
    mode: str
    seed: int | None = None
    samples: int | None = None
    checked: dict = field(default_factory=dict)


def _members_list(algebra, mask):
    return [algebra.element(b) for b in bits(mask)]


def check_admissibility_axioms(
    sys: AdmissibilitySystem,
    samples: int = DEFAULT_SAMPLES,
    seed: int = DEFAULT_SEED,
    support_bound: int = DEFAULT_SUPPORT_BOUND,
) -> AxiomReport:
    if sys.algebra.is_finite:
        return _finite_axioms(sys)
    return _sampled_axioms(sys, samples, seed, support_bound)


def _finite_axioms(sys: AdmissibilitySystem) -> AxiomReport:
    alg = sys.algebra
    T = FiniteTables(alg)
    fam = sys.explicit
    nsub = 1 << T.n
    ok = {1: True, 2: True, 3: True, 4: True}
    wit = {}
    missing = next((m for m in range(nsub) if m not in fam), None)
    if missing is not None:
        ok[1], wit[1] = False, [_members_list(alg, missing)]
    if sys.is_full:
        # every conclusion of axioms ii-iv is a subset, hence admissible
        return AxiomReport(ok, wit, "exhaustive")
    ordered = sorted(fam)
    for r in ordered:
        below = T.down[T.subset_join[r]]
        s = below
        while True:
            if T.refines(r, s) and s not in fam:
                ok[2], wit[2] = False, [_members_list(alg, r), _members_list(alg, s)]
                break
            if s == 0:
                break
            s = (s - 1) & below
        if not ok[2]:
            break
    by_join: dict[int, list[int]] = {}
    for m in ordered:
        by_join.setdefault(T.subset_join[m], []).append(m)
    for r in ordered:
        reach = {0}
        for x in bits(r):
            reach = {u | c for u in reach for c in by_join.get(x, [])}
        bad = next((u for u in sorted(reach) if u not in fam), None)
        if bad is not None:
            ok[3], wit[3] = False, [_members_list(alg, r), _members_list(alg, bad)]
            break
    for r in ordered:
        bad = next((a for a in range(T.n) if T.meet_with(a, r) not in fam), None)
        if bad is not None:
            ok[4] = False
            wit[4] = [_members_list(alg, r), alg.element(bad)]
            break
    return AxiomReport(ok, wit, "exhaustive")


def random_element(rng: random.Random, algebra: BooleanAlgebra, bound: int) -> Element:
    support = [i for i in range(bound) if rng.random() < 0.35]
    return algebra.cofinite(support) if rng.random() < 0.5 else algebra.finite(support)


def random_family(rng: random.Random, algebra: BooleanAlgebra, bound: int, block_chance=0.4) -> Family:
    members = frozenset(random_element(rng, algebra, bound) for _ in range(rng.randint(0, 4)))
    blocks = ()
    if rng.random() < block_chance:
        m = rng.choice([1, 1, 2, 3])
        blocks = (SingletonBlock(m, rng.randrange(m), [i for i in range(bound) if rng.random() < 0.3]),)
    return Family(members, blocks)


def _sample_admitted(rng, sys, bound, tries=200, **kw):
    for _ in range(tries):
        fam = random_family(rng, sys.algebra, bound, **kw)
        if sys.admits(fam):
            return fam
    return Family(frozenset({sys.algebra.top}))


def _coarsen(rng, algebra, R: Family, v: Element) -> Family:
    mode = rng.randrange(3)
    if mode == 0:
        return Family(frozenset({v}))
    members = sorted_elements(R.members)
    out = []
    while members:
        group = [members.pop() for _ in range(min(len(members), rng.randint(1, 2)))]
        extra = v & random_element(rng, algebra, 6) if mode == 2 else algebra.bottom
        out.append(algebra.join_all(group) | extra)
    return Family(frozenset(out), R.blocks)


def _split(rng, algebra, r: Element) -> Family:
    """A family with join exactly ``r``."""
    pieces = [r & random_element(rng, algebra, 8) for _ in range(rng.randint(0, 3))]
    rest = r - algebra.join_all(pieces)
    if rest.cofinite and rng.random() < 0.3:
        # finite pieces plus every remaining singleton
        return Family(frozenset(pieces), (SingletonBlock(1, 0, rest.support),))
    return Family(frozenset(pieces + [rest]))


def _meet_family(algebra, a: Element, R: Family) -> Family:
    members = {a & r for r in R.members}
    blocks = []
    for b in R.blocks:
        if a.cofinite:
            blocks.append(SingletonBlock(b.modulus, b.residue, b.exclude | a.support))
            if any(n in b for n in a.support):
                members.add(algebra.bottom)
        else:
            members |= {algebra.finite([n]) for n in a.support if n in b}
            members.add(algebra.bottom)
    return Family(frozenset(members), tuple(blocks))


def _sampled_axioms(sys, samples, seed, bound) -> AxiomReport:
    alg = sys.algebra
    rng = random.Random(seed)
    ok = {1: True, 2: True, 3: True, 4: True}
    wit, checked = {}, {1: 0, 2: 0, 3: 0, 4: 0}
    for _ in range(samples):
        R = random_family(rng, alg, bound, block_chance=0.0)
        checked[1] += 1
        if ok[1] and not sys.admits(R):
            ok[1], wit[1] = False, [R]

        R = _sample_admitted(rng, sys, bound)
        v = lub(alg, R)
        S = _coarsen(rng, alg, R, v)
        if all(s <= v for s in S.members) and refines(R, S, alg):
            checked[2] += 1
            if ok[2] and not sys.admits(S):
                ok[2], wit[2] = False, [R, S]

        R = _sample_admitted(rng, sys, bound, block_chance=0.0)
        parts = [_split(rng, alg, r) for r in sorted_elements(R.members)]
        if all(sys.admits(p) and lub(alg, p) == r for p, r in zip(parts, sorted_elements(R.members))):
            glued = Family()
            for p in parts:
                glued = glued.union(p)
            if len(glued.blocks) <= 1:
                checked[3] += 1
                if ok[3] and not sys.admits(glued):
                    ok[3], wit[3] = False, [R, glued]

        R = _sample_admitted(rng, sys, bound)
        a = random_element(rng, alg, bound)
        checked[4] += 1
        M = _meet_family(alg, a, R)
        if ok[4] and not sys.admits(M):
            ok[4], wit[4] = False, [R, a]
    return AxiomReport(ok, wit, "sampled", seed, samples, checked)


# -- subcompleteness ----------------------------------------------------------


@dataclass(frozen=True)
class SubcompleteReport:
    subcomplete: bool
    witness: object = None
    mode: str = "exhaustive"
    seed: int | None = None
    samples: int | None = None


def is_subcomplete_admissibility(
    sys: AdmissibilitySystem,
    samples: int = DEFAULT_SAMPLES,
    seed: int = DEFAULT_SEED,
    support_bound: int = DEFAULT_SUPPORT_BOUND,
) -> SubcompleteReport:
    alg = sys.algebra
    if alg.is_finite:
        if sys.is_full:
            return SubcompleteReport(True)
        for m in sorted(sys.explicit):
            members = bits(m)
            for choice in product((0, 1, 2), repeat=len(members)):
                r = sum(1 << x for x, c in zip(members, choice) if c != 1)
                s = sum(1 << x for x, c in zip(members, choice) if c != 0)
                if any(a & b for a in bits(r) for b in bits(s)):
                    continue
                if r not in sys.explicit or s not in sys.explicit:
                    return SubcompleteReport(False, [_members_list(alg, r), _members_list(alg, s)])
        return SubcompleteReport(True)

    evens, odds = Family(blocks=(EVEN_SINGLETONS,)), Family(blocks=(ODD_SINGLETONS,))
    if sys.admits(Family(blocks=(ALL_SINGLETONS,))) and not (sys.admits(evens) and sys.admits(odds)):
        return SubcompleteReport(False, {"union": "all singletons", "R": evens, "S": odds}, "witness_class")
    rng = random.Random(seed)
    for _ in range(samples):
        R, S = _disjoint_pair(rng, alg, support_bound)
        union = R.union(S)
        if sys.admits(union) and not (sys.admits(R) and sys.admits(S)):
            return SubcompleteReport(False, {"R": R, "S": S}, "sampled", seed, samples)
    return SubcompleteReport(True, None, "sampled", seed, samples)


def _disjoint_pair(rng, alg, bound):
    if rng.random() < 0.5:
        side = alg.finite(i for i in range(bound) if rng.random() < 0.5)
        r_members = {side & random_element(rng, alg, bound) for _ in range(rng.randint(0, 3))}
        s_members = {~side & random_element(rng, alg, bound) for _ in range(rng.randint(0, 3))}
        blocks_s = (SingletonBlock(1, 0, side.support),) if rng.random() < 0.3 else ()
        return Family(frozenset(r_members)), Family(frozenset(s_members), blocks_s)
    evens = [alg.finite(i for i in range(0, bound, 2) if rng.random() < 0.5) for _ in range(rng.randint(0, 2))]
    odds = [alg.finite(i for i in range(1, bound, 2) if rng.random() < 0.5) for _ in range(rng.randint(0, 2))]
    rb = (EVEN_SINGLETONS,) if rng.random() < 0.5 else ()
    sb = (ODD_SINGLETONS,) if rng.random() < 0.5 else ()
    return Family(frozenset(evens), rb), Family(frozenset(odds), sb)


# -- the ideal lattice C_A ----------------------------------------------------


@dataclass(frozen=True)
class IdealLattice:
    system: AdmissibilitySystem
    ideals: tuple = ()
    support_bound: int = DEFAULT_SUPPORT_BOUND
    _memo: dict = field(default_factory=dict, compare=False, repr=False)

    def contains(self, ideal) -> bool:
        return self.membership(ideal)[0]

    def membership(self, ideal) -> tuple[bool, object]:
        """Whether an ideal belongs to C_A, with a witness when it does not."""
        if self.system.algebra.is_finite:
            mask = ideal if isinstance(ideal, int) else _ideal_mask(ideal)
            return mask in set(self.ideals), None
        if ideal not in self._memo:
            self._memo[ideal] = self._fincof_membership(ideal)
        return self._memo[ideal]

    def _fincof_membership(self, ideal):
        report = validate_ideal(self.system.algebra, ideal, self.support_bound)
        if not report.is_ideal:
            return False, ("not_an_ideal", report.witnesses)
        alg = self.system.algebra
        tests = [ideal.singletons()]
        for x in alg.elements(min(self.support_bound, 4)):
            if x in ideal:
                tests.append(tests[0].union(Family(frozenset({x}))))
        for R in tests:
            if not all(x in ideal for x in R.members):
                continue
            if self.system.admits(R) and lub(alg, R) not in ideal:
                return False, ("admissible_join_escapes", R)
        return True, None

    def as_element_sets(self) -> list[list[Element]]:
        alg = self.system.algebra
        return [_members_list(alg, m) for m in self.ideals]


def _ideal_mask(ideal: IdealDescription) -> int:
    return family_mask(x for x in ideal.algebra.elements() if x in ideal)


def _finite_ideals(T: FiniteTables) -> list[int]:
    out = []
    for m in range(1, 1 << T.n):
        if not m & 1:
            continue
        members = bits(m)
        if any(T.down[x] & ~m for x in members):
            continue
        if any((1 << (x | y)) & ~m for x in members for y in members):
            continue
        out.append(m)
    return out


def admissible_ideals(sys: AdmissibilitySystem, support_bound: int = DEFAULT_SUPPORT_BOUND) -> IdealLattice:
    alg = sys.algebra
    if not alg.is_finite:
        return IdealLattice(sys, (), support_bound)
    if alg.atom_count > MAX_DUALITY_ATOMS:
        raise InvalidInstance("too_large", f"ideal enumeration supports <= {MAX_DUALITY_ATOMS} atoms")
    T = FiniteTables(alg)
    keep = []
    for ideal in _finite_ideals(T):
        ok = True
        sub = ideal
        while sub:
            if sub in sys.explicit and not ideal >> T.subset_join[sub] & 1:
                ok = False
                break
            sub = (sub - 1) & ideal
        if ok:
            keep.append(ideal)
    keep.sort(key=lambda m: (popcount(m), m))
    return IdealLattice(sys, tuple(keep), support_bound)


# -- functors -----------------------------------------------------------------


@dataclass(frozen=True)
class BooleanBasedFrame:
    frame: FiniteFrame
    base: frozenset
    ideals: tuple = ()
    down: dict = field(default_factory=dict, compare=False)


def validate_based_frame(bbf: BooleanBasedFrame) -> list[str]:
    """Problems with a Boolean based frame; empty when valid."""
    L, base = bbf.frame, bbf.base
    problems = []
    if not base <= L.complemented:
        problems.append("base_not_complemented")
    if L.bottom not in base or L.top not in base:
        problems.append("base_missing_bounds")
    for x in sorted(base):
        c = L.complement(x)
        if c is None or c not in base:
            problems.append(f"base_not_closed_under_complement:{x}")
        for y in sorted(base):
            if L.meet(x, y) not in base or L.join(x, y) not in base:
                problems.append(f"base_not_sublattice:{x},{y}")
    for x in range(L.size):
        if L.join_all(b for b in base if L.leq(b, x)) != x:
            problems.append(f"not_generated:{x}")
    return problems


def functor_V(sys: AdmissibilitySystem) -> BooleanBasedFrame:
    """The frame of C_A ordered by inclusion, based on the principal ideals."""
    if not sys.algebra.is_finite:
        raise InvalidInstance("fincof_not_materialized", "use admissible_ideals for fincof")
    lattice = admissible_ideals(sys)
    ideals = lattice.ideals
    pairs = [(i, j) for i, a in enumerate(ideals) for j, b in enumerate(ideals) if a & b == a]
    frame = frame_from_order(len(ideals), pairs, labels=ideals)
    T = FiniteTables(sys.algebra)
    index = {m: i for i, m in enumerate(ideals)}
    down = {}
    for b in range(T.n):
        if T.down[b] not in index:
            raise InvalidInstance("principal_ideal_missing", f"down({b}) not in C_A")
        down[b] = index[T.down[b]]
    return BooleanBasedFrame(frame, frozenset(down.values()), ideals, down)


def base_algebra(bbf: BooleanBasedFrame) -> tuple[BooleanAlgebra, dict]:
    """The base as an atom-based algebra: (algebra, frame index -> bits)."""
    L = bbf.frame
    nonzero = [x for x in sorted(bbf.base) if x != L.bottom]
    atoms = [x for x in nonzero if not any(y != x and L.leq(y, x) for y in nonzero)]
    alg = make_algebra("finite_atoms", len(atoms))
    to_bits = {x: sum(1 << i for i, a in enumerate(atoms) if L.leq(a, x)) for x in bbf.base}
    return alg, to_bits


def functor_W(bbf: BooleanBasedFrame) -> AdmissibilitySystem:
    """Base algebra with the subsets whose frame join lands in the base."""
    L = bbf.frame
    alg, to_bits = base_algebra(bbf)
    from_bits = {v: k for k, v in to_bits.items()}
    family = set()
    for m in range(1 << alg.size):
        j = L.join_all(from_bits[b] for b in bits(m))
        if j in bbf.base:
            family.add(m)
    return AdmissibilitySystem(alg, EXPLICIT, frozenset(family))


@dataclass(frozen=True)
class RoundTripReport:
    isomorphic: bool
    canonical: bool
    mapping: tuple
    reason: str = ""


def _check_iso(sys, target, phi) -> str:
    """Empty string when ``phi`` (bits -> bits) is an isomorphism of systems."""
    n = sys.algebra.size
    if sorted(phi) != list(range(target.algebra.size)) or len(phi) != n:
        return "not_bijective"
    full_src, full_dst = sys.algebra.full_mask, target.algebra.full_mask
    for x in range(n):
        if phi[full_src & ~x] != full_dst & ~phi[x]:
            return f"complement:{x}"
        for y in range(n):
            if phi[x & y] != phi[x] & phi[y] or phi[x | y] != phi[x] | phi[y]:
                return f"lattice:{x},{y}"
    for m in range(1 << n):
        if (m in sys.explicit) != (family_mask(phi[b] for b in bits(m)) in target.explicit):
            return f"family:{m}"
    return ""


def round_trip_check(sys: AdmissibilitySystem) -> RoundTripReport:
    if not sys.algebra.is_finite:
        raise InvalidInstance("fincof_not_materialized", "round trip needs a finite carrier")
    V = functor_V(sys)
    _, to_bits = base_algebra(V)
    target = functor_W(V)
    phi = [to_bits[V.down[b]] for b in range(sys.algebra.size)]
    reason = _check_iso(sys, target, phi)
    if not reason:
        return RoundTripReport(True, True, tuple(enumerate(phi)))
    k = sys.algebra.atom_count
    if target.algebra.atom_count == k:
        for perm in permutations(range(k)):
            psi = [sum(1 << perm[i] for i in range(k) if b >> i & 1) for b in range(1 << k)]
            if not _check_iso(sys, target, psi):
                return RoundTripReport(True, False, tuple(enumerate(psi)), reason)
    return RoundTripReport(False, False, tuple(enumerate(phi)), reason)


# -- dual criteria ------------------------------------------------------------


@dataclass(frozen=True)
class CriteriaReport:
    ultranormal_criterion: bool
    ultraparacompact_criterion: bool | None
    cross_check: dict | None
    witnesses: dict = field(default_factory=dict)
    mode: str = "exhaustive"
    notes: tuple = ()


def dual_criteria(
    sys: AdmissibilitySystem,
    samples: int = DEFAULT_SAMPLES,
    seed: int = DEFAULT_SEED,
    support_bound: int = DEFAULT_SUPPORT_BOUND,
) -> CriteriaReport:
    if not sys.algebra.is_finite:
        return _fincof_criteria(sys, samples, seed, support_bound)
    alg = sys.algebra
    T = FiniteTables(alg)
    lattice = admissible_ideals(sys)
    ideals = set(lattice.ideals)
    witnesses = {}
    un = True
    for I, J in product(lattice.ideals, repeat=2):
        K = family_mask(a | b for a in bits(I) for b in bits(J))
        if K not in ideals:
            un = False
            witnesses["ultranormal"] = [_members_list(alg, I), _members_list(alg, J)]
            break
    sub = is_subcomplete_admissibility(sys)
    notes = []
    upc = None
    if not sub.subcomplete:
        notes.append("ultraparacompact criterion not applicable: system is not subcomplete")
    else:
        upc = True
        for R in sorted(sys.explicit):
            if not _has_disjoint_refinement(T, sys, R):
                upc = False
                witnesses["ultraparacompact"] = _members_list(alg, R)
                break
    V = functor_V(sys)
    props = check_frame_properties(V.frame)
    frame_un = props.ultranormal and props.zero_dimensional and V.base == props.complemented
    frame_upc = props.ultraparacompact and props.zero_dimensional
    cross = {
        "ultranormal": {"criterion": un, "frame": frame_un, "agree": un == frame_un},
        "ultraparacompact": {
            "criterion": upc,
            "frame": frame_upc,
            "agree": upc is None or upc == frame_upc,
        },
    }
    return CriteriaReport(un, upc, cross, witnesses, "exhaustive", tuple(notes))


def _has_disjoint_refinement(T: FiniteTables, sys, R: int) -> bool:
    target = T.subset_join[R]
    alg = sys.algebra
    S = family_mask(disjointify(alg, _members_list(alg, R)))
    if S in sys.explicit and T.refines(S, R) and T.subset_join[S] == target:
        return True
    for S in sorted(sys.explicit):
        if T.subset_join[S] == target and T.refines(S, R) and T.pairwise_disjoint(S):
            return True
    return False


def finite_join_generator(alg: BooleanAlgebra, R: Family) -> list[Element] | None:
    """A finite subfamily of ``R`` with the same join, if one exists."""
    members = sorted_elements(R.members)
    if not R.blocks:
        return members
    acc = alg.join_all(members)
    if not acc.cofinite:
        return None
    extra = [alg.finite([n]) for n in sorted(acc.support) if R.singleton_in(n)]
    return members + extra


def _fincof_criteria(sys, samples, seed, bound) -> CriteriaReport:
    alg = sys.algebra
    lattice = admissible_ideals(sys, bound)
    rng = random.Random(seed)
    pool = [IdealDescription(alg, frozenset(), FINITE_SETS_IDEAL)]
    for _ in range(12):
        g = random_element(rng, alg, bound)
        pool.append(IdealDescription(alg, frozenset({g}), PRINCIPAL))
        pool.append(IdealDescription(alg, frozenset({g}), FINITE_SETS_IDEAL))
    members = [I for I in pool if lattice.contains(I)]
    witnesses = {}
    un = True
    for I, J in product(members, repeat=2):
        if not lattice.contains(I.join(J)):
            un = False
            witnesses["ultranormal"] = [I, J]
            break
    sub = is_subcomplete_admissibility(sys, samples, seed, bound)
    notes = [f"support bound {bound}, seed {seed}, {samples} samples"]
    upc = None
    if not sub.subcomplete:
        notes.append("ultraparacompact criterion not applicable: system is not subcomplete")
    else:
        upc = True
        for _ in range(samples):
            R = _sample_admitted(rng, sys, bound)
            gen = finite_join_generator(alg, R)
            if gen is None:
                upc = False
                witnesses["ultraparacompact"] = R
                break
            S = Family(frozenset(disjointify(alg, gen)))
            members_s = sorted_elements(S.members)
            disjoint = all((a & b).is_zero for i, a in enumerate(members_s) for b in members_s[i + 1:])
            if not (sys.admits(S) and refines(S, R, alg) and lub(alg, S) == lub(alg, R) and disjoint):
                upc = False
                witnesses["ultraparacompact"] = R
                break
    return CriteriaReport(un, upc, None, witnesses, "sampled", tuple(notes))
