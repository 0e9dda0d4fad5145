"""Boolean algebra carriers, partitions, refinement and disjointification.

Two carriers are supported:

* ``finite_atoms``: the powerset of ``atom_count`` atoms, elements stored as
  bit-vectors (bit ``i`` set means atom ``i`` lies below the element);
* ``fincof``: the finite-cofinite algebra of subsets of the naturals, elements
  stored as a finite ``support`` plus a ``cofinite`` flag (a cofinite element
  is the complement of its support).

Infinite families in ``fincof`` are described by finitely many explicit
members plus blocks of singletons ``{n}`` running over an arithmetic
progression of naturals (see :class:`SingletonBlock`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import reduce
from itertools import combinations, product
from typing import Iterable, Iterator

from .errors import AlgebraMismatch, InvalidInstance

FINITE_ATOMS = "finite_atoms"
FINCOF = "fincof"
MAX_ATOMS = 20
DEFAULT_SUPPORT_BOUND = 8


@dataclass(frozen=True)
class BooleanAlgebra:
    kind: str
    atom_count: int = 0

    def __post_init__(self):
        if self.kind not in (FINITE_ATOMS, FINCOF):
            raise InvalidInstance("unknown_kind", f"algebra kind {self.kind!r}")
        if self.kind == FINITE_ATOMS and not 0 <= self.atom_count <= MAX_ATOMS:
            raise InvalidInstance(
                "atom_count_out_of_range", f"{self.atom_count} not in [0, {MAX_ATOMS}]"
            )
        if self.kind == FINCOF and self.atom_count:
            raise InvalidInstance("atom_count_out_of_range", "fincof takes no atom_count")

    @property
    def is_finite(self) -> bool:
        return self.kind == FINITE_ATOMS

    @property
    def size(self) -> int:
        if not self.is_finite:
            raise ValueError("fincof algebra is infinite")
        return 1 << self.atom_count

    @property
    def full_mask(self) -> int:
        return (1 << self.atom_count) - 1

    # -- constructors -------------------------------------------------------

    def element(self, bits: int) -> Element:
        if not self.is_finite:
            raise AlgebraMismatch("bit-vector elements belong to finite_atoms algebras")
        if bits < 0 or bits > self.full_mask:
            raise InvalidInstance("element_out_of_range", f"bits {bits:#x}")
        return Element(self, bits=bits)

    def finite(self, support: Iterable[int]) -> Element:
        return self._fincof(support, cofinite=False)

    def cofinite(self, excluded: Iterable[int]) -> Element:
        return self._fincof(excluded, cofinite=True)

    def _fincof(self, support, cofinite):
        if self.is_finite:
            raise AlgebraMismatch("finite/cofinite elements belong to the fincof algebra")
        s = frozenset(int(n) for n in support)
        if any(n < 0 for n in s):
            raise InvalidInstance("negative_natural", str(sorted(s)))
        return Element(self, support=s, cofinite=cofinite)

    def atom(self, i: int) -> Element:
        if self.is_finite:
            if not 0 <= i < self.atom_count:
                raise InvalidInstance("element_out_of_range", f"atom {i}")
            return Element(self, bits=1 << i)
        return self.finite([i])

    @property
    def bottom(self) -> Element:
        return self.element(0) if self.is_finite else self.finite(())

    @property
    def top(self) -> Element:
        return self.element(self.full_mask) if self.is_finite else self.cofinite(())

    def elements(self, support_bound: int = DEFAULT_SUPPORT_BOUND) -> Iterator[Element]:
        """All elements (finite carrier) or all elements with support below the bound."""
        if self.is_finite:
            for bits in range(self.size):
                yield Element(self, bits=bits)
            return
        for cof in (False, True):
            for mask in range(1 << support_bound):
                yield Element(
                    self,
                    support=frozenset(i for i in range(support_bound) if mask >> i & 1),
                    cofinite=cof,
                )

    # -- operations ---------------------------------------------------------

    def _check(self, *xs: Element):
        for x in xs:
            if not isinstance(x, Element) or x.algebra != self:
                raise AlgebraMismatch(f"{x!r} is not an element of {self!r}")

    def meet(self, x: Element, y: Element) -> Element:
        self._check(x, y)
        if self.is_finite:
            return Element(self, bits=x.bits & y.bits)
        if not x.cofinite and not y.cofinite:
            return Element(self, support=x.support & y.support)
        if x.cofinite and y.cofinite:
            return Element(self, support=x.support | y.support, cofinite=True)
        fin, cof = (x, y) if y.cofinite else (y, x)
        return Element(self, support=fin.support - cof.support)

    def join(self, x: Element, y: Element) -> Element:
        return self.complement(self.meet(self.complement(x), self.complement(y)))

    def complement(self, x: Element) -> Element:
        self._check(x)
        if self.is_finite:
            return Element(self, bits=self.full_mask & ~x.bits)
        return Element(self, support=x.support, cofinite=not x.cofinite)

    def leq(self, x: Element, y: Element) -> bool:
        self._check(x, y)
        if self.is_finite:
            return not x.bits & ~y.bits
        if x.cofinite:
            return y.cofinite and y.support <= x.support
        if y.cofinite:
            return x.support.isdisjoint(y.support)
        return x.support <= y.support

    def join_all(self, xs: Iterable[Element]) -> Element:
        return reduce(self.join, xs, self.bottom)

    def meet_all(self, xs: Iterable[Element]) -> Element:
        return reduce(self.meet, xs, self.top)


@dataclass(frozen=True)
class Element:
    algebra: BooleanAlgebra = field(repr=False)
    bits: int = 0
    support: frozenset = frozenset()
    cofinite: bool = False

    def __and__(self, other):
        return self.algebra.meet(self, other)

    def __or__(self, other):
        return self.algebra.join(self, other)

    def __invert__(self):
        return self.algebra.complement(self)

    def __sub__(self, other):
        return self.algebra.meet(self, self.algebra.complement(other))

    def __le__(self, other):
        return self.algebra.leq(self, other)

    def __lt__(self, other):
        return self != other and self.algebra.leq(self, other)

    @property
    def is_zero(self) -> bool:
        return self == self.algebra.bottom

    def contains(self, n: int) -> bool:
        """Membership of the natural ``n`` (fincof) or atom index ``n``."""
        if self.algebra.is_finite:
            return bool(self.bits >> n & 1)
        return (n in self.support) != self.cofinite

    def sort_key(self):
        if self.algebra.is_finite:
            return (0, self.bits)
        return (int(self.cofinite), len(self.support), tuple(sorted(self.support)))

    def __repr__(self):
        if self.algebra.is_finite:
            return f"Element(bits={self.bits:0{max(self.algebra.atom_count, 1)}b})"
        tag = "cofinite" if self.cofinite else "finite"
        return f"Element({tag}{sorted(self.support)})"


def make_algebra(kind: str, atom_count: int | None = None) -> BooleanAlgebra:
    if kind == FINITE_ATOMS and atom_count is None:
        raise InvalidInstance("atom_count_out_of_range", "finite_atoms needs atom_count")
    if kind == FINCOF and atom_count is not None:
        raise InvalidInstance("atom_count_out_of_range", "fincof takes no atom_count")
    return BooleanAlgebra(kind, atom_count or 0)


def sorted_elements(xs: Iterable[Element]) -> list[Element]:
    return sorted(xs, key=Element.sort_key)


# -- infinite families of singletons ------------------------------------------


@dataclass(frozen=True)
class SingletonBlock:
    """The family of singletons ``{n}`` with ``n % modulus == residue`` and
    ``n`` not in ``exclude``. Always infinite."""

    modulus: int = 1
    residue: int = 0
    exclude: frozenset = frozenset()

    def __post_init__(self):
        if self.modulus < 1 or not 0 <= self.residue < self.modulus:
            raise InvalidInstance("bad_block", f"{self.residue} mod {self.modulus}")
        object.__setattr__(self, "exclude", frozenset(self.exclude))

    def __contains__(self, n: int) -> bool:
        return n % self.modulus == self.residue and n not in self.exclude

    @property
    def horizon(self) -> int:
        return max(max(self.exclude, default=-1), self.residue) + 1


ALL_SINGLETONS = SingletonBlock()
EVEN_SINGLETONS = SingletonBlock(2, 0)
ODD_SINGLETONS = SingletonBlock(2, 1)


def _in_blocks(blocks, n):
    return any(n in b for b in blocks)


def _scan_limit(blocks, *finite_sets) -> tuple[int, int]:
    """(horizon, period): past the horizon, block membership repeats with the period."""
    horizon = max(
        [b.horizon for b in blocks] + [max(s, default=-1) + 1 for s in finite_sets] + [0]
    )
    period = math.lcm(*(b.modulus for b in blocks)) if blocks else 1
    return horizon, period


@dataclass(frozen=True)
class Family:
    """A finitely described family of elements: explicit members plus blocks."""

    members: frozenset = frozenset()
    blocks: tuple = ()

    @classmethod
    def of(cls, *members: Element, blocks=()) -> Family:
        return cls(frozenset(members), tuple(blocks))

    @property
    def is_finite(self) -> bool:
        return not self.blocks

    def singleton_in(self, n: int) -> bool:
        return _in_blocks(self.blocks, n)

    def union(self, other: Family) -> Family:
        return Family(self.members | other.members, tuple(dict.fromkeys(self.blocks + other.blocks)))


def as_family(algebra: BooleanAlgebra, family) -> Family:
    if isinstance(family, Partition):
        family = family.family()
    elif not isinstance(family, Family):
        family = Family(frozenset(family))
    algebra._check(*family.members)
    if family.blocks and algebra.is_finite:
        raise AlgebraMismatch("singleton blocks only exist in the fincof algebra")
    return family


def lub(algebra: BooleanAlgebra, family) -> Element | None:
    """Least upper bound of ``family`` in ``algebra``, or ``None`` if none exists."""
    fam = as_family(algebra, family)
    acc = algebra.join_all(sorted_elements(fam.members))
    if not fam.blocks:
        return acc
    if acc.cofinite:
        return algebra.cofinite(n for n in acc.support if not fam.singleton_in(n))
    horizon, period = _scan_limit(fam.blocks, acc.support)
    if not all(fam.singleton_in(n) for n in range(horizon, horizon + period)):
        # union is infinite and co-infinite
        return None
    return algebra.cofinite(
        n for n in range(horizon) if n not in acc.support and not fam.singleton_in(n)
    )


def _below_singleton_block(x: Element, blocks) -> bool:
    if not blocks or x.cofinite or len(x.support) > 1:
        return False
    return not x.support or _in_blocks(blocks, next(iter(x.support)))


def refines(R, S, algebra: BooleanAlgebra | None = None) -> bool:
    """``R`` refines ``S``: every member of ``R`` lies below some member of ``S``."""
    if algebra is None:
        algebra = _infer_algebra(R, S)
    R, S = as_family(algebra, R), as_family(algebra, S)
    for r in R.members:
        if not (any(r <= s for s in S.members) or _below_singleton_block(r, S.blocks)):
            return False
    if not R.blocks:
        return True
    covered = algebra.join_all(S.members)
    if covered.cofinite:
        candidates = covered.support
    else:
        horizon, period = _scan_limit(R.blocks + S.blocks, covered.support)
        candidates = range(horizon + period)
    return not any(
        n in b and not _in_blocks(S.blocks, n) and not covered.contains(n)
        for n in candidates
        for b in R.blocks
    )


def _infer_algebra(*families) -> BooleanAlgebra:
    for fam in families:
        if isinstance(fam, Partition):
            return fam.algebra
        members = fam.members if isinstance(fam, Family) else fam
        for x in members:
            return x.algebra
    raise ValueError("cannot infer the algebra of empty families; pass algebra=")


# -- partitions ---------------------------------------------------------------


@dataclass(frozen=True)
class Partition:
    """Explicit nonzero members plus, in fincof, optionally every singleton
    ``{n}`` outside the union of the explicit members."""

    algebra: BooleanAlgebra = field(repr=False)
    explicit: frozenset = frozenset()
    residual_singletons: bool = False

    @property
    def explicit_union(self) -> Element:
        return self.algebra.join_all(self.explicit)

    @property
    def residual_block(self) -> SingletonBlock | None:
        if not self.residual_singletons:
            return None
        return SingletonBlock(1, 0, self.explicit_union.support)

    def family(self) -> Family:
        block = self.residual_block
        return Family(self.explicit, (block,) if block else ())

    def __len__(self):
        if self.residual_singletons:
            raise TypeError("partition with residual singletons is infinite")
        return len(self.explicit)

    def __iter__(self):
        return iter(sorted_elements(self.explicit))

    def sort_key(self):
        return (int(self.residual_singletons), sorted(x.sort_key() for x in self.explicit))


def make_partition(algebra: BooleanAlgebra, explicit: Iterable[Element], residual_singletons=False) -> Partition:
    """Canonical partition value; a finite residual block is folded into ``explicit``."""
    explicit = frozenset(explicit)
    algebra._check(*explicit)
    if residual_singletons:
        if algebra.is_finite:
            raise AlgebraMismatch("residual singletons only exist in the fincof algebra")
        union = algebra.join_all(explicit)
        if union.cofinite:
            explicit |= {algebra.finite([n]) for n in union.support}
            residual_singletons = False
    return Partition(algebra, explicit, residual_singletons)


@dataclass(frozen=True)
class PartitionReport:
    is_partition: bool
    is_subcomplete: bool
    reason: str = ""
    witness: object = None


def validate_partition(algebra: BooleanAlgebra, p: Partition) -> PartitionReport:
    if p.algebra != algebra:
        raise AlgebraMismatch("partition of a different algebra")
    members = sorted_elements(p.explicit)
    reason, witness = "", None
    zero = next((x for x in members if x.is_zero), None)
    if zero is not None:
        reason, witness = "zero_member", zero
    else:
        for a, b in combinations(members, 2):
            if not (a & b).is_zero:
                reason, witness = "overlapping_members", (a, b)
                break
    if not reason and p.residual_singletons and p.explicit_union.cofinite:
        reason = "residual_block_finite"
    if not reason and lub(algebra, p) != algebra.top:
        reason = "join_not_top"
    is_partition = not reason
    if algebra.is_finite or not p.residual_singletons:
        return PartitionReport(is_partition, True, reason, witness)
    # The even part of the residual block has infinite, co-infinite union.
    block = p.residual_block
    sub = Family(blocks=(SingletonBlock(2, 0, block.exclude),))
    if lub(algebra, sub) is not None:
        raise AssertionError("even singleton subfamily unexpectedly has a lub")
    return PartitionReport(is_partition, False, reason, witness or sub)


def require_partition(algebra: BooleanAlgebra, p: Partition) -> None:
    report = validate_partition(algebra, p)
    if not report.is_partition:
        raise InvalidInstance("not_a_partition", report.reason, report.witness)


def partition_meet(p: Partition, q: Partition) -> Partition:
    """``{a & b | a in p, b in q}`` with zero removed.

    With residual blocks on either side the result is again "explicit part +
    residual singletons": its explicit union is the intersection of the two
    explicit unions, and every other natural ends up as a singleton.
    """
    if p.algebra != q.algebra:
        raise AlgebraMismatch("partitions of different algebras")
    algebra = p.algebra
    require_partition(algebra, p)
    require_partition(algebra, q)
    meets = {a & b for a in p.explicit for b in q.explicit}
    meets.discard(algebra.bottom)
    return make_partition(algebra, meets, p.residual_singletons or q.residual_singletons)


def all_partitions(algebra: BooleanAlgebra) -> list[Partition]:
    """Every partition of a finite algebra (set partitions of the atoms)."""
    if not algebra.is_finite:
        raise ValueError("fincof has uncountably many partitions")
    out = []

    def grow(i, blocks):
        if i == algebra.atom_count:
            out.append(make_partition(algebra, (algebra.element(b) for b in blocks)))
            return
        for j in range(len(blocks)):
            blocks[j] |= 1 << i
            grow(i + 1, blocks)
            blocks[j] &= ~(1 << i)
        blocks.append(1 << i)
        grow(i + 1, blocks)
        blocks.pop()

    grow(0, [])
    return sorted(out, key=Partition.sort_key)


# -- disjointification --------------------------------------------------------


def disjointify(algebra: BooleanAlgebra, chain: Iterable[Element], keep_zeros: bool = False) -> list[Element]:
    """Replace each entry by itself minus the join of everything before it.

    Zero entries are dropped unless ``keep_zeros`` (then output index matches
    input index).
    """
    seen = algebra.bottom
    out = []
    for c in chain:
        algebra._check(c)
        r = c - seen
        seen = seen | c
        if keep_zeros or not r.is_zero:
            out.append(r)
    return out


# -- ideals -------------------------------------------------------------------

PRINCIPAL = "principal"
FINITE_SETS_IDEAL = "finite_sets_ideal"


@dataclass(frozen=True)
class IdealDescription:
    """A subset of the algebra meant to be an ideal.

    ``named=None``: exactly the ``generators``.
    ``named="principal"``: the downset of the join of the generators.
    ``named="finite_sets_ideal"``: elements whose part outside the join of the
    generators is finite (with no generators: the finite sets).
    """

    algebra: BooleanAlgebra = field(repr=False)
    generators: frozenset = frozenset()
    named: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "generators", frozenset(self.generators))
        self.algebra._check(*self.generators)
        if self.named not in (None, PRINCIPAL, FINITE_SETS_IDEAL):
            raise InvalidInstance("unknown_ideal", str(self.named))

    @property
    def bound(self) -> Element:
        return self.algebra.join_all(self.generators)

    def __contains__(self, x: Element) -> bool:
        if self.named is None:
            return x in self.generators
        if self.named == PRINCIPAL:
            return x <= self.bound
        rest = x - self.bound
        return self.algebra.is_finite or not rest.cofinite

    def join(self, other: IdealDescription) -> IdealDescription:
        """``{a | b : a in self, b in other}`` for the two named kinds."""
        if self.named is None or other.named is None:
            raise ValueError("join of extensional ideals is not implemented")
        gens = frozenset({self.bound | other.bound})
        if FINITE_SETS_IDEAL in (self.named, other.named):
            return IdealDescription(self.algebra, gens, FINITE_SETS_IDEAL)
        return IdealDescription(self.algebra, gens, PRINCIPAL)

    def singletons(self) -> Family:
        """The singletons lying in the ideal, as a family."""
        alg = self.algebra
        if self.named == FINITE_SETS_IDEAL:
            return Family(blocks=(ALL_SINGLETONS,))
        if self.named == PRINCIPAL and self.bound.cofinite:
            return Family(blocks=(SingletonBlock(1, 0, self.bound.support),))
        pool = self.bound.support if self.named == PRINCIPAL else {
            n for g in self.generators if not g.cofinite for n in g.support
        }
        return Family(frozenset(alg.finite([n]) for n in pool if alg.finite([n]) in self))


def principal_ideal(x: Element) -> IdealDescription:
    return IdealDescription(x.algebra, frozenset({x}), PRINCIPAL)


@dataclass(frozen=True)
class IdealReport:
    is_ideal: bool
    witnesses: list
    support_bound: int | None = None


def _proper_submasks(c: int):
    sub = c
    while sub:
        sub = (sub - 1) & c
        yield sub


def validate_ideal(
    algebra: BooleanAlgebra, ideal: IdealDescription, support_bound: int = DEFAULT_SUPPORT_BOUND
) -> IdealReport:
    """Downward closure and join closure over the checked universe.

    The universe (all elements, or those with support below the bound) is a
    finite Boolean subalgebra; it is encoded as bitmasks so that order and
    join are bit operations. For fincof, bit ``support_bound`` stands for the
    cofinite tail. Witnesses are ``(kind, x, y)`` triples.
    """
    if ideal.algebra != algebra:
        raise AlgebraMismatch("ideal of a different algebra")
    universe = list(algebra.elements(support_bound))
    if algebra.is_finite:
        codes = [x.bits for x in universe]
    else:
        tail = 1 << support_bound
        codes = []
        for x in universe:
            c = sum(1 << n for n in x.support)
            codes.append((tail | ((tail - 1) & ~c)) if x.cofinite else c)
    by_code = dict(zip(codes, universe))
    inside = {c for c, x in by_code.items() if x in ideal}
    witnesses = []
    if 0 not in inside:
        witnesses.append(("missing_bottom", algebra.bottom))
    for c in sorted(inside):
        sub = next((d for d in _proper_submasks(c) if d not in inside), None)
        if sub is not None:
            witnesses.append(("not_downward_closed", by_code[c], by_code[sub]))
            break
    ordered = sorted(inside)
    for i, c in enumerate(ordered):
        bad = next((d for d in ordered[i + 1:] if c | d not in inside), None)
        if bad is not None:
            witnesses.append(("not_join_closed", by_code[c], by_code[bad]))
            break
    return IdealReport(not witnesses, witnesses, None if algebra.is_finite else support_bound)
