"""JSON encodings for algebras, elements, partitions, frames, spaces and friends."""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .boolalg import FINCOF, FINITE_ATOMS, BooleanAlgebra, Element, Partition, make_algebra, make_partition
from .constructions import HalfOpenCover, UltrametricInstance, make_cover, make_ultrametric
from .errors import InvalidInstance
from .frames import FiniteFrame, FiniteSpace, bits, frame_from_order, space_from_opens

SCHEMA_VERSION = "1.0.0"


def report_schema_version() -> str:
    return SCHEMA_VERSION


def _need(obj: Any, key: str, what: str):
    if not isinstance(obj, dict) or key not in obj:
        raise InvalidInstance("missing_field", f"{what} needs {key!r}", key)
    return obj[key]


def _int_list(v, what: str) -> list[int]:
    if not isinstance(v, list) or not all(isinstance(i, int) and not isinstance(i, bool) for i in v):
        raise InvalidInstance("bad_field", f"{what} must be a list of integers", v)
    return v


# -- algebras and elements -------------------------------------------------------


def decode_algebra(obj) -> BooleanAlgebra:
    kind = _need(obj, "kind", "algebra")
    if kind == FINITE_ATOMS:
        return make_algebra(kind, _need(obj, "atoms", "finite_atoms algebra"))
    if kind == FINCOF:
        return make_algebra(kind)
    raise InvalidInstance("unknown_algebra_kind", str(kind), kind)


def encode_algebra(alg: BooleanAlgebra) -> dict:
    if alg.is_finite:
        return {"kind": FINITE_ATOMS, "atoms": alg.atom_count}
    return {"kind": FINCOF}


def decode_element(alg: BooleanAlgebra, obj) -> Element:
    """``{"bits": [b0, b1, ...]}`` is the 0/1 vector over the atoms."""
    if not isinstance(obj, dict):
        raise InvalidInstance("bad_element", "elements are JSON objects", obj)
    if "bits" in obj:
        if not alg.is_finite:
            raise InvalidInstance("bad_element", "bits encoding needs a finite_atoms algebra", obj)
        vec = _int_list(obj["bits"], "bits")
        if len(vec) != alg.atom_count or any(b not in (0, 1) for b in vec):
            raise InvalidInstance("bad_element", f"bits must be a 0/1 vector of length {alg.atom_count}", vec)
        return alg.element(sum(b << i for i, b in enumerate(vec)))
    if alg.is_finite:
        raise InvalidInstance("bad_element", "finite_atoms elements use the bits encoding", obj)
    if "finite" in obj:
        return alg.finite(_nat_list(obj["finite"]))
    if "cofinite_excluding" in obj:
        return alg.cofinite(_nat_list(obj["cofinite_excluding"]))
    raise InvalidInstance("bad_element", "unknown element encoding", obj)


def _nat_list(v):
    v = _int_list(v, "support")
    if any(i < 0 for i in v):
        raise InvalidInstance("bad_element", "supports are natural numbers", v)
    return v


def encode_element(x: Element) -> dict:
    alg = x.algebra
    if alg.is_finite:
        return {"bits": [x.bits >> i & 1 for i in range(alg.atom_count)]}
    key = "cofinite_excluding" if x.cofinite else "finite"
    return {key: sorted(x.support)}


def decode_partition(alg: BooleanAlgebra, obj) -> Partition:
    explicit = _need(obj, "explicit", "partition")
    if not isinstance(explicit, list):
        raise InvalidInstance("bad_partition", "explicit must be a list", explicit)
    residual = bool(obj.get("residual_singletons", False))
    if residual and alg.is_finite:
        raise InvalidInstance("bad_partition", "residual_singletons needs the fincof algebra", obj)
    return make_partition(alg, [decode_element(alg, e) for e in explicit], residual)


def encode_partition(p: Partition) -> dict:
    return {
        "explicit": [encode_element(x) for x in sorted(p.explicit, key=Element.sort_key)],
        "residual_singletons": p.residual_singletons,
    }


# -- frames and spaces ----------------------------------------------------------------


def decode_frame(obj) -> FiniteFrame:
    size = _need(obj, "size", "frame")
    pairs = _need(obj, "leq", "frame")
    if not isinstance(size, int) or size < 1:
        raise InvalidInstance("bad_frame", "size must be a positive integer", size)
    for pr in pairs:
        if not (isinstance(pr, list) and len(pr) == 2 and all(isinstance(i, int) and 0 <= i < size for i in pr)):
            raise InvalidInstance("bad_frame", "leq entries are [i, j] pairs of element indices", pr)
    return frame_from_order(size, [tuple(p) for p in pairs])


def encode_frame(L: FiniteFrame) -> dict:
    return {"kind": "frame", "size": L.size, "leq": [list(p) for p in L.leq_pairs()]}


def decode_space(obj) -> FiniteSpace:
    points = _need(obj, "points", "space")
    opens = _need(obj, "opens", "space")
    if not isinstance(points, list) or not isinstance(opens, list):
        raise InvalidInstance("bad_space", "points and opens must be lists")
    return space_from_opens(points, opens)


def encode_space(X: FiniteSpace) -> dict:
    return {"kind": "space", "points": list(X.points), "opens": [X.labels_of(u) for u in X.sorted_opens]}


def decode_instance(obj):
    kind = _need(obj, "kind", "instance")
    if kind == "frame":
        return decode_frame(obj)
    if kind == "space":
        return decode_space(obj)
    raise InvalidInstance("unknown_instance_kind", str(kind), kind)


def encode_instance(inst) -> dict:
    if isinstance(inst, FiniteFrame):
        return encode_frame(inst)
    return encode_space(inst)


# -- metric and interval inputs ------------------------------------------------------


def parse_rational(v) -> Fraction:
    if isinstance(v, bool) or not isinstance(v, (int, str)):
        raise InvalidInstance("bad_rational", "rationals are integers or strings like \"p/q\"", v)
    try:
        return Fraction(v)
    except (ValueError, ZeroDivisionError):
        raise InvalidInstance("bad_rational", f"cannot parse {v!r}", v) from None


def decode_ultrametric(obj) -> UltrametricInstance:
    points = _need(obj, "points", "ultrametric")
    dist = _need(obj, "dist", "ultrametric")
    if not isinstance(dist, list) or not all(isinstance(r, list) for r in dist):
        raise InvalidInstance("bad_shape", "dist must be a matrix")
    return make_ultrametric(points, [[parse_rational(v) for v in row] for row in dist])


def encode_ultrametric(inst: UltrametricInstance) -> dict:
    return {"points": list(inst.points), "dist": [[str(v) for v in row] for row in inst.dist]}


def decode_cover(obj) -> HalfOpenCover:
    M = parse_rational(_need(obj, "M", "cover"))
    ivs = _need(obj, "intervals", "cover")
    if not isinstance(ivs, list):
        raise InvalidInstance("bad_interval", "intervals must be a list")
    return make_cover(M, [[parse_rational(v) for v in iv] if isinstance(iv, list) else iv for iv in ivs])


def encode_cover(c: HalfOpenCover) -> dict:
    return {"M": str(c.M), "intervals": [[str(a), str(b)] for a, b in c.intervals]}


# -- generic ---------------------------------------------------------------------------


def to_jsonable(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, Element):
        return encode_element(v)
    if isinstance(v, Partition):
        return encode_partition(v)
    if isinstance(v, (FiniteFrame, FiniteSpace)):
        return encode_instance(v)
    if isinstance(v, UltrametricInstance):
        return encode_ultrametric(v)
    if isinstance(v, dict):
        return {str(k): to_jsonable(x) for k, x in v.items()}
    if isinstance(v, (frozenset, set)):
        return sorted((to_jsonable(x) for x in v), key=lambda x: json.dumps(x, sort_keys=True))
    if isinstance(v, (list, tuple)):
        return [to_jsonable(x) for x in v]
    if v is None or isinstance(v, (bool, int, float, str)):
        return v
    return repr(v)


def dumps(v) -> str:
    return json.dumps(to_jsonable(v), sort_keys=True, indent=2) + "\n"


def mask_labels(X: FiniteSpace, mask: int) -> list:
    return [X.points[i] for i in bits(mask)]
