"""Command-line front end.

Every command reads an optional JSON instance (``--in``), writes a report to
stdout or ``--out``, and exits 0 on success, 2 on malformed input and 3 on an
internal invariant breach.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from . import constructions as cons
from . import duality as dual
from . import explorer as ex
from . import jsonio
from .boolalg import DEFAULT_SUPPORT_BOUND, disjointify
from .errors import InvalidInstance, InvariantBreach
from .frames import FiniteSpace, check_frame_properties, shrink_point_finite_cover
from .partalg import (
    PartitionMap,
    bpa_to_frame,
    generate_partition_filter,
    is_partition_homomorphism,
    restriction_bpa,
    validate_bpa,
)

COMMANDS = (
    "check", "dualize", "roundtrip", "criteria", "bpa", "enumerate", "classify",
    "verify", "search", "disjointify", "shrink", "sorgenfrey", "ultrametric",
)


class Report:
    """Result payload plus optional CSV rows."""

    def __init__(self, result, rows=None, columns=None):
        self.result = result
        self.rows = rows
        self.columns = columns


def _csv_list(s: str | None) -> list[str]:
    return [x.strip() for x in s.split(",") if x.strip()] if s else []


def _load(args):
    if not args.input:
        raise InvalidInstance("missing_input", f"{args.command} needs --in")
    try:
        text = sys.stdin.read() if args.input == "-" else Path(args.input).read_text()
    except OSError as e:
        raise InvalidInstance("unreadable_input", str(e), args.input) from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InvalidInstance("malformed_json", str(e)) from None


# -- commands ------------------------------------------------------------------


def cmd_check(args) -> Report:
    inst = jsonio.decode_instance(_load(args))
    c = ex.classify(inst)
    props = c.properties
    wanted = _csv_list(args.props) or list(props)
    unknown = [p for p in wanted if p not in props]
    if unknown:
        raise InvalidInstance("unknown_property", ", ".join(unknown), unknown)
    return Report({p: props[p] for p in wanted})


def cmd_classify(args) -> Report:
    inst = jsonio.decode_instance(_load(args))
    c = ex.classify(inst)
    return Report({
        "kind": c.kind,
        "properties": c.properties,
        "canonical_form": list(c.canonical_form[1]),
        "isomorphism": list(c.isomorphism),
        "instance": inst,
    })


def _admissibility(obj, args):
    alg = jsonio.decode_algebra(_need(obj, "algebra"))
    fam = _need(obj, "family")
    if isinstance(fam, dict):
        sets = _need(fam, "explicit")
        if not isinstance(sets, list):
            raise InvalidInstance("bad_family", "explicit must be a list of element lists")
        fam = [[jsonio.decode_element(alg, e) for e in R] for R in sets]
    return dual.make_admissibility(alg, fam)


def _need(obj, key):
    if not isinstance(obj, dict) or key not in obj:
        raise InvalidInstance("missing_field", f"input needs {key!r}", key)
    return obj[key]


def _ideal_elements(alg, mask):
    return [alg.element(b) for b in range(alg.size) if mask >> b & 1]


def cmd_dualize(args) -> Report:
    obj = _load(args)
    if obj.get("kind") == "frame":
        L = jsonio.decode_frame(obj)
        base = check_frame_properties(L).complemented
        W = dual.functor_W(dual.BooleanBasedFrame(L, base))
        return Report({"direction": "W", "algebra": jsonio.encode_algebra(W.algebra),
                       "family": {"explicit": [sorted(R, key=lambda x: x.sort_key()) for R in W.members()]}})
    sys_ = _admissibility(obj, args)
    if not sys_.algebra.is_finite:
        raise InvalidInstance("fincof_not_materialized", "V of a fincof system has no finite frame; use criteria")
    V = dual.functor_V(sys_)
    alg = sys_.algebra
    return Report({
        "direction": "V",
        "frame": V.frame,
        "ideals": [_ideal_elements(alg, m) for m in V.ideals],
        "base": sorted(V.base),
        "frame_properties": ex.frame_properties(V.frame),
    })


def cmd_roundtrip(args) -> Report:
    sys_ = _admissibility(_load(args), args)
    if not sys_.algebra.is_finite:
        raise InvalidInstance("fincof_not_materialized", "round trip needs a finite carrier")
    r = dual.round_trip_check(sys_)
    alg = sys_.algebra
    return Report({
        "isomorphic": r.isomorphic,
        "canonical": r.canonical,
        # element pairs when isomorphic, raw bit-vectors otherwise
        "mapping": [[alg.element(a), alg.element(b)] if r.isomorphic else [a, b] for a, b in r.mapping],
        "reason": r.reason,
    })


def cmd_criteria(args) -> Report:
    sys_ = _admissibility(_load(args), args)
    kw = dict(samples=args.samples, seed=args.seed, support_bound=args.support_bound)
    ax = dual.check_admissibility_axioms(sys_, **kw)
    sub = dual.is_subcomplete_admissibility(sys_, **kw)
    crit = dual.dual_criteria(sys_, **kw)
    return Report({
        "axioms": {str(k): v for k, v in sorted(ax.axioms.items())},
        "axiom_mode": ax.mode,
        "subcomplete": sub.subcomplete,
        "subcomplete_witness": _plain(sub.witness),
        "ultranormal_criterion": crit.ultranormal_criterion,
        "ultraparacompact_criterion": crit.ultraparacompact_criterion,
        "cross_check": crit.cross_check,
        "criteria_mode": crit.mode,
        "notes": list(crit.notes),
    })


def _plain(v):
    return jsonio.to_jsonable(v)


def _bpa(obj, key=None):
    src = obj if key is None else _need(obj, key)
    alg = jsonio.decode_algebra(_need(src, "algebra"))
    gens = [jsonio.decode_partition(alg, p) for p in _need(src, "generators")]
    return alg, generate_partition_filter(alg, gens)


def cmd_bpa(args) -> Report:
    obj = _load(args)
    if "map" in obj:
        sa, sf = _bpa(obj, "source")
        ta, tf = _bpa(obj, "target")
        if not (sa.is_finite and ta.is_finite):
            raise InvalidInstance("fincof_not_materialized", "homomorphisms need finite carriers")
        src, dst = restriction_bpa(sa, sf), restriction_bpa(ta, tf)
        pairs = obj["map"]
        mapping = {}
        for pr in pairs:
            if not (isinstance(pr, list) and len(pr) == 2):
                raise InvalidInstance("bad_map", "map entries are [src, dst] pairs", pr)
            mapping[jsonio.decode_element(sa, pr[0]).bits] = jsonio.decode_element(ta, pr[1]).bits
        r = is_partition_homomorphism(PartitionMap(src, dst, mapping))
        w = r.witness
        return Report({"is_partition_homomorphism": r.ok, "reason": r.reason,
                       "witness": w if not isinstance(w, int) else sa.element(w)})
    alg, filt = _bpa(obj)
    out = {"filter_generators": list(filt.base)}
    if alg.is_finite:
        out["filter"] = list(filt)
        b = restriction_bpa(alg, filt)
        rep = validate_bpa(alg, filt, b.carrier)
        out["carrier"] = [alg.element(x) for x in sorted(b.carrier)]
        L = bpa_to_frame(b)
        out["frame"] = L
        out["frame_properties"] = ex.frame_properties(L)
    else:
        rep = validate_bpa(alg, filt, support_bound=args.support_bound)
    out.update(is_bpa=rep.is_bpa, subcomplete=rep.subcomplete, locally_refinable=rep.locally_refinable,
               witness=rep.witness)
    return Report(out)


def cmd_enumerate(args) -> Report:
    if bool(args.topologies) == bool(args.lattices):
        raise InvalidInstance("bad_options", "give exactly one of --topologies N or --lattices N")
    if args.topologies:
        insts = list(ex.enumerate_topologies(args.topologies))
    else:
        insts = list(ex.enumerate_distributive_lattices(args.lattices))
    rows = []
    for i, inst in enumerate(insts):
        row = {"index": i, "instance": jsonio.encode_instance(inst)}
        if args.classify:
            c = ex.classify(inst)
            row["canonical_form"] = list(c.canonical_form[1])
            row.update(c.properties)
        rows.append(row)
    cols = ["index", "instance"]
    if args.classify:
        props = ex.SPACE_PROPERTIES if args.topologies else ex.FRAME_PROPERTIES
        cols += ["canonical_form", *props]
    return Report({"count": len(rows), "instances": rows}, rows, cols)


def cmd_verify(args) -> Report:
    bounds = {}
    if args.bound is not None:
        bounds["spaces"] = args.bound
        bounds["space_pairs"] = min(args.bound, 3)
    if args.frame_bound is not None:
        bounds["frames"] = args.frame_bound
    names = _csv_list(args.names) or None
    reports = ex.verify_implications(bounds, names)
    rows = [{
        "name": r.name,
        "instance_class": r.instance_class,
        "bound": r.bound,
        "kind": r.kind,
        "status": r.status,
        "checked": r.checked,
        "witness": _witness(r.witness),
    } for r in reports]
    return Report({"implications": rows}, rows,
                  ["name", "instance_class", "bound", "kind", "status", "checked", "witness"])


def _witness(w):
    if w is None:
        return None
    if isinstance(w, tuple):
        return [jsonio.encode_instance(x) for x in w]
    return jsonio.encode_instance(w)


def cmd_search(args) -> Report:
    r = ex.search_separation(_csv_list(args.satisfy), _csv_list(args.violate), args.instance_class,
                             args.bound if args.bound is not None else 3)
    return Report({
        "status": "found" if r.found else f"exhausted({r.bound})",
        "checked": r.checked,
        "witness": _witness(r.instance),
        "properties": r.properties,
    })


def cmd_disjointify(args) -> Report:
    obj = _load(args)
    alg = jsonio.decode_algebra(_need(obj, "algebra"))
    chain = [jsonio.decode_element(alg, e) for e in _need(obj, "chain")]
    return Report({"disjoint": disjointify(alg, chain)})


def cmd_shrink(args) -> Report:
    obj = _load(args)
    X: FiniteSpace = jsonio.decode_space(_need(obj, "space"))
    cover = [X.mask_of(u) for u in _need(obj, "cover")]
    r = shrink_point_finite_cover(X, cover)
    return Report({"shrunk": [X.labels_of(v) for v in r.shrunk], "disjoint": [X.labels_of(v) for v in r.disjoint]})


def cmd_sorgenfrey(args) -> Report:
    cover = jsonio.decode_cover(_load(args))
    xs = cons.sorgenfrey_partition(cover)
    return Report({"breakpoints": xs, "blocks": [[a, b] for a, b in zip(xs, xs[1:])]})


def cmd_ultrametric(args) -> Report:
    obj = _load(args)
    inst = jsonio.decode_ultrametric(obj)
    v = cons.validate_ultrametric(inst)
    out = {"is_ultrametric": v.ok, "witness": list(v.witness) if v.witness else None}
    if "radius" in obj:
        r = jsonio.parse_rational(obj["radius"])
        out["ball_partition"] = [[inst.points[i] for i in b] for b in cons.ball_partition(inst, r)]
    if "C" in obj or "D" in obj:
        C, D = _need(obj, "C"), _need(obj, "D")
        sep = cons.separation_function(inst, C, D)
        out["separation"] = {str(p): f for p, f in zip(inst.points, sep.values)}
        out["certificate_ok"] = sep.certificate_ok
        if v.ok:
            s = cons.clopen_separator(inst, C, D)
            out["separator"] = [inst.points[i] for i in sorted(s.members)]
            out["radii"] = {str(inst.points[i]): r for i, r in sorted(s.radii.items())}
    return Report(out)


HANDLERS = {name: globals()[f"cmd_{name}"] for name in COMMANDS}


# -- plumbing --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="zerodim", description="Finite zero-dimensional topology toolkit.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--in", dest="input", metavar="PATH", help="JSON input file ('-' for stdin)")
    p.add_argument("--props", help="comma-separated property names (check)")
    p.add_argument("--bound", type=int, help="instance bound (points for spaces, size for frames)")
    p.add_argument("--frame-bound", type=int, help="frame size bound for verify")
    p.add_argument("--support-bound", type=int, default=DEFAULT_SUPPORT_BOUND)
    p.add_argument("--seed", type=int, default=dual.DEFAULT_SEED)
    p.add_argument("--samples", type=int, default=dual.DEFAULT_SAMPLES)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--topologies", type=int, metavar="N")
    p.add_argument("--lattices", type=int, metavar="N")
    p.add_argument("--classify", action="store_true")
    p.add_argument("--satisfy", help="comma-separated properties (search)")
    p.add_argument("--violate", help="comma-separated properties (search)")
    p.add_argument("--class", dest="instance_class", choices=("spaces", "frames"), default="spaces")
    p.add_argument("--names", help="comma-separated implication names (verify)")
    return p


def _options(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k != "command"}


def render(command: str, args, report: Report) -> str:
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if report.rows is not None:
            cols = report.columns
            w.writerow(["schema", *cols])
            for row in report.rows:
                w.writerow([jsonio.SCHEMA_VERSION, *(_cell(row.get(c)) for c in cols)])
        else:
            w.writerow(["schema", "key", "value"])
            flat = jsonio.to_jsonable(report.result)
            for k in sorted(flat):
                w.writerow([jsonio.SCHEMA_VERSION, k, _cell(flat[k])])
        return buf.getvalue()
    return jsonio.dumps({
        "schema": jsonio.SCHEMA_VERSION,
        "command": command,
        "options": _options(args),
        "result": report.result,
    })


def _cell(v):
    v = jsonio.to_jsonable(v)
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return ""
    if isinstance(v, (dict, list)):
        return json.dumps(v, sort_keys=True, separators=(",", ":"))
    return v


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        report = HANDLERS[args.command](args)
        text = render(args.command, args, report)
    except InvalidInstance as e:
        stderr.write(jsonio.dumps({"error": e.code, "message": str(e), "witness": _plain(e.witness)}))
        return 2
    except InvariantBreach as e:
        stderr.write(jsonio.dumps({"error": "invariant_breach", "message": str(e)}))
        return 3
    if args.out:
        Path(args.out).write_text(text)
    else:
        stdout.write(text)
    return 0


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
