"""Acceptance criteria 1-10. Each test records a PASS/FAIL line that is
printed in the terminal summary (and immediately, when run with ``-s``)."""

import io
import json
import time
from contextlib import contextmanager
from itertools import combinations

from zerodim import explorer as ex
from zerodim.boolalg import make_algebra, make_partition
from zerodim.cli import run
from zerodim.constructions import (
    clopen_separator,
    first_gap,
    hierarchical_instances,
    is_refining_partition,
    make_ultrametric,
    separation_function,
    sorgenfrey_partition,
    validate_ultrametric,
)
from zerodim.duality import (
    check_admissibility_axioms,
    dual_criteria,
    functor_V,
    is_subcomplete_admissibility,
    make_admissibility,
    round_trip_check,
)
from zerodim.frames import check_frame_properties, check_space_properties, shrink_point_finite_cover
from zerodim.partalg import Carrier, bpa_to_frame, generate_partition_filter, restriction_bpa

from . import oracles
from .cli_cases import CASES
from .conftest import ACCEPTANCE_LINES
from .test_constructions import _sweep


@contextmanager
def criterion(number: int, title: str):
    start = time.perf_counter()
    ok = False
    try:
        yield
        ok = True
    finally:
        took = time.perf_counter() - start
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'} {title} ({took:.2f} s)"
        ACCEPTANCE_LINES.append(line)
        print(line)


def test_criterion_01_enumeration():
    with criterion(1, "topology counts 1, 4, 29, 355 with oracle agreement"):
        for n, expected in zip(range(1, 5), (1, 4, 29, 355)):
            t = time.perf_counter()
            ours = [frozenset(X.opens) for X in ex.enumerate_topologies(n)]
            elapsed = time.perf_counter() - t
            theirs = oracles.topologies(n)
            assert len(ours) == len(set(ours)) == expected == len(theirs)
            assert set(ours) == set(theirs)
            if n == 4:
                assert elapsed < 60


def test_criterion_02_space_frame_agreement():
    with criterion(2, "space flags equal open-set frame flags on 34 topologies"):
        spaces = ex.all_topologies(3)
        assert len(spaces) == 34
        disagreements = [(X, d) for X in spaces if (d := ex.agreement_space_frame(X))]
        assert disagreements == []


def test_criterion_03_theorem_suite():
    with criterion(3, "upc=>un, un=>zd verified; normal=>un refuted"):
        t = time.perf_counter()
        names = ["upc_implies_un", "un_implies_zd", "frame_upc_implies_un", "frame_un_implies_zd",
                 "normal_implies_un"]
        reports = {r.name: r for r in ex.verify_implications({"spaces": 4, "frames": 8}, names)}
        for name in names[:4]:
            assert reports[name].status == "verified"
            assert reports[name].bound == (8 if name.startswith("frame") else 4)
        refuted = ex.verify_implication(ex.registered("normal_implies_un"), 2)
        assert refuted.refuted and refuted.witness is not None
        props = ex.classify(refuted.witness).properties
        assert props["normal"] and not props["ultranormal"]
        assert time.perf_counter() - t < 300


def test_criterion_04_ultranormal_characterization_and_shrinking():
    with criterion(4, "un <=> normal and szd; shrink postconditions at n <= 3"):
        rep = ex.verify_implication(ex.registered("un_iff_normal_and_szd"), 3)
        assert rep.status == "verified"
        covers = 0
        for X in ex.all_topologies(3):
            r = check_space_properties(X)
            assert (r.ultranormal and r.zero_dimensional) == (r.normal and r.strongly_zero_dimensional)
            if not (r.ultranormal and r.zero_dimensional):
                continue
            clopen = set(X.clopens)
            for cover in oracles.open_covers(X.n, X.opens):
                res = shrink_point_finite_cover(X, cover, r)
                for u, v, p in zip(cover, res.shrunk, res.disjoint):
                    assert v in clopen and p in clopen
                    assert v & ~u == 0 and p & ~u == 0
                assert oracles.union(res.disjoint) == X.full
                assert all(not a & b for a, b in combinations(res.disjoint, 2))
                covers += 1
        assert covers > 0


def test_criterion_05_ideal_criteria():
    with criterion(5, "ideal criteria match ultraparacompactness at n <= 3"):
        mismatches = []
        for X in ex.all_topologies(3):
            upc = oracles.ultraparacompact(X.n, X.opens) and oracles.zero_dimensional(X.n, X.opens)
            if ex.trace_ideal_criterion(X) != upc:
                mismatches.append(("trace_ideal", X))
            if oracles.zero_dimensional(X.n, X.opens) and not ex.ideal_open_bijection(X).ok:
                mismatches.append(("open_ideal", X))
        assert mismatches == []


def test_criterion_06_duality_round_trip():
    with criterion(6, "W(V(B, A)) iso (B, A) and dual criteria agree, <= 3 atoms"):
        t = time.perf_counter()
        for k in range(4):
            sys_ = make_admissibility(make_algebra("finite_atoms", k), "all_with_lub")
            rt = round_trip_check(sys_)
            assert rt.isomorphic and rt.canonical
            crit = dual_criteria(sys_)
            props = check_frame_properties(functor_V(sys_).frame)
            assert crit.ultranormal_criterion == (props.ultranormal and props.zero_dimensional)
            assert crit.ultraparacompact_criterion == (props.ultraparacompact and props.zero_dimensional)
        assert time.perf_counter() - t < 30


def _fincof_reports():
    FC = make_algebra("fincof")
    lub_sys = make_admissibility(FC, "all_with_lub")
    fg = make_admissibility(FC, "finitely_generated")
    return (
        is_subcomplete_admissibility(lub_sys, support_bound=8, seed=1),
        check_admissibility_axioms(fg, support_bound=8, seed=1),
        is_subcomplete_admissibility(fg, support_bound=8, seed=1),
        dual_criteria(fg, support_bound=8, seed=1),
    )


def test_criterion_07_fincof_dichotomies():
    with criterion(7, "fincof: all_with_lub not subcomplete, finitely_generated passes"):
        lub_sub, axioms, fg_sub, crit = _fincof_reports()
        assert not lub_sub.subcomplete
        assert {lub_sub.witness["R"].blocks[0].residue, lub_sub.witness["S"].blocks[0].residue} == {0, 1}
        assert all(axioms.axioms[i] for i in (1, 2, 3, 4))
        assert fg_sub.subcomplete
        assert crit.ultraparacompact_criterion is True
        assert repr(_fincof_reports()) == repr((lub_sub, axioms, fg_sub, crit))


def test_criterion_08_bpa_functor():
    with criterion(8, "BPA frames ultraparacompact for filters from <= 2 generators, <= 3 atoms"):
        failures, checked = [], 0
        for k in range(4):
            alg = make_algebra("finite_atoms", k)
            parts = [make_partition(alg, [alg.element(x) for x in p]) for p in Carrier(alg).partitions()]
            for gens in [()] + [(p,) for p in parts] + list(combinations(parts, 2)):
                L = bpa_to_frame(restriction_bpa(alg, generate_partition_filter(alg, gens)))
                checked += 1
                if not check_frame_properties(L).ultraparacompact:
                    failures.append((k, gens))
        assert failures == [] and checked == 24  # 2 + 2 + 4 + 16 over k = 0..3


def test_criterion_09_constructions():
    with criterion(9, "ultrametric certificates 100/100, control fails, Sorgenfrey sweep"):
        passed = 0
        for inst in hierarchical_instances(100, 12, seed=1):
            assert validate_ultrametric(inst)
            C, D = [0], [inst.n - 1]
            if separation_function(inst, C, D).certificate_ok:
                S = clopen_separator(inst, C, D)
                if all(r > 0 for r in S.radii.values()):
                    passed += 1
        assert passed == 100
        xs = [0, 10, 11, 20]
        control = make_ultrametric("abcd", [[abs(x - y) for y in xs] for x in xs])
        assert not validate_ultrametric(control)
        swept = 0
        for cover in _sweep():
            if first_gap(cover) is None:
                assert is_refining_partition(cover, sorgenfrey_partition(cover))
                swept += 1
        assert swept > 1000


def _invoke(tmp_path, command, obj, extra):
    argv = [command, *extra]
    if obj is not None:
        p = tmp_path / f"{command}.json"
        p.write_text(json.dumps(obj))
        argv += ["--in", str(p)]
    out = io.StringIO()
    code = run(argv, out, io.StringIO())
    return code, out.getvalue().encode()


def test_criterion_10_determinism(tmp_path):
    with criterion(10, "every CLI command is byte-identical across reruns"):
        for name, (command, obj, extra) in sorted(CASES.items()):
            first = _invoke(tmp_path, command, obj, extra)
            second = _invoke(tmp_path, command, obj, extra)
            assert first[0] == 0, name
            assert first == second, name
