"""Acceptance suite: every criterion at its stated tolerance, one line each.

Run with `pytest -s tests/test_acceptance.py` to see the per-criterion
PASS lines.  All equality checks are exact (integer arithmetic); the only
tolerances are the stated wall-clock budgets.
"""

import subprocess
import sys
import time

import numpy as np

import parfir as pf
from parfir import (
    REGION_BOTH,
    REGION_INPUT,
    REGION_OUTPUT,
    Ffa2Form,
    count_costs,
    graphs_isomorphic,
    share_substructures,
    transpose_graph,
)
from parfir.costs import (
    SCHEME_FAST_CONVOLUTION,
    SCHEME_HYBRID,
    SCHEME_ITERATED,
    closed_form,
    reconcile,
)
from parfir.polymatrix import factorization_hybrid4, factorization_iterated4, transfer_of_graph
from parfir.polyphase import pseudocirculant
from parfir.simulate import verify_equivalence


def report(num, text):
    print(f"PASS criterion {num}: {text}")


def all_scheme_graphs(n):
    yield pf.synthesize_naive(n)
    for form in Ffa2Form:
        yield pf.synthesize_iterated(n, form)
    yield pf.synthesize_hybrid(n)


def test_criterion_1_table_reproduction():
    """`cost -n 4,6,8` emits the nine reference (A, D) pairs; < 1 s."""
    want = {
        (SCHEME_FAST_CONVOLUTION, 4): (310, 15),
        (SCHEME_FAST_CONVOLUTION, 6): (3262, 63),
        (SCHEME_FAST_CONVOLUTION, 8): (31270, 255),
        (SCHEME_ITERATED, 4): (260, 40),
        (SCHEME_ITERATED, 6): (2660, 364),
        (SCHEME_ITERATED, 8): (25220, 3280),
        (SCHEME_HYBRID, 4): (241, 21),
        (SCHEME_HYBRID, 6): (2449, 153),
        (SCHEME_HYBRID, 8): (23161, 1221),
    }
    t0 = time.perf_counter()
    r = subprocess.run(
        [sys.executable, "-m", "parfir.cli", "cost", "-n", "4,6,8", "--csv"],
        capture_output=True,
        text=True,
    )
    elapsed = time.perf_counter() - t0
    assert r.returncode == 0
    got = {}
    for line in r.stdout.strip().splitlines()[1:]:
        scheme, n, _, a, d, *_ = line.split(",")
        got[(scheme, int(n))] = (int(a), int(d))
    assert got == want
    assert elapsed < 1.0, f"cost command took {elapsed:.2f}s"
    report(1, f"table values exact, cost command in {elapsed:.2f}s")


def test_criterion_2_stated_structure_counts():
    """Graph-derived counts at the reference design points, zero tolerance."""
    cases = [
        (pf.synthesize_iterated(2, Ffa2Form.DIRECT_PLUS), 20, 4),
        (pf.synthesize_iterated(3, Ffa2Form.DIRECT_PLUS), 76, 13),
        (pf.synthesize_hybrid(2), 19, 3),
        (pf.synthesize_hybrid(3), 71, 8),
    ]
    for g, adds, delays in cases:
        c = count_costs(g)
        assert (c.additions, c.delay_elements) == (adds, delays), g.scheme
    for form in Ffa2Form:
        c = count_costs(pf.build_ffa2(form))
        assert (c.additions, c.delay_elements, c.subfilters) == (4, 1, 3)
    report(2, "iterated 20/4 and 76/13, hybrid 19/3 and 71/8, primitives 4/1/3")


def test_criterion_3_formula_graph_reconciliation():
    """closed_form == count_costs for iterated n=1..6 and hybrid n=1..4; < 10 s."""
    t0 = time.perf_counter()
    for n in range(1, 7):
        assert reconcile(SCHEME_ITERATED, n).match_all, f"iterated n={n}"
    for n in range(1, 5):
        assert reconcile(SCHEME_HYBRID, n).match_all, f"hybrid n={n}"
    elapsed = time.perf_counter() - t0
    assert elapsed < 10.0
    report(3, f"all fields match, {elapsed:.2f}s")


def test_criterion_4_functional_equivalence_property_suite():
    """Each scheme, n <= 5: 100 seeded random (taps, input) trials, exact; < 60 s."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(20240809)
    checked = 0
    for n in range(1, 6):
        taps_len, x_len = 2**n * 4, 2**n * 16
        for g in all_scheme_graphs(n):
            for rep in range(10):  # 10 tap draws x 10 input trials = 100
                h = tuple(int(v) for v in rng.integers(-8, 9, size=taps_len))
                r = verify_equivalence(g, h, trials=10, x_len=x_len, seed=1000 * n + rep)
                assert r["pass"] and r["max_abs_diff"] == 0, (g.scheme, n, rep)
                checked += r["trials"]
    elapsed = time.perf_counter() - t0
    assert elapsed < 60.0, f"{elapsed:.1f}s"
    report(4, f"{checked} trials across 30 scheme/level combinations, max|diff|=0, {elapsed:.1f}s")


def test_criterion_5_matrix_identities():
    """Factorizations and graph transfer matrices equal the blocked map; < 10 s."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(5)
    for taps_len in (8, 16):
        for _ in range(25):
            h = tuple(int(v) for v in rng.integers(-8, 9, size=taps_len))
            ref = pseudocirculant(h, 4)
            assert factorization_iterated4(h) == ref
            assert factorization_hybrid4(h) == ref
    for n in (1, 2, 3):
        h = tuple(int(v) for v in rng.integers(-8, 9, size=2**n * 4))
        ref = pseudocirculant(h, 2**n)
        for g in all_scheme_graphs(n):
            assert transfer_of_graph(g, h) == ref, (g.scheme, n)
    elapsed = time.perf_counter() - t0
    assert elapsed < 10.0
    report(5, f"50 factorization instances and 18 transfer matrices exact, {elapsed:.2f}s")


def test_criterion_6_transposition_properties():
    """Involution, cost preservation, functional equivalence; primitives and n <= 3."""
    rng = np.random.default_rng(6)
    graphs = [pf.build_ffa2(f) for f in Ffa2Form]
    for n in (1, 2, 3):
        graphs.extend(all_scheme_graphs(n))
    for g in graphs:
        t = transpose_graph(g)
        assert count_costs(t) == count_costs(g), g.scheme
        assert graphs_isomorphic(transpose_graph(t), g), g.scheme
        h = tuple(int(v) for v in rng.integers(-8, 9, size=4 * g.L))
        x = tuple(int(v) for v in rng.integers(-8, 9, size=8 * g.L))
        assert pf.simulate(t, h, x) == pf.simulate(g, h, x), g.scheme
    report(6, f"{len(graphs)} structures: involution, costs, behavior all preserved")


def delay_sides(g):
    from parfir.graph import KIND_DELAY, KIND_SUBFILTER

    below_subfilter = set()
    for nid in g.topological_order():
        if any(
            src in below_subfilter or g.node(src).kind == KIND_SUBFILTER
            for src, _ in g.in_edges(nid)
        ):
            below_subfilter.add(nid)
    return [
        "output" if nd.id in below_subfilter else "input"
        for nd in g.nodes
        if nd.kind == KIND_DELAY
    ]


def test_criterion_7_delay_distribution():
    """Hybrid n >= 2 has delays on both sides; direct iterated only output side."""
    for n in (2, 3, 4):
        sides = set(delay_sides(pf.synthesize_hybrid(n)))
        assert sides == {"input", "output"}, f"hybrid n={n}"
    for n in (1, 2, 3, 4):
        for form in (Ffa2Form.DIRECT_PLUS, Ffa2Form.DIRECT_MINUS):
            assert set(delay_sides(pf.synthesize_iterated(n, form))) == {"output"}
        for form in (Ffa2Form.TRANSPOSED_PLUS, Ffa2Form.TRANSPOSED_MINUS):
            # transposes of the direct structures: the mirrored property
            assert set(delay_sides(pf.synthesize_iterated(n, form))) == {"input"}
    report(7, "hybrid delays straddle the subfilters; iterated delays are one sided")


def test_criterion_8_addition_monotonicity():
    """Hybrid < iterated < fast-convolution additions for 2 <= n <= 12."""
    for n in range(2, 13):
        a_h = closed_form(SCHEME_HYBRID, n).additions
        a_i = closed_form(SCHEME_ITERATED, n).additions
        a_f = closed_form(SCHEME_FAST_CONVOLUTION, n).additions
        assert a_h < a_i < a_f, n
    report(8, "strict ordering holds for n = 2..12")


def test_criterion_9_sharing_pass_soundness():
    """Sharing preserves behavior on all synthesized graphs n <= 3, idempotent;
    the (73, 7) output-side point is reported, not gated."""
    rng = np.random.default_rng(9)
    for n in (1, 2, 3):
        for g in all_scheme_graphs(n):
            h = tuple(int(v) for v in rng.integers(-8, 9, size=4 * g.L))
            x = tuple(int(v) for v in rng.integers(-8, 9, size=8 * g.L))
            want = pf.simulate(g, h, x)
            for region in (REGION_INPUT, REGION_OUTPUT, REGION_BOTH):
                s = share_substructures(g, region)
                assert pf.simulate(s, h, x) == want, (g.scheme, region)
                again = share_substructures(s, region)
                assert graphs_isomorphic(again, s), (g.scheme, region)
    out = count_costs(share_substructures(pf.synthesize_hybrid(3), REGION_OUTPUT))
    achieved = (out.additions, out.delay_elements)
    note = (
        "output-side n=3 point: reached (73, 7)"
        if achieved == (73, 7)
        else f"output-side n=3 point: achieved {achieved}, reference point (73, 7) not reached (non-gating)"
    )
    report(9, f"sharing sound and idempotent on 18 graphs; {note}")
