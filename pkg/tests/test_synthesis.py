"""Synthesized structures: count conformance, combos, delay distribution."""

from fractions import Fraction

import pytest

import parfir as pf
from parfir import Ffa2Form, count_costs
from parfir.graph import KIND_DELAY, KIND_SUBFILTER, StructureGraph
from parfir.synthesis import (
    DivisibilityError,
    SubfilterSpec,
    nesting_order,
    subfilter_taps,
    synthesize_hybrid,
    synthesize_iterated,
    synthesize_naive,
)


def iterated_closed_form(n):
    return 4 * (3**n - 2**n), (3**n - 1) // 2


def hybrid_closed_form(n):
    return 11 * 3 ** (n - 1) - 7 * 2 ** (n - 1), (2**n + 3 ** (n - 1) - 1) // 2


def delay_sides(g: StructureGraph):
    """Classify each delay as input side or output side of the subfilters."""
    has_sub_above = set()
    for nid in g.topological_order():
        nd = g.node(nid)
        if any(src in has_sub_above or g.node(src).kind == KIND_SUBFILTER for src, _ in g.in_edges(nid)):
            has_sub_above.add(nid)
    sides = []
    for nd in g.nodes:
        if nd.kind == KIND_DELAY:
            sides.append("output" if nd.id in has_sub_above else "input")
    return sides


class TestIterated:
    @pytest.mark.parametrize("n", range(1, 7))
    def test_counts_match_closed_form(self, n):
        a, d = iterated_closed_form(n)
        for form in (Ffa2Form.DIRECT_PLUS, Ffa2Form.TRANSPOSED_MINUS):
            c = count_costs(synthesize_iterated(n, form))
            assert (c.additions, c.delay_elements, c.subfilters) == (a, d, 3**n)

    def test_n2_reference_values(self):
        c = count_costs(synthesize_iterated(2, Ffa2Form.DIRECT_PLUS))
        assert (c.additions, c.delay_elements) == (20, 4)

    def test_n1_is_the_primitive(self):
        for form in Ffa2Form:
            a = synthesize_iterated(1, form)
            b = pf.build_ffa2(form)
            assert pf.graphs_isomorphic(a, b)

    def test_rejects_n0(self):
        with pytest.raises(ValueError):
            synthesize_iterated(0, Ffa2Form.DIRECT_PLUS)

    def test_leaf_tap_lengths(self):
        g = synthesize_iterated(3, Ffa2Form.DIRECT_PLUS, tap_len=4)
        specs = [nd.param for nd in g.nodes if nd.kind == KIND_SUBFILTER]
        assert len(specs) == 27
        assert all(s.tap_len == 4 for s in specs)
        assert count_costs(g).multiplications == 27 * 4

    def test_multiplication_census(self):
        # total multiplications = N (3/2)^n with N = tap_len 2^n
        for n in (1, 2, 3):
            tap_len = 4
            g = synthesize_iterated(n, Ffa2Form.DIRECT_PLUS, tap_len=tap_len)
            N = tap_len * 2**n
            assert count_costs(g).multiplications == N * Fraction(3, 2) ** n
        # at n=1 this equals the single-level bound 2N - N/2
        N = 8
        assert N * Fraction(3, 2) == 2 * N - N // 2


class TestHybrid:
    @pytest.mark.parametrize("n", range(1, 5))
    def test_counts_match_closed_form(self, n):
        a, d = hybrid_closed_form(n)
        c = count_costs(synthesize_hybrid(n))
        assert (c.additions, c.delay_elements, c.subfilters) == (a, d, 3**n)

    def test_reference_values(self):
        c2 = count_costs(synthesize_hybrid(2))
        assert (c2.additions, c2.delay_elements) == (19, 3)
        c3 = count_costs(synthesize_hybrid(3))
        assert (c3.additions, c3.delay_elements) == (71, 8)

    def test_adder_count_matches_formula_beyond_n4(self):
        for n in (5, 6):
            c = count_costs(synthesize_hybrid(n))
            assert c.additions == hybrid_closed_form(n)[0]
            assert c.subfilters == 3**n

    def test_n1_degenerates_to_direct_plus(self):
        g = synthesize_hybrid(1)
        assert g.scheme == "hybrid"
        assert pf.graphs_isomorphic(g, pf.build_ffa2(Ffa2Form.DIRECT_PLUS))

    def test_rejects_n0(self):
        with pytest.raises(ValueError):
            synthesize_hybrid(0)

    def test_unshared_variant_costs(self):
        c = count_costs(synthesize_hybrid(2, input_sharing=False))
        assert (c.additions, c.delay_elements) == (20, 4)


class TestNaive:
    @pytest.mark.parametrize("n", range(0, 4))
    def test_counts(self, n):
        L = 2**n
        c = count_costs(synthesize_naive(n))
        assert (c.additions, c.delay_elements, c.subfilters) == (L * (L - 1), L - 1, L * L)

    def test_unit_vector_combos(self):
        g = synthesize_naive(2)
        combos = [nd.param.combo for nd in g.nodes if nd.kind == KIND_SUBFILTER]
        assert all(sum(map(abs, c)) == 1 for c in combos)


class TestDelayDistribution:
    @pytest.mark.parametrize("n", (2, 3, 4))
    def test_hybrid_has_delays_on_both_sides(self, n):
        sides = delay_sides(synthesize_hybrid(n))
        assert "input" in sides and "output" in sides

    @pytest.mark.parametrize("n", (1, 2, 3, 4))
    def test_direct_iterated_delays_all_output_side(self, n):
        for form in (Ffa2Form.DIRECT_PLUS, Ffa2Form.DIRECT_MINUS):
            sides = delay_sides(synthesize_iterated(n, form))
            assert set(sides) == {"output"}

    @pytest.mark.parametrize("n", (1, 2, 3))
    def test_transposed_iterated_delays_all_input_side(self, n):
        for form in (Ffa2Form.TRANSPOSED_PLUS, Ffa2Form.TRANSPOSED_MINUS):
            sides = delay_sides(synthesize_iterated(n, form))
            assert set(sides) == {"input"}


class TestNestingOrder:
    def test_n2_matches_p4(self):
        assert nesting_order(2) == (0, 2, 1, 3)

    def test_bit_interleaving(self):
        assert nesting_order(3) == (0, 4, 2, 6, 1, 5, 3, 7)
        perm = nesting_order(4)
        assert sorted(perm) == list(range(16))
        assert tuple(perm[perm[i]] for i in range(16)) == tuple(range(16))


class TestSubfilterTaps:
    def test_sum_combo_n1(self):
        h = (1, 2, 3, 4, 5, 6)
        spec = SubfilterSpec((1, 1), 3)
        assert subfilter_taps(spec, h, 1) == (3, 7, 11)

    def test_unit_combo_is_phase(self):
        h = tuple(range(8))
        spec = SubfilterSpec((0, 0, 1, 0), 2)
        assert subfilter_taps(spec, h, 2) == (2, 6)

    def test_middle_of_middle_is_full_phase_sum(self):
        # row 4 of the two-level spreading matrix sums all four phases
        g = synthesize_iterated(2, Ffa2Form.DIRECT_PLUS)
        specs = [nd.param for nd in g.nodes if nd.kind == KIND_SUBFILTER]
        assert SubfilterSpec((1, 1, 1, 1), 1) in specs
        h = (1, 2, 3, 4, 5, 6, 7, 8)
        assert subfilter_taps(SubfilterSpec((1, 1, 1, 1), 2), h, 2) == (10, 26)

    def test_divisibility(self):
        with pytest.raises(DivisibilityError):
            subfilter_taps(SubfilterSpec((1, 0, 0, 0), 1), (1, 2, 3), 2)

    def test_iterated_leaf_combos_cover_spreading_rows(self):
        # the 9 leaf combos of the two-level structure are exactly the rows
        # of the spreading matrix applied after the nesting permutation
        from parfir.polymatrix import P2, P4, pm_kron, pm_mul

        g = synthesize_iterated(2, Ffa2Form.DIRECT_PLUS)
        combos = {nd.param.combo for nd in g.nodes if nd.kind == KIND_SUBFILTER}
        rows = pm_mul(pm_kron(P2, P2), P4)
        expect = set()
        for i in range(9):
            expect.add(tuple(int(rows.entry(i, j).coeffs[0]) if rows.entry(i, j).coeffs else 0 for j in range(4)))
        assert combos == expect


class TestSchemeDispatch:
    def test_dispatcher_builds_each_kind(self):
        from parfir.synthesis import Scheme, synthesize

        it = synthesize(Scheme("iterated", 2, Ffa2Form.TRANSPOSED_PLUS))
        assert it.scheme == "iterated/transposed-plus" and it.L == 4
        hy = synthesize(Scheme("hybrid", 3))
        assert hy.scheme == "hybrid" and hy.L == 8
        nv = synthesize(Scheme("naive", 1))
        assert nv.scheme == "naive" and nv.L == 2
        with pytest.raises(ValueError):
            synthesize(Scheme("winograd", 2))
