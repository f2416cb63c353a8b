"""Exact polynomial algebra, the constant-matrix identities, and the
4-parallel factorizations against the pseudo-circulant oracle."""

import numpy as np
import pytest

from parfir.polymatrix import (
    D4,
    D4_HYBRID,
    D24,
    P2,
    P4,
    Q2,
    Poly,
    PolyMatrix,
    factorization_hybrid4,
    factorization_iterated4,
    pm_diag,
    pm_kron,
    pm_mul,
    transfer_of_graph,
)
from parfir.polyphase import pseudocirculant


class TestPoly:
    def test_trim_and_eq(self):
        assert Poly((1, 2, 0, 0)) == Poly((1, 2))
        assert Poly(()) == Poly((0, 0))
        assert Poly((3,)) == 3

    def test_arithmetic(self):
        a, b = Poly((1, 2)), Poly((0, 1, 1))
        assert a + b == Poly((1, 3, 1))
        assert a - a == Poly(())
        assert a * b == Poly((0, 1, 3, 2))
        assert 2 * a == Poly((2, 4))
        assert a.shifted(2) == Poly((0, 0, 1, 2))

    def test_strided(self):
        assert Poly.from_strided((5, 6), 4) == Poly((5, 0, 0, 0, 6))


class TestConstantIdentities:
    def test_q2_times_p2(self):
        # frozen by hand multiplication of the 3x3 and 3x2 constants
        assert pm_mul(Q2, P2) == PolyMatrix([[1, 0], [0, 0], [0, 1]])

    def test_p4_is_involution(self):
        assert pm_mul(P4, P4) == PolyMatrix.identity(4)

    def test_d24_at_zero_delay(self):
        # dropping the z^-4 term leaves the leading identity block
        truncated = PolyMatrix(
            [[Poly(e.coeffs[:1]) for e in row] for row in D24.entries]
        )
        assert truncated == PolyMatrix([[1, 0, 0], [0, 1, 0]])

    def test_kron_shape(self):
        assert pm_kron(P2, P2).rows == 9
        assert pm_kron(P2, P2).cols == 4

    def test_diag(self):
        a, b = Poly((1, 2)), Poly((3,))
        assert pm_diag([a, b]) == PolyMatrix([[a, 0], [0, b]])

    def test_mixed_product_property(self):
        rng = np.random.default_rng(11)
        for _ in range(25):
            ra, ca = int(rng.integers(1, 4)), int(rng.integers(1, 4))
            rb, cb = int(rng.integers(1, 4)), int(rng.integers(1, 4))
            cc, cd = int(rng.integers(1, 4)), int(rng.integers(1, 4))
            A = PolyMatrix(rng.integers(-5, 6, size=(ra, ca)).tolist())
            B = PolyMatrix(rng.integers(-5, 6, size=(rb, cb)).tolist())
            C = PolyMatrix(rng.integers(-5, 6, size=(ca, cc)).tolist())
            D = PolyMatrix(rng.integers(-5, 6, size=(cb, cd)).tolist())
            lhs = pm_mul(pm_kron(A, B), pm_kron(C, D))
            rhs = pm_kron(pm_mul(A, C), pm_mul(B, D))
            assert lhs == rhs

    def test_mul_dimension_mismatch(self):
        with pytest.raises(ValueError):
            pm_mul(P2, P2)

    def test_printed_combine_constants_shape(self):
        assert (D4.rows, D4.cols) == (4, 6)
        assert (D4_HYBRID.rows, D4_HYBRID.cols) == (4, 6)


class TestFactorizations:
    @pytest.mark.parametrize("taps_len", [8, 16])
    def test_both_equal_pseudocirculant(self, taps_len):
        rng = np.random.default_rng(taps_len)
        for _ in range(25):
            h = tuple(int(v) for v in rng.integers(-8, 9, size=taps_len))
            ref = pseudocirculant(h, 4)
            assert factorization_iterated4(h) == ref
            assert factorization_hybrid4(h) == ref

    def test_impulse_taps_give_blocked_identity(self):
        h = (1, 0, 0, 0)
        m = factorization_iterated4(h)
        assert m == PolyMatrix.identity(4)
        assert factorization_hybrid4(h) == PolyMatrix.identity(4)

    def test_divisibility_errors(self):
        with pytest.raises(ValueError):
            factorization_iterated4((1, 2, 3))
        with pytest.raises(ValueError):
            factorization_hybrid4((1, 2, 3, 4, 5, 6))


class TestTransferOfGraph:
    def test_ffa2_matches_blocked_map(self):
        from parfir import Ffa2Form, build_ffa2

        rng = np.random.default_rng(5)
        h = tuple(int(v) for v in rng.integers(-8, 9, size=6))
        g = build_ffa2(Ffa2Form.DIRECT_PLUS)
        assert transfer_of_graph(g, h) == pseudocirculant(h, 2)

    def test_every_scheme_up_to_n3(self):
        import parfir as pf

        rng = np.random.default_rng(6)
        for n in (1, 2, 3):
            h = tuple(int(v) for v in rng.integers(-8, 9, size=2**n * 4))
            graphs = [pf.synthesize_naive(n), pf.synthesize_hybrid(n)]
            graphs += [pf.synthesize_iterated(n, f) for f in pf.ALL_FORMS]
            ref = pseudocirculant(h, 2**n)
            for g in graphs:
                assert transfer_of_graph(g, h) == ref, (g.scheme, n)

    def test_divisibility(self):
        import parfir as pf

        with pytest.raises(ValueError):
            transfer_of_graph(pf.synthesize_hybrid(2), (1, 2, 3))


from hypothesis import given
from hypothesis import strategies as st

polys = st.lists(st.integers(-20, 20), max_size=6).map(Poly)


@given(polys, polys, polys)
def test_poly_ring_laws(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a * (b * c) == (a * b) * c
