import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose

from bhk.meanvalue import bessel_laplacian_fd
from bhk.polys import (
    EvenPoly,
    apply_bessel,
    b_harmonic_basis,
    eval_poly,
    is_elliptic,
)

from conftest import GAMMA

P2_SPEC = EvenPoly.from_terms(2, {(2, 0): 4.0, (0, 2): -2.0})


class TestEvenPoly:
    def test_drops_zero_coefficients(self):
        p = EvenPoly.from_terms(2, {(2, 0): 1.0, (0, 2): 0.0})
        assert p.coeffs == (((2, 0), 1.0),)

    def test_rejects_inhomogeneous(self):
        with pytest.raises(ValueError):
            EvenPoly.from_terms(2, {(2, 0): 1.0, (1, 0): 1.0})

    def test_json_round_trip(self):
        obj = P2_SPEC.to_json_dict()
        assert obj == {
            "n": 2,
            "k": 2,
            "terms": [
                {"alpha": [0, 2], "c": -2.0},
                {"alpha": [2, 0], "c": 4.0},
            ],
        }
        assert EvenPoly.from_json_dict(obj) == P2_SPEC

    def test_json_degree_mismatch(self):
        with pytest.raises(ValueError):
            EvenPoly.from_json_dict(
                {"n": 2, "k": 4, "terms": [{"alpha": [2, 0], "c": 1.0}]}
            )


class TestEvalPoly:
    def test_examples(self):
        assert eval_poly(EvenPoly.from_terms(2, {(2, 0): 1.0}), [2.0, 3.0]) == 4.0
        assert eval_poly(P2_SPEC, [1.0, 1.0]) == 2.0
        assert eval_poly(
            EvenPoly.from_terms(2, {(2, 2): 1.0}), [2.0, 0.5]
        ) == 1.0

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            eval_poly(P2_SPEC, [1.0, 2.0, 3.0])

    @given(st.floats(min_value=0.1, max_value=2.0),
           st.floats(min_value=0.1, max_value=2.0),
           st.sampled_from([0.5, 2.0]))
    @settings(max_examples=40, deadline=None)
    def test_homogeneity(self, x1, x2, t):
        x = np.array([x1, x2])
        assert_allclose(
            eval_poly(P2_SPEC, t * x),
            t**2 * eval_poly(P2_SPEC, x),
            rtol=1e-13,
        )


class TestApplyBessel:
    def test_single_monomial(self):
        p = EvenPoly.from_terms(1, {(2,): 1.0})
        out = apply_bessel(p, (0.5,))
        assert out.coeffs == (((0,), 4.0),)

    def test_spec_harmonic_example(self):
        assert apply_bessel(P2_SPEC, GAMMA).is_zero

    def test_radius_squared(self):
        p = EvenPoly.from_terms(2, {(2, 0): 1.0, (0, 2): 1.0})
        out = apply_bessel(p, GAMMA)
        assert out.coeffs == (((0, 0), 12.0),)  # 2n + 4|gamma|

    def test_exponent_one_rejected(self):
        p = EvenPoly.from_terms(2, {(1, 1): 1.0})
        with pytest.raises(ValueError, match="exponent 1"):
            apply_bessel(p, GAMMA)

    def test_matches_finite_differences(self):
        # rel. 1e-6 against the polynomial's local magnitude (the FD stencil
        # cancels values of that size, so an exact-zero target inherits its
        # roundoff scale)
        rng = np.random.default_rng(3)
        for p in b_harmonic_basis(2, 4, GAMMA) + [P2_SPEC,
                                                  EvenPoly.from_terms(2, {(4, 0): 1.0})]:
            bp = apply_bessel(p, GAMMA)
            p_abs = EvenPoly.from_terms(2, {a: abs(c) for a, c in p.coeffs})
            for _ in range(20):
                x = rng.uniform(0.4, 2.0, 2)
                fd = bessel_laplacian_fd(lambda q: eval_poly(p, q), GAMMA, x, h=1e-4)
                ref = eval_poly(bp, x)
                scale = max(1.0, eval_poly(p_abs, x))
                assert abs(fd - ref) <= 1e-6 * max(scale, abs(ref))


class TestBHarmonicBasis:
    def test_k2_span(self):
        basis = b_harmonic_basis(2, 2, GAMMA)
        assert len(basis) == 1
        # spanned ray: (1 + 2 g2) x1^2 - (1 + 2 g1) x2^2 ~ 4 x1^2 - 2 x2^2
        q = basis[0]
        c = q.as_dict()
        assert_allclose(c[(2, 0)] / c[(0, 2)], -2.0, rtol=1e-15)

    def test_n1_trivial(self):
        assert b_harmonic_basis(1, 2, (0.5,)) == []

    def test_k4_kernel_dimension_matches_fd_rank(self):
        basis = b_harmonic_basis(2, 4, (0.5, 0.5))
        assert len(basis) == 1
        # independent route: rank of the FD-sampled map on monomials
        monos = [(4, 0), (2, 2), (0, 4)]
        rng = np.random.default_rng(11)
        pts = rng.uniform(0.5, 1.5, (8, 2))
        cols = []
        for alpha in monos:
            p = EvenPoly.from_terms(2, {alpha: 1.0})
            cols.append(
                [bessel_laplacian_fd(lambda q: eval_poly(p, q), (0.5, 0.5), x, 1e-3)
                 for x in pts]
            )
        m = np.array(cols).T
        s = np.linalg.svd(m, compute_uv=False)
        assert np.sum(s > 1e-6 * s[0]) == 2  # rank 2 -> kernel dim 1

    def test_images_are_exactly_zero(self):
        for gam, k in ((GAMMA, 2), (GAMMA, 4), ((0.5, 0.5), 4), ((1.0, 1.0), 4)):
            for p in b_harmonic_basis(2, k, gam):
                assert apply_bessel(p, gam).coeffs == ()

    def test_even_degree_required(self):
        with pytest.raises(ValueError):
            b_harmonic_basis(2, 3, GAMMA)
        with pytest.raises(ValueError):
            b_harmonic_basis(2, 0, GAMMA)

    def test_classical_flag_allows_odd(self):
        basis = b_harmonic_basis(2, 1, GAMMA, classical_harmonic=True)
        assert {tuple(sorted(p.as_dict())) for p in basis} == {((0, 1),), ((1, 0),)}
        # classical k=3 kernel: harmonic polys of degree 3 in 2 vars (dim 2)
        basis3 = b_harmonic_basis(2, 3, GAMMA, classical_harmonic=True)
        assert len(basis3) == 2

    def test_orthogonal_to_constants_on_weighted_sphere(self, sphere96):
        for k in (2, 4):
            for p in b_harmonic_basis(2, k, GAMMA):
                mean = float(sphere96.weights @ eval_poly(p, sphere96.nodes))
                scale = float(sphere96.weights @ np.abs(eval_poly(p, sphere96.nodes)))
                assert abs(mean) < 1e-10 * scale


class TestIsElliptic:
    def test_examples(self):
        assert is_elliptic(EvenPoly.from_terms(2, {(2, 0): 1.0, (0, 2): 1.0}))
        assert not is_elliptic(P2_SPEC)
        assert is_elliptic(EvenPoly.from_terms(2, {(4, 0): 1.0, (0, 4): 1.0}))

    def test_degree_one_positive_coefficients(self):
        assert is_elliptic(EvenPoly.from_terms(2, {(1, 0): 1.0, (0, 1): 2.0}))

    def test_n3(self):
        p = EvenPoly.from_terms(3, {(2, 0, 0): 1.0, (0, 2, 0): 1.0, (0, 0, 2): 1.0})
        assert is_elliptic(p)
        q = EvenPoly.from_terms(3, {(2, 0, 0): 1.0, (0, 2, 0): 1.0, (0, 0, 2): -1.0})
        assert not is_elliptic(q)

    def test_sample_count_validated(self):
        with pytest.raises(ValueError):
            is_elliptic(P2_SPEC, samples=10)
