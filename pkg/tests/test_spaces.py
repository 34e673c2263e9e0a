import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from normdisc.spaces import (
    FrequencySet,
    PointSet,
    Quadrature,
    TrigPolynomial,
    build_box,
    build_dyadic_block,
    build_hyperbolic_cross,
    dirichlet_kernel,
    dirichlet_poly,
    freqset,
    grid_P,
    normalized_dirichlet_poly,
    poly_norm,
    random_trig_poly,
    real_trig_system,
    real_trig_system_on_grid,
    reconstruct_on_grid,
    tabulated_system,
    theta,
    translate_poly,
)


class TestFrequencySets:
    def test_box_1d(self):
        q = build_box([2])
        assert q.freqs == ((-2,), (-1,), (0,), (1,), (2,))
        assert len(q) == 5 and q.symmetric

    def test_box_2d_size(self):
        assert len(build_box([2, 3])) == 5 * 7
        assert theta([2, 3]) == 35

    def test_dyadic_blocks(self):
        assert build_dyadic_block([0]).freqs == ((0,),)
        assert build_dyadic_block([1]).freqs == ((-1,), (1,))
        assert build_dyadic_block([2]).freqs == ((-3,), (-2,), (2,), (3,))
        assert set(build_dyadic_block([1, 0])) == {(-1, 0), (1, 0)}

    def test_dyadic_blocks_partition_box(self):
        # blocks with s <= n tile the nonneg box [-(2^n - 1), 2^n - 1]
        n = 3
        union = set()
        total = 0
        for s in range(n + 1):
            b = build_dyadic_block([s])
            total += len(b)
            union.update(b.freqs)
        assert total == len(union) == 2 ** (n + 1) - 1

    @pytest.mark.parametrize("n,size", [(0, 1), (1, 3), (2, 7), (3, 15), (4, 31)])
    def test_hyperbolic_cross_1d_sizes(self, n, size):
        assert len(build_hyperbolic_cross(n, 1)) == size

    def test_hyperbolic_cross_2d(self):
        q = build_hyperbolic_cross(1, 2)
        assert set(q) == {(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1)}

    def test_duplicates_rejected(self):
        with pytest.raises(ValueError):
            freqset([(1,), (1,)])

    def test_neg_index(self):
        q = freqset([(-2,), (0,), (2,)])
        neg = q.neg_index
        assert neg[q.index[(2,)]] == q.index[(-2,)]
        assert q.symmetric

    def test_json_roundtrip(self):
        q = build_hyperbolic_cross(2, 2)
        assert FrequencySet.from_json(q.to_json()) == q


class TestTrigPolynomials:
    def test_eval_single_mode(self):
        f = TrigPolynomial(freqset([(3,)]), [1.0 + 0j])
        x = 0.7
        assert f.evaluate(x) == pytest.approx(np.exp(3j * x))

    def test_parseval(self, rng):
        q = build_box([4])
        f = random_trig_poly(q, rng)
        assert poly_norm(f, 2) == pytest.approx(f.l2_norm(), abs=1e-10)

    def test_real_sampler_is_real(self, rng):
        q = build_hyperbolic_cross(3, 1)
        f = random_trig_poly(q, rng, real=True)
        assert f.is_real()
        vals = f.evaluate(rng.uniform(0, 2 * math.pi, size=(50, 1)))
        assert np.abs(vals.imag).max() < 1e-10

    def test_translate(self, rng):
        q = build_box([3])
        f = random_trig_poly(q, rng)
        y = 1.1
        g = translate_poly(f, y)
        x = np.array([[0.4], [2.2]])
        assert np.allclose(g.evaluate(x), f.evaluate(x - y))

    def test_dirichlet_peak(self):
        q = build_box([5])
        assert dirichlet_kernel(q, 0.0) == pytest.approx(len(q))
        w = normalized_dirichlet_poly(q)
        assert w.l2_norm() == pytest.approx(1.0)

    def test_arithmetic(self, rng):
        q = build_box([2])
        f = random_trig_poly(q, rng)
        g = random_trig_poly(q, rng)
        x = 0.9
        assert (f + g).evaluate(x) == pytest.approx(f.evaluate(x) + g.evaluate(x))
        assert (2.0 * f - g).evaluate(x) == pytest.approx(2 * f.evaluate(x) - g.evaluate(x))


class TestGridIdentities:
    @pytest.mark.parametrize("n_vec", [[1], [3], [1, 1], [2, 1]])
    def test_reconstruction_exact(self, n_vec, rng):
        q = build_box(n_vec)
        f = random_trig_poly(q, rng)
        g = reconstruct_on_grid(f, n_vec)
        assert np.abs(f.coeffs - g.coeffs).max() < 1e-10

    def test_reconstruction_subset_support(self, rng):
        # support strictly inside the box still reconstructs
        q = build_hyperbolic_cross(2, 1)
        f = random_trig_poly(q, rng)
        g = reconstruct_on_grid(f, [4])
        assert np.abs(f.coeffs - g.coeffs).max() < 1e-10

    @pytest.mark.parametrize("n_vec", [[2], [1, 1]])
    def test_mean_square_exact_on_grid(self, n_vec, rng):
        q = build_box(n_vec)
        pts = grid_P(n_vec).points
        for _ in range(5):
            f = random_trig_poly(q, rng)
            vals = f.evaluate(pts)
            assert (np.abs(vals) ** 2).mean() == pytest.approx(f.l2_norm() ** 2, abs=1e-10)

    def test_grid_size(self):
        assert grid_P([3]).m == theta([3]) == 7
        assert grid_P([1, 2]).m == theta([1, 2]) == 15

    def test_mean_abs_not_exact_on_grid(self):
        # the analogous q=1 identity fails: 1 + e^{ix} on the 3-point grid
        q = build_box([1])
        f = TrigPolynomial(q, np.array([0, 1.0, 1.0], dtype=complex))
        pts = grid_P([1]).points
        grid_mean = np.abs(f.evaluate(pts)).mean()
        true_l1 = poly_norm(f, 1, Quadrature.tensor_torus([1], oversample=400))
        assert abs(grid_mean - true_l1) > 0.05


class TestNorms:
    def test_constant_all_p(self):
        c = TrigPolynomial(freqset([(0,)]), [3.0 + 0j])
        for p in (1, 1.5, 2, 4):
            assert poly_norm(c, p) == pytest.approx(3.0)
        assert poly_norm(c, math.inf) == pytest.approx(3.0)

    def test_norm_monotone_in_p(self, rng):
        f = random_trig_poly(build_box([3]), rng)
        quad = Quadrature.tensor_torus([3], oversample=16)
        n1 = poly_norm(f, 1, quad)
        n2 = poly_norm(f, 2, quad)
        ninf = poly_norm(f, math.inf, quad)
        assert n1 <= n2 + 1e-12 <= ninf + 1e-9

    def test_sup_norm_dirichlet(self):
        q = build_box([4])
        assert poly_norm(dirichlet_poly(q), math.inf) == pytest.approx(len(q), rel=1e-8)

    def test_sup_norm_refinement_beats_grid(self):
        # peak deliberately off the coarse grid
        f = translate_poly(dirichlet_poly(build_box([6])), 0.123456)
        coarse = Quadrature.tensor_torus([6], oversample=1)
        refined = poly_norm(f, math.inf, coarse)
        assert refined == pytest.approx(13.0, rel=1e-6)

    @given(st.floats(min_value=0.5, max_value=4.0))
    def test_scaling(self, scale):
        f = TrigPolynomial(freqset([(0,), (1,), (-1,)]), np.array([1, 0.5, 0.5], dtype=complex))
        base = poly_norm(f, 2)
        assert poly_norm(scale * f, 2) == pytest.approx(scale * base, rel=1e-9)


class TestQuadrature:
    def test_weights_sum_to_one(self):
        q = Quadrature.tensor_torus([2, 3])
        assert q.weights.sum() == pytest.approx(1.0)
        assert q.size == (4 * 5) * (4 * 7)

    def test_exact_for_products(self, rng):
        # oversample 4 integrates u_i * u_j exactly
        sys = real_trig_system(build_box([2]))
        g = sys.gram()
        assert np.abs(g - np.eye(sys.size)).max() < 1e-12

    def test_discrete(self):
        pts = np.array([[0.0], [1.0], [2.0]])
        q = Quadrature.discrete_uniform(pts)
        assert q.integrate(np.array([3.0, 6.0, 9.0])) == pytest.approx(6.0)


class TestPointSet:
    def test_wraps_mod_2pi(self):
        ps = PointSet(np.array([[7.0], [-1.0]]))
        assert (ps.points >= 0).all() and (ps.points < 2 * math.pi).all()

    def test_default_weights(self):
        ps = PointSet(np.zeros((4, 1)))
        assert np.allclose(ps.effective_weights(), 0.25)

    def test_negative_weights_rejected(self):
        with pytest.raises(ValueError):
            PointSet(np.zeros((2, 1)), np.array([0.5, -0.5]))

    def test_json_roundtrip(self):
        ps = PointSet(np.array([[0.1, 0.2], [3.0, 4.0]]), np.array([0.3, 0.7]))
        back = PointSet.from_json(ps.to_json())
        assert np.allclose(back.points, ps.points)
        assert np.allclose(back.weights, ps.weights)


class TestOrthonormalSystems:
    def test_trig_system_basic(self, trig7, cross2):
        assert trig7.size == len(cross2) == 7
        w = trig7.christoffel(np.array([[0.0], [0.7], [2.9]]))
        assert np.abs(w - 7).max() < 1e-10

    def test_kernel_matches_dirichlet(self, trig7, cross2):
        x = np.array([[0.8]])
        y = np.array([[0.15]])
        k = trig7.kernel(x, y)[0, 0]
        d = dirichlet_kernel(cross2, np.array([0.65])).real
        assert k == pytest.approx(d, abs=1e-10)

    def test_span_norm_matches_poly_norm(self, trig7, cross2, rng):
        # a real polynomial expressed in both bases has equal norms
        f = random_trig_poly(cross2, rng, real=True)
        vals = f.evaluate(trig7.quadrature.nodes).real
        coeffs = (trig7.quad_values * trig7.quadrature.weights[:, None]).T @ vals
        for p in (1, 2, 4):
            assert trig7.span_norm(coeffs, p) == pytest.approx(poly_norm(f, p, trig7.quadrature), abs=1e-9)

    def test_grid_system(self, cross2):
        sys = real_trig_system_on_grid(cross2, 16)
        assert sys.size == 7
        assert sys.condition_d

    def test_grid_system_too_coarse_rejected(self, cross2):
        with pytest.raises(ValueError):
            real_trig_system_on_grid(cross2, 6)

    def test_asymmetric_rejected(self):
        with pytest.raises(ValueError):
            real_trig_system(freqset([(0,), (1,)]))

    def test_tabulated_roundtrip(self, trig7):
        vals = trig7.evaluate(trig7.quadrature.nodes)
        sys = tabulated_system(vals)
        assert sys.size == 7
        assert sys.condition_d
        g = sys.gram()
        assert np.abs(g - np.eye(7)).max() < 1e-8

    def test_constants_declared(self, trig7):
        c = trig7.constants
        assert c.k2 == 2.0 and c.t == 1.0 and c.alpha == 1.0 and c.beta == 1.0
        assert c.k1 == pytest.approx(math.sqrt(2) * 1 * 3 / 7)
