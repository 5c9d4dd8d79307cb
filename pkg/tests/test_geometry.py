import numpy as np
import pytest

from plapeig.geometry import (ModelSpace, ProfileSpec, density,
                              flat_interval_model, hyperbolic_model_volume,
                              laplacian_comparison_check, line_exp_model,
                              ricci_f_m_radial, volume_ratio_check,
                              weighted_volume)
from plapeig.mesh import RadialField, RadialGrid


def ball_model(warp, n=3, m=None, kappa=1.0, weight=None):
    return ModelSpace(
        kind="ball_rotsym",
        n=n,
        m=float(m if m is not None else n),
        kappa=kappa,
        warp=warp,
        weight=weight or ProfileSpec("linear", (0.0, 0.0)),
    )


class TestProfileSpec:
    def test_exp_derivatives(self):
        prof = ProfileSpec("exp", (1.5,))
        t = np.linspace(-1, 1, 9)
        assert np.allclose(prof.d1(t), 1.5 * np.exp(1.5 * t))
        assert np.allclose(prof.d2(t), 2.25 * np.exp(1.5 * t))

    def test_sinh_derivatives(self):
        prof = ProfileSpec("sinh", (2.0,))
        t = np.linspace(0.1, 2, 9)
        assert np.allclose(prof.d1(t), 2.0 * np.cosh(2.0 * t))
        assert np.allclose(prof.d2(t), 4.0 * np.sinh(2.0 * t))

    def test_linear(self):
        prof = ProfileSpec("linear", (-2.0, 0.5))
        t = np.linspace(-1, 1, 5)
        assert np.allclose(prof.eval(t), -2.0 * t + 0.5)
        assert np.allclose(prof.d1(t), -2.0)
        assert np.allclose(prof.d2(t), 0.0)

    def test_power(self):
        prof = ProfileSpec("power", (2.0,))
        t = np.linspace(0.0, 2, 5)
        assert np.allclose(prof.eval(t), t**2)
        assert np.allclose(prof.d1(t), 2 * t)
        assert np.allclose(prof.d2(t), 2.0)

    def test_tabulated_roundtrip(self):
        grid = RadialGrid(0.0, 1.0, 501)
        table = RadialField(grid, np.sin(grid.nodes()))
        prof = ProfileSpec("tabulated", table=table)
        t = np.linspace(0.1, 0.9, 7)
        assert np.allclose(prof.eval(t), np.sin(t), atol=1e-5)
        assert np.allclose(prof.d1(t), np.cos(t), atol=1e-4)

    def test_unknown_tag(self):
        with pytest.raises(ValueError):
            ProfileSpec("cubic", (1.0,))

    def test_serialization(self):
        prof = ProfileSpec("exp", (1.0,))
        assert ProfileSpec.from_dict(prof.to_dict()) == prof


class TestModelSpace:
    def test_m_below_n_rejected(self):
        with pytest.raises(ValueError):
            line_exp_model(4, 3)

    def test_m_equal_n_needs_constant_weight(self):
        with pytest.raises(ValueError):
            ModelSpace(kind="line_warped", n=3, m=3.0, kappa=1.0,
                       warp=ProfileSpec("exp", (1.0,)),
                       weight=ProfileSpec("linear", (1.0, 0.0)))

    def test_serialization(self):
        sp = line_exp_model(3, 5)
        assert ModelSpace.from_dict(sp.to_dict()) == sp


class TestDensity:
    def test_line_exp_model(self):
        # phi = e^t with weight -(m-n)t collapses to e^((m-1)t)
        sp = line_exp_model(3, 5)
        grid = RadialGrid(-2.0, 2.0, 101)
        J = density(sp, grid)
        assert np.allclose(J.values, np.exp(4.0 * grid.nodes()), rtol=1e-12)

    def test_flat_interval(self):
        grid = RadialGrid(0.0, np.pi, 51)
        J = density(flat_interval_model(), grid)
        assert np.allclose(J.values, 1.0)

    def test_flat_ball(self):
        sp = ball_model(ProfileSpec("power", (1.0,)), n=3)
        grid = RadialGrid(0.5, 2.0, 51)
        J = density(sp, grid)
        assert np.allclose(J.values, grid.nodes() ** 2)

    def test_nonpositive_warp_rejected(self):
        sp = ball_model(ProfileSpec("linear", (1.0, 0.0)), n=3)
        grid = RadialGrid(-1.0, 1.0, 11)
        with pytest.raises(ValueError):
            density(sp, grid)


class TestRicci:
    def test_example_model_constant(self):
        sp = line_exp_model(3, 5)
        grid = RadialGrid(-3.0, 3.0, 201)
        ric = ricci_f_m_radial(sp, grid)
        assert np.allclose(ric.values, -4.0, atol=1e-10)

    def test_normalization_minus_m_minus_one(self):
        for n, m in ((2, 2), (3, 3), (3, 7), (4, 4.5)):
            sp = line_exp_model(n, m)
            grid = RadialGrid(-1.0, 1.0, 51)
            ric = ricci_f_m_radial(sp, grid)
            assert np.allclose(ric.values, -(m - 1.0), atol=1e-10)

    def test_flat_ball_zero(self):
        sp = ball_model(ProfileSpec("power", (1.0,)), n=3)
        grid = RadialGrid(0.5, 2.0, 51)
        ric = ricci_f_m_radial(sp, grid)
        assert np.allclose(ric.values, 0.0, atol=1e-12)

    def test_sinh_ball(self):
        sp = ball_model(ProfileSpec("sinh", (1.0,)), n=3)
        grid = RadialGrid(0.5, 2.0, 51)
        ric = ricci_f_m_radial(sp, grid)
        assert np.allclose(ric.values, -2.0, atol=1e-12)


class TestVolumes:
    def test_flat_ball_n2(self):
        sp = ball_model(ProfileSpec("power", (1.0,)), n=2)
        assert weighted_volume(sp, 1.5) == pytest.approx(1.5**2 / 2, rel=1e-9)

    def test_line_slab_sinh(self):
        # J = e^(2t) integrated over [-r, r] gives sinh(2r)
        sp = line_exp_model(3, 3)
        for r in (0.5, 1.0, 2.0):
            assert weighted_volume(sp, r) == pytest.approx(np.sinh(2 * r), rel=1e-9)

    def test_unit_density(self):
        assert weighted_volume(flat_interval_model(), 2.0) == pytest.approx(2.0, rel=1e-12)

    def test_increasing_in_r(self):
        sp = line_exp_model(3, 5)
        vols = [weighted_volume(sp, r) for r in (0.5, 1.0, 2.0, 4.0)]
        assert all(v2 > v1 for v1, v2 in zip(vols, vols[1:]))

    def test_hyperbolic_m2(self):
        for r in (0.5, 1.0, 2.0):
            assert hyperbolic_model_volume(2.0, r) == pytest.approx(np.cosh(r) - 1, rel=1e-9)

    def test_hyperbolic_m3(self):
        for r in (0.5, 1.0, 2.0):
            exact = (np.sinh(r) * np.cosh(r) - r) / 2
            assert hyperbolic_model_volume(3.0, r) == pytest.approx(exact, rel=1e-9)

    def test_hyperbolic_small_r(self):
        assert hyperbolic_model_volume(3.0, 1e-4) == pytest.approx(0.0, abs=1e-10)

    def test_hyperbolic_ratio_nondecreasing(self):
        vals = [hyperbolic_model_volume(4.0, r) for r in (1.0, 1.5, 2.0, 3.0)]
        ratios = [v / vals[0] for v in vals]
        assert all(r2 >= r1 for r1, r2 in zip(ratios, ratios[1:]))


class TestVolumeRatioCheck:
    def test_hyperbolic_self_comparison(self):
        sp = ball_model(ProfileSpec("sinh", (1.0,)), n=3)
        rep = volume_ratio_check(sp, 1.0, 2.0)
        assert rep.passed
        assert rep.measured == pytest.approx(rep.bound, rel=1e-6)

    def test_example_model_pairs(self):
        sp = line_exp_model(3, 5)
        for r1, r2 in ((0.5, 1.0), (1.0, 2.0), (2.0, 4.0), (0.5, 4.0)):
            rep = volume_ratio_check(sp, r1, r2)
            assert rep.passed, (r1, r2, rep.measured, rep.bound)

    def test_nearby_radii(self):
        sp = line_exp_model(3, 3)
        rep = volume_ratio_check(sp, 1.0, 1.0 + 1e-6)
        assert rep.measured == pytest.approx(1.0, abs=1e-4)
        assert rep.bound == pytest.approx(1.0, abs=1e-4)

    def test_hypothesis_flag(self):
        # sinh(2t) warp has radial curvature -4 < -(m-1) = -2
        sp = ball_model(ProfileSpec("sinh", (2.0,)), n=3)
        rep = volume_ratio_check(sp, 0.5, 1.0)
        assert not rep.hypothesis_ok
        assert rep.status == "hypothesis-failed"


class TestLaplacianComparison:
    def test_sinh_model_equality(self):
        sp = ball_model(ProfileSpec("sinh", (1.0,)), n=3)
        rep = laplacian_comparison_check(sp, RadialGrid(0.1, 3.0, 1001))
        assert rep.passed
        assert abs(rep.measured) <= 1e-8

    def test_flat_ball_strict(self):
        sp = ball_model(ProfileSpec("power", (1.0,)), n=3, kappa=1.0)
        rep = laplacian_comparison_check(sp, RadialGrid(0.1, 3.0, 1001))
        assert rep.passed
        assert rep.measured < 0  # (n-1)/r strictly below (n-1) coth r

    def test_tabulated_below_sinh(self):
        grid = RadialGrid(0.05, 3.0, 2001)
        table = RadialField(grid, np.sinh(0.9 * grid.nodes()) / 0.9)
        sp = ball_model(ProfileSpec("tabulated", table=table), n=3)
        rep = laplacian_comparison_check(sp, RadialGrid(0.1, 2.9, 801))
        assert rep.passed

    def test_line_model_rejected(self):
        with pytest.raises(ValueError):
            laplacian_comparison_check(line_exp_model(3, 3), RadialGrid(0.1, 1.0, 101))
