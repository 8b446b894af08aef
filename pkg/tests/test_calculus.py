import numpy as np
import pytest

from kreincalc import (
    BiPoly,
    BoundaryError,
    CalculusContext,
    DefinitizablePair,
    Disk,
    DomainMismatchError,
    Jet,
    JetShape,
    NotInIdealError,
    NotInvertibleError,
    RealPoly,
    Rect,
    RegionUnion,
    ShapeMismatchError,
    function_from_dict,
)
from kreincalc.jets import A_KIND

Z = BiPoly.variable("z")
W = BiPoly.variable("w")


def shift_poly(lam):
    return Z + 1j * W - BiPoly.constant(lam)


class TestCriticalSet:
    def test_w1(self, w1_ctx):
        cs = w1_ctx.cs
        assert [c.value for c in cs.crit] == [3j]
        assert cs.crit[0].shape == JetShape(1, 1, A_KIND)
        assert not cs.crit[0].spectral and not cs.crit[0].in_sigma_n
        assert cs.zi == ()
        assert sorted(cs.support_values(), key=lambda z: z.real) == [
            pytest.approx(-1 + 3j),
            pytest.approx(1 + 2j),
        ]

    def test_w2(self, w2_ctx):
        cs = w2_ctx.cs
        assert [c.value for c in cs.crit] == [0j]
        assert cs.crit[0].shape == JetShape(2, 1, A_KIND)
        assert cs.noncritical == ()
        assert not cs.crit[0].spectral and cs.crit[0].in_sigma_n
        assert cs.support_values() == (0j,)

    def test_zi_instance(self, zi_ctx):
        cs = zi_ctx.cs
        assert cs.crit == ()
        points = {pt.zw for pt in cs.zi}
        assert points == {(1j, 0j), (-1j, 0j)}
        assert all(pt.in_support for pt in cs.zi)
        # conjugate-pair partners point at each other
        for i, pt in enumerate(cs.zi):
            assert cs.zi[pt.partner].partner == i
        assert zi_ctx.bundle.dim_v == 0

    def test_half_pair_instance(self, half_pair_ctx):
        cs = half_pair_ctx.cs
        assert all(not pt.in_support for pt in cs.zi)
        hits = [c for c in cs.crit if abs(c.value - 2.0) <= 1e-9]
        assert len(hits) == 1 and hits[0].in_sigma_n


class TestFunctionConstruction:
    def test_lift_constant_is_unit(self, w1_ctx):
        one = w1_ctx.lift(BiPoly.constant(1.0))
        assert np.allclose(one.values, 1.0)
        for jet in one.crit_jets:
            assert np.allclose(jet.coeffs, Jet.unit(jet.shape).coeffs)

    def test_lift_definitizer_lands_in_ideal(self, w2_ctx):
        pz = BiPoly.from_univariate(w2_ctx.pair.p, "z")
        fn = w2_ctx.lift(pz)
        jet = fn.crit_jets[0]
        assert jet.box_part().is_zero(1e-14)
        assert jet.entry(2, 0) == pytest.approx(1.0)  # leading derivative slot

    def test_lift_values(self, w1_ctx):
        fn = w1_ctx.lift(shift_poly(0.0))
        idx = list(w1_ctx.cs.noncritical).index(1 + 2j)
        assert fn.values[idx] == pytest.approx(1 + 2j)

    def test_delta_and_errors(self, w1_ctx):
        shape = w1_ctx.cs.crit[0].shape
        fn = w1_ctx.delta(3j, Jet.unit(shape))
        assert np.allclose(fn.values, 0.0)
        with pytest.raises(DomainMismatchError):
            w1_ctx.delta(5j, Jet.unit(shape))
        with pytest.raises(ShapeMismatchError):
            w1_ctx.delta(3j, Jet.unit(JetShape(2, 2, A_KIND)))

    def test_delta_idempotent(self, w2_ctx):
        e = Jet.unit(w2_ctx.cs.crit[0].shape)
        fn = w2_ctx.delta(0.0, e)
        prod = fn * fn
        assert np.allclose(prod.crit_jets[0].coeffs, e.coeffs)

    def test_zero_delta(self, w2_ctx):
        fn = w2_ctx.delta(0.0, Jet.zeros(w2_ctx.cs.crit[0].shape))
        assert fn.norm() == 0.0


class TestFunctionAlgebra:
    def test_unit_neutral(self, w1_ctx):
        rng = np.random.default_rng(50)
        fn = w1_ctx.lift(BiPoly({(1, 1): 2.0, (0, 0): 1j}))
        prod = fn * w1_ctx.one()
        assert np.allclose(prod.values, fn.values)

    def test_definitizer_sum_squares_to_zero_at_critical_points(self, w2_ctx):
        pz = BiPoly.from_univariate(w2_ctx.pair.p, "z")
        qw = BiPoly.from_univariate(w2_ctx.pair.q, "w")
        fn = w2_ctx.lift(pz + qw)
        sq = fn * fn
        assert sq.crit_jets[0].is_zero(1e-14)

    def test_sharp_involution(self, zi_ctx):
        rng = np.random.default_rng(51)
        fn = zi_ctx.lift(BiPoly({(1, 0): 1 + 1j, (0, 1): -2j}))
        assert np.allclose(fn.sharp().sharp().zi_jets[0].coeffs, fn.zi_jets[0].coeffs)

    def test_sharp_swaps_conjugate_pairs(self, zi_ctx):
        cs = zi_ctx.cs
        i_plus = next(i for i, pt in enumerate(cs.zi) if pt.zw == (1j, 0j))
        fn = zi_ctx.delta((1j, 0.0), Jet(cs.zi[i_plus].shape, [2 + 1j]))
        sharped = fn.sharp()
        i_minus = cs.zi[i_plus].partner
        assert sharped.zi_jets[i_minus].entry(0, 0) == pytest.approx(2 - 1j)
        assert sharped.zi_jets[i_plus].is_zero()

    def test_inverse_round_trip(self, w1_ctx):
        fn = w1_ctx.lift(shift_poly(10.0))
        inv = fn.inverse()
        prod = fn * inv
        one = w1_ctx.one()
        assert np.allclose(prod.values, one.values, atol=1e-12)
        for a, b in zip(prod.crit_jets, one.crit_jets):
            assert np.allclose(a.coeffs, b.coeffs, atol=1e-12)

    def test_inverse_carries_offending_point(self, w2_ctx):
        fn = w2_ctx.delta(0.0, Jet.zeros(w2_ctx.cs.crit[0].shape))
        with pytest.raises(NotInvertibleError) as exc:
            fn.inverse()
        assert exc.value.point == 0j


class TestDecomposition:
    def test_interpolant_round_trip(self, w1_ctx):
        s0 = BiPoly({(0, 0): 1.5 + 1j})  # admissible: deg < (1, 1)
        s = w1_ctx.interpolant(w1_ctx.lift(s0))
        assert abs(s.coeff(0, 0) - (1.5 + 1j)) <= 1e-12

    def test_w2_interpolant(self, w2_ctx):
        coeffs = [0.3, -1.0, 2.5, 1j]
        fn = w2_ctx.delta(0.0, Jet(w2_ctx.cs.crit[0].shape, coeffs))
        s = w2_ctx.interpolant(fn)
        assert abs(s.coeff(0, 0) - 0.3) <= 1e-12
        assert abs(s.coeff(1, 0) - (-1.0)) <= 1e-12
        assert s.degree_z <= 1 and s.degree_w == 0

    def test_ideal_functions_interpolate_to_zero(self, w2_ctx):
        fn = w2_ctx.delta(
            0.0, Jet.from_entries(w2_ctx.cs.crit[0].shape, {(2, 0): 3.0, (0, 1): -1j})
        )
        s = w2_ctx.interpolant(fn)
        assert not s or s.max_abs_coeff() <= 1e-13

    def test_remainder_of_lift_vanishes(self, w1_ctx):
        s0 = BiPoly({(1, 0): 1.0, (0, 1): -2.0})
        g_vals, g_pairs = w1_ctx.remainder(w1_ctx.lift(s0), s0)
        assert all(abs(v) <= 1e-10 for v in g_vals.values())
        assert not g_pairs

    def test_w1_disk_remainder_values(self, w1_ctx):
        fn = w1_ctx.indicator(Disk(1 + 2j, 1.0))
        s, g_vals, g_pairs = w1_ctx.decompose(fn)
        assert not s or s.max_abs_coeff() <= 1e-13
        assert g_vals[1 + 2j] == pytest.approx(0.5)
        assert g_vals[-1 + 3j] == pytest.approx(0.0, abs=1e-14)
        assert not g_pairs

    def test_not_in_ideal(self, w2_ctx):
        one = w2_ctx.one()
        with pytest.raises(NotInIdealError):
            w2_ctx.remainder(one, BiPoly())


class TestApply:
    def test_polynomials_evaluate_directly(self, w1_ctx):
        s0 = BiPoly({(2, 0): 1.0, (1, 1): -1j, (0, 0): 0.5})
        lhs = w1_ctx.apply(w1_ctx.lift(s0))
        rhs = w1_ctx.polynomial_at_pair(s0)
        assert np.allclose(lhs, rhs, atol=1e-10)

    def test_w2_exponential_jet(self, w2_ctx):
        jet = Jet(w2_ctx.cs.crit[0].shape, [1.0, 1.0, 0.5, 0.0])
        out = w2_ctx.apply(w2_ctx.delta(0.0, jet))
        assert np.array_equal(out, np.eye(2) + w2_ctx.pair.N)

    def test_w1_disk_indicator(self, w1_ctx):
        P = w1_ctx.spectral_projection(Disk(1 + 2j, 1.0))
        assert np.allclose(P, np.diag([1.0, 0.0]), atol=1e-12)

    def test_zi_identity_function(self, zi_ctx):
        out = zi_ctx.apply(zi_ctx.lift(shift_poly(0.0)))
        assert np.allclose(out, zi_ctx.pair.N, atol=1e-12)

    def test_half_pair_unit_applies_to_identity(self, half_pair_ctx):
        out = half_pair_ctx.apply(half_pair_ctx.one())
        assert np.allclose(out, np.eye(2), atol=1e-12)

    def test_rejects_function_from_other_context(self, w1_ctx, w2_ctx):
        with pytest.raises(DomainMismatchError):
            w1_ctx.apply(w2_ctx.one())


class TestProjections:
    def test_riesz_off_spectrum_vanishes(self, w1_ctx):
        assert np.allclose(w1_ctx.riesz_projection(3j), 0.0, atol=1e-12)

    def test_riesz_w2_total(self, w2_ctx):
        assert np.array_equal(w2_ctx.riesz_projection(0.0), np.eye(2))

    def test_riesz_zi_pair(self, zi_ctx):
        P = zi_ctx.riesz_projection((1j, 0.0))
        N = zi_ctx.pair.N
        assert np.allclose(P @ P, P, atol=1e-12)
        assert np.allclose(P @ N, N @ P, atol=1e-12)
        # range is the eigenspace at xi + i*eta = i
        U, sv, _ = np.linalg.svd(P)
        basis = U[:, sv > 0.5]
        assert basis.shape[1] == 1
        comp = basis.conj().T @ N @ basis
        assert comp[0, 0] == pytest.approx(1j)

    def test_total_projection_is_identity(self, w1_ctx):
        P = w1_ctx.spectral_projection(Disk(0.0, 10.0))
        assert np.allclose(P, np.eye(2), atol=1e-12)

    def test_zi_riesz_pair_are_mutual_adjoints(self, zi_ctx):
        P_plus = zi_ctx.riesz_projection((1j, 0.0))
        P_minus = zi_ctx.riesz_projection((-1j, 0.0))
        assert np.allclose(zi_ctx.space.adjoint(P_plus), P_minus, atol=1e-12)
        assert np.allclose(P_plus + P_minus, np.eye(2), atol=1e-12)

    def test_zi_region_lights_whole_conjugate_pair(self, zi_ctx):
        # region membership is decided by the pair representative, so a disk
        # around one member selects both and the projection is selfadjoint
        P = zi_ctx.spectral_projection(Disk(1j, 0.5))
        assert np.allclose(P, np.eye(2), atol=1e-12)
        assert np.allclose(zi_ctx.space.adjoint(P), P, atol=1e-12)

    def test_empty_projection_is_zero(self, w1_ctx):
        P = w1_ctx.spectral_projection(Disk(100.0, 1.0))
        assert np.allclose(P, 0.0, atol=1e-12)

    def test_rect_region(self, w1_ctx):
        P = w1_ctx.spectral_projection(Rect((0.0, 2.0), (1.0, 2.6)))
        assert np.allclose(P, np.diag([1.0, 0.0]), atol=1e-12)

    def test_additivity_over_disjoint_union(self, w1_ctx):
        d1, d2 = Disk(1 + 2j, 0.5), Disk(-1 + 3j, 0.5)
        P1 = w1_ctx.spectral_projection(d1)
        P2 = w1_ctx.spectral_projection(d2)
        P = w1_ctx.spectral_projection(RegionUnion((d1, d2)))
        assert np.allclose(P, P1 + P2, atol=1e-12)
        assert np.allclose(P1 @ P2, 0.0, atol=1e-12)

    def test_krein_selfadjoint(self, w2_ctx):
        P = w2_ctx.spectral_projection(Disk(0.0, 1.0))
        assert np.allclose(w2_ctx.space.adjoint(P), P, atol=1e-12)
        assert np.allclose(P @ P, P, atol=1e-12)

    def test_boundary_through_critical_spectral_point(self, w2_ctx):
        with pytest.raises(BoundaryError):
            w2_ctx.spectral_projection(Disk(0.5, 0.5))

    def test_boundary_near_noncritical_point_is_fine(self, w1_ctx):
        # only critical points in the spectrum constrain the boundary
        P = w1_ctx.spectral_projection(Disk(1 + 2j, 2.0 ** 0.5))
        assert P.shape == (2, 2)


class TestSpectrum:
    def test_w1(self, w1_ctx):
        assert sorted(w1_ctx.spectrum(), key=lambda z: z.real) == [
            pytest.approx(-1 + 3j),
            pytest.approx(1 + 2j),
        ]

    def test_w2(self, w2_ctx):
        assert w2_ctx.spectrum() == (0j,)

    def test_zi_contributions(self, zi_ctx):
        spec = sorted(zi_ctx.spectrum(), key=lambda z: z.imag)
        assert spec == [pytest.approx(-1j), pytest.approx(1j)]

    def test_half_pair_excludes_unpaired_point(self, half_pair_ctx):
        spec = half_pair_ctx.spectrum()
        assert sorted(spec, key=lambda z: z.real) == [
            pytest.approx(1j),
            pytest.approx(2.0 + 0j),
        ]


class TestInvertibility:
    def test_unit_invertible(self, w1_ctx):
        rep = w1_ctx.check_invertible(w1_ctx.one())
        assert rep.invertible and rep.certificate_residual <= 1e-10

    def test_resolvent(self, w1_ctx):
        rep = w1_ctx.check_invertible(w1_ctx.lift(shift_poly(7.0)))
        assert rep.invertible

    def test_vanishing_function(self, w1_ctx):
        rep = w1_ctx.check_invertible(w1_ctx.lift(shift_poly(1 + 2j)))
        assert not rep.invertible

    def test_half_pair_ignores_off_support_jets(self, half_pair_ctx):
        # shift by i: vanishes at the off-support pair point but nowhere on
        # the support, so the operator is still invertible
        rep = half_pair_ctx.check_invertible(half_pair_ctx.lift(shift_poly(-1j)))
        assert rep.invertible


def test_same_operator_under_two_definitizing_choices(w1, capsys):
    # recorded experiment: the calculus built from a different valid pair
    # (here q scaled and squared) applied to the same polynomial function
    space = w1.space
    ctx1 = CalculusContext.build(w1.pair)
    q2 = RealPoly([3.0, -1.0]) * RealPoly([3.0, -1.0])
    pair2 = DefinitizablePair.from_normal(space, w1.pair.N, p=w1.pair.p, q=q2)
    ctx2 = CalculusContext.build(pair2)
    s0 = BiPoly({(1, 0): 1.0, (0, 1): 1j, (1, 1): 0.25})
    out1 = ctx1.apply(ctx1.lift(s0))
    out2 = ctx2.apply(ctx2.lift(s0))
    deviation = np.linalg.norm(out1 - out2)
    print(f"definitizing-choice deviation: {deviation:.3e}")
    assert np.isfinite(deviation)


class TestFunctionFiles:
    def test_bipoly_kind(self, w1_ctx):
        fn = function_from_dict(
            w1_ctx, {"kind": "bipoly", "coeffs": [[1, 0, 1.0, 0.0], [0, 1, 0.0, 1.0]]}
        )
        out = w1_ctx.apply(fn)
        assert np.allclose(out, w1_ctx.pair.N, atol=1e-10)

    def test_indicator_kind(self, w1_ctx):
        fn = function_from_dict(
            w1_ctx,
            {"kind": "indicator", "region": {"type": "disk", "center": [1, 2], "radius": 1.0}},
        )
        assert np.allclose(w1_ctx.apply(fn), np.diag([1.0, 0.0]), atol=1e-12)

    def test_delta_kind(self, w2_ctx):
        jet = Jet(w2_ctx.cs.crit[0].shape, [1.0, 1.0, 0.5, 0.0]).to_dict()
        fn = function_from_dict(w2_ctx, {"kind": "delta", "at": [0.0, 0.0], "jet": jet})
        assert np.array_equal(w2_ctx.apply(fn), np.eye(2) + w2_ctx.pair.N)

    def test_table_kind(self, w1_ctx):
        fn = function_from_dict(
            w1_ctx,
            {
                "kind": "table",
                "values": [
                    {"z": [1.0, 2.0], "value": [1.0, 0.0]},
                    {"z": [-1.0, 3.0], "value": [0.0, 0.0]},
                ],
            },
        )
        assert np.allclose(w1_ctx.apply(fn), np.diag([1.0, 0.0]), atol=1e-12)

    def test_unknown_kind(self, w1_ctx):
        with pytest.raises(DomainMismatchError):
            function_from_dict(w1_ctx, {"kind": "mystery"})
