"""Corrector hierarchy: recursion identities, assembly, route equivalence."""

import numpy as np
import numpy.polynomial.polynomial as npoly
import pytest

from stokesbl.geometry import BoundaryGeometry
from stokesbl.modes import ModeExpansion, poly_add, poly_derive, poly_scale
from stokesbl.polynomials import ExactPolynomial, VectorPolynomial
from stokesbl.recursion import (
    CorrectorStack,
    LevelSolution,
    assemble_alpha,
    assemble_source,
    corrector_divergence_residual,
    corrector_trace_residual,
    divergence_corrector,
    heterogeneous_basis,
    monomial_coefficients,
    script_S,
    script_S_via_trace_formula,
    source_corrector,
    stack_from_json,
    stack_to_json,
)

COS_WALL = BoundaryGeometry.from_fourier({0: -0.5, 1: -0.25})


@pytest.fixture(scope="module")
def stack():
    return CorrectorStack(COS_WALL, nx=24, ny=32)


@pytest.fixture(scope="module")
def flat_stack():
    return CorrectorStack(BoundaryGeometry.flat(), nx=16, ny=20)


def _plant_fake_level(stack, beta, l, comp, v_poly, q_poly, rng):
    """Insert a synthetic level with random poly data and one random mode."""
    nx, ny = stack.grid.nx, stack.grid.ny
    modes = {}
    for k in (1, 2):
        V = [rng.standard_normal(3) + 1j * rng.standard_normal(3) for _ in range(2)]
        Q = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        modes[k] = {"V": V, "Q": Q, "c": 0j}
        modes[-k] = {"V": [np.conj(v) for v in V], "Q": np.conj(Q), "c": 0j}
    level = LevelSolution(
        beta=beta, l=l, comp=comp,
        u=rng.standard_normal((2, nx, ny + 1)),
        p_nodes=rng.standard_normal((nx, ny + 1)),
        v_poly=np.array(v_poly, dtype=float),
        q_poly=np.array(q_poly, dtype=float),
        modes=ModeExpansion(stack.height, modes),
        diagnostics={},
    )
    stack.levels[(beta, l, comp)] = level
    return level


def test_flat_wall_levels_vanish(flat_stack):
    for beta in range(3):
        for l in (1, 2):
            lv = flat_stack.level(beta, l, 1)
            assert np.abs(lv.u).max() < 1e-10
            assert np.abs(lv.v_poly).max() < 1e-10
            assert np.abs(lv.q_poly).max() < 1e-10


def test_level_zero_structure(stack):
    lv = stack.level(0, 1, 1)
    assert lv.v_poly.shape[1] == 1  # constant in y
    assert lv.const[0] > 0          # slip length is positive
    assert abs(lv.const[1]) < 5e-3  # no vertical tail
    assert np.abs(lv.q_poly).max() == 0.0


def test_level_one_degree_and_coefficient(stack):
    # (V^1_poly)_2 has degree 1 with leading coefficient -(V^0_const)_1
    lv0 = stack.level(0, 1, 1)
    lv1 = stack.level(1, 1, 1)
    assert lv1.v_poly.shape[1] <= 2
    assert lv1.v_poly[1, 1] == pytest.approx(-lv0.const[0], rel=1e-12)
    # Q^1_poly = -(V^0_poly)_1 (single surviving term)
    assert lv1.q_poly == pytest.approx([-lv0.const[0]], rel=1e-12)


def test_fast_path_matches_general_correctors(stack):
    # plant random lower levels and compare the generic Step 1/Step 2 output
    # with the explicit 2-D closed form
    rng = np.random.default_rng(5)
    work = CorrectorStack(COS_WALL, nx=16, ny=20)
    v0 = rng.standard_normal((2, 1))
    v1 = rng.standard_normal((2, 2))
    q1 = rng.standard_normal(1)
    _plant_fake_level(work, 0, 1, 1, v0, np.zeros(1), rng)
    _plant_fake_level(work, 1, 1, 1, v1, q1, rng)
    beta = 2
    c1, c2 = 2, 1  # C(2,1), C(2,2)
    wcorr = divergence_corrector(work, beta, 1, 1)
    expected_w = npoly.polyint(-c1 * v1[0])
    assert np.allclose(wcorr["poly_e2"], expected_w)
    lcorr = source_corrector(work, beta, 1, 1)
    expected_lam = npoly.polyint(npoly.polyint(
        npoly.polyadd(-2 * c2 * v0[0], c1 * q1)))
    assert np.allclose(lcorr["lambda_poly"][0, : len(expected_lam)], expected_lam)
    expected_pi = npoly.polyadd(npoly.polyint(2 * c2 * v0[1]), -c1 * v1[0])
    assert np.allclose(lcorr["pi_poly"][: len(expected_pi)], expected_pi)


def test_source_corrector_identity(stack):
    # -Lap Lambda_poly + grad Pi_poly = F_poly + d_y^2 W_poly, exactly in y
    rng = np.random.default_rng(11)
    work = CorrectorStack(COS_WALL, nx=16, ny=20)
    _plant_fake_level(work, 0, 1, 1, rng.standard_normal((2, 1)), np.zeros(1), rng)
    _plant_fake_level(work, 1, 1, 1, rng.standard_normal((2, 2)),
                      rng.standard_normal(1), rng)
    for beta in (1, 2):
        src = assemble_source(work, beta, 1, 1)
        wcorr = divergence_corrector(work, beta, 1, 1)
        lcorr = source_corrector(work, beta, 1, 1)
        lam1 = lcorr["lambda_poly"][0]
        lhs1 = -npoly.polyder(npoly.polyder(lam1)) if len(lam1) > 2 else np.zeros(1)
        rhs1 = src["F_poly"][0]
        assert np.allclose(npoly.polysub(np.atleast_1d(lhs1), rhs1), 0.0, atol=1e-12)
        lhs2 = npoly.polyder(lcorr["pi_poly"]) if len(lcorr["pi_poly"]) > 1 else np.zeros(1)
        wpoly = wcorr["poly_e2"]
        d2w = npoly.polyder(npoly.polyder(wpoly)) if len(wpoly) > 2 else np.zeros(1)
        rhs2 = npoly.polyadd(src["F_poly"][1], np.atleast_1d(d2w))
        assert np.allclose(npoly.polysub(np.atleast_1d(lhs2), rhs2), 0.0, atol=1e-12)
        if beta == 2:
            _plant_fake_level(work, 2, 1, 1, rng.standard_normal((2, 3)),
                              rng.standard_normal(2), rng)


def test_mode_divergence_identity(stack):
    # above the lid: [ik, -|k|] . V^beta_k + (V^beta_k)_2' = -C(beta,1) (V^{beta-1}_k)_1
    lv0 = stack.level(0, 1, 1)
    lv1 = stack.level(1, 1, 1)
    for k in (1, 2, 3):
        V1 = lv1.modes.modes[k]["V"]
        V0 = lv0.modes.modes[k]["V"]
        div = poly_add(
            poly_add(poly_scale(1j * k, list(V1[0])), poly_scale(-abs(k), list(V1[1]))),
            poly_derive(list(V1[1])),
        )
        target = poly_scale(-1.0, list(V0[0]))
        diff = poly_add(div, poly_scale(-1.0, target))
        assert max((abs(c) for c in diff), default=0.0) < 1e-10


def test_assembled_trace_and_divergence(stack):
    fld = assemble_alpha(stack, 1, 1, 1)
    assert corrector_trace_residual(fld) < 1e-9
    # recursion algebra telescopes exactly once the reported per-level
    # compatibility defect (the multiplier) is accounted for
    assert corrector_divergence_residual(fld, remove_defect=True) < 1e-9
    assert corrector_divergence_residual(fld, x_shift=6 * np.pi, remove_defect=True) < 1e-8
    fld2 = assemble_alpha(stack, 2, 1, 1)
    assert corrector_trace_residual(fld2) < 1e-8
    assert corrector_divergence_residual(fld2, remove_defect=True) < 1e-8
    # raw residual equals the uniform defect, small and O(h^2)
    mus = [abs(lv.diagnostics.get("multiplier", 0.0)) for _, _, lv in fld2.terms]
    assert corrector_divergence_residual(fld2) <= 10 * max(sum(mus), 1e-12)


def test_divergence_defect_shrinks_under_refinement():
    vals = []
    for nx, ny in ((16, 20), (32, 40)):
        st = CorrectorStack(COS_WALL, nx=nx, ny=ny)
        fld = assemble_alpha(st, 1, 1, 1)
        vals.append(corrector_divergence_residual(fld))
    assert vals[1] < vals[0] / 2.5


def test_assemble_alpha_poly_structure(stack):
    # v_poly(x, y) = x (V^0_const)_1 e1 + V^1_const - y (V^0_const)_1 e2
    lv0 = stack.level(0, 1, 1)
    lv1 = stack.level(1, 1, 1)
    fld = assemble_alpha(stack, 1, 1, 1)
    v = fld.v_poly_xy
    assert v[0, 1, 0] == pytest.approx(lv0.const[0])
    assert v[0, 0, 0] == pytest.approx(lv1.const[0])
    assert v[1, 0, 1] == pytest.approx(-lv0.const[0])
    # growth split: deg_y V_poly <= beta
    assert v.shape[2] <= 2


def test_script_S_monomial_and_linearity(stack):
    P = VectorPolynomial.unit_monomial((1, 1), 0, 2)  # x y e1
    corr = script_S(stack, P)
    fld = assemble_alpha(stack, 1, 1, 1)
    assert np.allclose(corr.v_poly_xy, fld.v_poly_xy)
    P2 = P.scale(-3)
    corr2 = script_S(stack, P2)
    assert np.allclose(corr2.v_poly_xy, -3 * corr.v_poly_xy)
    zero = script_S(stack, VectorPolynomial.zero(2, 2))
    assert np.abs(zero.v_poly_xy).max() == 0.0


def test_script_S_rejects_nonzero_trace():
    with pytest.raises(ValueError):
        monomial_coefficients(VectorPolynomial.unit_monomial((2, 0), 0, 2))


def test_route_equivalence_small(stack):
    # Prop-3.5-style assembly agrees with the ansatz assembly
    for P, order in (
        (VectorPolynomial.unit_monomial((1, 1), 0, 2), 2),
        (VectorPolynomial.unit_monomial((0, 2), 1, 2), 2),
        (VectorPolynomial.unit_monomial((2, 1), 0, 2), 3),
    ):
        direct = script_S(stack, P)
        via_formula = script_S_via_trace_formula(stack, P, order)
        a = np.zeros_like(via_formula)
        v = direct.v_poly_xy
        a[:, : v.shape[1], : v.shape[2]] = v
        assert np.abs(a - via_formula).max() < 1e-10


def test_script_S_growth_reduction(stack):
    # for homogeneous P of degree m the corrector polynomial has degree <= m-1
    P = VectorPolynomial.unit_monomial((1, 1), 0, 2)  # degree 2
    corr = script_S(stack, P)
    v = corr.v_poly_xy
    for c in range(2):
        for i in range(v.shape[1]):
            for j in range(v.shape[2]):
                if abs(v[c, i, j]) > 1e-12:
                    assert i + j <= 1


def test_heterogeneous_basis_counts(stack, flat_stack):
    els = heterogeneous_basis(stack, 2)
    assert len(els) == 4
    flat_els = heterogeneous_basis(flat_stack, 2)
    for el in flat_els:
        # flat wall: S = 0, so w_poly is the flat-space polynomial itself
        for c in range(2):
            from stokesbl.recursion import poly_to_coeff2d
            ref = poly_to_coeff2d(el.P[c])
            got = el.w_poly_xy[c]
            assert np.allclose(got[: ref.shape[0], : ref.shape[1]], ref, atol=1e-10)
            got2 = got.copy()
            got2[: ref.shape[0], : ref.shape[1]] -= ref
            assert np.abs(got2).max() < 1e-10


def test_stack_roundtrip(stack):
    stack.level(1, 1, 1)
    data = stack_to_json(stack)
    rebuilt = stack_from_json(data)
    lv = rebuilt.levels[(1, 1, 1)]
    ref = stack.level(1, 1, 1)
    assert np.allclose(lv.u, ref.u)
    assert np.allclose(lv.v_poly, ref.v_poly)
    ks = sorted(lv.modes.modes)
    assert ks == sorted(ref.modes.modes)
    x = np.linspace(-np.pi, np.pi, 7)
    assert np.allclose(lv.modes.velocity(x, 4.0, comp=0),
                       ref.modes.velocity(x, 4.0, comp=0))
