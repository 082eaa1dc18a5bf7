"""Effective polynomials and the recursive wall-law coefficient table.

Every heterogeneous solution splits into a polynomial part plus an
exponentially decaying remainder; the polynomial parts form the effective
space, and their traces on {y = 0} satisfy one linear identity whose
matrix-valued x-polynomial coefficients Phi^{alpha,l} are intrinsic to the
boundary.  The table is built recursively in increasing |alpha| + l from the
effective parts of the monomial correctors; the first-order entry is the
classical Navier slip matrix whose (1,1) entry is the slip length.

Everything here is 2-D: horizontal multi-indices are integers and x-dependent
coefficients are univariate polynomial coefficient arrays.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial

import numpy as np
import numpy.polynomial.polynomial as npoly

from .recursion import (
    BoundaryCorrector,
    CorrectorField,
    CorrectorStack,
    HeterogeneousElement,
    assemble_alpha,
    heterogeneous_basis,
)


class WallLawAccuracyError(RuntimeError):
    """Raised when a sign/accuracy guarantee fails (e.g. lambda <= 0)."""


# ---------------------------------------------------------------------------
# small polynomial-matrix helpers (coefficients ascending in x)
# ---------------------------------------------------------------------------

def _trim(c: np.ndarray) -> np.ndarray:
    c = np.atleast_1d(np.asarray(c, dtype=float))
    nz = np.nonzero(np.abs(c) > 0)[0]
    return c[: nz[-1] + 1] if nz.size else np.zeros(1)


def _padcat(mats: list[np.ndarray]) -> np.ndarray:
    deg = max(m.shape[-1] for m in mats)
    out = np.zeros((len(mats),) + mats[0].shape[:-1] + (deg,))
    for i, m in enumerate(mats):
        out[i, ..., : m.shape[-1]] = m
    return out


def matpoly_apply(mat: np.ndarray, vec: np.ndarray) -> np.ndarray:
    """(2,2,degM) polynomial matrix times (2,degV) polynomial vector."""
    rows = []
    for i in range(2):
        acc = np.zeros(1)
        for j in range(2):
            acc = npoly.polyadd(acc, npoly.polymul(mat[i, j], vec[j]))
        rows.append(np.atleast_1d(acc))
    return _padcat(rows)


def trace_derivative(coeff2d: np.ndarray, beta: int, k: int) -> np.ndarray:
    """x-polynomial of d_x^beta d_y^k applied to a 2-D coefficient array at y=0."""
    nxp, nyp = coeff2d.shape
    if k >= nyp:
        return np.zeros(1)
    out = np.zeros(max(nxp - beta, 1))
    for m in range(beta, nxp):
        factor = factorial(m) // factorial(m - beta) * factorial(k)
        out[m - beta] += coeff2d[m, k] * factor
    return out


# ---------------------------------------------------------------------------
# effective parts
# ---------------------------------------------------------------------------

@dataclass
class EffectivePair:
    """Polynomial part (w_poly, pi_poly) of a heterogeneous pair."""

    w_poly_xy: np.ndarray
    pi_poly_xy: np.ndarray
    source: HeterogeneousElement


def effective_part(element: HeterogeneousElement) -> EffectivePair:
    return EffectivePair(element.w_poly_xy, element.pi_poly_xy, element)


def het_part_velocity(corr, x, y, comp: int, dx: int = 0, dy: int = 0) -> np.ndarray:
    """Decaying remainder of a corrector above the lid (mode expansions).

    Accepts a CorrectorField or a BoundaryCorrector; valid for y >= lid only.
    """
    if isinstance(corr, CorrectorField):
        flat_terms = [(c, p, lv) for c, p, lv in corr.terms]
    elif isinstance(corr, BoundaryCorrector):
        flat_terms = [(a * c, p, lv) for a, fld in corr.parts for c, p, lv in fld.terms]
    else:
        raise TypeError("expected CorrectorField or BoundaryCorrector")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    out = np.zeros(np.broadcast(x, y).shape)
    for coef, power, level in flat_terms:
        if np.any(y < level.modes.L - 1e-9):
            raise ValueError("het evaluation is mode-based: needs y >= lid height")
        base = level.modes.velocity(x, y, comp=comp, dx=0, dy=dy)
        if dx == 0:
            out = out + coef * x ** power * base
        elif dx == 1:
            out = out + coef * (x ** power * level.modes.velocity(x, y, comp=comp, dx=1, dy=dy)
                                + (power * x ** (power - 1) * base if power else 0.0))
        else:
            raise ValueError("dx must be 0 or 1")
    return out


# ---------------------------------------------------------------------------
# the wall-law table
# ---------------------------------------------------------------------------

@dataclass
class WallLawTable:
    order: int
    phi: dict          # (alpha, l) -> (2, 2, deg+1) matrix polynomial in x
    tails: dict        # horizontal comp -> (2,) first-order tail T_(comp)
    slip_length: float

    def phi_matrix(self, alpha: int, l: int) -> np.ndarray:
        return self.phi[(alpha, l)]

    def to_json_dict(self) -> dict:
        return {
            "order": self.order,
            "slip_length": self.slip_length,
            "tails": {str(c): list(map(float, t)) for c, t in self.tails.items()},
            "phi": [
                {"alpha": a, "l": l, "matrix": m.tolist()}
                for (a, l), m in sorted(self.phi.items())
            ],
        }


def monomial_effective(stack: CorrectorStack, alpha: int, l: int) -> np.ndarray:
    """W^{alpha,l}: effective parts of x^alpha y^l e_i + v^{alpha,l}_(i).

    Returned as (2 columns i, 2 components, nx_pow, ny_pow) coefficient
    arrays.
    """
    cols = []
    for comp in (1, 2):
        fld = assemble_alpha(stack, alpha, l, comp)
        v = fld.v_poly_xy
        nxp = max(v.shape[1], alpha + 1)
        nyp = max(v.shape[2], l + 1)
        w = np.zeros((2, nxp, nyp))
        w[:, : v.shape[1], : v.shape[2]] = v
        w[comp - 1, alpha, l] += 1.0
        cols.append(w)
    return _padcat(cols)


def phi_table(stack: CorrectorStack, order: int) -> WallLawTable:
    """Wall-law coefficient polynomials Phi^{alpha,l} for |alpha| + l <= order."""
    if order < 1:
        raise ValueError("order must be >= 1")
    # Navier tails come from horizontal drivers only; the vertical driver has
    # net flux through the wall and its tail is not constrained to T.e2 = 0
    tails = {1: stack.level(0, 1, 1).const}
    phi: dict = {}
    # seed: Navier matrix (T_(1), 0), last column zero
    seed = np.zeros((2, 2, 1))
    seed[:, 0, 0] = tails[1]
    phi[(0, 1)] = seed

    effective = {}
    for mu in range(1, order + 1):
        for l in range(1, mu + 1):
            effective[(mu - l, l)] = monomial_effective(stack, mu - l, l)

    for mu in range(2, order + 1):
        # all entries of level mu are built from the table below level mu
        lower = dict(phi)
        for l in range(1, mu + 1):
            alpha = mu - l
            W = effective[(alpha, l)]
            cols = []
            for i in range(2):
                acc = _padcat([trace_derivative(W[i, c], 0, 0) for c in range(2)])
                for (b, k), phimat in lower.items():
                    dW = _padcat([trace_derivative(W[i, c], b, k) for c in range(2)])
                    corr = matpoly_apply(phimat, dW)
                    acc = _padcat([npoly.polysub(acc[c], corr[c]) for c in range(2)])
                cols.append(acc / (factorial(alpha) * factorial(l)))
            deg = max(c.shape[-1] for c in cols)
            mat = np.zeros((2, 2, deg))
            for i in range(2):
                mat[:, i, : cols[i].shape[-1]] = cols[i]
            phi[(alpha, l)] = mat

    lam = float(seed[0, 0, 0])
    return WallLawTable(order=order, phi=phi, tails=tails, slip_length=lam)


def wall_law_identity_residual(table: WallLawTable, element: HeterogeneousElement) -> float:
    """Relative residual of w_poly(x,0) = sum Phi^{alpha,l} d^alpha d^l w_poly(x,0)."""
    w = element.w_poly_xy
    lhs = _padcat([trace_derivative(w[c], 0, 0) for c in range(2)])
    rhs = np.zeros_like(lhs)
    for (alpha, l), mat in table.phi.items():
        dvec = _padcat([trace_derivative(w[c], alpha, l) for c in range(2)])
        term = matpoly_apply(mat, dvec)
        rhs = _padcat([npoly.polyadd(rhs[c], term[c]) for c in range(2)])
    resid = _padcat([npoly.polysub(lhs[c], rhs[c]) for c in range(2)])
    scale = max(np.abs(w).max(), 1e-300)
    return float(np.abs(resid).max() / scale)


def second_order_2d(stack: CorrectorStack) -> dict:
    """The explicit second-order wall law for 2-D flows.

    Reports the slip length, the d_y^2 coefficient, the mixed-derivative
    coefficient vector, and the epsilon-rescaled symbolic form; raises
    WallLawAccuracyError if the slip length fails to be positive.
    """
    table = phi_table(stack, 2)
    lam = table.slip_length
    if lam <= 0:
        raise WallLawAccuracyError(
            f"slip length {lam} is not positive: refine the cell solve"
        )
    phi02 = table.phi[(0, 2)]
    phi11 = table.phi[(1, 1)]
    c_yy = float(phi02[0, 0, 0])
    # e1-coefficient of d_y d_x w1 groups Phi^{1,1} col 1 with -Phi^{0,2} col 2
    c_xy_vector = phi11[:, 0, 0] - phi02[:, 1, 0]
    v02_2 = stack.level(0, 2, 2).const
    report = {
        "lambda": lam,
        "c_yy": c_yy,
        "c_xy_vector": [float(v) for v in c_xy_vector],
        "sign_c_yy": float(np.sign(c_yy)),  # reported, not asserted
        "x_dependence_max": float(
            max(np.abs(phi11[:, :, 1:]).max() if phi11.shape[-1] > 1 else 0.0,
                np.abs(phi02[:, :, 1:]).max() if phi02.shape[-1] > 1 else 0.0)
        ),
        "epsilon_scaled_form": {
            "eps^1": {"e1 * dy w1": lam},
            "eps^2": {
                "e1 * dy2 w1": c_yy,
                "vector * dydx w1": [float(v) for v in c_xy_vector],
            },
            "principal_part": {"w1(x,0)": "eps * lambda * dy w1(x,0)", "w2(x,0)": 0.0},
        },
        "first_order_tails": {c: [float(v) for v in t] for c, t in table.tails.items()},
        "v02_2_const": [float(v) for v in v02_2],
    }
    return report


def basis_identity_residuals(stack: CorrectorStack, order: int,
                             recombine_seed: int | None = None) -> list[float]:
    """Wall-law identity residual on every effective basis element.

    With recombine_seed set, tests a different (random invertible) basis of
    the same space instead.
    """
    table = phi_table(stack, order)
    elements = heterogeneous_basis(stack, order)
    if recombine_seed is not None:
        rng = np.random.default_rng(recombine_seed)
        n = len(elements)
        while True:
            A = rng.integers(-2, 3, size=(n, n)).astype(float)
            if abs(np.linalg.det(A)) > 0.5:
                break
        combos = []
        for row in A:
            nxp = max(el.w_poly_xy.shape[1] for el in elements)
            nyp = max(el.w_poly_xy.shape[2] for el in elements)
            w = np.zeros((2, nxp, nyp))
            for coef, el in zip(row, elements):
                w[:, : el.w_poly_xy.shape[1], : el.w_poly_xy.shape[2]] += coef * el.w_poly_xy
            combos.append(HeterogeneousElement(-1, elements[0].P, elements[0].Q, None, w, None))
        elements = combos
    return [wall_law_identity_residual(table, el) for el in elements]
