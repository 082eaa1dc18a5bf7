"""Discrete Stokes solver on one periodicity cell of the rough strip (d = 2).

The strip {gamma(x) < y < Y} is mapped onto the rectangle [-pi, pi) x [0, 1]
by y = gamma(x) + H(x) s(xi), H = Y - gamma, with an optional exponential
stretch s clustering points near the wall.  Discretization: Fourier
collocation in x, second-order finite differences on a staggered grid in xi
(velocity at nodes, pressure at midpoints).  The saddle-point system is
solved directly with a pressure-mean Lagrange multiplier.

The top boundary is either Dirichlet (tall strips for regularity runs) or a
transparent condition built from the per-mode Dirichlet-to-Neumann map of the
decaying Stokes solution above y = Y: horizontal Robin rows plus a pressure
trace row per Fourier mode, with the zero mode closed by Neumann data.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .geometry import BoundaryGeometry
from .modes import ModeExpansion, dtn_matrix, solve_mode_numeric
from .polynomials import VectorPolynomial


# ---------------------------------------------------------------------------
# grid
# ---------------------------------------------------------------------------

class StripGrid:
    """Boundary-fitted tensor grid with metric coefficients precomputed."""

    def __init__(self, geometry: BoundaryGeometry, height: float = 3.0,
                 nx: int = 32, ny: int = 40, stretch: float = 0.0):
        if nx < 8 or ny < 16:
            raise ValueError("resolution must be at least (8, 16)")
        if nx % 2 != 0:
            raise ValueError("nx must be even")
        lo, hi = geometry.range()
        if height <= hi:
            raise ValueError("height must sit above the boundary")
        self.geometry = geometry
        self.height = float(height)
        self.nx, self.ny = int(nx), int(ny)
        self.stretch = float(stretch)

        self.x = -np.pi + 2.0 * np.pi * np.arange(nx) / nx
        self.dx = 2.0 * np.pi / nx
        self.dxi = 1.0 / ny
        self.xi_nodes = np.arange(ny + 1) * self.dxi
        self.xi_mids = (np.arange(ny) + 0.5) * self.dxi

        self.s_nodes, self.sp_nodes, self.spp_nodes = self._stretch_eval(self.xi_nodes)
        self.s_mids, self.sp_mids, _ = self._stretch_eval(self.xi_mids)

        self.gamma = geometry.gamma(self.x)
        self.dgam = geometry.dgamma(self.x)
        self.d2gam = geometry.d2gamma(self.x)
        self.H = self.height - self.gamma

        # y and metric terms; arrays are (nx, ny+1) nodes or (nx, ny) mids
        self.y_nodes = self.gamma[:, None] + self.H[:, None] * self.s_nodes[None, :]
        self.y_mids = self.gamma[:, None] + self.H[:, None] * self.s_mids[None, :]
        self.a_nodes = self._metric_a(self.s_nodes, self.sp_nodes)
        self.a_mids = self._metric_a(self.s_mids, self.sp_mids)
        self.invHsp_nodes = 1.0 / (self.H[:, None] * self.sp_nodes[None, :])
        self.invHsp_mids = 1.0 / (self.H[:, None] * self.sp_mids[None, :])

        # Laplacian coefficients at nodes:
        #   Lap f = f_xx + 2 a f_xxi + cxx f_xixi + cxi f_xi
        ax = ((self.s_nodes[None, :] - 1.0) / self.sp_nodes[None, :]
              * (self.d2gam * self.H + self.dgam ** 2)[:, None] / self.H[:, None] ** 2)
        axi = (self.dgam[:, None] / self.H[:, None]) * (
            1.0 - (self.s_nodes[None, :] - 1.0) * self.spp_nodes[None, :]
            / self.sp_nodes[None, :] ** 2
        )
        self.cxixi = self.a_nodes ** 2 + self.invHsp_nodes ** 2
        self.cxi = ax + self.a_nodes * axi - (
            self.spp_nodes[None, :] / (self.H[:, None] ** 2 * self.sp_nodes[None, :] ** 3)
        )

        kv = np.fft.fftfreq(nx, d=1.0 / nx)
        kv_odd = kv.copy()
        kv_odd[nx // 2] = 0.0
        eye_hat = np.fft.fft(np.eye(nx), axis=0)
        self.Dx = np.real(np.fft.ifft(1j * kv_odd[:, None] * eye_hat, axis=0))
        self.Dxx = np.real(np.fft.ifft(-(kv ** 2)[:, None] * eye_hat, axis=0))

    def _stretch_eval(self, xi):
        if self.stretch == 0.0:
            one = np.ones_like(xi)
            return xi.copy(), one, np.zeros_like(xi)
        sig = self.stretch
        den = np.expm1(sig)
        s = np.expm1(sig * xi) / den
        spr = sig * np.exp(sig * xi) / den
        return s, spr, sig * spr

    def _metric_a(self, s, spr):
        return self.dgam[:, None] * (s[None, :] - 1.0) / (self.H[:, None] * spr[None, :])

    # -- helpers used by the recursion and the regularity harness ----------

    def xi_of_y(self, column: int, yvals):
        """Invert the vertical map on one x-column."""
        svals = (np.asarray(yvals, dtype=float) - self.gamma[column]) / self.H[column]
        if self.stretch == 0.0:
            return svals
        return np.log1p(svals * np.expm1(self.stretch)) / self.stretch

    def xi_derivative_nodes(self, f: np.ndarray) -> np.ndarray:
        """Second-order d/dxi of a node field (nx, ny+1)."""
        out = np.empty_like(f)
        out[:, 1:-1] = (f[:, 2:] - f[:, :-2]) / (2 * self.dxi)
        out[:, 0] = (-3 * f[:, 0] + 4 * f[:, 1] - f[:, 2]) / (2 * self.dxi)
        out[:, -1] = (3 * f[:, -1] - 4 * f[:, -2] + f[:, -3]) / (2 * self.dxi)
        return out

    def dx_nodes(self, f: np.ndarray) -> np.ndarray:
        """Physical d/dx of a node field."""
        return self.Dx @ f + self.a_nodes * self.xi_derivative_nodes(f)

    def dy_nodes(self, f: np.ndarray) -> np.ndarray:
        """Physical d/dy of a node field."""
        return self.invHsp_nodes * self.xi_derivative_nodes(f)

    def node_quad_weights(self) -> np.ndarray:
        """Trapezoidal quadrature weights for integrals dx dy over the cell."""
        w = self.dx * self.dxi * self.H[:, None] * self.sp_nodes[None, :]
        w = w.copy()
        w[:, 0] *= 0.5
        w[:, -1] *= 0.5
        return w

    def mid_volumes(self) -> np.ndarray:
        return self.dx * self.dxi * self.H[:, None] * self.sp_mids[None, :]

    def pressure_at_nodes(self, p: np.ndarray) -> np.ndarray:
        """Interpolate the midpoint pressure to nodes (second order)."""
        out = np.empty((self.nx, self.ny + 1))
        out[:, 1:-1] = 0.5 * (p[:, 1:] + p[:, :-1])
        out[:, 0] = 1.5 * p[:, 0] - 0.5 * p[:, 1]
        out[:, -1] = 1.5 * p[:, -1] - 0.5 * p[:, -2]
        return out


# ---------------------------------------------------------------------------
# top boundary conditions
# ---------------------------------------------------------------------------

@dataclass
class DirichletTop:
    """Prescribed velocity at y = height; values has shape (2, nx)."""

    values: np.ndarray


@dataclass
class TransparentTop:
    """Per-mode transparent condition at y = height.

    mode_data maps k > 0 to dict(w0=(2,) complex trace shift, r1=complex
    horizontal Robin rhs, rp=complex pressure rhs); missing modes are
    homogeneous.  neumann0 holds the d_y value of the zero mode.
    """

    mode_data: dict = field(default_factory=dict)
    neumann0: np.ndarray = field(default_factory=lambda: np.zeros(2))


class SolverError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# the saddle-point solve
# ---------------------------------------------------------------------------

@dataclass
class CellProblem:
    grid: StripGrid
    bottom: np.ndarray                    # (2, nx) velocity on the wall
    top: object                           # DirichletTop | TransparentTop
    source: np.ndarray | None = None      # (2, nx, ny+1) at nodes
    div_data: np.ndarray | None = None    # (nx, ny) at midpoints


@dataclass
class CellSolution:
    grid: StripGrid
    u: np.ndarray                         # (2, nx, ny+1)
    p: np.ndarray                         # (nx, ny)
    tail: np.ndarray                      # zero Fourier mode of u at the top
    trace_modes: dict                     # k > 0 -> (2,) complex trace at top
    p_top_zero: float
    multiplier: float
    diagnostics: dict
    runtime: float

    def pressure_nodes(self) -> np.ndarray:
        return self.grid.pressure_at_nodes(self.p)


def _block(rows_idx, cols_idx, mat, acc):
    nxr = rows_idx.size
    acc[0].append(np.repeat(rows_idx, cols_idx.size))
    acc[1].append(np.tile(cols_idx, nxr))
    acc[2].append(np.asarray(mat, dtype=float).ravel())


def _diag(rows_idx, cols_idx, vals, acc):
    acc[0].append(rows_idx)
    acc[1].append(cols_idx)
    acc[2].append(np.asarray(vals, dtype=float))


def assemble(problem: CellProblem):
    """Build the sparse saddle-point matrix and right-hand side.

    Pressure constraint rows: the weighted mean is always pinned; with a
    Dirichlet top the x-Nyquist, xi-constant pressure pattern is invisible to
    every momentum row (the real Fourier derivative annihilates the Nyquist
    mode), so a second constraint/multiplier pair removes it.
    """
    g = problem.grid
    nx, ny = g.nx, g.ny
    dxi = g.dxi
    nu = nx * (ny + 1)
    npr = nx * ny
    nmult = 2 if isinstance(problem.top, DirichletTop) else 1
    ntot = 2 * nu + npr + nmult

    def iu(c, j):
        return c * nu + j * nx + np.arange(nx)

    def ipr(j):
        return 2 * nu + j * nx + np.arange(nx)

    imu = 2 * nu + npr
    nyq_pattern = (-1.0) ** np.arange(nx)
    acc = ([], [], [])
    rhs = np.zeros(ntot)

    # bottom Dirichlet
    for c in range(2):
        _diag(iu(c, 0), iu(c, 0), np.ones(nx), acc)
        rhs[iu(c, 0)] = problem.bottom[c]

    # interior momentum rows
    Dx, Dxx = g.Dx, g.Dxx
    for j in range(1, ny):
        rowj = {0: iu(0, j), 1: iu(1, j)}
        B0 = -Dxx + np.diag(2.0 * g.cxixi[:, j] / dxi ** 2)
        Bp = -np.diag(g.cxixi[:, j]) / dxi ** 2 - g.a_nodes[:, j, None] * Dx / dxi \
            - np.diag(g.cxi[:, j]) / (2 * dxi)
        Bm = -np.diag(g.cxixi[:, j]) / dxi ** 2 + g.a_nodes[:, j, None] * Dx / dxi \
            + np.diag(g.cxi[:, j]) / (2 * dxi)
        for c in range(2):
            _block(rowj[c], iu(c, j), B0, acc)
            _block(rowj[c], iu(c, j + 1), Bp, acc)
            _block(rowj[c], iu(c, j - 1), Bm, acc)
        # pressure gradient: d_x p in u1 rows, d_y p in u2 rows
        _block(rowj[0], ipr(j), Dx / 2 + np.diag(g.a_nodes[:, j]) / dxi, acc)
        _block(rowj[0], ipr(j - 1), Dx / 2 - np.diag(g.a_nodes[:, j]) / dxi, acc)
        _diag(rowj[1], ipr(j), g.invHsp_nodes[:, j] / dxi, acc)
        _diag(rowj[1], ipr(j - 1), -g.invHsp_nodes[:, j] / dxi, acc)
        if problem.source is not None:
            rhs[rowj[0]] = problem.source[0, :, j]
            rhs[rowj[1]] = problem.source[1, :, j]

    # continuity rows at each pressure cell
    vols = g.mid_volumes()
    for j in range(ny):
        row = ipr(j)
        _block(row, iu(0, j), Dx / 2 - np.diag(g.a_mids[:, j]) / dxi, acc)
        _block(row, iu(0, j + 1), Dx / 2 + np.diag(g.a_mids[:, j]) / dxi, acc)
        _diag(row, iu(1, j), -g.invHsp_mids[:, j] / dxi, acc)
        _diag(row, iu(1, j + 1), g.invHsp_mids[:, j] / dxi, acc)
        # uniform multiplier column: mu reads as compatibility defect density
        _diag(row, np.full(nx, imu), np.ones(nx), acc)
        if nmult == 2:
            _diag(row, np.full(nx, imu + 1), nyq_pattern, acc)
        if problem.div_data is not None:
            rhs[row] = problem.div_data[:, j]

    # pressure constraint rows: mean pin, plus the Nyquist pattern if needed
    for j in range(ny):
        _diag(np.full(nx, imu), ipr(j), vols[:, j], acc)
        if nmult == 2:
            _diag(np.full(nx, imu + 1), ipr(j), nyq_pattern * vols[:, j], acc)

    # top rows
    top_rows = [iu(0, ny), iu(1, ny)]
    slots = np.concatenate(top_rows)
    if isinstance(problem.top, DirichletTop):
        for c in range(2):
            _diag(iu(c, ny), iu(c, ny), np.ones(nx), acc)
            rhs[iu(c, ny)] = problem.top.values[c]
    elif isinstance(problem.top, TransparentTop):
        _assemble_transparent(problem.top, g, iu, ipr, slots, acc, rhs)
    else:
        raise TypeError(f"unsupported top condition {type(problem.top)!r}")

    rows = np.concatenate(acc[0])
    cols = np.concatenate(acc[1])
    vals = np.concatenate(acc[2])
    A = sp.coo_matrix((vals, (rows, cols)), shape=(ntot, ntot)).tocsc()
    return A, rhs


def _assemble_transparent(top: TransparentTop, g: StripGrid, iu, ipr, slots, acc, rhs):
    """Robin/pressure rows of the transparent condition, one mode at a time."""
    nx, ny = g.nx, g.ny
    dxi = g.dxi
    dcoef = g.invHsp_nodes[:, ny] / (2 * dxi)

    def dy_cols_vals(c, weight):
        cols = np.concatenate([iu(c, ny), iu(c, ny - 1), iu(c, ny - 2)])
        vals = np.concatenate([3.0 * weight * dcoef, -4.0 * weight * dcoef,
                               weight * dcoef])
        return cols, vals

    rows_built: list[tuple[np.ndarray, np.ndarray, float]] = []

    # zero mode: d_y of both components equals the prescribed Neumann data
    w0vec = np.full(nx, 1.0 / nx)
    for c in range(2):
        cols, vals = dy_cols_vals(c, w0vec)
        rows_built.append((cols, vals, float(top.neumann0[c])))

    for k in range(1, nx // 2 + 1):
        wk = np.exp(-1j * k * g.x) / nx
        M = dtn_matrix((k,))
        data = top.mode_data.get(k, None)
        w0 = np.zeros(2, dtype=complex) if data is None else np.asarray(data["w0"], dtype=complex)
        r1 = 0j if data is None else complex(data["r1"])
        rp = 0j if data is None else complex(data["rp"])

        trace_cols = [iu(0, ny), iu(1, ny)]
        # horizontal Robin: FFT_k[d_y u1] - (M uhat)_1 = r1 - (M w0)_1
        cols_d, vals_d = dy_cols_vals(0, wk)
        cols = np.concatenate([cols_d, trace_cols[0], trace_cols[1]])
        vals = np.concatenate([vals_d, -M[0, 0] * wk, -M[0, 1] * wk])
        rhs_c = r1 - (M @ w0)[0]
        row_h = (cols, vals, rhs_c)

        # pressure trace: FFT_k[p(top)] + 2 a_k . uhat = rp + 2 a_k . w0
        a_k = np.array([1j * k, -abs(k)], dtype=complex)
        pcols = np.concatenate([ipr(ny - 1), ipr(ny - 2), trace_cols[0], trace_cols[1]])
        pvals = np.concatenate([1.5 * wk, -0.5 * wk, 2 * a_k[0] * wk, 2 * a_k[1] * wk])
        rhs_p = rp + 2 * (a_k @ w0)
        row_p = (pcols, pvals, rhs_p)

        parts = (np.real, np.imag) if k < nx // 2 else (np.real,)
        for part in parts:
            for cols_c, vals_c, rhs_cplx in (row_h, row_p):
                rows_built.append((cols_c, part(vals_c),
                                   float(part(np.complex128(rhs_cplx)))))

    if len(rows_built) != 2 * nx:
        raise SolverError(f"top row count {len(rows_built)} != {2 * nx}")
    for slot, (cols, vals, b) in zip(slots, rows_built):
        acc[0].append(np.full(cols.shape[0], slot))
        acc[1].append(np.asarray(cols))
        acc[2].append(np.asarray(vals, dtype=float))
        rhs[slot] = b


def solve_stokes(problem: CellProblem) -> CellSolution:
    """Direct solve of the discrete saddle-point system."""
    t0 = time.perf_counter()
    g = problem.grid
    nx, ny = g.nx, g.ny
    A, rhs = assemble(problem)
    try:
        lu = spla.splu(A)
    except RuntimeError as exc:  # singular factorization
        raise SolverError(f"saddle-point factorization failed: {exc}") from exc
    sol = lu.solve(rhs)
    # iterative refinement: tall stretched grids push the condition number
    # high enough that one LU pass loses several digits
    scale = max(1.0, float(np.abs(rhs).max()))
    for _ in range(4):
        resid = rhs - A @ sol
        if float(np.abs(resid).max()) <= 1e-12 * scale:
            break
        sol = sol + lu.solve(resid)
    if not np.all(np.isfinite(sol)):
        raise SolverError("solver returned non-finite values")

    nu = nx * (ny + 1)
    u = np.stack([sol[:nu].reshape(ny + 1, nx).T, sol[nu:2 * nu].reshape(ny + 1, nx).T])
    p = sol[2 * nu:2 * nu + nx * ny].reshape(ny, nx).T
    mult = float(sol[2 * nu + nx * ny])

    resid = A @ sol - rhs
    scale = max(1.0, float(np.abs(rhs).max()))
    spec = fourier_modes(g, u[:, :, ny])
    trace_modes = {k: spec[:, k].copy() for k in range(1, nx // 2 + 1)}
    third = max(1, nx // 6)
    tail_band = np.sum(np.abs(spec[:, nx // 2 - third + 1: nx // 2 + 1]) ** 2)
    total_band = np.sum(np.abs(spec[:, 1: nx // 2 + 1]) ** 2)

    div = divergence_residual(g, u, problem.div_data)
    diagnostics = {
        "linear_residual": float(np.abs(resid).max() / scale),
        "divergence_residual": float(np.abs(div).max()),
        "multiplier": mult,
        "trailing_mode_energy": float(tail_band),
        "mode_energy": float(total_band),
        "resolution": (nx, ny),
    }
    return CellSolution(
        grid=g,
        u=u,
        p=p,
        tail=np.real(spec[:, 0]),
        trace_modes=trace_modes,
        p_top_zero=float(np.mean(1.5 * p[:, ny - 1] - 0.5 * p[:, ny - 2])),
        multiplier=mult,
        diagnostics=diagnostics,
        runtime=time.perf_counter() - t0,
    )


def fourier_modes(g: StripGrid, row_values: np.ndarray) -> np.ndarray:
    """Coefficients (1/nx) sum_i f(x_i) e^{-ik x_i} along the last axis.

    The grid starts at x = -pi, so the raw FFT picks up a (-1)^k phase.
    """
    kv = np.fft.fftfreq(g.nx, d=1.0 / g.nx).astype(int)
    return np.fft.fft(row_values, axis=-1) / g.nx * ((-1.0) ** kv)


def divergence_residual(g: StripGrid, u: np.ndarray, div_data=None) -> np.ndarray:
    """Discrete divergence minus prescribed data at the pressure cells."""
    dxi = g.dxi
    u1m = 0.5 * (u[0][:, 1:] + u[0][:, :-1])
    du1 = (u[0][:, 1:] - u[0][:, :-1]) / dxi
    du2 = (u[1][:, 1:] - u[1][:, :-1]) / dxi
    div = g.Dx @ u1m + g.a_mids * du1 + g.invHsp_mids * du2
    if div_data is not None:
        div = div - div_data
    return div


# ---------------------------------------------------------------------------
# cell problems driven by polynomial boundary data
# ---------------------------------------------------------------------------

def boundary_trace(grid: StripGrid, P: VectorPolynomial) -> np.ndarray:
    """Values of -P(x, gamma(x)) along the wall."""
    vals = np.zeros((2, grid.nx))
    for c in range(2):
        for exp, coeff in P[c].terms.items():
            vals[c] -= float(coeff) * grid.x ** exp[0] * grid.gamma ** exp[1]
    return vals


def monomial_data(l: int, comp: int) -> VectorPolynomial:
    """P = y^l e_comp (comp is 1-based to match the driving index i)."""
    if l < 1 or comp not in (1, 2):
        raise ValueError("need l >= 1 and comp in {1, 2}")
    return VectorPolynomial.unit_monomial((0, l), comp - 1, 2)


def solve_cell(geometry: BoundaryGeometry, l: int, comp: int, height: float = 3.0,
               nx: int = 32, ny: int = 40) -> CellSolution:
    """Bounded cell corrector with data v = -y^l e_comp on the wall."""
    grid = StripGrid(geometry, height=height, nx=nx, ny=ny)
    problem = CellProblem(
        grid=grid,
        bottom=boundary_trace(grid, monomial_data(l, comp)),
        top=TransparentTop(),
    )
    return solve_stokes(problem)


def transparent_mode_entry(k: int, F_coeffs, w0=(0j, 0j), w0_prime=(0j, 0j)) -> dict:
    """Robin/pressure data for one mode of the transparent top condition.

    F_coeffs is the reduced (divergence-free) exterior source profile for
    mode k > 0; w0 and w0_prime are the value and slope at z = 0 of the mode
    part of the divergence corrector, both zero for solenoidal problems.
    The exterior solution with trace (uhat - w0) then satisfies

        d_y uhat - M_k (uhat - w0) = g_k + (w0' - |k| w0)   (horizontal rows)
        phat + 2 a_k . (uhat - w0) = Qbar(0) - 2 (Vbar')_2(0)   (pressure row)

    with g_k = (1/|k|) a_k (Vbar')_2(0) + Vbar'(0).
    """
    from .modes import halfline_integrals, poly_derive, poly_eval0

    kn = float(abs(k))
    F = [list(map(complex, comp)) for comp in F_coeffs]
    qbar, vbar = halfline_integrals((k,), F, knorm=kn)
    dv0 = [poly_eval0(poly_derive(vb), 0j) for vb in vbar]
    a_k = np.array([1j * k, -kn], dtype=complex)
    g = (a_k / kn) * dv0[1] + np.array(dv0)
    w0 = np.asarray(w0, dtype=complex)
    w0p = np.asarray(w0_prime, dtype=complex)
    return {
        "w0": w0,
        "r1": complex(g[0] + (w0p - kn * w0)[0]),
        "rp": complex(poly_eval0(qbar, 0j) - 2 * dv0[1]),
    }


def trace_expansion(solution: CellSolution, mode_sources: dict | None = None) -> ModeExpansion:
    """Mode expansion of the decaying part above the top of the grid.

    mode_sources optionally maps k > 0 to dict(F=(2, n) complex coefficients,
    w0=(2,) complex) describing the reduced exterior source and the mode part
    of the divergence corrector; used by the recursion.
    """
    g = solution.grid
    modes = {}
    for k, trace in solution.trace_modes.items():
        src = mode_sources.get(k) if mode_sources else None
        Fk = [[], []] if src is None else [list(src["F"][0]), list(src["F"][1])]
        shift = np.zeros(2, complex) if src is None else np.asarray(src["w0"])
        V, Q, c = solve_mode_numeric((k,), Fk, trace - shift, L=g.height)
        modes[k] = {"V": [np.asarray(v) for v in V], "Q": np.asarray(Q), "c": c}
        modes[-k] = {
            "V": [np.conj(v) for v in modes[k]["V"]],
            "Q": np.conj(modes[k]["Q"]),
            "c": np.conj(c),
        }
    return ModeExpansion(g.height, modes)


def energy_norms(solution: CellSolution, window: float | None = None) -> dict:
    """Quadrature-consistent norms of the gradient and pressure fields."""
    g = solution.grid
    w = g.node_quad_weights()
    if window is not None:
        w = w * (np.abs(g.y_nodes) <= window) * (np.abs(g.x[:, None]) <= window)
    area = float(w.sum())
    grad_sq = np.zeros_like(w)
    for c in range(2):
        grad_sq += g.dx_nodes(solution.u[c]) ** 2 + g.dy_nodes(solution.u[c]) ** 2
    p_nodes = solution.pressure_nodes()
    return {
        "grad_velocity": float(np.sqrt((w * grad_sq).sum())),
        "pressure": float(np.sqrt((w * p_nodes ** 2).sum())),
        "area": area,
    }
