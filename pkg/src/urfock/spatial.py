"""
Map tensor-space states to 3-D wavefunctions via Hermite functions.

A basis label |N_x,N_y,N_z,N_n> maps to the product
h_{N_x}(x) h_{N_y}(y) h_{N_z}(z) of orthonormal Hermite functions;
the n-mode occupation does not enter the spatial profile, so amplitudes
that differ only in N_n are summed coherently before evaluation.

Conventions: orthonormal Hermite functions (prefactor
pi^{-1/4}/sqrt(2^n n!), evaluated by the stable normalized three-term
recurrence), oscillator length 1, cubic grids [-L, L]^3 with uniform
step h and trapezoid quadrature.
"""

from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from .fock import FockSpace, StateVector

# Cap on grid points per axis and on materialized 3-D fields.
AXIS_POINTS_CAP = 4001
MATERIALIZE_POINTS_CAP = 120_000_000


@dataclass(frozen=True)
class Grid3:
    """Cubic grid [-L, L]^3 with uniform step h (identical axes)."""

    extent: float
    step: float

    def __post_init__(self):
        if self.extent <= 0 or self.step <= 0:
            raise ValueError("extent and step must be positive")
        n = 2.0 * self.extent / self.step + 1.0
        if abs(n - round(n)) > 1e-9:
            raise ValueError(
                f"(2L/h + 1) = {n} is not an integer; choose h dividing 2L"
            )
        if round(n) > AXIS_POINTS_CAP:
            raise ValueError(
                f"{round(n)} grid points per axis exceeds the cap {AXIS_POINTS_CAP}"
            )

    @property
    def npts(self) -> int:
        return int(round(2.0 * self.extent / self.step + 1.0))

    @property
    def axis(self) -> np.ndarray:
        return np.linspace(-self.extent, self.extent, self.npts)

    @property
    def weights(self) -> np.ndarray:
        """Trapezoid quadrature weights along one axis."""
        w = np.full(self.npts, self.step)
        w[0] *= 0.5
        w[-1] *= 0.5
        return w


@dataclass
class WaveField:
    """Complex field values over a Grid3, with its quadrature norm."""

    grid: Grid3
    values: np.ndarray
    quad_norm: float = 0.0

    def __post_init__(self):
        n = self.grid.npts
        self.values = np.asarray(self.values, dtype=np.complex128)
        if self.values.shape != (n, n, n):
            raise ValueError(f"values shape {self.values.shape} != ({n},{n},{n})")
        if not np.all(np.isfinite(self.values.view(np.float64))):
            raise ValueError("non-finite field values")


def hermite_fn(n: int, x) -> np.ndarray:
    """
    Orthonormal Hermite function h_n(x) by the normalized recurrence
    h_0 = pi^{-1/4} exp(-x^2/2), h_1 = sqrt(2) x h_0,
    h_{n+1} = sqrt(2/(n+1)) x h_n - sqrt(n/(n+1)) h_{n-1}.
    Satisfies (x - d/dx) h_n = sqrt(2(n+1)) h_{n+1}.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    x = np.asarray(x, dtype=np.float64)
    h_prev = np.pi ** -0.25 * np.exp(-0.5 * x * x)
    if n == 0:
        return h_prev
    h_cur = np.sqrt(2.0) * x * h_prev
    for k in range(1, n):
        h_next = np.sqrt(2.0 / (k + 1)) * x * h_cur - np.sqrt(k / (k + 1.0)) * h_prev
        h_prev, h_cur = h_cur, h_next
    return h_cur


def hermite_table(n_max: int, x: np.ndarray) -> np.ndarray:
    """Rows h_0(x) .. h_{n_max}(x) of the orthonormal Hermite functions."""
    x = np.asarray(x, dtype=np.float64)
    out = np.empty((n_max + 1, x.size))
    out[0] = np.pi ** -0.25 * np.exp(-0.5 * x * x)
    if n_max >= 1:
        out[1] = np.sqrt(2.0) * x * out[0]
    for k in range(1, n_max):
        out[k + 1] = np.sqrt(2.0 / (k + 1)) * x * out[k] - np.sqrt(k / (k + 1.0)) * out[k - 1]
    return out


def collapse_coefficients(state: StateVector) -> np.ndarray:
    """
    Coherently sum amplitudes over N_n: returns the complex array
    c[N_x, N_y, N_z] feeding the spatial map.  Requires an xyzn-tagged
    state (only the x/y/z mode labels are spatially represented).
    """
    if state.basis != "xyzn":
        raise ValueError(
            f"the spatial map needs an xyzn-labeled state, got {state.basis!r}"
        )
    space = state.space
    k = space.n_max + 1
    c = np.zeros((k, k, k), dtype=np.complex128)
    for i, occ in enumerate(space.basis):
        nx, ny, nz = int(occ[0]), int(occ[1]), int(occ[2])
        c[nx, ny, nz] += state.amp[i]
    return c


def evaluate_field(
    c3: np.ndarray, grid: Grid3, z_slice: Optional[slice] = None
) -> np.ndarray:
    """
    Evaluate Psi(x,y,z) = sum c[a,b,c] h_a(x) h_b(y) h_c(z) on the grid
    (optionally only for a z-index slice, for streaming evaluation).
    """
    n_max = c3.shape[0] - 1
    ax = grid.axis
    H = hermite_table(n_max, ax)
    Hz = H[:, z_slice] if z_slice is not None else H
    npts_z = Hz.shape[1]
    total = grid.npts * grid.npts * npts_z
    if total > MATERIALIZE_POINTS_CAP:
        raise ValueError(
            f"field evaluation of {total} points exceeds the cap "
            f"{MATERIALIZE_POINTS_CAP}; use a coarser grid or stream in chunks"
        )
    # separable contraction: (a,b,c) x (a,X) x (b,Y) x (c,Z)
    t = np.tensordot(c3, H, axes=([0], [0]))        # (b, c, X)
    t = np.tensordot(t, H, axes=([0], [0]))         # (c, X, Y)
    t = np.tensordot(t, Hz, axes=([0], [0]))        # (X, Y, Z)
    return np.ascontiguousarray(t)


def state_to_wavefield(state: StateVector, grid: Grid3) -> WaveField:
    """Materialize the 3-D wavefunction of an xyzn-tagged state."""
    c3 = collapse_coefficients(state)
    values = evaluate_field(c3, grid)
    f = WaveField(grid, values)
    f.quad_norm = float(np.sqrt(abs(quadrature_overlap(f, f).real)))
    return f


def quadrature_overlap(f: WaveField, g: WaveField) -> complex:
    """Trapezoid-rule <f|g> over the shared grid."""
    if f.grid != g.grid:
        raise ValueError("wavefields live on different grids")
    w = f.grid.weights
    integrand = np.conj(f.values) * g.values
    t = np.tensordot(integrand, w, axes=([2], [0]))
    t = np.tensordot(t, w, axes=([1], [0]))
    return complex(np.tensordot(t, w, axes=([0], [0])))


def hermite_gram(n_max: int, grid: Grid3) -> np.ndarray:
    """
    1-D trapezoid Gram matrix G[m,n] = sum_i w_i h_m(x_i) h_n(x_i);
    near-identity for grids that resolve the Hermite functions.
    """
    H = hermite_table(n_max, grid.axis)
    return (H * grid.weights) @ H.T


def state_grid_overlap(s1: StateVector, s2: StateVector, grid: Grid3) -> complex:
    """
    <Psi_1|Psi_2> under trapezoid quadrature, computed from the
    collapsed coefficients and 1-D Gram matrices.  This is exactly the
    trapezoid sum over the 3-D grid, reordered into separable form, so
    it never materializes the fields.
    """
    if s1.space is not s2.space:
        raise ValueError("states live on different spaces")
    c1 = collapse_coefficients(s1)
    c2 = collapse_coefficients(s2)
    G = hermite_gram(s1.space.n_max, grid)
    t = np.einsum("abc,ad->dbc", c2, G)
    t = np.einsum("dbc,be->dec", t, G)
    t = np.einsum("dec,cf->def", t, G)
    return complex(np.sum(np.conj(c1) * t))


def state_grid_norm(state: StateVector, grid: Grid3) -> float:
    """Quadrature norm of the state's wavefield (separable evaluation)."""
    return float(np.sqrt(abs(state_grid_overlap(state, state, grid).real)))


def export_wavefield(f: WaveField, path: str) -> None:
    """
    Plain-text columnar export: header `# urfock wavefield v1 L=<L> h=<h>`
    then one `x y z re im` row per grid point (z varying fastest).
    """
    ax = f.grid.axis
    with open(path, "w") as fh:
        fh.write(f"# urfock wavefield v1 L={f.grid.extent:.17g} h={f.grid.step:.17g}\n")
        for i, x in enumerate(ax):
            for j, y in enumerate(ax):
                for k, z in enumerate(ax):
                    v = f.values[i, j, k]
                    fh.write(
                        f"{x:.17g} {y:.17g} {z:.17g} {v.real:.17g} {v.imag:.17g}\n"
                    )
