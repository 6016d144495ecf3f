"""
Time evolution: abstract block-rotation dynamics, spectral evolution of
tensor-space states under E, and the Klein-Gordon residual check.

The abstract layer evolves a generic alternative either as a complex
vector (phases e^{-i omega_j t}) or as the paired real vector under the
antisymmetric block generator H_{kl} = sum_j omega_j kappa^j_{kl}; the
two representations agree under phi~_j = phi_{2j-1} + i phi_{2j}.

Tensor-space states evolve as exp(-iEt) via the eigendecomposition of
the truncated E^2 (production path); a truncated power series driven by
repeated application of the energy operator is kept as a cross-check.

The Klein-Gordon residual evaluates (d_t^2 - laplacian) Psi(x,t) with a
centered 3-point stencil in time and a 7-point Laplacian in space,
normalized by the grid maximum of |Psi|; the field is evaluated in
z-slabs so large grids never materialize fully.
"""

from dataclasses import dataclass
from math import factorial
from typing import Optional

import numpy as np

from .fock import StateVector, change_basis_xyzn
from .modeops import QuadratureSet, apply_four_momentum
from .spatial import Grid3, collapse_coefficients, evaluate_field


@dataclass
class GenericAlternativeState:
    """
    Truth-value amplitudes of a generic alternative, stored as the
    complex pairing phi~_j = phi_{2j-1} + i phi_{2j}.
    """

    phi: np.ndarray

    def __post_init__(self):
        self.phi = np.asarray(self.phi, dtype=np.complex128)
        if self.phi.ndim != 1:
            raise ValueError("phi must be a vector")

    @classmethod
    def from_real(cls, phi_real: np.ndarray) -> "GenericAlternativeState":
        phi_real = np.asarray(phi_real, dtype=np.float64)
        if phi_real.size % 2:
            raise ValueError("real representation needs even length")
        return cls(phi_real[0::2] + 1j * phi_real[1::2])

    def to_real(self) -> np.ndarray:
        out = np.empty(2 * self.phi.size)
        out[0::2] = self.phi.real
        out[1::2] = self.phi.imag
        return out

    def norm(self) -> float:
        return float(np.linalg.norm(self.phi))


@dataclass
class BlockRotationGenerator:
    """
    Generator with frequencies omega_j: diagonal i-multiplication in the
    complex pairing, or the real antisymmetric block matrix with blocks
    [[0, omega_j], [-omega_j, 0]].
    """

    omegas: np.ndarray

    def __post_init__(self):
        self.omegas = np.asarray(self.omegas, dtype=np.float64)
        if self.omegas.ndim != 1:
            raise ValueError("omegas must be a vector")

    def real_matrix(self) -> np.ndarray:
        n = 2 * self.omegas.size
        H = np.zeros((n, n))
        for j, w in enumerate(self.omegas):
            H[2 * j, 2 * j + 1] = w
            H[2 * j + 1, 2 * j] = -w
        return H


def evolve_generic(
    g: BlockRotationGenerator, s: GenericAlternativeState, t: float
) -> GenericAlternativeState:
    """phi~_j(t) = e^{-i omega_j t} phi~_j(0); norm preserved."""
    if g.omegas.size != s.phi.size:
        raise ValueError("generator and state dimensions differ")
    return GenericAlternativeState(np.exp(-1j * g.omegas * t) * s.phi)


def _spectral_data(q: QuadratureSet):
    if q.e2_eigvals is None:
        raise RuntimeError(
            "E is unavailable for this space (dense-eigen cap exceeded)"
        )
    vals = np.where(q.e2_eigvals < 0.0, 0.0, q.e2_eigvals)
    return np.sqrt(vals), q.e2_eigvecs


def evolve_fock(q: QuadratureSet, state: StateVector, t: float) -> StateVector:
    """exp(-iEt) applied through the eigenbasis of the truncated E^2."""
    if state.space is not q.space:
        raise ValueError("state and quadratures live on different spaces")
    energies, vecs = _spectral_data(q)

    work = state
    converted = False
    if state.basis == "ABCD":
        work = change_basis_xyzn(state, "ABCD->xyzn")
        converted = True
    elif state.basis != "xyzn":
        raise ValueError(f"cannot evolve a state tagged {state.basis!r}")

    coeff = vecs.conj().T @ work.amp
    out = vecs @ (np.exp(-1j * energies * t) * coeff)
    result = StateVector(q.space, out, "xyzn")
    if converted:
        result = change_basis_xyzn(result, "xyzn->ABCD")
    return result


def evolve_fock_series(
    q: QuadratureSet, state: StateVector, t: float, order: int = 8
) -> StateVector:
    """
    Cross-check path: the exponential series sum_k (-it)^k E^k psi / k!
    built by iterating the energy-operator application.
    """
    acc = state.amp.astype(np.complex128).copy()
    term = state
    for k in range(1, order + 1):
        term = apply_four_momentum(q, term, 0)
        acc = acc + (-1j * t) ** k / factorial(k) * term.amp
    return StateVector(state.space, acc, state.basis)


def klein_gordon_residual(
    q: QuadratureSet,
    state: StateVector,
    t: float,
    dt: float,
    grid: Grid3,
    chunk: int = 16,
) -> float:
    """
    Max-norm residual of (d_t^2 - laplacian) Psi at time t, normalized
    by the grid max of |Psi(., t)|.  Uses centered FD in time (step dt)
    and the 7-point Laplacian; evaluated on interior grid points in
    z-slabs of `chunk` planes.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    if grid.step > 0.1 or grid.extent < 8.0:
        raise ValueError("grid must resolve the state (h <= 0.1, L >= 8)")

    coeffs = []
    for tau in (t - dt, t, t + dt):
        s = evolve_fock(q, state, tau)
        if s.basis == "ABCD":
            s = change_basis_xyzn(s, "ABCD->xyzn")
        coeffs.append(collapse_coefficients(s))
    c_minus, c_zero, c_plus = coeffs

    n = grid.npts
    h2 = grid.step**2
    max_res = 0.0
    max_psi = 0.0

    def slab(c3, k0, k1):
        return evaluate_field(c3, grid, z_slice=slice(k0, k1))

    for k0 in range(1, n - 1, chunk):
        k1 = min(k0 + chunk, n - 1)
        # Psi at time t on [k0-1, k1+1) for the z-part of the Laplacian.
        f0 = slab(c_zero, k0 - 1, k1 + 1)
        fm = slab(c_minus, k0, k1)
        fp = slab(c_plus, k0, k1)
        mid = f0[:, :, 1:-1]

        d2t = (fp - 2.0 * mid + fm) / dt**2
        lap = (
            f0[2:, 1:-1, 1:-1]
            + f0[:-2, 1:-1, 1:-1]
            + f0[1:-1, 2:, 1:-1]
            + f0[1:-1, :-2, 1:-1]
            + f0[1:-1, 1:-1, 2:]
            + f0[1:-1, 1:-1, :-2]
            - 6.0 * mid[1:-1, 1:-1, :]
        ) / h2
        res = d2t[1:-1, 1:-1, :] - lap
        max_res = max(max_res, float(np.abs(res).max()))
        max_psi = max(max_psi, float(np.abs(mid).max()))

    if max_psi == 0.0:
        return 0.0
    return max_res / max_psi
