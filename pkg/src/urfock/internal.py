"""
Ur-spinors, Majorana spinors, the internal state Gamma = Omega x Phi,
the spinor -> four-vector map, and the Dirac operator Lambda / H_D on
tensor-space x internal states.

The Dirac matrices act on the Omega x spin factor; the isospin slot of
Phi (and the color degree of freedom, which exists only at the
structure-constant level) are spectators.  An ExtendedState stores the
amplitudes as a (4, dim) array: Dirac index x occupation label.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from .algebra import ETA, PAULI, build_dirac
from .fock import FockSpace, StateVector
from .modeops import QuadratureSet

_GAMMAS = build_dirac().gammas
_ISIGMA2 = 1j * PAULI[2]  # [[0, 1], [-1, 0]]


@dataclass
class UrSpinor:
    """Two complex truth-value components."""

    components: np.ndarray
    normalized: bool = False

    def __post_init__(self):
        self.components = np.asarray(self.components, dtype=np.complex128)
        if self.components.shape != (2,):
            raise ValueError("an ur-spinor has 2 complex components")
        if self.normalized:
            if abs(np.linalg.norm(self.components) - 1.0) > 1e-12:
                raise ValueError("spinor flagged normalized is not unit norm")

    def norm(self) -> float:
        return float(np.linalg.norm(self.components))


@dataclass
class MajoranaSpinor:
    """Four complex components built deterministically from ur-spinors."""

    chi: np.ndarray

    def __post_init__(self):
        self.chi = np.asarray(self.chi, dtype=np.complex128)
        if self.chi.shape != (4,):
            raise ValueError("a Majorana spinor has 4 complex components")

    @classmethod
    def single_ur(cls, phi: UrSpinor) -> "MajoranaSpinor":
        """chi = 1/sqrt(2) (phi; i sigma^2 phi*)."""
        p = phi.components
        lower = _ISIGMA2 @ p.conj()
        return cls(np.concatenate([p, lower]) / np.sqrt(2.0))

    @classmethod
    def two_ur(cls, u: UrSpinor, v: UrSpinor) -> "MajoranaSpinor":
        """chi = (u; i sigma^2 v*)."""
        lower = _ISIGMA2 @ v.components.conj()
        return cls(np.concatenate([u.components, lower]))


def spinor_to_vector(chi: MajoranaSpinor) -> np.ndarray:
    """V^mu = chibar gamma^mu chi with chibar = chi^dag gamma^0; real."""
    bar = chi.chi.conj() @ _GAMMAS[0]
    v = np.array([bar @ g @ chi.chi for g in _GAMMAS])
    return v.real


@dataclass
class InternalState:
    """
    Gamma = Omega (2) x Phi (4), length 8, with the factor tags marking
    which 2-dim slot of Phi carries spin (coupled to the Pauli parts of
    the gamma matrices) and which carries isospin (spectator).
    """

    gamma: np.ndarray
    omega: np.ndarray
    phi: np.ndarray
    spin_slot: int = 0  # 0: Phi = spin x isospin, 1: Phi = isospin x spin
    normalized: bool = False

    def __post_init__(self):
        self.gamma = np.asarray(self.gamma, dtype=np.complex128)
        if self.gamma.shape != (8,):
            raise ValueError("Gamma has 8 complex components")
        if self.spin_slot not in (0, 1):
            raise ValueError("spin_slot must be 0 or 1")
        if self.normalized and abs(np.linalg.norm(self.gamma) - 1.0) > 1e-12:
            raise ValueError("state flagged normalized is not unit norm")

    def dirac_and_spectator(self):
        """
        Split Gamma into the Dirac-4 slot (Omega x spin) and the isospin
        spectator: gamma reshaped (2, 2, 2) as Omega x s0 x s1 where
        (s0, s1) = (spin, isospin) for spin_slot 0, swapped for 1.
        Returns an array (4, 2): Dirac index x isospin index.
        """
        cube = self.gamma.reshape(2, 2, 2)
        if self.spin_slot == 1:
            cube = np.swapaxes(cube, 1, 2)
        return cube.reshape(4, 2)


def build_internal(
    omega: UrSpinor, phi: np.ndarray, spin_slot: int = 0, normalized: bool = False
) -> InternalState:
    """
    Gamma = Omega x Phi.  `phi` is the doubled ur-spinor (ubar; vbar)
    as a jointly normalized complex 4-vector.
    """
    phi = np.asarray(phi, dtype=np.complex128)
    if phi.shape != (4,):
        raise ValueError("Phi has 4 complex components")
    if normalized and abs(np.linalg.norm(phi) - 1.0) > 1e-12:
        raise ValueError("Phi flagged normalized violates joint normalization")
    gamma = np.kron(omega.components, phi)
    return InternalState(
        gamma=gamma,
        omega=omega.components.copy(),
        phi=phi.copy(),
        spin_slot=spin_slot,
        normalized=normalized,
    )


@dataclass
class ExtendedState:
    """
    Tensor-space state x Dirac-4 slot: amplitudes (4, dim) with the
    Dirac index first; isospin spectator carried separately (or None).
    """

    space: FockSpace
    amp: np.ndarray
    basis: str = "xyzn"
    spectator: Optional[np.ndarray] = None
    normalized: bool = False

    def __post_init__(self):
        self.amp = np.asarray(self.amp, dtype=np.complex128)
        if self.amp.shape != (4, self.space.dim):
            raise ValueError(f"amp shape {self.amp.shape} != (4, {self.space.dim})")
        if self.normalized and abs(self.norm() - 1.0) > 1e-10:
            raise ValueError("state flagged normalized is not unit norm")

    def norm(self) -> float:
        n2 = float(np.vdot(self.amp, self.amp).real)
        if self.spectator is not None:
            n2 *= float(np.vdot(self.spectator, self.spectator).real)
        return float(np.sqrt(n2))


def extend_state(state: StateVector, internal: InternalState) -> ExtendedState:
    """|Psi_Gamma> = sum psi(N)|N> x Gamma, split Dirac slot/spectator."""
    ds = internal.dirac_and_spectator()  # (4, 2)
    # Gamma generically does not factor Dirac x isospin; the paper's
    # |N> x Gamma does, via Gamma = Omega x Phi with Phi = spin x isospin
    # only when phi factorizes.  We keep the exact product by attaching
    # the full (4, 2) block when it factorizes and rejecting otherwise.
    u, s, vh = np.linalg.svd(ds)
    if s.size > 1 and s[1] > 1e-12 * max(s[0], 1.0):
        raise ValueError(
            "Gamma does not factor into Dirac x isospin; "
            "build it from a product Phi"
        )
    dirac = u[:, 0] * s[0]
    spect = vh[0].conj()
    return ExtendedState(
        space=state.space,
        amp=np.outer(dirac, state.amp),
        basis=state.basis,
        spectator=spect,
    )


def _momenta(q: QuadratureSet, basis: str):
    if basis == "xyzn":
        return q.E.mat, q.Px.mat, q.Py.mat, q.Pz.mat
    if basis == "ABCD":
        return q.E_ABCD.mat, q.Px_ABCD.mat, q.Py_ABCD.mat, q.Pz_ABCD.mat
    raise ValueError(f"unknown basis tag {basis!r}")


def dirac_hamiltonian(q: QuadratureSet, basis: str = "xyzn") -> np.ndarray:
    """
    Dense H_D = -gamma^0 (gamma^1 Px + gamma^2 Py + gamma^3 Pz) on the
    Dirac x tensor-space product (4*dim square matrix, Dirac index
    slowest).  Hermitian; squares to E^2 x I.
    """
    _, Px, Py, Pz = _momenta(q, basis)
    g0 = _GAMMAS[0]
    H = np.zeros((4 * q.space.dim,) * 2, dtype=np.complex128)
    for gi, P in zip(_GAMMAS[1:], (Px, Py, Pz)):
        H -= np.kron(g0 @ gi, P.toarray())
    return H


def dirac_operator(q: QuadratureSet, basis: str = "xyzn") -> np.ndarray:
    """Dense Lambda = gamma^0 E - gamma^1 Px - gamma^2 Py - gamma^3 Pz."""
    E, Px, Py, Pz = _momenta(q, basis)
    lam = np.kron(_GAMMAS[0], E.toarray())
    for gi, P in zip(_GAMMAS[1:], (Px, Py, Pz)):
        lam -= np.kron(gi, P.toarray())
    return lam


def apply_extended(op: np.ndarray, state: ExtendedState) -> ExtendedState:
    """Apply a dense (4*dim)^2 operator to an ExtendedState."""
    dim = state.space.dim
    vec = op @ state.amp.reshape(4 * dim)
    return ExtendedState(
        space=state.space,
        amp=vec.reshape(4, dim),
        basis=state.basis,
        spectator=None if state.spectator is None else state.spectator.copy(),
    )


def dirac_kernel(
    q: QuadratureSet, tol: float = 1e-8, basis: str = "xyzn"
) -> List[ExtendedState]:
    """
    Orthonormal basis of the numerical null space of Lambda: right
    singular vectors whose singular values fall below tol relative to
    the largest one.  May be empty on the truncated space.
    """
    lam = dirac_operator(q, basis)
    _, s, vh = np.linalg.svd(lam)
    cutoff = tol * (s[0] if s.size else 1.0)
    dim = q.space.dim
    out = []
    for k in range(s.size):
        if s[k] < cutoff:
            out.append(
                ExtendedState(q.space, vh[k].conj().reshape(4, dim), basis)
            )
    return out


def smallest_singular_value(q: QuadratureSet, basis: str = "xyzn") -> float:
    """Smallest singular value of Lambda (reported, not asserted)."""
    s = np.linalg.svd(dirac_operator(q, basis), compute_uv=False)
    return float(s[-1])
