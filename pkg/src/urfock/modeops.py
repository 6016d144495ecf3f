"""
Position, momentum, number, and energy operators on the truncated space.

Built from the xyzn position modes A_x, A_y, A_z, A_n:

    X  = (A_x + A_x^dag)/sqrt(2),   P_x = -i (A_x - A_x^dag)/sqrt(2)

(and likewise for y, z), with E^2 = Px^2 + Py^2 + Pz^2 and E the
positive-semidefinite spectral square root of the truncated E^2.

Every operator is provided in two representations of the one
computational basis:

- xyzn labeling: A_x..A_n act elementarily (`X`, `Px`, `E2`, `E`, ...);
- ABCD labeling: the momenta are the combinations
  P_x = -i/(2 sqrt(2)) (A + B - C - D - A^dag - B^dag + C^dag + D^dag)
  etc., acting elementarily on ABCD occupation labels
  (`Px_ABCD`, ..., `E_ABCD`).

The two representations are conjugate by the Fock-space lift of the
orthogonal xyzn mixing matrix; `apply_four_momentum` dispatches on the
state's basis tag.

Conventions: E is defined as the PSD square root of the *truncated*
E^2 (positive-energy branch); it requires a dense eigendecomposition
and is only available for n_max <= DENSE_EIGEN_NMAX_CAP.  The total
number operator does not commute with E^2 (E^2 contains AA and
A^dag A^dag terms); the commutator is measured and reported, never
asserted to vanish.
"""

from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np
import scipy.sparse as sp

from .fock import (
    FockOperator,
    FockSpace,
    StateVector,
    _xyzn_unitary,
    elementary_ladder,
)

# Largest n_max for which the dense eigendecomposition of E^2 (and thus
# E itself) is constructed.  dim(n_max=12) = 1820.
DENSE_EIGEN_NMAX_CAP = 12

_SQRT2 = np.sqrt(2.0)

# Signs of (A, B, C, D) in the annihilator combinations A_x, A_y, A_z
# (each with prefactor 1/2), matching the xyzn mixing matrix rows.
_P_SIGNS = {
    1: np.array([1.0, 1.0, -1.0, -1.0]),   # P_x
    2: np.array([1.0, -1.0, 1.0, -1.0]),   # P_y
    3: np.array([1.0, -1.0, -1.0, 1.0]),   # P_z
}


@dataclass
class QuadratureSet:
    """Quadrature and energy operators for one truncated space."""

    space: FockSpace
    # xyzn labeling
    X: FockOperator
    Y: FockOperator
    Z: FockOperator
    Px: FockOperator
    Py: FockOperator
    Pz: FockOperator
    An_number: FockOperator
    E2: FockOperator
    E: Optional[FockOperator]
    # ABCD labeling
    Px_ABCD: FockOperator
    Py_ABCD: FockOperator
    Pz_ABCD: FockOperator
    E2_ABCD: FockOperator
    E_ABCD: Optional[FockOperator]
    # spectral data of E2 in the xyzn labeling (None above the cap)
    e2_eigvals: Optional[np.ndarray] = None
    e2_eigvecs: Optional[np.ndarray] = None
    min_e2_eigval: Optional[float] = None

    def momentum(self, mu: int, basis: str) -> FockOperator:
        """P_mu (mu in 1..3) in the requested labeling."""
        ops = {
            ("xyzn", 1): self.Px, ("xyzn", 2): self.Py, ("xyzn", 3): self.Pz,
            ("ABCD", 1): self.Px_ABCD, ("ABCD", 2): self.Py_ABCD,
            ("ABCD", 3): self.Pz_ABCD,
        }
        try:
            return ops[(basis, mu)]
        except KeyError:
            raise ValueError(f"no momentum operator for basis={basis!r}, mu={mu}")

    def energy(self, basis: str) -> FockOperator:
        e = self.E if basis == "xyzn" else self.E_ABCD if basis == "ABCD" else None
        if e is None:
            raise RuntimeError(
                "E is unavailable (n_max above the dense-eigen cap or unknown basis)"
            )
        return e


def _quadrature_pair(space: FockSpace, mode: int) -> Tuple[sp.csr_matrix, sp.csr_matrix]:
    """(position, momentum) matrices of one elementary xyzn mode."""
    a = elementary_ladder(space, mode, "annihilate")
    adag = elementary_ladder(space, mode, "create")
    x = (a + adag) / _SQRT2
    p = -1j * (a - adag) / _SQRT2
    return x.tocsr(), p.tocsr()


def _momentum_ABCD(space: FockSpace, mu: int) -> sp.csr_matrix:
    """P_mu as the +-combination of elementary ABCD ladder matrices."""
    signs = _P_SIGNS[mu]
    mat = sp.csr_matrix((space.dim, space.dim), dtype=np.complex128)
    for m in range(4):
        a = elementary_ladder(space, m, "annihilate")
        mat = mat + signs[m] * (a - a.getH())
    return (-1j / (2.0 * _SQRT2) * mat).tocsr()


def build_quadratures(space: FockSpace) -> QuadratureSet:
    """
    Construct the full quadrature set.  E (the spectral square root of
    E^2) is built only when n_max <= DENSE_EIGEN_NMAX_CAP; above the
    cap, operations requiring E fail fast.
    """
    if space.n_modes != 4:
        raise ValueError("quadratures are defined on the 4-mode space")

    X, Px = _quadrature_pair(space, 0)
    Y, Py = _quadrature_pair(space, 1)
    Z, Pz = _quadrature_pair(space, 2)
    an = elementary_ladder(space, 3, "create") @ elementary_ladder(space, 3, "annihilate")

    E2 = (Px @ Px + Py @ Py + Pz @ Pz).tocsr()
    E2 = (0.5 * (E2 + E2.getH())).tocsr()  # symmetrize rounding noise

    Px_a = _momentum_ABCD(space, 1)
    Py_a = _momentum_ABCD(space, 2)
    Pz_a = _momentum_ABCD(space, 3)
    E2_a = (Px_a @ Px_a + Py_a @ Py_a + Pz_a @ Pz_a).tocsr()
    E2_a = (0.5 * (E2_a + E2_a.getH())).tocsr()

    E_mat = E_a_mat = None
    vals = vecs = None
    min_eig = None
    if space.n_max <= DENSE_EIGEN_NMAX_CAP:
        try:
            vals, vecs = np.linalg.eigh(E2.toarray())
        except np.linalg.LinAlgError as exc:  # pragma: no cover
            raise RuntimeError(
                f"eigendecomposition of E^2 failed on {space}: {exc}"
            ) from exc
        min_eig = float(vals.min())
        clamped = np.where(vals < 0.0, 0.0, vals)
        E_dense = (vecs * np.sqrt(clamped)) @ vecs.conj().T
        E_dense = 0.5 * (E_dense + E_dense.conj().T)
        E_mat = sp.csr_matrix(E_dense)
        # Same physical operator re-expressed in the ABCD labeling.
        U = _xyzn_unitary(space)
        E_a_dense = (U.getH() @ E_mat @ U).toarray()
        E_a_mat = sp.csr_matrix(0.5 * (E_a_dense + E_a_dense.conj().T))

    def op(mat, **kw):
        return FockOperator(space, mat, **kw)

    return QuadratureSet(
        space=space,
        X=op(X, hermitian=True, real=True),
        Y=op(Y, hermitian=True, real=True),
        Z=op(Z, hermitian=True, real=True),
        Px=op(Px, hermitian=True),
        Py=op(Py, hermitian=True),
        Pz=op(Pz, hermitian=True),
        An_number=op(an, hermitian=True, real=True),
        E2=op(E2, hermitian=True),
        E=op(E_mat, hermitian=True) if E_mat is not None else None,
        Px_ABCD=op(Px_a, hermitian=True),
        Py_ABCD=op(Py_a, hermitian=True),
        Pz_ABCD=op(Pz_a, hermitian=True),
        E2_ABCD=op(E2_a, hermitian=True),
        E_ABCD=op(E_a_mat, hermitian=True) if E_a_mat is not None else None,
        e2_eigvals=vals,
        e2_eigvecs=vecs,
        min_e2_eigval=min_eig,
    )


def apply_four_momentum(q: QuadratureSet, state: StateVector, mu: int) -> StateVector:
    """
    P^mu applied to a state: E for mu = 0, P_x/P_y/P_z for mu = 1..3,
    in the labeling declared by the state's basis tag.  These matrices
    realize the explicit sqrt(N +- 1) coefficient maps of the momentum
    action on occupation labels.
    """
    if state.space is not q.space:
        raise ValueError("state and quadratures live on different spaces")
    if mu == 0:
        return q.energy(state.basis).apply(state)
    if mu in (1, 2, 3):
        return q.momentum(mu, state.basis).apply(state)
    raise ValueError(f"mu must be 0..3, got {mu}")


def total_number(space: FockSpace) -> FockOperator:
    """
    Total number operator, equal whether assembled from the elementary
    mode ladders or from the ABCD/xyzn combinations (the mixing is
    unitary); diagonal in every occupational labeling.
    """
    mat = sp.csr_matrix((space.dim, space.dim), dtype=np.complex128)
    for m in range(space.n_modes):
        mat = mat + (
            elementary_ladder(space, m, "create")
            @ elementary_ladder(space, m, "annihilate")
        )
    return FockOperator(space, mat.tocsr(), hermitian=True, real=True)


def number_energy_commutator_norm(q: QuadratureSet) -> float:
    """
    Measured max-entry norm of [N, E^2].  E^2 contains AA and
    A^dag A^dag pieces, so this is genuinely nonzero; it is reported,
    not asserted away.
    """
    N = total_number(q.space).mat
    comm = N @ q.E2.mat - q.E2.mat @ N
    return float(abs(comm).max()) if comm.nnz else 0.0
