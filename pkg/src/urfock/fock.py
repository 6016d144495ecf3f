"""
Truncated 4-mode bosonic Fock space.

The Hilbert space is the bosonic Fock space over 4 modes, truncated by
total occupation: states |n1,n2,n3,n4> with n1+n2+n3+n4 <= n_max.
Its dimension is C(n_max+4, 4).

Three mode conventions share this one computational occupation basis;
a StateVector carries a `basis` tag declaring how its labels are read:

- "abcd": the raw modes with elementary ladder action
  a|..,N_a,..> = sqrt(N_a)|..,N_a-1,..>.
- "ABCD": complex mode combinations A = (a+ib)/sqrt(2),
  B = (c+id)/sqrt(2), C = (c-id)/sqrt(2), D = (-a+ib)/sqrt(2).
- "xyzn": position modes A_x = (A+B-C-D)/2, A_y = (A-B+C-D)/2,
  A_z = (A-B-C+D)/2, A_n = (A+B+C+D)/2.

`ladder` builds the elementary ladder matrices (the abcd reading);
`ladder_ABCD` builds the A/B/C/D operators as linear combinations of
those matrices, i.e. represented in the abcd labeling.  The unitary
relating the ABCD and xyzn readings of the computational basis is
`mode_transform(space, MIXING_XYZN)`.

Truncation convention: creator matrix elements that would leave the
truncated space are dropped, so exact operator identities (canonical
commutators etc.) are asserted only after projecting onto an interior
subspace (total occupation bounded away from n_max).
"""

from dataclasses import dataclass, field
from math import comb, factorial
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np
import scipy.sparse as sp
from scipy.linalg import expm, logm

# Hard cap on the truncation level of the default 4-mode space.
DEFAULT_NMAX_CAP = 24

# Hard cap on the basis dimension for generic spaces (layer-two spaces
# over many modes go through the same machinery).
DEFAULT_DIM_CAP = 200_000

OccupationVector = Tuple[int, ...]

# Rows x, y, z, n over columns A, B, C, D: A_x = (A+B-C-D)/2 etc.
# Real orthogonal (not symmetric).
MIXING_XYZN = 0.5 * np.array(
    [
        [1.0, 1.0, -1.0, -1.0],
        [1.0, -1.0, 1.0, -1.0],
        [1.0, -1.0, -1.0, 1.0],
        [1.0, 1.0, 1.0, 1.0],
    ]
)


class FockSpace:
    """
    Truncated bosonic Fock space over `n_modes` modes with total
    occupation <= n_max.  dim = C(n_max + n_modes, n_modes).

    Basis states are ordered lexicographically over the occupation
    tuples; rank/unrank use precomputed binomial tables and are
    deterministic across runs.
    """

    def __init__(self, n_max: int, n_modes: int = 4):
        if n_max < 0:
            raise ValueError(f"n_max must be non-negative, got {n_max}")
        if n_modes == 4 and n_max > DEFAULT_NMAX_CAP:
            raise ValueError(
                f"n_max={n_max} exceeds the configured cap {DEFAULT_NMAX_CAP}"
            )
        dim = comb(n_max + n_modes, n_modes)
        if dim > DEFAULT_DIM_CAP:
            raise ValueError(
                f"basis dimension {dim} exceeds the configured cap {DEFAULT_DIM_CAP}"
            )
        self.n_max = n_max
        self.n_modes = n_modes
        self.dim = dim

        # Binomial table: _tail[k][b] = number of states of k modes with
        # total occupation <= b, used for O(n_modes) rank/unrank.
        self._tail = [
            [comb(b + k, k) for b in range(n_max + 1)] for k in range(n_modes + 1)
        ]

        # Enumerate the basis once (lexicographic); also serves as the
        # unrank table and the reverse dict for fast lookup.
        self.basis = np.array(self._enumerate(), dtype=np.int64)
        assert len(self.basis) == dim
        self._index: Dict[OccupationVector, int] = {
            tuple(int(x) for x in occ): i for i, occ in enumerate(self.basis)
        }
        self.total = self.basis.sum(axis=1)

        # Cache slot for the ABCD <-> xyzn basis-change unitary.
        self._xyzn_unitary: Optional[sp.csr_matrix] = None

    def _enumerate(self) -> List[OccupationVector]:
        states: List[OccupationVector] = []

        def rec(prefix: List[int], budget: int, modes_left: int):
            if modes_left == 0:
                states.append(tuple(prefix))
                return
            for n in range(budget + 1):
                rec(prefix + [n], budget - n, modes_left - 1)

        rec([], self.n_max, self.n_modes)
        return states

    def rank(self, occ: Iterable[int]) -> int:
        """Dense index of the occupation tuple (lexicographic order)."""
        occ = tuple(int(x) for x in occ)
        if len(occ) != self.n_modes:
            raise ValueError(f"expected {self.n_modes} occupations, got {len(occ)}")
        if any(n < 0 for n in occ) or sum(occ) > self.n_max:
            raise ValueError(f"occupation {occ} outside the truncated space")
        r = 0
        budget = self.n_max
        for i, n in enumerate(occ):
            k = self.n_modes - i - 1
            # States with a smaller value v < n at this slot, given the
            # remaining budget, come first in lexicographic order.
            for v in range(n):
                r += self._tail[k][budget - v]
            budget -= n
        return r

    def unrank(self, i: int) -> OccupationVector:
        """Occupation tuple of dense index i."""
        if not 0 <= i < self.dim:
            raise IndexError(f"index {i} outside [0, {self.dim})")
        return tuple(int(x) for x in self.basis[i])

    def index(self, occ: Iterable[int]) -> int:
        """Dict-backed rank (same result as rank; O(1))."""
        return self._index[tuple(int(x) for x in occ)]

    def __repr__(self) -> str:
        return f"FockSpace(n_max={self.n_max}, n_modes={self.n_modes}, dim={self.dim})"


@dataclass
class StateVector:
    """
    Complex amplitudes over the ranked truncated basis, with a tag
    declaring which mode convention labels the computational basis.
    """

    space: FockSpace
    amp: np.ndarray
    basis: str = "ABCD"

    def __post_init__(self):
        self.amp = np.asarray(self.amp, dtype=np.complex128)
        if self.amp.shape != (self.space.dim,):
            raise ValueError(
                f"amplitude shape {self.amp.shape} != ({self.space.dim},)"
            )
        if not np.all(np.isfinite(self.amp.view(np.float64))):
            raise ValueError("non-finite amplitudes")

    def norm(self) -> float:
        return float(np.linalg.norm(self.amp))

    def normalized(self) -> "StateVector":
        n = self.norm()
        if n == 0.0:
            raise ValueError("cannot normalize the zero state")
        return StateVector(self.space, self.amp / n, self.basis)

    def copy(self) -> "StateVector":
        return StateVector(self.space, self.amp.copy(), self.basis)


@dataclass
class FockOperator:
    """Sparse complex matrix on the truncated basis."""

    space: FockSpace
    mat: sp.csr_matrix
    hermitian: bool = False
    real: bool = False

    def __post_init__(self):
        self.mat = sp.csr_matrix(self.mat, dtype=np.complex128)
        if self.mat.shape != (self.space.dim, self.space.dim):
            raise ValueError("operator shape does not match the space dimension")
        if self.hermitian:
            dev = abs(self.mat - self.mat.getH()).max() if self.mat.nnz else 0.0
            if dev > 1e-12:
                raise ValueError(f"operator flagged hermitian deviates by {dev}")

    def apply(self, state: StateVector) -> StateVector:
        if state.space is not self.space:
            raise ValueError("state and operator live on different spaces")
        return StateVector(self.space, self.mat @ state.amp, state.basis)

    def dagger(self) -> "FockOperator":
        return FockOperator(self.space, self.mat.getH().tocsr(),
                            hermitian=self.hermitian, real=self.real)

    def dense(self) -> np.ndarray:
        return self.mat.toarray()


def build_space(n_max: int) -> FockSpace:
    """The default 4-mode truncated space."""
    return FockSpace(n_max, n_modes=4)


def basis_state(space: FockSpace, occ: Iterable[int], basis: str = "ABCD") -> StateVector:
    """Unit amplitude on a single occupation label."""
    amp = np.zeros(space.dim, dtype=np.complex128)
    amp[space.index(occ)] = 1.0
    return StateVector(space, amp, basis)


def vacuum(space: FockSpace, basis: str = "ABCD") -> StateVector:
    return basis_state(space, (0,) * space.n_modes, basis)


def elementary_ladder(space: FockSpace, mode_index: int, kind: str) -> sp.csr_matrix:
    """
    Elementary ladder matrix on the computational basis:
    annihilate: |..,N,..> -> sqrt(N)|..,N-1,..>
    create:     |..,N,..> -> sqrt(N+1)|..,N+1,..> (rows beyond the
    truncation are dropped).
    """
    if not 0 <= mode_index < space.n_modes:
        raise ValueError(f"mode index {mode_index} out of range")
    if kind not in ("annihilate", "create"):
        raise ValueError(f"kind must be 'annihilate' or 'create', got {kind!r}")
    rows, cols, vals = [], [], []
    for i, occ in enumerate(space.basis):
        n = int(occ[mode_index])
        if kind == "annihilate":
            if n > 0:
                target = list(occ)
                target[mode_index] = n - 1
                rows.append(space.index(target))
                cols.append(i)
                vals.append(np.sqrt(n))
        else:
            if int(space.total[i]) < space.n_max:
                target = list(occ)
                target[mode_index] = n + 1
                rows.append(space.index(target))
                cols.append(i)
                vals.append(np.sqrt(n + 1))
    return sp.csr_matrix(
        (np.array(vals, dtype=np.complex128), (rows, cols)),
        shape=(space.dim, space.dim),
    )


_RAW_MODES = {"a": 0, "b": 1, "c": 2, "d": 3}

# Annihilator combinations over (a, b, c, d), one row per ABCD mode.
_ABCD_COMBOS = {
    "A": np.array([1.0, 1.0j, 0.0, 0.0]) / np.sqrt(2.0),
    "B": np.array([0.0, 0.0, 1.0, 1.0j]) / np.sqrt(2.0),
    "C": np.array([0.0, 0.0, 1.0, -1.0j]) / np.sqrt(2.0),
    "D": np.array([-1.0, 1.0j, 0.0, 0.0]) / np.sqrt(2.0),
}


def ladder(space: FockSpace, mode: str, kind: str) -> FockOperator:
    """Raw-mode ladder operator (elementary action on the abcd labels)."""
    if mode not in _RAW_MODES:
        raise ValueError(f"mode must be one of a,b,c,d, got {mode!r}")
    return FockOperator(space, elementary_ladder(space, _RAW_MODES[mode], kind))


def ladder_ABCD(space: FockSpace, mode: str, kind: str) -> FockOperator:
    """
    A/B/C/D ladder operator as the complex combination of raw ladder
    matrices (i.e. represented in the abcd labeling of the basis).
    The same operator acts elementarily on ABCD-labeled states.
    """
    if mode not in _ABCD_COMBOS:
        raise ValueError(f"mode must be one of A,B,C,D, got {mode!r}")
    if kind not in ("annihilate", "create"):
        raise ValueError(f"kind must be 'annihilate' or 'create', got {kind!r}")
    combo = _ABCD_COMBOS[mode]
    mat = sp.csr_matrix((space.dim, space.dim), dtype=np.complex128)
    for j in range(4):
        if combo[j] != 0:
            raw = elementary_ladder(space, j, "annihilate")
            mat = mat + combo[j] * raw
    if kind == "create":
        mat = mat.getH().tocsr()
    return FockOperator(space, mat)


def interior_projector(space: FockSpace, margin: int) -> sp.csr_matrix:
    """
    Diagonal projector onto total occupation <= n_max - margin; the
    subspace on which truncated operator identities hold exactly.
    """
    keep = (space.total <= space.n_max - margin).astype(np.complex128)
    return sp.diags(keep).tocsr()


def mode_transform(space: FockSpace, u: np.ndarray) -> FockOperator:
    """
    Lift a one-particle unitary u (n_modes x n_modes) to the Fock-space
    unitary U_F = exp(G) with G = sum_ij (log u)_ij adag_i a_j.

    U_F acts as u directly on the one-particle amplitude vector, and on
    k-particle sectors via permanents of u-submatrices.  G conserves
    total occupation, so the truncated exponential is exact and U_F is
    exactly unitary on the truncated space.
    """
    u = np.asarray(u, dtype=np.complex128)
    if u.shape != (space.n_modes, space.n_modes):
        raise ValueError(f"u must be {space.n_modes}x{space.n_modes}")
    dev = np.abs(u.conj().T @ u - np.eye(space.n_modes)).max()
    if dev > 1e-10:
        raise ValueError(f"u is not unitary (deviation {dev:.3e})")

    g = logm(u)
    # The principal logarithm of a unitary is skew-hermitian; tidy up
    # the rounding part so the lifted generator is exactly skew.
    g = 0.5 * (g - g.conj().T)

    G = sp.csr_matrix((space.dim, space.dim), dtype=np.complex128)
    for i in range(space.n_modes):
        adag_i = elementary_ladder(space, i, "create")
        for j in range(space.n_modes):
            if g[i, j] != 0:
                G = G + g[i, j] * (adag_i @ elementary_ladder(space, j, "annihilate"))

    # G is block-diagonal over total-occupation sectors; exponentiate
    # per sector to keep the dense work small.
    Gd = G.toarray()
    U = np.zeros_like(Gd)
    for n in range(space.n_max + 1):
        idx = np.flatnonzero(space.total == n)
        U[np.ix_(idx, idx)] = expm(Gd[np.ix_(idx, idx)])
    mat = sp.csr_matrix(U)
    mat.data[np.abs(mat.data) < 1e-15] = 0.0
    mat.eliminate_zeros()
    return FockOperator(space, mat)


def _xyzn_unitary(space: FockSpace) -> sp.csr_matrix:
    """Cached Fock-space unitary lifting MIXING_XYZN (ABCD -> xyzn)."""
    if space._xyzn_unitary is None:
        space._xyzn_unitary = mode_transform(space, MIXING_XYZN).mat
    return space._xyzn_unitary


def change_basis_xyzn(state: StateVector, direction: str) -> StateVector:
    """
    Re-express a state between the ABCD and xyzn labelings.  One-particle
    amplitudes transform by the orthogonal mixing matrix MIXING_XYZN;
    higher sectors by its Fock-space lift.  Norm and total occupation
    content are preserved.
    """
    U = _xyzn_unitary(state.space)
    if direction in ("ABCD->xyzn", "ABCD→xyzn"):
        if state.basis != "ABCD":
            raise ValueError(f"state is tagged {state.basis!r}, expected 'ABCD'")
        return StateVector(state.space, U @ state.amp, "xyzn")
    if direction in ("xyzn->ABCD", "xyzn→ABCD"):
        if state.basis != "xyzn":
            raise ValueError(f"state is tagged {state.basis!r}, expected 'xyzn'")
        return StateVector(state.space, U.getH() @ state.amp, "ABCD")
    raise ValueError(f"unknown direction {direction!r}")


def permanent(m: np.ndarray) -> complex:
    """
    Permanent of a small square matrix (Ryser's formula).  Oracle for
    the multi-particle matrix elements of mode_transform.
    """
    m = np.asarray(m, dtype=np.complex128)
    n = m.shape[0]
    if n == 0:
        return 1.0 + 0.0j
    total = 0.0 + 0.0j
    for mask in range(1, 1 << n):
        cols = [j for j in range(n) if mask >> j & 1]
        prod = np.prod(m[:, cols].sum(axis=1))
        total += (-1) ** (n - len(cols)) * prod
    return complex(total)


def transform_matrix_element(
    u: np.ndarray, occ_out: Iterable[int], occ_in: Iterable[int]
) -> complex:
    """
    Oracle: <occ_out| U_F |occ_in> = per(u[rows occ_out, cols occ_in])
    / sqrt(prod(occ_out!) * prod(occ_in!)).
    """
    occ_out = tuple(int(x) for x in occ_out)
    occ_in = tuple(int(x) for x in occ_in)
    if sum(occ_out) != sum(occ_in):
        return 0.0 + 0.0j
    rows = [i for i, n in enumerate(occ_out) for _ in range(n)]
    cols = [j for j, n in enumerate(occ_in) for _ in range(n)]
    sub = np.asarray(u, dtype=np.complex128)[np.ix_(rows, cols)]
    norm = np.sqrt(
        np.prod([factorial(n) for n in occ_out])
        * np.prod([factorial(n) for n in occ_in])
    )
    return permanent(sub) / norm
