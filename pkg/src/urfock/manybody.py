"""
Many-object layer: parabose Green components on M-fold tensor products,
the equal-label diagonal interaction, interacting evolution with a
Schmidt-entropy diagnostic, the layer-two occupation space and
propagator, the correspondence-principle quantizer, and the
electromagnetic-coupling demo.

Green-component realization: b_r^alpha acts as the layer-one ladder on
factor alpha, preceded by (-1)^(total occupation) sign factors on every
factor before it.  Same-object pairs then satisfy canonical boson
relations while different-object pairs anticommute, as required by the
parabose algebra; the observable objects couple only to a_r =
sum_alpha b_r^alpha.
"""

from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.sparse as sp

from .fock import FockSpace, StateVector, elementary_ladder
from .internal import ExtendedState, MajoranaSpinor, spinor_to_vector
from .modeops import QuadratureSet, apply_four_momentum
from .spatial import hermite_fn

# Default caps for the many-object layer.
LAYER_TWO_OBJECT_CAP = 3
LAYER_TWO_NMAX_CAP = 2
DENSE_PRODUCT_DIM_CAP = 100_000

ETA_DIAG = np.array([1.0, -1.0, -1.0, -1.0])


@dataclass(frozen=True)
class ObjectRegistry:
    """M quantum objects over one shared layer-one space."""

    space: FockSpace
    M: int

    def __post_init__(self):
        if self.M < 1:
            raise ValueError("at least one object required")
        if self.space.dim**self.M > DENSE_PRODUCT_DIM_CAP:
            raise ValueError(
                f"product dimension {self.space.dim}^{self.M} exceeds the "
                f"dense cap {DENSE_PRODUCT_DIM_CAP}"
            )

    @property
    def dim(self) -> int:
        return self.space.dim**self.M


@dataclass
class GreenComponentOperator:
    """b_r^alpha with its Jordan-Wigner sign string (sparse matrix)."""

    registry: ObjectRegistry
    alpha: int
    mode: int
    kind: str  # "annihilate" | "create"
    mat: sp.csr_matrix


def _sign_operator(space: FockSpace) -> sp.csr_matrix:
    """Diagonal (-1)^(total occupation) on the layer-one space."""
    return sp.diags((-1.0) ** space.total.astype(np.float64)).tocsr()


def _kron_chain(mats: Sequence[sp.spmatrix]) -> sp.csr_matrix:
    out = mats[0]
    for m in mats[1:]:
        out = sp.kron(out, m, format="csr")
    return out.tocsr()


def build_green_components(
    reg: ObjectRegistry,
) -> Dict[Tuple[int, int, str], GreenComponentOperator]:
    """All b_r^alpha and their adjoints, keyed by (alpha, mode, kind)."""
    space = reg.space
    eye = sp.identity(space.dim, format="csr")
    sign = _sign_operator(space)
    out: Dict[Tuple[int, int, str], GreenComponentOperator] = {}
    for alpha in range(reg.M):
        for mode in range(space.n_modes):
            for kind in ("annihilate", "create"):
                chain = [sign] * alpha
                chain.append(elementary_ladder(space, mode, kind))
                chain.extend([eye] * (reg.M - alpha - 1))
                out[(alpha, mode, kind)] = GreenComponentOperator(
                    reg, alpha, mode, kind, _kron_chain(chain)
                )
    return out


def parabose_ladder(
    components: Dict[Tuple[int, int, str], GreenComponentOperator],
    mode: int,
    kind: str,
) -> sp.csr_matrix:
    """a_r = sum_alpha b_r^alpha (and its adjoint)."""
    mats = [
        op.mat
        for (alpha, r, k), op in sorted(components.items())
        if r == mode and k == kind
    ]
    total = mats[0]
    for m in mats[1:]:
        total = total + m
    return total.tocsr()


# ------------------------------------------------------ multi-object states


@dataclass
class MultiObjectState:
    """Complex amplitudes over the M-fold product of one basis."""

    space: FockSpace
    M: int
    amp: np.ndarray
    basis: str = "xyzn"
    entangled: bool = False

    def __post_init__(self):
        shape = (self.space.dim,) * self.M
        self.amp = np.asarray(self.amp, dtype=np.complex128)
        if self.amp.shape != shape:
            raise ValueError(f"amp shape {self.amp.shape} != {shape}")
        if not np.all(np.isfinite(self.amp.view(np.float64))):
            raise ValueError("non-finite amplitudes")

    def norm(self) -> float:
        return float(np.linalg.norm(self.amp.reshape(-1)))


def product_state(states: Sequence[StateVector]) -> MultiObjectState:
    space = states[0].space
    if any(s.space is not space for s in states):
        raise ValueError("states live on different spaces")
    if len({s.basis for s in states}) != 1:
        raise ValueError("states carry different basis tags")
    amp = states[0].amp
    for s in states[1:]:
        amp = np.multiply.outer(amp, s.amp)
    return MultiObjectState(space, len(states), amp, states[0].basis)


def interaction_apply(
    h: Union[float, complex, np.ndarray, Callable[[int], complex]],
    states: Sequence[StateVector],
) -> MultiObjectState:
    """
    Equal-label diagonal product: the output amplitude vanishes unless
    all M occupation labels coincide; on the diagonal it is
    weight(N) * prod_m psi_m(N).
    """
    space = states[0].space
    if any(s.space is not space for s in states):
        raise ValueError("states live on different spaces")
    if len({s.basis for s in states}) != 1:
        raise ValueError("states carry different basis tags")
    weight = _as_weight(h, space.dim)
    M = len(states)
    diag = weight.astype(np.complex128).copy()
    for s in states:
        diag = diag * s.amp
    amp = np.zeros((space.dim,) * M, dtype=np.complex128)
    idx = np.arange(space.dim)
    amp[(idx,) * M] = diag
    return MultiObjectState(space, M, amp, states[0].basis, entangled=M > 1)


def _as_weight(h, dim: int) -> np.ndarray:
    if callable(h):
        return np.array([h(i) for i in range(dim)], dtype=np.complex128)
    arr = np.asarray(h, dtype=np.complex128)
    if arr.ndim == 0:
        return np.full(dim, complex(arr))
    if arr.shape != (dim,):
        raise ValueError(f"diagonal weight must have length {dim}")
    return arr


def _interaction_matrix(weight: np.ndarray, dim: int, M: int) -> sp.csr_matrix:
    """H_W as a sparse matrix on the flattened product space."""
    idx = np.arange(dim)
    flat = np.zeros(dim, dtype=np.int64)
    for _ in range(M):
        flat = flat * dim + idx
    return sp.csr_matrix(
        (weight, (flat, flat)), shape=(dim**M, dim**M)
    )


def evolve_interacting(
    q: QuadratureSet,
    h: Union[float, complex, np.ndarray, Callable[[int], complex]],
    state: MultiObjectState,
    t: float,
) -> MultiObjectState:
    """
    e^{-i H_G t} with H_G = sum_m E_m (spectators elsewhere) + H_W.
    Dense eigendecomposition; requires a hermitian diagonal weight.
    """
    if state.space is not q.space:
        raise ValueError("state and quadratures live on different spaces")
    if state.basis != "xyzn":
        raise ValueError("interacting evolution expects xyzn-tagged states")
    if q.E is None:
        raise RuntimeError("E unavailable for this space (cap exceeded)")
    dim, M = state.space.dim, state.M
    if dim**M > DENSE_PRODUCT_DIM_CAP:
        raise ValueError("product dimension exceeds the dense cap")
    weight = _as_weight(h, dim)
    if np.abs(weight.imag).max() > 1e-12:
        raise ValueError("diagonal weight must be hermitian (real)")
    E = q.E.mat.toarray()
    eye = np.eye(dim)
    H = _interaction_matrix(weight.real.astype(np.complex128), dim, M).toarray()
    for m in range(M):
        chain = [eye] * M
        chain[m] = E
        term = chain[0]
        for c in chain[1:]:
            term = np.kron(term, c)
        H = H + term
    vals, vecs = np.linalg.eigh(H)
    vec = state.amp.reshape(-1)
    out = vecs @ (np.exp(-1j * vals * t) * (vecs.conj().T @ vec))
    return MultiObjectState(
        state.space, M, out.reshape(state.amp.shape), state.basis, entangled=True
    )


def schmidt_entropy(state: MultiObjectState) -> float:
    """Entanglement entropy of the (1 | rest) bipartition (natural log)."""
    if state.M < 2:
        return 0.0
    mat = state.amp.reshape(state.space.dim, -1)
    s = np.linalg.svd(mat, compute_uv=False)
    p = s**2
    total = p.sum()
    if total <= 0.0:
        return 0.0
    p = p / total
    p = p[p > 1e-300]
    return float(-(p * np.log(p)).sum())


def free_multibody_check(q: QuadratureSet, state: MultiObjectState) -> float:
    """
    Norm of sum_m (E_m^2 - Px_m^2 - Py_m^2 - Pz_m^2) |Psi>; zero by
    construction of E^2 on every factor.
    """
    if state.basis != "xyzn":
        raise ValueError("free multibody check expects xyzn-tagged states")
    O = (
        q.E2.mat
        - q.Px.mat @ q.Px.mat
        - q.Py.mat @ q.Py.mat
        - q.Pz.mat @ q.Pz.mat
    ).toarray()
    amp = state.amp
    out = np.zeros_like(amp)
    for m in range(state.M):
        out += np.moveaxis(
            np.tensordot(O, amp, axes=([1], [m])), 0, m
        )
    return float(np.linalg.norm(out.reshape(-1)))


# ----------------------------------------------------------- layer two


@dataclass
class LayerTwoSpace:
    """
    Occupation numbers over layer-one basis states: a generic boson
    space with one mode per layer-one label, capped.
    """

    layer_one: FockSpace
    space: FockSpace

    @classmethod
    def build(
        cls, layer_one: FockSpace, object_cap: int = LAYER_TWO_OBJECT_CAP
    ) -> "LayerTwoSpace":
        if layer_one.n_max > LAYER_TWO_NMAX_CAP:
            raise ValueError(
                f"layer-one n_max {layer_one.n_max} exceeds the layer-two cap "
                f"{LAYER_TWO_NMAX_CAP}"
            )
        if object_cap > LAYER_TWO_OBJECT_CAP:
            raise ValueError("object count exceeds the layer-two cap")
        return cls(
            layer_one,
            FockSpace(n_max=object_cap, n_modes=layer_one.dim),
        )

    def field_operator(self, label_index: int, kind: str):
        """psi-hat(N) (annihilate) / psi-hat-dagger(N) (create)."""
        return elementary_ladder(self.space, label_index, kind)


def propagator(
    q: QuadratureSet,
    x_prime: Sequence[float],
    x: Sequence[float],
    t_prime: float,
    t: float,
) -> complex:
    """
    Delta(x', x, t', t) = theta(t'-t) sum_{mn} f_m(x') [e^{-iE(t'-t)}]_{mn}
    f_n(x), restricted to labels with N_n = 0 (E^2 is block-diagonal in
    N_n, so the restriction is consistent).  theta(0) = 1 as printed;
    t' < t gives exactly 0.
    """
    if t_prime < t:
        return 0.0 + 0.0j
    if q.e2_eigvals is None:
        raise RuntimeError("E unavailable for this space (cap exceeded)")
    space = q.space
    mask = np.array([occ[3] == 0 for occ in space.basis])
    idx = np.flatnonzero(mask)
    E2_sub = q.E2.mat.toarray()[np.ix_(idx, idx)]
    vals, vecs = np.linalg.eigh(E2_sub)
    energies = np.sqrt(np.clip(vals, 0.0, None))
    phase = vecs @ np.diag(np.exp(-1j * energies * (t_prime - t))) @ vecs.conj().T

    def f_vec(pt):
        pt = np.asarray(pt, dtype=np.float64)
        return np.array(
            [
                hermite_fn(int(space.basis[i][0]), pt[0])
                * hermite_fn(int(space.basis[i][1]), pt[1])
                * hermite_fn(int(space.basis[i][2]), pt[2])
                for i in idx
            ]
        )

    return complex(f_vec(x_prime) @ phase @ f_vec(x))


# ----------------------------------------------------- quantizer / em demo


@dataclass(frozen=True)
class FieldTerm:
    """One product term: coefficient x product of (derivative...) fields."""

    coeff: complex
    factor_derivs: Tuple[Tuple[int, ...], ...]  # per factor, mu indices


def quantize_expression(
    terms: Sequence[FieldTerm],
) -> Callable[[QuadratureSet, Sequence[StateVector]], MultiObjectState]:
    """
    Correspondence rules: each derivative d^mu becomes i P^mu on its
    factor's state; the pointwise product becomes the equal-label
    diagonal product.  All terms must share one factor count.
    """
    if not terms:
        raise ValueError("empty expression")
    counts = {len(t.factor_derivs) for t in terms}
    if len(counts) != 1:
        raise ValueError("terms mix different factor counts")
    (M,) = counts

    def evaluator(
        q: QuadratureSet, states: Sequence[StateVector]
    ) -> MultiObjectState:
        if len(states) != M:
            raise ValueError(f"expression needs {M} factor states")
        total: Optional[MultiObjectState] = None
        for term in terms:
            worked: List[StateVector] = []
            for derivs, s in zip(term.factor_derivs, states):
                cur = s
                for mu in derivs:
                    cur = apply_four_momentum(q, cur, mu)
                    cur = StateVector(cur.space, 1j * cur.amp, cur.basis)
                worked.append(cur)
            contrib = interaction_apply(term.coeff, worked)
            total = contrib if total is None else MultiObjectState(
                contrib.space,
                contrib.M,
                total.amp + contrib.amp,
                contrib.basis,
                entangled=True,
            )
        return total

    return evaluator


@dataclass
class EmResidual:
    """
    The quantized i gamma^mu [d_mu + i A_mu] Psi_D evaluated on states:
    a free one-object part (-Lambda fermion) plus a two-object coupling
    part supported only on equal occupation labels, stored as the
    Dirac-indexed diagonal coefficients coupling[s, N] for |N> x |N>.
    """

    free: ExtendedState
    coupling: np.ndarray  # (4, dim)
    photon_vector: np.ndarray  # A^mu of the Majorana pair


def em_demo(
    q: QuadratureSet,
    photon_state: StateVector,
    photon_spinor: MajoranaSpinor,
    fermion: ExtendedState,
) -> EmResidual:
    from .internal import apply_extended, dirac_operator

    if photon_state.space is not fermion.space:
        raise ValueError("photon and fermion live on different spaces")
    if photon_state.basis != fermion.basis:
        raise ValueError("photon and fermion carry different basis tags")

    lam = dirac_operator(q, fermion.basis)
    free = apply_extended(-lam, fermion)

    A_upper = spinor_to_vector(photon_spinor)
    A_lower = ETA_DIAG * A_upper
    from .algebra import build_dirac

    gammas = build_dirac().gammas
    slash = sum(g * a for g, a in zip(gammas, A_lower))
    coupling = -(slash @ fermion.amp) * photon_state.amp[None, :]
    return EmResidual(free=free, coupling=coupling, photon_vector=A_upper)
