"""
Metric tensors from four ur-alternatives, graviton states, and the
correspondence-quantized Ricci evaluator.

The spinor metric g^{mu nu} = 1/2 (V_u^mu V_v^nu + V_u^nu V_v^mu) is a
symmetrized product of the two Majorana four-vectors and therefore has
rank <= 2.  The dynamical equation's expanded Ricci tensor is frozen as
a machine-readable 17-term list (data/ricci_terms.json); the classical
finite-difference oracle validates that transcription by substituting
commuting scalar fields, and the quantized evaluator applies the same
wiring with momentum maps on tensor-space coefficients and equal-label
diagonal products.

Index raising/lowering inside the quantized terms uses the flat eta
(the spinor metric is rank-2 and has no inverse); upper-index factors
are independent graviton inputs, exactly as the quantized equation's
four independently labeled factors.
"""

import json
from dataclasses import dataclass, field
from importlib import resources
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .fock import StateVector
from .internal import MajoranaSpinor, UrSpinor, spinor_to_vector
from .manybody import MultiObjectState
from .modeops import QuadratureSet, apply_four_momentum

ETA = np.diag([1.0, -1.0, -1.0, -1.0])

_INDEX_SYMBOLS = ("mu", "nu", "rho", "sigma", "kappa", "lam")


# ------------------------------------------------------------- metrics


@dataclass
class SpinorMetric:
    """Upper-index real symmetric 4x4 metric with its source spinors."""

    g: np.ndarray
    v_u: np.ndarray
    v_v: np.ndarray
    sources: Tuple[np.ndarray, ...] = ()

    def __post_init__(self):
        self.g = np.asarray(self.g, dtype=np.float64)
        if self.g.shape != (4, 4):
            raise ValueError("metric must be 4x4")
        if np.abs(self.g - self.g.T).max() != 0.0:
            raise ValueError("metric must be exactly symmetric")

    def lower(self) -> np.ndarray:
        """eta-lowered components g_{mu nu} = eta g eta."""
        return ETA @ self.g @ ETA

    def rank(self, tol: float = 1e-10) -> int:
        s = np.linalg.svd(self.g, compute_uv=False)
        scale = s[0] if s[0] > 0 else 1.0
        return int(np.sum(s > tol * scale))


def build_metric(
    u1: UrSpinor, u2: UrSpinor, v1: UrSpinor, v2: UrSpinor
) -> SpinorMetric:
    """g^{mu nu} = 1/2 (V_u^mu V_v^nu + V_u^nu V_v^mu)."""
    v_u = spinor_to_vector(MajoranaSpinor.two_ur(u1, u2))
    v_v = spinor_to_vector(MajoranaSpinor.two_ur(v1, v2))
    g = 0.5 * (np.outer(v_u, v_v) + np.outer(v_v, v_u))
    return SpinorMetric(
        g=g,
        v_u=v_u,
        v_v=v_v,
        sources=(
            u1.components.copy(),
            u2.components.copy(),
            v1.components.copy(),
            v2.components.copy(),
        ),
    )


def _slot_vector_polynomials(spinor: np.ndarray) -> np.ndarray:
    """One slot's printed polynomial contribution (a, b, c, d) -> V."""
    a, b = spinor[0].real, spinor[0].imag
    c, d = spinor[1].real, spinor[1].imag
    return np.array(
        [
            a * a + b * b + c * c + d * d,
            2 * a * c + 2 * b * d,
            2 * a * d - 2 * b * c,
            a * a + b * b - c * c - d * d,
        ]
    )


def metric_long_form(
    u1: UrSpinor, u2: UrSpinor, v1: UrSpinor, v2: UrSpinor
) -> np.ndarray:
    """
    Regression oracle: the metric assembled from the printed component
    polynomials of the two four-vectors (each a sum over the g1/g2
    slots), then symmetrized with the printed 1/2.
    """
    v_u = _slot_vector_polynomials(u1.components) + _slot_vector_polynomials(
        u2.components
    )
    v_v = _slot_vector_polynomials(v1.components) + _slot_vector_polynomials(
        v2.components
    )
    return 0.5 * (np.outer(v_u, v_v) + np.outer(v_v, v_u))


@dataclass
class GravitonState:
    """Tensor-space state paired with a spinor metric."""

    state: StateVector
    metric: SpinorMetric


def build_graviton(state: StateVector, metric: SpinorMetric) -> GravitonState:
    return GravitonState(state=state, metric=metric)


# ----------------------------------------------------------- term list


def ricci_terms() -> Dict:
    """The frozen, versioned expanded-Ricci term list."""
    path = resources.files("urfock").joinpath("data/ricci_terms.json")
    with path.open("r") as fh:
        data = json.load(fh)
    _validate_terms(data)
    return data


def _validate_terms(data: Dict) -> None:
    if data.get("version") != 1:
        raise ValueError("unsupported term-list version")
    for term in data["terms"]:
        n = len(term["factors"])
        if n not in (2, 4):
            raise ValueError(f"term {term['id']} has {n} factors")
        for f in term["factors"]:
            if f["metric"] not in ("upper", "lower"):
                raise ValueError(f"bad metric kind in {term['id']}")
            for sym in list(f["indices"]) + list(f["derivs"]):
                if sym not in _INDEX_SYMBOLS:
                    raise ValueError(f"unknown index symbol {sym!r}")


# ----------------------------------------------- classical FD machinery


def _fd1(fn, point: np.ndarray, axis: int, h: float):
    ep = np.zeros(4)
    ep[axis] = h
    return (fn(point + ep) - fn(point - ep)) / (2.0 * h)


def _fd(fn, point: np.ndarray, axes: Sequence[int], h: float):
    """Nested central differences for up to second derivatives."""
    if not axes:
        return fn(point)
    first, rest = axes[0], axes[1:]
    return _fd1(lambda p: _fd(fn, p, rest, h), point, first, h)


def classical_ricci_oracle(
    metric_fn: Callable[[np.ndarray], np.ndarray],
    point: Sequence[float],
    h: float = 0.05,
) -> np.ndarray:
    """
    Finite-difference Ricci tensor in the convention
    R_mn = d_m Gamma^r_rn - d_r Gamma^r_mn
           + Gamma^k_mn Gamma^r_rk - Gamma^k_rn Gamma^r_mk
    with Gamma^r_mn = 1/2 g^{rl} (d_m g_nl + d_n g_ml - d_l g_mn).
    """
    point = np.asarray(point, dtype=np.float64)

    def christoffel(p: np.ndarray) -> np.ndarray:
        g = metric_fn(p)
        if abs(np.linalg.det(g)) < 1e-12:
            raise ValueError("singular metric")
        ginv = np.linalg.inv(g)
        dg = np.stack([_fd1(metric_fn, p, a, h) for a in range(4)])
        # dg[a, m, n] = d_a g_mn
        gam = np.zeros((4, 4, 4))
        for r in range(4):
            for m in range(4):
                for n in range(4):
                    acc = 0.0
                    for l in range(4):
                        acc += ginv[r, l] * (
                            dg[m, n, l] + dg[n, m, l] - dg[l, m, n]
                        )
                    gam[r, m, n] = 0.5 * acc
        return gam

    gam0 = christoffel(point)
    dgam = np.stack([_fd1(christoffel, point, a, h) for a in range(4)])
    # dgam[a, r, m, n] = d_a Gamma^r_mn
    R = np.zeros((4, 4))
    for m in range(4):
        for n in range(4):
            val = 0.0
            for r in range(4):
                val += dgam[m, r, r, n] - dgam[r, r, m, n]
            for k in range(4):
                for r in range(4):
                    val += gam0[k, m, n] * gam0[r, r, k]
                    val -= gam0[k, r, n] * gam0[r, m, k]
            R[m, n] = val
    return R


def classical_term_evaluation(
    metric_fn: Callable[[np.ndarray], np.ndarray],
    point: Sequence[float],
    h: float = 0.05,
    terms: Optional[Dict] = None,
) -> np.ndarray:
    """
    Evaluate the frozen term list with commuting scalar fields: the
    lower metric is `metric_fn`, the upper metric its pointwise inverse,
    derivatives by central differences.  Returns the 4x4 R_mn.
    """
    point = np.asarray(point, dtype=np.float64)
    data = terms if terms is not None else ricci_terms()

    def lower_fn(p):
        return metric_fn(p)

    def upper_fn(p):
        return np.linalg.inv(metric_fn(p))

    cache: Dict[Tuple, np.ndarray] = {}

    def field_value(kind: str, axes: Tuple[int, ...]) -> np.ndarray:
        key = (kind, axes)
        if key not in cache:
            fn = upper_fn if kind == "upper" else lower_fn
            cache[key] = _fd(fn, point, list(axes), h)
        return cache[key]

    R = np.zeros((4, 4))
    contracted_syms = [s for s in _INDEX_SYMBOLS if s not in ("mu", "nu")]
    for mu in range(4):
        for nu in range(4):
            total = 0.0
            for term in data["terms"]:
                syms = set()
                for f in term["factors"]:
                    syms.update(f["indices"])
                    syms.update(f["derivs"])
                dummies = [s for s in contracted_syms if s in syms]
                for assign in np.ndindex(*(4,) * len(dummies)):
                    env = dict(zip(dummies, assign))
                    env["mu"], env["nu"] = mu, nu
                    prod = term["coeff"]
                    for f in term["factors"]:
                        axes = tuple(env[s] for s in f["derivs"])
                        i, j = (env[s] for s in f["indices"])
                        prod *= field_value(f["metric"], axes)[i, j]
                    total += prod
            R[mu, nu] = data["overall_prefactor"] * total
    return R


def eta_bump_metric(
    eps: float = 1e-3, width: float = 1.0
) -> Callable[[np.ndarray], np.ndarray]:
    """Test fixture: eta + eps * Gaussian bump on every component."""

    def fn(p: np.ndarray) -> np.ndarray:
        p = np.asarray(p, dtype=np.float64)
        bump = np.exp(-np.dot(p, p) / (2.0 * width**2))
        pert = np.full((4, 4), 0.3)
        np.fill_diagonal(pert, 1.0)
        return ETA + eps * bump * pert

    return fn


# --------------------------------------------------- quantized evaluator


@dataclass
class RicciResult:
    """
    Diagonal coefficient vector c(N) of the quantized R_mn over the
    shared occupation label, its norm, and the per-term breakdown.  The
    bilinear terms couple gravitons 1-2, the quartic terms gravitons
    1-4; every term is diagonal over one shared N, so the sum is a
    single coefficient vector.
    """

    space: object
    mu: int
    nu: int
    coefficients: np.ndarray
    per_term: Dict[str, np.ndarray]

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.coefficients))

    def to_multi_object(self) -> MultiObjectState:
        """M=4 diagonal embedding |N>x|N>x|N>x|N> of the coefficients."""
        dim = self.space.dim
        amp = np.zeros((dim,) * 4, dtype=np.complex128)
        idx = np.arange(dim)
        amp[idx, idx, idx, idx] = self.coefficients
        return MultiObjectState(self.space, 4, amp, "xyzn", entangled=True)


def evaluate_quantized_ricci(
    gravitons: Sequence[GravitonState],
    mu: int,
    nu: int,
    q: QuadratureSet,
    terms: Optional[Dict] = None,
) -> RicciResult:
    """
    Apply the frozen term wiring with tensor-space momentum maps: each
    derivative d_a becomes the eta-lowered momentum map P_a on that
    factor's coefficients, metric factors contract as printed (upper
    components from the factor's SpinorMetric, lower via eta), and the
    factors combine by the equal-label diagonal product.
    """
    if len(gravitons) != 4:
        raise ValueError("four graviton inputs required")
    space = gravitons[0].state.space
    for gs in gravitons:
        if gs.state.space is not space:
            raise ValueError("gravitons live on different spaces")
        if gs.state.basis != "xyzn":
            raise ValueError("quantized evaluation expects xyzn-tagged states")
    data = terms if terms is not None else ricci_terms()
    if not (0 <= mu < 4 and 0 <= nu < 4):
        raise ValueError("mu, nu must be spacetime indices 0..3")

    uppers = [gs.metric.g for gs in gravitons]
    lowers = [gs.metric.lower() for gs in gravitons]
    eta_sign = np.array([1.0, -1.0, -1.0, -1.0])

    vec_cache: Dict[Tuple[int, Tuple[int, ...]], np.ndarray] = {}

    def momentum_applied(factor_idx: int, axes: Tuple[int, ...]) -> np.ndarray:
        key = (factor_idx, axes)
        if key not in vec_cache:
            s = gravitons[factor_idx].state
            # rightmost momentum acts first, as written
            for a in reversed(axes):
                s = apply_four_momentum(q, s, a)
                s = StateVector(s.space, eta_sign[a] * s.amp, s.basis)
            vec_cache[key] = s.amp
        return vec_cache[key]

    contracted_syms = [s for s in _INDEX_SYMBOLS if s not in ("mu", "nu")]
    per_term: Dict[str, np.ndarray] = {}
    total = np.zeros(space.dim, dtype=np.complex128)
    for term in data["terms"]:
        syms = set()
        for f in term["factors"]:
            syms.update(f["indices"])
            syms.update(f["derivs"])
        dummies = [s for s in contracted_syms if s in syms]
        acc = np.zeros(space.dim, dtype=np.complex128)
        for assign in np.ndindex(*(4,) * len(dummies)):
            env = dict(zip(dummies, assign))
            env["mu"], env["nu"] = mu, nu
            scalar = complex(term["coeff"])
            vec = np.ones(space.dim, dtype=np.complex128)
            for fi, f in enumerate(term["factors"]):
                i, j = (env[s] for s in f["indices"])
                met = uppers[fi] if f["metric"] == "upper" else lowers[fi]
                scalar *= met[i, j]
                if scalar == 0.0:
                    break
                axes = tuple(env[s] for s in f["derivs"])
                vec = vec * momentum_applied(fi, axes)
            else:
                acc += scalar * vec
        per_term[term["id"]] = data["overall_prefactor"] * acc
        total += per_term[term["id"]]
    return RicciResult(
        space=space, mu=mu, nu=nu, coefficients=total, per_term=per_term
    )


def ricci_symmetry_defect(
    gravitons: Sequence[GravitonState], q: QuadratureSet, mu: int = 0, nu: int = 1
) -> float:
    """Measured (not asserted) mu<->nu asymmetry of the quantized form."""
    a = evaluate_quantized_ricci(gravitons, mu, nu, q)
    b = evaluate_quantized_ricci(gravitons, nu, mu, q)
    return float(np.linalg.norm(a.coefficients - b.coefficients))
