"""
Octonion arithmetic, G2 generator matrices, abstract su(3)-type
structure constants, and Pauli/Dirac matrices.

The octonion product is fixed by the 7 positive multiplication triples
(Fano lines) eps3_123 = eps3_246 = eps3_435 = eps3_367 = eps3_651 =
eps3_572 = eps3_471 = 1 via e_i e_j = -delta_ij + eps3_ijk e_k.  The
4-index associator table eps4 is *derived* from this product; a printed
reference list is kept only as a cross-check subject, and every
difference is collected in a discrepancy report (never patched).

The 14 candidate G2 generators are transcribed as real 8x8 matrices of
2x2 blocks; antisymmetry and span rank are asserted, closure of the
commutator algebra is measured and reported.

The structure-constant table realizes the abstract bracket relations of
the g_k^l / a_m / b^m basis on a 15-dimensional coefficient space; the
Jacobi identity is evaluated triple by triple and the residual reported.
"""

from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Dict, List, Tuple

import numpy as np

# ------------------------------------------------------------ octonions

# Positive multiplication triples (i, j, k): e_i e_j = +e_k.
FANO_LINES: Tuple[Tuple[int, int, int], ...] = (
    (1, 2, 3),
    (2, 4, 6),
    (4, 3, 5),
    (3, 6, 7),
    (6, 5, 1),
    (5, 7, 2),
    (4, 7, 1),
)

# Printed 4-index reference list (positive quadruples) used only as the
# cross-check subject of the discrepancy report.
PRINTED_EPS4_POSITIVE: Tuple[Tuple[int, int, int, int], ...] = (
    (1, 2, 4, 7),
    (1, 2, 6, 5),
    (2, 3, 4, 5),
    (2, 3, 7, 6),
    (3, 1, 4, 6),
    (3, 1, 5, 7),
    (4, 5, 7, 6),
)


def _perm_sign(perm: Tuple[int, ...]) -> int:
    sign = 1
    perm = list(perm)
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


def build_eps3() -> np.ndarray:
    """Totally antisymmetric eps3 on indices 1..7 (index 0 unused)."""
    eps = np.zeros((8, 8, 8))
    for line in FANO_LINES:
        for idx in permutations(range(3)):
            perm = tuple(line[p] for p in idx)
            eps[perm] = _perm_sign(idx) * 1.0
    return eps


EPS3 = build_eps3()

# Structure table: e_i e_j = sum_k MUL[i, j, k] e_k (indices 0..7).
def _build_mul_table() -> np.ndarray:
    tbl = np.zeros((8, 8, 8))
    tbl[0, 0, 0] = 1.0
    for i in range(1, 8):
        tbl[0, i, i] = 1.0
        tbl[i, 0, i] = 1.0
        for j in range(1, 8):
            if i == j:
                tbl[i, j, 0] = -1.0
            else:
                tbl[i, j, 1:] = EPS3[i, j, 1:]
    return tbl


MUL_TABLE = _build_mul_table()


@dataclass
class Octonion:
    """r[0] scalar part, r[1..7] imaginary parts."""

    r: np.ndarray

    def __post_init__(self):
        self.r = np.asarray(self.r, dtype=np.float64)
        if self.r.shape != (8,):
            raise ValueError("an octonion has 8 real components")
        if not np.all(np.isfinite(self.r)):
            raise ValueError("non-finite components")

    @classmethod
    def unit(cls, i: int) -> "Octonion":
        r = np.zeros(8)
        r[i] = 1.0
        return cls(r)

    def conjugate(self) -> "Octonion":
        r = self.r.copy()
        r[1:] *= -1.0
        return Octonion(r)

    def norm(self) -> float:
        return float(np.linalg.norm(self.r))

    def __add__(self, other: "Octonion") -> "Octonion":
        return Octonion(self.r + other.r)

    def __sub__(self, other: "Octonion") -> "Octonion":
        return Octonion(self.r - other.r)


def oct_mul(x: Octonion, y: Octonion) -> Octonion:
    """Bilinear product via the eps3 structure table."""
    return Octonion(np.einsum("i,j,ijk->k", x.r, y.r, MUL_TABLE))


def associator(x: Octonion, y: Octonion, z: Octonion) -> Octonion:
    """{x, y, z} = (xy)z - x(yz)."""
    return oct_mul(oct_mul(x, y), z) - oct_mul(x, oct_mul(y, z))


@dataclass
class FanoTable:
    """eps3 (defining) and eps4 (derived from the associator)."""

    eps3: np.ndarray
    eps4: np.ndarray


def derive_eps4() -> Tuple[np.ndarray, List[Dict]]:
    """
    Compute eps4 from {e_i,e_j,e_k} = -2 eps4_ijkl e_l and report every
    quadruple where it differs from the printed reference list.  The
    multiplication rule is ground truth; differences are documented,
    not patched.
    """
    eps4 = np.zeros((8, 8, 8, 8))
    units = [Octonion.unit(i) for i in range(8)]
    for i in range(1, 8):
        for j in range(1, 8):
            for k in range(1, 8):
                assoc = associator(units[i], units[j], units[k])
                eps4[i, j, k, 1:] = -0.5 * assoc.r[1:]

    printed = np.zeros_like(eps4)
    for quad in PRINTED_EPS4_POSITIVE:
        for perm_idx in permutations(range(4)):
            perm = tuple(quad[p] for p in perm_idx)
            printed[perm] = _perm_sign(tuple(perm_idx)) * 1.0

    report: List[Dict] = []
    for quad in combinations(range(1, 8), 4):
        got = float(eps4[quad])
        ref = float(printed[quad])
        if got != ref:
            report.append(
                {"indices": quad, "derived": got, "printed": ref}
            )
    return eps4, report


# -------------------------------------------------------- G2 generators

_I2 = np.eye(2)
_S1 = np.array([[0.0, 1.0], [1.0, 0.0]])          # sigma^1
_S3 = np.array([[1.0, 0.0], [0.0, -1.0]])         # sigma^3
_M = np.array([[0.0, -1.0], [1.0, 0.0]])          # -i sigma^2 (real)

PAULI = {
    0: np.eye(2, dtype=complex),
    1: _S1.astype(complex),
    2: np.array([[0.0, -1.0j], [1.0j, 0.0]]),
    3: _S3.astype(complex),
}


def _blocks(spec) -> np.ndarray:
    """Assemble an 8x8 matrix from a 4x4 grid of 2x2 blocks."""
    out = np.zeros((8, 8))
    for bi in range(4):
        for bj in range(4):
            blk = spec[bi][bj]
            if blk is not None:
                out[2 * bi : 2 * bi + 2, 2 * bj : 2 * bj + 2] = blk
    return out


def _diag_blocks(b1, b2, b3, b4) -> np.ndarray:
    return _blocks([[b1, None, None, None], [None, b2, None, None],
                    [None, None, b3, None], [None, None, None, b4]])


@dataclass
class G2GeneratorSet:
    """The 14 printed real 8x8 generator candidates L_1..L_7, R_1..R_7."""

    L: List[np.ndarray]
    R: List[np.ndarray]

    def all(self) -> List[np.ndarray]:
        return list(self.L) + list(self.R)


def build_g2_generators() -> G2GeneratorSet:
    O = None
    L = [
        _diag_blocks(_M, _M, _M, -_M),
        _blocks([[O, -_S3, O, O], [_S3, O, O, O], [O, O, O, -_I2], [O, O, _I2, O]]),
        _blocks([[O, -_S1, O, O], [_S1, O, O, O], [O, O, O, _M], [O, O, _M, O]]),
        _blocks([[O, O, -_S3, O], [O, O, O, _I2], [_S3, O, O, O], [O, -_I2, O, O]]),
        _blocks([[O, O, -_S1, O], [O, O, O, -_M], [_S1, O, O, O], [O, -_M, O, O]]),
        _blocks([[O, O, O, -_I2], [O, O, -_S3, O], [O, _S3, O, O], [_I2, O, O, O]]),
        _blocks([[O, O, O, _M], [O, O, -_S1, O], [O, _S1, O, O], [_M, O, O, O]]),
    ]
    R = [
        _diag_blocks(_M, -_M, -_M, _M),
        _blocks([[O, -_I2, O, O], [_I2, O, O, O], [O, O, O, _I2], [O, O, -_I2, O]]),
        _blocks([[O, _M, O, O], [_M, O, O, O], [O, O, O, -_M], [O, O, -_M, O]]),
        _blocks([[O, O, -_I2, O], [O, O, O, -_I2], [_I2, O, O, O], [O, _I2, O, O]]),
        _blocks([[O, O, _M, O], [O, O, O, _M], [_M, O, O, O], [O, _M, O, O]]),
        _blocks([[O, O, O, -_S3], [O, O, _S3, O], [O, -_S3, O, O], [_S3, O, O, O]]),
        _blocks([[O, O, O, -_S1], [O, O, _S1, O], [O, -_S1, O, O], [_S1, O, O, O]]),
    ]
    return G2GeneratorSet(L=L, R=R)


def g2_closure_report(gens: G2GeneratorSet) -> Dict:
    """
    Span rank of the 14 matrices, and the worst residual of any
    commutator [g_i, g_j] after projection onto that span (informational;
    excess over ~1e-10 is a transcription finding, never auto-corrected).
    """
    mats = gens.all()
    V = np.stack([m.flatten() for m in mats])  # 14 x 64
    rank = int(np.linalg.matrix_rank(V, tol=1e-8))
    # least-squares projection onto the row space of V
    pinv = np.linalg.pinv(V.T)
    defect = 0.0
    worst = None
    for i in range(14):
        for j in range(i + 1, 14):
            comm = mats[i] @ mats[j] - mats[j] @ mats[i]
            vec = comm.flatten()
            resid = vec - V.T @ (pinv @ vec)
            r = float(np.abs(resid).max())
            if r > defect:
                defect, worst = r, (i, j)
    return {"rank_of_span": rank, "closure_defect": defect, "worst_pair": worst}


def g2_derivation_report(gens: G2GeneratorSet) -> List[float]:
    """
    Measured (not asserted) derivation defect of each generator on the
    octonion algebra read in the e_0..e_7 coordinates:
    max |D(xy) - D(x)y - x D(y)| over basis pairs.
    """
    out = []
    units = [Octonion.unit(i) for i in range(8)]
    for D in gens.all():
        worst = 0.0
        for i in range(8):
            for j in range(8):
                xy = oct_mul(units[i], units[j])
                lhs = D @ xy.r
                rhs = (
                    oct_mul(Octonion(D @ units[i].r), units[j]).r
                    + oct_mul(units[i], Octonion(D @ units[j].r)).r
                )
                worst = max(worst, float(np.abs(lhs - rhs).max()))
        out.append(worst)
    return out


# ------------------------------------------------- structure constants

_SQRT3 = np.sqrt(3.0)


def _eps3_levi(m: int, n: int, l: int) -> float:
    return float(np.sign((n - m) * (l - m) * (l - n))) if len({m, n, l}) == 3 else 0.0


class StructureConstantTable:
    """
    Abstract basis {g_k^l (k,l = 0..2), a_m, b^m} realized as coefficient
    vectors in R^15 with the printed bracket relations:

    [g_k^l, g_m^n] = d_m^l g_k^n - d_k^n g_m^l
    [g_k^l, a_m]   = d_m^l a_k - 1/3 d_k^l a_m
    [g_k^l, b^n]   = -d_k^n b^l + 1/3 d_k^l b^n
    [a_m, b^n]     = g_m^n
    [a_m, a_n]     = -2/sqrt(3) eps_mnl b^l
    [b^m, b^n]     = +2/sqrt(3) eps_mnl a_l

    The trace element sum_k g_k^k is central; constraints sum g_k^k = 0
    and a_m^dag = b^m live at the interpretation level.
    """

    DIM = 15  # 9 g + 3 a + 3 b

    def g_index(self, k: int, l: int) -> int:
        return 3 * k + l

    def a_index(self, m: int) -> int:
        return 9 + m

    def b_index(self, n: int) -> int:
        return 12 + n

    def basis_symbols(self) -> List[Tuple]:
        syms: List[Tuple] = [("g", k, l) for k in range(3) for l in range(3)]
        syms += [("a", m) for m in range(3)]
        syms += [("b", n) for n in range(3)]
        return syms

    def _vec(self) -> np.ndarray:
        return np.zeros(self.DIM)

    def _basis_bracket(self, x: Tuple, y: Tuple) -> np.ndarray:
        out = self._vec()
        if x[0] == "g" and y[0] == "g":
            _, k, l = x
            _, m, n = y
            if m == l:
                out[self.g_index(k, n)] += 1.0
            if k == n:
                out[self.g_index(m, l)] -= 1.0
        elif x[0] == "g" and y[0] == "a":
            _, k, l = x
            m = y[1]
            if m == l:
                out[self.a_index(k)] += 1.0
            if k == l:
                out[self.a_index(m)] -= 1.0 / 3.0
        elif x[0] == "g" and y[0] == "b":
            _, k, l = x
            n = y[1]
            if k == n:
                out[self.b_index(l)] -= 1.0
            if k == l:
                out[self.b_index(n)] += 1.0 / 3.0
        elif x[0] == "a" and y[0] == "b":
            out[self.g_index(x[1], y[1])] += 1.0
        elif x[0] == "a" and y[0] == "a":
            for l in range(3):
                c = _eps3_levi(x[1], y[1], l)
                if c:
                    out[self.b_index(l)] += -2.0 / _SQRT3 * c
        elif x[0] == "b" and y[0] == "b":
            for l in range(3):
                c = _eps3_levi(x[1], y[1], l)
                if c:
                    out[self.a_index(l)] += 2.0 / _SQRT3 * c
        else:
            # reversed order: antisymmetry
            return -self._basis_bracket(y, x)
        return out

    def bracket(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Bilinear extension of the basis bracket."""
        out = self._vec()
        syms = self.basis_symbols()
        xi = np.flatnonzero(x)
        yi = np.flatnonzero(y)
        for i in xi:
            for j in yi:
                out = out + x[i] * y[j] * self._basis_bracket(syms[i], syms[j])
        return out

    def trace_element(self) -> np.ndarray:
        v = self._vec()
        for k in range(3):
            v[self.g_index(k, k)] = 1.0
        return v


def jacobi_check(tbl: StructureConstantTable) -> Dict:
    """
    Jacobi residual over all basis triples.  Pure-g triples satisfy the
    identity exactly (gl(3)-type bracket); mixed residuals are measured
    and returned per sector.
    """
    syms = tbl.basis_symbols()
    basis = np.eye(tbl.DIM)
    worst_total = 0.0
    worst_g_only = 0.0
    worst_mixed = 0.0
    for i in range(tbl.DIM):
        for j in range(tbl.DIM):
            for k in range(tbl.DIM):
                x, y, z = basis[i], basis[j], basis[k]
                jac = (
                    tbl.bracket(x, tbl.bracket(y, z))
                    + tbl.bracket(y, tbl.bracket(z, x))
                    + tbl.bracket(z, tbl.bracket(x, y))
                )
                r = float(np.abs(jac).max())
                worst_total = max(worst_total, r)
                if syms[i][0] == syms[j][0] == syms[k][0] == "g":
                    worst_g_only = max(worst_g_only, r)
                else:
                    worst_mixed = max(worst_mixed, r)
    return {
        "max_residual": worst_total,
        "g_only_residual": worst_g_only,
        "mixed_residual": worst_mixed,
    }


# ---------------------------------------------------------------- Dirac

ETA = np.diag([1.0, -1.0, -1.0, -1.0])


@dataclass
class DiracMatrices:
    """gamma^0..gamma^3 in the printed off-diagonal form, plus Pauli."""

    gammas: List[np.ndarray]
    sigmas: Dict[int, np.ndarray]
    eta: np.ndarray


def build_dirac() -> DiracMatrices:
    zero = np.zeros((2, 2), dtype=complex)
    g0 = np.block([[zero, PAULI[0]], [PAULI[0], zero]])
    gi = [
        np.block([[zero, -PAULI[i]], [PAULI[i], zero]]) for i in (1, 2, 3)
    ]
    return DiracMatrices(gammas=[g0] + gi, sigmas=dict(PAULI), eta=ETA.copy())
