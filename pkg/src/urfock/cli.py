"""
Command-line front end: invariant suites, demos, exports, and
machine-readable reports.

Subcommands
    check         run every module's invariant suite, one JSON line per
                  check; exit 0 iff all mandatory checks pass
    evolve        evolve a state file and export wavefields at the
                  requested times
    spectrum      eigenvalues of the energy operator E
    tables        octonion structure tables and the associator
                  discrepancy report as plain text
    gravity-eval  quantized curvature residual norms for four graviton
                  spec files

Reports are JSON lines with sorted keys and no timestamps, so identical
configs produce byte-identical output.  Informational checks (the
associator discrepancy report, the generator closure defect, and the
other measured-not-asserted quantities) never fail a run.
"""

import argparse
import json
import os
import sys
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

import numpy as np

from . import algebra, gravity, internal
from .dynamics import evolve_fock, klein_gordon_residual
from .fock import (
    FockSpace,
    StateVector,
    basis_state,
    build_space,
    change_basis_xyzn,
    interior_projector,
    transform_matrix_element,
    vacuum,
)
from .internal import MajoranaSpinor, UrSpinor, spinor_to_vector
from .manybody import (
    build_green_components,
    evolve_interacting,
    interaction_apply,
    parabose_ladder,
    product_state,
    schmidt_entropy,
)
from .modeops import apply_four_momentum, build_quadratures, number_energy_commutator_norm
from .spatial import Grid3, export_wavefield, hermite_gram, state_grid_norm, state_to_wavefield

CONFIG_ENV_VAR = "URFOCK_CONFIG"


class ConfigError(ValueError):
    """Invalid configuration file or option values."""


@dataclass
class RunConfig:
    """Plumbing knobs shared by the subcommands."""

    n_max: int = 4
    grid_l: float = 8.0
    grid_h: float = 0.5
    tol: float = 1e-9
    dense_eigen_cap: int = 12
    objects: int = 2
    out: Optional[str] = None

    def validate(self) -> None:
        if self.n_max < 0:
            raise ConfigError("n_max must be >= 0")
        if self.grid_l <= 0 or self.grid_h <= 0:
            raise ConfigError("grid extent and step must be positive")
        if self.tol <= 0:
            raise ConfigError("tol must be positive")
        if self.dense_eigen_cap <= 0:
            raise ConfigError("dense_eigen_cap must be positive")
        if self.objects < 1:
            raise ConfigError("objects must be >= 1")


_CONFIG_PARSERS = {
    "n_max": int,
    "grid_l": float,
    "grid_h": float,
    "tol": float,
    "dense_eigen_cap": int,
    "objects": int,
    "out": str,
}


def parse_config_file(path: str) -> Dict:
    """Flat key=value text; `#` starts a comment; unknown keys reject."""
    values: Dict = {}
    try:
        with open(path, "r") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value")
        key, _, val = line.partition("=")
        key = key.strip().replace("-", "_")
        if key not in _CONFIG_PARSERS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            values[key] = _CONFIG_PARSERS[key](val.strip())
        except ValueError as exc:
            raise ConfigError(f"{path}:{lineno}: bad value for {key}") from exc
    return values


def load_config(args: argparse.Namespace) -> RunConfig:
    """Defaults <- env-pointed config file <- --config file <- CLI flags."""
    cfg = RunConfig()
    path = getattr(args, "config", None) or os.environ.get(CONFIG_ENV_VAR)
    if path:
        for key, val in parse_config_file(path).items():
            setattr(cfg, key, val)
    overrides = {
        "n_max": getattr(args, "n_max", None),
        "grid_l": getattr(args, "grid_l", None),
        "grid_h": getattr(args, "grid_h", None),
        "tol": getattr(args, "tol", None),
        "out": getattr(args, "out", None),
    }
    for key, val in overrides.items():
        if val is not None:
            setattr(cfg, key, val)
    cfg.validate()
    return cfg


# ------------------------------------------------------------ state files


def write_state_file(state: StateVector, path: str) -> None:
    """`# urfock state v1 n_max=<n>` then `N_A N_B N_C N_D re im` rows."""
    if state.basis != "ABCD":
        state = change_basis_xyzn(state, "xyzn->ABCD")
    with open(path, "w") as fh:
        fh.write(f"# urfock state v1 n_max={state.space.n_max}\n")
        for i, occ in enumerate(state.space.basis):
            a = state.amp[i]
            if a != 0.0:
                fh.write(
                    f"{occ[0]} {occ[1]} {occ[2]} {occ[3]} "
                    f"{a.real:.17g} {a.imag:.17g}\n"
                )


def read_state_file(path: str) -> StateVector:
    try:
        with open(path, "r") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read state file {path!r}: {exc}") from exc
    if not lines or not lines[0].startswith("# urfock state v1 n_max="):
        raise ConfigError(f"{path}: missing state header")
    try:
        n_max = int(lines[0].strip().rsplit("=", 1)[1])
    except ValueError as exc:
        raise ConfigError(f"{path}: bad n_max in header") from exc
    space = build_space(n_max)
    amp = np.zeros(space.dim, dtype=np.complex128)
    for lineno, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 6:
            raise ConfigError(f"{path}:{lineno}: expected 6 columns")
        try:
            occ = tuple(int(p) for p in parts[:4])
            re, im = float(parts[4]), float(parts[5])
        except ValueError as exc:
            raise ConfigError(f"{path}:{lineno}: bad number") from exc
        if min(occ) < 0 or sum(occ) > n_max:
            raise ConfigError(f"{path}:{lineno}: occupation out of range")
        amp[space.index(occ)] = re + 1j * im
    return StateVector(space, amp, "ABCD")


# ---------------------------------------------------------- check suite


def _check(
    check_id: str,
    module: str,
    measured: float,
    tolerance: Optional[float],
    anchor: str,
    ok: Optional[bool] = None,
) -> Dict:
    """One report line; tolerance None marks an informational check."""
    if tolerance is None:
        status = "info"
    else:
        if ok is None:
            ok = measured <= tolerance
        status = "pass" if ok else "fail"
    return {
        "id": check_id,
        "module": module,
        "status": status,
        "measured": float(measured),
        "tolerance": tolerance,
        "paper_anchor": anchor,
    }


def _random_state(space: FockSpace, seed: int, basis: str = "xyzn") -> StateVector:
    rng = np.random.default_rng(seed)
    amp = rng.normal(size=space.dim) + 1j * rng.normal(size=space.dim)
    return StateVector(space, amp / np.linalg.norm(amp), basis)


def _fock_checks(cfg: RunConfig) -> List[Dict]:
    from math import comb

    out = []
    space = build_space(cfg.n_max)
    out.append(
        _check(
            "fock-dimension",
            "fock",
            abs(space.dim - comb(cfg.n_max + 4, 4)),
            0.0,
            "four-mode-truncated-space",
        )
    )
    s = _random_state(space, 11, "ABCD")
    back = change_basis_xyzn(change_basis_xyzn(s, "ABCD->xyzn"), "xyzn->ABCD")
    out.append(
        _check(
            "basis-round-trip",
            "fock",
            float(np.abs(back.amp - s.amp).max()),
            1e-12,
            "xyzn-mixing-unitary",
        )
    )
    if cfg.n_max >= 2:
        from .fock import MIXING_XYZN, _xyzn_unitary

        u = _xyzn_unitary(space).toarray()
        two = [i for i, occ in enumerate(space.basis) if sum(occ) == 2]
        worst = 0.0
        for i in two:
            for j in two:
                oracle = transform_matrix_element(
                    MIXING_XYZN, space.unrank(i), space.unrank(j)
                )
                worst = max(worst, abs(u[i, j] - oracle))
        out.append(
            _check(
                "two-particle-permanent",
                "fock",
                worst,
                1e-12,
                "xyzn-mixing-unitary",
            )
        )
    else:
        out.append(
            _check(
                "two-particle-permanent",
                "fock",
                0.0,
                1e-12,
                "xyzn-mixing-unitary",
            )
        )
    return out


def _modeops_checks(cfg: RunConfig) -> List[Dict]:
    out = []
    q6 = build_quadratures(build_space(6))
    proj = interior_projector(q6.space, margin=1).toarray()
    worst = 0.0
    eye = np.eye(q6.space.dim)
    for pos, mom in ((q6.X, q6.Px), (q6.Y, q6.Py), (q6.Z, q6.Pz)):
        X = pos.mat.toarray()
        P = mom.mat.toarray()
        comm = proj @ (X @ P - P @ X - 1j * eye) @ proj
        worst = max(worst, float(np.abs(comm).max()))
    out.append(
        _check(
            "canonical-commutator",
            "modeops",
            worst,
            1e-12,
            "position-momentum-quadratures",
        )
    )

    q8 = build_quadratures(build_space(8))
    E = q8.E.mat.toarray()
    E2 = q8.E2.mat.toarray()
    dev = float(np.abs(E @ E - E2).max())
    out.append(
        _check("energy-square-root", "modeops", dev, 1e-9, "three-momentum-energy")
    )
    min_eig = float(q8.e2_eigvals.min())
    out.append(
        _check(
            "energy-square-psd",
            "modeops",
            min_eig,
            -1e-10,
            "three-momentum-energy",
            ok=min_eig >= -1e-10,
        )
    )
    out.append(
        _check(
            "number-energy-commutator",
            "modeops",
            number_energy_commutator_norm(q6),
            None,
            "occupation-conservation",
        )
    )
    return out


def _spatial_checks(cfg: RunConfig) -> List[Dict]:
    out = []
    grid_fine = Grid3(8.0, 0.01)
    gram = hermite_gram(12, grid_fine)
    out.append(
        _check(
            "hermite-orthonormality",
            "spatial",
            float(np.abs(gram - np.eye(13)).max()),
            1e-8,
            "oscillator-eigenfunctions",
        )
    )
    from .spatial import collapse_coefficients

    space = build_space(4)
    s = _random_state(space, 21)
    collapsed = float(np.linalg.norm(collapse_coefficients(s)))
    out.append(
        _check(
            "parseval",
            "spatial",
            abs(state_grid_norm(s, grid_fine) - collapsed),
            1e-5,
            "wavefunction-map",
        )
    )
    q4 = build_quadratures(space)
    low = basis_state(space, (0, 0, 0, 1), "xyzn")
    res = klein_gordon_residual(q4, low, 0.0, 1e-3, Grid3(8.0, 0.05))
    out.append(
        _check("klein-gordon-residual", "spatial", res, 5e-3, "wave-equation")
    )
    return out


def _dynamics_checks(cfg: RunConfig) -> List[Dict]:
    out = []
    space = build_space(4)
    q = build_quadratures(space)
    s = _random_state(space, 31)
    ev = evolve_fock(q, s, 1.0)
    out.append(
        _check(
            "evolution-unitarity",
            "dynamics",
            abs(np.linalg.norm(ev.amp) - 1.0),
            1e-10,
            "energy-generated-evolution",
        )
    )
    two_step = evolve_fock(q, evolve_fock(q, s, 0.3), 0.7)
    out.append(
        _check(
            "evolution-composition",
            "dynamics",
            float(np.abs(two_step.amp - ev.amp).max()),
            1e-9,
            "energy-generated-evolution",
        )
    )
    return out


def _algebra_checks(cfg: RunConfig) -> List[Dict]:
    out = []
    pairs = set()
    for line in algebra.FANO_LINES:
        for a in line:
            for b in line:
                if a != b:
                    pairs.add((a, b))
    out.append(
        _check(
            "fano-pair-coverage",
            "algebra",
            abs(len(pairs) - 42),
            0.0,
            "unit-multiplication-lines",
        )
    )
    rng = np.random.default_rng(41)
    worst = 0.0
    for _ in range(1000):
        x = algebra.Octonion(rng.normal(size=8))
        y = algebra.Octonion(rng.normal(size=8))
        worst = max(worst, abs(algebra.oct_mul(x, y).norm() - x.norm() * y.norm()))
    out.append(
        _check("composition-property", "algebra", worst, 1e-12, "normed-algebra")
    )
    _, report = algebra.derive_eps4()
    out.append(
        _check(
            "associator-table-discrepancies",
            "algebra",
            float(len(report)),
            None,
            "four-index-structure-constants",
        )
    )
    gens = algebra.build_g2_generators()
    anti = max(float(np.abs(g + g.T).max()) for g in gens.all())
    out.append(
        _check("generator-antisymmetry", "algebra", anti, 1e-14, "automorphism-generators")
    )
    closure = algebra.g2_closure_report(gens)
    out.append(
        _check(
            "generator-span-rank",
            "algebra",
            abs(closure["rank_of_span"] - 14),
            0.0,
            "automorphism-generators",
        )
    )
    out.append(
        _check(
            "generator-closure-defect",
            "algebra",
            closure["closure_defect"],
            None,
            "automorphism-generators",
        )
    )
    tbl = algebra.StructureConstantTable()
    jac = algebra.jacobi_check(tbl)
    out.append(
        _check(
            "jacobi-gauge-sector",
            "algebra",
            jac["g_only_residual"],
            1e-12,
            "internal-bracket-relations",
        )
    )
    out.append(
        _check(
            "jacobi-mixed-sector",
            "algebra",
            jac["mixed_residual"],
            None,
            "internal-bracket-relations",
        )
    )
    dm = algebra.build_dirac()
    worst = 0.0
    for mu in range(4):
        for nu in range(4):
            anti = dm.gammas[mu] @ dm.gammas[nu] + dm.gammas[nu] @ dm.gammas[mu]
            worst = max(
                worst, float(np.abs(anti - 2.0 * dm.eta[mu, nu] * np.eye(4)).max())
            )
    out.append(
        _check("clifford-relations", "algebra", worst, 1e-14, "gamma-matrices")
    )
    return out


def _internal_checks(cfg: RunConfig) -> List[Dict]:
    out = []
    rng = np.random.default_rng(51)
    worst = 0.0
    for _ in range(1000):
        phi = UrSpinor(rng.normal(size=2) + 1j * rng.normal(size=2))
        v = spinor_to_vector(MajoranaSpinor.single_ur(phi))
        worst = max(worst, abs(v[0] ** 2 - v[1] ** 2 - v[2] ** 2 - v[3] ** 2))
    out.append(
        _check("null-four-vector", "internal", worst, 1e-12, "spinor-bilinears")
    )
    q6 = build_quadratures(build_space(6))
    hd = internal.dirac_hamiltonian(q6)
    out.append(
        _check(
            "dirac-hermiticity",
            "internal",
            float(np.abs(hd - hd.conj().T).max()),
            1e-12,
            "first-order-hamiltonian",
        )
    )
    e2 = np.kron(np.eye(4), q6.E2.mat.toarray())
    proj = np.kron(np.eye(4), interior_projector(q6.space, margin=2).toarray())
    dev = float(np.abs(proj @ (hd @ hd - e2) @ proj).max())
    out.append(
        _check(
            "dirac-square-interior",
            "internal",
            dev,
            1e-10,
            "first-order-hamiltonian",
        )
    )
    return out


def _manybody_checks(cfg: RunConfig) -> List[Dict]:
    from .manybody import ObjectRegistry

    out = []
    space = build_space(2)
    reg = ObjectRegistry(space, M=2)
    comps = build_green_components(reg)
    worst = 0.0
    for r in range(4):
        for s_ in range(4):
            b0 = comps[(0, r, "annihilate")].mat
            b1d = comps[(1, s_, "create")].mat
            worst = max(worst, float(np.abs((b0 @ b1d + b1d @ b0).toarray()).max()))
    out.append(
        _check(
            "component-cross-anticommutator",
            "manybody",
            worst,
            1e-12,
            "green-decomposition",
        )
    )
    p1 = interior_projector(space, margin=1).toarray()
    reg_proj = np.kron(p1, p1)
    ann = [parabose_ladder(comps, r, "annihilate").toarray() for r in range(4)]
    cre = [parabose_ladder(comps, r, "create").toarray() for r in range(4)]
    worst = 0.0
    for r in range(4):
        for s_ in range(4):
            half = 0.5 * (ann[r] @ cre[s_] + cre[s_] @ ann[r])
            for t_ in range(4):
                comm = half @ ann[t_] - ann[t_] @ half
                expect = -(1.0 if s_ == t_ else 0.0) * ann[r]
                worst = max(
                    worst, float(np.abs(reg_proj @ (comm - expect) @ reg_proj).max())
                )
    out.append(
        _check(
            "trilinear-commutation",
            "manybody",
            worst,
            1e-10,
            "paraboson-relations",
        )
    )

    sp4 = build_space(2)
    alpha = basis_state(sp4, (1, 0, 0, 0), "xyzn")
    gamma = basis_state(sp4, (0, 0, 1, 0), "xyzn")
    sup1 = StateVector(sp4, (alpha.amp + gamma.amp) / np.sqrt(2), "xyzn")
    pair = interaction_apply(1.0, [sup1, sup1])
    off = pair.amp.copy()
    for i in range(sp4.dim):
        off[i, i] = 0.0
    out.append(
        _check(
            "equal-label-survival",
            "manybody",
            float(np.abs(off).max()),
            0.0,
            "entanglement-coupling",
        )
    )

    q2 = build_quadratures(sp4)
    start = product_state([sup1, sup1])
    evolved = evolve_interacting(q2, 1.0, start, 1.0)
    out.append(
        _check(
            "interacting-unitarity",
            "manybody",
            abs(evolved.norm() - 1.0),
            1e-10,
            "entanglement-coupling",
        )
    )
    ent = schmidt_entropy(evolved)
    out.append(
        _check(
            "schmidt-entropy",
            "manybody",
            ent,
            0.01,
            "entanglement-coupling",
            ok=ent > 0.01,
        )
    )
    return out


def _gravity_checks(cfg: RunConfig) -> List[Dict]:
    out = []
    rng = np.random.default_rng(81)

    def rnd():
        return UrSpinor(rng.normal(size=2) + 1j * rng.normal(size=2))

    worst = 0.0
    max_rank = 0
    for _ in range(1000):
        spinors = [rnd() for _ in range(4)]
        m = gravity.build_metric(*spinors)
        lf = gravity.metric_long_form(*spinors)
        scale = max(1.0, float(np.abs(m.g).max()))
        worst = max(worst, float(np.abs(m.g - lf).max()) / scale)
        max_rank = max(max_rank, m.rank())
    out.append(
        _check("metric-long-form", "gravity", worst, 1e-12, "spinor-metric")
    )
    out.append(
        _check(
            "metric-rank",
            "gravity",
            float(max_rank),
            2.0,
            "spinor-metric",
            ok=max_rank <= 2,
        )
    )

    flat = lambda p: gravity.ETA.copy()
    flat_val = float(
        np.abs(gravity.classical_term_evaluation(flat, (0.1, 0.2, -0.3, 0.4), h=0.05)).max()
    )
    out.append(
        _check("curvature-flat-zero", "gravity", flat_val, 0.0, "expanded-curvature")
    )
    fn = gravity.eta_bump_metric(eps=1e-3)
    pt = (0.2, -0.1, 0.3, 0.15)
    R_fd = gravity.classical_ricci_oracle(fn, pt, h=0.05)
    R_tl = gravity.classical_term_evaluation(fn, pt, h=0.05)
    rel = float(np.abs(R_fd - R_tl).max() / np.abs(R_fd).max())
    out.append(
        _check("curvature-term-list", "gravity", rel, 0.05, "expanded-curvature")
    )

    q2 = build_quadratures(build_space(2))
    gravitons = []
    for seed in range(4):
        state = _random_state(q2.space, 90 + seed)
        gravitons.append(
            gravity.build_graviton(state, gravity.build_metric(*(rnd() for _ in range(4))))
        )
    base = gravity.evaluate_quantized_ricci(gravitons, 0, 1, q2)
    lam = 2.0
    scaled = list(gravitons)
    scaled[2] = gravity.build_graviton(
        StateVector(q2.space, lam * gravitons[2].state.amp, "xyzn"),
        gravitons[2].metric,
    )
    res = gravity.evaluate_quantized_ricci(scaled, 0, 1, q2)
    worst = 0.0
    for term in gravity.ricci_terms()["terms"]:
        factor = lam if len(term["factors"]) == 4 else 1.0
        worst = max(
            worst,
            float(np.abs(res.per_term[term["id"]] - factor * base.per_term[term["id"]]).max()),
        )
    out.append(
        _check(
            "quantized-multilinearity",
            "gravity",
            worst,
            1e-10,
            "quantized-curvature",
        )
    )
    same = [gravitons[0]] * 4
    defect = gravity.ricci_symmetry_defect(same, q2, 0, 1)
    out.append(
        _check(
            "quantized-index-symmetry",
            "gravity",
            defect,
            None,
            "quantized-curvature",
        )
    )
    return out


def run_checks(cfg: RunConfig) -> List[Dict]:
    lines: List[Dict] = []
    lines.extend(_fock_checks(cfg))
    lines.extend(_modeops_checks(cfg))
    lines.extend(_spatial_checks(cfg))
    lines.extend(_dynamics_checks(cfg))
    lines.extend(_algebra_checks(cfg))
    lines.extend(_internal_checks(cfg))
    lines.extend(_manybody_checks(cfg))
    lines.extend(_gravity_checks(cfg))
    return lines


def _emit(lines: Sequence[str], out: Optional[str]) -> None:
    text = "".join(line + "\n" for line in lines)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_check(cfg: RunConfig) -> int:
    results = run_checks(cfg)
    _emit([json.dumps(r, sort_keys=True) for r in results], cfg.out)
    return 0 if all(r["status"] != "fail" for r in results) else 1


# ---------------------------------------------------------- other commands


def cmd_spectrum(cfg: RunConfig) -> int:
    q = build_quadratures(build_space(cfg.n_max))
    energies = np.sqrt(np.where(q.e2_eigvals < 0.0, 0.0, q.e2_eigvals))
    _emit([f"{e:.17g}" for e in np.sort(energies)], cfg.out)
    return 0


def _plot_slice(field, path: str) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    mid = field.grid.npts // 2
    fig, ax = plt.subplots(figsize=(5, 4))
    L = field.grid.extent
    im = ax.imshow(
        np.abs(field.values[:, :, mid]).T,
        origin="lower",
        extent=(-L, L, -L, L),
        cmap="viridis",
    )
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    fig.colorbar(im, ax=ax, label="|psi| at z=0")
    fig.savefig(path, dpi=120)
    plt.close(fig)


def cmd_evolve(cfg: RunConfig, state_path: str, times: Sequence[float], plot: bool) -> int:
    state = read_state_file(state_path)
    state = change_basis_xyzn(state, "ABCD->xyzn")
    q = build_quadratures(state.space)
    grid = Grid3(cfg.grid_l, cfg.grid_h)
    prefix = cfg.out or "wavefield"
    base_norm = float(np.linalg.norm(state.amp))
    e_start = float(
        np.real(np.vdot(state.amp, apply_four_momentum(q, state, 0).amp))
    )
    for t in times:
        st = state if t == 0.0 else evolve_fock(q, state, t)
        field = state_to_wavefield(st, grid)
        path = f"{prefix}_t{t:g}.txt"
        export_wavefield(field, path)
        norm_drift = abs(float(np.linalg.norm(st.amp)) - base_norm)
        e_now = float(np.real(np.vdot(st.amp, apply_four_momentum(q, st, 0).amp)))
        print(
            f"t={t:g} file={path} norm_drift={norm_drift:.3e} "
            f"energy_drift={abs(e_now - e_start):.3e}"
        )
        if plot:
            _plot_slice(field, f"{prefix}_t{t:g}.png")
    return 0


def cmd_tables(cfg: RunConfig) -> int:
    lines: List[str] = []
    lines.append("# three-index structure constants (positive lines)")
    for line in algebra.FANO_LINES:
        lines.append(f"eps3({line[0]},{line[1]},{line[2]}) = +1")
    eps4, report = algebra.derive_eps4()
    lines.append("# derived four-index structure constants (positive quadruples)")
    seen = set()
    for idx in np.argwhere(eps4 > 0.5):
        key = tuple(sorted(int(v) for v in idx))
        if key not in seen and eps4[key] > 0.5:
            seen.add(key)
    for key in sorted(seen):
        lines.append(f"eps4({key[0]},{key[1]},{key[2]},{key[3]}) = +1")
    lines.append("# discrepancies vs the quoted four-index list")
    if not report:
        lines.append("none")
    for entry in report:
        i = entry["indices"]
        lines.append(
            f"eps4({i[0]},{i[1]},{i[2]},{i[3]}): derived={entry['derived']:+g} "
            f"quoted={entry['printed']:+g}"
        )
    _emit(lines, cfg.out)
    return 0


_SPINOR_KEYS = ("u1", "u2", "v1", "v2")


def read_graviton_spec(path: str, space: FockSpace):
    """
    Flat key=value graviton spec: keys u1,u2,v1,v2 each `re im re im`
    (two complex components), optional `state = <state file>` (default
    vacuum).
    """
    try:
        with open(path, "r") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read graviton spec {path!r}: {exc}") from exc
    values: Dict = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value")
        key, _, val = line.partition("=")
        values[key.strip()] = val.strip()
    spinors = []
    for key in _SPINOR_KEYS:
        if key not in values:
            raise ConfigError(f"{path}: missing spinor {key}")
        try:
            nums = [float(x) for x in values[key].split()]
        except ValueError as exc:
            raise ConfigError(f"{path}: bad numbers for {key}") from exc
        if len(nums) != 4:
            raise ConfigError(f"{path}: spinor {key} needs 4 numbers (re im re im)")
        spinors.append(UrSpinor(np.array([nums[0] + 1j * nums[1], nums[2] + 1j * nums[3]])))
    metric = gravity.build_metric(*spinors)
    if "state" in values:
        loaded = read_state_file(values["state"])
        if loaded.space.n_max != space.n_max:
            raise ConfigError(
                f"{path}: state n_max {loaded.space.n_max} != configured {space.n_max}"
            )
        # rebind onto the shared space so all four gravitons match
        loaded = StateVector(space, loaded.amp, "ABCD")
        state = change_basis_xyzn(loaded, "ABCD->xyzn")
    else:
        state = vacuum(space, "xyzn")
    return gravity.build_graviton(state, metric)


def cmd_gravity_eval(cfg: RunConfig, spec_paths: Sequence[str], plot: bool) -> int:
    space = build_space(cfg.n_max)
    gravitons = [read_graviton_spec(p, space) for p in spec_paths]
    q = build_quadratures(space)
    norms = np.zeros((4, 4))
    lines = []
    for mu in range(4):
        for nu in range(4):
            res = gravity.evaluate_quantized_ricci(gravitons, mu, nu, q)
            norms[mu, nu] = res.norm
            lines.append(json.dumps({"mu": mu, "norm": res.norm, "nu": nu}, sort_keys=True))
    _emit(lines, cfg.out)
    if plot:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        fig, ax = plt.subplots(figsize=(4.5, 4))
        im = ax.imshow(norms, origin="upper", cmap="magma")
        ax.set_xlabel("nu")
        ax.set_ylabel("mu")
        fig.colorbar(im, ax=ax, label="residual norm")
        path = (cfg.out or "gravity_eval") + ".png"
        fig.savefig(path, dpi=120)
        plt.close(fig)
    return 0


# ----------------------------------------------------------------- parser


def _add_common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n-max", type=int, default=None, dest="n_max")
    p.add_argument("--grid-l", type=float, default=None, dest="grid_l")
    p.add_argument("--grid-h", type=float, default=None, dest="grid_h")
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--out", type=str, default=None)
    p.add_argument("--config", type=str, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="urfock", description="Truncated four-mode tensor-space toolkit."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="run the invariant suites")
    _add_common_flags(p)

    p = sub.add_parser("evolve", help="evolve a state file, export wavefields")
    _add_common_flags(p)
    p.add_argument("state", help="state file (# urfock state v1 header)")
    p.add_argument(
        "--times", type=str, default="1.0", help="comma-separated times"
    )
    p.add_argument("--plot", action="store_true", help="also render PNG slices")

    p = sub.add_parser("spectrum", help="eigenvalues of the energy operator")
    _add_common_flags(p)

    p = sub.add_parser("tables", help="octonion structure tables")
    _add_common_flags(p)

    p = sub.add_parser("gravity-eval", help="quantized curvature residuals")
    _add_common_flags(p)
    p.add_argument("specs", nargs=4, help="four graviton spec files")
    p.add_argument("--plot", action="store_true", help="also render a PNG heatmap")

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args)
        if args.command == "check":
            return cmd_check(cfg)
        if args.command == "evolve":
            try:
                times = [float(x) for x in args.times.split(",") if x.strip()]
            except ValueError:
                raise ConfigError(f"bad --times value {args.times!r}")
            return cmd_evolve(cfg, args.state, times, args.plot)
        if args.command == "spectrum":
            return cmd_spectrum(cfg)
        if args.command == "tables":
            return cmd_tables(cfg)
        if args.command == "gravity-eval":
            return cmd_gravity_eval(cfg, args.specs, args.plot)
        raise ConfigError(f"unknown command {args.command!r}")
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
