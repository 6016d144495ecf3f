"""Tests for the Hermite-function spatial map."""

import numpy as np
import pytest

from urfock.fock import StateVector, basis_state, build_space, vacuum
from urfock.spatial import (
    Grid3,
    collapse_coefficients,
    export_wavefield,
    hermite_fn,
    hermite_gram,
    quadrature_overlap,
    state_grid_norm,
    state_grid_overlap,
    state_to_wavefield,
)


# ------------------------------------------------------------- hermite


def test_h0_at_origin():
    assert abs(hermite_fn(0, 0.0) - np.pi ** -0.25) <= 1e-15
    assert abs(float(hermite_fn(0, 0.0)) - 0.7511255444649425) <= 1e-12


def test_h1_odd():
    assert abs(hermite_fn(1, 0.0)) == 0.0
    x = 0.7
    assert abs(hermite_fn(1, -x) + hermite_fn(1, x)) <= 1e-15


def test_orthonormality_1d():
    # trapezoid quadrature oracle on L=8, h=0.01 for n <= 12
    x = np.arange(-8.0, 8.0 + 0.005, 0.01)
    w = np.full(x.size, 0.01)
    w[0] *= 0.5
    w[-1] *= 0.5
    H = np.array([hermite_fn(n, x) for n in range(13)])
    gram = (H * w) @ H.T
    assert np.abs(gram - np.eye(13)).max() <= 1e-8


def test_raising_relation():
    # (x - d/dx) h_n = sqrt(2(n+1)) h_{n+1}, derivative via central FD
    xs = np.array([-1.3, -0.2, 0.0, 0.4, 1.7])
    eps = 1e-5
    for n in range(6):
        d = (hermite_fn(n, xs + eps) - hermite_fn(n, xs - eps)) / (2 * eps)
        lhs = xs * hermite_fn(n, xs) - d
        rhs = np.sqrt(2.0 * (n + 1)) * hermite_fn(n + 1, xs)
        assert np.abs(lhs - rhs).max() <= 1e-8


# ----------------------------------------------------------------- grid


def test_grid_validation():
    g = Grid3(8.0, 0.05)
    assert g.npts == 321
    with pytest.raises(ValueError):
        Grid3(8.0, 0.07)  # 2L/h not an integer
    with pytest.raises(ValueError):
        Grid3(-1.0, 0.1)


# ------------------------------------------------------------ wavefield


@pytest.fixture(scope="module")
def small_grid():
    return Grid3(6.0, 0.1)


def test_vacuum_gaussian(small_grid):
    space = build_space(3)
    f = state_to_wavefield(vacuum(space, "xyzn"), small_grid)
    ax = small_grid.axis
    X, Yv, Zv = np.meshgrid(ax, ax, ax, indexing="ij")
    expect = np.pi ** -0.75 * np.exp(-0.5 * (X**2 + Yv**2 + Zv**2))
    assert np.abs(f.values - expect).max() <= 1e-12
    assert abs(f.quad_norm - 1.0) <= 1e-6


def test_n_mode_invisible(small_grid):
    space = build_space(3)
    f0 = state_to_wavefield(vacuum(space, "xyzn"), small_grid)
    f1 = state_to_wavefield(basis_state(space, (0, 0, 0, 1), "xyzn"), small_grid)
    assert np.abs(f0.values - f1.values).max() <= 1e-14


def test_one_quantum_x(small_grid):
    space = build_space(2)
    f = state_to_wavefield(basis_state(space, (1, 0, 0, 0), "xyzn"), small_grid)
    ax = small_grid.axis
    expect = (
        hermite_fn(1, ax)[:, None, None]
        * hermite_fn(0, ax)[None, :, None]
        * hermite_fn(0, ax)[None, None, :]
    )
    assert np.abs(f.values - expect).max() <= 1e-12
    # antisymmetric in x
    assert np.abs(f.values + f.values[::-1, :, :]).max() <= 1e-12


def test_requires_xyzn_tag(small_grid):
    space = build_space(1)
    with pytest.raises(ValueError):
        state_to_wavefield(vacuum(space, "ABCD"), small_grid)


def test_overlap_orthogonality(small_grid):
    space = build_space(3)
    f1 = state_to_wavefield(basis_state(space, (1, 0, 0, 0), "xyzn"), small_grid)
    f2 = state_to_wavefield(basis_state(space, (0, 2, 1, 0), "xyzn"), small_grid)
    assert abs(quadrature_overlap(f1, f2)) <= 1e-6
    assert quadrature_overlap(f1, f1).real >= 0.0


def test_overlap_grid_mismatch(small_grid):
    space = build_space(1)
    f1 = state_to_wavefield(vacuum(space, "xyzn"), small_grid)
    f2 = state_to_wavefield(vacuum(space, "xyzn"), Grid3(6.0, 0.2))
    with pytest.raises(ValueError):
        quadrature_overlap(f1, f2)


# -------------------------------------------------- Parseval / Gram path


def test_gram_norm_matches_materialized(small_grid):
    rng = np.random.default_rng(5)
    space = build_space(3)
    amp = rng.normal(size=space.dim) + 1j * rng.normal(size=space.dim)
    s = StateVector(space, amp / np.linalg.norm(amp), "xyzn")
    f = state_to_wavefield(s, small_grid)
    direct = np.sqrt(quadrature_overlap(f, f).real)
    separable = state_grid_norm(s, small_grid)
    assert abs(direct - separable) <= 1e-10


def test_parseval(small_grid):
    # quadrature norm of the field = norm of the collapsed coefficients
    rng = np.random.default_rng(8)
    space = build_space(4)
    grid = Grid3(8.0, 0.05)
    amp = rng.normal(size=space.dim) + 1j * rng.normal(size=space.dim)
    s = StateVector(space, amp / np.linalg.norm(amp), "xyzn")
    collapsed_norm = np.linalg.norm(collapse_coefficients(s))
    assert abs(state_grid_norm(s, grid) - collapsed_norm) <= 1e-5


def test_spatial_map_linear_injective_on_nn0():
    # distinct (N_x,N_y,N_z) labels give orthogonal fields
    space = build_space(2)
    grid = Grid3(8.0, 0.05)
    s1 = basis_state(space, (1, 0, 1, 0), "xyzn")
    s2 = basis_state(space, (0, 1, 0, 0), "xyzn")
    ov = state_grid_overlap(s1, s2, grid)
    assert abs(ov) <= 1e-8
    assert abs(state_grid_overlap(s1, s1, grid) - 1.0) <= 1e-8


# --------------------------------------------------------------- export


def test_export_round_trip(tmp_path, small_grid):
    space = build_space(1)
    grid = Grid3(1.0, 0.5)
    f = state_to_wavefield(vacuum(space, "xyzn"), grid)
    path = tmp_path / "field.dat"
    export_wavefield(f, str(path))
    lines = path.read_text().splitlines()
    assert lines[0] == "# urfock wavefield v1 L=1 h=0.5"
    assert len(lines) == 1 + grid.npts**3
    x, y, z, re, im = map(float, lines[1].split())
    assert (x, y, z) == (-1.0, -1.0, -1.0)
    assert abs(re - f.values[0, 0, 0].real) <= 1e-15
    assert im == 0.0
