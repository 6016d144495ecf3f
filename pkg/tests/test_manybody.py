"""Tests for parabose components, interactions, layer two, propagator."""

import numpy as np
import pytest

from urfock.fock import (
    FockSpace,
    StateVector,
    basis_state,
    build_space,
    elementary_ladder,
    interior_projector,
    vacuum,
)
from urfock.internal import ExtendedState, MajoranaSpinor, UrSpinor, apply_extended
from urfock.manybody import (
    EmResidual,
    FieldTerm,
    LayerTwoSpace,
    MultiObjectState,
    ObjectRegistry,
    build_green_components,
    em_demo,
    evolve_interacting,
    free_multibody_check,
    interaction_apply,
    parabose_ladder,
    product_state,
    propagator,
    quantize_expression,
    schmidt_entropy,
)
from urfock.modeops import build_quadratures
from urfock.spatial import Grid3, hermite_fn, hermite_gram


@pytest.fixture(scope="module")
def reg2():
    return ObjectRegistry(build_space(2), M=2)


@pytest.fixture(scope="module")
def comps2(reg2):
    return build_green_components(reg2)


@pytest.fixture(scope="module")
def q2():
    return build_quadratures(build_space(2))


def _interior(reg):
    import scipy.sparse as sp

    p1 = interior_projector(reg.space, margin=1)
    proj = p1
    for _ in range(reg.M - 1):
        proj = sp.kron(proj, p1, format="csr")
    return proj


# ----------------------------------------------------- green components


def test_m1_reduces_to_boson():
    reg = ObjectRegistry(build_space(2), M=1)
    comps = build_green_components(reg)
    for r in range(4):
        b = comps[(0, r, "annihilate")].mat
        a = elementary_ladder(reg.space, r, "annihilate")
        assert (b != a).nnz == 0


def test_cross_object_anticommutators_vanish(comps2, reg2):
    # {b_r^alpha, b_s^beta(dagger)} = 0 for alpha != beta, exactly
    for r in range(4):
        for s in range(4):
            for k1 in ("annihilate", "create"):
                for k2 in ("annihilate", "create"):
                    A = comps2[(0, r, k1)].mat
                    B = comps2[(1, s, k2)].mat
                    anti = (A @ B + B @ A).toarray()
                    assert np.abs(anti).max() <= 1e-12


def test_same_object_canonical(comps2, reg2):
    proj = _interior(reg2).toarray()
    eye = np.eye(reg2.dim)
    for r in range(4):
        for s in range(4):
            a = comps2[(0, r, "annihilate")].mat.toarray()
            cdag = comps2[(0, s, "create")].mat.toarray()
            comm = a @ cdag - cdag @ a
            expect = (1.0 if r == s else 0.0) * eye
            assert np.abs(proj @ (comm - expect) @ proj).max() <= 1e-10


def test_trilinear_relation(comps2, reg2):
    # [1/2 {a_r, a_s^dag}, a_t] = -delta_st a_r on the interior
    proj = _interior(reg2).toarray()
    ann = [parabose_ladder(comps2, r, "annihilate").toarray() for r in range(4)]
    cre = [parabose_ladder(comps2, r, "create").toarray() for r in range(4)]
    for r in range(4):
        for s in range(4):
            half_anti = 0.5 * (ann[r] @ cre[s] + cre[s] @ ann[r])
            for t in range(4):
                lhs = half_anti @ ann[t] - ann[t] @ half_anti
                rhs = -(1.0 if s == t else 0.0) * ann[r]
                assert np.abs(proj @ (lhs - rhs) @ proj).max() <= 1e-10


def test_sign_rule_transposition(comps2, reg2):
    # Two urs on one object: creation order is irrelevant (symmetric).
    # Spread across objects: in the physical state a_r^dag a_s^dag |0>,
    # the component with ur r on object 1 / ur s on object 2 is the
    # negative of the transposed assignment.
    space = reg2.space
    v0 = np.zeros(space.dim)
    v0[space.index((0, 0, 0, 0))] = 1.0
    vac = np.kron(v0, v0)
    b = lambda a, r: comps2[(a, r, "create")].mat
    same = b(0, 0) @ b(0, 1) @ vac
    same_swapped = b(0, 1) @ b(0, 0) @ vac
    assert np.abs(same - same_swapped).max() <= 1e-12
    psi = (
        parabose_ladder(comps2, 0, "create")
        @ parabose_ladder(comps2, 1, "create")
        @ vac
    ).reshape(space.dim, space.dim)
    i_r = space.index((1, 0, 0, 0))
    i_s = space.index((0, 1, 0, 0))
    assert abs(psi[i_r, i_s]) > 0.5
    assert abs(psi[i_r, i_s] + psi[i_s, i_r]) <= 1e-12


# --------------------------------------------------- diagonal interaction


def test_interaction_alpha_gamma_survival(q2):
    space = q2.space
    a, b, g, d = 0.8, 0.6, 0.5j, 0.2
    psi1 = np.zeros(space.dim, dtype=complex)
    psi1[space.index((1, 0, 0, 0))] = a
    psi1[space.index((0, 1, 0, 0))] = b
    psi2 = np.zeros(space.dim, dtype=complex)
    psi2[space.index((1, 0, 0, 0))] = g
    psi2[space.index((0, 0, 1, 0))] = d
    out = interaction_apply(
        1.0,
        [StateVector(space, psi1, "ABCD"), StateVector(space, psi2, "ABCD")],
    )
    i1000 = space.index((1, 0, 0, 0))
    expect = np.zeros((space.dim, space.dim), dtype=complex)
    expect[i1000, i1000] = a * g
    assert np.abs(out.amp - expect).max() == 0.0


def test_interaction_zero_weight(q2):
    s = vacuum(q2.space, "ABCD")
    out = interaction_apply(0.0, [s, s])
    assert out.norm() == 0.0


def test_interaction_m1_diagonal_operator(q2):
    rng = np.random.default_rng(41)
    amp = rng.normal(size=q2.space.dim) + 1j * rng.normal(size=q2.space.dim)
    w = rng.normal(size=q2.space.dim)
    out = interaction_apply(w, [StateVector(q2.space, amp, "xyzn")])
    assert np.abs(out.amp - w * amp).max() <= 1e-14


def test_interaction_no_support_growth(q2):
    s1 = basis_state(q2.space, (1, 0, 0, 0), "xyzn")
    s2 = basis_state(q2.space, (0, 1, 0, 0), "xyzn")
    out = interaction_apply(1.0, [s1, s2])
    assert out.norm() == 0.0


# ------------------------------------------------- interacting evolution


def test_evolve_h0_is_product_of_free(q2):
    from urfock.dynamics import evolve_fock

    rng = np.random.default_rng(42)
    amps = []
    for seed in (1, 2):
        a = rng.normal(size=q2.space.dim) + 1j * rng.normal(size=q2.space.dim)
        amps.append(StateVector(q2.space, a / np.linalg.norm(a), "xyzn"))
    state = product_state(amps)
    t = 0.6
    out = evolve_interacting(q2, 0.0, state, t)
    free = product_state([evolve_fock(q2, s, t) for s in amps])
    assert np.abs(out.amp - free.amp).max() <= 1e-9


def test_evolve_unitary_and_entangling(q2):
    rng = np.random.default_rng(43)
    amps = []
    for _ in range(2):
        a = rng.normal(size=q2.space.dim) + 1j * rng.normal(size=q2.space.dim)
        amps.append(StateVector(q2.space, a / np.linalg.norm(a), "xyzn"))
    state = product_state(amps)
    assert schmidt_entropy(state) <= 1e-10
    out = evolve_interacting(q2, 1.0, state, 1.0)
    assert abs(out.norm() - 1.0) <= 1e-10
    assert schmidt_entropy(out) > 0.01


def test_evolve_rejects_complex_weight(q2):
    s = product_state([vacuum(q2.space, "xyzn")] * 2)
    with pytest.raises(ValueError):
        evolve_interacting(q2, 1.0j, s, 0.5)


# ------------------------------------------------------- free multibody


def test_free_multibody_product(q2):
    rng = np.random.default_rng(44)
    amps = []
    for _ in range(2):
        a = rng.normal(size=q2.space.dim) + 1j * rng.normal(size=q2.space.dim)
        amps.append(StateVector(q2.space, a / np.linalg.norm(a), "xyzn"))
    assert free_multibody_check(q2, product_state(amps)) <= 1e-10


def test_free_multibody_entangled(q2):
    rng = np.random.default_rng(45)
    amp = rng.normal(size=(q2.space.dim,) * 2) + 1j * rng.normal(
        size=(q2.space.dim,) * 2
    )
    state = MultiObjectState(q2.space, 2, amp / np.linalg.norm(amp), "xyzn")
    assert free_multibody_check(q2, state) <= 1e-10


def test_free_multibody_m1_is_kg_identity(q2):
    rng = np.random.default_rng(46)
    a = rng.normal(size=q2.space.dim) + 1j * rng.normal(size=q2.space.dim)
    state = MultiObjectState(q2.space, 1, a, "xyzn")
    assert free_multibody_check(q2, state) <= 1e-10


# ------------------------------------------------------------ layer two


def test_layer_two_commutator():
    l1 = build_space(2)
    lt = LayerTwoSpace.build(l1)
    assert lt.space.dim == 816
    import scipy.sparse as sp

    proj = interior_projector(lt.space, margin=1).toarray()
    for n in (0, 3, 14):
        for m in (0, 7):
            a = lt.field_operator(n, "annihilate")
            c = lt.field_operator(m, "create")
            comm = (a @ c - c @ a).toarray()
            expect = (1.0 if n == m else 0.0) * np.eye(lt.space.dim)
            assert np.abs(proj @ (comm - expect) @ proj).max() <= 1e-12


def test_layer_two_cap_enforced():
    with pytest.raises(ValueError):
        LayerTwoSpace.build(build_space(3))


# ------------------------------------------------------------ propagator


def test_propagator_t_earlier_is_zero(q2):
    assert propagator(q2, (0, 0, 0), (0, 0, 0), 0.0, 1.0) == 0.0


def test_propagator_equal_times_kernel_value(q2):
    # equal times: Delta = sum_N f_N(x') f_N(x) over N_n = 0 labels
    space = q2.space
    xp = (0.3, -0.2, 0.5)
    x = (-0.1, 0.4, 0.0)
    expect = 0.0
    for occ in space.basis:
        if occ[3] != 0:
            continue
        fp = (
            hermite_fn(int(occ[0]), xp[0])
            * hermite_fn(int(occ[1]), xp[1])
            * hermite_fn(int(occ[2]), xp[2])
        )
        fx = (
            hermite_fn(int(occ[0]), x[0])
            * hermite_fn(int(occ[1]), x[1])
            * hermite_fn(int(occ[2]), x[2])
        )
        expect += fp * fx
    got = propagator(q2, xp, x, 2.0, 2.0)
    assert abs(got - expect) <= 1e-10
    assert abs(got.imag) <= 1e-12


def test_propagator_coincident_nonnegative(q2):
    for pt in [(0, 0, 0), (1.0, -0.5, 0.2)]:
        val = propagator(q2, pt, pt, 1.5, 1.5)
        assert abs(val.imag) <= 1e-12
        assert val.real >= 0.0


def test_propagator_reproducing_kernel(q2):
    # integral of Delta(x', x) f_M(x) dx = f_M(x') within quadrature error
    space = q2.space
    grid = Grid3(8.0, 0.25)
    ax = grid.axis
    w = grid.weights
    labels = [occ for occ in space.basis if occ[3] == 0]
    H = {n: hermite_fn(n, ax) for n in range(space.n_max + 1)}
    target = (1, 1, 0, 0)  # f_M with Nx=1, Ny=1, Nz=0
    xp = (0.7, -0.3, 0.2)
    # separable evaluation of the integral using 1-D quadratures
    total = 0.0
    for occ in labels:
        fp = (
            hermite_fn(int(occ[0]), xp[0])
            * hermite_fn(int(occ[1]), xp[1])
            * hermite_fn(int(occ[2]), xp[2])
        )
        overlap = (
            float((H[int(occ[0])] * w) @ H[target[0]])
            * float((H[int(occ[1])] * w) @ H[target[1]])
            * float((H[int(occ[2])] * w) @ H[target[2]])
        )
        total += fp * overlap
    expect = (
        hermite_fn(target[0], xp[0])
        * hermite_fn(target[1], xp[1])
        * hermite_fn(target[2], xp[2])
    )
    assert abs(total - expect) <= 2e-3
    # and the scalar propagator agrees with the kernel sum used above
    direct = propagator(q2, xp, (0.7, -0.3, 0.2), 0.0, 0.0)
    assert np.isfinite(direct.real)


# ------------------------------------------------------------- quantizer


def test_quantize_identity(q2):
    rng = np.random.default_rng(47)
    a = rng.normal(size=q2.space.dim) + 1j * rng.normal(size=q2.space.dim)
    s = StateVector(q2.space, a, "xyzn")
    ev = quantize_expression([FieldTerm(1.0, ((),))])
    out = ev(q2, [s])
    assert np.abs(out.amp - a).max() <= 1e-14


def test_quantize_derivative(q2):
    from urfock.modeops import apply_four_momentum

    rng = np.random.default_rng(48)
    a = rng.normal(size=q2.space.dim) + 1j * rng.normal(size=q2.space.dim)
    s = StateVector(q2.space, a, "xyzn")
    ev = quantize_expression([FieldTerm(1.0, ((2,),))])
    out = ev(q2, [s])
    expect = 1j * apply_four_momentum(q2, s, 2).amp
    assert np.abs(out.amp - expect).max() <= 1e-12


def test_quantize_product_matches_interaction(q2):
    rng = np.random.default_rng(49)
    states = []
    for _ in range(2):
        a = rng.normal(size=q2.space.dim) + 1j * rng.normal(size=q2.space.dim)
        states.append(StateVector(q2.space, a, "xyzn"))
    ev = quantize_expression([FieldTerm(1.0, ((), ()))])
    out = ev(q2, states)
    expect = interaction_apply(1.0, states)
    assert np.abs(out.amp - expect.amp).max() <= 1e-14


def test_quantize_derivative_product_sign(q2):
    # d^mu Psi d_mu-style products pick up i*i = -1 relative to P P
    from urfock.modeops import apply_four_momentum

    rng = np.random.default_rng(50)
    states = []
    for _ in range(2):
        a = rng.normal(size=q2.space.dim) + 1j * rng.normal(size=q2.space.dim)
        states.append(StateVector(q2.space, a, "xyzn"))
    ev = quantize_expression([FieldTerm(1.0, ((1,), (1,)))])
    out = ev(q2, states)
    p1 = apply_four_momentum(q2, states[0], 1)
    p2 = apply_four_momentum(q2, states[1], 1)
    expect = interaction_apply(-1.0, [p1, p2])
    assert np.abs(out.amp - expect.amp).max() <= 1e-12


def test_quantize_multilinear(q2):
    rng = np.random.default_rng(51)
    states = []
    for _ in range(2):
        a = rng.normal(size=q2.space.dim) + 1j * rng.normal(size=q2.space.dim)
        states.append(StateVector(q2.space, a, "xyzn"))
    ev = quantize_expression(
        [FieldTerm(0.5, ((), ())), FieldTerm(2.0, ((0,), ()))]
    )
    out1 = ev(q2, states)
    scaled = [StateVector(q2.space, 3.0 * states[0].amp, "xyzn"), states[1]]
    out2 = ev(q2, scaled)
    assert np.abs(out2.amp - 3.0 * out1.amp).max() <= 1e-10


# --------------------------------------------------------------- em demo


@pytest.fixture(scope="module")
def fermion2(q2):
    rng = np.random.default_rng(52)
    amp = rng.normal(size=(4, q2.space.dim)) + 1j * rng.normal(
        size=(4, q2.space.dim)
    )
    return ExtendedState(q2.space, amp / np.linalg.norm(amp), "xyzn")


def test_em_zero_photon_is_free_dirac(q2, fermion2):
    from urfock.internal import dirac_operator

    photon = StateVector(
        q2.space, np.zeros(q2.space.dim, dtype=complex), "xyzn"
    )
    chi = MajoranaSpinor.two_ur(
        UrSpinor(np.array([0.3 + 0.1j, 0.2])), UrSpinor(np.array([0.5, 0.4j]))
    )
    res = em_demo(q2, photon, chi, fermion2)
    assert np.abs(res.coupling).max() == 0.0
    lam = dirac_operator(q2)
    expect = -(lam @ fermion2.amp.reshape(-1)).reshape(4, -1)
    assert np.abs(res.free.amp - expect).max() <= 1e-12


def test_em_linear_in_photon(q2, fermion2):
    rng = np.random.default_rng(53)
    amp = rng.normal(size=q2.space.dim) + 1j * rng.normal(size=q2.space.dim)
    chi = MajoranaSpinor.single_ur(UrSpinor(np.array([0.6, 0.8j])))
    p1 = StateVector(q2.space, amp, "xyzn")
    p2 = StateVector(q2.space, 2.5 * amp, "xyzn")
    r1 = em_demo(q2, p1, chi, fermion2)
    r2 = em_demo(q2, p2, chi, fermion2)
    assert np.abs(r2.coupling - 2.5 * r1.coupling).max() <= 1e-10
    assert np.abs(r2.free.amp - r1.free.amp).max() == 0.0


def test_em_coupling_equal_label_support(q2, fermion2):
    amp = np.zeros(q2.space.dim, dtype=complex)
    amp[3] = 1.0
    photon = StateVector(q2.space, amp, "xyzn")
    chi = MajoranaSpinor.single_ur(UrSpinor(np.array([1.0, 0.5])))
    res = em_demo(q2, photon, chi, fermion2)
    support = np.flatnonzero(np.abs(res.coupling).max(axis=0))
    assert set(support) <= {3}
