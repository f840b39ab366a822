import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from entact.linalg import BipartiteSpace, make_rng, max_entangled_projector, partial_transpose
from entact.robustness import (
    PPT_EXACT,
    PPT_LOWER_BOUND,
    pure_state_robustness,
    relative_robustness,
    robustness_ppt,
    seesaw_max_product,
    witness_from_dual,
)
from entact.states import (
    DensityMatrix,
    isotropic,
    maximally_mixed,
    pure_from_schmidt,
    random_density,
    random_product,
)

QUBITS = BipartiteSpace(2, 2)


def random_unitary(rng, n):
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def test_schmidt_formula():
    assert pure_state_robustness([1.0, 0.0]) == 0.0
    assert pure_state_robustness([2**-0.5, 2**-0.5]) == pytest.approx(1.0)
    assert pure_state_robustness(np.ones(3) / np.sqrt(3)) == pytest.approx(2.0)


@pytest.mark.parametrize("k", range(9))
def test_pure_states_match_schmidt_formula(k):
    theta = k * np.pi / 32
    a = np.array([np.cos(theta), np.sin(theta)])
    res = robustness_ppt(pure_from_schmidt(a))
    assert res.value == pytest.approx(pure_state_robustness(a), abs=1e-6)
    assert res.relaxation == PPT_EXACT


def test_bell_state_value_and_witness():
    bell = DensityMatrix(max_entangled_projector(2), QUBITS)
    res = robustness_ppt(bell)
    assert res.value == pytest.approx(1.0, abs=1e-6)
    wit = witness_from_dual(bell, res)
    assert wit.value_on_target == pytest.approx(-1.0, abs=1e-6)
    assert wit.normalization_bound <= 1 + 1e-6


@pytest.mark.parametrize("d, F", [(2, 0.6), (2, 0.9), (3, 0.5), (3, 0.9)])
def test_isotropic_states(d, F):
    # mixing phi_d with its orthogonal complement: R = dF - 1 above 1/d
    res = robustness_ppt(isotropic(d, F))
    assert res.value == pytest.approx(d * F - 1, abs=1e-6)


def test_three_by_three_pure_state_is_lower_bound_label():
    a = np.array([0.7, 0.5, np.sqrt(1 - 0.49 - 0.25)])
    res = robustness_ppt(pure_from_schmidt(a))
    assert res.relaxation == PPT_LOWER_BOUND
    assert res.value == pytest.approx(pure_state_robustness(a), abs=1e-6)


@pytest.mark.parametrize("seed", range(50))
def test_zero_exactly_when_ppt(seed):
    sigma = random_density(4, 500 + seed, QUBITS)
    if seed % 2:
        # pull half the states towards the maximally mixed state
        sigma = DensityMatrix(0.3 * sigma.matrix + 0.7 * np.eye(4) / 4, QUBITS)
    value = robustness_ppt(sigma).value
    if sigma.is_ppt():
        assert value <= 1e-8
    else:
        assert value > 1e-8


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 10_000))
def test_optimal_noise_certifies_value(seed):
    sigma = random_density(4, seed, QUBITS)
    res = robustness_ppt(sigma)
    assert res.value >= 0
    assert res.optimal_noise.is_ppt(tol=1e-7)
    mixed = sigma.matrix + res.value * res.optimal_noise.matrix
    assert np.linalg.eigvalsh(partial_transpose(mixed, QUBITS))[0] >= -1e-7
    assert relative_robustness(sigma, res.optimal_noise) == pytest.approx(res.value, abs=1e-6)


@pytest.mark.parametrize("seed", range(10))
def test_relative_robustness_upper_bounds(seed):
    sigma = random_density(4, 700 + seed, QUBITS)
    value = robustness_ppt(sigma).value
    for noise in (maximally_mixed(QUBITS), random_product(QUBITS, seed)):
        assert relative_robustness(sigma, noise) >= value - 1e-7


def test_relative_robustness_of_bell_state_with_white_noise():
    bell = DensityMatrix(max_entangled_projector(2), QUBITS)
    # (phi + s I/4)/(1+s) is PPT once its singlet fidelity drops to 1/2
    assert relative_robustness(bell, maximally_mixed(QUBITS)) == pytest.approx(2.0)


def test_relative_robustness_singular_noise_can_be_infinite():
    bell = DensityMatrix(max_entangled_projector(2), QUBITS)
    e00 = np.zeros((4, 4), complex)
    e00[0, 0] = 1
    assert relative_robustness(bell, DensityMatrix(e00, QUBITS)) == float("inf")


def test_relative_robustness_rejects_npt_noise():
    bell = DensityMatrix(max_entangled_projector(2), QUBITS)
    with pytest.raises(ValueError):
        relative_robustness(pure_from_schmidt([0.8, 0.6]), bell)


def test_local_unitary_invariance():
    rng = make_rng(9)
    sigma = random_density(4, 77, QUBITS)
    u = np.kron(random_unitary(rng, 2), random_unitary(rng, 2))
    rotated = DensityMatrix(u @ sigma.matrix @ u.conj().T, QUBITS)
    assert robustness_ppt(rotated).value == pytest.approx(robustness_ppt(sigma).value, abs=1e-7)


def test_two_by_three_separable_is_zero():
    space = BipartiteSpace(2, 3)
    for seed in range(5):
        assert robustness_ppt(random_product(space, seed)).value <= 1e-8


@pytest.mark.parametrize("seed", range(5))
def test_witness_from_dual_properties(seed):
    sigma = random_density(4, seed, QUBITS)
    while sigma.is_ppt():
        seed += 1000
        sigma = random_density(4, seed, QUBITS)
    res = robustness_ppt(sigma)
    wit = witness_from_dual(sigma, res)
    assert wit.value_on_target == pytest.approx(-res.value, abs=1e-6)
    assert wit.normalization_bound <= 1 + 1e-6
    # tr(W pi) <= 1 on PPT states, checked on random product and PPT states
    for k in range(20):
        pi = random_product(QUBITS, 100 + k)
        assert np.trace(wit.operator @ pi.matrix).real <= 1 + 1e-6


def test_witness_is_zero_for_ppt_state():
    sigma = maximally_mixed(QUBITS)
    wit = witness_from_dual(sigma, robustness_ppt(sigma))
    assert np.all(wit.operator == 0)
    assert wit.value_on_target == 0.0


def test_seesaw_finds_product_maximum():
    # h = |00><00| + 0.5 |11><11| has product maximum 1
    h = np.diag([1.0, 0.0, 0.0, 0.5])
    value, state = seesaw_max_product(h, QUBITS, restarts=10)
    assert value == pytest.approx(1.0)
    assert np.trace(h @ state.matrix).real == pytest.approx(1.0)
    # the Bell projector has product maximum 1/2
    value, _ = seesaw_max_product(max_entangled_projector(2), QUBITS, restarts=20)
    assert value == pytest.approx(0.5, abs=1e-9)


def test_seesaw_is_seed_deterministic():
    h = random_density(4, 3, QUBITS).matrix
    assert seesaw_max_product(h, QUBITS, seed=4)[0] == seesaw_max_product(h, QUBITS, seed=4)[0]


def test_seesaw_identity_is_one():
    for restarts in (1, 5):
        value, _ = seesaw_max_product(np.eye(6), BipartiteSpace(2, 3), restarts=restarts)
        assert value == pytest.approx(1.0)
