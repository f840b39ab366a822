import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from entact.linalg import BipartiteSpace, max_entangled_projector
from entact.states import (
    FourPartySpace,
    NegativityError,
    NotHermitianError,
    TraceError,
    isotropic,
    maximally_mixed,
    pure_from_schmidt,
    random_density,
    random_product,
    validate_density,
)

QUBITS = BipartiteSpace(2, 2)


def test_validate_accepts_bell_state():
    rho = validate_density(max_entangled_projector(2), QUBITS)
    assert rho.dim == 4


def test_validate_rejects_non_hermitian():
    m = np.eye(4, dtype=complex) / 4
    m[0, 1] = 0.1
    with pytest.raises(NotHermitianError) as err:
        validate_density(m, QUBITS)
    assert err.value.invariant == "hermitian"
    assert err.value.magnitude == pytest.approx(0.1)


def test_validate_rejects_bad_trace():
    with pytest.raises(TraceError) as err:
        validate_density(np.eye(4) / 2, QUBITS)
    assert err.value.magnitude == pytest.approx(2.0)


def test_validate_rejects_negative_eigenvalue():
    m = np.diag([0.6, 0.5, 0.1, -0.2]).astype(complex)
    with pytest.raises(NegativityError) as err:
        validate_density(m, QUBITS)
    assert err.value.magnitude == pytest.approx(-0.2)


def test_validate_rejects_wrong_shape():
    with pytest.raises(ValueError):
        validate_density(np.eye(3) / 3, QUBITS)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_isotropic_fidelity_and_ppt_boundary(d):
    for F in (0.0, 1.0 / d, 0.7, 1.0):
        rho = isotropic(d, F)
        validate_density(rho.matrix, rho.space)
        assert np.trace(rho.matrix @ max_entangled_projector(d)).real == pytest.approx(F)
    assert isotropic(d, 1.0 / d - 0.01).is_ppt()
    assert isotropic(d, 1.0 / d).is_ppt()
    assert not isotropic(d, 1.0 / d + 0.01).is_ppt()


def test_isotropic_rejects_out_of_range():
    with pytest.raises(ValueError):
        isotropic(2, 1.5)


def test_pure_from_schmidt_is_pure_with_right_marginal():
    a = np.array([0.8, 0.6])
    rho = pure_from_schmidt(a)
    np.testing.assert_allclose(rho.matrix @ rho.matrix, rho.matrix, atol=1e-14)
    marg = rho.matrix.reshape(2, 2, 2, 2).trace(axis1=1, axis2=3)
    np.testing.assert_allclose(marg, np.diag(a**2), atol=1e-14)
    with pytest.raises(ValueError):
        pure_from_schmidt([0.5, 0.5])


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 100_000), dims=st.sampled_from([(2, 2), (2, 3), (3, 3)]))
def test_random_states_are_valid(seed, dims):
    space = BipartiteSpace(*dims)
    validate_density(random_density(space.dim, seed, space).matrix, space)
    prod = random_product(space, seed)
    validate_density(prod.matrix, space)
    assert prod.is_ppt()


def test_random_density_is_reproducible():
    a = random_density(4, 42, QUBITS)
    b = random_density(4, 42, QUBITS)
    np.testing.assert_array_equal(a.matrix, b.matrix)


def test_maximally_mixed_and_four_party_space():
    assert maximally_mixed(QUBITS).is_ppt()
    fp = FourPartySpace(2, 3)
    assert fp.dim == 36
    assert fp.bipartite == BipartiteSpace(6, 6)
