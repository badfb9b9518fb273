import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pcoast import Pauli, commutator, herm_product
from pcoast.pauli import PauliError

from conftest import random_pauli


def paulis(n=4, hermitian=False):
    phases = st.sampled_from([0, 2]) if hermitian else st.integers(0, 3)
    return st.builds(
        Pauli,
        st.just(n),
        st.integers(0, (1 << n) - 1),
        st.integers(0, (1 << n) - 1),
        phases,
    )


def test_single_qubit_products():
    x = Pauli.parse("X0")
    y = Pauli.parse("Y0")
    z = Pauli.parse("Z0")
    assert str(x * y) == "iZ0"
    assert str(y * z) == "iX0"
    assert str(z * x) == "iY0"
    assert str(y * x) == "-iZ0"


def test_identity_element():
    p = Pauli.parse("-X0Z2")
    assert p * Pauli.identity(3) == p
    assert Pauli.identity(3) * p == p


def test_hermitian_square_is_identity():
    p = Pauli.parse("X0Z1")
    assert p * p == Pauli.identity(2)


def test_commutator_examples():
    assert commutator(Pauli.parse("X0"), Pauli.parse("Z0")) == 1
    assert commutator(Pauli.parse("X0Z1"), Pauli.parse("Z0X1")) == 0
    p = Pauli.parse("Y0X2", 3)
    assert commutator(p, Pauli.identity(3)) == 0


def test_hermitian_product_examples():
    assert str(herm_product(Pauli.parse("X0"), Pauli.parse("Y0"))) == "Z0"
    assert str(herm_product(Pauli.parse("Z0", 2), Pauli.parse("Z1", 2))) == "Z0Z1"
    assert str(herm_product(Pauli.parse("-X0"), Pauli.parse("Y0"))) == "-Z0"


def test_support_weight_hermiticity():
    p = Pauli.parse("X0Z2")
    assert p.support() == (0, 2)
    assert p.weight() == 2
    assert Pauli.identity(4).weight() == 0
    assert not Pauli.parse("iX0").is_hermitian()
    assert Pauli.parse("-Y1").is_hermitian()


def test_width_mismatch_raises():
    with pytest.raises(PauliError):
        Pauli.parse("X0").mul(Pauli.parse("X0", 2))
    with pytest.raises(PauliError):
        commutator(Pauli.identity(1), Pauli.identity(3))


def test_herm_product_rejects_non_hermitian():
    with pytest.raises(PauliError):
        herm_product(Pauli.parse("iX0"), Pauli.parse("Z0"))


def test_parse_render_round_trip(rng):
    for _ in range(300):
        p = random_pauli(rng, rng.randrange(1, 6))
        assert Pauli.parse(str(p), p.n) == p


def test_parse_rejects_garbage():
    for bad in ("", "Q0", "X", "X0Y", "ii", "--X0"):
        with pytest.raises(PauliError):
            Pauli.parse(bad)


@settings(max_examples=200)
@given(paulis(), paulis())
def test_commutation_sign_exact(p, q):
    lhs = p * q
    rhs = q * p
    if commutator(p, q):
        rhs = rhs.negate()
    assert lhs == rhs


@settings(max_examples=200)
@given(paulis(), paulis(), paulis())
def test_commutator_bilinear(p, q, r):
    assert commutator(p * q, r) == commutator(p, r) ^ commutator(q, r)


@settings(max_examples=200)
@given(paulis(hermitian=True), paulis(hermitian=True))
def test_herm_product_closure(p, q):
    assert herm_product(p, q).is_hermitian()


@settings(max_examples=150, deadline=None)
@given(paulis(n=3), paulis(n=3))
def test_matrix_oracle_product(p, q):
    assert np.array_equal((p * q).to_matrix(), p.to_matrix() @ q.to_matrix())


def test_matrix_oracle_four_qubits():
    rng = random.Random(7)
    for _ in range(25):
        p = random_pauli(rng, 4)
        q = random_pauli(rng, 4)
        assert np.array_equal((p * q).to_matrix(), p.to_matrix() @ q.to_matrix())


def test_dagger_and_negate():
    p = Pauli.parse("iX0Z1")
    assert p.dagger() == Pauli.parse("-iX0Z1")
    assert p.negate() == Pauli.parse("-iX0Z1").dagger().negate().dagger().negate()
    assert np.array_equal(p.dagger().to_matrix(), p.to_matrix().conj().T)


def test_width_cap():
    with pytest.raises(PauliError):
        Pauli.identity(5000)
