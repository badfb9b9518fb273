import random

import numpy as np
import pytest

from pcoast import Pauli, PauliFrame, compose, from_gate, inverse, pauli_frame, tqe_frame
from pcoast.frame import FrameError, rotation_frame
from pcoast.sim import frame_unitary

from conftest import random_frame, random_pauli


def P(text, n=None):
    return Pauli.parse(text, n)


def test_identity_frame():
    f = PauliFrame.identity(2)
    assert f.row(0) == (P("Z0", 2), P("X0", 2))
    assert f.row(1) == (P("Z1", 2), P("X1", 2))
    for s in ("X0", "-Z1", "Y0X1"):
        assert f.lookup(P(s, 2)) == P(s, 2)
    assert compose(f, from_gate("cnot", (0, 1), 2)) == from_gate("cnot", (0, 1), 2)


def test_cnot_golden_table():
    f = from_gate("cnot", (0, 1), 2)
    assert f.lookup(P("Z0", 2)) == P("Z0", 2)
    assert f.lookup(P("Z1", 2)) == P("Z0Z1", 2)
    assert f.lookup(P("X0", 2)) == P("X0X1", 2)
    assert f.lookup(P("X1", 2)) == P("X1", 2)
    assert f.lookup(P("Y0", 2)) == P("Y0X1", 2)
    assert f.lookup(P("Y1", 2)) == P("Z0Y1", 2)


def test_tqe_zx_equals_cnot():
    assert tqe_frame("Z", "X", 0, 1, 2) == from_gate("cnot", (0, 1), 2)
    assert tqe_frame("Z", "Z", 0, 1, 2) == from_gate("cz", (0, 1), 2)


def test_hadamard_swaps_basis():
    f = from_gate("h", (0,), 2)
    assert f.lookup(P("Z0", 2)) == P("X0", 2)
    assert f.lookup(P("X0", 2)) == P("Z0", 2)
    assert f.lookup(P("Y0", 2)) == P("-Y0", 2)
    assert not f.fixes(P("Z0", 2))


def test_fixes_pauli():
    assert PauliFrame.identity(3).fixes(P("X0Z2", 3))
    assert from_gate("cnot", (0, 1), 2).fixes(P("Z0", 2))


def test_fig1_frame_fold_golden():
    f = PauliFrame.identity(2)
    for gate, qubits in (("h", (1,)), ("cnot", (1, 0)), ("cnot", (0, 1))):
        f = compose(from_gate(gate, qubits, 2), f)
    assert f.row(0) == (P("Z0X1", 2), P("Z1", 2))
    assert f.row(1) == (P("Z0", 2), P("X0Z1", 2))
    # the measurement of the second qubit maps onto the first
    assert f.lookup(P("Z1", 2)) == P("Z0", 2)


def test_compose_with_identity_and_self_inverse():
    f = random_frame(random.Random(5), 3)
    ident = PauliFrame.identity(3)
    assert compose(f, ident) == f
    assert compose(ident, f) == f
    cnot = from_gate("cnot", (0, 1), 2)
    assert compose(cnot, cnot) == PauliFrame.identity(2)


def test_inverse_identity_and_s():
    assert inverse(PauliFrame.identity(3)) == PauliFrame.identity(3)
    assert inverse(from_gate("s", (0,), 1)) == from_gate("sdg", (0,), 1)


def test_inverse_random_frames(rng):
    for _ in range(100):
        n = rng.randrange(1, 5)
        f = random_frame(rng, n)
        inv = inverse(f)
        assert compose(f, inv) == PauliFrame.identity(n)
        assert compose(inv, f) == PauliFrame.identity(n)


def test_rotation_frame_quarter_turns():
    z = P("Z0")
    assert rotation_frame(z, 0) == PauliFrame.identity(1)
    assert rotation_frame(z, 2) == pauli_frame(z)
    assert rotation_frame(z, 1) == from_gate("s", (0,), 1)
    assert rotation_frame(z, 3) == from_gate("sdg", (0,), 1)
    assert rotation_frame(z.negate(), 1) == from_gate("sdg", (0,), 1)


def test_from_gate_errors():
    with pytest.raises(FrameError):
        from_gate("toffoli", (0, 1), 3)
    with pytest.raises(FrameError):
        from_gate("h", (4,), 2)
    with pytest.raises(FrameError):
        tqe_frame("Z", "Z", 1, 1, 2)


def test_wellformedness(rng):
    for _ in range(30):
        f = random_frame(rng, rng.randrange(1, 5))
        assert f.is_wellformed()
    bad = PauliFrame(1, (P("Z0"),), (P("Z0"),))
    assert not bad.is_wellformed()


def test_lookup_rejects_non_hermitian():
    with pytest.raises(FrameError):
        PauliFrame.identity(1).lookup(P("iX0"))


def test_commutativity_preservation_and_multiplicativity(rng):
    """Exact algebra suite on 1000 random frame/Pauli triples."""
    for _ in range(1000):
        n = rng.randrange(1, 5)
        f = random_frame(rng, n, depth=2 * n + 2)
        p = random_pauli(rng, n, hermitian=True)
        q = random_pauli(rng, n, hermitian=True)
        assert f.lookup(p).commutator(f.lookup(q)) == p.commutator(q)
        prod = p * q
        if prod.is_hermitian():
            assert f.lookup(prod) == f.lookup(p) * f.lookup(q)


def test_composition_law(rng):
    for _ in range(300):
        n = rng.randrange(1, 4)
        f1 = random_frame(rng, n)
        f2 = random_frame(rng, n)
        p = random_pauli(rng, n, hermitian=True)
        assert compose(f2, f1).lookup(p) == f1.lookup(f2.lookup(p))


def test_unitary_faithfulness(rng):
    """n <= 3: the reconstructed unitary conjugates exactly as lookup says."""
    for _ in range(12):
        n = rng.randrange(1, 4)
        f = random_frame(rng, n)
        u = frame_unitary(f)
        assert np.allclose(u @ u.conj().T, np.eye(1 << n), atol=1e-9)
        for _ in range(5):
            p = random_pauli(rng, n, hermitian=True)
            got = u.conj().T @ p.to_matrix() @ u
            assert np.allclose(got, f.lookup(p).to_matrix(), atol=1e-9)


def test_render_matrix_shape():
    text = from_gate("cnot", (0, 1), 2).render()
    assert text.splitlines() == ["( Z0    X0X1 )", "( Z0Z1  X1 )"]
