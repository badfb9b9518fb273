import math
import random

import pytest

from pcoast import Pauli, PauliFrame, compose, from_gate
from pcoast.nodes import Measurement, MsfNode, Preparation, Rotation

CLIFFORD_MENU = ("h", "s", "sdg", "x", "y", "z", "cnot", "cz", "swap")

# the two-qubit circuit of the paper's worked example (theta1/2/3 = .3/.5/.7)
FIG1_TEXT = """
qubits 2
cbits 2
prepz q0
prepz q1
rx(0.3) q0
h q1
cnot q1 q0
rx(0.5) q0
cnot q0 q1
rx(0.7) q0
measz q0 -> c0
measz q1 -> c1
"""


def random_pauli(rng: random.Random, n: int, hermitian: bool = False) -> Pauli:
    phase = rng.choice((0, 2)) if hermitian else rng.randrange(4)
    return Pauli(n, rng.randrange(1 << n), rng.randrange(1 << n), phase)


def random_nonidentity_pauli(rng: random.Random, n: int) -> Pauli:
    while True:
        p = random_pauli(rng, n, hermitian=True)
        if not p.is_identity():
            return p


def random_frame(rng: random.Random, n: int, depth: int | None = None) -> PauliFrame:
    """Well-formed by construction: fold random Clifford gates."""
    f = PauliFrame.identity(n)
    for _ in range(depth if depth is not None else 3 * n):
        kind = rng.choice(CLIFFORD_MENU)
        if kind in ("cnot", "cz", "swap"):
            if n < 2:
                continue
            qubits = tuple(rng.sample(range(n), 2))
        else:
            qubits = (rng.randrange(n),)
        f = compose(from_gate(kind, qubits, n), f)
    return f


def random_anticommuting_pair(rng: random.Random, n: int) -> tuple[Pauli, Pauli]:
    while True:
        p = random_pauli(rng, n, hermitian=True)
        q = random_pauli(rng, n, hermitian=True)
        if p.commutator(q) == 1:
            return p, q


def random_node(rng: random.Random, n: int, cvar_pool=None):
    kind = rng.choice(("rot", "prep", "meas"))
    if kind == "rot":
        return Rotation(
            random_nonidentity_pauli(rng, n).positive(),
            rng.uniform(0.1, 2 * math.pi - 0.1),
        )
    if kind == "meas":
        cvar = rng.randrange(100) if cvar_pool is None else rng.choice(cvar_pool)
        return Measurement(random_nonidentity_pauli(rng, n), cvar)
    pz, px = random_anticommuting_pair(rng, n)
    return Preparation(pz, px)


@pytest.fixture
def rng():
    return random.Random(20240817)
