"""Benchmark circuit families: QFT, Grover diffusion, hardware-efficient
ansatz, MaxCut QAOA ansatz on random graphs, and seeded random circuits."""

from __future__ import annotations

import math
import random

from .circuit import Circuit, Gate


def _cp(theta: float, a: int, b: int) -> list[Gate]:
    """Controlled phase via two CNOTs and three Z rotations."""
    return [
        Gate("rz", (a,), (theta / 2,)),
        Gate("rz", (b,), (theta / 2,)),
        Gate("cnot", (a, b)),
        Gate("rz", (b,), (-theta / 2,)),
        Gate("cnot", (a, b)),
    ]


def qft(n: int, reverse_swaps: bool = True) -> Circuit:
    gates: list[Gate] = []
    for i in range(n):
        gates.append(Gate("h", (i,)))
        for j in range(i + 1, n):
            gates.extend(_cp(math.pi / (1 << (j - i)), j, i))
    if reverse_swaps:
        for i in range(n // 2):
            gates.append(Gate("swap", (i, n - 1 - i)))
    return Circuit(n, 0, tuple(gates))


def _multi_controlled_z(qubits: tuple[int, ...]) -> list[Gate]:
    """Phase-polynomial form: one Z-parity rotation per non-empty subset,
    with gray-code CNOT chains building each parity."""
    k = len(qubits)
    if k == 1:
        return [Gate("z", qubits)]
    gates: list[Gate] = []
    for subset in range(1, 1 << k):
        members = [qubits[t] for t in range(k) if (subset >> t) & 1]
        sign = -1.0 if (len(members) % 2 == 0) else 1.0
        angle = sign * math.pi / (1 << (k - 1))
        target = members[-1]
        for q in members[:-1]:
            gates.append(Gate("cnot", (q, target)))
        gates.append(Gate("rz", (target,), (angle,)))
        for q in reversed(members[:-1]):
            gates.append(Gate("cnot", (q, target)))
    return gates


def grover_diffusion(n: int) -> Circuit:
    gates: list[Gate] = []
    for q in range(n):
        gates.append(Gate("h", (q,)))
    for q in range(n):
        gates.append(Gate("x", (q,)))
    gates.extend(_multi_controlled_z(tuple(range(n))))
    for q in range(n):
        gates.append(Gate("x", (q,)))
    for q in range(n):
        gates.append(Gate("h", (q,)))
    return Circuit(n, 0, tuple(gates))


def hea(n: int, layers: int = 2, arrangement: str = "linear", seed: int = 0) -> Circuit:
    rng = random.Random(seed)
    if arrangement not in ("linear", "circular", "full"):
        raise ValueError(f"unknown arrangement {arrangement!r}")
    gates: list[Gate] = []
    for _ in range(layers):
        for q in range(n):
            gates.append(Gate("ry", (q,), (rng.uniform(0, 2 * math.pi),)))
            gates.append(Gate("rz", (q,), (rng.uniform(0, 2 * math.pi),)))
        if arrangement == "full":
            pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
        else:
            pairs = [(q, q + 1) for q in range(n - 1)]
            if arrangement == "circular" and n > 2:
                pairs.append((n - 1, 0))
        for a, b in pairs:
            gates.append(Gate("cnot", (a, b)))
    for q in range(n):
        gates.append(Gate("ry", (q,), (rng.uniform(0, 2 * math.pi),)))
    return Circuit(n, 0, tuple(gates))


def qaoa(n: int, layers: int = 1, edge_prob: float = 0.5, seed: int = 0) -> Circuit:
    rng = random.Random(seed)
    edges = [
        (a, b)
        for a in range(n)
        for b in range(a + 1, n)
        if rng.random() < edge_prob
    ]
    gates: list[Gate] = [Gate("h", (q,)) for q in range(n)]
    for _ in range(layers):
        gamma = rng.uniform(0, 2 * math.pi)
        beta = rng.uniform(0, math.pi)
        for a, b in edges:
            gates.append(Gate("cnot", (a, b)))
            gates.append(Gate("rz", (b,), (2 * gamma,)))
            gates.append(Gate("cnot", (a, b)))
        for q in range(n):
            gates.append(Gate("rx", (q,), (2 * beta,)))
    return Circuit(n, 0, tuple(gates))


_RANDOM_MENU = (
    "prepz",
    "measz",
    "h",
    "s",
    "sdg",
    "x",
    "y",
    "z",
    "t",
    "tdg",
    "rx",
    "ry",
    "rz",
    "cnot",
    "cz",
    "swap",
)


def random_circuit(
    n: int, n_gates: int = 20, seed: int = 0, max_measurements: int | None = None
) -> Circuit:
    """Seeded random circuit over the generic gate set (preparations and
    measurements included)."""
    rng = random.Random(seed)
    n_cbits = max(1, n)
    gates: list[Gate] = []
    measured = 0
    while len(gates) < n_gates:
        kind = rng.choice(_RANDOM_MENU)
        if kind == "measz":
            if max_measurements is not None and measured >= max_measurements:
                continue
            q = rng.randrange(n)
            gates.append(Gate(kind, (q,), (), f"c{rng.randrange(n_cbits)}"))
            measured += 1
        elif kind in ("cnot", "cz", "swap"):
            if n < 2:
                continue
            a, b = rng.sample(range(n), 2)
            gates.append(Gate(kind, (a, b)))
        elif kind in ("rx", "ry", "rz"):
            gates.append(Gate(kind, (rng.randrange(n),), (rng.uniform(0, 2 * math.pi),)))
        else:
            gates.append(Gate(kind, (rng.randrange(n),)))
    return Circuit(n, n_cbits, tuple(gates))


FAMILIES = {
    "qft": lambda n, args: qft(n),
    "grover": lambda n, args: grover_diffusion(n),
    "hea": lambda n, args: hea(n, args.layers, args.arrangement, args.seed),
    "qaoa": lambda n, args: qaoa(n, args.layers, args.edge_prob, args.seed),
    "random": lambda n, args: random_circuit(n, args.gates, args.seed),
}
