"""Classical-quantum state simulator: the desk-scale correctness oracle.

A cq-state maps classical variable assignments to partial density matrices;
branch traces are outcome probabilities and sum to one.  Node semantics follow
the definitions used by the rewrite rules, with the rotation unitary fixed as
exp(-i*theta/2*P) = cos(theta/2)*I - i*sin(theta/2)*P so the oracle is
internally consistent (conjugation makes the equivalence checks insensitive to
this sign choice).

Hard caps: 8 qubits and 12 measurement operations per run.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .frame import PauliFrame, inverse
from .nodes import (
    FrameNode,
    Measurement,
    MsfNode,
    Node,
    Preparation,
    Rotation,
    render_cvar,
)
from .pauli import Pauli

MAX_SIM_QUBITS = 8
MAX_MEASUREMENTS = 12
PRUNE_TOL = 1e-12

Assignment = frozenset  # of (cvar, bit) pairs


class SimError(ValueError):
    pass


def _key(m: dict) -> Assignment:
    return frozenset(m.items())


@dataclass
class CqState:
    n_qubits: int
    branches: dict[Assignment, np.ndarray]
    measurements_done: int = 0

    @staticmethod
    def maximally_mixed(n: int) -> "CqState":
        _check_width(n)
        d = 1 << n
        return CqState(n, {_key({}): np.eye(d, dtype=complex) / d})

    @staticmethod
    def zero_state(n: int) -> "CqState":
        _check_width(n)
        d = 1 << n
        rho = np.zeros((d, d), dtype=complex)
        rho[0, 0] = 1.0
        return CqState(n, {_key({}): rho})

    @staticmethod
    def entangled_pairs(n: int) -> "CqState":
        """2n-qubit purification of the maximally mixed n-qubit state.

        Running an n-qubit term on the first register of this state captures
        the whole channel (branch-wise equality here is channel equality).
        """
        _check_width(2 * n)
        d = 1 << n
        psi = np.zeros(d * d, dtype=complex)
        for i in range(d):
            psi[i * d + i] = 1.0 / math.sqrt(d)
        return CqState(2 * n, {_key({}): np.outer(psi, psi.conj())})

    def total_trace(self) -> float:
        return float(sum(np.trace(rho).real for rho in self.branches.values()))

    def copy(self) -> "CqState":
        return CqState(
            self.n_qubits,
            {k: v.copy() for k, v in self.branches.items()},
            self.measurements_done,
        )

    def pruned(self) -> "CqState":
        kept = {
            k: v
            for k, v in self.branches.items()
            if abs(np.trace(v).real) >= PRUNE_TOL
        }
        return CqState(self.n_qubits, kept, self.measurements_done)

    def render(self) -> str:
        lines = []
        for k in sorted(self.branches, key=_assignment_sort_key):
            m = dict(k)
            named = ", ".join(
                f"{render_cvar(v)}={m[v]}"
                for v in sorted(m, key=lambda c: (isinstance(c, str), str(c)))
            )
            lines.append(f"{{{named}}}: trace {np.trace(self.branches[k]).real:.6f}")
        return "\n".join(lines)


def _assignment_sort_key(k: Assignment):
    return tuple(sorted((str(var), bit) for var, bit in k))


def _check_width(n: int) -> None:
    if n > MAX_SIM_QUBITS:
        raise SimError(f"simulator capped at {MAX_SIM_QUBITS} qubits (got {n})")


def frame_unitary(f: PauliFrame) -> np.ndarray:
    """A unitary U with U†·P·U = lookup(F, P), fixed up to global phase.

    Column 0 spans the rank-1 projector prod_j (I + U·Z_j·U†)/2 where
    U·Z_j·U† comes from the inverse frame; the remaining columns follow from
    the inverse images of the X_j.
    """
    n = f.n
    d = 1 << n
    inv = inverse(f)
    proj = np.eye(d, dtype=complex)
    for j in range(n):
        proj = proj @ (np.eye(d, dtype=complex) + inv.zs[j].to_matrix()) / 2.0
    col = int(np.argmax(np.abs(np.diag(proj))))
    psi0 = proj[:, col]
    psi0 = psi0 / np.linalg.norm(psi0)
    inv_x = [inv.xs[j].to_matrix() for j in range(n)]
    u = np.zeros((d, d), dtype=complex)
    for b in range(d):
        op = np.eye(d, dtype=complex)
        for j in range(n):
            if (b >> (n - 1 - j)) & 1:  # qubit 0 is the most significant bit
                op = op @ inv_x[j]
        u[:, b] = op @ psi0
    return u


def rotation_unitary(p: Pauli, theta: float) -> np.ndarray:
    d = 1 << p.n
    return math.cos(theta / 2) * np.eye(d, dtype=complex) - 1j * math.sin(
        theta / 2
    ) * p.to_matrix()


def apply_node(state: CqState, node: Node) -> CqState:
    n = state.n_qubits
    if isinstance(node, Rotation):
        u = rotation_unitary(node.pauli.embed(n), node.theta)
        return _conjugate(state, u)
    if isinstance(node, FrameNode):
        fr = node.frame
        if fr.n < n:
            fr = _embed_frame(fr, n)
        u = frame_unitary(fr)
        return _conjugate(state, u)
    if isinstance(node, Preparation):
        d = 1 << n
        eye = np.eye(d, dtype=complex)
        pz = node.p_z.embed(n).to_matrix()
        px = node.p_x.embed(n).to_matrix()
        plus = eye + pz
        minus = eye - pz
        out = {}
        for k, rho in state.branches.items():
            out[k] = (plus @ rho @ plus + px @ minus @ rho @ minus @ px) / 4.0
        return CqState(n, out, state.measurements_done)
    if isinstance(node, Measurement):
        if state.measurements_done + 1 > MAX_MEASUREMENTS:
            raise SimError(f"simulator capped at {MAX_MEASUREMENTS} measurements")
        d = 1 << n
        eye = np.eye(d, dtype=complex)
        pm = node.pauli.embed(n).to_matrix()
        projs = {0: (eye + pm) / 2.0, 1: (eye - pm) / 2.0}
        out: dict[Assignment, np.ndarray] = {}
        for k, rho in state.branches.items():
            m = dict(k)
            for bit, proj in projs.items():
                m2 = dict(m)
                m2[node.cvar] = bit
                k2 = _key(m2)
                contrib = proj @ rho @ proj
                if k2 in out:
                    out[k2] = out[k2] + contrib
                else:
                    out[k2] = contrib
        return CqState(n, out, state.measurements_done + 1).pruned()
    if isinstance(node, MsfNode):
        out = {}
        for k, rho in state.branches.items():
            try:
                m2 = node.msf.apply(dict(k))
            except KeyError as e:
                raise SimError(f"measurement-space function reads unset {e}") from None
            k2 = _key(m2)
            if k2 in out:
                out[k2] = out[k2] + rho
            else:
                out[k2] = rho
        return CqState(n, out, state.measurements_done)
    raise SimError(f"cannot simulate {type(node).__name__}")


def _conjugate(state: CqState, u: np.ndarray) -> CqState:
    ud = u.conj().T
    return CqState(
        state.n_qubits,
        {k: u @ rho @ ud for k, rho in state.branches.items()},
        state.measurements_done,
    )


def _embed_frame(f: PauliFrame, n: int) -> PauliFrame:
    zs = [z.embed(n) for z in f.zs] + [Pauli.single(n, q, "Z") for q in range(f.n, n)]
    xs = [x.embed(n) for x in f.xs] + [Pauli.single(n, q, "X") for q in range(f.n, n)]
    return PauliFrame(n, tuple(zs), tuple(xs))


def run_nodes(nodes, n_qubits: int, initial: CqState | None = None) -> CqState:
    state = initial.copy() if initial is not None else CqState.maximally_mixed(n_qubits)
    if state.n_qubits < n_qubits:
        raise SimError("initial state narrower than the term being run")
    for node in nodes:
        state = apply_node(state, node)
    return state


def run_circuit(circuit, initial: CqState | None = None) -> CqState:
    from .circuit import lower_gate

    nodes = []
    for g in circuit.gates:
        nodes.extend(lower_gate(g, circuit.n_qubits))
    n = initial.n_qubits if initial is not None else circuit.n_qubits
    return run_nodes(nodes, n, initial)


def run_program(prog, initial: CqState | None = None) -> CqState:
    """Graph in topological order, then the terminal frame, then the terminal μ."""
    nodes = [prog.graph.node(i) for i in prog.graph.topological_order()]
    if not prog.frame.is_identity():
        nodes.append(FrameNode(prog.frame))
    if not prog.msf.is_empty():
        nodes.append(MsfNode(prog.msf))
    n = initial.n_qubits if initial is not None else prog.n_qubits
    return run_nodes(nodes, n, initial)


def restrict(state: CqState, variables) -> CqState:
    """Marginalize branch keys onto ``variables`` (summing merged branches)."""
    keep = set(variables)
    out: dict[Assignment, np.ndarray] = {}
    for k, rho in state.branches.items():
        k2 = frozenset((v, b) for v, b in k if v in keep)
        if k2 in out:
            out[k2] = out[k2] + rho
        else:
            out[k2] = rho.copy()
    return CqState(state.n_qubits, out, state.measurements_done)


def equiv_hold(a: CqState, b: CqState, tol: float = 1e-9) -> bool:
    """Branch-wise matrix equality (missing branches compare as zero)."""
    if a.n_qubits != b.n_qubits:
        return False
    zero = np.zeros((1 << a.n_qubits,) * 2, dtype=complex)
    for k in set(a.branches) | set(b.branches):
        da = a.branches.get(k, zero)
        db = b.branches.get(k, zero)
        if np.max(np.abs(da - db)) > tol:
            return False
    return True


def equiv_release(a: CqState, b: CqState, tol: float = 1e-9) -> bool:
    """Per-assignment trace equality (missing branches compare as trace 0)."""
    keys = set(a.branches) | set(b.branches)
    for k in keys:
        ta = np.trace(a.branches[k]).real if k in a.branches else 0.0
        tb = np.trace(b.branches[k]).real if k in b.branches else 0.0
        if abs(ta - tb) > tol:
            return False
    return True
