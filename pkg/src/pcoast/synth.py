"""Greedy circuit synthesis from an optimized program.

Nodes are priced by the number of two-qubit entanglers needed to shrink them
to a single qubit: rotations and measurements (singlets) cost weight-1, while
preparations and frame rows (factors, anticommuting pairs) are priced through
their per-qubit 2x2 commutation fingerprints.  The search repeatedly emits
every directly-implementable dependency-free node, then picks the cheapest
remaining node and the entangler that best reduces everything else.

All entanglers are drawn from the nine two-qubit controlled-Pauli Cliffords
per qubit pair (CNOT and CZ among them); candidate gates come from exhaustive
enumeration, which doubles as a check of the published 2/6/1 clearing-gate
counts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .circuit import Circuit, Gate
from .frame import PauliFrame, compose, from_gate, pauli_frame, rotation_frame, tqe_frame
from .graph import CompiledProgram, PcoastGraph
from .nodes import (
    Measurement,
    Msf,
    Preparation,
    Rotation,
    push_through_frame,
)
from .opt import eliminate_measurements
from .pauli import Pauli

HALF_PI = math.pi / 2


class SynthError(ValueError):
    pass


@dataclass(frozen=True, slots=True)
class TqeGate:
    """Two-qubit entangling Clifford: controlled-(sigma2 on j) in the sigma1
    basis of i.  Canonical form keeps i < j; CNOT is (Z, X), CZ is (Z, Z)."""

    sigma1: str
    sigma2: str
    i: int
    j: int

    def canonical(self) -> "TqeGate":
        if self.i > self.j:
            return TqeGate(self.sigma2, self.sigma1, self.j, self.i)
        return self

    def frame(self, n: int) -> PauliFrame:
        return tqe_frame(self.sigma1, self.sigma2, self.i, self.j, n)

    def sort_key(self):
        return (self.i, self.j, self.sigma1, self.sigma2)


@dataclass(frozen=True)
class SearchConfig:
    parallelization_credit: float = 1.0
    free_node_weighting: bool = False
    gateset: str = "generic"
    seed: int = 0
    emit_swaps: bool = False

    def __post_init__(self):
        if self.gateset not in ("generic", "native"):
            raise SynthError(f"unknown gateset {self.gateset!r}")


@dataclass(frozen=True, slots=True)
class LocalFrameRow:
    """A terminal-frame row treated as a factor node during finalization."""

    p_z: Pauli
    p_x: Pauli
    row: int


@dataclass(frozen=True)
class SynthResult:
    circuit: Circuit
    msf: Msf
    permutation: tuple[int, ...]


# -- costs ---------------------------------------------------------------------


def local_support(p: Pauli, q: Pauli, i: int) -> tuple[tuple[int, int], tuple[int, int]]:
    """[[λ(P,X_i), λ(P,Z_i)], [λ(Q,X_i), λ(Q,Z_i)]]"""
    n = p.n
    xi = Pauli.single(n, i, "X")
    zi = Pauli.single(n, i, "Z")
    return (
        (p.commutator(xi), p.commutator(zi)),
        (q.commutator(xi), q.commutator(zi)),
    )


def local_determinant(m: tuple[tuple[int, int], tuple[int, int]]) -> int:
    return (m[0][0] & m[1][1]) ^ (m[0][1] & m[1][0])


def support_class(p: Pauli, q: Pauli, i: int) -> str:
    m = local_support(p, q, i)
    if m == ((0, 0), (0, 0)):
        return "none"
    return "strong" if local_determinant(m) else "weak"


def factor_cost(p: Pauli, q: Pauli) -> int:
    dets = 0
    nonzero = 0
    union = p.x | p.z | q.x | q.z
    for i in range(p.n):
        if not (union >> i) & 1:
            continue
        m = local_support(p, q, i)
        if m != ((0, 0), (0, 0)):
            nonzero += 1
        dets += local_determinant(m)
    return (dets - 1) // 2 + (nonzero - 1)


def node_cost(node) -> int:
    if isinstance(node, (Rotation, Measurement)):
        return node.pauli.weight() - 1
    if isinstance(node, (Preparation, LocalFrameRow)):
        return factor_cost(node.p_z, node.p_x)
    raise SynthError(f"no cost defined for {type(node).__name__}")


def _width(node) -> int:
    return node.pauli.n if isinstance(node, (Rotation, Measurement)) else node.p_z.n


def _support_bits(node) -> int:
    if isinstance(node, (Rotation, Measurement)):
        return node.pauli.x | node.pauli.z
    return node.p_z.x | node.p_z.z | node.p_x.x | node.p_x.z


def _push_any(fr: PauliFrame, node):
    if isinstance(node, LocalFrameRow):
        return LocalFrameRow(fr.lookup(node.p_z), fr.lookup(node.p_x), node.row)
    return push_through_frame(fr, node)


def reduce_node(node) -> list[TqeGate]:
    """All entanglers that strictly cut the node's cost, by trying each of the
    nine controlled-Pauli gates on every supported qubit pair."""
    cost = node_cost(node)
    if cost <= 0:
        raise SynthError("reduce_node needs a positive-cost node")
    n = _width(node)
    bits = _support_bits(node)
    support = [q for q in range(n) if (bits >> q) & 1]
    out = []
    for a in range(len(support)):
        for b in range(a + 1, len(support)):
            i, j = support[a], support[b]
            for s1 in "XYZ":
                for s2 in "XYZ":
                    gate = TqeGate(s1, s2, i, j)
                    if node_cost(_push_any(gate.frame(n), node)) < cost:
                        out.append(gate)
    out.sort(key=TqeGate.sort_key)
    return out


# -- single-qubit Clifford words -------------------------------------------------

_GENERIC_1Q = ("h", "s", "sdg", "x", "y", "z")
_NATIVE_1Q = (
    ("rxy", (HALF_PI, 0.0)),
    ("rxy", (-HALF_PI, 0.0)),
    ("rxy", (HALF_PI, HALF_PI)),
    ("rxy", (-HALF_PI, HALF_PI)),
    ("rxy", (math.pi, 0.0)),
    ("rxy", (math.pi, HALF_PI)),
)


_INVERSE_1Q = {"s": "sdg", "sdg": "s"}


def _push_frame(spec, q: int, n: int) -> PauliFrame:
    """Frame of the generator's INVERSE: emitting gate g rewrites the
    remainder through frame(g^-1) (g; frame(g^-1) is the identity)."""
    if isinstance(spec, str):
        return from_gate(_INVERSE_1Q.get(spec, spec), (q,), n)
    theta, phi = spec[1]
    axis = "X" if phi == 0.0 else "Y"
    return rotation_frame(Pauli.single(n, q, axis), -round(theta / HALF_PI))


def _gen_gate(spec, q: int) -> Gate:
    if isinstance(spec, str):
        return Gate(spec, (q,))
    return Gate(spec[0], (q,), spec[1])


def _build_words(gateset: str) -> list[tuple[tuple, PauliFrame]]:
    """All 24 single-qubit Cliffords as shortest generator words, each paired
    with the net one-qubit push action of applying the word in order.

    lookup(compose(F2, F1), P) = lookup(F1, lookup(F2, P)), so appending a
    generator composes its push frame on the right.
    """
    generators = _GENERIC_1Q if gateset == "generic" else _NATIVE_1Q
    seen: dict[tuple[str, str], tuple[tuple, PauliFrame]] = {}
    frontier: list[tuple[tuple, PauliFrame]] = [((), PauliFrame.identity(1))]
    z0 = Pauli.single(1, 0, "Z")
    x0 = Pauli.single(1, 0, "X")
    while frontier and len(seen) < 24:
        next_frontier = []
        for word, fr in frontier:
            sig = (str(fr.lookup(z0)), str(fr.lookup(x0)))
            if sig in seen:
                continue
            seen[sig] = (word, fr)
            for spec in generators:
                next_frontier.append((word + (spec,), compose(fr, _push_frame(spec, 0, 1))))
        frontier = next_frontier
    if len(seen) < 24:
        raise SynthError("single-qubit Clifford table incomplete")
    return sorted(seen.values(), key=lambda wf: (len(wf[0]), str(wf[0])))


_WORD_TABLES: dict[str, list] = {}


def _words(gateset: str) -> list:
    if gateset not in _WORD_TABLES:
        _WORD_TABLES[gateset] = _build_words(gateset)
    return _WORD_TABLES[gateset]


def _find_word(gateset: str, predicate) -> tuple:
    for word, fr in _words(gateset):
        if predicate(fr):
            return word
    raise SynthError("no single-qubit Clifford satisfies the request")


def _single_letter(p: Pauli) -> Pauli:
    """A weight-1 Pauli re-expressed on one qubit (keeping its sign)."""
    (q,) = p.support()
    return Pauli(1, (p.x >> q) & 1, (p.z >> q) & 1, p.phase)


# -- synthesis state --------------------------------------------------------------


class SynthState:
    """Circuit under construction plus the transformed remainder.

    Invariant: emitted-gates ; remaining-nodes ; terminal-frame is equivalent
    to what was loaded, with ``subst`` relating graph measurement variables to
    emitted circuit variables.
    """

    def __init__(self, n_qubits: int, cfg: SearchConfig, frame: PauliFrame):
        self.n = n_qubits
        self.cfg = cfg
        self.frame = frame
        self.use_frame_penalty = True
        self.gates: list[Gate] = []
        self.frontier = [0] * max(n_qubits, 1)
        self.subst: dict = {}
        self.out_vars = 0
        self.nodes: dict[int, object] = {}
        self._succ: dict[int, set[int]] = {}
        self._pred: dict[int, set[int]] = {}

    # dependency bookkeeping

    def load_graph(self, graph: PcoastGraph) -> None:
        self.nodes = {nid: graph.node(nid) for nid in graph.node_ids()}
        self._succ = {nid: set(graph.successors(nid)) for nid in self.nodes}
        self._pred = {nid: set(graph.predecessors(nid)) for nid in self.nodes}

    def load_free_nodes(self, nodes) -> None:
        self.nodes = dict(enumerate(nodes))
        self._succ = {nid: set() for nid in self.nodes}
        self._pred = {nid: set() for nid in self.nodes}

    def begin_ids(self) -> list[int]:
        return sorted(nid for nid, pred in self._pred.items() if not pred)

    def end_ids(self) -> set[int]:
        return {nid for nid, succ in self._succ.items() if not succ}

    def remove(self, nid: int) -> None:
        del self.nodes[nid]
        for s in self._succ.pop(nid):
            self._pred[s].discard(nid)
        for p in self._pred.pop(nid):
            self._succ[p].discard(nid)

    # gate plumbing

    def depth(self) -> int:
        return max(self.frontier) if self.frontier else 0

    def _emit(self, gate: Gate) -> None:
        self.gates.append(gate)
        slot = max(self.frontier[q] for q in gate.qubits) + 1
        for q in gate.qubits:
            self.frontier[q] = slot

    def absorb_frame(self, fr: PauliFrame) -> None:
        """Push a Clifford into the remainder without emitting a gate."""
        for nid in self.nodes:
            self.nodes[nid] = _push_any(fr, self.nodes[nid])
        self.frame = compose(self.frame, fr)

    def emit_clifford(self, gate: Gate, fr: PauliFrame) -> None:
        self._emit(gate)
        self.absorb_frame(fr)

    def apply_word(self, word, q: int) -> None:
        for spec in word:
            self.emit_clifford(_gen_gate(spec, q), _push_frame(spec, q, self.n))

    def add_tqe(self, gate: TqeGate) -> None:
        gate = gate.canonical()
        pair = (gate.sigma1, gate.sigma2)
        if pair == ("Z", "Z"):
            self.emit_clifford(Gate("cz", (gate.i, gate.j)), gate.frame(self.n))
            return
        if self.cfg.gateset == "generic":
            if pair == ("Z", "X"):
                self.emit_clifford(Gate("cnot", (gate.i, gate.j)), gate.frame(self.n))
                return
            if pair == ("X", "Z"):
                self.emit_clifford(Gate("cnot", (gate.j, gate.i)), gate.frame(self.n))
                return
        # asymmetric expansion: per-qubit basis changes whose push action
        # sends sigma to +Z, then a CZ; the trailing conjugation half stays
        # absorbed in the remainder
        z0 = Pauli.single(1, 0, "Z")
        for sigma, q in ((gate.sigma1, gate.i), (gate.sigma2, gate.j)):
            if sigma != "Z":
                target = Pauli.single(1, 0, sigma)
                word = _find_word(
                    self.cfg.gateset, lambda fr, t=target: fr.lookup(t) == z0
                )
                self.apply_word(word, q)
        self.emit_clifford(
            Gate("cz", (gate.i, gate.j)), tqe_frame("Z", "Z", gate.i, gate.j, self.n)
        )

    # cost model

    def gate_cost(self, g: TqeGate) -> float:
        """Weighted mean node-cost change, plus the terminal-frame penalty,
        minus the parallelization credit when the gate fits the current
        schedule without extending it."""
        n = self.n
        fr = g.frame(n)
        mask = (1 << g.i) | (1 << g.j)
        total = len(self.nodes)
        cost = 0.0
        if total:
            begin = set(self.begin_ids()) if self.cfg.free_node_weighting else set()
            delta = 0.0
            for nid in self.nodes:
                node = self.nodes[nid]
                if not (_support_bits(node) & mask):
                    continue
                w = total / len(begin) if (begin and nid in begin) else 1.0
                delta += w * (node_cost(_push_any(fr, node)) - node_cost(node))
            cost += delta / total
        if self.use_frame_penalty and n:
            fdelta = 0.0
            for j in range(n):
                z, x = self.frame.row(j)
                if not ((z.x | z.z | x.x | x.z) & mask):
                    continue
                fdelta += factor_cost(fr.lookup(z), fr.lookup(x)) - factor_cost(z, x)
            cost += fdelta / n
        credit = self.cfg.parallelization_credit
        if credit and max(self.frontier[g.i], self.frontier[g.j]) < self.depth():
            cost -= credit
        return cost

    # directly-implementable nodes

    def fresh_out_var(self) -> str:
        v = f"c{self.out_vars}"
        self.out_vars += 1
        return v

    def _steer(self, nid: int, want_pair: bool) -> int:
        """Apply single-qubit Cliffords until the node's Pauli is exactly
        +Z_q (for factors, additionally its partner +X_q).  Returns q."""
        node = self.nodes[nid]
        if isinstance(node, (Rotation, Measurement)):
            (q,) = node.pauli.support()
            target = _single_letter(node.pauli)
            z0 = Pauli.single(1, 0, "Z")
            word = _find_word(self.cfg.gateset, lambda fr: fr.lookup(target) == z0)
            self.apply_word(word, q)
            return q
        (q,) = sorted(
            set(node.p_z.support()) | set(node.p_x.support())
        )
        tz = _single_letter(node.p_z)
        tx = _single_letter(node.p_x)
        z0 = Pauli.single(1, 0, "Z")
        x0 = Pauli.single(1, 0, "X")
        if want_pair:
            word = _find_word(
                self.cfg.gateset,
                lambda fr: fr.lookup(tz) == z0 and fr.lookup(tx) == x0,
            )
        else:
            word = _find_word(self.cfg.gateset, lambda fr: fr.lookup(tz) == z0)
        self.apply_word(word, q)
        return q

    def emit_rotation_gate(self, q: int, letter: str, theta: float) -> None:
        if self.cfg.gateset == "generic":
            self._emit(Gate("r" + letter.lower(), (q,), (theta,)))
            return
        if letter == "X":
            self._emit(Gate("rxy", (q,), (theta, 0.0)))
        elif letter == "Y":
            self._emit(Gate("rxy", (q,), (theta, HALF_PI)))
        else:
            # RZ(theta) = X · RXY(pi, -theta/2); the X is absorbed
            self._emit(Gate("rxy", (q,), (math.pi, -theta / 2.0)))
            self.absorb_frame(pauli_frame(Pauli.single(self.n, q, "X")))

    def emit_node(self, nid: int) -> int | None:
        """Emit a cost-0 node as concrete gates and drop it.  Returns the
        physical qubit a frame row landed on (else None)."""
        node = self.nodes[nid]
        landed = None
        if isinstance(node, Rotation):
            (q,) = node.pauli.support()
            self.emit_rotation_gate(q, node.pauli.letter(q), node.theta)
        elif isinstance(node, Measurement):
            q = self._steer(nid, want_pair=False)
            out = self.fresh_out_var()
            self.subst[self.nodes[nid].cvar] = (frozenset([out]), 0)
            self._emit(Gate("measz", (q,), (), out))
        elif isinstance(node, Preparation):
            q = self._steer(nid, want_pair=False)
            self._emit(Gate("prepz", (q,)))
        elif isinstance(node, LocalFrameRow):
            landed = self._steer(nid, want_pair=True)
        else:
            raise SynthError(f"cannot emit {type(node).__name__}")
        self.remove(nid)
        return landed

    # the main loop

    def run_search(self, defer_end_measurements: bool) -> dict[int, int]:
        """Alg-2 style loop; returns {row-index: landed qubit} for frame rows."""
        landings: dict[int, int] = {}
        while True:
            progress = True
            while progress:
                progress = False
                for nid in self.begin_ids():
                    node = self.nodes[nid]
                    if node_cost(node) != 0:
                        continue
                    if (
                        defer_end_measurements
                        and isinstance(node, Measurement)
                        and nid in self.end_ids()
                    ):
                        continue
                    row = node.row if isinstance(node, LocalFrameRow) else None
                    landed = self.emit_node(nid)
                    if row is not None:
                        landings[row] = landed
                    progress = True
                    break
            candidates = []
            for nid in self.begin_ids():
                node = self.nodes[nid]
                if (
                    defer_end_measurements
                    and isinstance(node, Measurement)
                    and nid in self.end_ids()
                ):
                    continue
                c = node_cost(node)
                if c > 0:
                    candidates.append((c, nid))
            if not candidates:
                return landings
            _, nid = min(candidates)
            options = reduce_node(self.nodes[nid])
            if not options:
                raise SynthError("positive-cost node with no reducing gate")
            best = min(options, key=lambda g: (self.gate_cost(g),) + g.sort_key())
            self.add_tqe(best)


# -- entry points -------------------------------------------------------------


def _frame_rows(frame: PauliFrame) -> list[LocalFrameRow]:
    return [LocalFrameRow(z, x, j) for j, (z, x) in enumerate(zip(frame.zs, frame.xs))]


def _run_frame_stage(state: SynthState) -> tuple[int, ...]:
    """Synthesize state.frame as factor rows; returns the residual virtual
    permutation (row j of the original frame lands on permutation[j])."""
    target = state.frame
    if target.is_identity():
        return tuple(range(state.n))
    state.nodes = {}
    state.load_free_nodes(_frame_rows(target))
    state.frame = PauliFrame.identity(state.n)
    state.use_frame_penalty = False
    landings = state.run_search(defer_end_measurements=False)
    perm = tuple(landings.get(j, j) for j in range(state.n))
    if sorted(perm) != list(range(state.n)):
        raise SynthError("frame synthesis produced a malformed permutation")
    return perm


def _emit_swap(state: SynthState, a: int, b: int) -> None:
    if state.cfg.gateset == "generic":
        state.emit_clifford(Gate("swap", (a, b)), from_gate("swap", (a, b), state.n))
        return
    for c, t in ((a, b), (b, a), (a, b)):
        # CNOT = H(target) · CZ · H(target)
        z0 = Pauli.single(1, 0, "Z")
        x0 = Pauli.single(1, 0, "X")
        word = _find_word("native", lambda fr: fr.lookup(x0) == z0 and fr.lookup(z0) == x0)
        state.apply_word(word, t)
        state.emit_clifford(Gate("cz", (c, t)), tqe_frame("Z", "Z", c, t, state.n))
        state.apply_word(word, t)


def synthesize_frame(
    frame: PauliFrame, cfg: SearchConfig | None = None
) -> tuple[Circuit, tuple[int, ...]]:
    """Standalone Clifford synthesis: a circuit plus a virtual qubit
    permutation implementing the given frame."""
    cfg = cfg or SearchConfig()
    state = SynthState(frame.n, cfg, frame)
    perm = _run_frame_stage(state)
    if cfg.emit_swaps:
        perm = _materialize_swaps(state, perm)
    return Circuit(frame.n, 0, tuple(state.gates)), perm


def _materialize_swaps(state: SynthState, perm: tuple[int, ...]) -> tuple[int, ...]:
    current = list(perm)
    n = len(current)
    for j in range(n):
        if current[j] == j:
            continue
        a = current[j]
        _emit_swap(state, j, a)
        for m in range(n):
            if current[m] == a:
                current[m] = j
            elif current[m] == j:
                current[m] = a
    return tuple(range(n))


def synthesize(
    prog: CompiledProgram, outcome: str, cfg: SearchConfig | None = None
) -> SynthResult:
    """Full synthesis: hold finalizes the terminal frame, release defers the
    terminal commuting measurement layer and reduces it to single-qubit
    measurements plus a classical remapping."""
    if outcome not in ("hold", "release"):
        raise SynthError(f"unknown outcome {outcome!r}")
    cfg = cfg or SearchConfig()
    state = SynthState(prog.n_qubits, cfg, prog.frame)
    state.load_graph(prog.graph)
    state.use_frame_penalty = outcome == "hold"
    state.run_search(defer_end_measurements=(outcome == "release"))
    msf = prog.msf
    perm = tuple(range(prog.n_qubits))
    if outcome == "hold":
        if state.nodes:
            raise SynthError("hold search left unemitted nodes")
        perm = _run_frame_stage(state)
        if cfg.emit_swaps:
            perm = _materialize_swaps(state, perm)
    else:
        residual = [state.nodes[nid] for nid in sorted(state.nodes)]
        if any(not isinstance(n, Measurement) for n in residual):
            raise SynthError("release search left non-measurement nodes")
        meas = [(node.pauli, node.cvar) for node in residual]
        kept, subst2, _deleted = eliminate_measurements(meas, [])
        msf = msf.substitute(subst2)
        # the residual frame is discarded: nothing after the final measurements
        state.load_free_nodes([Measurement(p, v) for p, v in kept])
        state.frame = PauliFrame.identity(prog.n_qubits)
        state.use_frame_penalty = False
        state.run_search(defer_end_measurements=False)
    msf = msf.substitute(state.subst)
    circuit = Circuit(prog.n_qubits, state.out_vars, tuple(state.gates))
    return SynthResult(circuit, msf, perm)
