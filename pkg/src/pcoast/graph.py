"""The rewrite-graph IR: a DAG of quantum nodes with edges between
non-commuting pairs, plus the insertion procedure that keeps it fully merged
and the circuit-to-graph compiler that keeps the terminal frame and terminal
measurement-space function outside the DAG.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from .circuit import Circuit, lower_gate
from .frame import PauliFrame, compose
from .nodes import (
    FrameNode,
    Measurement,
    Msf,
    MsfNode,
    Node,
    node_paulis,
    node_width,
    nodes_commute,
    msf_compose,
    push_through_frame,
    render_node,
    try_merge,
)


class GraphError(ValueError):
    pass


class PcoastGraph:
    """DAG of rotation/preparation/measurement nodes.

    Edges run earlier -> later between every non-commuting stored pair; nodes
    with disjoint support always commute, so candidate sets are kept per qubit.
    """

    def __init__(self, n_qubits: int):
        self.n_qubits = n_qubits
        self._nodes: dict[int, Node] = {}
        self._succ: dict[int, set[int]] = {}
        self._pred: dict[int, set[int]] = {}
        self._by_qubit: list[set[int]] = [set() for _ in range(n_qubits)]
        self._counter = 0

    # -- plumbing ------------------------------------------------------------

    def __len__(self) -> int:
        return len(self._nodes)

    def node_ids(self) -> list[int]:
        return sorted(self._nodes)

    def node(self, nid: int) -> Node:
        return self._nodes[nid]

    def successors(self, nid: int) -> set[int]:
        return self._succ[nid]

    def predecessors(self, nid: int) -> set[int]:
        return self._pred[nid]

    def _support(self, node: Node) -> set[int]:
        qubits: set[int] = set()
        for p in node_paulis(node):
            qubits.update(p.support())
        return qubits

    def _touching(self, node: Node) -> list[int]:
        seen: set[int] = set()
        for q in self._support(node):
            seen |= self._by_qubit[q]
        return sorted(seen)

    def _insert(self, node: Node) -> int:
        nid = self._counter
        self._counter += 1
        self._nodes[nid] = node
        self._succ[nid] = set()
        self._pred[nid] = set()
        for other in self._touching(node):
            if other != nid and not nodes_commute(self._nodes[other], node):
                self._succ[other].add(nid)
                self._pred[nid].add(other)
        for q in self._support(node):
            self._by_qubit[q].add(nid)
        return nid

    def remove(self, nid: int) -> Node:
        node = self._nodes.pop(nid)
        for q in self._support(node):
            self._by_qubit[q].discard(nid)
        for s in self._succ.pop(nid):
            self._pred[s].discard(nid)
        for p in self._pred.pop(nid):
            self._succ[p].discard(nid)
        return node

    def end_ids(self) -> list[int]:
        return sorted(nid for nid, succ in self._succ.items() if not succ)

    def begin_ids(self) -> list[int]:
        return sorted(nid for nid, pred in self._pred.items() if not pred)

    def copy(self) -> "PcoastGraph":
        g = PcoastGraph(self.n_qubits)
        g._nodes = dict(self._nodes)
        g._succ = {k: set(v) for k, v in self._succ.items()}
        g._pred = {k: set(v) for k, v in self._pred.items()}
        g._by_qubit = [set(s) for s in self._by_qubit]
        g._counter = self._counter
        return g

    # -- the insertion procedure ----------------------------------------------

    def add_node(self, node: Node) -> tuple[PauliFrame, Msf]:
        """Insert a node, merging with merge-eligible end nodes first.

        Returns a frame and measurement-space function such that the old graph
        followed by ``node`` is equivalent to the new graph followed by them.
        """
        if isinstance(node, FrameNode):
            return node.frame, Msf.empty()
        if isinstance(node, MsfNode):
            return PauliFrame.identity(self.n_qubits), node.msf
        if node_width(node) != self.n_qubits:
            raise GraphError(
                f"node width {node_width(node)} vs graph width {self.n_qubits}"
            )
        candidates = set(self._touching(node))
        for nid in self.end_ids():
            if nid not in candidates:
                continue
            replacement = try_merge(self._nodes[nid], node)
            if replacement is None:
                continue
            self.remove(nid)
            frame = PauliFrame.identity(self.n_qubits)
            msf = Msf.empty()
            for item in replacement:
                if not isinstance(item, (FrameNode, MsfNode)):
                    item = push_through_frame(frame, item)
                f2, m2 = self.add_node(item)
                frame = compose(frame, f2)
                msf = msf_compose(msf, m2)
            return frame, msf
        self._insert(node)
        return PauliFrame.identity(self.n_qubits), Msf.empty()

    # -- orderings -------------------------------------------------------------

    def topological_order(self) -> list[int]:
        """Deterministic Kahn ordering (lowest ready id first)."""
        indeg = {nid: len(self._pred[nid]) for nid in self._nodes}
        heap = [nid for nid, d in indeg.items() if d == 0]
        heapq.heapify(heap)
        out: list[int] = []
        while heap:
            nid = heapq.heappop(heap)
            out.append(nid)
            for s in sorted(self._succ[nid]):
                indeg[s] -= 1
                if indeg[s] == 0:
                    heapq.heappush(heap, s)
        if len(out) != len(self._nodes):
            raise GraphError("graph contains a cycle")
        return out

    # -- diagnostics -------------------------------------------------------------

    def check_invariants(self) -> list[str]:
        problems: list[str] = []
        try:
            self.topological_order()
        except GraphError:
            problems.append("cycle detected")
        ids = self.node_ids()
        for i, a in enumerate(ids):
            for b in ids[i + 1 :]:
                commute = nodes_commute(self._nodes[a], self._nodes[b])
                linked = b in self._succ[a] or a in self._succ[b]
                if commute and linked:
                    problems.append(f"edge between commuting nodes {a}, {b}")
                if not commute and not linked:
                    problems.append(f"missing edge between {a}, {b}")
        for a in ids:
            reach = self._reachable(a)
            for b in ids:
                if b <= a or b in reach or a in self._reachable(b):
                    continue
                if (
                    try_merge(self._nodes[a], self._nodes[b]) is not None
                    or try_merge(self._nodes[b], self._nodes[a]) is not None
                ):
                    problems.append(f"unmerged mergeable pair {a}, {b}")
        for nid, node in self._nodes.items():
            if node_width(node) != self.n_qubits:
                problems.append(f"node {nid} has wrong width")
        return problems

    def _reachable(self, start: int) -> set[int]:
        seen: set[int] = set()
        stack = [start]
        while stack:
            cur = stack.pop()
            for s in self._succ[cur]:
                if s not in seen:
                    seen.add(s)
                    stack.append(s)
        return seen


@dataclass(frozen=True)
class CompiledProgram:
    """Graph plus the terminal frame and measurement-space function.

    Measurement nodes carry fresh integer variables; ``msf`` maps the user's
    declared classical variables back from them.
    """

    graph: PcoastGraph
    frame: PauliFrame
    msf: Msf
    n_qubits: int
    cvars: tuple[str, ...]
    fresh_counter: int

    def dump(self) -> str:
        lines = []
        order = self.graph.topological_order()
        for nid in order:
            lines.append(f"node {nid}: {render_node(self.graph.node(nid))}")
        for nid in order:
            for s in sorted(self.graph.successors(nid)):
                lines.append(f"edge {nid} -> {s}")
        for j in range(self.n_qubits):
            z, x = self.frame.row(j)
            lines.append(f"frame row {j}: {z} {x}")
        lines.append(f"msf: {self.msf.render() or '(empty)'}")
        return "\n".join(lines) + "\n"


class ProgramBuilder:
    """Maintains the invariant: input-so-far ≡ graph; frame; msf."""

    def __init__(self, n_qubits: int, cvars: tuple[str, ...] = (), fresh_start: int = 0):
        self.graph = PcoastGraph(n_qubits)
        self.frame = PauliFrame.identity(n_qubits)
        self.msf = Msf.empty()
        self.cvars = cvars
        self._fresh = fresh_start

    def fresh_var(self) -> int:
        v = self._fresh
        self._fresh += 1
        return v

    def add(self, node: Node) -> None:
        if isinstance(node, FrameNode):
            self.frame = compose(node.frame, self.frame)
            return
        if isinstance(node, MsfNode):
            self.msf = msf_compose(node.msf, self.msf)
            return
        if isinstance(node, Measurement):
            fresh = self.fresh_var()
            self.msf = msf_compose(Msf.assign(node.cvar, {fresh}), self.msf)
            node = Measurement(node.pauli, fresh)
        node = push_through_frame(self.frame, node)
        f2, m2 = self.graph.add_node(node)
        self.frame = compose(self.frame, f2)
        self.msf = msf_compose(self.msf, m2)

    def finish(self) -> CompiledProgram:
        compacted = Msf(
            tuple(
                (t, srcs, const)
                for t, srcs, const in self.msf.assignments
                if not (srcs == frozenset({t}) and const == 0)
            )
        )
        return CompiledProgram(
            graph=self.graph,
            frame=self.frame,
            msf=compacted,
            n_qubits=self.graph.n_qubits,
            cvars=self.cvars,
            fresh_counter=self._fresh,
        )


def circuit_to_graph(circuit: Circuit) -> CompiledProgram:
    builder = ProgramBuilder(circuit.n_qubits, circuit.cvars)
    for gate in circuit.gates:
        for node in lower_gate(gate, circuit.n_qubits):
            builder.add(node)
    return builder.finish()


def rebuild(prog: CompiledProgram, node_seq=None) -> CompiledProgram:
    """Re-insert nodes (in topological order by default), re-deriving edges and
    merges; terminal frame and msf are composed back in."""
    builder = ProgramBuilder(prog.n_qubits, prog.cvars, prog.fresh_counter)
    if node_seq is None:
        node_seq = [prog.graph.node(i) for i in prog.graph.topological_order()]
    for node in node_seq:
        if isinstance(node, Measurement):
            # already freshened; insert without a second renaming
            pushed = push_through_frame(builder.frame, node)
            f2, m2 = builder.graph.add_node(pushed)
            builder.frame = compose(builder.frame, f2)
            builder.msf = msf_compose(builder.msf, m2)
        else:
            builder.add(node)
    builder.frame = compose(prog.frame, builder.frame)
    builder.msf = msf_compose(prog.msf, builder.msf)
    return builder.finish()
