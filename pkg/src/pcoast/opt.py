"""Graph optimizations for hold and release outcomes.

Hold keeps every branch's quantum state; release only keeps the joint outcome
distribution, which admits dropping trailing unitaries and replacing the
terminal measurement layer by an independent generating set plus a classical
remapping.
"""

from __future__ import annotations

from dataclasses import replace

from .frame import PauliFrame, compose
from .graph import CompiledProgram, rebuild
from .nodes import (
    Measurement,
    Preparation,
    Rotation,
    pauli_commutes_with_node,
)
from .pauli import Pauli


class OptError(ValueError):
    pass


def _ancestors(graph, nid: int) -> set[int]:
    seen: set[int] = set()
    stack = [nid]
    while stack:
        for p in graph.predecessors(stack.pop()):
            if p not in seen:
                seen.add(p)
                stack.append(p)
    return seen


def _descendants(graph, nid: int) -> set[int]:
    seen: set[int] = set()
    stack = [nid]
    while stack:
        for s in graph.successors(stack.pop()):
            if s not in seen:
                seen.add(s)
                stack.append(s)
    return seen


def _stabilizer_in_scope(graph, prep_id: int, target_id: int, stab: Pauli) -> bool:
    """The preparation's stabilizer survives to ``target`` when every node that
    must sit between them commutes with it."""
    between = _descendants(graph, prep_id) & _ancestors(graph, target_id)
    return all(pauli_commutes_with_node(stab, graph.node(u)) for u in sorted(between))


def _potential(prog: CompiledProgram) -> tuple[int, int]:
    graph = prog.graph
    weight = 0
    for nid in graph.node_ids():
        node = graph.node(nid)
        if isinstance(node, (Rotation, Measurement)):
            weight += node.pauli.weight()
        else:
            weight += node.p_z.weight() + node.p_x.weight()
    return (len(graph), weight)


def _find_support_rewrite(prog: CompiledProgram, banned: set):
    graph = prog.graph
    preps = [
        (nid, graph.node(nid).p_z)
        for nid in graph.node_ids()
        if isinstance(graph.node(nid), Preparation)
    ]
    if not preps:
        return None
    rot_syms: dict[tuple[int, int], list[int]] = {}
    for nid in graph.node_ids():
        node = graph.node(nid)
        if isinstance(node, Rotation):
            rot_syms.setdefault(node.pauli.sym, []).append(nid)
    for nid in graph.node_ids():
        node = graph.node(nid)
        if not isinstance(node, (Rotation, Measurement)):
            continue
        pauli = node.pauli
        for pid, stab in preps:
            if nid in _ancestors(graph, pid):
                continue
            if pauli.commutator(stab) != 0:
                continue
            candidate = pauli.herm_product(stab)
            if (pauli.sym, stab.sym) in banned:
                continue
            shrinks = candidate.weight() < pauli.weight()
            exposes_merge = isinstance(node, Rotation) and any(
                other != nid for other in rot_syms.get(candidate.sym, [])
            )
            if not (shrinks or exposes_merge):
                continue
            if not _stabilizer_in_scope(graph, pid, nid, stab):
                continue
            return nid, stab, candidate
    return None


def reduce_node_support(prog: CompiledProgram) -> CompiledProgram:
    """Shrink rotation/measurement Paulis by multiplying in upstream
    preparation stabilizers.

    A rewrite is kept when it strictly reduces (node count, total Pauli
    weight); equal-weight rewrites are attempted only when they expose a
    rotation merge, and reverted (and banned) if the merge does not land.
    """
    banned: set = set()
    while True:
        found = _find_support_rewrite(prog, banned)
        if found is None:
            return prog
        nid, stab, candidate = found
        node = prog.graph.node(nid)
        seq = []
        for oid in prog.graph.topological_order():
            cur = prog.graph.node(oid)
            if oid == nid:
                if isinstance(node, Rotation):
                    theta = node.theta
                    repl = candidate
                    if repl.phase == 2:
                        repl, theta = repl.positive(), -theta
                    cur = Rotation(repl, theta)
                else:
                    cur = Measurement(candidate, node.cvar)
            seq.append(cur)
        new_prog = rebuild(prog, seq)
        if _potential(new_prog) < _potential(prog):
            prog = new_prog
        else:
            banned.add((node.pauli.sym, stab.sym))


def _row_cost(p_z: Pauli, p_x: Pauli) -> int:
    """Entangler count to reduce an anticommuting pair to one actual qubit."""
    dets = 0
    nonzero = 0
    n = p_z.n
    for q in range(n):
        a = p_z.commutator(Pauli.single(n, q, "X"))
        b = p_z.commutator(Pauli.single(n, q, "Z"))
        c = p_x.commutator(Pauli.single(n, q, "X"))
        d = p_x.commutator(Pauli.single(n, q, "Z"))
        if a or b or c or d:
            nonzero += 1
        dets += (a & d) ^ (b & c)
    return (dets - 1) // 2 + (nonzero - 1)


def _frame_cost(frame: PauliFrame) -> int:
    return sum(_row_cost(z, x) for z, x in zip(frame.zs, frame.xs))


def _controlled_pauli_frame(s: Pauli, w: Pauli) -> PauliFrame:
    """Frame of V = (I+S)/2 + (I-S)/2·W for commuting Hermitian S, W.

    V is a self-inverse Clifford acting as the identity on +1 eigenstates of
    S.  Conjugation: entries anticommuting with S pick up W, entries
    anticommuting with W pick up S, entries anticommuting with both become
    -E·S·W.
    """
    n = s.n
    zs = []
    xs = []
    for q in range(n):
        for basis, out in ((Pauli.single(n, q, "Z"), zs), (Pauli.single(n, q, "X"), xs)):
            anti_s = basis.commutator(s)
            anti_w = basis.commutator(w)
            if anti_s and anti_w:
                img = basis.mul(s).mul(w).negate()
            elif anti_s:
                img = basis.mul(w)
            elif anti_w:
                img = basis.mul(s)
            else:
                img = basis
            out.append(img)
    return PauliFrame(n, tuple(zs), tuple(xs))


def reduce_terminal_frame(prog: CompiledProgram) -> CompiledProgram:
    """Right-multiply the terminal frame by Cliffords acting trivially on the
    stabilized subspace of end-of-graph preparations, whenever that strictly
    lowers the frame's synthesis cost."""
    graph = prog.graph
    stabs = [
        graph.node(nid).p_z
        for nid in graph.end_ids()
        if isinstance(graph.node(nid), Preparation)
    ]
    if not stabs:
        return prog
    frame = prog.frame
    n = prog.n_qubits
    cost = _frame_cost(frame)
    improved = True
    while improved:
        improved = False
        for stab in stabs:
            for q in range(n):
                for letter in "XYZ":
                    w = Pauli.single(n, q, letter)
                    if w.commutator(stab) != 0:
                        continue
                    candidate = compose(frame, _controlled_pauli_frame(stab, w))
                    c2 = _frame_cost(candidate)
                    if c2 < cost:
                        frame, cost = candidate, c2
                        improved = True
    if frame == prog.frame:
        return prog
    return replace(prog, frame=frame)


def release_prune(prog: CompiledProgram) -> CompiledProgram:
    """Trivialize the terminal frame and delete end nodes that cannot affect
    recorded outcomes (everything but measurements, iterated to a fixpoint)."""
    graph = prog.graph.copy()
    changed = True
    while changed:
        changed = False
        for nid in graph.end_ids():
            if not isinstance(graph.node(nid), Measurement):
                graph.remove(nid)
                changed = True
    return replace(prog, graph=graph, frame=PauliFrame.identity(prog.n_qubits))


class _Row:
    __slots__ = ("pauli", "vars", "var")

    def __init__(self, pauli: Pauli, var=None):
        self.pauli = pauli
        self.vars = frozenset() if var is None else frozenset([var])
        self.var = var

    def absorb(self, other: "_Row") -> None:
        self.pauli = self.pauli.mul(other.pauli)
        self.vars = self.vars ^ other.vars


def _leading_bit(p: Pauli) -> int | None:
    for q in range(p.n):
        if (p.z >> q) & 1:
            return 2 * q
        if (p.x >> q) & 1:
            return 2 * q + 1
    return None


def eliminate_measurements(
    measurements: list[tuple[Pauli, object]], stabilizers: list[Pauli]
) -> tuple[list[tuple[Pauli, object]], dict, list]:
    """GF(2) reduction of a commuting measurement set against stabilizers.

    Returns ``(kept, subst, deleted)``: the surviving measurements (Paulis
    rewritten to an independent, weight-reduced generating set, signs
    normalized to +1), a substitution old-var -> (new-var set, constant bit)
    covering every input variable, and the deleted variables.

    Joint outcomes multiply: the recorded bit of a product of commuting
    operators is the XOR of the factors' bits, with operator signs and
    deterministic stabilizer outcomes landing in the constant.
    """
    for i, (p, _) in enumerate(measurements):
        for q, _ in measurements[i + 1 :]:
            if p.commutator(q):
                raise OptError("measurement set must be mutually commuting")
        for s in stabilizers:
            if p.commutator(s):
                raise OptError("stabilizers must commute with every measurement")

    def reduce_against(row: _Row, pool: list[_Row]) -> _Row:
        # pool is in insertion order: each member's non-lead bits only touch
        # leads of later members, so one forward pass fully reduces
        for b in pool:
            lead = _leading_bit(b.pauli)
            if lead is None:
                continue
            q, is_x = divmod(lead, 2)
            if ((row.pauli.x if is_x else row.pauli.z) >> q) & 1:
                row.absorb(b)
        return row

    stab_basis: list[_Row] = []
    for s in stabilizers:
        row = reduce_against(_Row(s), stab_basis)
        if not row.pauli.is_identity():
            stab_basis.append(row)

    basis: list[_Row] = []
    dependent: list[_Row] = []
    for pauli, var in measurements:
        row = reduce_against(_Row(pauli, var), stab_basis + basis)
        if row.pauli.is_identity():
            dependent.append(row)
        else:
            basis.append(row)

    improved = True
    while improved:
        improved = False
        for row in basis:
            for other in stab_basis + basis:
                if other is row:
                    continue
                if row.pauli.mul(other.pauli).weight() < row.pauli.weight():
                    row.absorb(other)
                    improved = True

    # each row now satisfies: XOR of its old vars = (new recording of row.var,
    # if kept) XOR sign-bit of its final Pauli
    equations = []
    for row in basis:
        sign = 1 if row.pauli.phase == 2 else 0
        equations.append((set(row.vars), frozenset([row.var]), sign))
    for row in dependent:
        sign = 1 if row.pauli.phase == 2 else 0
        equations.append((set(row.vars), frozenset(), sign))
    subst = _solve_gf2(equations)

    kept = [(row.pauli.positive(), row.var) for row in basis]
    deleted = [row.var for row in dependent]
    return kept, subst, deleted


def _solve_gf2(equations) -> dict:
    """Solve equations ``XOR(old vars) = XOR(new vars) ⊕ const`` for every old
    variable in terms of new variables, by full GF(2) elimination over the
    old-variable columns.  The equations come from invertible row operations
    on the measurement set, so the system always has full rank."""
    old_vars = sorted(
        {v for old, _, _ in equations for v in old},
        key=lambda v: (isinstance(v, str), v),
    )
    index = {v: i for i, v in enumerate(old_vars)}
    rows = []
    for old, new, const in equations:
        mask = 0
        for v in old:
            mask |= 1 << index[v]
        rows.append([mask, set(new), const])
    rank = 0
    for col in range(len(old_vars)):
        pivot = next((k for k in range(rank, len(rows)) if (rows[k][0] >> col) & 1), None)
        if pivot is None:
            raise OptError("variable solve failed (rank-deficient system)")
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for k in range(len(rows)):
            if k != rank and (rows[k][0] >> col) & 1:
                rows[k][0] ^= rows[rank][0]
                rows[k][1] = rows[k][1] ^ rows[rank][1]
                rows[k][2] ^= rows[rank][2]
        rank += 1
    subst: dict = {}
    for row in rows[:rank]:
        col = row[0].bit_length() - 1
        subst[old_vars[col]] = (frozenset(row[1]), row[2])
    return subst


def release_measurement_reduction(prog: CompiledProgram) -> CompiledProgram:
    """Replace the terminal commuting measurement layer by an independent
    generating subset plus a classical remapping, using end-of-graph
    preparation stabilizers to delete deterministic measurements."""
    graph = prog.graph
    meas_ids = [
        nid for nid in graph.end_ids() if isinstance(graph.node(nid), Measurement)
    ]
    if not meas_ids:
        return prog
    meas_set = set(meas_ids)
    stabs = []
    for nid in graph.node_ids():
        node = graph.node(nid)
        if not isinstance(node, Preparation):
            continue
        if not graph.successors(nid) <= meas_set:
            continue
        stab = node.p_z
        if all(stab.commutator(graph.node(m).pauli) == 0 for m in meas_ids):
            stabs.append(stab)
    measurements = [(graph.node(nid).pauli, graph.node(nid).cvar) for nid in meas_ids]
    kept, subst, deleted = eliminate_measurements(measurements, stabs)
    kept_by_var = {var: pauli for pauli, var in kept}
    deleted_vars = set(deleted)
    seq = []
    for nid in graph.topological_order():
        node = graph.node(nid)
        if nid in meas_set:
            if node.cvar in deleted_vars:
                continue
            seq.append(Measurement(kept_by_var[node.cvar], node.cvar))
        else:
            seq.append(node)
    return rebuild(replace(prog, msf=prog.msf.substitute(subst)), seq)


def optimize(prog: CompiledProgram, outcome: str) -> CompiledProgram:
    """``hold``: support reduction, then terminal-frame reduction.
    ``release``: support reduction, end pruning, measurement reduction."""
    if outcome not in ("hold", "release"):
        raise OptError(f"unknown outcome {outcome!r}")
    prog = reduce_node_support(prog)
    if outcome == "hold":
        return reduce_terminal_frame(prog)
    prog = release_prune(prog)
    return release_measurement_reduction(prog)
