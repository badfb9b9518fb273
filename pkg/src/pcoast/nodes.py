"""Graph node variants, their commutativity relation, frame push-through and
merge rewrite rules.

Five node kinds: Pauli rotations, Pauli preparations, Pauli measurements,
Clifford frames and measurement-space functions (affine GF(2) remappings of
classical variables).  Frames and measurement-space functions never live
inside the DAG; they appear here as values so rewrites can hand them back to
the caller.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .frame import PauliFrame, compose, inverse, rotation_frame
from .pauli import Pauli

TWO_PI = 2.0 * math.pi
QUARTER = 0.5 * math.pi
ANGLE_TOL = 1e-9  # |theta/(pi/2) - round| tolerance for Clifford detection

CVar = int | str


class NodeError(ValueError):
    pass


def _cvar_key(v: CVar):
    return (0, v) if isinstance(v, int) else (1, v)


def render_cvar(v: CVar) -> str:
    return f"m{v}" if isinstance(v, int) else str(v)


@dataclass(frozen=True, slots=True)
class Msf:
    """Affine GF(2) map between measurement spaces.

    Each assignment sets ``target := const XOR (XOR of sources)``; all sources
    are read from the input state (parallel semantics), and no target is
    assigned twice.
    """

    assignments: tuple[tuple[CVar, frozenset, int], ...] = ()

    def __post_init__(self):
        targets = [t for t, _, _ in self.assignments]
        if len(set(targets)) != len(targets):
            raise NodeError("measurement-space function assigns a target twice")

    @staticmethod
    def empty() -> "Msf":
        return Msf()

    @staticmethod
    def assign(target: CVar, sources, const: int = 0) -> "Msf":
        return Msf(((target, frozenset(sources), const & 1),))

    def is_empty(self) -> bool:
        return not self.assignments

    def targets(self) -> tuple[CVar, ...]:
        return tuple(t for t, _, _ in self.assignments)

    def sources(self) -> frozenset:
        out = set()
        for _, srcs, _ in self.assignments:
            out |= srcs
        return frozenset(out)

    def definition(self, target: CVar) -> tuple[frozenset, int] | None:
        for t, srcs, const in self.assignments:
            if t == target:
                return srcs, const
        return None

    def apply(self, m: dict) -> dict:
        out = dict(m)
        for target, srcs, const in self.assignments:
            val = const
            for s in srcs:
                val ^= m[s]
            out[target] = val
        return out

    def substitute(self, subst: dict) -> "Msf":
        """Rewrite sources through ``subst: var -> (sources, const)``."""
        new = []
        for target, srcs, const in self.assignments:
            acc: set = set()
            c = const
            for s in srcs:
                if s in subst:
                    s_srcs, s_const = subst[s]
                    acc ^= set(s_srcs)
                    c ^= s_const
                else:
                    acc ^= {s}
            new.append((target, frozenset(acc), c))
        return Msf(tuple(new))

    def render(self) -> str:
        parts = []
        for target, srcs, const in self.assignments:
            terms = sorted((render_cvar(s) for s in srcs))
            if const:
                terms.append("1")
            rhs = " + ".join(terms) if terms else "0"
            parts.append(f"{render_cvar(target)} := {rhs}")
        return "; ".join(parts)

    def __str__(self) -> str:
        return "mu{" + self.render() + "}"


def msf_compose(mu2: Msf, mu1: Msf) -> Msf:
    """The map running mu1 first, then mu2 (sources stay in mu1's input space)."""
    defs1 = {t: (srcs, const) for t, srcs, const in mu1.assignments}
    sub2 = mu2.substitute(defs1)
    new = [(t, s, c) for t, s, c in mu1.assignments if t not in set(sub2.targets())]
    new.extend(sub2.assignments)
    return Msf(tuple(new))


@dataclass(frozen=True, slots=True)
class Rotation:
    """exp(-i·theta/2·P) for a Hermitian, positive-phase Pauli P."""

    pauli: Pauli
    theta: float

    def __post_init__(self):
        if self.pauli.phase != 0:
            raise NodeError("rotation Pauli must carry phase +1 (fold sign into theta)")
        if self.pauli.is_identity():
            raise NodeError("rotation about identity is a global phase")
        if not math.isfinite(self.theta):
            raise NodeError("rotation angle must be finite")


@dataclass(frozen=True, slots=True)
class Preparation:
    """Collapse onto the P_Z eigenspaces with P_X correcting the -1 branch."""

    p_z: Pauli
    p_x: Pauli

    def __post_init__(self):
        if not (self.p_z.is_hermitian() and self.p_x.is_hermitian()):
            raise NodeError("preparation Paulis must be Hermitian")
        if self.p_z.commutator(self.p_x) != 1:
            raise NodeError("preparation pair must anticommute")
        if self.p_x.phase != 0:
            # the correction operator is applied on both sides; its sign is inert
            object.__setattr__(self, "p_x", self.p_x.positive())


@dataclass(frozen=True, slots=True)
class Measurement:
    """Projective measurement of a signed Hermitian Pauli into ``cvar``."""

    pauli: Pauli
    cvar: CVar

    def __post_init__(self):
        if not self.pauli.is_hermitian():
            raise NodeError("measurement Pauli must be Hermitian")
        if self.pauli.is_identity():
            raise NodeError("measurement of the identity is constant")


@dataclass(frozen=True, slots=True)
class FrameNode:
    frame: PauliFrame


@dataclass(frozen=True, slots=True)
class MsfNode:
    msf: Msf


Node = Rotation | Preparation | Measurement | FrameNode | MsfNode


def quarter_turns(theta: float) -> int | None:
    """k when theta is (numerically) k·π/2, else None."""
    k = round(theta / QUARTER)
    if abs(theta / QUARTER - k) < ANGLE_TOL:
        return k
    return None


def make_rotation(p: Pauli, theta: float) -> Node | None:
    """Canonical rotation node: sign folded into the angle, angle mod 2π,
    Clifford angles converted to a frame, zero angles dropped (None)."""
    if not p.is_hermitian():
        raise NodeError("rotation Pauli must be Hermitian")
    if p.phase == 2:
        p, theta = p.positive(), -theta
    theta = math.fmod(theta, TWO_PI)
    if theta < 0:
        theta += TWO_PI
    k = quarter_turns(theta)
    if k is not None:
        k %= 4
        if k == 0 or p.is_identity():
            return None
        return FrameNode(rotation_frame(p, k))
    return Rotation(p, theta)


def node_width(n: Node) -> int:
    if isinstance(n, Rotation):
        return n.pauli.n
    if isinstance(n, Preparation):
        return n.p_z.n
    if isinstance(n, Measurement):
        return n.pauli.n
    if isinstance(n, FrameNode):
        return n.frame.n
    return 0


def node_paulis(n: Node) -> tuple[Pauli, ...]:
    """The defining Pauli arguments of a quantum node."""
    if isinstance(n, Rotation):
        return (n.pauli,)
    if isinstance(n, Preparation):
        return (n.p_z, n.p_x)
    if isinstance(n, Measurement):
        return (n.pauli,)
    raise NodeError(f"{type(n).__name__} has no Pauli arguments")


def pauli_commutes_with_node(q: Pauli, n: Node) -> bool:
    """Whether a Pauli commutes with a node: λ = 0 against every defining
    Pauli; for frames, being fixed by the lookup action; always for μ."""
    if isinstance(n, MsfNode):
        return True
    if isinstance(n, FrameNode):
        return n.frame.fixes(q)
    return all(q.commutator(p) == 0 for p in node_paulis(n))


def nodes_commute(n1: Node, n2: Node) -> bool:
    """Conservative commutation relation: True guarantees n1;n2 ≡ n2;n1."""
    if isinstance(n1, MsfNode) or isinstance(n2, MsfNode):
        other = n2 if isinstance(n1, MsfNode) else n1
        return not isinstance(other, (MsfNode, Measurement))
    if isinstance(n1, FrameNode) and isinstance(n2, FrameNode):
        return compose(n1.frame, n2.frame) == compose(n2.frame, n1.frame)
    if isinstance(n1, FrameNode) or isinstance(n2, FrameNode):
        f, other = (n1, n2) if isinstance(n1, FrameNode) else (n2, n1)
        return all(f.frame.fixes(p) for p in node_paulis(other))
    return all(
        p.commutator(q) == 0 for p in node_paulis(n1) for q in node_paulis(n2)
    )


def push_through_frame(f: PauliFrame, n: Node) -> Node:
    """The node F(n) with F;n ≡ F(n);F."""
    if isinstance(n, Rotation):
        img = f.lookup(n.pauli)
        theta = n.theta
        if img.phase == 2:
            img, theta = img.positive(), -theta
            theta = math.fmod(theta, TWO_PI)
            if theta < 0:
                theta += TWO_PI
        return Rotation(img, theta)
    if isinstance(n, Preparation):
        return Preparation(f.lookup(n.p_z), f.lookup(n.p_x))
    if isinstance(n, Measurement):
        return Measurement(f.lookup(n.pauli), n.cvar)
    if isinstance(n, FrameNode):
        return FrameNode(compose(compose(inverse(f), n.frame), f))
    return n


def _sign_bit(relative_phase: int) -> int | None:
    """b with second = (-1)^b · first, given phase difference mod 4."""
    if relative_phase == 0:
        return 0
    if relative_phase == 2:
        return 1
    return None


def try_merge(first: Node, second: Node) -> list[Node] | None:
    """Apply a merge rule to the adjacent pair ``first; second``.

    Returns the replacement node sequence (possibly empty; a trailing frame or
    measurement-space function is handed back as a FrameNode/MsfNode), or None
    when no rule applies.
    """
    # Rot(P,θ1); Rot(±P,θ2)
    if isinstance(first, Rotation) and isinstance(second, Rotation):
        if first.pauli.sym == second.pauli.sym:
            merged = make_rotation(first.pauli, first.theta + second.theta)
            return [] if merged is None else [merged]
        return None
    # Prep(Pz|Px); Prep(±Pz|Px')
    if isinstance(first, Preparation) and isinstance(second, Preparation):
        if first.p_z.sym == second.p_z.sym:
            return [second]
        return None
    # Prep(Pz|Px); Rot(±Pz,θ)
    if isinstance(first, Preparation) and isinstance(second, Rotation):
        if first.p_z.sym == second.pauli.sym:
            return [first]
        return None
    # Meas[c1](P); Meas[c2]((-1)^b P)
    if isinstance(first, Measurement) and isinstance(second, Measurement):
        if first.pauli.sym == second.pauli.sym:
            b = _sign_bit((second.pauli.phase - first.pauli.phase) % 4)
            return [first, MsfNode(Msf.assign(second.cvar, {first.cvar}, b))]
        return None
    # Prep(Pz|Px); Meas[c]((-1)^b Pz)
    if isinstance(first, Preparation) and isinstance(second, Measurement):
        if first.p_z.sym == second.pauli.sym:
            b = _sign_bit((second.pauli.phase - first.p_z.phase) % 4)
            return [first, MsfNode(Msf.assign(second.cvar, (), b))]
        return None
    # Rot(±P,θ); Meas[c](P)
    if isinstance(first, Rotation) and isinstance(second, Measurement):
        if first.pauli.sym == second.pauli.sym:
            return [second]
        return None
    # F1; F2 and μ1; μ2
    if isinstance(first, FrameNode) and isinstance(second, FrameNode):
        return [FrameNode(compose(second.frame, first.frame))]
    if isinstance(first, MsfNode) and isinstance(second, MsfNode):
        return [MsfNode(msf_compose(second.msf, first.msf))]
    return None


def render_node(n: Node) -> str:
    if isinstance(n, Rotation):
        return f"R({n.pauli}, {n.theta:.12g})"
    if isinstance(n, Preparation):
        return f"Prep({n.p_z}|{n.p_x})"
    if isinstance(n, Measurement):
        return f"Meas[{render_cvar(n.cvar)}]({n.pauli})"
    if isinstance(n, FrameNode):
        rows = "; ".join(f"{z},{x}" for z, x in zip(n.frame.zs, n.frame.xs))
        return f"Frame({rows})"
    return str(n.msf)
