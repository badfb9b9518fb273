"""Circuit IR: line-based text format, parser/emitter, metrics and lowering.

Grammar (one statement per line, ``#`` starts a comment):

    qubits <N>
    cbits <M>
    <name>[(<angle>[,<angle>])] q<i> [q<j>]
    measz q<i> -> c<k>

Gate names are case-insensitive.  Angles are decimals or pi expressions of the
form ``[-][a*]pi[/b]``.  The nine two-qubit entanglers controlled between Pauli
bases are spelled ``tqe_xx`` .. ``tqe_zz``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

from .frame import from_gate, tqe_frame
from .nodes import FrameNode, Measurement, Node, Preparation, make_rotation
from .pauli import Pauli

_TQE_KINDS = tuple(f"tqe_{a}{b}" for a in "xyz" for b in "xyz")

# kind -> (n_qubits, n_angles, has_cvar)
GATE_SIGNATURES: dict[str, tuple[int, int, bool]] = {
    "prepz": (1, 0, False),
    "prepx": (1, 0, False),
    "measz": (1, 0, True),
    "h": (1, 0, False),
    "s": (1, 0, False),
    "sdg": (1, 0, False),
    "x": (1, 0, False),
    "y": (1, 0, False),
    "z": (1, 0, False),
    "t": (1, 0, False),
    "tdg": (1, 0, False),
    "rx": (1, 1, False),
    "ry": (1, 1, False),
    "rz": (1, 1, False),
    "rxy": (1, 2, False),
    "cnot": (2, 0, False),
    "cz": (2, 0, False),
    "swap": (2, 0, False),
    **{k: (2, 0, False) for k in _TQE_KINDS},
}

TWO_QUBIT_KINDS = frozenset(k for k, (nq, _, _) in GATE_SIGNATURES.items() if nq == 2)


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True, slots=True)
class Gate:
    kind: str
    qubits: tuple[int, ...]
    params: tuple[float, ...] = ()
    cvar: str | None = None

    def __post_init__(self):
        sig = GATE_SIGNATURES.get(self.kind)
        if sig is None:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        nq, na, has_c = sig
        if len(self.qubits) != nq:
            raise ValueError(f"{self.kind} expects {nq} qubit operand(s)")
        if len(self.params) != na:
            raise ValueError(f"{self.kind} expects {na} angle(s)")
        if any(not math.isfinite(a) for a in self.params):
            raise ValueError(f"{self.kind} angle must be finite")
        if has_c != (self.cvar is not None):
            raise ValueError(f"{self.kind} classical target mismatch")
        if nq == 2 and self.qubits[0] == self.qubits[1]:
            raise ValueError(f"{self.kind} operands must be distinct")


@dataclass(frozen=True)
class Circuit:
    n_qubits: int
    n_cbits: int
    gates: tuple[Gate, ...] = ()

    def __post_init__(self):
        for g in self.gates:
            for q in g.qubits:
                if not 0 <= q < self.n_qubits:
                    raise ValueError(f"qubit q{q} outside declared width")
            if g.cvar is not None and g.cvar not in self.cvars:
                raise ValueError(f"undeclared classical variable {g.cvar}")

    @property
    def cvars(self) -> tuple[str, ...]:
        return tuple(f"c{k}" for k in range(self.n_cbits))


_ANGLE_PI_RE = re.compile(r"^(-)?(?:(\d+(?:\.\d+)?)\*)?pi(?:/(\d+(?:\.\d+)?))?$")


def parse_angle(text: str) -> float:
    s = text.strip().lower()
    m = _ANGLE_PI_RE.match(s)
    if m:
        sign, a, b = m.groups()
        value = math.pi * (float(a) if a else 1.0) / (float(b) if b else 1.0)
        return -value if sign else value
    try:
        value = float(s)
    except ValueError:
        raise ValueError(f"bad angle {text!r}") from None
    if not math.isfinite(value):
        raise ValueError(f"non-finite angle {text!r}")
    return value


_STMT_RE = re.compile(
    r"^(?P<name>[a-z_][a-z0-9_]*)"
    r"(?:\((?P<args>[^)]*)\))?"
    r"(?P<rest>(?:\s+q\d+)*)"
    r"(?:\s*->\s*(?P<cvar>c\d+))?$"
)


def parse(text: str) -> Circuit:
    n_qubits: int | None = None
    n_cbits = 0
    gates: list[Gate] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        lowered = line.lower()
        if lowered.startswith("qubits") or lowered.startswith("cbits"):
            parts = lowered.split()
            if len(parts) != 2 or not parts[1].isdigit():
                raise ParseError(f"bad header {line!r}", lineno)
            if gates:
                raise ParseError("headers must precede gates", lineno)
            if parts[0] == "qubits":
                n_qubits = int(parts[1])
            else:
                n_cbits = int(parts[1])
            continue
        if n_qubits is None:
            raise ParseError("gate before 'qubits' header", lineno)
        m = _STMT_RE.match(lowered)
        if m is None:
            raise ParseError(f"cannot parse statement {line!r}", lineno)
        name = m.group("name")
        sig = GATE_SIGNATURES.get(name)
        if sig is None:
            raise ParseError(f"unknown gate {name!r}", lineno, line.lower().find(name) + 1)
        nq, na, has_c = sig
        args = m.group("args")
        params: tuple[float, ...] = ()
        if args is not None:
            try:
                params = tuple(parse_angle(a) for a in args.split(",") if a.strip())
            except ValueError as e:
                raise ParseError(str(e), lineno) from None
        if len(params) != na:
            raise ParseError(f"{name} expects {na} angle(s)", lineno)
        qubits = tuple(int(tok[1:]) for tok in m.group("rest").split())
        if len(qubits) != nq:
            raise ParseError(f"{name} expects {nq} qubit operand(s)", lineno)
        for q in qubits:
            if q >= n_qubits:
                raise ParseError(f"qubit q{q} outside declared width {n_qubits}", lineno)
        if nq == 2 and qubits[0] == qubits[1]:
            raise ParseError(f"{name} operands must be distinct", lineno)
        cvar = m.group("cvar")
        if has_c:
            if cvar is None:
                raise ParseError(f"{name} needs a '-> c<k>' target", lineno)
            if int(cvar[1:]) >= n_cbits:
                raise ParseError(f"undeclared classical variable {cvar}", lineno)
        elif cvar is not None:
            raise ParseError(f"{name} takes no classical target", lineno)
        gates.append(Gate(name, qubits, params, cvar))
    if n_qubits is None:
        raise ParseError("missing 'qubits' header", 1)
    return Circuit(n_qubits, n_cbits, tuple(gates))


def _render_angle(a: float) -> str:
    # repr of a float round-trips exactly (shortest digits, <= 17 significant)
    return repr(float(a))


def emit(c: Circuit) -> str:
    lines = [f"qubits {c.n_qubits}", f"cbits {c.n_cbits}"]
    for g in c.gates:
        head = g.kind
        if g.params:
            head += "(" + ", ".join(_render_angle(a) for a in g.params) + ")"
        line = head + "".join(f" q{q}" for q in g.qubits)
        if g.cvar is not None:
            line += f" -> {g.cvar}"
        lines.append(line)
    return "\n".join(lines) + "\n"


def metrics(c: Circuit) -> dict:
    depth_frontier = [0] * max(c.n_qubits, 1)
    for g in c.gates:
        slot = max(depth_frontier[q] for q in g.qubits) + 1
        for q in g.qubits:
            depth_frontier[q] = slot
    return {
        "total_gates": len(c.gates),
        "two_qubit_gates": sum(1 for g in c.gates if g.kind in TWO_QUBIT_KINDS),
        "depth": max(depth_frontier) if c.gates else 0,
        "measurements": sum(1 for g in c.gates if g.kind == "measz"),
        "preparations": sum(1 for g in c.gates if g.kind.startswith("prep")),
    }


def lower_gate(g: Gate, n_qubits: int) -> list[Node]:
    """Rewrite one gate as a node sequence (Cliffords become frame nodes)."""
    kind = g.kind
    q = g.qubits[0]
    if kind == "prepz":
        return [Preparation(Pauli.single(n_qubits, q, "Z"), Pauli.single(n_qubits, q, "X"))]
    if kind == "prepx":
        return [Preparation(Pauli.single(n_qubits, q, "X"), Pauli.single(n_qubits, q, "Z"))]
    if kind == "measz":
        return [Measurement(Pauli.single(n_qubits, q, "Z"), g.cvar)]
    if kind in ("h", "s", "sdg", "x", "y", "z", "cnot", "cz", "swap"):
        return [FrameNode(from_gate(kind, g.qubits, n_qubits))]
    if kind.startswith("tqe_"):
        s1, s2 = kind[4], kind[5]
        return [FrameNode(tqe_frame(s1, s2, g.qubits[0], g.qubits[1], n_qubits))]
    if kind in ("rx", "ry", "rz"):
        axis = kind[1].upper()
        node = make_rotation(Pauli.single(n_qubits, q, axis), g.params[0])
        return [node] if node is not None else []
    if kind == "t":
        return [make_rotation(Pauli.single(n_qubits, q, "Z"), math.pi / 4)]
    if kind == "tdg":
        return [make_rotation(Pauli.single(n_qubits, q, "Z"), -math.pi / 4)]
    if kind == "rxy":
        theta, phi = g.params
        z = Pauli.single(n_qubits, q, "Z")
        x = Pauli.single(n_qubits, q, "X")
        seq = [make_rotation(z, -phi), make_rotation(x, theta), make_rotation(z, phi)]
        return [n for n in seq if n is not None]
    raise ValueError(f"cannot lower gate kind {kind!r}")
