"""Pauli-graph circuit optimizer: compile, simplify and resynthesize quantum
circuits through a commutation-aware DAG of Pauli-parameterized nodes."""

from .circuit import Circuit, Gate, emit, metrics, parse
from .frame import PauliFrame, compose, from_gate, inverse, pauli_frame, rotation_frame, tqe_frame
from .graph import CompiledProgram, PcoastGraph, circuit_to_graph
from .nodes import (
    FrameNode,
    Measurement,
    Msf,
    MsfNode,
    Preparation,
    Rotation,
    make_rotation,
    msf_compose,
    nodes_commute,
    push_through_frame,
    try_merge,
)
from .opt import optimize
from .pauli import Pauli, commutator, herm_product
from .synth import SearchConfig, SynthResult, synthesize, synthesize_frame

__version__ = "0.1.0"

__all__ = [
    "Circuit",
    "CompiledProgram",
    "FrameNode",
    "Gate",
    "Measurement",
    "Msf",
    "MsfNode",
    "Pauli",
    "PauliFrame",
    "PcoastGraph",
    "Preparation",
    "Rotation",
    "SearchConfig",
    "SynthResult",
    "circuit_to_graph",
    "commutator",
    "compose",
    "emit",
    "from_gate",
    "herm_product",
    "inverse",
    "make_rotation",
    "metrics",
    "msf_compose",
    "nodes_commute",
    "optimize",
    "parse",
    "pauli_frame",
    "push_through_frame",
    "rotation_frame",
    "synthesize",
    "synthesize_frame",
    "tqe_frame",
    "try_merge",
]
