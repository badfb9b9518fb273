"""Phase-exact n-qubit Pauli strings in symplectic (X-bits, Z-bits, phase) form.

A Pauli is stored as two bit-vectors packed into Python ints plus a phase
exponent: the operator is ``i**phase * W_0 ⊗ ... ⊗ W_{n-1}`` where qubit j
carries

    W_j = I if (x_j, z_j) = (0, 0)      W_j = X if (1, 0)
    W_j = Z if (0, 1)                   W_j = Y if (1, 1)

with X, Y, Z the standard Hermitian Pauli matrices (Y included, no implicit
factor left in the letters).  A Pauli is Hermitian iff ``phase in {0, 2}``.

Products are computed word-parallel: the letter bits XOR, and the phase is
obtained from three popcounts (one for the XZ cross term, two to convert the
per-Y bookkeeping between the letter convention above and the X^x·Z^z product
convention in which the cross term is exact).
"""

from __future__ import annotations

import re
from dataclasses import dataclass

MAX_QUBITS = 1024

_LETTERS = "IXZY"  # indexed by x + 2*z
_SIGNS = {0: "", 1: "i", 2: "-", 3: "-i"}

_PAULI_RE = re.compile(r"^(\+|-)?(i)?((?:[IXYZ]\d+)+|I)$")


class PauliError(ValueError):
    pass


def _check_width(a: "Pauli", b: "Pauli") -> None:
    if a.n != b.n:
        raise PauliError(f"width mismatch: {a.n} vs {b.n} qubits")


@dataclass(frozen=True, slots=True)
class Pauli:
    """Immutable phase-tracked Pauli string on ``n`` qubits."""

    n: int
    x: int
    z: int
    phase: int  # exponent of i, mod 4

    def __post_init__(self):
        if not 0 <= self.n <= MAX_QUBITS:
            raise PauliError(f"qubit count {self.n} outside [0, {MAX_QUBITS}]")
        mask = (1 << self.n) - 1
        if self.x & ~mask or self.z & ~mask:
            raise PauliError("letter bits outside declared width")
        if not 0 <= self.phase < 4:
            object.__setattr__(self, "phase", self.phase % 4)

    # -- constructors ------------------------------------------------------

    @staticmethod
    def identity(n: int) -> "Pauli":
        return Pauli(n, 0, 0, 0)

    @staticmethod
    def single(n: int, qubit: int, letter: str, negative: bool = False) -> "Pauli":
        """Weight-1 Pauli ``letter`` (X, Y or Z) on ``qubit``."""
        if not 0 <= qubit < n:
            raise PauliError(f"qubit {qubit} outside width {n}")
        letter = letter.upper()
        if letter not in "XYZ":
            raise PauliError(f"bad letter {letter!r}")
        x = int(letter in "XY") << qubit
        z = int(letter in "ZY") << qubit
        return Pauli(n, x, z, 2 if negative else 0)

    @staticmethod
    def from_letters(letters: str, phase: int = 0) -> "Pauli":
        """Build from a dense letter string, qubit 0 first (e.g. ``"XIZ"``)."""
        x = z = 0
        for q, ch in enumerate(letters.upper()):
            if ch not in "IXYZ":
                raise PauliError(f"bad letter {ch!r}")
            x |= int(ch in "XY") << q
            z |= int(ch in "ZY") << q
        return Pauli(len(letters), x, z, phase)

    @staticmethod
    def parse(text: str, n: int | None = None) -> "Pauli":
        """Parse ``[sign][i]<letters with qubit subscripts>``, e.g. ``-X0Z2``."""
        s = text.strip().replace(" ", "")
        m = _PAULI_RE.match(s)
        if m is None:
            raise PauliError(f"cannot parse Pauli {text!r}")
        sign, imag, body = m.groups()
        phase = (2 if sign == "-" else 0) + (1 if imag else 0)
        x = z = 0
        width = 0
        if body != "I":
            for letter, idx in re.findall(r"([IXYZ])(\d+)", body):
                q = int(idx)
                width = max(width, q + 1)
                if letter in "XY":
                    x |= 1 << q
                if letter in "ZY":
                    z |= 1 << q
        if n is None:
            n = width
        elif width > n:
            raise PauliError(f"{text!r} does not fit in {n} qubits")
        return Pauli(n, x, z, phase)

    # -- queries -----------------------------------------------------------

    def letter(self, qubit: int) -> str:
        return _LETTERS[((self.x >> qubit) & 1) + 2 * ((self.z >> qubit) & 1)]

    def support(self) -> tuple[int, ...]:
        bits = self.x | self.z
        return tuple(q for q in range(self.n) if (bits >> q) & 1)

    def weight(self) -> int:
        return (self.x | self.z).bit_count()

    def is_identity(self) -> bool:
        return self.x == 0 and self.z == 0

    def is_hermitian(self) -> bool:
        return self.phase % 2 == 0

    @property
    def sym(self) -> tuple[int, int]:
        """Symplectic part (x, z) — the Pauli modulo phase."""
        return (self.x, self.z)

    # -- algebra -----------------------------------------------------------

    def mul(self, other: "Pauli") -> "Pauli":
        _check_width(self, other)
        x3 = self.x ^ other.x
        z3 = self.z ^ other.z
        phase = (
            self.phase
            + other.phase
            + 2 * (self.z & other.x).bit_count()
            + (self.x & self.z).bit_count()
            + (other.x & other.z).bit_count()
            - (x3 & z3).bit_count()
        ) % 4
        return Pauli(self.n, x3, z3, phase)

    __mul__ = mul

    def commutator(self, other: "Pauli") -> int:
        """λ: 0 when the operators commute, 1 when they anticommute."""
        _check_width(self, other)
        return ((self.x & other.z) ^ (self.z & other.x)).bit_count() & 1

    def commutes(self, other: "Pauli") -> bool:
        return self.commutator(other) == 0

    def herm_product(self, other: "Pauli") -> "Pauli":
        """Hermitian product: (-i)^λ · self · other."""
        if not (self.is_hermitian() and other.is_hermitian()):
            raise PauliError("Hermitian product requires Hermitian operands")
        p = self.mul(other)
        return Pauli(p.n, p.x, p.z, (p.phase - self.commutator(other)) % 4)

    def negate(self) -> "Pauli":
        return Pauli(self.n, self.x, self.z, (self.phase + 2) % 4)

    def dagger(self) -> "Pauli":
        return Pauli(self.n, self.x, self.z, (-self.phase) % 4)

    def with_phase(self, phase: int) -> "Pauli":
        return Pauli(self.n, self.x, self.z, phase % 4)

    def positive(self) -> "Pauli":
        """The +1-phase representative of the same letter string."""
        return Pauli(self.n, self.x, self.z, 0)

    def embed(self, n: int) -> "Pauli":
        """The same operator padded with identities up to width ``n``."""
        if n < self.n:
            raise PauliError("cannot shrink a Pauli")
        return Pauli(n, self.x, self.z, self.phase)

    # -- rendering ---------------------------------------------------------

    def __str__(self) -> str:
        body = "".join(
            f"{self.letter(q)}{q}" for q in range(self.n) if self.letter(q) != "I"
        )
        return _SIGNS[self.phase] + (body or "I")

    def __repr__(self) -> str:
        return f"Pauli({str(self)!r}, n={self.n})"

    def to_matrix(self):
        """Dense 2^n x 2^n complex matrix (desk-scale only)."""
        import numpy as np

        if self.n > 12:
            raise PauliError("to_matrix is for desk-scale widths")
        single = {
            "I": np.eye(2, dtype=complex),
            "X": np.array([[0, 1], [1, 0]], dtype=complex),
            "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
            "Z": np.array([[1, 0], [0, -1]], dtype=complex),
        }
        out = np.array([[1j ** self.phase]], dtype=complex)
        # qubit 0 is the most significant factor so |b_0 b_1 ...> indexes rows
        for q in range(self.n):
            out = np.kron(out, single[self.letter(q)])
        return out


def commutator(a: Pauli, b: Pauli) -> int:
    return a.commutator(b)


def herm_product(a: Pauli, b: Pauli) -> Pauli:
    return a.herm_product(b)
