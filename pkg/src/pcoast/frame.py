"""Pauli frames: tableaus representing Clifford unitaries by inverse conjugation.

A frame stores, per qubit j, the images eff_Z_j = U†·Z_j·U and
eff_X_j = U†·X_j·U of the corresponding Clifford U.  Storing the inverse
conjugation makes ``lookup`` (the action needed when commuting the frame past
other nodes) a direct product of stored entries.
"""

from __future__ import annotations

from dataclasses import dataclass

from .pauli import Pauli

CLIFFORD_GATES = ("h", "s", "sdg", "x", "y", "z", "cnot", "cz", "swap")

PAULI_LETTERS = ("X", "Y", "Z")


class FrameError(ValueError):
    pass


@dataclass(frozen=True, slots=True)
class PauliFrame:
    """n x 2 table of Hermitian Paulis (effective Z and effective X per row)."""

    n: int
    zs: tuple[Pauli, ...]
    xs: tuple[Pauli, ...]

    @staticmethod
    def identity(n: int) -> "PauliFrame":
        return PauliFrame(
            n,
            tuple(Pauli.single(n, q, "Z") for q in range(n)),
            tuple(Pauli.single(n, q, "X") for q in range(n)),
        )

    def is_identity(self) -> bool:
        return self == PauliFrame.identity(self.n)

    def row(self, j: int) -> tuple[Pauli, Pauli]:
        return self.zs[j], self.xs[j]

    def lookup(self, p: Pauli) -> Pauli:
        """The frame's action U†·p·U, phase-exact; requires Hermitian input."""
        if p.n != self.n:
            raise FrameError(f"width mismatch: {p.n} vs {self.n}")
        if not p.is_hermitian():
            raise FrameError("frame lookup requires a Hermitian Pauli")
        out = Pauli.identity(self.n)
        for q in range(self.n):
            letter = p.letter(q)
            if letter == "I":
                continue
            if letter == "X":
                out = out.mul(self.xs[q])
            elif letter == "Z":
                out = out.mul(self.zs[q])
            else:  # effective Y = eff_Z ⊙ eff_X
                out = out.mul(self.zs[q].herm_product(self.xs[q]))
        if p.phase == 2:
            out = out.negate()
        return out

    def fixes(self, p: Pauli) -> bool:
        return self.lookup(p) == p

    def is_wellformed(self) -> bool:
        n = self.n
        if len(self.zs) != n or len(self.xs) != n:
            return False
        entries = list(self.zs) + list(self.xs)
        if any(e.n != n or not e.is_hermitian() for e in entries):
            return False
        for i in range(n):
            for j in range(n):
                if self.zs[i].commutator(self.zs[j]) != 0:
                    return False
                if self.xs[i].commutator(self.xs[j]) != 0:
                    return False
                if self.zs[i].commutator(self.xs[j]) != (1 if i == j else 0):
                    return False
        return True

    def render(self) -> str:
        """Two-column matrix of Pauli strings, one row per qubit."""
        left = [str(z) for z in self.zs]
        right = [str(x) for x in self.xs]
        wl = max(len(s) for s in left) if left else 1
        return "\n".join(f"( {l:<{wl}}  {r} )" for l, r in zip(left, right))


def compose(f2: PauliFrame, f1: PauliFrame) -> PauliFrame:
    """Frame of U2·U1 (f1 acts first in circuit order)."""
    if f1.n != f2.n:
        raise FrameError(f"width mismatch: {f2.n} vs {f1.n}")
    return PauliFrame(
        f1.n,
        tuple(f1.lookup(z) for z in f2.zs),
        tuple(f1.lookup(x) for x in f2.xs),
    )


def inverse(f: PauliFrame) -> PauliFrame:
    """Frame G with compose(f, G) = compose(G, f) = identity, phases included.

    The symplectic part of ``lookup`` is GF(2)-linear in the (z, x) coordinates
    of the argument, so the letter strings of the inverse come from a bit-matrix
    inversion; each entry's sign is then fixed by one forward lookup.
    """
    n = f.n
    # column j (< n) is coords(eff_Z_j), column n+j is coords(eff_X_j), where
    # coords(P) packs P's z-bits below its x-bits.
    cols = []
    for entry in list(f.zs) + list(f.xs):
        cols.append(entry.z | (entry.x << n))
    # invert the 2n x 2n matrix given by columns, via [M | I] row reduction
    rows = []
    for i in range(2 * n):
        m_row = 0
        for j in range(2 * n):
            m_row |= ((cols[j] >> i) & 1) << j
        rows.append((m_row, 1 << i))
    pivots = []
    for col in range(2 * n):
        pivot = next(
            (k for k in range(len(pivots), 2 * n) if (rows[k][0] >> col) & 1), None
        )
        if pivot is None:
            raise FrameError("frame is not invertible (malformed)")
        k = len(pivots)
        rows[k], rows[pivot] = rows[pivot], rows[k]
        for other in range(2 * n):
            if other != k and (rows[other][0] >> col) & 1:
                rows[other] = (rows[other][0] ^ rows[k][0], rows[other][1] ^ rows[k][1])
        pivots.append(col)
    inv_cols = []
    for j in range(2 * n):
        c = 0
        for i in range(2 * n):
            c |= ((rows[i][1] >> j) & 1) << i
        inv_cols.append(c)

    def entry_from_coords(coords: int, target: Pauli) -> Pauli:
        q = Pauli(n, coords >> n, coords & ((1 << n) - 1), 0)
        image = f.lookup(q)
        if image == target:
            return q
        if image == target.negate():
            return q.negate()
        raise FrameError("sign solve failed (malformed frame)")

    zs = tuple(
        entry_from_coords(inv_cols[j], Pauli.single(n, j, "Z")) for j in range(n)
    )
    xs = tuple(
        entry_from_coords(inv_cols[n + j], Pauli.single(n, j, "X")) for j in range(n)
    )
    return PauliFrame(n, zs, xs)


def pauli_frame(p: Pauli) -> PauliFrame:
    """Frame of the Pauli gate P: flips the sign of anticommuting entries."""
    if not p.is_hermitian():
        raise FrameError("Pauli gate must be Hermitian")
    n = p.n
    zs = []
    xs = []
    for q in range(n):
        z = Pauli.single(n, q, "Z")
        x = Pauli.single(n, q, "X")
        zs.append(z.negate() if p.commutator(z) else z)
        xs.append(x.negate() if p.commutator(x) else x)
    return PauliFrame(n, tuple(zs), tuple(xs))


def rotation_frame(p: Pauli, quarter_turns: int) -> PauliFrame:
    """Frame of exp(-i·(k·π/2)/2·P) for integer k (a Clifford rotation)."""
    if not p.is_hermitian():
        raise FrameError("rotation axis must be Hermitian")
    k = quarter_turns % 4
    if p.phase == 2:
        p, k = p.positive(), (-quarter_turns) % 4
    if k == 0:
        return PauliFrame.identity(p.n)
    if k == 2:
        return pauli_frame(p)
    n = p.n
    zs = []
    xs = []
    for q in range(n):
        for basis, out in ((Pauli.single(n, q, "Z"), zs), (Pauli.single(n, q, "X"), xs)):
            if p.commutator(basis) == 0:
                out.append(basis)
            else:
                # U† q U = ±i·P·q for anticommuting q, sign set by k = 1 vs 3
                img = p.mul(basis)
                img = img.with_phase(img.phase + (1 if k == 1 else 3))
                out.append(img)
    return PauliFrame(n, tuple(zs), tuple(xs))


def tqe_frame(sigma1: str, sigma2: str, i: int, j: int, n: int) -> PauliFrame:
    """Frame of the two-qubit entangling Clifford controlled between bases.

    The gate is (I⊗I + σ1⊗I + I⊗σ2 − σ1⊗σ2)/2 on qubits (i, j); CNOT is
    (Z, X) and CZ is (Z, Z).  Its inverse conjugation sends q_i to
    q_i·(σ2)_j when q anticommutes with σ1 (and symmetrically for q_j).
    """
    if i == j:
        raise FrameError("TQE qubits must differ")
    if not (0 <= i < n and 0 <= j < n):
        raise FrameError("TQE qubit out of range")
    sigma1 = sigma1.upper()
    sigma2 = sigma2.upper()
    if sigma1 not in PAULI_LETTERS or sigma2 not in PAULI_LETTERS:
        raise FrameError(f"bad TQE basis ({sigma1}, {sigma2})")
    s1 = Pauli.single(n, i, sigma1)
    s2 = Pauli.single(n, j, sigma2)
    zs = []
    xs = []
    for q in range(n):
        for basis, out in ((Pauli.single(n, q, "Z"), zs), (Pauli.single(n, q, "X"), xs)):
            img = basis
            if q == i and s1.commutator(basis):
                img = img.mul(s2)
            elif q == j and s2.commutator(basis):
                img = img.mul(s1)
            out.append(img)
    return PauliFrame(n, tuple(zs), tuple(xs))


def _permuted_identity(n: int, a: int, b: int) -> PauliFrame:
    perm = list(range(n))
    perm[a], perm[b] = perm[b], perm[a]
    return PauliFrame(
        n,
        tuple(Pauli.single(n, perm[q], "Z") for q in range(n)),
        tuple(Pauli.single(n, perm[q], "X") for q in range(n)),
    )


def from_gate(kind: str, qubits: tuple[int, ...], n: int) -> PauliFrame:
    """Frame of a named Clifford gate acting on ``qubits`` in an n-qubit space."""
    kind = kind.lower()
    for q in qubits:
        if not 0 <= q < n:
            raise FrameError(f"qubit {q} out of range for width {n}")
    if kind in ("h", "s", "sdg", "x", "y", "z"):
        (q,) = qubits
        if kind == "h":
            f = PauliFrame.identity(n)
            zs = list(f.zs)
            xs = list(f.xs)
            zs[q], xs[q] = xs[q], zs[q]
            return PauliFrame(n, tuple(zs), tuple(xs))
        if kind == "s":
            return rotation_frame(Pauli.single(n, q, "Z"), 1)
        if kind == "sdg":
            return rotation_frame(Pauli.single(n, q, "Z"), 3)
        return pauli_frame(Pauli.single(n, q, kind.upper()))
    if kind == "cnot":
        c, t = qubits
        return tqe_frame("Z", "X", c, t, n)
    if kind == "cz":
        a, b = qubits
        return tqe_frame("Z", "Z", a, b, n)
    if kind == "swap":
        a, b = qubits
        return _permuted_identity(n, a, b)
    raise FrameError(f"unsupported Clifford gate {kind!r}")
