"""Quantum states, Kraus channels, and the glued channel family.

Basis conventions (fixed once, used by every constructor and golden file):

* ``channel_N(lam, p)`` maps a qubit into a 4-dimensional output split as
  two direct-sum blocks: indices {0, 1} carry the transmitted qubit with
  weight ``1 - lam``; indices {2, 3} carry the dephasing-complement output
  with weight ``lam``.
* ``complement_N(lam, p)`` maps a qubit into a 3-dimensional environment:
  index 0 is the flag state (weight ``1 - lam``), indices {1, 2} carry the
  dephasing output (weight ``lam``).  The flag lives in its own 1-dimensional
  block so that the two branches stay orthogonal.
* Choi states are normalized to trace 1 and ordered reference-first:
  ``(I (x) ch)`` applied to the maximally entangled input.

The conditional states used by the dephasing complement are
``|phi0> = sqrt(1-p)|0> + sqrt(p)|1>`` and
``|phi1> = sqrt(1-p)|0> - sqrt(p)|1>``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import qmath
from .errors import DomainError, NotAState, ShapeMismatch
from .qmath import embed_operator, partial_trace, von_neumann_entropy

I2 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)

COMPLETENESS_TOL = 1e-10
BLOCK_SUPPORT_TOL = 1e-12


def _check_prob(name: str, value: float) -> float:
    v = float(value)
    if not 0.0 <= v <= 1.0:
        raise DomainError(f"{name} must lie in [0, 1], got {value!r}")
    return v


@dataclass(frozen=True)
class DensityMatrix:
    """Validated density operator: Hermitian, trace 1, eigenvalues >= -1e-10."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        object.__setattr__(self, "matrix", m)
        qmath.state_eigenvalues(m)  # validates; raises NotAState / NonHermitian

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def entropy(self) -> float:
        return von_neumann_entropy(self.matrix)


@dataclass(frozen=True)
class PureState:
    """Unit-norm state vector."""

    amplitudes: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.amplitudes, dtype=complex).ravel()
        norm = float(np.linalg.norm(v))
        if abs(norm - 1.0) > 1e-10:
            raise NotAState(f"amplitude norm {norm!r} is not 1 within 1e-10")
        object.__setattr__(self, "amplitudes", v)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def projector(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())

    def density(self) -> DensityMatrix:
        return DensityMatrix(self.projector())


@dataclass(frozen=True)
class KrausChannel:
    """Channel in Kraus form, optionally with a declared direct-sum output.

    ``blocks`` is a tuple of ``(offset, size)`` pairs tiling the output space;
    when present, every (nonzero) Kraus operator must write into exactly one
    block, which is what makes the block flag measurable.
    """

    dim_in: int
    dim_out: int
    kraus: tuple
    blocks: Optional[tuple] = None

    def __post_init__(self):
        ops = tuple(np.asarray(k, dtype=complex) for k in self.kraus)
        if not ops:
            raise ShapeMismatch("a channel needs at least one Kraus operator")
        for k in ops:
            if k.shape != (self.dim_out, self.dim_in):
                raise ShapeMismatch(
                    f"Kraus operator shape {k.shape} != ({self.dim_out}, {self.dim_in})"
                )
        object.__setattr__(self, "kraus", ops)
        comp = sum(k.conj().T @ k for k in ops)
        resid = np.abs(comp - np.eye(self.dim_in)).max()
        if resid > COMPLETENESS_TOL:
            raise NotAState(f"Kraus completeness residual {resid:.3e} exceeds 1e-10")
        if self.blocks is not None:
            blocks = tuple((int(o), int(s)) for o, s in self.blocks)
            object.__setattr__(self, "blocks", blocks)
            flat = sorted(i for o, s in blocks for i in range(o, o + s))
            if flat != list(range(self.dim_out)):
                raise ShapeMismatch(f"blocks {blocks} do not tile [0, {self.dim_out})")
            for k in ops:
                rows = np.flatnonzero(np.abs(k).max(axis=1) > BLOCK_SUPPORT_TOL)
                if rows.size == 0:
                    continue  # zero operator carries no weight anywhere
                homes = {self.block_of_row(int(r)) for r in rows}
                if len(homes) != 1:
                    raise ShapeMismatch("a Kraus operator straddles output blocks")

    def block_of_row(self, row: int) -> int:
        if self.blocks is None:
            raise ShapeMismatch("channel has no declared block structure")
        for i, (o, s) in enumerate(self.blocks):
            if o <= row < o + s:
                return i
        raise ShapeMismatch(f"row {row} outside output space")

    def kraus_block_index(self) -> np.ndarray:
        """Block each Kraus operator writes into (-1 for zero operators)."""
        out = []
        for k in self.kraus:
            rows = np.flatnonzero(np.abs(k).max(axis=1) > BLOCK_SUPPORT_TOL)
            out.append(self.block_of_row(int(rows[0])) if rows.size else -1)
        return np.asarray(out, dtype=int)


@dataclass(frozen=True)
class Isometry:
    """Matrix V with V^dag V = I on the input space."""

    dim_in: int
    dim_out: int
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (self.dim_out, self.dim_in):
            raise ShapeMismatch(f"isometry shape {m.shape} != ({self.dim_out}, {self.dim_in})")
        resid = np.abs(m.conj().T @ m - np.eye(self.dim_in)).max()
        if resid > 1e-10:
            raise NotAState(f"V^dag V residual {resid:.3e} exceeds 1e-10")
        object.__setattr__(self, "matrix", m)


@dataclass(frozen=True)
class ChoiState:
    """Trace-1 Choi state, reference factor first, output factor second."""

    dim_in: int
    dim_out: int
    state: DensityMatrix

    def __post_init__(self):
        if self.state.dim != self.dim_in * self.dim_out:
            raise ShapeMismatch("Choi state dimension does not match dim_in * dim_out")
        marg = partial_trace(self.state.matrix, (self.dim_in, self.dim_out), "second")
        resid = np.abs(marg - np.eye(self.dim_in) / self.dim_in).max()
        if resid > 1e-10:
            raise NotAState(f"Choi reference marginal residual {resid:.3e} exceeds 1e-10")


# ---------------------------------------------------------------------------
# elementary states


def ket(index: int, dim: int) -> np.ndarray:
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v


def phi_states(p: float) -> tuple[np.ndarray, np.ndarray]:
    """The conditional output vectors |phi0>, |phi1> for dephasing weight p."""
    p = _check_prob("p", p)
    a, b = np.sqrt(1.0 - p), np.sqrt(p)
    return np.array([a, b], dtype=complex), np.array([a, -b], dtype=complex)


def maximally_mixed(dim: int) -> DensityMatrix:
    return DensityMatrix(np.eye(dim, dtype=complex) / dim)


def maximally_entangled(dim: int) -> PureState:
    v = np.zeros(dim * dim, dtype=complex)
    for i in range(dim):
        v[i * dim + i] = 1.0
    return PureState(v / np.sqrt(dim))


# ---------------------------------------------------------------------------
# channel constructors


def dephasing_channel(p: float) -> KrausChannel:
    """Phase flip with probability p: rho -> (1-p) rho + p Z rho Z."""
    p = _check_prob("p", p)
    kraus = (np.sqrt(1.0 - p) * I2, np.sqrt(p) * PAULI_Z)
    return KrausChannel(2, 2, kraus)


def complementary_dephasing(p: float) -> KrausChannel:
    """Complement of the dephasing channel.

    Measures the input in the computational basis and prepares |phi0> or
    |phi1>: rho -> <0|rho|0> phi0 + <1|rho|1> phi1.
    """
    p = _check_prob("p", p)
    phi0, phi1 = phi_states(p)
    kraus = (np.outer(phi0, ket(0, 2).conj()), np.outer(phi1, ket(1, 2).conj()))
    return KrausChannel(2, 2, kraus)


def channel_N(lam: float, p: float) -> KrausChannel:
    """Glued channel: identity with weight 1-lam, dephasing complement with weight lam.

    Output blocks: {0,1} identity, {2,3} dephasing complement.
    """
    lam = _check_prob("lambda", lam)
    p = _check_prob("p", p)
    phi0, phi1 = phi_states(p)
    kraus = (
        np.sqrt(1.0 - lam) * embed_operator(I2, 0, 4),
        np.sqrt(lam) * embed_operator(np.outer(phi0, ket(0, 2).conj()), 2, 4),
        np.sqrt(lam) * embed_operator(np.outer(phi1, ket(1, 2).conj()), 2, 4),
    )
    return KrausChannel(2, 4, kraus, blocks=((0, 2), (2, 2)))


def complement_N(lam: float, p: float) -> KrausChannel:
    """Environment side of the glued channel.

    Output blocks: {0} flag (weight 1-lam), {1,2} dephasing (weight lam).
    """
    lam = _check_prob("lambda", lam)
    p = _check_prob("p", p)
    flag = ket(0, 3)
    kraus = (
        np.sqrt(1.0 - lam) * np.outer(flag, ket(0, 2).conj()),
        np.sqrt(1.0 - lam) * np.outer(flag, ket(1, 2).conj()),
        np.sqrt(lam) * embed_operator(np.sqrt(1.0 - p) * I2, 1, 3),
        np.sqrt(lam) * embed_operator(np.sqrt(p) * PAULI_Z, 1, 3),
    )
    return KrausChannel(2, 3, kraus, blocks=((0, 1), (1, 2)))


def isometry_N(lam: float, p: float) -> Isometry:
    """Isometric extension of the glued channel into B (x) C, |B|=4, |C|=3.

    Tracing out C reproduces ``channel_N``; tracing out B reproduces
    ``complement_N``, with the block layouts documented in the module header.
    """
    lam = _check_prob("lambda", lam)
    p = _check_prob("p", p)
    v = np.zeros((12, 2), dtype=complex)  # index (b, c) -> 3*b + c
    sl, cl = np.sqrt(lam), np.sqrt(1.0 - lam)
    sp, cp = np.sqrt(p), np.sqrt(1.0 - p)
    for a in range(2):
        # branch kept in B: qubit in B block {0,1}, flag at C index 0
        v[3 * a + 0, a] += cl
        # branch dephased: B block {2,3} holds the complement output basis,
        # C block {1,2} holds the dephasing output
        for b1 in range(2):
            amp = cp if b1 == 0 else sp
            z = 1.0 if (b1 == 0 or a == 0) else -1.0
            v[3 * (2 + b1) + (1 + a), a] += sl * amp * z
    return Isometry(2, 12, v)


def comparison_channel_T(lam: float, p: float) -> KrausChannel:
    """Trace-and-replace-by-phi0 with weight lam, identity with weight 1-lam.

    Shares the output block convention of ``channel_N``.
    """
    lam = _check_prob("lambda", lam)
    p = _check_prob("p", p)
    phi0, _ = phi_states(p)
    kraus = (
        np.sqrt(1.0 - lam) * embed_operator(I2, 0, 4),
        np.sqrt(lam) * embed_operator(np.outer(phi0, ket(0, 2).conj()), 2, 4),
        np.sqrt(lam) * embed_operator(np.outer(phi0, ket(1, 2).conj()), 2, 4),
    )
    return KrausChannel(2, 4, kraus, blocks=((0, 2), (2, 2)))


def erasure_channel(lam: float) -> KrausChannel:
    """Transmit with probability 1-lam, output the flag at index 2 otherwise."""
    lam = _check_prob("lambda", lam)
    flag = ket(2, 3)
    kraus = (
        np.sqrt(1.0 - lam) * embed_operator(I2, 0, 3),
        np.sqrt(lam) * np.outer(flag, ket(0, 2).conj()),
        np.sqrt(lam) * np.outer(flag, ket(1, 2).conj()),
    )
    return KrausChannel(2, 3, kraus, blocks=((0, 2), (2, 1)))


def channel_from_isometry(v: Isometry, dims: tuple[int, int], keep: str) -> KrausChannel:
    """Channel obtained from an isometry into a bipartite output.

    ``dims = (d_first, d_second)`` factors the isometry output; ``keep`` names
    the retained factor, the other one is traced out.
    """
    d1, d2 = int(dims[0]), int(dims[1])
    if d1 * d2 != v.dim_out:
        raise ShapeMismatch(f"dims {dims} do not factor isometry output {v.dim_out}")
    m = v.matrix.reshape(d1, d2, v.dim_in)
    if keep == "first":
        kraus = tuple(m[:, c, :] for c in range(d2))
        return KrausChannel(v.dim_in, d1, kraus)
    if keep == "second":
        kraus = tuple(m[b, :, :] for b in range(d1))
        return KrausChannel(v.dim_in, d2, kraus)
    raise ShapeMismatch(f"keep must be 'first' or 'second', got {keep!r}")


# ---------------------------------------------------------------------------
# channel action


def apply_kraus(kraus: Sequence[np.ndarray], rho: np.ndarray) -> np.ndarray:
    return sum(k @ rho @ k.conj().T for k in kraus)


def apply(ch: KrausChannel, rho) -> DensityMatrix:
    """Apply a channel to a state: rho -> sum_i K_i rho K_i^dag."""
    m = np.asarray(getattr(rho, "matrix", rho), dtype=complex)
    if m.shape != (ch.dim_in, ch.dim_in):
        raise ShapeMismatch(f"state shape {m.shape} != channel input {ch.dim_in}")
    qmath.state_eigenvalues(m)
    return DensityMatrix(apply_kraus(ch.kraus, m))


def apply_with_reference(ch: KrausChannel, rho_ar, dim_ref: int) -> DensityMatrix:
    """Apply a channel to the first factor of a bipartite state A (x) R."""
    m = np.asarray(getattr(rho_ar, "matrix", rho_ar), dtype=complex)
    d = ch.dim_in * dim_ref
    if m.shape != (d, d):
        raise ShapeMismatch(f"state shape {m.shape} != ({d}, {d})")
    ir = np.eye(dim_ref, dtype=complex)
    out = apply_kraus([np.kron(k, ir) for k in ch.kraus], m)
    return DensityMatrix(out)


def choi(ch: KrausChannel) -> ChoiState:
    """Choi state (I (x) ch) applied to the maximally entangled input."""
    phi = maximally_entangled(ch.dim_in).projector()
    ia = np.eye(ch.dim_in, dtype=complex)
    out = apply_kraus([np.kron(ia, k) for k in ch.kraus], phi)
    return ChoiState(ch.dim_in, ch.dim_out, DensityMatrix(out))


def channel_distance(a: KrausChannel, b: KrausChannel) -> float:
    """Max entrywise Choi-state difference; zero iff the channels are equal."""
    if (a.dim_in, a.dim_out) != (b.dim_in, b.dim_out):
        raise ShapeMismatch("channels act on different spaces")
    return float(np.abs(choi(a).state.matrix - choi(b).state.matrix).max())


def compose(second: KrausChannel, first: KrausChannel) -> KrausChannel:
    """Channel composition second(first(.))."""
    if first.dim_out != second.dim_in:
        raise ShapeMismatch("composition dimensions do not match")
    kraus = tuple(k2 @ k1 for k2 in second.kraus for k1 in first.kraus)
    return KrausChannel(first.dim_in, second.dim_out, kraus)


# ---------------------------------------------------------------------------
# golden-file dump format: one line per entry, "row col re im", 17 digits


def matrix_dump(m) -> str:
    a = np.asarray(getattr(m, "matrix", m), dtype=complex)
    lines = []
    for r in range(a.shape[0]):
        for c in range(a.shape[1]):
            lines.append(f"{r} {c} {a[r, c].real:.17g} {a[r, c].imag:.17g}")
    return "\n".join(lines) + "\n"


def matrix_load(text: str) -> np.ndarray:
    rows, cols, vals = [], [], []
    for line in text.strip().splitlines():
        r, c, re_part, im_part = line.split()
        rows.append(int(r))
        cols.append(int(c))
        vals.append(complex(float(re_part), float(im_part)))
    out = np.zeros((max(rows) + 1, max(cols) + 1), dtype=complex)
    for r, c, v in zip(rows, cols, vals):
        out[r, c] = v
    return out
