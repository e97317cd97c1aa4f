"""Coherent information, capacity closed forms, bounds, and figure sweeps.

Closed forms implemented here, all in qubits (or private bits) per use:

* one-way capacity of the glued channel, degradable regime
  ``lam <= 1/2``:        ``1 - lam * (2 - H(p))``
* two-way capacity, all ``lam``:  ``1 - lam`` (independent of ``p``)
* complement two-way capacity (``lam <= 1/2``):  ``lam * (1 - H(p))``,
  which is also a relative-entropy upper bound valid for every ``lam``
* erasure reference values:  ``max(0, 1 - 2 lam)`` and ``1 - lam``
* lower bound from one-shot coherent information:
  ``max(0, 1 - lam(2 - H(p)))``
* continuity upper bound via the closeness ``eps = 4 lam sqrt(p(1-p))`` to an
  antidegradable trace-and-replace channel:
  ``min(1 - lam, 4 eps + 2 (2 + eps) H(eps / (2 + eps)))``
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import channels as chn
from .channels import (
    KrausChannel,
    PAULI_X,
    PAULI_Z,
    channel_N,
    comparison_channel_T,
    complement_N,
    compose,
    ket,
    maximally_entangled,
)
from .errors import ChancapError, DomainError, PreconditionViolated, ShapeMismatch
from .qmath import binary_entropy, embed_operator, partial_trace, von_neumann_entropy
from .sampling import STREAM_DIAMOND_SEARCH, STREAM_QUANTUM_PROTOCOL, stream_rng

GRID_STEP = 0.1  # coarse Bloch-ball scan used before pattern refinement


def _check_prob(name: str, value: float) -> float:
    v = float(value)
    if not 0.0 <= v <= 1.0:
        raise DomainError(f"{name} must lie in [0, 1], got {value!r}")
    return v


def _check_degradable_lambda(lam: float) -> float:
    lam = float(lam)
    if not 0.0 <= lam <= 0.5:
        raise DomainError(
            f"lambda must lie in [0, 1/2] for a certified value, got {lam!r}; "
            "use the lower/upper bounds above 1/2"
        )
    return lam


# ---------------------------------------------------------------------------
# sweep / sequence row types


@dataclass(frozen=True)
class CapacityCurvePoint:
    """One row of a figure sweep.  ``one_way`` is None when not certified."""

    x: float
    lam: float
    p: float
    one_way: Optional[float]
    two_way: float
    lower_bound: Optional[float] = None
    upper_bound: Optional[float] = None

    def __post_init__(self):
        vals = [self.x, self.lam, self.p, self.two_way]
        vals += [v for v in (self.one_way, self.lower_bound, self.upper_bound) if v is not None]
        if any(not (-1e-12 <= v <= 1.0 + 1e-12) for v in vals):
            raise DomainError(f"curve point has a value outside [0, 1]: {self}")
        if self.one_way is not None:
            if self.lower_bound is not None and self.lower_bound > self.one_way + 1e-12:
                raise DomainError("lower bound exceeds certified one-way value")
            if self.one_way > self.two_way + 1e-9:
                raise DomainError("certified one-way value exceeds two-way value")


@dataclass(frozen=True)
class SequenceItem:
    """One element of the alternating-bounds sequence."""

    n: int
    x_n: float
    q_lb: float
    q_ub: float
    q_two_way: float


# ---------------------------------------------------------------------------
# coherent information


def _entropies_bits(stack: np.ndarray) -> np.ndarray:
    """Von Neumann entropies (bits) of a stack of Hermitian PSD matrices."""
    w = np.clip(np.linalg.eigvalsh(stack), 0.0, None)
    logs = np.where(w > 0.0, np.log2(np.where(w > 0.0, w, 1.0)), 0.0)
    return -(w * logs).sum(axis=-1)


def _apply_stack(kraus: np.ndarray, rhos: np.ndarray) -> np.ndarray:
    """Apply one channel (Kraus stack, shape (m, dout, din)) to stacked states."""
    return np.einsum("aij,njk,alk->nil", kraus, rhos, kraus.conj(), optimize=True)


def coherent_information(ch: KrausChannel, comp: KrausChannel, rho) -> float:
    """H(ch(rho)) - H(comp(rho)) for a channel/complement pair, in bits."""
    if ch.dim_in != comp.dim_in:
        raise ShapeMismatch("channel and complement act on different input spaces")
    out = chn.apply(ch, rho)
    env = chn.apply(comp, rho)
    return out.entropy() - env.entropy()


def coherent_information_state(rho_ab, dims: tuple[int, int]) -> float:
    """H(B) - H(AB) of a bipartite state with declared factor dimensions."""
    m = np.asarray(getattr(rho_ab, "matrix", rho_ab), dtype=complex)
    da, db = int(dims[0]), int(dims[1])
    if m.shape != (da * db, da * db):
        raise ShapeMismatch(f"state shape {m.shape} does not match dims {dims}")
    marg_b = partial_trace(m, (da, db), "first")
    return von_neumann_entropy(marg_b) - von_neumann_entropy(m)


def _bloch_states(rs: np.ndarray) -> np.ndarray:
    """Stack of qubit states (I + r . sigma)/2 for Bloch vectors rs (n, 3)."""
    n = rs.shape[0]
    rho = np.empty((n, 2, 2), dtype=complex)
    x, y, z = rs[:, 0], rs[:, 1], rs[:, 2]
    rho[:, 0, 0] = (1.0 + z) / 2
    rho[:, 1, 1] = (1.0 - z) / 2
    rho[:, 0, 1] = (x - 1j * y) / 2
    rho[:, 1, 0] = (x + 1j * y) / 2
    return rho


def _ic_evaluator(lam: float, p: float) -> Callable[[np.ndarray], np.ndarray]:
    kn = np.stack(channel_N(lam, p).kraus)
    kc = np.stack(complement_N(lam, p).kraus)

    def evaluate(rs: np.ndarray) -> np.ndarray:
        rhos = _bloch_states(rs)
        return _entropies_bits(_apply_stack(kn, rhos)) - _entropies_bits(_apply_stack(kc, rhos))

    return evaluate


def maximize_coherent_information(
    lam: float, p: float, tol: float = 1e-6
) -> tuple[float, np.ndarray]:
    """Maximize the one-shot coherent information over the Bloch ball.

    Coarse grid scan (step 0.1) followed by a coordinate pattern search that
    halves the step down to ``tol``.  Returns (value, argmax Bloch vector).
    Ties are broken toward the smallest Bloch norm so that flat landscapes
    report the maximally mixed input.
    """
    lam = _check_prob("lambda", lam)
    p = _check_prob("p", p)
    if tol < 1e-8:
        raise DomainError(f"tol must be >= 1e-8, got {tol!r}")
    evaluate = _ic_evaluator(lam, p)

    axis = np.arange(-10, 11) / 10.0
    gx, gy, gz = np.meshgrid(axis, axis, axis, indexing="ij")
    pts = np.column_stack([gx.ravel(), gy.ravel(), gz.ravel()])
    norms = np.linalg.norm(pts, axis=1)
    pts = pts[norms <= 1.0 + 1e-12]
    pts = pts[np.argsort(np.linalg.norm(pts, axis=1), kind="stable")]
    vals = evaluate(pts)
    # smallest-norm point within roundoff of the grid maximum, so that flat
    # landscapes resolve to the maximally mixed input
    best = int(np.argmax(vals >= vals.max() - 1e-12))
    r, f = pts[best].copy(), float(vals[best])

    step = GRID_STEP
    while step >= tol:
        improved = True
        while improved:
            improved = False
            for d in range(3):
                for s in (1.0, -1.0):
                    cand = r.copy()
                    cand[d] += s * step
                    nrm = np.linalg.norm(cand)
                    if nrm > 1.0:
                        cand /= nrm
                    fc = float(evaluate(cand[None, :])[0])
                    if fc > f + 1e-12:
                        r, f = cand, fc
                        improved = True
        step /= 2.0
    return f, r


# ---------------------------------------------------------------------------
# closed forms


def one_way_capacity(lam: float, p: float) -> float:
    """1 - lam (2 - H(p)); certified only in the degradable regime lam <= 1/2."""
    lam = _check_degradable_lambda(lam)
    p = _check_prob("p", p)
    return 1.0 - lam * (2.0 - binary_entropy(p))


def two_way_capacity(lam: float) -> float:
    """1 - lam, for every lam in [0, 1] (independent of the dephasing weight)."""
    lam = _check_prob("lambda", lam)
    return 1.0 - lam


def complement_one_way_capacity(lam: float, p: float) -> float:
    """Zero: the environment channel is antidegradable when lam <= 1/2."""
    _check_degradable_lambda(lam)
    _check_prob("p", p)
    return 0.0


def complement_two_way_capacity(lam: float, p: float) -> float:
    """lam (1 - H(p)), certified for lam <= 1/2."""
    lam = _check_degradable_lambda(lam)
    p = _check_prob("p", p)
    return lam * (1.0 - binary_entropy(p))


def er_bound_complement(lam: float, p: float) -> float:
    """Relative-entropy upper bound lam (1 - H(p)), valid for every lam."""
    lam = _check_prob("lambda", lam)
    p = _check_prob("p", p)
    return lam * (1.0 - binary_entropy(p))


def erasure_capacities(lam: float) -> tuple[float, float]:
    """(one-way, two-way) reference values for the plain erasure channel."""
    lam = _check_prob("lambda", lam)
    return max(0.0, 1.0 - 2.0 * lam), 1.0 - lam


def coherent_info_lower_bound(lam: float, p: float) -> float:
    """max(0, 1 - lam (2 - H(p))), valid for every lam."""
    lam = _check_prob("lambda", lam)
    p = _check_prob("p", p)
    return max(0.0, 1.0 - lam * (2.0 - binary_entropy(p)))


def _continuity_entropic(lam: float, p: float) -> float:
    eps = 4.0 * lam * float(np.sqrt(p * (1.0 - p)))
    return 4.0 * eps + 2.0 * (2.0 + eps) * binary_entropy(eps / (2.0 + eps))


def continuity_upper_bound(lam: float, p: float) -> float:
    """min(1 - lam, 4 eps + 2 (2 + eps) H(eps/(2+eps))) with eps = 4 lam sqrt(p(1-p)).

    A capacity upper bound in the non-degradable regime lam >= 1/2 (where the
    trace-and-replace comparison channel is antidegradable); below 1/2 the
    expression is still well defined but no longer bounds the capacity.
    """
    lam = _check_prob("lambda", lam)
    p = _check_prob("p", p)
    return min(1.0 - lam, _continuity_entropic(lam, p))


# ---------------------------------------------------------------------------
# distance to the antidegradable comparison channel


def diamond_distance_to_T(
    lam: float, p: float, restarts: int = 200, tol: float = 1e-6, seed: int = 0
) -> tuple[float, float]:
    """Estimate the stabilized distance between the glued channel and its
    antidegradable comparison channel.

    Returns ``(estimate, analytic)`` where ``analytic = 4 lam sqrt(p(1-p))``
    is the exact value and ``estimate`` maximizes the trace-norm difference
    over sampled-and-refined pure two-qubit inputs (channel on the first
    qubit, reference on the second).  The estimate never exceeds the analytic
    value beyond roundoff and reaches it to ~1e-3 at the default restarts: the
    optimum sits at inputs carrying full weight on |1>.
    """
    lam = _check_prob("lambda", lam)
    p = _check_prob("p", p)
    if restarts < 1:
        raise DomainError(f"restarts must be >= 1, got {restarts!r}")
    if tol <= 0.0:
        raise DomainError(f"tol must be positive, got {tol!r}")
    analytic = 4.0 * lam * float(np.sqrt(p * (1.0 - p)))

    i2 = np.eye(2, dtype=complex)
    kn = np.stack([np.kron(k, i2) for k in channel_N(lam, p).kraus])
    kt = np.stack([np.kron(k, i2) for k in comparison_channel_T(lam, p).kraus])

    def objective(psis: np.ndarray) -> np.ndarray:
        rhos = np.einsum("ni,nj->nij", psis, psis.conj())
        delta = _apply_stack(kn, rhos) - _apply_stack(kt, rhos)
        return np.abs(np.linalg.eigvalsh(delta)).sum(axis=-1)

    rng = stream_rng(seed, STREAM_DIAMOND_SEARCH)
    psis = rng.normal(size=(restarts, 4)) + 1j * rng.normal(size=(restarts, 4))
    psis /= np.linalg.norm(psis, axis=1, keepdims=True)
    f = objective(psis)

    step = 0.5
    floor = max(tol, 1e-7)
    idle_levels = 0
    while step >= floor:
        if step < 0.1 and f.size > 32:
            # the surviving climbers all chase the same optimum; keep the best
            keep = np.argpartition(f, -32)[-32:]
            psis, f = psis[keep], f[keep]
        moved = False
        for _ in range(32):  # sweeps at this step size
            improved = False
            for coord in range(8):
                for sign in (1.0, -1.0):
                    cand = psis.copy()
                    if coord < 4:
                        cand[:, coord] += sign * step
                    else:
                        cand[:, coord - 4] += 1j * sign * step
                    cand /= np.linalg.norm(cand, axis=1, keepdims=True)
                    fc = objective(cand)
                    mask = fc > f + 1e-12
                    if mask.any():
                        psis[mask] = cand[mask]
                        f[mask] = fc[mask]
                        improved = True
                        moved = True
            if not improved:
                break
        idle_levels = 0 if moved else idle_levels + 1
        if idle_levels >= 2 and step <= 1e-4:
            break  # every restart is stationary well below the target scale
        step /= 2.0
    return float(f.max()), analytic


# ---------------------------------------------------------------------------
# degradability


def degrading_map(lam: float, p: float) -> KrausChannel:
    """Measure-and-prepare map R with R(channel(rho)) = complement(rho).

    On the dephasing-complement block it prepares the flag; on the identity
    block it prepares the flag with probability ``x = (1-2 lam)/(1- lam)`` and
    otherwise dephases the qubit into the environment's dephasing block.
    Only defined for lam <= 1/2 (above that x would be negative).
    """
    lam = float(lam)
    if not 0.0 <= lam <= 0.5:
        raise DomainError(
            f"degrading map exists for lambda in [0, 1/2], got {lam!r}"
        )
    p = _check_prob("p", p)
    x = (1.0 - 2.0 * lam) / (1.0 - lam)
    flag = ket(0, 3)

    def dephase_identity_block(op2: np.ndarray) -> np.ndarray:
        # act with a qubit operator on input block {0,1}, landing in rows {1,2}
        out = np.zeros((3, 4), dtype=complex)
        out[1:3, 0:2] = op2
        return out

    kraus = (
        np.outer(flag, ket(2, 4).conj()),
        np.outer(flag, ket(3, 4).conj()),
        np.sqrt(x) * np.outer(flag, ket(0, 4).conj()),
        np.sqrt(x) * np.outer(flag, ket(1, 4).conj()),
        np.sqrt((1.0 - x) * (1.0 - p)) * dephase_identity_block(np.eye(2, dtype=complex)),
        np.sqrt((1.0 - x) * p) * dephase_identity_block(PAULI_Z),
    )
    return KrausChannel(4, 3, kraus, blocks=((0, 1), (1, 2)))


def verify_degradable(lam: float, p: float) -> float:
    """Entrywise Choi residual between R(channel(.)) and the complement."""
    r = degrading_map(lam, p)
    return chn.channel_distance(compose(r, channel_N(lam, p)), complement_N(lam, p))


def ic_conjugation_residual(lam: float, p: float, rho) -> tuple[float, float]:
    """Coherent-information change under Z and X conjugation of the input."""
    m = np.asarray(getattr(rho, "matrix", rho), dtype=complex)
    n, nb = channel_N(lam, p), complement_N(lam, p)
    base = coherent_information(n, nb, m)
    dz = abs(base - coherent_information(n, nb, PAULI_Z @ m @ PAULI_Z))
    dx = abs(base - coherent_information(n, nb, PAULI_X @ m @ PAULI_X))
    return dz, dx


# ---------------------------------------------------------------------------
# derivative condition along a parameter curve


def derivative_check(
    p_of_lambda: Callable[[float], float], lam: float
) -> tuple[float, float]:
    """Compare the analytic capacity derivative along a curve p(lambda) with a
    finite difference of the capacity itself.

    analytic = H(p) - 2 + lam p'(lam) log2((1-p)/p) with p' from a central
    difference (step 1e-6); numeric differentiates the closed-form capacity
    (step 1e-5).  Diverges near p in {0, 1}, hence the domain guard.
    """
    h_curve, h_cap = 1e-6, 1e-5
    lam = float(lam)
    if lam - h_cap < 0.0 or lam + h_cap > 0.5:
        raise DomainError("lambda must sit inside [0, 1/2] by at least 1e-5")
    p0 = float(p_of_lambda(lam))
    if min(p0, 1.0 - p0) <= 1e-6:
        raise DomainError("derivative of the binary entropy diverges near p in {0, 1}")
    p_plus = float(p_of_lambda(lam + h_curve))
    p_minus = float(p_of_lambda(lam - h_curve))
    if not (0.0 < p_plus < 1.0 and 0.0 < p_minus < 1.0):
        raise DomainError("curve leaves (0, 1) within the finite-difference stencil")
    p_prime = (p_plus - p_minus) / (2.0 * h_curve)
    analytic = (
        binary_entropy(p0) - 2.0 + lam * p_prime * float(np.log2((1.0 - p0) / p0))
    )
    numeric = (
        one_way_capacity(lam + h_cap, float(p_of_lambda(lam + h_cap)))
        - one_way_capacity(lam - h_cap, float(p_of_lambda(lam - h_cap)))
    ) / (2.0 * h_cap)
    return analytic, numeric


def derivative_condition_margin(p_of_lambda, lam: float) -> float:
    """p'(lam) - 2 p(lam)/lam: positive margin certifies an increasing capacity."""
    h = 1e-6
    p0 = float(p_of_lambda(lam))
    p_prime = (float(p_of_lambda(lam + h)) - float(p_of_lambda(lam - h))) / (2.0 * h)
    return p_prime - 2.0 * p0 / lam


# ---------------------------------------------------------------------------
# alternating-bounds sequence (discrete family construction)


def _bisect_increasing(f, target: float, lo: float, hi: float) -> float:
    """Solve f(t) = target for nondecreasing f with f(lo) <= target <= f(hi).

    Bisects until the bracket can no longer be split in floating point, which
    is far tighter than the 1e-12 interval contract; the doubly exponential
    shrinkage of the sequence makes an absolute stop useless after two terms.
    """
    for _ in range(4096):
        mid = 0.5 * (lo + hi)
        if not (lo < mid < hi):
            break
        if f(mid) < target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def alternating_bounds_sequence(
    q_lb: Callable[[float], float],
    q_ub: Callable[[float], float],
    q_twoway: Callable[[float], float],
    a: float,
    b: float,
    n_terms: int,
) -> list[SequenceItem]:
    """Build the strictly decreasing parameter sequence that interleaves the
    one-way bounds while the two-way value keeps rising.

    Preconditions (spot-checked on a 100-point grid): ``q_lb(a) = q_ub(a)``,
    ``q_lb <= q_ub`` on [a, b], ``q_ub < q_twoway`` on (a, b], ``q_lb`` and
    ``q_ub`` strictly increasing, ``q_twoway`` strictly decreasing.

    Recursion: x_0 = b; t solves q_ub(t) = q_lb(x_{n-1}); x_n = (t + a)/2.
    """
    if n_terms < 1:
        raise DomainError(f"n_terms must be >= 1, got {n_terms!r}")
    a, b = float(a), float(b)
    if not a < b:
        raise DomainError(f"need a < b, got a={a!r}, b={b!r}")

    grid = np.linspace(a, b, 100)
    lb = np.array([q_lb(x) for x in grid])
    ub = np.array([q_ub(x) for x in grid])
    tw = np.array([q_twoway(x) for x in grid])
    if abs(lb[0] - ub[0]) > 1e-9:
        raise PreconditionViolated(
            f"bounds do not meet at a={a!r}: lb={lb[0]!r}, ub={ub[0]!r}"
        )
    for i, x in enumerate(grid):
        if lb[i] > ub[i] + 1e-12:
            raise PreconditionViolated(f"lower bound exceeds upper bound at x={x!r}")
        if i > 0 and not ub[i] < tw[i]:
            raise PreconditionViolated(f"upper bound not below two-way value at x={x!r}")
    if not np.all(np.diff(lb) > 0.0):
        i = int(np.flatnonzero(np.diff(lb) <= 0.0)[0])
        raise PreconditionViolated(f"lower bound not strictly increasing at x={grid[i + 1]!r}")
    if not np.all(np.diff(ub) > 0.0):
        i = int(np.flatnonzero(np.diff(ub) <= 0.0)[0])
        raise PreconditionViolated(f"upper bound not strictly increasing at x={grid[i + 1]!r}")
    if not np.all(np.diff(tw) < 0.0):
        i = int(np.flatnonzero(np.diff(tw) >= 0.0)[0])
        raise PreconditionViolated(f"two-way value not strictly decreasing at x={grid[i + 1]!r}")

    items: list[SequenceItem] = []
    x_prev = b
    for n in range(1, n_terms + 1):
        target = q_lb(x_prev)
        t = _bisect_increasing(q_ub, target, a, x_prev)
        x_n = 0.5 * (t + a)
        if not a < x_n < x_prev:
            raise PreconditionViolated(
                f"sequence collapsed at term {n}: x_{n}={x_n!r} (parameter underflow)"
            )
        items.append(SequenceItem(n, x_n, q_lb(x_n), q_ub(x_n), q_twoway(x_n)))
        x_prev = x_n

    for prev, cur in zip(items, items[1:]):
        # Strict increase of the two-way value is exactly equivalent to the
        # strict decrease of x through the strictly decreasing curve (verified
        # on the grid above); compare through x because the rounded q_two_way
        # doubles tie once the x difference drops below one ulp of the value.
        ok = cur.x_n < prev.x_n and cur.q_ub < prev.q_lb
        ok = ok and cur.q_two_way >= prev.q_two_way
        if not ok:
            raise PreconditionViolated(
                f"sequence invariant failed between terms {prev.n} and {cur.n}"
            )
    return items


def sequence_bound_curves():
    """Bound curves for the one-parameter family lam(p) = 1/2 + p.

    The lower bound uses the particularized form H(p)/2 - 2p + p H(p), which
    is algebraically equal to 1 - (1/2 + p)(2 - H(p)) but free of the
    catastrophic cancellation that flattens the generic expression to zero
    once p falls below machine epsilon (the sequence shrinks that far by its
    second term).
    """

    def q_lb(p: float) -> float:
        h = binary_entropy(p)
        return max(0.0, 0.5 * h - 2.0 * p + p * h)

    def q_ub(p: float) -> float:
        return continuity_upper_bound(0.5 + p, p)

    def q_tw(p: float) -> float:
        return two_way_capacity(0.5 + p)

    return q_lb, q_ub, q_tw


def sequence_upper_crossing() -> float:
    """Parameter where the entropic upper bound meets 1 - lam on the 1/2+p family.

    Recomputed by bisection rather than trusting the nominal range end 2e-4;
    the sequence driver only uses parameters below min(1e-4, this crossing).
    """

    def gap(p: float) -> float:
        return _continuity_entropic(0.5 + p, p) - (0.5 - p)

    lo, hi = 0.0, 1e-4
    while gap(hi) < 0.0:
        hi *= 2.0
        if hi > 0.125:
            raise PreconditionViolated("no crossing of the upper bound with 1 - lambda")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if not (lo < mid < hi):
            break
        if gap(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def default_sequence(n_terms: int) -> tuple[list[SequenceItem], dict]:
    """Alternating-bounds sequence for lam(p) = 1/2 + p with recomputed range."""
    b_star = sequence_upper_crossing()
    b = min(1e-4, b_star)
    q_lb, q_ub, q_tw = sequence_bound_curves()
    items = alternating_bounds_sequence(q_lb, q_ub, q_tw, 0.0, b, n_terms)
    meta = {
        "family": "lambda(p) = 1/2 + p",
        "upper_crossing": b_star,
        "nominal_range_end": 2.0e-4,
        "b_used": b,
    }
    return items, meta


# ---------------------------------------------------------------------------
# figure sweeps


def sweep_fig3(points: int) -> list[CapacityCurvePoint]:
    """Uniform lambda grid on [0.25, 0.3125] with p = 4 lambda - 1."""
    if points < 2:
        raise DomainError(f"points must be >= 2, got {points!r}")
    out = []
    for lam in np.linspace(0.25, 0.3125, points):
        lam = float(lam)
        p = 4.0 * lam - 1.0
        out.append(
            CapacityCurvePoint(
                x=lam,
                lam=lam,
                p=p,
                one_way=one_way_capacity(lam, p),
                two_way=two_way_capacity(lam),
                lower_bound=coherent_info_lower_bound(lam, p),
                upper_bound=continuity_upper_bound(lam, p),
            )
        )
    return out


def fig4_lambda(p: float) -> float:
    """Parametrization lam(p) = p / log2(1/p).

    Dividing by log2(1/p) rather than log(p) keeps the weight nonnegative
    and inside [0, 1/2] on [0.35, 0.5], and makes the one-way value meet the
    two-way value at p = 1/2.  Under this reading the one-way curve is NOT
    monotone on the range, so sweeps record the reading in their metadata
    and no monotonicity is asserted.
    """
    p = float(p)
    if not 0.0 < p < 1.0:
        raise DomainError(f"parametrization needs p in (0, 1), got {p!r}")
    return p / float(np.log2(1.0 / p))


def sweep_fig4(points: int) -> list[CapacityCurvePoint]:
    """Uniform p grid on [0.35, 0.5] with lam = p / log2(1/p)."""
    if points < 2:
        raise DomainError(f"points must be >= 2, got {points!r}")
    out = []
    for p in np.linspace(0.35, 0.5, points):
        p = float(p)
        lam = fig4_lambda(p)
        out.append(
            CapacityCurvePoint(
                x=p,
                lam=lam,
                p=p,
                one_way=one_way_capacity(lam, p),
                two_way=two_way_capacity(lam),
                lower_bound=coherent_info_lower_bound(lam, p),
                upper_bound=continuity_upper_bound(lam, p),
            )
        )
    return out


def sweep_custom(
    lam_min: float, lam_max: float, p_min: float, p_max: float, points: int
) -> list[CapacityCurvePoint]:
    """Sweep lambda at fixed p, or p at fixed lambda.

    The one-way column is populated only where the closed form is certified
    (lambda <= 1/2); elsewhere callers get the bound columns.
    """
    if points < 2:
        raise DomainError(f"points must be >= 2, got {points!r}")
    for name, v in (("lambda", lam_min), ("lambda", lam_max), ("p", p_min), ("p", p_max)):
        _check_prob(name, v)
    sweep_lambda = lam_min < lam_max
    sweep_p = p_min < p_max
    if sweep_lambda == sweep_p:
        raise DomainError("custom sweep needs exactly one varying parameter")
    out = []
    if sweep_lambda:
        grid = [(float(lv), p_min) for lv in np.linspace(lam_min, lam_max, points)]
    else:
        grid = [(lam_min, float(pv)) for pv in np.linspace(p_min, p_max, points)]
    for lam, p in grid:
        one_way = one_way_capacity(lam, p) if lam <= 0.5 else None
        out.append(
            CapacityCurvePoint(
                x=lam if sweep_lambda else p,
                lam=lam,
                p=p,
                one_way=one_way,
                two_way=two_way_capacity(lam),
                lower_bound=coherent_info_lower_bound(lam, p),
                upper_bound=continuity_upper_bound(lam, p),
            )
        )
    return out


# ---------------------------------------------------------------------------
# two-way achievability protocol (Monte Carlo)


def two_way_postselected_fidelity(lam: float, p: float) -> float:
    """Fidelity of the kept-block post-selected state with the maximally
    entangled target; 1 by construction, recomputed as a consistency check."""
    lam = _check_prob("lambda", lam)
    p = _check_prob("p", p)
    n = channel_N(lam, p)
    k0 = n.kraus[0]
    if np.abs(k0).max() == 0.0:  # lam = 1: the kept branch never fires
        return 1.0
    phi = maximally_entangled(2).amplitudes
    i2 = np.eye(2, dtype=complex)
    post = np.kron(i2, k0) @ phi
    post /= np.linalg.norm(post)
    target = np.kron(i2, embed_operator(i2, 0, 4)) @ phi
    return float(np.abs(target.conj() @ post) ** 2)


def simulate_two_way_protocol(
    lam: float, p: float, uses: int, seed: int
) -> tuple[float, float]:
    """Monte Carlo run of the entanglement-consumption protocol.

    Each use sends half of a maximally entangled pair, samples a Kraus branch
    with the Born probabilities, and reads the block flag; kept (identity
    block) rounds transmit noiselessly.  Returns (rate estimate, std error)
    with the Bernoulli standard error sqrt(lam (1 - lam) / uses).
    """
    lam = _check_prob("lambda", lam)
    p = _check_prob("p", p)
    uses = int(uses)
    if uses < 1:
        raise DomainError(f"uses must be >= 1, got {uses!r}")

    fid = two_way_postselected_fidelity(lam, p)
    if abs(1.0 - fid) > 1e-10:
        raise ChancapError(f"post-selected state fidelity defect {1.0 - fid:.3e}")

    n = channel_N(lam, p)
    pi = np.eye(2, dtype=complex) / 2
    probs = np.array([float(np.trace(k @ pi @ k.conj().T).real) for k in n.kraus])
    cum = np.cumsum(probs)
    cum[-1] = 1.0
    block_of_branch = n.kraus_block_index()

    rng = stream_rng(seed, STREAM_QUANTUM_PROTOCOL)
    branch = np.searchsorted(cum, rng.random(uses), side="right")
    kept = int(np.count_nonzero(block_of_branch[branch] == 0))
    rate = kept / uses
    std_error = float(np.sqrt(lam * (1.0 - lam) / uses))
    return rate, std_error
