"""Classical weighted-direct-sum wiretap channel: capacities and protocols.

The channel broadcasts a flag L to both receivers.  With probability ``lam``
(L = 1) Eve gets the input bit exactly and Bob sees it through a binary
symmetric channel with crossover ``p``; with probability ``1 - lam`` (L = 2)
Bob gets the input bit exactly and Eve sees an independent uniform bit (the
independent distribution is a free choice; uniform keeps outputs symmetric).

Closed forms, in bits per use:

* one-way secrecy capacity (degraded regime ``lam <= 1/2``):
  ``1 - lam (1 + H(p))``
* two-way secrecy capacity, every ``lam``:  ``1 - lam``

The joint table is indexed ``table[x, y, z, l]`` with ``l = 0`` meaning L = 1
and ``l = 1`` meaning L = 2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .capacity import CapacityCurvePoint
from .errors import DomainError, NotADistribution
from .qmath import binary_entropy
from .sampling import STREAM_WIRETAP_PROTOCOL, stream_rng

GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


def _check_prob(name: str, value: float) -> float:
    v = float(value)
    if not 0.0 <= v <= 1.0:
        raise DomainError(f"{name} must lie in [0, 1], got {value!r}")
    return v


@dataclass(frozen=True)
class WiretapChannel:
    """Joint conditional pmf P(y, z, l | x) over binary x, y, z and l in {1, 2}."""

    lam: float
    p: float
    table: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.table, dtype=float)
        if t.shape != (2, 2, 2, 2):
            raise NotADistribution(f"table shape {t.shape} != (2, 2, 2, 2)")
        if np.any(t < 0.0):
            raise NotADistribution("conditional probabilities must be >= 0")
        sums = t.sum(axis=(1, 2, 3))
        if np.abs(sums - 1.0).max() > 1e-12:
            raise NotADistribution(f"conditional slices sum to {sums}, not 1")
        flag = t[:, :, :, 0].sum(axis=(1, 2))
        if np.abs(flag - self.lam).max() > 1e-12:
            raise NotADistribution("flag probability must be input-independent = lambda")
        object.__setattr__(self, "table", t)

    def bob_given_x(self) -> np.ndarray:
        """P(y, l | x), shape (2, 2, 2)."""
        return self.table.sum(axis=2)

    def eve_given_x(self) -> np.ndarray:
        """P(z, l | x), shape (2, 2, 2)."""
        return self.table.sum(axis=1)


@dataclass(frozen=True)
class InputDistribution:
    """Bernoulli input law: q is the probability of x = 0."""

    q: float

    def __post_init__(self):
        _check_prob("q", self.q)

    def weights(self) -> np.ndarray:
        return np.array([self.q, 1.0 - self.q])


def build_wiretap(lam: float, p: float) -> WiretapChannel:
    """Assemble the joint conditional table for parameters (lam, p)."""
    lam = _check_prob("lambda", lam)
    p = _check_prob("p", p)
    t = np.zeros((2, 2, 2, 2))
    for x in range(2):
        for y in range(2):
            # L = 1: z = x, y is z through the BSC(p)
            t[x, y, x, 0] = lam * (1.0 - p if y == x else p)
            # L = 2: y = x, z uniform
            for z in range(2):
                t[x, y, z, 1] += (1.0 - lam) * (1.0 if y == x else 0.0) * 0.5
    return WiretapChannel(lam, p, t)


def mutual_information(joint) -> float:
    """I(A; B) in bits from a joint pmf over two finite alphabets."""
    j = np.asarray(joint, dtype=float)
    if j.ndim != 2 or np.any(j < -1e-12):
        raise NotADistribution("joint pmf must be a nonnegative matrix")
    s = j.sum()
    if abs(s - 1.0) > 1e-9:
        raise NotADistribution(f"joint pmf sums to {s!r}, not 1")
    j = np.clip(j, 0.0, None)
    pa = j.sum(axis=1, keepdims=True)
    pb = j.sum(axis=0, keepdims=True)
    prod = pa * pb
    mask = j > 0.0
    out = j[mask] * np.log2(j[mask] / prod[mask])
    return float(out.sum())


def secrecy_objective(ch: WiretapChannel, q: float) -> float:
    """I(X; Y, L) - I(X; Z, L) for the Bernoulli(q) input."""
    w = InputDistribution(q).weights()
    bob = (ch.bob_given_x() * w[:, None, None]).reshape(2, 4)
    eve = (ch.eve_given_x() * w[:, None, None]).reshape(2, 4)
    return mutual_information(bob) - mutual_information(eve)


def decomposition_residual(ch: WiretapChannel, q: float) -> float:
    """Difference between the full-joint objective and its per-flag expansion."""
    w = InputDistribution(q).weights()
    full = secrecy_objective(ch, q)
    per_flag = 0.0
    for l, weight in ((0, ch.lam), (1, 1.0 - ch.lam)):
        if weight == 0.0:
            continue
        bob = (ch.table[:, :, :, l].sum(axis=2) * w[:, None]) / weight
        eve = (ch.table[:, :, :, l].sum(axis=1) * w[:, None]) / weight
        per_flag += weight * (mutual_information(bob) - mutual_information(eve))
    return abs(full - per_flag)


def secrecy_capacity_bruteforce(ch: WiretapChannel, grid: int = 201) -> tuple[float, float]:
    """Maximize the secrecy objective over the input law.

    Scans a uniform grid in q (at least 101 points), then refines around the
    best point with a golden-section search to 1e-10 in q.
    """
    if grid < 101:
        raise DomainError(f"grid must be >= 101, got {grid!r}")
    qs = np.linspace(0.0, 1.0, grid)
    vals = np.array([secrecy_objective(ch, q) for q in qs])
    i = int(np.argmax(vals))
    lo = qs[max(0, i - 1)]
    hi = qs[min(grid - 1, i + 1)]

    c = hi - GOLDEN * (hi - lo)
    d = lo + GOLDEN * (hi - lo)
    fc, fd = secrecy_objective(ch, c), secrecy_objective(ch, d)
    while hi - lo > 1e-10:
        if fc >= fd:
            hi, d, fd = d, c, fc
            c = hi - GOLDEN * (hi - lo)
            fc = secrecy_objective(ch, c)
        else:
            lo, c, fc = c, d, fd
            d = lo + GOLDEN * (hi - lo)
            fd = secrecy_objective(ch, d)
    q_best = 0.5 * (lo + hi)
    f_best = secrecy_objective(ch, q_best)
    if vals[i] > f_best:
        q_best, f_best = float(qs[i]), float(vals[i])
    return float(f_best), float(q_best)


def one_way_secrecy_capacity(lam: float, p: float) -> float:
    """1 - lam (1 + H(p)); certified in the degraded regime lam <= 1/2."""
    lam = float(lam)
    if not 0.0 <= lam <= 0.5:
        raise DomainError(f"lambda must lie in [0, 1/2], got {lam!r}")
    p = _check_prob("p", p)
    return 1.0 - lam * (1.0 + binary_entropy(p))


def two_way_secrecy_capacity(lam: float) -> float:
    """1 - lam for every lam in [0, 1]."""
    lam = _check_prob("lambda", lam)
    return 1.0 - lam


def degrading_stochastic_map(lam: float) -> np.ndarray:
    """Stochastic map T(z, l' | y, l) taking Bob's view to Eve's view.

    On L = 1 it reports L' = 2 with a fresh uniform bit; on L = 2 it reports
    (L' = 1, z = y) with probability lam / (1 - lam) and a fresh uniform bit
    under L' = 2 otherwise.  Indexing: map[y, l, z, l'].  Requires lam <= 1/2
    so the mixing probability stays in [0, 1].
    """
    lam = float(lam)
    if not 0.0 <= lam <= 0.5:
        raise DomainError(f"degrading map exists for lambda in [0, 1/2], got {lam!r}")
    mix = lam / (1.0 - lam)
    t = np.zeros((2, 2, 2, 2))
    for y in range(2):
        for z in range(2):
            t[y, 0, z, 1] = 0.5
            t[y, 1, z, 1] = (1.0 - mix) * 0.5
        t[y, 1, y, 0] = mix
    return t


def verify_degraded(ch: WiretapChannel) -> float:
    """Max residual of T applied to Bob's conditional versus Eve's conditional."""
    t = degrading_stochastic_map(ch.lam)
    bob = ch.bob_given_x()  # (x, y, l)
    eve = ch.eve_given_x()  # (x, z, l)
    composed = np.einsum("xyl,ylzm->xzm", bob, t)
    return float(np.abs(composed - eve).max())


def simulate_feedback_protocol(
    lam: float, p: float, uses: int, seed: int
) -> tuple[float, float]:
    """Monte Carlo run of the accept/retransmit protocol.

    Alice sends uniform bits; Bob discards flag-1 rounds and accepts flag-2
    rounds (where y = x).  Returns (throughput, leakage estimate) where the
    leakage is the plug-in empirical mutual information between Alice's bit
    and Eve's observation on accepted rounds.
    """
    lam = _check_prob("lambda", lam)
    p = _check_prob("p", p)
    uses = int(uses)
    if uses < 1:
        raise DomainError(f"uses must be >= 1, got {uses!r}")
    rng = stream_rng(seed, STREAM_WIRETAP_PROTOCOL)
    x = rng.integers(0, 2, size=uses)
    flag2 = rng.random(uses) >= lam  # True where L = 2 (accepted)
    z = np.where(flag2, rng.integers(0, 2, size=uses), x)
    accepted = int(np.count_nonzero(flag2))
    throughput = accepted / uses
    if accepted == 0:
        return throughput, 0.0
    counts = np.zeros((2, 2))
    for xv in range(2):
        for zv in range(2):
            counts[xv, zv] = np.count_nonzero(flag2 & (x == xv) & (z == zv))
    leakage = mutual_information(counts / accepted)
    return throughput, leakage


def fig6_lambda(p: float) -> float:
    """Parametrization lam(p) = p / (2 log2(6 / p))."""
    p = float(p)
    if not 0.0 < p <= 1.0:
        raise DomainError(f"parametrization needs p in (0, 1], got {p!r}")
    return p / (2.0 * float(np.log2(6.0 / p)))


def sweep_fig6(points: int) -> list[CapacityCurvePoint]:
    """Uniform p grid on [0.8687, 1] with lam = p / (2 log2(6/p))."""
    if points < 2:
        raise DomainError(f"points must be >= 2, got {points!r}")
    out = []
    for p in np.linspace(0.8687, 1.0, points):
        p = float(p)
        lam = fig6_lambda(p)
        out.append(
            CapacityCurvePoint(
                x=p,
                lam=lam,
                p=p,
                one_way=one_way_secrecy_capacity(lam, p),
                two_way=two_way_secrecy_capacity(lam),
            )
        )
    return out


def fig6_crossover() -> float:
    """Parameter where the one-way curve turns from decreasing to increasing.

    Recomputed from a sign change of the central-difference derivative; the
    display range's lower endpoint 0.8687 is not assumed to equal it.
    """
    h = 1e-7

    def slope(p: float) -> float:
        up = one_way_secrecy_capacity(fig6_lambda(p + h), p + h)
        dn = one_way_secrecy_capacity(fig6_lambda(p - h), p - h)
        return (up - dn) / (2.0 * h)

    grid = np.linspace(0.6, 0.99, 79)
    slopes = [slope(p) for p in grid]
    lo = hi = None
    for a, b, sa, sb in zip(grid, grid[1:], slopes, slopes[1:]):
        if sa < 0.0 <= sb:
            lo, hi = a, b
            break
    if lo is None:
        raise DomainError("no slope sign change found on [0.6, 0.99]")
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if not (lo < mid < hi):
            break
        if slope(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
