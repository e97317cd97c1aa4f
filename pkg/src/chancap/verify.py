"""Named invariant checks driven by `chancap verify` and the test suite.

Each check is deterministic (fixed seeds), returns its worst residual, and
passes iff that residual meets the stated threshold.  Heavier computations
are cached so that value/argmax style check pairs share one run.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from . import capacity as cap
from . import channels as chn
from . import output
from . import wiretap as wt
from .qmath import (
    binary_entropy,
    hermitian_eig,
    partial_trace,
    shannon_entropy,
    tensor,
    trace_norm,
    von_neumann_entropy,
)
from .sampling import random_density_matrix, random_hermitian, random_unitary


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    residual: float
    threshold: float
    detail: str = ""


_REGISTRY: list[tuple[str, Callable[[], CheckResult]]] = []


def _register(name: str):
    def wrap(fn):
        _REGISTRY.append((name, fn))
        return fn

    return wrap


def _result(name, residual, threshold, detail="", passed=None) -> CheckResult:
    if passed is None:
        passed = residual <= threshold
    return CheckResult(name, bool(passed), float(residual), float(threshold), detail)


def check_names() -> list[str]:
    return [name for name, _ in _REGISTRY]


def run_checks(only: Optional[str] = None) -> list[CheckResult]:
    results = []
    for name, fn in _REGISTRY:
        if only and only not in name:
            continue
        try:
            results.append(fn())
        except Exception as exc:  # a crashed check is a failed check
            results.append(_result(name, float("inf"), 0.0, f"{type(exc).__name__}: {exc}"))
    return results


# ---------------------------------------------------------------------------
# qmath


@_register("qmath.eig_reconstruction")
def _check_eig_reconstruction() -> CheckResult:
    rng = np.random.default_rng(101)
    worst = 0.0
    for _ in range(1000):
        d = int(rng.integers(2, 13))
        m = random_hermitian(rng, d)
        spectrum = hermitian_eig(m)
        worst = max(worst, float(np.abs(spectrum.reconstruct() - m).max()))
        gram = spectrum.eigenvectors.conj().T @ spectrum.eigenvectors
        worst = max(worst, float(np.abs(gram - np.eye(d)).max()))
        if np.any(np.diff(spectrum.eigenvalues) < 0):
            worst = max(worst, 1.0)
    return _result("qmath.eig_reconstruction", worst, 1e-10)


@_register("qmath.entropy_unitary_invariance")
def _check_entropy_unitary() -> CheckResult:
    rng = np.random.default_rng(102)
    worst = 0.0
    for _ in range(200):
        d = int(rng.integers(2, 7))
        rho = random_density_matrix(rng, d)
        u = random_unitary(rng, d)
        worst = max(
            worst, abs(von_neumann_entropy(u @ rho @ u.conj().T) - von_neumann_entropy(rho))
        )
    return _result("qmath.entropy_unitary_invariance", worst, 1e-10)


@_register("qmath.entropy_diagonal_matches_shannon")
def _check_entropy_diagonal() -> CheckResult:
    rng = np.random.default_rng(103)
    worst = 0.0
    for _ in range(200):
        d = int(rng.integers(2, 9))
        w = rng.dirichlet(np.ones(d))
        worst = max(worst, abs(von_neumann_entropy(np.diag(w.astype(complex))) - shannon_entropy(w)))
    return _result("qmath.entropy_diagonal_matches_shannon", worst, 1e-12)


@_register("qmath.trace_norm_dominates_trace")
def _check_trace_norm() -> CheckResult:
    rng = np.random.default_rng(104)
    worst = 0.0
    for _ in range(200):
        d = int(rng.integers(2, 9))
        m = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        worst = max(worst, abs(np.trace(m)) - trace_norm(m))
    return _result("qmath.trace_norm_dominates_trace", max(0.0, worst), 1e-12)


@_register("qmath.partial_trace_factorization")
def _check_partial_trace() -> CheckResult:
    rng = np.random.default_rng(105)
    worst = 0.0
    for _ in range(100):
        da, db = int(rng.integers(2, 4)), int(rng.integers(2, 4))
        rho = random_density_matrix(rng, da)
        sigma = random_density_matrix(rng, db)
        prod = tensor(rho, sigma)
        worst = max(worst, float(np.abs(partial_trace(prod, (da, db), "second") - rho).max()))
        worst = max(worst, float(np.abs(partial_trace(prod, (da, db), "first") - sigma).max()))
    return _result("qmath.partial_trace_factorization", worst, 1e-12)


# ---------------------------------------------------------------------------
# channels

_LAM_GRID = np.linspace(0.0, 1.0, 10)
_P_GRID = np.linspace(0.0, 1.0, 5)


@_register("channels.kraus_completeness_grid")
def _check_completeness() -> CheckResult:
    worst = 0.0
    for lam in _LAM_GRID:
        for p in _P_GRID:
            chans = [
                chn.dephasing_channel(p),
                chn.complementary_dephasing(p),
                chn.channel_N(lam, p),
                chn.complement_N(lam, p),
                chn.comparison_channel_T(lam, p),
                chn.erasure_channel(lam),
            ]
            if lam <= 0.5:
                chans.append(cap.degrading_map(lam, p))
            for c in chans:
                resid = np.abs(
                    sum(k.conj().T @ k for k in c.kraus) - np.eye(c.dim_in)
                ).max()
                worst = max(worst, float(resid))
            v = chn.isometry_N(lam, p)
            worst = max(worst, float(np.abs(v.matrix.conj().T @ v.matrix - np.eye(2)).max()))
    return _result("channels.kraus_completeness_grid", worst, 1e-10)


@_register("channels.complement_consistency")
def _check_complement_consistency() -> CheckResult:
    worst = 0.0
    for lam in _LAM_GRID:
        for p in _P_GRID:
            v = chn.isometry_N(lam, p)
            keep_b = chn.channel_from_isometry(v, (4, 3), "first")
            keep_c = chn.channel_from_isometry(v, (4, 3), "second")
            worst = max(worst, chn.channel_distance(keep_b, chn.channel_N(lam, p)))
            worst = max(worst, chn.channel_distance(keep_c, chn.complement_N(lam, p)))
    return _result("channels.complement_consistency", worst, 1e-10)


def _entropy_decomposition_residuals(n_states: int = 100) -> tuple[float, float]:
    rng = np.random.default_rng(106)
    worst_out, worst_env = 0.0, 0.0
    for _ in range(n_states):
        lam, p = rng.uniform(0.0, 1.0, size=2)
        rho = random_density_matrix(rng, 2)
        h_rho = von_neumann_entropy(rho)
        h_dbar = chn.apply(chn.complementary_dephasing(p), rho).entropy()
        h_d = chn.apply(chn.dephasing_channel(p), rho).entropy()
        lhs_out = chn.apply(chn.channel_N(lam, p), rho).entropy()
        rhs_out = binary_entropy(lam) + lam * h_dbar + (1.0 - lam) * h_rho
        lhs_env = chn.apply(chn.complement_N(lam, p), rho).entropy()
        rhs_env = binary_entropy(lam) + lam * h_d
        worst_out = max(worst_out, abs(lhs_out - rhs_out))
        worst_env = max(worst_env, abs(lhs_env - rhs_env))
    return worst_out, worst_env


@_register("channels.entropy_decomposition_output")
def _check_entropy_decomposition_output() -> CheckResult:
    worst, _ = _entropy_decomposition_residuals()
    return _result("channels.entropy_decomposition_output", worst, 1e-10)


@_register("channels.entropy_decomposition_complement")
def _check_entropy_decomposition_complement() -> CheckResult:
    _, worst = _entropy_decomposition_residuals()
    return _result("channels.entropy_decomposition_complement", worst, 1e-10)


@_register("channels.block_orthogonality")
def _check_block_orthogonality() -> CheckResult:
    rng = np.random.default_rng(107)
    worst = 0.0
    for _ in range(25):
        lam, p = rng.uniform(0.0, 1.0, size=2)
        rho = random_density_matrix(rng, 2)
        for c in (
            chn.channel_N(lam, p),
            chn.complement_N(lam, p),
            chn.comparison_channel_T(lam, p),
            chn.erasure_channel(lam),
        ):
            out = chn.apply(c, rho).matrix
            mask = np.ones_like(out, dtype=bool)
            for off, size in c.blocks:
                mask[off : off + size, off : off + size] = False
            worst = max(worst, float(np.abs(out[mask]).max()))
    return _result("channels.block_orthogonality", worst, 1e-12)


# ---------------------------------------------------------------------------
# capacity


@lru_cache(maxsize=1)
def _oneway_oracle_samples() -> tuple[float, float]:
    rng = np.random.default_rng(108)
    worst_value, worst_bloch = 0.0, 0.0
    for _ in range(20):
        lam = rng.uniform(0.0, 0.5)
        p = rng.uniform(0.0, 1.0)
        value, bloch = cap.maximize_coherent_information(lam, p)
        worst_value = max(worst_value, abs(value - cap.one_way_capacity(lam, p)))
        worst_bloch = max(worst_bloch, float(np.linalg.norm(bloch)))
    return worst_value, worst_bloch


@_register("capacity.oneway_oracle_value")
def _check_oneway_value() -> CheckResult:
    worst, _ = _oneway_oracle_samples()
    return _result("capacity.oneway_oracle_value", worst, 1e-5)


@_register("capacity.oneway_oracle_argmax")
def _check_oneway_argmax() -> CheckResult:
    _, worst = _oneway_oracle_samples()
    return _result("capacity.oneway_oracle_argmax", worst, 1e-3)


@_register("capacity.degradable_composition")
def _check_degradable() -> CheckResult:
    worst = 0.0
    for lam in np.linspace(0.0, 0.5, 6):
        for p in np.linspace(0.0, 1.0, 5):
            worst = max(worst, cap.verify_degradable(lam, p))
    return _result("capacity.degradable_composition", worst, 1e-10)


@_register("capacity.pauli_conjugation_invariance")
def _check_pauli_invariance() -> CheckResult:
    rng = np.random.default_rng(109)
    pairs = [(rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0)) for _ in range(5)]
    worst = 0.0
    for lam, p in pairs:
        for _ in range(100):
            rho = random_density_matrix(rng, 2)
            dz, dx = cap.ic_conjugation_residual(lam, p, rho)
            worst = max(worst, dz, dx)
    return _result("capacity.pauli_conjugation_invariance", worst, 1e-9)


@_register("capacity.bounds_ordering")
def _check_bounds_ordering() -> CheckResult:
    # the continuity bound certifies the capacity only for lam >= 1/2, which
    # is where it must dominate the one-shot lower bound
    worst = 0.0
    for lam in np.linspace(0.5, 1.0, 11):
        for p in np.linspace(0.0, 1.0, 11):
            worst = max(
                worst,
                cap.coherent_info_lower_bound(lam, p) - cap.continuity_upper_bound(lam, p),
            )
    return _result("capacity.bounds_ordering", max(0.0, worst), 1e-9)


@_register("capacity.oneway_below_twoway")
def _check_oneway_below_twoway() -> CheckResult:
    worst = 0.0
    for lam in np.linspace(0.0, 0.5, 11):
        for p in np.linspace(0.0, 1.0, 11):
            worst = max(worst, cap.one_way_capacity(lam, p) - cap.two_way_capacity(lam))
    return _result("capacity.oneway_below_twoway", max(0.0, worst), 1e-12)


@_register("capacity.fig3_opposite_monotonicity")
def _check_fig3_monotonicity() -> CheckResult:
    pts = cap.sweep_fig3(100)
    one = np.array([p.one_way for p in pts])
    two = np.array([p.two_way for p in pts])
    margin = min(float(np.diff(one).min()), float(-np.diff(two).max()))
    return _result(
        "capacity.fig3_opposite_monotonicity",
        margin,
        1e-9,
        "residual is the smallest step (must exceed threshold)",
        passed=margin > 1e-9,
    )


@_register("capacity.fig3_endpoints")
def _check_fig3_endpoints() -> CheckResult:
    pts = cap.sweep_fig3(100)
    worst = max(
        abs(pts[0].one_way - 0.5),
        abs(pts[0].two_way - 0.75),
        abs(pts[-1].one_way - 0.628524413893479),
        abs(pts[-1].two_way - 0.6875),
    )
    return _result("capacity.fig3_endpoints", worst, 1e-6)


@lru_cache(maxsize=1)
def _diamond_samples() -> tuple[float, float]:
    rng = np.random.default_rng(110)
    worst_over, worst_under = 0.0, 0.0
    for _ in range(10):
        lam, p = rng.uniform(0.0, 1.0, size=2)
        est, ana = cap.diamond_distance_to_T(lam, p, restarts=200)
        worst_over = max(worst_over, est - ana)
        worst_under = max(worst_under, ana - est)
    return worst_over, worst_under


@_register("capacity.diamond_estimate_is_lower_bound")
def _check_diamond_lower() -> CheckResult:
    over, _ = _diamond_samples()
    return _result("capacity.diamond_estimate_is_lower_bound", max(0.0, over), 1e-9)


@_register("capacity.diamond_estimate_reaches_value")
def _check_diamond_reach() -> CheckResult:
    _, under = _diamond_samples()
    return _result("capacity.diamond_estimate_reaches_value", max(0.0, under), 1e-3)


@_register("capacity.sequence_invariants")
def _check_sequence() -> CheckResult:
    items, meta = cap.default_sequence(5)
    q_lb, q_ub, _ = cap.sequence_bound_curves()
    ok = all(b.x_n < a.x_n for a, b in zip(items, items[1:]))
    ok = ok and all(b.q_ub < a.q_lb for a, b in zip(items, items[1:]))
    ok = ok and items[0].q_ub < q_lb(meta["b_used"])
    ok = ok and all(b.q_two_way >= a.q_two_way for a, b in zip(items, items[1:]))
    return _result(
        "capacity.sequence_invariants",
        0.0 if ok else 1.0,
        0.5,
        f"upper_crossing={meta['upper_crossing']:.6e} (nominal 2e-4), 5 terms",
        passed=ok,
    )


@_register("capacity.derivative_consistency")
def _check_derivative() -> CheckResult:
    curve = lambda l: 4.0 * l - 1.0  # noqa: E731
    worst = 0.0
    for lam in np.linspace(0.2525, 0.31, 15):
        analytic, numeric = cap.derivative_check(curve, float(lam))
        worst = max(worst, abs(analytic - numeric))
    return _result("capacity.derivative_consistency", worst, 1e-5)


@_register("capacity.choi_state_ic_consistency")
def _check_choi_ic() -> CheckResult:
    rng = np.random.default_rng(111)
    pi = chn.maximally_mixed(2)
    worst = 0.0
    for _ in range(10):
        lam, p = rng.uniform(0.0, 1.0, size=2)
        n = chn.channel_N(lam, p)
        nb = chn.complement_N(lam, p)
        via_state = cap.coherent_information_state(chn.choi(n).state.matrix, (2, 4))
        via_channel = cap.coherent_information(n, nb, pi)
        worst = max(worst, abs(via_state - via_channel))
    return _result("capacity.choi_state_ic_consistency", worst, 1e-10)


@_register("capacity.fig4_endpoint_equality")
def _check_fig4_endpoint() -> CheckResult:
    pts = cap.sweep_fig4(100)
    worst = max(abs(pts[-1].one_way - 0.5), abs(pts[-1].two_way - 0.5))
    return _result("capacity.fig4_endpoint_equality", worst, 1e-9)


@_register("capacity.two_way_protocol_concentration")
def _check_quantum_protocol() -> CheckResult:
    lam, p, uses = 0.3, 0.2, 100_000
    sigma = float(np.sqrt(lam * (1.0 - lam) / uses))
    worst = 0.0
    for seed in range(10):
        rate, _ = cap.simulate_two_way_protocol(lam, p, uses, seed)
        worst = max(worst, abs(rate - (1.0 - lam)))
    return _result("capacity.two_way_protocol_concentration", worst, 3.0 * sigma)


@_register("capacity.two_way_postselect_fidelity")
def _check_postselect_fidelity() -> CheckResult:
    worst = 0.0
    for lam in np.linspace(0.0, 1.0, 6):
        for p in np.linspace(0.0, 1.0, 5):
            worst = max(worst, abs(1.0 - cap.two_way_postselected_fidelity(lam, p)))
    return _result("capacity.two_way_postselect_fidelity", worst, 1e-10)


# ---------------------------------------------------------------------------
# wiretap


@lru_cache(maxsize=1)
def _wiretap_samples() -> tuple[float, float]:
    rng = np.random.default_rng(112)
    worst_value, worst_argmax = 0.0, 0.0
    for _ in range(20):
        lam = rng.uniform(0.0, 0.5)
        p = rng.uniform(0.0, 1.0)
        value, q = wt.secrecy_capacity_bruteforce(wt.build_wiretap(lam, p))
        worst_value = max(worst_value, abs(value - wt.one_way_secrecy_capacity(lam, p)))
        worst_argmax = max(worst_argmax, abs(q - 0.5))
    return worst_value, worst_argmax


@_register("wiretap.bruteforce_oracle_value")
def _check_wiretap_value() -> CheckResult:
    worst, _ = _wiretap_samples()
    return _result("wiretap.bruteforce_oracle_value", worst, 1e-4)


@_register("wiretap.bruteforce_oracle_argmax")
def _check_wiretap_argmax() -> CheckResult:
    _, worst = _wiretap_samples()
    return _result("wiretap.bruteforce_oracle_argmax", worst, 1e-4)


@_register("wiretap.degraded_composition")
def _check_wiretap_degraded() -> CheckResult:
    worst = 0.0
    for lam in np.linspace(0.0, 0.5, 6):
        for p in np.linspace(0.0, 1.0, 5):
            worst = max(worst, wt.verify_degraded(wt.build_wiretap(lam, p)))
    return _result("wiretap.degraded_composition", worst, 1e-12)


@_register("wiretap.oneway_below_twoway")
def _check_wiretap_ordering() -> CheckResult:
    worst = 0.0
    for lam in np.linspace(0.0, 0.5, 11):
        for p in np.linspace(0.0, 1.0, 11):
            worst = max(
                worst, wt.one_way_secrecy_capacity(lam, p) - wt.two_way_secrecy_capacity(lam)
            )
    return _result("wiretap.oneway_below_twoway", max(0.0, worst), 1e-12)


@_register("wiretap.fig6_opposite_monotonicity")
def _check_fig6_monotonicity() -> CheckResult:
    pts = wt.sweep_fig6(100)
    one = np.array([p.one_way for p in pts])
    two = np.array([p.two_way for p in pts])
    margin = min(float(np.diff(one).min()), float(-np.diff(two).max()))
    return _result(
        "wiretap.fig6_opposite_monotonicity",
        margin,
        1e-9,
        "residual is the smallest step (must exceed threshold)",
        passed=margin > 1e-9,
    )


@_register("wiretap.fig6_endpoint_equality")
def _check_fig6_endpoint() -> CheckResult:
    pts = wt.sweep_fig6(100)
    worst = max(abs(pts[-1].one_way - 0.806574), abs(pts[-1].two_way - 0.806574))
    return _result("wiretap.fig6_endpoint_equality", worst, 1e-6)


@_register("wiretap.mi_decomposition_identity")
def _check_mi_decomposition() -> CheckResult:
    rng = np.random.default_rng(113)
    worst = 0.0
    for _ in range(25):
        lam, p = rng.uniform(0.0, 1.0, size=2)
        q = rng.uniform(0.0, 1.0)
        worst = max(worst, wt.decomposition_residual(wt.build_wiretap(lam, p), q))
    return _result("wiretap.mi_decomposition_identity", worst, 1e-12)


@_register("wiretap.feedback_throughput_concentration")
def _check_wiretap_protocol() -> CheckResult:
    lam, p, uses = 0.3, 0.1, 100_000
    sigma = float(np.sqrt(lam * (1.0 - lam) / uses))
    worst = 0.0
    for seed in range(10):
        throughput, _ = wt.simulate_feedback_protocol(lam, p, uses, seed)
        worst = max(worst, abs(throughput - (1.0 - lam)))
    return _result("wiretap.feedback_throughput_concentration", worst, 3.0 * sigma)


@_register("wiretap.feedback_leakage_small")
def _check_wiretap_leakage() -> CheckResult:
    worst = 0.0
    for seed in range(10):
        _, leakage = wt.simulate_feedback_protocol(0.3, 0.1, 100_000, seed)
        worst = max(worst, leakage)
    return _result("wiretap.feedback_leakage_small", worst, 1e-2)


# ---------------------------------------------------------------------------
# output layer


@_register("cli.sweep_byte_determinism")
def _check_byte_determinism() -> CheckResult:
    a = output.sweep_csv(cap.sweep_fig3(50), "fig3")
    b = output.sweep_csv(cap.sweep_fig3(50), "fig3")
    c = output.sweep_json(wt.sweep_fig6(50), "fig6", {"scenario": "fig6"})
    d = output.sweep_json(wt.sweep_fig6(50), "fig6", {"scenario": "fig6"})
    ok = a == b and c == d
    return _result("cli.sweep_byte_determinism", 0.0 if ok else 1.0, 0.5, passed=ok)


@_register("cli.csv_roundtrip_reevaluation")
def _check_csv_roundtrip() -> CheckResult:
    text = output.sweep_csv(cap.sweep_fig3(50), "fig3")
    _, rows = output.parse_csv(text)
    worst = 0.0
    for x, lam, p, one_way, two_way, lower, upper in rows:
        for stored, fresh in (
            (lam, x),
            (p, 4.0 * lam - 1.0),
            (one_way, cap.one_way_capacity(lam, p)),
            (two_way, cap.two_way_capacity(lam)),
            (lower, cap.coherent_info_lower_bound(lam, p)),
            (upper, cap.continuity_upper_bound(lam, p)),
        ):
            scale = max(1.0, abs(fresh))
            worst = max(worst, abs(stored - fresh) / scale)
    return _result("cli.csv_roundtrip_reevaluation", worst, 1e-15)
