"""Acceptance suite: the nine top-level criteria, one test each, in order.

Each test prints a single ``[criterion N] PASS/FAIL`` line (with the
measured detail and wall time) before asserting, so the verdict survives
in the log even when the assertion trips.
"""

import time

import numpy as np
import pytest

import gaussimag.qbm as qbm
from gaussimag.gaussian import (
    GaussianChannel,
    apply_superchannel,
    channel_realness,
    sample_random_channel,
    sample_random_superchannel,
    superchannel_is_real,
    validate_channel,
)
from gaussimag.linalg import symplectic_form
from gaussimag.measures import (
    SupSearchConfig,
    channel_measure_ic,
    channel_measure_id,
    channel_measure_is,
)
from gaussimag.qbm import (
    QbmConfig,
    coeff_delta_closed,
    coeff_delta_quadrature,
    coeff_gamma_closed,
    coeff_gamma_quadrature,
    coeff_pi_closed,
    coeff_pi_quadrature,
    gamma_capital,
)

FIGURE_CONFIGS = [
    QbmConfig(alpha=0.03, x=0.5, theta=100.0, regime="high"),
    QbmConfig(alpha=0.03, x=0.7, theta=100.0, regime="high"),
    QbmConfig(alpha=0.03, x=0.9, theta=100.0, regime="high"),
    QbmConfig(alpha=0.03, x=0.5, theta=10.0, regime="low"),
]

# accumulators shared across criteria 5, 8 and 9
_STORE = {}


def _verdict(criterion: int, ok: bool, detail: str):
    print(f"[criterion {criterion}] {'PASS' if ok else 'FAIL'} — {detail}")
    assert ok, detail


def _acc_with_noise(cfg: QbmConfig, horizon: float):
    acc = gamma_capital(cfg, horizon)
    qbm._ensure_noise_cache(acc)
    return acc


def _ic_series(acc) -> np.ndarray:
    """The damped-oscillation I_c formula evaluated on the whole grid."""
    grid, big_gamma, x = acc.grid, acc.values, acc.cfg.x
    term1 = np.abs(np.exp(-big_gamma / 2.0) * np.sin(grid / x))
    term2 = 0.5 * np.abs(np.exp(-big_gamma) * np.sin(2.0 * grid / x))
    return term1 + term2 + np.abs(2.0 * acc._wbar[0, 1])


def test_criterion_1_amplifying_channel_formulas():
    start = time.perf_counter()
    search = SupSearchConfig(restarts=3, iterations_per_restart=30)
    worst_ic = 0.0
    checks = 0
    ok = True
    for n in (1, 2, 3):
        rng = np.random.default_rng(100 + n)
        for tau in (1.0, 2.0, 5.0):
            for variant in ("zero", "position", "momentum"):
                d = np.zeros(2 * n)
                if variant == "position":
                    d[0::2] = rng.uniform(-2, 2, n)
                elif variant == "momentum":
                    d = rng.uniform(-2, 2, 2 * n)
                c = GaussianChannel.amplifying(n, tau=tau, n_th=0.5, d=d)
                expected = float(np.sum(np.abs(d[1::2])))
                worst_ic = max(
                    worst_ic, abs(channel_measure_ic(c).value - expected)
                )
                ok &= channel_measure_id(c).value == (
                    1.0 if variant == "momentum" else 0.0
                )
                is_val = channel_measure_is(c, search).value
                if variant == "momentum":
                    ok &= abs(is_val - 1.0) <= 1e-9
                else:
                    ok &= is_val <= 1e-9
                checks += 1
    elapsed = time.perf_counter() - start
    ok = ok and worst_ic <= 1e-12 and elapsed < 10.0
    _verdict(
        1,
        ok,
        f"{checks} amplifying-channel cases, worst I_c error {worst_ic:.2e}, "
        f"{elapsed:.1f}s",
    )


def test_criterion_2_theorem_audits():
    start = time.perf_counter()
    violations = 0
    converse_total = 0
    converse_witnessed = 0
    for n in (1, 2, 3):
        rng = np.random.default_rng(200 + n)
        for _ in range(2000):
            sup = sample_random_superchannel(
                n, rng, "real-eq8" if rng.uniform() < 0.5 else "real-eq9"
            )
            chan = sample_random_channel(
                n, rng, "completely-real" if rng.uniform() < 0.5 else "covariant-real"
            )
            if not channel_realness(apply_superchannel(sup, chan)).is_real:
                violations += 1
        for _ in range(2000):
            sup = sample_random_superchannel(n, rng, "breaking")
            chan = sample_random_channel(n, rng, "any")
            if not channel_realness(apply_superchannel(sup, chan)).is_real:
                violations += 1
        while converse_total < 50 * n:
            sup = sample_random_superchannel(n, rng, "any")
            if superchannel_is_real(sup):
                continue
            converse_total += 1
            for _ in range(200):
                probe = sample_random_channel(
                    n, rng,
                    "completely-real" if rng.uniform() < 0.5 else "covariant-real",
                )
                if not channel_realness(apply_superchannel(sup, probe)).is_real:
                    converse_witnessed += 1
                    break
    elapsed = time.perf_counter() - start
    witness_rate = converse_witnessed / converse_total
    ok = violations == 0 and witness_rate >= 0.95 and elapsed < 60.0
    _verdict(
        2,
        ok,
        f"12000 forward pairs, {violations} counterexamples; converse witness "
        f"rate {witness_rate:.1%} over {converse_total} violating "
        f"superchannels; {elapsed:.1f}s",
    )


def test_criterion_3_monotonicity_suites():
    start = time.perf_counter()
    rng = np.random.default_rng(300)
    id_violations = 0
    for _ in range(500):
        n = int(rng.integers(1, 4))
        sup = sample_random_superchannel(
            n, rng, "real-eq8" if rng.uniform() < 0.5 else "real-eq9"
        )
        c = sample_random_channel(n, rng)
        if (
            channel_measure_id(apply_superchannel(sup, c)).value
            > channel_measure_id(c).value + 1e-9
        ):
            id_violations += 1
    ic_violations = 0
    for _ in range(500):
        n = int(rng.integers(1, 4))
        sup = sample_random_superchannel(n, rng, "real-eq9", unit_norm_a=True)
        c = sample_random_channel(n, rng)
        if (
            channel_measure_ic(apply_superchannel(sup, c)).value
            > channel_measure_ic(c).value + 1e-9
        ):
            ic_violations += 1
    elapsed = time.perf_counter() - start
    ok = id_violations == 0 and ic_violations == 0 and elapsed < 30.0
    _verdict(
        3,
        ok,
        f"I_d violations {id_violations}/500, I_c violations "
        f"{ic_violations}/500; {elapsed:.1f}s",
    )


def test_criterion_4_closed_forms_vs_quadrature():
    start = time.perf_counter()
    taus = np.linspace(1.0, 20.0, 20)
    high = QbmConfig(alpha=0.03, x=0.5, theta=100.0, regime="high")
    low = QbmConfig(alpha=0.03, x=0.5, theta=10.0, regime="low")
    routes = [
        ("gamma", high, coeff_gamma_closed, coeff_gamma_quadrature, 1e-5),
        ("Delta_high", high, coeff_delta_closed, coeff_delta_quadrature, 1e-4),
        ("Pi_high", high, coeff_pi_closed, coeff_pi_quadrature, 1e-4),
        ("Delta_low", low, coeff_delta_closed, coeff_delta_quadrature, 1e-4),
        ("Pi_low", low, coeff_pi_closed, coeff_pi_quadrature, 1e-4),
    ]
    worst = {}
    for name, cfg, closed, quadrature, tol in routes:
        rel = 0.0
        for tau in taus:
            a, b = closed(cfg, float(tau)), quadrature(cfg, float(tau))
            rel = max(rel, abs(a - b) / max(abs(b), 1e-30))
        worst[name] = (rel, tol)
    elapsed = time.perf_counter() - start
    ok = all(rel <= tol for rel, tol in worst.values()) and elapsed < 120.0
    detail = ", ".join(f"{k} {rel:.1e}" for k, (rel, _) in worst.items())
    _verdict(4, ok, f"worst relative mismatches: {detail}; {elapsed:.1f}s")


def test_criterion_5_trajectory_formula_consistency():
    start = time.perf_counter()
    worst = 0.0
    for cfg in FIGURE_CONFIGS:
        acc = _acc_with_noise(cfg, 60.0)
        _STORE[("figure", cfg)] = acc
        direct = _ic_series(acc)
        half = np.exp(-acc.values / 2.0)
        cos_, sin_ = np.cos(acc.grid / cfg.x), np.sin(acc.grid / cfg.x)
        for i in range(len(acc.grid)):
            t_mat = half[i] * np.array([[cos_[i], sin_[i]], [-sin_[i], cos_[i]]])
            chan = GaussianChannel(1, t_mat, 2.0 * acc._wbar[:, :, i], np.zeros(2))
            worst = max(worst, abs(channel_measure_ic(chan).value - direct[i]))
    elapsed = time.perf_counter() - start
    ok = worst < 1e-8
    _verdict(
        5,
        ok,
        f"4 configurations x 6001 grid points, worst |generic - formula| "
        f"= {worst:.2e}; {elapsed:.1f}s",
    )


def test_criterion_6_high_temperature_steady_values():
    panels = {
        "1b": [
            (QbmConfig(alpha=0.01, x=0.5, theta=100.0, regime="high"), 0.001),
            (QbmConfig(alpha=0.03, x=0.5, theta=100.0, regime="high"), 0.01),
            (QbmConfig(alpha=0.05, x=0.5, theta=100.0, regime="high"), 0.028),
        ],
        "1d": [
            (QbmConfig(alpha=0.03, x=0.5, theta=100.0, regime="high"), 0.01),
            (QbmConfig(alpha=0.03, x=0.7, theta=100.0, regime="high"), 0.024),
            (QbmConfig(alpha=0.03, x=0.9, theta=100.0, regime="high"), 0.042),
        ],
    }
    details = []
    ok = True
    for panel, entries in panels.items():
        panel_start = time.perf_counter()
        for cfg, quoted in entries:
            width = 10.0 * np.pi * cfg.x
            acc = _acc_with_noise(cfg, 300.0 + width)
            _STORE[("steady", cfg)] = acc
            ic = _ic_series(acc)
            mask = acc.grid >= 300.0
            mean = float(np.mean(ic[mask]))
            within = abs(mean - quoted) <= 0.25 * quoted
            ok &= within
            details.append(
                f"{panel} alpha={cfg.alpha} x={cfg.x}: mean {mean:.4g} vs "
                f"quoted {quoted} ({'ok' if within else 'off'})"
            )
        panel_elapsed = time.perf_counter() - panel_start
        ok &= panel_elapsed < 300.0
        details.append(f"panel {panel} {panel_elapsed:.0f}s")
    _verdict(6, ok, "; ".join(details))


def test_criterion_7_low_temperature_decay():
    cfg = QbmConfig(alpha=0.03, x=0.5, theta=10.0, regime="low")
    width = 10.0 * np.pi * cfg.x
    acc = _acc_with_noise(cfg, 400.0 + width)
    _STORE[("decay", cfg)] = acc
    ic = _ic_series(acc)
    peak = float(np.max(ic[acc.grid <= np.pi * cfg.x]))
    late = float(np.mean(ic[acc.grid >= 400.0]))
    ratio = late / peak
    _verdict(
        7,
        ratio < 0.1,
        f"late-window mean {late:.4g} vs first-period peak {peak:.4g}, "
        f"ratio {ratio:.2f} (required < 0.1)",
    )


def test_criterion_8_oscillation_period():
    worst_offset = 0.0
    count = 0
    for cfg in FIGURE_CONFIGS:
        acc = _STORE.get(("figure", cfg)) or _acc_with_noise(cfg, 60.0)
        grid = acc.grid
        step = grid[1] - grid[0]
        term1 = np.abs(np.exp(-acc.values / 2.0) * np.sin(grid / cfg.x))
        # zero crossings of the T21 oscillation, located by sign change
        sine = np.sin(grid / cfg.x)
        crossings = grid[:-1][np.diff(np.sign(sine)) != 0]
        period = np.pi * cfg.x
        for tau_c in crossings:
            k = round(tau_c / period)
            if k == 0:
                continue
            worst_offset = max(worst_offset, abs(tau_c - k * period) / step)
            i = int(np.argmin(np.abs(grid - k * period)))
            assert term1[i] <= 1.5 * step / cfg.x
            count += 1
    ok = worst_offset <= 1.0
    _verdict(
        8,
        ok,
        f"{count} zero crossings across 4 configurations, worst offset from "
        f"k*pi*x = {worst_offset:.2f} grid steps",
    )


def test_criterion_9_full_physicality_sweep():
    delta = symplectic_form(1)
    rng = np.random.default_rng(900)
    worst_rel = 0.0
    grids = 0
    channels = 0
    for key, acc in _STORE.items():
        grids += 1
        big_gamma = acc.values
        n_mats = 2.0 * acc._wbar  # (2, 2, m)
        # T Delta T^T = e^{-Gamma} Delta for T = e^{-Gamma/2} R, so the
        # physicality form is N + i (1 - e^{-Gamma}) Delta: closed-form
        # eigenvalues for the whole grid at once
        n11, n22, n12 = n_mats[0, 0], n_mats[1, 1], n_mats[0, 1]
        off = 1.0 - np.exp(-big_gamma)
        mean = 0.5 * (n11 + n22)
        radius = np.sqrt(0.25 * (n11 - n22) ** 2 + n12**2 + off**2)
        min_eig = mean - radius
        scale = np.maximum(1.0, np.abs(mean) + radius)
        worst_rel = max(worst_rel, float(np.max(-min_eig / scale)))
        # independent spot checks through the generic validator
        cfg = acc.cfg
        for i in np.sort(rng.choice(len(acc.grid), size=200, replace=False)):
            tau = float(acc.grid[i])
            chan = qbm.qbm_channel(cfg, tau, acc)
            assert validate_channel(chan), f"{key} invalid at tau={tau}"
            channels += 1
    ok = grids >= 9 and worst_rel <= 1e-9
    _verdict(
        9,
        ok,
        f"{grids} trajectory grids fully checked in closed form (worst "
        f"relative negativity {worst_rel:.1e}), {channels} generic "
        f"validator spot checks",
    )
