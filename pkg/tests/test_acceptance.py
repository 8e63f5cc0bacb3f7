"""Acceptance suite: one test per release criterion, each printing a verdict line.

Run with output visible:

    pytest tests/test_acceptance.py -s

Every criterion is checked at its stated tolerance; nothing is deferred to
later calibration.
"""

import json
import math
from fractions import Fraction

import numpy as np

from kappamech import charts, cli, ktrig, verify
from kappamech.bracket import box_sampler
from kappamech.charts import casimir, lie_generators, parallel_state, polar_state, to_ambient
from kappamech.dynamics import IntegratorConfig, closure_detect, integrate
from kappamech.integrals import IntegralSpec
from kappamech.systems import SystemSpec, kinetic_energy

KAPPAS = (-1.0, -0.3, 0.0, 0.5, 1.0)


def _ok(number: int, label: str) -> None:
    print(f"\nACCEPTANCE {number:2d}: {label} ... PASS")


def _phase(state):
    return np.array(list(state.coords) + list(state.momenta))


def test_criterion_01_curvature_trig_identities():
    rng = np.random.default_rng(101)
    worst = 0.0
    for _ in range(10_000):
        k = rng.uniform(-2.0, 2.0)
        x = rng.uniform(-1.5, 1.5)
        c, s = ktrig.ck(k, x), ktrig.sk(k, x)
        worst = max(worst, abs(c * c + k * s * s - 1.0))
        worst = max(worst, abs(ktrig.ck(k, 2 * x) - (c * c - k * s * s)))
        worst = max(worst, abs(ktrig.sk(k, 2 * x) - 2.0 * s * c))
    assert worst <= 1e-12, f"identity residual {worst:.3e}"
    _ok(1, f"curvature-trig identities at 1e4 points (worst {worst:.2e} <= 1e-12)")


def test_criterion_02_chart_round_trips_and_invariance():
    worst_rt = 0.0
    worst_inv = 0.0
    for kappa in KAPPAS:
        sampler = box_sampler("beltrami", kappa)
        for i in range(1000):
            st = sampler(np.random.default_rng((102, i)))
            amb = to_ambient(st)
            ref_t = kinetic_energy(st)
            ref_j = lie_generators(st)
            ref_c = casimir(st)
            worst_inv = max(worst_inv, abs(ref_c - 2.0 * ref_t) / (1.0 + abs(ref_c)))
            for chart in ("beltrami", "parallel", "polar", "ambient"):
                other = charts.from_ambient(amb, chart)
                back = charts.from_ambient(to_ambient(other), chart)
                worst_rt = max(
                    worst_rt, float(np.max(np.abs(_phase(other) - _phase(back))))
                )
                scale = 1.0 + abs(ref_c)
                worst_inv = max(worst_inv, abs(kinetic_energy(other) - ref_t) / scale)
                worst_inv = max(worst_inv, abs(casimir(other) - ref_c) / scale)
                for a, b in zip(lie_generators(other), ref_j):
                    worst_inv = max(worst_inv, abs(a - b) / (1.0 + abs(b)))
    assert worst_rt <= 1e-10, f"round-trip residual {worst_rt:.3e}"
    assert worst_inv <= 1e-10, f"invariance residual {worst_inv:.3e}"
    _ok(2, f"chart round trips ({worst_rt:.2e}) and invariants ({worst_inv:.2e}) <= 1e-10")


def test_criterion_03_structure_constants_all_charts():
    rows = verify.run_structure_suite(n=200, seed=7)
    bad = [r for r in rows if not r["pass"]]
    assert not bad, f"structure failures: {[r['pair'] for r in bad]}"
    worst = max(r["max_abs"] for r in rows)
    _ok(3, f"isometry-algebra brackets in 4 charts x {len(rows)} rows (worst {worst:.2e} <= 1e-10)")


def test_criterion_04_commutation_catalog():
    rows = verify.run_bracket_suite(n=200, seed=7)
    bad = [r for r in rows if not r["pass"]]
    assert not bad, f"commutation failures: {[r['pair'] for r in bad]}"
    worst = max(r["max_abs"] for r in rows)
    _ok(4, f"{len(rows)} (H, I) pairs commute at 200 states each (worst {worst:.2e} <= 1e-8)")


def test_criterion_05_negative_controls():
    rows = verify.run_negative_controls(n=50, seed=7)
    assert all(row["pass"] for row in rows), [r["pair"] for r in rows if not r["pass"]]
    weakest = min(r["max_abs"] for r in rows)
    _ok(5, f"{{H, q1}} detected as non-conserved for {len(rows)} families (weakest {weakest:.2e})")


def test_criterion_06_functional_independence():
    rows = verify.run_independence_suite(n_states=100, seed=7)
    bad = [r for r in rows if not r["pass"]]
    assert not bad, f"rank failures: {bad}"
    frac = min(r["rank3_fraction"] for r in rows)
    assert all(r["rank4_max"] == 3 for r in rows)
    _ok(6, f"rank(H, H_xi, X) = 3 at >= {100*frac:.0f}% of states; 4-function rank never 4")


def test_criterion_07_flat_limit_decay():
    rows = verify.run_flat_limit_suite(seed=7)
    bad = [r for r in rows if not r["pass"]]
    assert not bad, f"flat-limit failures: {[(r['pair'], r['decade_ratios']) for r in bad]}"
    ratios = [x for r in rows for x in r["decade_ratios"]]
    _ok(
        7,
        f"first-order curvature decay for {len(rows)} formula families "
        f"(decade ratios in [{min(ratios):.2f}, {max(ratios):.2f}] within [8, 12])",
    )


def test_criterion_08_conservation_under_flow():
    cfg = IntegratorConfig(rel_tol=1e-10, abs_tol=1e-12, max_step=0.5)
    worst = 0.0
    for kappa in (0.5, -0.5):
        spec = SystemSpec("henon_heiles_kdv_curved", kappa=kappa, Omega=0.3, alpha=0.25)
        st = charts.beltrami_state(kappa, 0.25, -0.2, 0.3, 0.35)
        traj = integrate(spec, st, 100.0, cfg, (IntegralSpec("I_hh_kdv", spec),))
        for name in traj.conserved:
            worst = max(worst, traj.drift(name))

        osc = SystemSpec("aniso_oscillator", kappa=kappa, omega=1.0, gamma=Fraction(2))
        st = parallel_state(kappa, 0.15, -0.1, 0.12, 0.18)
        ints = tuple(IntegralSpec(nm, osc) for nm in ("H_xi", "X_real", "Y_real"))
        traj = integrate(osc, st, 100.0, cfg, ints)
        for name in traj.conserved:
            worst = max(worst, traj.drift(name))
    assert worst <= 1e-6, f"drift {worst:.3e}"
    _ok(8, f"every attached integral drifts <= {worst:.2e} over t=100 (limit 1e-6)")


def _closure_case(gamma, kappa, horizon, amp, samples=250, rel_tol=1e-10):
    spec = SystemSpec("aniso_oscillator", kappa=kappa, omega=1.0, gamma=gamma)
    st = parallel_state(kappa, amp, -0.8 * amp, 0.5 * amp, 0.9 * amp)
    t_eval = np.linspace(0.0, horizon, int(horizon * samples))[1:]
    cfg = IntegratorConfig(rel_tol=rel_tol, abs_tol=1e-13, max_step=0.5)
    traj = integrate(spec, st, horizon, cfg, (), t_eval)
    return closure_detect(traj, 1e-4)


def test_criterion_09_closed_orbits():
    worst_period_err = 0.0
    for g in (Fraction(1), Fraction(2), Fraction(1, 2), Fraction(3, 2)):
        oracle = 2.0 * math.pi * g.denominator
        report = _closure_case(g, 0.0, 1.3 * oracle, amp=0.2)
        assert report.closed, f"flat gamma={g} did not close"
        err = abs(report.period - oracle)
        worst_period_err = max(worst_period_err, err)
        assert err < 1e-4, f"flat gamma={g} period error {err:.2e}"
    for g in (Fraction(1), Fraction(2), Fraction(1, 2)):
        for kappa in (0.5, -0.5):
            horizon = 1.4 * 2.0 * math.pi * g.denominator
            report = _closure_case(g, kappa, horizon, amp=0.15)
            assert report.closed, f"curved gamma={g} kappa={kappa} did not close"
    control = _closure_case(math.sqrt(2.0), 0.0, 200.0, amp=0.2, samples=150, rel_tol=1e-9)
    assert not control.closed and control.min_distance > 1e-4
    _ok(
        9,
        "commensurate orbits close (flat period error "
        f"{worst_period_err:.2e} <= 1e-4; curved cases closed; irrational control open, "
        f"min distance {control.min_distance:.2e})",
    )


def test_criterion_10_geodesic_period():
    spec = SystemSpec("free", kappa=1.0)
    st = polar_state(1.0, math.pi / 2, 0.0, 0.0, 1.0)
    cfg = IntegratorConfig(rel_tol=1e-12, abs_tol=1e-14, max_step=0.1)
    traj = integrate(spec, st, 2.0 * math.pi, cfg)
    dist = float(np.max(np.abs(_phase(to_ambient(traj.states[-1])) - _phase(to_ambient(st)))))
    assert dist <= 1e-6, f"great-circle return distance {dist:.3e}"
    _ok(10, f"unit-speed great circle returns within {dist:.2e} at t = 2*pi (limit 1e-6)")


def test_criterion_11_verification_is_deterministic(tmp_path):
    for sub in ("first", "second"):
        rc = cli.main(
            ["verify", "all", "--n", "20", "--seed", "7", "--out", str(tmp_path / sub)]
        )
        assert rc == 0
    a = (tmp_path / "first" / "verify_all.json").read_bytes()
    b = (tmp_path / "second" / "verify_all.json").read_bytes()
    assert a == b
    report = json.loads(a)
    assert report["all_pass"] is True
    _ok(11, "two seeded verify-all runs produced byte-identical passing reports")
