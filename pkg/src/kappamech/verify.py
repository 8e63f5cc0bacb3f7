"""Catalog-wide property suites: commutation, structure, independence, flat limits.

Each suite walks every applicable (system, integral) pairing and returns a
deterministic list of row dicts (fixed order, seeded sampling), so two runs
with the same seed produce byte-identical JSON reports.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from . import bracket, charts, integrals, systems
from .bracket import PhaseFunction, box_sampler
from .errors import KappaMechError
from .integrals import IntegralSpec
from .systems import SystemSpec

GAMMAS = (Fraction(1), Fraction(2), Fraction(1, 2), Fraction(3, 2), Fraction(3))
CURVED_KAPPAS = (0.5, -0.5)
STRUCTURE_KAPPAS = (-1.0, -0.3, 0.0, 0.5, 1.0)
FLAT_LIMIT_KAPPAS = (1e-2, 1e-3, 1e-4)
RDG_MAX_DEGREE = 5
SUPERPOSED_MAX_TERMS = 5

BRACKET_TOLERANCE = 1e-8
STRUCTURE_TOLERANCE = 1e-10
RANK_THRESHOLD = 1e-8
DECADE_RATIO_RANGE = (8.0, 12.0)


def _hamiltonian_fn(spec: SystemSpec, chart: str) -> PhaseFunction:
    return PhaseFunction("H", lambda s: systems.hamiltonian(spec, s), chart)


def _integral_fn(ispec: IntegralSpec, chart: str) -> PhaseFunction:
    return PhaseFunction(ispec.name, ispec, chart)


def _oscillator_sampler(spec: SystemSpec):
    g = max(1.0, spec.gamma_value)
    if spec.kappa < 0.0:
        # keep 2*kappa*H_xi >= 0 attainable: small box, gentle momenta
        return box_sampler("parallel", spec.kappa, coord_scale=0.5 / g, momentum_scale=0.5)
    return box_sampler("parallel", spec.kappa, coord_scale=0.8 / g, momentum_scale=1.0)


def _rdg_coefficients(rng) -> tuple:
    m = int(rng.integers(2, SUPERPOSED_MAX_TERMS + 1))
    return tuple(float(c) for c in rng.uniform(-0.5, 0.5, size=m))


def bracket_cases(seed: int = 0):
    """Fixed-order list of (name, system, integral, sampler) commutation cases."""
    cases = []

    def add(name, spec, iname, sampler=None):
        ispec = IntegralSpec(iname, spec)
        chart = "parallel" if spec.family.startswith("aniso") or spec.family == "higgs" else "beltrami"
        sampler = sampler or box_sampler(chart, spec.kappa)
        cases.append((name, spec, ispec, sampler, chart))

    for g in GAMMAS:
        for kappa in (0.0,) + CURVED_KAPPAS:
            spec = SystemSpec("aniso_oscillator", kappa=kappa, omega=1.0, gamma=g)
            smp = _oscillator_sampler(spec)
            tag = f"aniso gamma={g} kappa={kappa}"
            add(f"{tag} : H_xi", spec, "H_xi", smp)
            add(f"{tag} : X", spec, "X_real", smp)
            add(f"{tag} : Y", spec, "Y_real", smp)

    rng = np.random.default_rng((seed, 9000))
    for n in range(1, RDG_MAX_DEGREE + 1):
        coeff = tuple(0.0 if i != n - 1 else 0.25 + 0.05 * n for i in range(n))
        for kappa in (0.0,) + CURVED_KAPPAS:
            family = "rdg_flat" if kappa == 0.0 else "rdg_curved"
            spec = SystemSpec(family, kappa=kappa, coefficients=coeff)
            add(f"rdg n={n} kappa={kappa} : L", spec, "L_rdg")

    for kappa in (0.0,) + CURVED_KAPPAS:
        family = "rdg_flat" if kappa == 0.0 else "rdg_superposed"
        coeff = _rdg_coefficients(rng)
        spec = SystemSpec(family, kappa=kappa, coefficients=coeff)
        add(f"rdg superposed M={len(coeff)} kappa={kappa} : L", spec, "L_superposed")

    for kappa in (0.0,) + CURVED_KAPPAS:
        family = "henon_heiles_kdv_flat" if kappa == 0.0 else "henon_heiles_kdv_curved"
        spec = SystemSpec(family, kappa=kappa, Omega=0.3, alpha=0.2)
        add(f"hh_kdv kappa={kappa} : I", spec, "I_hh_kdv")

    for kappa in (0.0, 0.5):
        spec = SystemSpec("higgs", kappa=kappa, omega=1.2)
        smp = _oscillator_sampler(SystemSpec("aniso_oscillator", kappa=kappa, omega=1.2))
        add(f"higgs kappa={kappa} : J", spec, "J_angular", box_sampler("beltrami", kappa))
        add(f"higgs kappa={kappa} : X", spec, "X_real", smp)
    spec = SystemSpec("aniso_oscillator_rosochatius", kappa=0.5, gamma=Fraction(2), lambda1=0.1, lambda2=0.15)
    add("rosochatius gamma=2 kappa=0.5 : H_xi", spec, "H_xi", _rosochatius_sampler(spec))
    spec = SystemSpec("kepler_coulomb", kappa=-0.5, k_coulomb=-1.0)
    add("kepler kappa=-0.5 : J", spec, "J_angular", _kepler_sampler(spec))
    spec = SystemSpec("free", kappa=0.5)
    add("free kappa=0.5 : J", spec, "J_angular")
    return cases


def _rosochatius_sampler(spec: SystemSpec):
    base = _oscillator_sampler(spec)

    def draw(rng):
        st = base(rng)
        # keep both barrier coordinates away from their singular axes
        x = st.x if abs(st.x) > 0.05 else st.x + math.copysign(0.1, st.x or 1.0)
        y = st.y if abs(st.y) > 0.05 else st.y + math.copysign(0.1, st.y or 1.0)
        return charts.ParallelState(spec.kappa, x, y, st.px, st.py)

    return draw


def _kepler_sampler(spec: SystemSpec):
    base = box_sampler("beltrami", spec.kappa)

    def draw(rng):
        st = base(rng)
        if st.q1**2 + st.q2**2 < 0.01:
            st = charts.BeltramiState(spec.kappa, st.q1 + 0.2, st.q2 + 0.2, st.p1, st.p2)
        return st

    return draw


def run_bracket_suite(n: int = 200, seed: int = 7) -> list[dict]:
    rows = []
    for name, spec, ispec, sampler, chart in bracket_cases(seed):
        h = _hamiltonian_fn(spec, chart)
        f = _integral_fn(ispec, chart)
        report = bracket.verify_commutation(
            h, f, sampler, n, seed=seed, tolerance=BRACKET_TOLERANCE, pair=name
        )
        rows.append(report.to_dict())
    return rows


def negative_control_cases():
    """Non-free families paired with the non-conserved coordinate q1/x."""
    specs = [
        SystemSpec("aniso_oscillator", kappa=0.0, gamma=Fraction(2)),
        SystemSpec("aniso_oscillator", kappa=0.5, gamma=Fraction(2)),
        SystemSpec("aniso_oscillator_rosochatius", kappa=0.5, gamma=Fraction(2), lambda1=0.1, lambda2=0.1),
        SystemSpec("higgs", kappa=0.5),
        SystemSpec("curved_21_typeII", kappa=0.5),
        SystemSpec("rdg_flat", kappa=0.0, coefficients=(0.0, 0.0, 0.3)),
        SystemSpec("rdg_curved", kappa=0.5, coefficients=(0.0, 0.0, 0.3)),
        SystemSpec("rdg_superposed", kappa=0.5, coefficients=(0.1, 0.2, 0.3)),
        SystemSpec("henon_heiles_kdv_flat", kappa=0.0, Omega=0.3, alpha=0.2),
        SystemSpec("henon_heiles_kdv_curved", kappa=0.5, Omega=0.3, alpha=0.2),
        SystemSpec("henon_heiles_sk_flat", kappa=0.0, Omega=0.3, alpha=0.2),
        SystemSpec("henon_heiles_kk_flat", kappa=0.0, Omega=0.3, alpha=0.2),
        SystemSpec("kepler_coulomb", kappa=0.5, k_coulomb=-1.0),
    ]
    out = []
    for spec in specs:
        if spec.family.startswith("aniso"):
            chart = "parallel"
            sampler = (
                _rosochatius_sampler(spec)
                if spec.family == "aniso_oscillator_rosochatius"
                else _oscillator_sampler(spec)
            )
        else:
            chart = "beltrami"
            sampler = _kepler_sampler(spec) if spec.family == "kepler_coulomb" else box_sampler(chart, spec.kappa)
        out.append((f"{spec.family} kappa={spec.kappa} : q1", spec, sampler, chart))
    return out


def run_negative_controls(n: int = 50, seed: int = 7) -> list[dict]:
    """{H, q1} must fail the commutation tolerance for every non-free family."""
    rows = []
    for name, spec, sampler, chart in negative_control_cases():
        h = _hamiltonian_fn(spec, chart)
        q1 = PhaseFunction("q1", lambda s: s.coords[0], chart)
        report = bracket.verify_commutation(
            h, q1, sampler, n, seed=seed, tolerance=BRACKET_TOLERANCE, pair=name
        )
        rows.append(
            {
                "pair": name,
                "n": n,
                "max_abs": float(report.max_abs),
                "tolerance": report.tolerance,
                # the control passes when the bracket engine *detects* the failure
                "pass": bool(not report.passed and report.max_abs > 100.0 * BRACKET_TOLERANCE),
            }
        )
    return rows


def run_structure_suite(n: int = 200, seed: int = 7, kappas=STRUCTURE_KAPPAS) -> list[dict]:
    rows = []
    for kappa in kappas:
        for report in bracket.structure_constants_rows(kappa, n, seed, STRUCTURE_TOLERANCE):
            row = report.to_dict()
            row["kappa"] = kappa
            rows.append(row)
    return rows


def run_independence_suite(n_states: int = 100, seed: int = 7) -> list[dict]:
    """Gradient ranks of (H, H_xi, X) and (H, H_xi, X, Y) for each gamma."""
    rows = []
    for g in GAMMAS:
        for kappa in (0.0,) + CURVED_KAPPAS:
            spec = SystemSpec("aniso_oscillator", kappa=kappa, omega=1.0, gamma=g)
            sampler = _oscillator_sampler(spec)
            h = _hamiltonian_fn(spec, "parallel")
            hxi = _integral_fn(IntegralSpec("H_xi", spec), "parallel")
            x = _integral_fn(IntegralSpec("X_real", spec), "parallel")
            y = _integral_fn(IntegralSpec("Y_real", spec), "parallel")
            rank3 = 0
            rank4_max = 0
            accepted = 0
            draws = 0
            idx = 0
            while accepted < n_states and draws < 100 * n_states:
                rng = np.random.default_rng((seed, idx))
                idx += 1
                draws += 1
                state = sampler(rng)
                try:
                    r3 = bracket.independence_rank([h, hxi, x], state, RANK_THRESHOLD)
                    r4 = bracket.independence_rank([h, hxi, x, y], state, RANK_THRESHOLD)
                except KappaMechError:
                    continue
                accepted += 1
                rank3 += r3 == 3
                rank4_max = max(rank4_max, r4)
            frac = rank3 / accepted if accepted else 0.0
            rows.append(
                {
                    "pair": f"rank gamma={g} kappa={kappa}",
                    "n": accepted,
                    "rank3_fraction": float(frac),
                    "rank4_max": int(rank4_max),
                    "pass": bool(frac >= 0.95 and rank4_max == 3),
                }
            )
    return rows


# ---------------------------------------------------------------------------
# formula-level flat limits
# ---------------------------------------------------------------------------

def _fixed_parallel_states(kappa: float, seed: int, count: int = 20, box: float = 0.35):
    rng = np.random.default_rng((seed, 31))
    out = []
    for _ in range(count):
        x, y = rng.uniform(-box, box, size=2)
        px, py = rng.uniform(-0.8, 0.8, size=2)
        out.append(charts.ParallelState(kappa, x, y, px, py))
    return out


def _fixed_beltrami_states(kappa: float, seed: int, count: int = 20, box: float = 0.6):
    rng = np.random.default_rng((seed, 37))
    out = []
    for _ in range(count):
        q1, q2 = rng.uniform(-box, box, size=2)
        p1, p2 = rng.uniform(-0.8, 0.8, size=2)
        out.append(charts.BeltramiState(kappa, q1, q2, p1, p2))
    return out


def flat_limit_formula_cases(seed: int = 7):
    """(name, callable kappa -> sup-deviation from the flat partner) pairs."""
    cases = []

    def osc_case(label, g, fn_curved, fn_flat):
        def deviation(kappa):
            dev = 0.0
            flat_states = _fixed_parallel_states(0.0, seed)
            curved_states = _fixed_parallel_states(kappa, seed)
            spec_c = SystemSpec("aniso_oscillator", kappa=kappa, omega=1.1, gamma=g)
            spec_0 = SystemSpec("aniso_oscillator", kappa=0.0, omega=1.1, gamma=g)
            for s0, sk in zip(flat_states, curved_states):
                dev = max(dev, abs(fn_curved(spec_c, sk) - fn_flat(spec_0, s0)))
            return dev

        cases.append((f"{label} gamma={g}", deviation))

    for g in (Fraction(1), Fraction(2), Fraction(1, 2)):
        m, n = g.numerator, g.denominator
        even = (m + n) % 2 == 0
        osc_case("H", g, systems.hamiltonian, systems.hamiltonian)
        osc_case(
            "B+", g, lambda sp, s: integrals.ladder(sp, s, +1), lambda sp, s: integrals.ladder(sp, s, +1)
        )
        osc_case(
            "A+", g, lambda sp, s: integrals.shift(sp, s, +1), lambda sp, s: integrals.shift(sp, s, +1)
        )
        gv = float(g)
        if even:
            # curved X -> flat X; curved Y carries a 1/E factor relative to flat Y
            osc_case(
                "X", g,
                lambda sp, s: integrals.real_integrals(sp, s)[0],
                lambda sp, s: integrals.real_integrals(sp, s)[0],
            )
            osc_case(
                "Y", g,
                lambda sp, s: integrals.real_integrals(sp, s)[1],
                lambda sp, s, gv=gv: (gv / sp.omega) * integrals.real_integrals(sp, s)[1],
            )
        else:
            osc_case(
                "X", g,
                lambda sp, s: integrals.real_integrals(sp, s)[0],
                lambda sp, s, gv=gv: (gv / sp.omega) * integrals.real_integrals(sp, s)[0],
            )
            osc_case(
                "Y", g,
                lambda sp, s: integrals.real_integrals(sp, s)[1],
                lambda sp, s: integrals.real_integrals(sp, s)[1],
            )

    def v_case(n):
        def deviation(kappa):
            dev = 0.0
            for s0, sk in zip(_fixed_beltrami_states(0.0, seed), _fixed_beltrami_states(kappa, seed)):
                dev = max(
                    dev,
                    abs(
                        systems.rdg_curved_potential(n, kappa, sk)
                        - systems.rdg_flat_term(n, s0.q1, s0.q2)
                    ),
                )
            return dev

        cases.append((f"V_n n={n}", deviation))

    for n in range(1, RDG_MAX_DEGREE + 1):
        v_case(n)

    def i_case():
        def deviation(kappa):
            spec_c = SystemSpec("henon_heiles_kdv_curved", kappa=kappa, Omega=0.3, alpha=0.2)
            spec_0 = SystemSpec("henon_heiles_kdv_flat", kappa=0.0, Omega=0.3, alpha=0.2)
            dev = 0.0
            for s0, sk in zip(_fixed_beltrami_states(0.0, seed), _fixed_beltrami_states(kappa, seed)):
                dev = max(dev, abs(integrals.rdg_integral(spec_c, sk) - integrals.rdg_integral(spec_0, s0)))
            return dev

        cases.append(("I_kdv", deviation))

    i_case()
    return cases


def run_flat_limit_suite(seed: int = 7, kappas=FLAT_LIMIT_KAPPAS) -> list[dict]:
    lo, hi = DECADE_RATIO_RANGE
    rows = []
    for name, deviation in flat_limit_formula_cases(seed):
        devs = [float(deviation(k)) for k in kappas]
        ratios = [devs[i] / devs[i + 1] for i in range(len(devs) - 1)]
        ok = all(lo <= r <= hi for r in ratios)
        rows.append(
            {
                "pair": name,
                "kappas": list(kappas),
                "deviations": devs,
                "decade_ratios": ratios,
                "pass": bool(ok),
            }
        )
    return rows


# ---------------------------------------------------------------------------
# top-level driver
# ---------------------------------------------------------------------------

SUITES = ("brackets", "structure", "independence", "flat-limits", "all")


def run_suite(suite: str, n: int = 200, seed: int = 7, kappas=None) -> dict:
    """Run one named suite (or all) and collect a deterministic report.

    ``kappas`` overrides the curvature ladder of the structure suite.
    """
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {SUITES}")
    report = {"suite": suite, "seed": seed, "n": n, "results": {}}
    if suite in ("brackets", "all"):
        report["results"]["brackets"] = run_bracket_suite(n, seed)
        report["results"]["negative_controls"] = run_negative_controls(max(10, n // 4), seed)
    if suite in ("structure", "all"):
        report["results"]["structure"] = run_structure_suite(
            n, seed, tuple(kappas) if kappas else STRUCTURE_KAPPAS
        )
    if suite in ("independence", "all"):
        report["results"]["independence"] = run_independence_suite(min(n, 100), seed)
    if suite in ("flat-limits", "all"):
        report["results"]["flat_limits"] = run_flat_limit_suite(seed)
    report["all_pass"] = all(row["pass"] for rows in report["results"].values() for row in rows)
    return report
