"""Canonical Poisson brackets, commutation checks and independence ranks.

Brackets are computed through forward-mode dual numbers, so a vanishing
bracket vanishes to round-off, not to a finite-difference truncation level.
Finite differences survive only as a cross-check oracle in the test suite.

In the three intrinsic charts the bracket is the canonical one on the two
coordinate/momentum pairs.  In the ambient chart it is the unconstrained
canonical bracket on the three pairs (x_mu, pi_mu); functions are extended
off the constraint surface by their literal formulas and states are sampled
on the surface, which is the right setting for the isometry generators and
the kinetic energy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import charts
from .charts import State
from .dual import Dual, derivative
from .errors import KappaMechError, SamplerExhaustedError

DEFAULT_REL_TOLERANCE = 1e-8


@dataclass(frozen=True)
class PhaseFunction:
    """A named scalar function of a chart state, differentiable via duals."""

    name: str
    fn: object
    chart: str

    def __call__(self, state: State):
        return self.fn(state)


@dataclass
class BracketReport:
    """Outcome of sampling |{f, g}| over a set of states.

    ``max_abs``/``mean_abs`` are gradient-normalized residuals
    |{f,g}| / (1 + |grad f| |grad g|), so one tolerance works across scales.
    """

    pair: str
    sample_count: int
    max_abs: float
    mean_abs: float
    tolerance: float
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "pair": self.pair,
            "n": int(self.sample_count),
            "max_abs": float(self.max_abs),
            "mean_abs": float(self.mean_abs),
            "tolerance": float(self.tolerance),
            "pass": bool(self.passed),
        }


def phase_gradient(fn, state: State) -> list:
    """All phase-space partials of ``fn`` at ``state`` (complex-capable)."""
    c = list(state.coords)
    m = list(state.momenta)
    dim = len(c)
    out = []
    for i in range(dim):
        seeded = list(c)
        seeded[i] = Dual(c[i], 1.0)
        out.append(derivative(fn(state.replace_phase(seeded, m))))
    for i in range(dim):
        seeded = list(m)
        seeded[i] = Dual(m[i], 1.0)
        out.append(derivative(fn(state.replace_phase(c, seeded))))
    return out


def poisson_bracket(f, g, state: State):
    """{f, g} = sum_i df/dq_i dg/dp_i - df/dp_i dg/dq_i at the state."""
    bracket, _, _ = bracket_with_norms(f, g, state)
    return bracket


def bracket_with_norms(f, g, state: State):
    """Bracket value plus the two gradient norms (for relative tolerances)."""
    gf = phase_gradient(f, state)
    gg = phase_gradient(g, state)
    dim = len(state.coords)
    bracket = 0.0
    for i in range(dim):
        bracket += gf[i] * gg[dim + i] - gf[dim + i] * gg[i]
    nf = math.sqrt(sum(abs(v) ** 2 for v in gf))
    ng = math.sqrt(sum(abs(v) ** 2 for v in gg))
    return bracket, nf, ng


# ---------------------------------------------------------------------------
# state samplers
# ---------------------------------------------------------------------------

def box_sampler(chart: str, kappa: float, coord_scale: float = 1.0, momentum_scale: float = 2.0):
    """Uniform sampler over a chart-dependent safe box.

    Stays clear of chart boundaries: the projective disk is sampled at 80%
    of its radius, curved parallel/polar boxes at 80% of the singular
    border.  ``coord_scale`` shrinks the box further for potentials with
    interior poles (e.g. a frequency-stretched coordinate).
    """
    if chart == "beltrami" or chart == "ambient":
        lim = 0.8 / math.sqrt(-kappa) if kappa < 0.0 else 2.0
        lim *= coord_scale
        disk2 = 0.9 / -kappa if kappa < 0.0 else math.inf

        def draw(rng):
            while True:
                q1, q2 = rng.uniform(-lim, lim, size=2)
                if q1 * q1 + q2 * q2 < disk2:
                    break
            p1, p2 = rng.uniform(-momentum_scale, momentum_scale, size=2)
            st = charts.BeltramiState(kappa, q1, q2, p1, p2)
            return charts.to_ambient(st) if chart == "ambient" else st

        return draw

    if chart == "parallel":
        lim = 0.8 * math.pi / (2.0 * math.sqrt(kappa)) if kappa > 0.0 else 2.0
        lim *= coord_scale

        def draw(rng):
            x, y = rng.uniform(-lim, lim, size=2)
            px, py = rng.uniform(-momentum_scale, momentum_scale, size=2)
            return charts.ParallelState(kappa, x, y, px, py)

        return draw

    if chart == "polar":
        lim = 0.8 * math.pi / math.sqrt(kappa) if kappa > 0.0 else 2.0
        lim *= coord_scale

        def draw(rng):
            r = rng.uniform(0.1 * lim, lim)
            phi = rng.uniform(0.0, 2.0 * math.pi)
            pr, pphi = rng.uniform(-momentum_scale, momentum_scale, size=2)
            return charts.PolarState(kappa, r, phi, pr, pphi)

        return draw

    raise ValueError(f"unknown chart {chart!r}")


# ---------------------------------------------------------------------------
# verification drivers
# ---------------------------------------------------------------------------

def verify_commutation(
    h,
    i,
    sampler,
    n: int,
    seed: int = 0,
    tolerance: float = DEFAULT_REL_TOLERANCE,
    pair: str = "",
) -> BracketReport:
    """Sample |{h, i}| at n in-domain states drawn from ``sampler``.

    States where either function fails to evaluate (pole, radicand, chart
    coverage) are rejected and redrawn; more than 100n rejections raise
    SamplerExhaustedError.
    """
    accepted = 0
    draws = 0
    max_draws = 100 * n
    max_abs = 0.0
    total = 0.0
    failures = []
    idx = 0
    while accepted < n:
        if draws >= max_draws:
            raise SamplerExhaustedError(
                f"only {accepted}/{n} in-domain states after {draws} draws for {pair or 'pair'}"
            )
        rng = np.random.default_rng((seed, idx))
        idx += 1
        draws += 1
        state = sampler(rng)
        try:
            bracket, nf, ng = bracket_with_norms(h, i, state)
        except KappaMechError:
            continue
        accepted += 1
        resid = abs(bracket) / (1.0 + nf * ng)
        total += resid
        if resid > max_abs:
            max_abs = resid
        if resid > tolerance:
            failures.append(state)
    name = pair or f"{{{getattr(h, 'name', 'f')},{getattr(i, 'name', 'g')}}}"
    return BracketReport(name, n, max_abs, total / n, tolerance, failures)


_RELATIONS = (
    # {J12, J01} = J02, {J12, J02} = -J01, {J01, J02} = kappa*J12
    ("{J12,J01}-J02", (2, 0), lambda j, k: j[1]),
    ("{J12,J02}+J01", (2, 1), lambda j, k: -j[0]),
    ("{J01,J02}-kappa*J12", (0, 1), lambda j, k: k * j[2]),
)


def structure_constants_rows(
    kappa: float, n: int = 100, seed: int = 0, tolerance: float = 1e-10
) -> list[BracketReport]:
    """Check the three isometry-algebra bracket relations in every chart."""
    rows = []
    for chart_idx, chart in enumerate(charts.CHARTS):
        sampler = box_sampler(chart, kappa)
        for rel_idx, (label, (a, b), expected) in enumerate(_RELATIONS):
            fa = PhaseFunction(f"J_{a}", lambda s, a=a: charts.lie_generators(s)[a], chart)
            fb = PhaseFunction(f"J_{b}", lambda s, b=b: charts.lie_generators(s)[b], chart)
            accepted = 0
            draws = 0
            idx = 0
            max_abs = 0.0
            total = 0.0
            failures = []
            while accepted < n:
                if draws >= 100 * n:
                    raise SamplerExhaustedError(f"structure check starved in chart {chart}")
                rng = np.random.default_rng((seed, 3 * chart_idx + rel_idx, idx))
                idx += 1
                draws += 1
                state = sampler(rng)
                try:
                    br, nf, ng = bracket_with_norms(fa, fb, state)
                    target = expected(charts.lie_generators(state), kappa)
                except KappaMechError:
                    continue
                accepted += 1
                resid = abs(br - target) / (1.0 + nf * ng)
                total += resid
                max_abs = max(max_abs, resid)
                if resid > tolerance:
                    failures.append(state)
            rows.append(
                BracketReport(f"{chart}:{label}", n, max_abs, total / n, tolerance, failures)
            )
    return rows


def structure_constants_check(
    kappa: float, n: int = 100, seed: int = 0, tolerance: float = 1e-10
) -> BracketReport:
    """Aggregate of structure_constants_rows over all charts and relations."""
    rows = structure_constants_rows(kappa, n, seed, tolerance)
    max_abs = max(r.max_abs for r in rows)
    mean_abs = sum(r.mean_abs for r in rows) / len(rows)
    failures = [s for r in rows for s in r.failures]
    return BracketReport(
        f"so_kappa(3) structure, kappa={kappa}", n * len(rows), max_abs, mean_abs, tolerance, failures
    )


def independence_rank(functions, state: State, threshold: float = 1e-8) -> int:
    """Numerical rank of the row-normalized gradient matrix at a state."""
    rows = []
    for f in functions:
        grad = np.array([float(v) for v in phase_gradient(f, state)])
        norm = np.linalg.norm(grad)
        rows.append(grad / norm if norm > 0.0 else grad)
    sigma = np.linalg.svd(np.array(rows), compute_uv=False)
    return int(np.sum(sigma > threshold))
