"""Hamiltonian flow: canonical equations, adaptive integration, closure.

The default integrator is an embedded Dormand-Prince 5(4) pair with PI-free
step control; a fixed-step 4th-order implicit Gauss rule is available for
long-horizon runs.  The curved kinetic energies couple coordinates and
momenta, so no cheap explicit splitting applies; conservation is monitored
(every attached integral is logged per accepted step), not assumed.

Chart boundaries are honest: a step that would leave the chart domain is
bisected down to a floor and then the run aborts cleanly with a boundary
event.  Trajectories on the sphere that approach the projective horizon
(x0 -> 0) switch to the ambient chart automatically when the potential has
an ambient formula.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import charts, systems
from .charts import State
from .errors import DomainError, HorizonError, KappaMechError, PoleError, StepLimitError
from .integrals import IntegralSpec
from .systems import SystemSpec

# Dormand-Prince 5(4) tableau
_DP_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_DP_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_DP_B5 = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
_DP_ERR = (
    35 / 384 - 5179 / 57600,
    0.0,
    500 / 1113 - 7571 / 16695,
    125 / 192 - 393 / 640,
    -2187 / 6784 + 92097 / 339200,
    11 / 84 - 187 / 2100,
    -1 / 40,
)

# 2-stage Gauss-Legendre (order 4)
_G_SQRT3 = math.sqrt(3.0)
_G_A = ((0.25, 0.25 - _G_SQRT3 / 6.0), (0.25 + _G_SQRT3 / 6.0, 0.25))
_G_B = (0.5, 0.5)

# projective-horizon switch: Beltrami on the sphere hands over to ambient here
X0_SWITCH = 0.05


@dataclass(frozen=True)
class IntegratorConfig:
    method: str = "rk45_adaptive"
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_step: float = 0.1
    max_steps: int = 200_000

    def __post_init__(self):
        if self.method not in ("rk45_adaptive", "gauss4_implicit"):
            raise ValueError(f"unknown integrator {self.method!r}")
        if self.rel_tol <= 0.0 or self.abs_tol <= 0.0:
            raise ValueError("integrator tolerances must be positive")


@dataclass(frozen=True)
class BoundaryEvent:
    time: float
    state: State
    reason: str


@dataclass
class Trajectory:
    """Time series of chart states with per-step conserved-quantity logs."""

    times: np.ndarray
    states: list
    conserved: dict[str, np.ndarray]
    metadata: dict = field(default_factory=dict)
    boundary_event: BoundaryEvent | None = None

    @property
    def chart(self) -> str:
        chart0 = self.states[0].chart
        if all(s.chart == chart0 for s in self.states):
            return chart0
        return "mixed"

    def phase_array(self) -> np.ndarray:
        """(n, 2*dim) array of raw coordinates and momenta (uniform chart only)."""
        if self.chart == "mixed":
            raise ValueError("trajectory switched charts; convert states explicitly")
        return np.array([list(s.coords) + list(s.momenta) for s in self.states])

    def drift(self, name: str) -> float:
        """Max relative drift of one conserved-log column."""
        vals = self.conserved[name]
        return float(np.max(np.abs(vals - vals[0])) / (1.0 + abs(vals[0])))

    def at_time(self, t: float) -> State:
        i = int(np.argmin(np.abs(self.times - t)))
        return self.states[i]


def hamilton_rhs(spec: SystemSpec, state: State) -> np.ndarray:
    """Time derivative of (coords, momenta).

    Canonical (dq, dp) = (dH/dp, -dH/dq) in the intrinsic charts; in the
    ambient chart the constrained flow with the multiplier that keeps both
    surface constraints invariant.
    """
    if isinstance(state, charts.AmbientState):
        return _ambient_rhs(spec, state)
    grad = systems.hamiltonian_gradient(spec, state)
    dim = len(state.coords)
    out = np.empty(2 * dim)
    out[:dim] = grad[dim:]
    out[dim:] = -grad[:dim]
    return out


def _ambient_rhs(spec: SystemSpec, state: charts.AmbientState) -> np.ndarray:
    k = state.kappa
    x = np.array(state.coords)
    pi = np.array(state.momenta)
    if spec.family == "free":
        grad_v = np.zeros(3)
    else:
        grad = systems.phase_gradient(lambda s: systems.potential(spec, s), state)
        grad_v = grad[:3]
    t_free = 0.5 * (k * pi[0] ** 2 + pi[1] ** 2 + pi[2] ** 2)
    lam = 0.5 * (float(x @ grad_v) - 2.0 * t_free)
    xdot = np.array([k * pi[0], pi[1], pi[2]])
    normal = np.array([x[0], k * x[1], k * x[2]])
    pidot = 2.0 * lam * normal - grad_v
    return np.concatenate([xdot, pidot])


def _rhs_vector(spec: SystemSpec, template: State, y: np.ndarray) -> np.ndarray:
    dim = len(template.coords)
    state = template.replace_phase(tuple(y[:dim]), tuple(y[dim:]))
    return hamilton_rhs(spec, state)


def _domain_violation(state: State) -> str | None:
    """Human-readable offending coordinate, or None when in-domain."""
    k = state.kappa
    if isinstance(state, charts.ParallelState) and k > 0.0:
        rk = math.sqrt(k)
        if not (-math.pi / rk < state.x <= math.pi / rk):
            return f"x = {state.x:.6g} hit the parallel-chart boundary"
        if not abs(state.y) < math.pi / (2.0 * rk):
            return f"y = {state.y:.6g} hit the parallel-chart boundary"
        return None
    if isinstance(state, charts.PolarState):
        if state.r <= 0.0:
            return f"r = {state.r:.6g} reached the chart origin"
        if k > 0.0 and not state.r < math.pi / math.sqrt(k):
            return f"r = {state.r:.6g} reached the antipode"
        return None
    if isinstance(state, charts.BeltramiState) and k < 0.0:
        if not state.q1**2 + state.q2**2 < 1.0 / abs(k):
            return "q reached the projective boundary of the hyperbolic disk"
        return None
    return None


def integrate(
    spec: SystemSpec,
    state0: State,
    t_end: float,
    config: IntegratorConfig | None = None,
    integrals: tuple[IntegralSpec, ...] = (),
    t_eval=None,
    seed: int | None = None,
) -> Trajectory:
    """Integrate Hamilton's equations from ``state0`` for time ``t_end``.

    Every accepted step is logged together with H and the attached
    integrals.  ``t_eval`` times are hit exactly (steps are clipped).  On a
    domain boundary the run stops cleanly and the returned trajectory
    carries a ``boundary_event``.
    """
    if t_end <= 0.0:
        raise ValueError("t_end must be positive")
    if config is None:
        config = IntegratorConfig()
    if not charts.in_domain(state0):
        raise DomainError(f"initial state outside its chart domain: {state0!r}")

    eval_times = sorted(float(t) for t in t_eval) if t_eval is not None else []
    eval_i = 0
    while eval_i < len(eval_times) and eval_times[eval_i] <= 0.0:
        eval_i += 1

    names = ["H"] + [isp.name for isp in integrals]
    times = [0.0]
    states = [state0]
    logs = {name: [] for name in names}
    _log_conserved(spec, state0, integrals, logs)

    state = state0
    t = 0.0
    gauss = config.method == "gauss4_implicit"
    # the implicit rule runs at its fixed step; the adaptive one ramps up
    h = config.max_step if gauss else min(config.max_step, t_end / 100.0)
    h_floor_factor = 1e-6
    steps = 0
    boundary = None
    metadata = {
        "system": spec.to_dict(),
        "chart": state0.chart,
        "seed": seed,
        "integrator": {
            "method": config.method,
            "rel_tol": config.rel_tol,
            "abs_tol": config.abs_tol,
            "max_step": config.max_step,
            "max_steps": config.max_steps,
        },
    }

    while t < t_end - 1e-14:
        if steps >= config.max_steps:
            raise StepLimitError(f"step budget {config.max_steps} exhausted at t = {t:.6g}")
        target = t_end
        if eval_i < len(eval_times):
            target = min(target, eval_times[eval_i])
        remaining = target - t
        h = min(h, config.max_step, remaining)
        hit_target = h == remaining
        y = np.array(list(state.coords) + list(state.momenta))
        try:
            if gauss:
                y_new, err_norm = _gauss4_step(spec, state, y, h), 0.0
            else:
                y_new, err_norm = _dp_step(spec, state, y, h, config)
        except KappaMechError as exc:
            shrunk = 0.5 * h
            if shrunk < config.max_step * h_floor_factor:
                boundary = BoundaryEvent(t, state, f"singular region: {exc}")
                break
            h = shrunk
            continue
        steps += 1
        if not gauss and err_norm > 1.0:
            h = max(0.2 * h, 0.9 * h * err_norm**-0.2)
            continue
        dim = len(state.coords)
        candidate = state.replace_phase(tuple(y_new[:dim]), tuple(y_new[dim:]))
        violation = _domain_violation(candidate)
        if violation is not None:
            shrunk = 0.5 * h
            if shrunk < config.max_step * h_floor_factor:
                boundary = BoundaryEvent(t, state, violation)
                break
            h = shrunk
            continue
        t_new = target if hit_target else t + h
        if isinstance(candidate, charts.AmbientState):
            candidate = charts.ambient_state(candidate.kappa, *candidate.coords, *candidate.momenta)
        state = candidate
        t = t_new
        while eval_i < len(eval_times) and t >= eval_times[eval_i] - 1e-14:
            eval_i += 1
        times.append(t)
        states.append(state)
        _log_conserved(spec, state, integrals, logs)
        if (
            isinstance(state, charts.BeltramiState)
            and state.kappa > 0.0
            and "ambient" in systems.evaluation_charts(spec.family)
        ):
            x0 = 1.0 / math.sqrt(1.0 + state.kappa * (state.q1**2 + state.q2**2))
            if x0 < X0_SWITCH:
                state = charts.to_ambient(state)
        if not gauss:
            grow = 0.9 * err_norm**-0.2 if err_norm > 0.0 else 5.0
            h = h * min(5.0, max(0.2, grow))

    traj = Trajectory(
        times=np.array(times),
        states=states,
        conserved={k: np.array(v) for k, v in logs.items()},
        metadata=metadata,
        boundary_event=boundary,
    )
    return traj


def _log_conserved(spec, state, integrals, logs):
    logs["H"].append(float(systems.hamiltonian(spec, state)))
    for isp in integrals:
        logs[isp.name].append(float(isp(state)))


def _dp_step(spec, template, y, h, config):
    k_stages = [_rhs_vector(spec, template, y)]
    for s in range(1, 7):
        ys = y + h * sum(a * k_stages[j] for j, a in enumerate(_DP_A[s]) if a != 0.0)
        k_stages.append(_rhs_vector(spec, template, ys))
    y_new = y + h * sum(b * k for b, k in zip(_DP_B5, k_stages) if b != 0.0)
    err = h * sum(e * k for e, k in zip(_DP_ERR, k_stages) if e != 0.0)
    scale = config.abs_tol + config.rel_tol * np.maximum(np.abs(y), np.abs(y_new))
    err_norm = float(np.sqrt(np.mean((err / scale) ** 2)))
    if not np.all(np.isfinite(y_new)):
        raise PoleError("non-finite step")
    return y_new, err_norm


def _gauss4_step(spec, template, y, h):
    f0 = _rhs_vector(spec, template, y)
    k1 = f0.copy()
    k2 = f0.copy()
    for _ in range(50):
        k1_new = _rhs_vector(spec, template, y + h * (_G_A[0][0] * k1 + _G_A[0][1] * k2))
        k2_new = _rhs_vector(spec, template, y + h * (_G_A[1][0] * k1 + _G_A[1][1] * k2))
        delta = max(np.max(np.abs(k1_new - k1)), np.max(np.abs(k2_new - k2)))
        k1, k2 = k1_new, k2_new
        if delta < 1e-13 * (1.0 + np.max(np.abs(k1))):
            break
    return y + h * (_G_B[0] * k1 + _G_B[1] * k2)


# ---------------------------------------------------------------------------
# closure detection
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ClosureReport:
    closed: bool
    period: float | None
    min_distance: float
    tolerance: float

    def to_dict(self) -> dict:
        return {
            "closed": self.closed,
            "period": self.period,
            "min_distance": self.min_distance,
            "tolerance": self.tolerance,
        }


def closure_detect(traj: Trajectory, tol: float) -> ClosureReport:
    """Search a trajectory for a return to its initial phase-space point.

    Uses the chart's raw Euclidean metric on (coords, momenta).  The
    earliest local distance minimum below ``tol`` (after an initial
    exclusion window of one percent of the horizon) sets the period; the
    minimum is refined by fitting a parabola to the squared distance.
    """
    phase = traj.phase_array()
    t = traj.times
    if len(t) < 5:
        raise HorizonError("trajectory too short for closure analysis")
    d2 = np.sum((phase - phase[0]) ** 2, axis=1)
    window = t[-1] / 100.0
    start = int(np.searchsorted(t, window))
    start = max(start, 2)
    best = None
    for i in range(start, len(t) - 1):
        if d2[i] <= d2[i - 1] and d2[i] <= d2[i + 1]:
            t_star, d2_star = _refine_minimum(t, d2, i)
            d_star = math.sqrt(max(d2_star, 0.0))
            if d_star < tol:
                return ClosureReport(True, float(t_star), float(d_star), tol)
            if best is None or d_star < best[1]:
                best = (t_star, d_star)
    if best is None:
        raise HorizonError("no candidate return within the horizon")
    return ClosureReport(False, None, float(best[1]), tol)


def _refine_minimum(t, d2, i):
    """Continuous-time minimum of d^2 near sample i.

    A local cubic fit removes the odd term that a plain three-point
    parabola cannot represent (the squared distance to a transversally
    re-approached point grows as c2*tau^2 + c3*tau^3 + ...).
    """
    lo = max(i - 3, 0)
    hi = min(i + 4, len(t))
    ts = t[lo:hi] - t[i]
    fs = d2[lo:hi]
    if len(ts) < 4:
        return t[i], d2[i]
    coeffs = np.polyfit(ts, fs, 3)
    dcoeffs = np.polyder(coeffs)
    roots = np.roots(dcoeffs)
    t_lo, t_hi = ts[0], ts[-1]
    cands = [r.real for r in roots if abs(r.imag) < 1e-12 and t_lo <= r.real <= t_hi]
    if not cands:
        return t[i], d2[i]
    vals = [float(np.polyval(coeffs, c)) for c in cands]
    j = int(np.argmin(vals))
    return t[i] + cands[j], vals[j]


# ---------------------------------------------------------------------------
# flat-limit trajectory sweeps
# ---------------------------------------------------------------------------

@dataclass
class SweepResult:
    kappas: list[float]
    deviations: list[float]
    trajectories: list[Trajectory]

    def table(self) -> list[dict]:
        return [
            {"kappa": k, "sup_deviation": d}
            for k, d in zip(self.kappas, self.deviations)
        ]

    @property
    def monotone(self) -> bool:
        """Deviations shrink as |kappa| shrinks."""
        pairs = sorted(zip(self.kappas, self.deviations), key=lambda kd: abs(kd[0]))
        devs = [d for _, d in pairs]
        return all(devs[i] <= devs[i + 1] + 1e-15 for i in range(len(devs) - 1))


def flat_limit_sweep(
    spec: SystemSpec,
    state0: State,
    kappas,
    t_end: float,
    config: IntegratorConfig | None = None,
    n_samples: int = 200,
) -> SweepResult:
    """Integrate the same initial coordinates for each curvature and compare
    against the flat run on a shared time grid."""
    t_eval = np.linspace(0.0, t_end, n_samples + 1)[1:]
    flat = _sweep_run(spec, state0, 0.0, t_end, config, t_eval)
    flat_samples = _sample_phase(flat, t_eval)
    kappas = list(kappas)
    deviations = []
    trajectories = []
    for k in kappas:
        if k == 0.0:
            deviations.append(0.0)
            trajectories.append(flat)
            continue
        traj = _sweep_run(spec, state0, k, t_end, config, t_eval)
        samples = _sample_phase(traj, t_eval)
        deviations.append(float(np.max(np.abs(samples - flat_samples))))
        trajectories.append(traj)
    return SweepResult(kappas, deviations, trajectories)


def _sweep_run(spec, state0, kappa, t_end, config, t_eval):
    spec_k = replace(spec, kappa=kappa)
    state_k = type(state0)(kappa, *state0.coords, *state0.momenta)
    traj = integrate(spec_k, state_k, t_end, config, (), t_eval)
    if traj.boundary_event is not None:
        raise DomainError(
            f"sweep run at kappa={kappa} hit a boundary: {traj.boundary_event.reason}"
        )
    return traj


def _sample_phase(traj, t_eval):
    phase = traj.phase_array()
    idx = np.searchsorted(traj.times, np.asarray(t_eval) - 1e-12)
    return phase[idx]
