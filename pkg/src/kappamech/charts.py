"""Phase-space charts on the constant-curvature surface and maps between them.

Four charts cover the surface x0**2 + kappa*(x1**2 + x2**2) = 1:

* ``ambient``   -- embedding coordinates (x0, x1, x2) with conjugate momenta
  (pi0, pi1, pi2), constrained by the surface equation and by
  x0*pi0 + x1*pi1 + x2*pi2 = 0.
* ``parallel``  -- geodesic parallel lengths (x, y) along two orthogonal base
  geodesics, momenta (px, py).
* ``polar``     -- geodesic radius and angle (r, phi), momenta (pr, pphi).
* ``beltrami``  -- projective coordinates q_i = x_i/x0 (central projection
  onto the x0 = 1 plane), momenta (p1, p2).

Every conversion routes through the ambient chart, which is the single
source of truth.  The rotation/translation one-parameter subgroup matrices
and the quadratic Casimir of the isometry algebra live here as well.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import dual, ktrig
from .dual import is_plain, value
from .errors import CoverageError, DomainError

CHARTS = ("ambient", "parallel", "polar", "beltrami")

# constraint residuals up to this size are silently re-projected; larger ones raise
REPROJECT_TOLERANCE = 1e-8


@dataclass(frozen=True)
class AmbientState:
    kappa: float
    x0: float
    x1: float
    x2: float
    pi0: float
    pi1: float
    pi2: float

    chart = "ambient"

    @property
    def coords(self):
        return (self.x0, self.x1, self.x2)

    @property
    def momenta(self):
        return (self.pi0, self.pi1, self.pi2)

    def replace_phase(self, coords, momenta):
        return AmbientState(self.kappa, *coords, *momenta)


@dataclass(frozen=True)
class ParallelState:
    kappa: float
    x: float
    y: float
    px: float
    py: float

    chart = "parallel"

    @property
    def coords(self):
        return (self.x, self.y)

    @property
    def momenta(self):
        return (self.px, self.py)

    def replace_phase(self, coords, momenta):
        return ParallelState(self.kappa, *coords, *momenta)


@dataclass(frozen=True)
class PolarState:
    kappa: float
    r: float
    phi: float
    pr: float
    pphi: float

    chart = "polar"

    @property
    def coords(self):
        return (self.r, self.phi)

    @property
    def momenta(self):
        return (self.pr, self.pphi)

    def replace_phase(self, coords, momenta):
        return PolarState(self.kappa, *coords, *momenta)


@dataclass(frozen=True)
class BeltramiState:
    kappa: float
    q1: float
    q2: float
    p1: float
    p2: float

    chart = "beltrami"

    @property
    def coords(self):
        return (self.q1, self.q2)

    @property
    def momenta(self):
        return (self.p1, self.p2)

    def replace_phase(self, coords, momenta):
        return BeltramiState(self.kappa, *coords, *momenta)


State = AmbientState | ParallelState | PolarState | BeltramiState

_STATE_TYPES = {
    "ambient": AmbientState,
    "parallel": ParallelState,
    "polar": PolarState,
    "beltrami": BeltramiState,
}


# ---------------------------------------------------------------------------
# checked constructors
# ---------------------------------------------------------------------------

def ambient_state(kappa, x0, x1, x2, pi0, pi1, pi2) -> AmbientState:
    """Build an ambient state, re-projecting round-off-sized constraint drift.

    Residuals up to REPROJECT_TOLERANCE are normalized away (position onto
    the surface, momentum onto the tangency condition); anything larger is a
    DomainError.  Dual-valued phases skip the checks: off-surface evaluation
    by the literal formulas is exactly what differentiation needs.
    """
    if not is_plain(x0, x1, x2, pi0, pi1, pi2):
        return AmbientState(kappa, x0, x1, x2, pi0, pi1, pi2)
    c = x0 * x0 + kappa * (x1 * x1 + x2 * x2)
    if abs(c - 1.0) > REPROJECT_TOLERANCE:
        raise DomainError(f"ambient constraint violated: x0^2 + kappa*(x1^2+x2^2) = {c!r}")
    if c <= 0.0:
        raise DomainError("ambient position cannot be normalized (non-positive quadratic form)")
    if c != 1.0:
        s = 1.0 / math.sqrt(c)
        x0, x1, x2 = s * x0, s * x1, s * x2
    if kappa < 0.0 and x0 < 1.0:
        # bottom hyperboloid sheet or worse; the space is the x0 >= 1 sheet
        if x0 < 1.0 - REPROJECT_TOLERANCE:
            raise DomainError(f"hyperbolic ambient states need x0 >= 1, got x0 = {x0!r}")
        x0 = 1.0
    if kappa == 0.0 and abs(x0 - 1.0) > REPROJECT_TOLERANCE:
        raise DomainError(f"flat ambient states live on the x0 = 1 plane, got x0 = {x0!r}")
    t = x0 * pi0 + x1 * pi1 + x2 * pi2
    norm_p = abs(pi0) + abs(pi1) + abs(pi2)
    if abs(t) > REPROJECT_TOLERANCE * (1.0 + norm_p):
        raise DomainError(f"ambient tangency violated: x.pi = {t!r}")
    if t != 0.0:
        xx = x0 * x0 + x1 * x1 + x2 * x2
        s = t / xx
        pi0, pi1, pi2 = pi0 - s * x0, pi1 - s * x1, pi2 - s * x2
    return AmbientState(kappa, x0, x1, x2, pi0, pi1, pi2)


def parallel_state(kappa, x, y, px, py) -> ParallelState:
    if kappa > 0.0:
        rk = math.sqrt(kappa)
        if not (-math.pi / rk < x <= math.pi / rk):
            raise DomainError(f"parallel x = {x!r} outside (-pi/sqrt(kappa), pi/sqrt(kappa)]")
        if not (abs(y) < math.pi / (2.0 * rk)):
            raise DomainError(f"parallel y = {y!r} outside (-pi/(2 sqrt(kappa)), pi/(2 sqrt(kappa)))")
    return ParallelState(kappa, x, y, px, py)


def polar_state(kappa, r, phi, pr, pphi) -> PolarState:
    if not r > 0.0:
        raise DomainError(f"polar chart needs r > 0, got r = {r!r}")
    if kappa > 0.0 and not r < math.pi / math.sqrt(kappa):
        raise DomainError(f"polar r = {r!r} outside (0, pi/sqrt(kappa))")
    phi = phi % (2.0 * math.pi)
    return PolarState(kappa, r, phi, pr, pphi)


def beltrami_state(kappa, q1, q2, p1, p2) -> BeltramiState:
    if kappa < 0.0 and not q1 * q1 + q2 * q2 < 1.0 / abs(kappa):
        raise DomainError(f"beltrami point ({q1!r}, {q2!r}) outside the disk of radius 1/sqrt(|kappa|)")
    return BeltramiState(kappa, q1, q2, p1, p2)


def in_domain(state: State) -> bool:
    """True when the state satisfies its chart's domain (no exceptions)."""
    k = state.kappa
    if isinstance(state, ParallelState):
        if k <= 0.0:
            return True
        rk = math.sqrt(k)
        return -math.pi / rk < state.x <= math.pi / rk and abs(state.y) < math.pi / (2.0 * rk)
    if isinstance(state, PolarState):
        if state.r <= 0.0:
            return False
        return k <= 0.0 or state.r < math.pi / math.sqrt(k)
    if isinstance(state, BeltramiState):
        return k >= 0.0 or state.q1 ** 2 + state.q2 ** 2 < 1.0 / abs(k)
    if isinstance(state, AmbientState):
        c = state.x0 ** 2 + k * (state.x1 ** 2 + state.x2 ** 2)
        t = state.x0 * state.pi0 + state.x1 * state.pi1 + state.x2 * state.pi2
        np_ = abs(state.pi0) + abs(state.pi1) + abs(state.pi2)
        ok = abs(c - 1.0) <= REPROJECT_TOLERANCE and abs(t) <= REPROJECT_TOLERANCE * (1.0 + np_)
        if k < 0.0:
            ok = ok and state.x0 >= 1.0 - REPROJECT_TOLERANCE
        return ok
    raise TypeError(f"not a chart state: {state!r}")


# ---------------------------------------------------------------------------
# conversions (always through the ambient chart)
# ---------------------------------------------------------------------------

def to_ambient(state: State) -> AmbientState:
    """Exact map of positions and momenta into the ambient chart."""
    if isinstance(state, AmbientState):
        return state
    if not in_domain(state):
        raise DomainError(f"state outside its chart domain: {state!r}")
    k = state.kappa
    if isinstance(state, ParallelState):
        x, y, px, py = state.x, state.y, state.px, state.py
        cx, sx = ktrig.ck(k, x), ktrig.sk(k, x)
        cy, sy = ktrig.ck(k, y), ktrig.sk(k, y)
        pos = (cx * cy, sx * cy, sy)
        mom = (
            -(sx / cy) * px - cx * sy * py,
            (cx / cy) * px - k * sx * sy * py,
            cy * py,
        )
    elif isinstance(state, PolarState):
        r, phi, pr, pphi = state.r, state.phi, state.pr, state.pphi
        cr, sr = ktrig.ck(k, r), ktrig.sk(k, r)
        cp, sp = dual.cos(phi), dual.sin(phi)
        pos = (cr, sr * cp, sr * sp)
        mom = (
            -sr * pr,
            cr * cp * pr - (sp / sr) * pphi,
            cr * sp * pr + (cp / sr) * pphi,
        )
    else:
        q1, q2, p1, p2 = state.q1, state.q2, state.p1, state.p2
        u = 1.0 + k * (q1 * q1 + q2 * q2)
        ru = dual.sqrt(u)
        qp = q1 * p1 + q2 * p2
        pos = (1.0 / ru, q1 / ru, q2 / ru)
        mom = (-ru * qp, ru * p1, ru * p2)
    return ambient_state(k, *pos, *mom)


def from_ambient(state: AmbientState, target: str) -> State:
    """Invert the ambient parametrization for the requested chart.

    Raises CoverageError when the point is not covered (Beltrami needs
    x0 > 0, the polar chart excludes the geodesic origin and antipode).
    """
    if target not in CHARTS:
        raise ValueError(f"unknown chart {target!r}")
    if target == "ambient":
        return state
    k = state.kappa
    x0, x1, x2 = state.x0, state.x1, state.x2
    pi0, pi1, pi2 = state.pi0, state.pi1, state.pi2

    plain = is_plain(x0, x1, x2, pi0, pi1, pi2)

    if target == "beltrami":
        if not x0 > 0.0:
            raise CoverageError("Beltrami projection is defined on the x0 > 0 hemisphere only")
        q1, q2 = x1 / x0, x2 / x0
        if not plain:
            return BeltramiState(k, q1, q2, x0 * pi1, x0 * pi2)
        try:
            return beltrami_state(k, q1, q2, x0 * pi1, x0 * pi2)
        except DomainError as exc:  # pragma: no cover - constraint keeps q inside the disk
            raise CoverageError(str(exc)) from exc

    if target == "parallel":
        if k > 0.0:
            rk = math.sqrt(k)
            if value(x0) == 0.0 and value(x1) == 0.0:
                raise CoverageError("point on the y-boundary of the geodesic parallel chart")
            x = dual.atan2(rk * x1, x0) / rk
            arg = max(-1.0, min(1.0, rk * x2))
            y = dual.asin(arg) / rk
        elif k < 0.0:
            rk = math.sqrt(-k)
            x = dual.atanh(rk * x1 / x0) / rk
            y = dual.asinh(rk * x2) / rk
        else:
            x, y = x1, x2
        cy = ktrig.ck(k, y)
        if abs(value(cy)) < 1e-12:
            raise CoverageError("point on the y-boundary of the geodesic parallel chart")
        px = x0 * pi1 - k * x1 * pi0
        py = pi2 / cy
        if not plain:
            return ParallelState(k, x, y, px, py)
        try:
            return parallel_state(k, x, y, px, py)
        except DomainError as exc:
            raise CoverageError(str(exc)) from exc

    # polar
    if value(x1) == 0.0 and value(x2) == 0.0:
        raise CoverageError("polar chart is undefined at the geodesic origin and antipode")
    if k > 0.0:
        r = dual.acos(max(-1.0, min(1.0, x0))) / math.sqrt(k)
    elif k < 0.0:
        r = dual.acosh(max(1.0, x0)) / math.sqrt(-k)
    else:
        r = dual.sqrt(x1 * x1 + x2 * x2)
    phi = dual.atan2(x2, x1)
    pphi = x1 * pi2 - x2 * pi1
    sr = ktrig.sk(k, r)
    pr = -pi0 / sr
    if not plain:
        return PolarState(k, r, phi, pr, pphi)
    try:
        return polar_state(k, r, phi, pr, pphi)
    except DomainError as exc:
        raise CoverageError(str(exc)) from exc


def convert(state: State, target: str) -> State:
    """Convert a state between charts; identity when target equals source."""
    if target not in CHARTS:
        raise ValueError(f"unknown chart {target!r}")
    if state.chart == target:
        return state
    return from_ambient(to_ambient(state), target)


# ---------------------------------------------------------------------------
# isometry generators, Casimir
# ---------------------------------------------------------------------------

def lie_generators(state: State):
    """Values (J01, J02, J12) of the three isometry generators at a state.

    Chart-native formulas; the triple is chart-independent for the same
    physical state.  Dual-safe in the phase-space variables.
    """
    k = state.kappa
    if isinstance(state, AmbientState):
        x0, x1, x2 = state.coords
        pi0, pi1, pi2 = state.momenta
        return (
            x0 * pi1 - k * x1 * pi0,
            x0 * pi2 - k * x2 * pi0,
            x1 * pi2 - x2 * pi1,
        )
    if isinstance(state, BeltramiState):
        q1, q2, p1, p2 = state.q1, state.q2, state.p1, state.p2
        qp = q1 * p1 + q2 * p2
        return (p1 + k * qp * q1, p2 + k * qp * q2, q1 * p2 - q2 * p1)
    if isinstance(state, ParallelState):
        x, y, px, py = state.x, state.y, state.px, state.py
        cx, sx = ktrig.ck(k, x), ktrig.sk(k, x)
        ty = ktrig.tk(k, y)
        return (
            px,
            cx * py + k * sx * ty * px,
            sx * py - cx * ty * px,
        )
    if isinstance(state, PolarState):
        r, phi, pr, pphi = state.r, state.phi, state.pr, state.pphi
        cp, sp = dual.cos(phi), dual.sin(phi)
        tr = ktrig.tk(k, r)
        return (
            cp * pr - (sp / tr) * pphi,
            sp * pr + (cp / tr) * pphi,
            pphi,
        )
    raise TypeError(f"not a chart state: {state!r}")


def casimir(state: State):
    """Quadratic invariant J01^2 + J02^2 + kappa*J12^2 (twice the kinetic energy)."""
    j01, j02, j12 = lie_generators(state)
    return j01 * j01 + j02 * j02 + state.kappa * j12 * j12


# ---------------------------------------------------------------------------
# matrix realization of the isometry group
# ---------------------------------------------------------------------------

GENERATORS = ("J01", "J02", "J12")


def generator_matrix(generator: str, kappa: float) -> np.ndarray:
    """3x3 representation matrix of one isometry generator."""
    if generator == "J01":
        return np.array([[0.0, -kappa, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]])
    if generator == "J02":
        return np.array([[0.0, 0.0, -kappa], [0.0, 0.0, 0.0], [1.0, 0.0, 0.0]])
    if generator == "J12":
        return np.array([[0.0, 0.0, 0.0], [0.0, 0.0, -1.0], [0.0, 1.0, 0.0]])
    raise ValueError(f"unknown generator {generator!r}")


def subgroup_matrix(generator: str, angle: float, kappa: float) -> np.ndarray:
    """One-parameter subgroup exp(angle * generator) in the 3x3 representation.

    Every returned matrix M is an isometry of the bilinear form
    diag(1, kappa, kappa): M.T @ I_kappa @ M = I_kappa.
    """
    c, s = ktrig.ck(kappa, angle), ktrig.sk(kappa, angle)
    if generator == "J01":
        return np.array([[c, -kappa * s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
    if generator == "J02":
        return np.array([[c, 0.0, -kappa * s], [0.0, 1.0, 0.0], [s, 0.0, c]])
    if generator == "J12":
        cg, sg = math.cos(angle), math.sin(angle)
        return np.array([[1.0, 0.0, 0.0], [0.0, cg, -sg], [0.0, sg, cg]])
    raise ValueError(f"unknown generator {generator!r}")


def bilinear_form(kappa: float) -> np.ndarray:
    return np.diag([1.0, kappa, kappa])


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def state_to_dict(state: State) -> dict:
    return {
        "chart": state.chart,
        "kappa": state.kappa,
        "coords": [float(value(c)) for c in state.coords],
        "momenta": [float(value(m)) for m in state.momenta],
    }


def state_from_dict(data: dict) -> State:
    chart = data["chart"]
    if chart not in CHARTS:
        raise ValueError(f"unknown chart {chart!r}")
    kappa = float(data["kappa"])
    coords = [float(v) for v in data["coords"]]
    momenta = [float(v) for v in data["momenta"]]
    return make_state(chart, kappa, coords, momenta)


def make_state(chart: str, kappa: float, coords, momenta) -> State:
    """Checked construction from coordinate/momentum sequences."""
    ndim = 3 if chart == "ambient" else 2
    if len(coords) != ndim or len(momenta) != ndim:
        raise ValueError(f"chart {chart!r} needs {ndim} coordinates and momenta")
    factory = {
        "ambient": ambient_state,
        "parallel": parallel_state,
        "polar": polar_state,
        "beltrami": beltrami_state,
    }[chart]
    return factory(kappa, *coords, *momenta)
