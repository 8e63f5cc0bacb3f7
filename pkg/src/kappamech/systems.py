"""Hamiltonian catalog: kinetic energies per chart and every potential family.

A ``SystemSpec`` names a family and its physical parameters; ``potential``
and ``hamiltonian`` evaluate it on a chart state.  Each family has a native
chart (where its formula is simplest and least singular); evaluation in a
different chart converts the state first.  All formulas accept dual-number
phases, so exact phase-space gradients come for free.

Families
--------
free                        geodesic motion, V = 0
aniso_oscillator            anisotropic oscillator, frequencies gamma*omega : omega,
                            curved potential built from curvature tangents
aniso_oscillator_rosochatius  the same plus two inverse-square barrier terms
higgs                       isotropic oscillator, potential delta * q**2 in
                            projective coordinates (delta = omega**2/2 by default)
curved_21_typeII            the 2:1 oscillator with the roles of the two base
                            geodesics exchanged (x1 <-> x2 at the ambient level)
rdg_flat / rdg_curved / rdg_superposed
                            homogeneous polynomial potential series V_n, its
                            curvature deformation V_{k,n}, and superpositions
henon_heiles_kdv_flat       integrable cubic perturbation of the 1:2 oscillator
                            (independent quadratic couplings Omega1, Omega2)
henon_heiles_kdv_curved     its constant-curvature counterpart (Omega2 = 4*Omega1)
henon_heiles_sk_flat        cubic perturbation separable in rotated coordinates
                            (no integral shipped with the catalog)
henon_heiles_kk_flat        cubic perturbation with a quartic integral
                            (no integral shipped with the catalog)
kepler_coulomb              k / |q| in projective coordinates, any curvature
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

from . import charts, dual, ktrig
from .charts import State
from .dual import Dual, value
from .errors import PoleError

FAMILIES = (
    "free",
    "aniso_oscillator",
    "aniso_oscillator_rosochatius",
    "higgs",
    "curved_21_typeII",
    "rdg_flat",
    "rdg_curved",
    "rdg_superposed",
    "henon_heiles_kdv_flat",
    "henon_heiles_kdv_curved",
    "henon_heiles_sk_flat",
    "henon_heiles_kk_flat",
    "kepler_coulomb",
)

_FLAT_ONLY = frozenset(
    {"rdg_flat", "henon_heiles_kdv_flat", "henon_heiles_sk_flat", "henon_heiles_kk_flat"}
)

# fields serialized per family (everything else is ignored by that family)
PARAMS_BY_FAMILY = {
    "free": (),
    "aniso_oscillator": ("omega", "gamma"),
    "aniso_oscillator_rosochatius": ("omega", "gamma", "lambda1", "lambda2"),
    "higgs": ("delta", "omega"),
    "curved_21_typeII": ("omega",),
    "rdg_flat": ("coefficients",),
    "rdg_curved": ("coefficients",),
    "rdg_superposed": ("coefficients",),
    "henon_heiles_kdv_flat": ("Omega", "Omega2", "alpha"),
    "henon_heiles_kdv_curved": ("Omega", "alpha"),
    "henon_heiles_sk_flat": ("Omega", "alpha"),
    "henon_heiles_kk_flat": ("Omega", "alpha"),
    "kepler_coulomb": ("k_coulomb",),
}

NATIVE_CHART = {
    "free": "beltrami",
    "aniso_oscillator": "parallel",
    "aniso_oscillator_rosochatius": "parallel",
    "higgs": "beltrami",
    "curved_21_typeII": "beltrami",
    "rdg_flat": "beltrami",
    "rdg_curved": "beltrami",
    "rdg_superposed": "beltrami",
    "henon_heiles_kdv_flat": "beltrami",
    "henon_heiles_kdv_curved": "beltrami",
    "henon_heiles_sk_flat": "beltrami",
    "henon_heiles_kk_flat": "beltrami",
    "kepler_coulomb": "beltrami",
}

_POLE_TOL = 1e-12


@dataclass(frozen=True)
class SystemSpec:
    """A Hamiltonian family plus the parameters it reads.

    ``gamma`` is kept as an exactly reduced Fraction when rational; a plain
    float is accepted too, but then the system is treated as integrable-only
    (no higher-order integrals are available for it).
    """

    family: str
    kappa: float = 0.0
    omega: float = 1.0
    gamma: Fraction | float = Fraction(1)
    Omega: float = 0.0
    Omega2: float | None = None
    alpha: float = 0.0
    lambda1: float = 0.0
    lambda2: float = 0.0
    coefficients: tuple = ()
    delta: float | None = None
    k_coulomb: float = -1.0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.family in _FLAT_ONLY and self.kappa != 0.0:
            raise ValueError(f"family {self.family!r} is defined at kappa = 0 only")
        g = self.gamma
        if isinstance(g, int):
            g = Fraction(g)
        if isinstance(g, Fraction) and (g.numerator < 1 or g.denominator < 1):
            raise ValueError(f"gamma must be positive, got {g}")
        if isinstance(g, float) and not g > 0.0:
            raise ValueError(f"gamma must be positive, got {g}")
        object.__setattr__(self, "gamma", g)
        object.__setattr__(self, "coefficients", tuple(float(a) for a in self.coefficients))

    # -- derived parameters ------------------------------------------------

    @property
    def gamma_value(self) -> float:
        return float(self.gamma)

    @property
    def gamma_mn(self) -> tuple[int, int]:
        """Reduced (m, n) with gamma = m/n; raises for irrational gamma."""
        if not isinstance(self.gamma, Fraction):
            raise ValueError(
                f"gamma = {self.gamma!r} was given as a decimal; exact m/n is required here"
            )
        return self.gamma.numerator, self.gamma.denominator

    @property
    def is_rational_gamma(self) -> bool:
        return isinstance(self.gamma, Fraction)

    @property
    def delta_value(self) -> float:
        return 0.5 * self.omega**2 if self.delta is None else self.delta

    @property
    def Omega2_value(self) -> float:
        return 4.0 * self.Omega if self.Omega2 is None else self.Omega2

    @property
    def native_chart(self) -> str:
        return NATIVE_CHART[self.family]

    # -- serialization -------------------------------------------------------

    def to_dict(self) -> dict:
        params = {}
        for name in PARAMS_BY_FAMILY[self.family]:
            v = getattr(self, name)
            if name == "gamma":
                v = f"{v.numerator}/{v.denominator}" if isinstance(v, Fraction) else v
            elif name == "coefficients":
                v = list(v)
            if v is not None:
                params[name] = v
        return {"family": self.family, "kappa": self.kappa, "params": params}

    @classmethod
    def from_dict(cls, data: dict) -> "SystemSpec":
        params = dict(data.get("params", {}))
        if "gamma" in params:
            params["gamma"] = parse_gamma(params["gamma"])
        if "coefficients" in params:
            params["coefficients"] = tuple(params["coefficients"])
        return cls(family=data["family"], kappa=float(data.get("kappa", 0.0)), **params)


def parse_gamma(raw) -> Fraction | float:
    """Parse a frequency ratio: 'm/n' text or an integer reduce exactly,
    a decimal stays a float (integrable-only path)."""
    if isinstance(raw, Fraction):
        return raw
    if isinstance(raw, int):
        return Fraction(raw)
    if isinstance(raw, str):
        return Fraction(raw)
    if isinstance(raw, float):
        return raw
    raise ValueError(f"cannot parse gamma from {raw!r}")


# ---------------------------------------------------------------------------
# kinetic energy
# ---------------------------------------------------------------------------

def kinetic_energy(state: State):
    """Free Hamiltonian in the state's own chart; chart-invariant by construction."""
    k = state.kappa
    if isinstance(state, charts.BeltramiState):
        q1, q2, p1, p2 = state.q1, state.q2, state.p1, state.p2
        u = 1.0 + k * (q1 * q1 + q2 * q2)
        qp = q1 * p1 + q2 * p2
        return 0.5 * u * (p1 * p1 + p2 * p2 + k * qp * qp)
    if isinstance(state, charts.ParallelState):
        cy = ktrig.ck(k, state.y)
        if abs(value(cy)) < _POLE_TOL:
            raise PoleError("parallel-chart kinetic energy pole: ck(kappa, y) = 0")
        return 0.5 * ((state.px / cy) ** 2 + state.py**2)
    if isinstance(state, charts.PolarState):
        sr = ktrig.sk(k, state.r)
        if abs(value(sr)) < _POLE_TOL:
            raise PoleError("polar-chart kinetic energy pole: sk(kappa, r) = 0")
        return 0.5 * (state.pr**2 + (state.pphi / sr) ** 2)
    if isinstance(state, charts.AmbientState):
        return 0.5 * (k * state.pi0**2 + state.pi1**2 + state.pi2**2)
    raise TypeError(f"not a chart state: {state!r}")


# ---------------------------------------------------------------------------
# polynomial potential series and its curvature deformation
# ---------------------------------------------------------------------------

def rdg_flat_term(n: int, q1, q2):
    """Flat homogeneous polynomial potential of degree n (n = 0 gives 1)."""
    if n < 0:
        raise ValueError("potential degree must be >= 0")
    if n == 0:
        return 1.0
    s = 0.0
    for i in range(n // 2 + 1):
        s = s + (2 ** (n - 2 * i)) * comb(n - i, i) * q1 ** (2 * i) * q2 ** (n - 2 * i)
    return s


def _rdg_curved_beltrami(n: int, kappa: float, q1, q2):
    u = 1.0 + kappa * (q1 * q1 + q2 * q2)
    d = 1.0 - kappa * q2 * q2
    if abs(value(d)) < _POLE_TOL or abs(value(u)) < _POLE_TOL:
        raise PoleError("curved polynomial potential pole in projective coordinates")
    if n == 0:
        # the zeroth term of the curved series is a genuine rational function
        return (1.0 + kappa * q2 * q2) * u / (d * d)
    a = q1 * q1 / u
    b = q2 / u
    t = kappa * q1 * q1 / u
    s = 0.0
    for i in range(n // 2 + 1):
        term = (2 ** (n - 2 * i)) * comb(n - i, i) * a**i * b ** (n - 2 * i)
        if i:
            term = term * (1.0 - (i / (n - i)) * t)
        s = s + term
    return (u / d) ** 2 * s


def _rdg_curved_ambient(n: int, kappa: float, x0, x1, x2):
    d = x0 * x0 - kappa * x2 * x2
    if abs(value(d)) < _POLE_TOL:
        raise PoleError("curved polynomial potential pole: x0^2 - kappa*x2^2 = 0")
    if n == 0:
        return (1.0 - kappa * x1 * x1) / (d * d)
    s = 0.0
    for i in range(n // 2 + 1):
        term = (2 ** (n - 2 * i)) * comb(n - i, i) * x1 ** (2 * i) * (x0 * x2) ** (n - 2 * i)
        if i:
            term = term * (1.0 - (i / (n - i)) * kappa * x1 * x1)
        s = s + term
    return s / (d * d)


def rdg_curved_potential(n: int, kappa: float, state: State):
    """Curvature-deformed polynomial potential of degree n at a state.

    Native in the Beltrami and ambient charts; reduces to the flat
    polynomial as kappa -> 0 (for n = 0 the deformed term is a rational
    function, not the constant 1).
    """
    if n < 0:
        raise ValueError("potential degree must be >= 0")
    if isinstance(state, charts.BeltramiState):
        return _rdg_curved_beltrami(n, kappa, state.q1, state.q2)
    if isinstance(state, charts.AmbientState):
        return _rdg_curved_ambient(n, kappa, state.x0, state.x1, state.x2)
    return rdg_curved_potential(n, kappa, charts.convert(state, "beltrami"))


def _rdg_series(spec: SystemSpec, state, flat: bool):
    total = 0.0
    for idx, alpha_n in enumerate(spec.coefficients):
        if alpha_n == 0.0:
            continue
        n = idx + 1
        if flat:
            total = total + alpha_n * rdg_flat_term(n, *state.coords)
        elif isinstance(state, charts.AmbientState):
            total = total + alpha_n * _rdg_curved_ambient(n, spec.kappa, *state.coords)
        else:
            total = total + alpha_n * _rdg_curved_beltrami(n, spec.kappa, *state.coords)
    return total


# ---------------------------------------------------------------------------
# family potentials
# ---------------------------------------------------------------------------

def _pot_free(spec, state):
    return 0.0


def _pot_aniso_parallel(spec, state):
    g = spec.gamma_value
    w2 = spec.omega**2
    tgx = ktrig.tk(spec.kappa, g * state.x)
    ty = ktrig.tk(spec.kappa, state.y)
    cy = ktrig.ck(spec.kappa, state.y)
    return 0.5 * w2 * (tgx * tgx / (cy * cy) + ty * ty)


def _pot_rosochatius_parallel(spec, state):
    v = _pot_aniso_parallel(spec, state)
    k = spec.kappa
    if spec.lambda1 != 0.0:
        sx = ktrig.sk(k, state.x)
        cy = ktrig.ck(k, state.y)
        if abs(value(sx)) < _POLE_TOL:
            raise PoleError("barrier term pole: sk(kappa, x) = 0")
        v = v + spec.lambda1 / (sx * sx * cy * cy)
    if spec.lambda2 != 0.0:
        sy = ktrig.sk(k, state.y)
        if abs(value(sy)) < _POLE_TOL:
            raise PoleError("barrier term pole: sk(kappa, y) = 0")
        v = v + spec.lambda2 / (sy * sy)
    return v


def _pot_higgs_beltrami(spec, state):
    return spec.delta_value * (state.q1 * state.q1 + state.q2 * state.q2)


def _pot_higgs_parallel(spec, state):
    tx = ktrig.tk(spec.kappa, state.x)
    ty = ktrig.tk(spec.kappa, state.y)
    cy = ktrig.ck(spec.kappa, state.y)
    return spec.delta_value * (tx * tx / (cy * cy) + ty * ty)


def _pot_higgs_polar(spec, state):
    tr = ktrig.tk(spec.kappa, state.r)
    return spec.delta_value * tr * tr


def _pot_higgs_ambient(spec, state):
    r2 = state.x1 * state.x1 + state.x2 * state.x2
    d = 1.0 - spec.kappa * r2
    if abs(value(d)) < _POLE_TOL:
        raise PoleError("isotropic oscillator pole at the equator")
    return spec.delta_value * r2 / d


def _pot_typeII_beltrami(spec, state):
    return 0.5 * spec.omega**2 * _rdg_curved_beltrami(2, spec.kappa, state.q1, state.q2)


def _pot_typeII_ambient(spec, state):
    return 0.5 * spec.omega**2 * _rdg_curved_ambient(2, spec.kappa, *state.coords)


def _pot_rdg_flat(spec, state):
    return _rdg_series(spec, state, flat=True)


def _pot_rdg_curved(spec, state):
    return _rdg_series(spec, state, flat=False)


def _pot_kdv_flat(spec, state):
    q1, q2 = state.coords
    return (
        spec.Omega * q1 * q1
        + spec.Omega2_value * q2 * q2
        + spec.alpha * (q1 * q1 * q2 + 2.0 * q2**3)
    )


def _pot_kdv_curved_beltrami(spec, state):
    k = spec.kappa
    return spec.Omega * _rdg_curved_beltrami(2, k, state.q1, state.q2) + (
        spec.alpha / 4.0
    ) * _rdg_curved_beltrami(3, k, state.q1, state.q2)


def _pot_kdv_curved_ambient(spec, state):
    k = spec.kappa
    return spec.Omega * _rdg_curved_ambient(2, k, *state.coords) + (
        spec.alpha / 4.0
    ) * _rdg_curved_ambient(3, k, *state.coords)


def _pot_sk_flat(spec, state):
    q1, q2 = state.coords
    return spec.Omega * (q1 * q1 + q2 * q2) + spec.alpha * (q1 * q1 * q2 + q2**3 / 3.0)


def _pot_kk_flat(spec, state):
    q1, q2 = state.coords
    return spec.Omega * (q1 * q1 + 16.0 * q2 * q2) + spec.alpha * (
        q1 * q1 * q2 + (16.0 / 3.0) * q2**3
    )


def _pot_kepler(spec, state):
    q2 = state.q1 * state.q1 + state.q2 * state.q2
    if abs(value(q2)) < _POLE_TOL**2:
        raise PoleError("Kepler-Coulomb pole at the origin")
    return spec.k_coulomb / dual.sqrt(q2)


_POTENTIALS = {
    "free": {"beltrami": _pot_free, "parallel": _pot_free, "polar": _pot_free, "ambient": _pot_free},
    "aniso_oscillator": {"parallel": _pot_aniso_parallel},
    "aniso_oscillator_rosochatius": {"parallel": _pot_rosochatius_parallel},
    "higgs": {
        "beltrami": _pot_higgs_beltrami,
        "polar": _pot_higgs_polar,
        "ambient": _pot_higgs_ambient,
        "parallel": _pot_higgs_parallel,
    },
    "curved_21_typeII": {"beltrami": _pot_typeII_beltrami, "ambient": _pot_typeII_ambient},
    "rdg_flat": {"beltrami": _pot_rdg_flat},
    "rdg_curved": {"beltrami": _pot_rdg_curved, "ambient": _pot_rdg_curved},
    "rdg_superposed": {"beltrami": _pot_rdg_curved, "ambient": _pot_rdg_curved},
    "henon_heiles_kdv_flat": {"beltrami": _pot_kdv_flat},
    "henon_heiles_kdv_curved": {
        "beltrami": _pot_kdv_curved_beltrami,
        "ambient": _pot_kdv_curved_ambient,
    },
    "henon_heiles_sk_flat": {"beltrami": _pot_sk_flat},
    "henon_heiles_kk_flat": {"beltrami": _pot_kk_flat},
    "kepler_coulomb": {"beltrami": _pot_kepler},
}


def evaluation_charts(family: str) -> tuple[str, ...]:
    """Charts in which the family's potential has a direct formula."""
    return tuple(_POTENTIALS[family])


def potential(spec: SystemSpec, state: State):
    """Potential of the family at the state, converting charts when needed."""
    if state.kappa != spec.kappa:
        raise ValueError(
            f"state kappa {state.kappa!r} does not match system kappa {spec.kappa!r}"
        )
    table = _POTENTIALS[spec.family]
    fn = table.get(state.chart)
    if fn is None:
        state = charts.convert(state, spec.native_chart)
        fn = table[spec.native_chart]
    return fn(spec, state)


def hamiltonian(spec: SystemSpec, state: State):
    """Total energy T + V."""
    if spec.family == "free":
        return kinetic_energy(state)
    return kinetic_energy(state) + potential(spec, state)


def hamiltonian_gradient(spec: SystemSpec, state: State) -> np.ndarray:
    """Exact gradient (dH/dcoords, dH/dmomenta) in the state's own chart."""
    return phase_gradient(lambda s: hamiltonian(spec, s), state)


def phase_gradient(fn, state: State) -> np.ndarray:
    """Gradient of a scalar phase-space function via dual-number seeds."""
    c = list(state.coords)
    m = list(state.momenta)
    dim = len(c)
    out = np.empty(2 * dim)
    for i in range(dim):
        seeded = list(c)
        seeded[i] = Dual(c[i], 1.0)
        out[i] = dual.derivative(fn(state.replace_phase(seeded, m)))
    for i in range(dim):
        seeded = list(m)
        seeded[i] = Dual(m[i], 1.0)
        out[dim + i] = dual.derivative(fn(state.replace_phase(c, seeded)))
    return out
