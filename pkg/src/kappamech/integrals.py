"""Constants of motion for the catalog systems.

The oscillator families factorize through complex ladder/shift functions
whose powers build the higher-order integrals:

    B(+/-)  one-dimensional ladder functions (curved versions carry the
            motion constant E = sqrt(2*kappa*H_xi) and curvature trig)
    A(+/-)  shift functions for the transverse degree of freedom
    X(+/-) = B^n A^m for a frequency ratio gamma = m/n, from which the real
            integrals X, Y are extracted (the split depends on the parity
            of m + n in the curved case)

The polynomial-series and Henon-Heiles families carry quadratic integrals
built from the isometry generators:

    L = J01*J12 + q1^2/(1+kappa*q^2) * sum_n alpha_n V_{kappa,n-1}

Everything here is dual-safe, so Poisson brackets of any integral can be
formed exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import charts, dual, ktrig, systems
from .charts import State
from .dual import cimag, creal, value
from .errors import NegativeRadicandError, ZeroEnergyConstantError
from .systems import SystemSpec

INTEGRAL_NAMES = (
    "H_xi",
    "E_kappa",
    "B_plus",
    "B_minus",
    "A_plus",
    "A_minus",
    "X_complex",
    "X_real",
    "Y_real",
    "J_angular",
    "L_rdg",
    "L_superposed",
    "I_hh_kdv",
)

# real-valued names that make sense in a conservation log
CONSERVED_NAMES = (
    "H_xi",
    "E_kappa",
    "X_real",
    "Y_real",
    "J_angular",
    "L_rdg",
    "L_superposed",
    "I_hh_kdv",
)

_LADDER_FAMILIES = frozenset({"aniso_oscillator", "higgs"})
_H_XI_FAMILIES = _LADDER_FAMILIES | {"aniso_oscillator_rosochatius"}
_RDG_FAMILIES = frozenset({"rdg_flat", "rdg_curved", "rdg_superposed"})
_KDV_FAMILIES = frozenset({"henon_heiles_kdv_flat", "henon_heiles_kdv_curved"})

_MAX_POWER = 12


@dataclass(frozen=True)
class IntegralSpec:
    """A named constant of motion bound to a system."""

    name: str
    system: SystemSpec

    def __post_init__(self):
        if self.name not in INTEGRAL_NAMES:
            raise ValueError(f"unknown integral {self.name!r}")
        fam = self.system.family
        if self.name == "H_xi":
            ok = fam in _H_XI_FAMILIES
        elif self.name in ("E_kappa", "B_plus", "B_minus", "A_plus", "A_minus"):
            ok = fam in _LADDER_FAMILIES
        elif self.name in ("X_complex", "X_real", "Y_real"):
            ok = fam in _LADDER_FAMILIES and self.system.is_rational_gamma
        elif self.name == "J_angular":
            ok = fam in ("free", "higgs", "kepler_coulomb") or (
                fam == "aniso_oscillator" and self.system.gamma_value == 1.0
            )
        elif self.name in ("L_rdg", "L_superposed"):
            ok = fam in _RDG_FAMILIES
        else:  # I_hh_kdv
            ok = fam in _KDV_FAMILIES
            if ok and fam == "henon_heiles_kdv_flat":
                ok = self.system.Omega2_value == 4.0 * self.system.Omega
        if not ok:
            raise ValueError(f"integral {self.name!r} is not available for family {fam!r}")

    def __call__(self, state: State):
        return evaluate(self, state)

    def to_dict(self) -> dict:
        return {"name": self.name, "system": self.system.to_dict()}

    @classmethod
    def from_dict(cls, data: dict) -> "IntegralSpec":
        return cls(name=data["name"], system=SystemSpec.from_dict(data["system"]))


def known_integrals(spec: SystemSpec) -> list[str]:
    """Conserved-integral names available for a system."""
    names = []
    for name in CONSERVED_NAMES:
        try:
            IntegralSpec(name, spec)
        except ValueError:
            continue
        names.append(name)
    return names


# ---------------------------------------------------------------------------
# oscillator sub-Hamiltonians and factorization functions
# ---------------------------------------------------------------------------

def _osc_parameters(system: SystemSpec):
    """(omega, gamma) seen by the factorization machinery.

    The isotropic projective family is the gamma = 1 oscillator with
    omega = sqrt(2*delta).
    """
    if system.family == "higgs":
        return (2.0 * system.delta_value) ** 0.5, 1.0
    return system.omega, system.gamma_value


def _as_parallel(state: State) -> charts.ParallelState:
    if isinstance(state, charts.ParallelState):
        return state
    return charts.convert(state, "parallel")


def h_xi(system: SystemSpec, state: State):
    """1D sub-Hamiltonian along the stretched coordinate xi = gamma*x.

    Flat: p_xi^2/2 + (omega^2/2gamma^2) xi^2.  Curved: the trig-well form
    p_xi^2/2 + omega^2/(2 kappa gamma^2 ck(xi)^2).  For the barrier-extended
    oscillator the lambda1 term joins the same conserved combination.
    """
    st = _as_parallel(state)
    k = system.kappa
    w, g = _osc_parameters(system)
    xi = g * st.x
    pxi = st.px / g
    if k == 0.0:
        h = 0.5 * pxi * pxi + (w * w / (2.0 * g * g)) * xi * xi
    else:
        cxi = ktrig.ck(k, xi)
        h = 0.5 * pxi * pxi + w * w / (2.0 * k * g * g * cxi * cxi)
    if system.family == "aniso_oscillator_rosochatius" and system.lambda1 != 0.0:
        sx = ktrig.sk(k, st.x)
        h = h + system.lambda1 / (g * g * sx * sx)
    return h


def e_kappa(system: SystemSpec, state: State):
    """Motion constant sqrt(2*kappa*H_xi); equals omega/gamma at kappa = 0."""
    w, g = _osc_parameters(system)
    if system.kappa == 0.0:
        return w / g
    rad = 2.0 * system.kappa * h_xi(system, state)
    if value(rad) < 0.0:
        raise NegativeRadicandError(
            f"2*kappa*H_xi = {value(rad):.6g} < 0: no real motion constant here"
        )
    return dual.sqrt(rad)


def ladder(system: SystemSpec, state: State, sign: int):
    """Ladder function B(sign) of the stretched 1D oscillator."""
    st = _as_parallel(state)
    k = system.kappa
    w, g = _osc_parameters(system)
    xi = g * st.x
    pxi = st.px / g
    s = -1j if sign > 0 else 1j
    inv_sqrt2 = 2.0**-0.5
    if k == 0.0:
        return (s * inv_sqrt2) * pxi + (w / (g * 2.0**0.5)) * xi
    e = e_kappa(system, st)
    return (s * inv_sqrt2) * (ktrig.ck(k, xi) * pxi) + inv_sqrt2 * (e * ktrig.sk(k, xi))


def shift(system: SystemSpec, state: State, sign: int):
    """Shift function A(sign) of the transverse degree of freedom."""
    st = _as_parallel(state)
    k = system.kappa
    w, g = _osc_parameters(system)
    s = -1j if sign > 0 else 1j
    inv_sqrt2 = 2.0**-0.5
    if k == 0.0:
        return (s * inv_sqrt2) * st.py - (w * inv_sqrt2) * st.y
    e = e_kappa(system, st)
    return (s * inv_sqrt2) * st.py - (g * inv_sqrt2) * (e * ktrig.tk(k, st.y))


def x_complex(system: SystemSpec, state: State, sign: int):
    """Complex integral B^n A^m for rational gamma = m/n."""
    m, n = system.gamma_mn
    if m > _MAX_POWER or n > _MAX_POWER:
        raise ValueError(f"frequency ratio {m}/{n} beyond the supported power {_MAX_POWER}")
    st = _as_parallel(state)
    return ladder(system, st, sign) ** n * shift(system, st, sign) ** m


def real_integrals(system: SystemSpec, state: State):
    """Real constants (X, Y) extracted from the complex integral.

    Flat case: real and imaginary parts.  Curved case: the split depends on
    the parity of m + n, and dividing out the motion constant E requires it
    to be away from zero.
    """
    m, n = system.gamma_mn
    st = _as_parallel(state)
    xp = x_complex(system, st, +1)
    if system.kappa == 0.0:
        return creal(xp), cimag(xp)
    e = e_kappa(system, st)
    if abs(value(e)) < 1e-12:
        raise ZeroEnergyConstantError("motion constant E is numerically zero; X/Y split undefined")
    if (m + n) % 2 == 0:
        return creal(xp), cimag(xp) / e
    return creal(xp) / e, cimag(xp)


def angular_momentum(state: State):
    """The rotation generator J12; equals pphi exactly in the polar chart."""
    return charts.lie_generators(state)[2]


# ---------------------------------------------------------------------------
# quadratic integrals of the polynomial-series and Henon-Heiles families
# ---------------------------------------------------------------------------

def _series_coefficients(system: SystemSpec) -> tuple[float, ...]:
    if system.family in _RDG_FAMILIES:
        return system.coefficients
    # KdV Henon-Heiles as the M = 3 superposition (0, Omega, alpha/4)
    return (0.0, system.Omega, system.alpha / 4.0)


def rdg_integral(system: SystemSpec, state: State):
    """Quadratic integral of a polynomial-series or KdV Henon-Heiles system."""
    if system.family not in _RDG_FAMILIES | _KDV_FAMILIES:
        raise ValueError(f"family {system.family!r} carries no polynomial-series integral")
    st = state if isinstance(state, charts.BeltramiState) else charts.convert(state, "beltrami")
    k = system.kappa
    q1, q2, p1, p2 = st.q1, st.q2, st.p1, st.p2
    j01, _, j12 = charts.lie_generators(st)
    total = j01 * j12
    coeffs = _series_coefficients(system)
    if any(coeffs):
        u = 1.0 + k * (q1 * q1 + q2 * q2)
        series = 0.0
        for idx, alpha_n in enumerate(coeffs):
            if alpha_n == 0.0:
                continue
            n = idx + 1
            if k == 0.0:
                series = series + alpha_n * systems.rdg_flat_term(n - 1, q1, q2)
            else:
                series = series + alpha_n * systems._rdg_curved_beltrami(n - 1, k, q1, q2)
        total = total + (q1 * q1 / u) * series
    return total


# ---------------------------------------------------------------------------
# generic evaluation
# ---------------------------------------------------------------------------

def evaluate(ispec: IntegralSpec, state: State):
    """Value of the named integral at a state (complex for ladder-type names)."""
    name, system = ispec.name, ispec.system
    if name == "H_xi":
        return h_xi(system, state)
    if name == "E_kappa":
        return e_kappa(system, state)
    if name == "B_plus":
        return ladder(system, state, +1)
    if name == "B_minus":
        return ladder(system, state, -1)
    if name == "A_plus":
        return shift(system, state, +1)
    if name == "A_minus":
        return shift(system, state, -1)
    if name == "X_complex":
        return x_complex(system, state, +1)
    if name == "X_real":
        return real_integrals(system, state)[0]
    if name == "Y_real":
        return real_integrals(system, state)[1]
    if name == "J_angular":
        return angular_momentum(state)
    return rdg_integral(system, state)
