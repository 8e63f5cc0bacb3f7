import math
from dataclasses import replace
from fractions import Fraction

import numpy as np
import pytest

from kappamech import charts, systems
from kappamech.bracket import box_sampler
from kappamech.charts import AmbientState, BeltramiState, ParallelState, beltrami_state, convert, parallel_state, polar_state, to_ambient
from kappamech.errors import PoleError
from kappamech.systems import SystemSpec, hamiltonian, kinetic_energy, potential, rdg_curved_potential


def _beltrami_states(kappa, n, seed=0, box=0.6, mom=1.0):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        q = rng.uniform(-box, box, size=2)
        p = rng.uniform(-mom, mom, size=2)
        out.append(BeltramiState(kappa, *q, *p))
    return out


# ---------------------------------------------------------------------------
# SystemSpec
# ---------------------------------------------------------------------------

def test_gamma_is_reduced():
    spec = SystemSpec("aniso_oscillator", gamma=Fraction(4, 2))
    assert spec.gamma_mn == (2, 1)


def test_decimal_gamma_is_kept_but_not_rational():
    spec = SystemSpec("aniso_oscillator", gamma=math.sqrt(2.0))
    assert not spec.is_rational_gamma
    with pytest.raises(ValueError):
        spec.gamma_mn


def test_flat_only_families_reject_curvature():
    with pytest.raises(ValueError):
        SystemSpec("rdg_flat", kappa=0.3, coefficients=(1.0,))
    with pytest.raises(ValueError):
        SystemSpec("henon_heiles_sk_flat", kappa=-0.2)


def test_spec_serialization_round_trip():
    spec = SystemSpec("aniso_oscillator", kappa=0.5, omega=1.2, gamma=Fraction(3, 2))
    again = SystemSpec.from_dict(spec.to_dict())
    assert again == spec
    rdg = SystemSpec("rdg_curved", kappa=-0.4, coefficients=(0.1, 0.0, 0.3))
    assert SystemSpec.from_dict(rdg.to_dict()) == rdg


def test_higgs_delta_defaults_to_half_omega_squared():
    spec = SystemSpec("higgs", kappa=0.5, omega=2.0)
    assert spec.delta_value == 2.0
    assert SystemSpec("higgs", kappa=0.5, delta=0.7).delta_value == 0.7


def test_kdv_flat_couplings_default_to_curvable_case():
    spec = SystemSpec("henon_heiles_kdv_flat", Omega=0.3, alpha=0.1)
    assert spec.Omega2_value == 1.2
    general = replace(spec, Omega2=0.9)
    assert general.Omega2_value == 0.9


# ---------------------------------------------------------------------------
# kinetic energy
# ---------------------------------------------------------------------------

def test_kinetic_energy_at_projective_origin():
    st = beltrami_state(0.9, 0.0, 0.0, 0.3, -0.4)
    assert kinetic_energy(st) == pytest.approx(0.5 * (0.09 + 0.16), abs=1e-15)


def test_kinetic_energy_flat_projective_is_euclidean():
    st = beltrami_state(0.0, 1.3, -2.0, 0.7, 0.2)
    assert kinetic_energy(st) == 0.5 * (0.7**2 + 0.2**2)


def test_kinetic_energy_polar_circular():
    st = polar_state(1.0, 1.1, 0.3, 0.0, 0.8)
    assert kinetic_energy(st) == pytest.approx(0.8**2 / (2 * math.sin(1.1) ** 2), abs=1e-14)


def test_kinetic_energy_pole_errors():
    with pytest.raises(PoleError):
        kinetic_energy(ParallelState(1.0, 0.0, math.pi / 2, 0.1, 0.1))
    with pytest.raises(PoleError):
        kinetic_energy(charts.PolarState(0.0, 0.0, 0.0, 0.1, 0.1))


# ---------------------------------------------------------------------------
# potentials
# ---------------------------------------------------------------------------

def test_flat_polynomial_degree_three():
    # 4*q1^2*q2 + 8*q2^3 at (1, 1)
    spec = SystemSpec("rdg_flat", coefficients=(0.0, 0.0, 1.0))
    assert potential(spec, beltrami_state(0.0, 1.0, 1.0, 0.0, 0.0)) == 12.0


def test_higgs_potential_vanishes_at_origin():
    spec = SystemSpec("higgs", kappa=0.5)
    assert potential(spec, beltrami_state(0.5, 0.0, 0.0, 0.4, 0.2)) == 0.0


def test_oscillator_potential_on_axis_is_tangent_squared():
    w = 1.7
    spec = SystemSpec("aniso_oscillator", kappa=1.0, omega=w, gamma=Fraction(1))
    for x in (0.2, 0.7, 1.2):
        st = parallel_state(1.0, x, 0.0, 0.0, 0.0)
        assert potential(spec, st) == pytest.approx(0.5 * w * w * math.tan(x) ** 2, rel=1e-14)


def test_free_hamiltonian_is_kinetic_energy():
    spec = SystemSpec("free", kappa=-0.7)
    st = beltrami_state(-0.7, 0.2, 0.3, 0.5, -0.1)
    assert hamiltonian(spec, st) == kinetic_energy(st)


def test_kdv_flat_hamiltonian_value():
    spec = SystemSpec("henon_heiles_kdv_flat", Omega=0.8, alpha=0.5)
    st = beltrami_state(0.0, 1.0, 0.0, 0.0, 0.0)
    assert hamiltonian(spec, st) == pytest.approx(0.8, abs=1e-15)


def test_curved_kdv_vanishes_at_rest_origin():
    spec = SystemSpec("henon_heiles_kdv_curved", kappa=0.6, Omega=0.8, alpha=0.5)
    st = beltrami_state(0.6, 0.0, 0.0, 0.0, 0.0)
    assert hamiltonian(spec, st) == 0.0


def test_rosochatius_terms_are_additive_barriers():
    base = SystemSpec("aniso_oscillator", kappa=0.5, omega=1.0, gamma=Fraction(2))
    spec = SystemSpec(
        "aniso_oscillator_rosochatius", kappa=0.5, omega=1.0, gamma=Fraction(2), lambda1=0.3, lambda2=0.2
    )
    st = parallel_state(0.5, 0.4, -0.3, 0.0, 0.0)
    amb = to_ambient(st)
    expected = potential(base, st) + 0.3 / amb.x1**2 + 0.2 / amb.x2**2
    assert potential(spec, st) == pytest.approx(expected, rel=1e-12)


def test_kepler_potential_and_pole():
    spec = SystemSpec("kepler_coulomb", kappa=-0.5, k_coulomb=-2.0)
    st = beltrami_state(-0.5, 0.3, 0.4, 0.0, 0.0)
    assert potential(spec, st) == pytest.approx(-2.0 / 0.5, rel=1e-14)
    with pytest.raises(PoleError):
        potential(spec, beltrami_state(-0.5, 0.0, 0.0, 0.1, 0.1))


# ---------------------------------------------------------------------------
# curvature-deformed polynomial series
# ---------------------------------------------------------------------------

def test_deformed_term_zero_is_one_in_flat_case():
    st = beltrami_state(0.0, 0.9, -1.4, 0.0, 0.0)
    assert rdg_curved_potential(0, 0.0, st) == 1.0


def test_deformed_term_zero_is_not_constant_when_curved():
    k = 0.8
    vals = {rdg_curved_potential(0, k, beltrami_state(k, q1, q2, 0.0, 0.0)) for q1, q2 in [(0.0, 0.0), (0.5, 0.2), (0.1, 0.6)]}
    assert len(vals) == 3


def test_deformed_term_one_ambient_display():
    # 2*x0*x2 / (x0^2 - kappa*x2^2)^2; at kappa = 0, x0 = 1 this is 2*x2
    st = AmbientState(0.0, 1.0, 0.3, -0.45, 0.0, 0.0, 0.0)
    assert rdg_curved_potential(1, 0.0, st) == pytest.approx(-0.9, abs=1e-15)


def test_deformed_term_two_flat_value():
    st = beltrami_state(0.0, 1.0, 1.0, 0.0, 0.0)
    assert rdg_curved_potential(2, 0.0, st) == pytest.approx(5.0, abs=1e-15)


@pytest.mark.parametrize("kappa", (-0.5, 0.8))
def test_deformed_terms_agree_between_projective_and_ambient(kappa):
    for st in _beltrami_states(kappa, 30, seed=4):
        amb = to_ambient(st)
        for n in range(0, 7):
            a = rdg_curved_potential(n, kappa, st)
            b = rdg_curved_potential(n, kappa, amb)
            assert abs(a - b) < 1e-10 * (1 + abs(a))


def test_first_deformed_terms_match_their_ambient_displays():
    kappa = 0.37
    for st in _beltrami_states(kappa, 10, seed=5):
        x0, x1, x2 = to_ambient(st).coords
        d = (x0**2 - kappa * x2**2) ** 2
        displays = {
            0: (1 - kappa * x1**2) / d,
            1: 2 * x0 * x2 / d,
            2: (x1**2 * (1 - kappa * x1**2) + 4 * x0**2 * x2**2) / d,
            3: (4 * x0 * x1**2 * x2 * (1 - 0.5 * kappa * x1**2) + 8 * x0**3 * x2**3) / d,
        }
        for n, ref in displays.items():
            assert rdg_curved_potential(n, kappa, st) == pytest.approx(ref, rel=1e-12)


# ---------------------------------------------------------------------------
# the relabeled 2:1 family
# ---------------------------------------------------------------------------

def test_typeII_matches_swapped_ambient_display():
    w = 1.3
    kappa = 0.45
    spec = SystemSpec("curved_21_typeII", kappa=kappa, omega=w)
    for st in _beltrami_states(kappa, 20, seed=6):
        x0, x1, x2 = to_ambient(st).coords
        display = 0.5 * w * w * (
            x1**2 / (1 - kappa * x1**2)
            + 4 * x0**2 * x2**2 / ((x0**2 + kappa * x2**2) * (x0**2 - kappa * x2**2) ** 2)
        )
        assert potential(spec, st) == pytest.approx(display, rel=1e-11)


def test_typeII_is_standard_21_with_axes_exchanged():
    w = 1.1
    kappa = 0.45
    type2 = SystemSpec("curved_21_typeII", kappa=kappa, omega=w)
    standard = SystemSpec("aniso_oscillator", kappa=kappa, omega=w, gamma=Fraction(2))
    for st in _beltrami_states(kappa, 20, seed=7, box=0.35):
        amb = to_ambient(st)
        swapped = charts.ambient_state(kappa, amb.x0, amb.x2, amb.x1, amb.pi0, amb.pi2, amb.pi1)
        assert hamiltonian(type2, st) == pytest.approx(
            hamiltonian(standard, swapped), rel=1e-10
        )


# ---------------------------------------------------------------------------
# flat limits and asymmetries
# ---------------------------------------------------------------------------

def _curved_flat_pairs():
    return [
        ("free", SystemSpec("free", kappa=1.0), "beltrami"),
        (
            "aniso gamma=2",
            SystemSpec("aniso_oscillator", kappa=1.0, omega=1.0, gamma=Fraction(2)),
            "parallel",
        ),
        (
            "rosochatius",
            SystemSpec(
                "aniso_oscillator_rosochatius",
                kappa=1.0,
                omega=1.0,
                gamma=Fraction(2),
                lambda1=0.2,
                lambda2=0.1,
            ),
            "parallel",
        ),
        ("higgs", SystemSpec("higgs", kappa=1.0, omega=1.2), "beltrami"),
        ("typeII", SystemSpec("curved_21_typeII", kappa=1.0, omega=1.1), "beltrami"),
        ("rdg", SystemSpec("rdg_curved", kappa=1.0, coefficients=(0.2, 0.3, 0.1)), "beltrami"),
        (
            "kdv",
            SystemSpec("henon_heiles_kdv_curved", kappa=1.0, Omega=0.3, alpha=0.2),
            "beltrami",
        ),
        ("kepler", SystemSpec("kepler_coulomb", kappa=1.0, k_coulomb=-1.0), "beltrami"),
    ]


def _fixed_states(chart, kappa, seed):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(15):
        if chart == "parallel":
            c = rng.uniform(-0.3, 0.3, size=2)
            st = ParallelState(kappa, c[0], c[1] if abs(c[1]) > 0.05 else c[1] + 0.1, *rng.uniform(-0.8, 0.8, size=2))
        else:
            q = rng.uniform(0.1, 0.5, size=2)
            st = BeltramiState(kappa, *q, *rng.uniform(-0.8, 0.8, size=2))
        out.append(st)
    return out


@pytest.mark.parametrize("name,spec,chart", _curved_flat_pairs())
def test_hamiltonians_converge_first_order_in_curvature(name, spec, chart):
    states0 = _fixed_states(chart, 0.0, seed=20)
    spec0 = replace(spec, kappa=0.0)

    def deviation(kappa):
        spec_k = replace(spec, kappa=kappa)
        dev = 0.0
        for s0 in states0:
            sk = type(s0)(kappa, *s0.coords, *s0.momenta)
            dev = max(dev, abs(hamiltonian(spec_k, sk) - hamiltonian(spec0, s0)))
        return dev

    k = 1e-2
    prev = deviation(k)
    while k > 2e-6:
        k /= 2.0
        cur = deviation(k)
        if prev == 0.0:
            assert cur == 0.0  # curvature-independent formula (kinetic-only deviation)
            break
        assert 0.4 < cur / prev < 0.6
        prev = cur


def test_curved_potentials_match_flat_at_tiny_curvature():
    for name, spec, chart in _curved_flat_pairs():
        spec_k = replace(spec, kappa=1e-9)
        spec_0 = replace(spec, kappa=0.0)
        for s0 in _fixed_states(chart, 0.0, seed=21):
            sk = type(s0)(1e-9, *s0.coords, *s0.momenta)
            v0 = potential(spec_0, s0)
            vk = potential(spec_k, sk)
            assert abs(vk - v0) <= 1e-6 * (1.0 + abs(v0)), name


def test_frequency_ratio_inversion_is_inequivalent_only_when_curved():
    w = 1.0
    spec2 = SystemSpec("aniso_oscillator", kappa=1.0, omega=w, gamma=Fraction(2))
    spec_half = SystemSpec("aniso_oscillator", kappa=1.0, omega=2.0 * w, gamma=Fraction(1, 2))
    rng = np.random.default_rng(22)
    states = [ParallelState(1.0, *rng.uniform(-0.6, 0.6, size=2), 0.0, 0.0) for _ in range(15)]
    gap = 0.0
    for st in states:
        swapped = ParallelState(1.0, st.y, st.x, st.py, st.px)
        gap = max(gap, abs(potential(spec2, st) - potential(spec_half, swapped)))
    assert gap > 0.1

    spec2_flat = replace(spec2, kappa=0.0)
    spec_half_flat = replace(spec_half, kappa=0.0)
    for st in states:
        flat = ParallelState(0.0, st.x, st.y, st.px, st.py)
        swapped = ParallelState(0.0, st.y, st.x, st.py, st.px)
        assert abs(potential(spec2_flat, flat) - potential(spec_half_flat, swapped)) <= 1e-12


@pytest.mark.parametrize("kappa", (-0.6, 0.8))
def test_higgs_three_chart_displays_agree(kappa):
    spec = SystemSpec("higgs", kappa=kappa, delta=0.9)
    for st in _beltrami_states(kappa, 30, seed=23, box=0.5):
        ref = potential(spec, st)
        for chart in ("polar", "ambient", "parallel"):
            other = potential(spec, convert(st, chart))
            assert abs(other - ref) < 1e-10 * (1 + abs(ref))


# ---------------------------------------------------------------------------
# gradients
# ---------------------------------------------------------------------------

def test_free_gradient_at_origin():
    spec = SystemSpec("free", kappa=0.8)
    st = beltrami_state(0.8, 0.0, 0.0, 0.4, -0.2)
    grad = systems.hamiltonian_gradient(spec, st)
    assert grad[:2] == pytest.approx([0.0, 0.0], abs=1e-15)
    assert grad[2:] == pytest.approx([0.4, -0.2], abs=1e-15)


def test_potential_gradient_has_no_momentum_dependence():
    spec = SystemSpec("henon_heiles_kdv_curved", kappa=0.5, Omega=0.3, alpha=0.2)
    st = beltrami_state(0.5, 0.3, -0.2, 0.9, 0.4)
    grad = systems.phase_gradient(lambda s: potential(spec, s), st)
    assert grad[2:] == pytest.approx([0.0, 0.0], abs=1e-15)


def test_gradient_matches_central_differences():
    cases = [
        (SystemSpec("aniso_oscillator", kappa=0.7, omega=1.2, gamma=Fraction(2)), "parallel"),
        (SystemSpec("henon_heiles_kdv_curved", kappa=-0.6, Omega=0.3, alpha=0.2), "beltrami"),
        (SystemSpec("higgs", kappa=0.4, omega=1.0), "beltrami"),
        (SystemSpec("rdg_flat", coefficients=(0.1, 0.2, 0.3)), "beltrami"),
    ]
    h = 1e-6
    rng = np.random.default_rng(30)
    for spec, chart in cases:
        sampler = box_sampler(chart, spec.kappa, coord_scale=0.4, momentum_scale=1.0)
        for i in range(25):
            st = sampler(np.random.default_rng((31, i)))
            grad = systems.hamiltonian_gradient(spec, st)
            vec = list(st.coords) + list(st.momenta)
            for j in range(4):
                up = list(vec)
                dn = list(vec)
                up[j] += h
                dn[j] -= h
                fp = hamiltonian(spec, st.replace_phase(up[:2], up[2:]))
                fm = hamiltonian(spec, st.replace_phase(dn[:2], dn[2:]))
                fd = (fp - fm) / (2 * h)
                assert abs(grad[j] - fd) < 1e-6 * (1.0 + abs(fd))
