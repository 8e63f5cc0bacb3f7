"""Static catalog metadata: families, parameters, native charts, integrals."""

from __future__ import annotations

from fractions import Fraction

from .integrals import known_integrals
from .systems import NATIVE_CHART, PARAMS_BY_FAMILY, SystemSpec

_NOTES = {
    "free": "geodesic flow; every isometry generator is conserved",
    "aniso_oscillator": "superintegrable for rational gamma = m/n (integrals X, Y)",
    "aniso_oscillator_rosochatius": (
        "integrable for any gamma; second integral: open for rational gamma != 1 "
        "with both barrier terms"
    ),
    "higgs": "isotropic curved oscillator; quadratically superintegrable",
    "curved_21_typeII": (
        "x1 <-> x2 relabeling of the 2:1 curved oscillator; integrals via the relabeled system"
    ),
    "rdg_flat": "integrable for every degree; integral L_n uses the degree n-1 term",
    "rdg_curved": "curvature deformation of the polynomial series, same integral structure",
    "rdg_superposed": "arbitrary superpositions stay integrable with the superposed integral",
    "henon_heiles_kdv_flat": (
        "integrable cubic perturbation; the shipped integral needs Omega2 = 4*Omega1"
    ),
    "henon_heiles_kdv_curved": "curved counterpart with Omega2 = 4*Omega1 built in",
    "henon_heiles_sk_flat": "integral: none shipped (separates in rotated coordinates)",
    "henon_heiles_kk_flat": "integral: none shipped (quartic in the momenta)",
    "kepler_coulomb": "central potential k/|q| in projective coordinates, any curvature",
}


def _representative(family: str) -> SystemSpec:
    if family in ("rdg_flat", "rdg_curved", "rdg_superposed"):
        kappa = 0.0 if family == "rdg_flat" else 0.5
        return SystemSpec(family, kappa=kappa, coefficients=(0.2, 0.3, 0.1))
    if family == "henon_heiles_kdv_curved":
        return SystemSpec(family, kappa=0.5, Omega=0.3, alpha=0.2)
    if family.startswith("henon_heiles"):
        return SystemSpec(family, kappa=0.0, Omega=0.3, alpha=0.2)
    if family == "aniso_oscillator":
        return SystemSpec(family, kappa=0.5, gamma=Fraction(2))
    if family == "aniso_oscillator_rosochatius":
        return SystemSpec(family, kappa=0.5, gamma=Fraction(2), lambda1=0.1, lambda2=0.1)
    if family in ("free", "higgs", "curved_21_typeII", "kepler_coulomb"):
        return SystemSpec(family, kappa=0.5)
    raise ValueError(family)


def catalog_entries() -> list[dict]:
    """One row per family: parameters, native chart, shipped integrals, notes."""
    rows = []
    for family in PARAMS_BY_FAMILY:
        spec = _representative(family)
        rows.append(
            {
                "family": family,
                "parameters": list(PARAMS_BY_FAMILY[family]),
                "native_chart": NATIVE_CHART[family],
                "integrals": known_integrals(spec),
                "notes": _NOTES[family],
            }
        )
    return rows


def format_catalog(rows: list[dict] | None = None) -> str:
    rows = catalog_entries() if rows is None else rows
    lines = []
    for row in rows:
        integrals = ", ".join(row["integrals"]) if row["integrals"] else "none shipped"
        lines.append(row["family"])
        lines.append(f"  parameters : {', '.join(row['parameters']) or '-'}")
        lines.append(f"  chart      : {row['native_chart']}")
        lines.append(f"  integrals  : {integrals}")
        lines.append(f"  notes      : {row['notes']}")
        lines.append("")
    return "\n".join(lines).rstrip() + "\n"
