"""Dispersion and birefringence of uniaxial nonlinear crystals.

Refractive indices come from one-pole Sellmeier fits of the form

    n^2 = b0 + c_num / (lambda^2 - c_pole) - e_quad * lambda^2

with the wavelength in micrometres.  The extraordinary index at an angle
to the optic axis follows the index ellipsoid, which also yields the
spatial walk-off angle.  Angles are radians, wavelengths micrometres;
lengths are metres and times seconds where they appear.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

SPEED_OF_LIGHT = 299_792_458.0  # m/s


class WavelengthRangeError(ValueError):
    """Wavelength outside the validity window of a dispersion model."""


@dataclass(frozen=True)
class SellmeierModel:
    """Coefficients of the n^2 fit, valid on [lambda_min, lambda_max] um."""

    b0: float       # dimensionless offset
    c_num: float    # um^2
    c_pole: float   # um^2, pole position; must stay below lambda_min^2
    e_quad: float   # um^-2
    lambda_min: float
    lambda_max: float

    def n_squared(self, wavelength_um: float) -> float:
        lam2 = wavelength_um * wavelength_um
        return self.b0 + self.c_num / (lam2 - self.c_pole) - self.e_quad * lam2

    def index(self, wavelength_um: float) -> float:
        return math.sqrt(self.n_squared(wavelength_um))


@dataclass(frozen=True)
class UniaxialCrystal:
    """Principal dispersion plus nonlinear coefficients of a uniaxial crystal.

    ``d11`` and ``d22`` are in pm/V.  The transparency window
    [lambda_min, lambda_max] (um) bounds every index evaluation.
    """

    name: str
    sellmeier_o: SellmeierModel
    sellmeier_e: SellmeierModel
    d11: float
    d22: float
    lambda_min: float
    lambda_max: float


BBO = UniaxialCrystal(
    name="BBO",
    sellmeier_o=SellmeierModel(2.7405, 0.0184, 0.0179, 0.0155, 0.190, 3.300),
    sellmeier_e=SellmeierModel(2.3730, 0.0128, 0.0156, 0.0044, 0.190, 3.300),
    d11=0.08,  # pm/V, small for beta-barium borate
    d22=2.2,   # pm/V
    lambda_min=0.190,
    lambda_max=3.300,
)


def _check_wavelength(crystal: UniaxialCrystal, wavelength_um: float) -> None:
    if not (crystal.lambda_min <= wavelength_um <= crystal.lambda_max):
        raise WavelengthRangeError(
            f"wavelength {wavelength_um} um is outside the {crystal.name} "
            f"transparency range [{crystal.lambda_min}, {crystal.lambda_max}] um"
        )


def index_ordinary(crystal: UniaxialCrystal, wavelength_um: float) -> float:
    """Ordinary refractive index n_o(lambda)."""
    _check_wavelength(crystal, wavelength_um)
    return crystal.sellmeier_o.index(wavelength_um)


def index_extraordinary_principal(crystal: UniaxialCrystal, wavelength_um: float) -> float:
    """Principal extraordinary index n_e(lambda), i.e. propagation at 90 deg
    to the optic axis."""
    _check_wavelength(crystal, wavelength_um)
    return crystal.sellmeier_e.index(wavelength_um)


def index_extraordinary(crystal: UniaxialCrystal, wavelength_um: float,
                        theta_oa: float) -> float:
    """Extraordinary index at angle ``theta_oa`` from the optic axis.

    Uses the index ellipsoid

        n(theta)^2 = n_e^2 n_o^2 / (n_e^2 cos^2 theta + n_o^2 sin^2 theta)

    The endpoints are returned exactly: theta_oa = 0 gives n_o and
    theta_oa = pi/2 gives the principal n_e.
    """
    _check_wavelength(crystal, wavelength_um)
    if theta_oa == 0.0 or theta_oa == math.pi:
        return crystal.sellmeier_o.index(wavelength_um)
    if theta_oa == math.pi / 2:
        return crystal.sellmeier_e.index(wavelength_um)
    no2 = crystal.sellmeier_o.n_squared(wavelength_um)
    ne2 = crystal.sellmeier_e.n_squared(wavelength_um)
    cos_t = math.cos(theta_oa)
    sin_t = math.sin(theta_oa)
    return math.sqrt(ne2 * no2 / (ne2 * cos_t * cos_t + no2 * sin_t * sin_t))


def walkoff_angle(crystal: UniaxialCrystal, wavelength_um: float,
                  theta_oa: float) -> float:
    """Spatial walk-off rho = -(1/n) dn/dtheta of the extraordinary wave.

    Closed form of the ellipsoid derivative:

        rho = (n_o^2 - n_e^2) sin(2 theta) / (2 (n_e^2 cos^2 + n_o^2 sin^2))

    Sign convention: positive rho means the energy flow of the
    extraordinary wave tilts toward the optic axis, which is the case on
    (0, pi/2) for a negative uniaxial crystal.
    """
    _check_wavelength(crystal, wavelength_um)
    if theta_oa == 0.0 or theta_oa == math.pi / 2:
        return 0.0
    no2 = crystal.sellmeier_o.n_squared(wavelength_um)
    ne2 = crystal.sellmeier_e.n_squared(wavelength_um)
    cos_t = math.cos(theta_oa)
    sin_t = math.sin(theta_oa)
    denom = ne2 * cos_t * cos_t + no2 * sin_t * sin_t
    return (no2 - ne2) * math.sin(2.0 * theta_oa) / (2.0 * denom)


def temporal_walkoff(crystal: UniaxialCrystal, wavelength_um: float,
                     theta_oa: float, length_m: float) -> float:
    """Exit-time difference between the e and o waves over a crystal of
    length ``length_m``:  dt = (L/c) |n_e(theta) - n_o|.  Phase indices are
    used on both arms."""
    if length_m < 0:
        raise ValueError("crystal length must be non-negative")
    n_e = index_extraordinary(crystal, wavelength_um, theta_oa)
    n_o = index_ordinary(crystal, wavelength_um)
    return length_m * (abs(n_e - n_o) / SPEED_OF_LIGHT)


_CRYSTAL_FILE_KEYS = (
    "b0_o", "c_num_o", "c_pole_o", "e_quad_o",
    "b0_e", "c_num_e", "c_pole_e", "e_quad_e",
    "d11", "d22", "lambda_min", "lambda_max",
)


def read_key_value_file(path: str | Path) -> dict[str, str]:
    """Parse a line-oriented ``key = value`` text file.

    Blank lines and lines starting with ``#`` are ignored.
    """
    data: dict[str, str] = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
        key, _, value = line.partition("=")
        data[key.strip()] = value.strip()
    return data


def load_crystal(path: str | Path) -> UniaxialCrystal:
    """Build a crystal from a ``key = value`` coefficient file."""
    raw = read_key_value_file(path)
    missing = [k for k in _CRYSTAL_FILE_KEYS if k not in raw]
    if missing:
        raise ValueError(f"crystal file {path} is missing keys: {', '.join(missing)}")
    try:
        values = {k: float(raw[k]) for k in _CRYSTAL_FILE_KEYS}
    except ValueError as exc:
        raise ValueError(f"crystal file {path}: {exc}") from None
    lo, hi = values["lambda_min"], values["lambda_max"]
    if not (0.0 < lo < hi):
        raise ValueError(f"crystal file {path}: invalid wavelength range [{lo}, {hi}]")
    for suffix in ("o", "e"):
        pole = values[f"c_pole_{suffix}"]
        if pole >= lo * lo:
            raise ValueError(
                f"crystal file {path}: c_pole_{suffix} = {pole} um^2 reaches into "
                f"the validity window (lambda_min^2 = {lo * lo} um^2)"
            )
    model_o = SellmeierModel(values["b0_o"], values["c_num_o"],
                             values["c_pole_o"], values["e_quad_o"], lo, hi)
    model_e = SellmeierModel(values["b0_e"], values["c_num_e"],
                             values["c_pole_e"], values["e_quad_e"], lo, hi)
    for label, model in (("ordinary", model_o), ("extraordinary", model_e)):
        for lam in (lo, 0.5 * (lo + hi), hi):
            if model.n_squared(lam) <= 1.0:
                raise ValueError(
                    f"crystal file {path}: {label} n^2 <= 1 at {lam} um"
                )
    return UniaxialCrystal(
        name=Path(path).stem,
        sellmeier_o=model_o,
        sellmeier_e=model_e,
        d11=values["d11"],
        d22=values["d22"],
        lambda_min=lo,
        lambda_max=hi,
    )


def get_crystal(name_or_path: str) -> UniaxialCrystal:
    """Resolve a crystal argument: the built-in name ``BBO`` or a
    coefficient-file path."""
    if name_or_path.upper() == "BBO":
        return BBO
    if Path(name_or_path).is_file():
        return load_crystal(name_or_path)
    raise ValueError(
        f"unknown crystal {name_or_path!r}: use 'BBO' or a coefficient-file path"
    )
