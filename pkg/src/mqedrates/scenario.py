"""
Scenario files, embedded reference data and CSV output.

Scenario files are JSON (schema in ``data/scenario.schema.json``). Inputs
use spectroscopic units, spelled out in the key names (``_ev``,
``_angstrom``, ``_mb``, ``_per_s``, ``_m``); complex numbers are
``[re, im]`` pairs. Loading converts everything to SI.
"""
from dataclasses import dataclass, field
from importlib import resources
import cmath
import csv
import io
import json
import math
import os
from pathlib import Path
import tempfile

import jsonschema

from mqedrates import greens, units
from mqedrates.errors import DomainError
from mqedrates.rates import AtomicTransitionData

CSV_PRECISION = 9


class ScenarioError(DomainError):
    """Malformed or invalid scenario file; the message names the field path."""


# --------------------------------------------------------------------------
# reference data
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Cited:
    value: float
    unit: str
    source: str


HENE = {
    "omega_ev": Cited(40.94, "eV", "HeNe dimer, He(23sp+) -> He(1s3s) transition energy"),
    "sigma_icd_mb": Cited(9.28, "Mb", "Ne photoionisation cross section at the transition energy"),
    "sigma_auger_mb": Cited(0.35, "Mb", "He(1s3s) photoionisation cross section at the transition energy"),
    "gamma_per_s": Cited(5.65e9, "1/s", "He(23sp+) radiative rate"),
    "separation_angstrom": Cited(3.01, "Angstrom", "HeNe ground-state equilibrium distance"),
    "auger_radius_angstrom": Cited(0.457, "Angstrom", "Auger radius inferred from the free Auger rate"),
}
# A second published Auger radius for the same system; 0.457 Angstrom
# stays the default.
HENE_AUGER_RADIUS_ALT_ANGSTROM = 0.431
# Cross-section ratio quoted for labelling contours; 9.28 / 0.35 = 26.51.
HENE_SIGMA_RATIO_QUOTED = 26.76


@dataclass(frozen=True)
class HeNeDataset:
    omega: float
    gamma: float
    sigma_icd: float
    sigma_auger: float
    separation: float
    auger_radius: float

    @property
    def icd(self):
        return AtomicTransitionData(omega=self.omega, gamma=self.gamma, sigma=self.sigma_icd,
                                    auger_radius=self.auger_radius, separation=self.separation)

    @property
    def auger(self):
        return AtomicTransitionData(omega=self.omega, gamma=self.gamma, sigma=self.sigma_auger,
                                    auger_radius=self.auger_radius, separation=self.separation)


def hene_dataset(auger_radius_angstrom=None):
    a = HENE["auger_radius_angstrom"].value if auger_radius_angstrom is None else auger_radius_angstrom
    return HeNeDataset(
        omega=units.ev_to_angular_frequency(HENE["omega_ev"].value),
        gamma=HENE["gamma_per_s"].value,
        sigma_icd=units.megabarn_to_m2(HENE["sigma_icd_mb"].value),
        sigma_auger=units.megabarn_to_m2(HENE["sigma_auger_mb"].value),
        separation=units.angstrom_to_m(HENE["separation_angstrom"].value),
        auger_radius=units.angstrom_to_m(a),
    )


@dataclass(frozen=True)
class MaterialEntry:
    index: int
    r_nr: complex
    eps: complex
    n_r: complex


# r_NR as listed; the printed permittivities and indices are roundings of
# (1 + r) / (1 - r) and its principal square root
_MATERIAL_R = {1: -2.0, 2: 2j, 3: 1.41 + 1.41j, 4: 2.0}
MATERIAL_PRINTED = {
    1: (-0.33, 0.58j),
    2: (-0.60 + 0.80j, 0.45 + 0.90j),
    3: (-1.38 + 1.30j, 0.51 + 1.28j),
    4: (-3.0, 1.73j),
}


def material_table():
    entries = []
    for idx, r in _MATERIAL_R.items():
        eps = greens.permittivity_from_reflection(r)
        eps = complex(eps.real, eps.imag + 0.0)   # drop a signed zero before the branch cut
        n_r = cmath.sqrt(eps)
        if n_r.imag < 0:
            n_r = -n_r
        entries.append(MaterialEntry(index=idx, r_nr=complex(r), eps=eps, n_r=n_r))
    return entries


def material(index):
    for entry in material_table():
        if entry.index == index:
            return entry
    raise ScenarioError(f"unknown material index {index}; expected 1..4")


# --------------------------------------------------------------------------
# scenario loading
# --------------------------------------------------------------------------

@dataclass
class ScenarioConfig:
    process: str
    icd: AtomicTransitionData
    auger: AtomicTransitionData
    environment: object
    geometry: dict = field(default_factory=dict)
    sweep: dict = field(default_factory=dict)
    output: dict = field(default_factory=dict)
    cavity: dict = field(default_factory=dict)


def _schema():
    text = resources.files("mqedrates").joinpath("data/scenario.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


def bundled_path(name):
    return Path(str(resources.files("mqedrates").joinpath("data", name)))


def _complex(pair):
    return complex(pair[0], pair[1])


def _pair(z):
    z = complex(z)
    return [z.real, z.imag]


def _environment(spec):
    kind = spec["type"]
    if kind == "free_space":
        return greens.FreeSpace(nonretarded=spec.get("nonretarded", False)), {}
    if kind == "surface":
        given = [k for k in ("r_nr", "permittivity", "material") if k in spec]
        if len(given) != 1:
            raise ScenarioError("environment: surface needs exactly one of r_nr, permittivity, material")
        if "r_nr" in spec:
            r_nr = _complex(spec["r_nr"])
        elif "permittivity" in spec:
            r_nr = greens.reflection_coefficient(_complex(spec["permittivity"]))
        else:
            r_nr = material(spec["material"]).r_nr
        return greens.Surface(r_nr=r_nr, normal=tuple(spec.get("normal", (0.0, 0.0, 1.0)))), {}
    if kind == "cavity":
        extra = {}
        if "q_factor" in spec or "scale_factor" in spec:
            for key in ("q_factor", "scale_factor"):
                if key not in spec:
                    raise ScenarioError(f"environment.{key}: required together with the other cavity factor")
                if not spec[key] > 0:
                    raise ScenarioError(f"environment.{key}: must be positive")
            extra = {"Q": spec["q_factor"], "s": spec["scale_factor"]}
        if "n" in spec or "radius_m" in spec:
            try:
                return greens.SphericalCavity(n=_complex(spec["n"]), radius=spec["radius_m"]), extra
            except KeyError as exc:
                raise ScenarioError(f"environment.{exc.args[0]}: required for a spherical cavity") from None
        return greens.FreeSpace(), extra
    if kind == "mediator":
        try:
            alpha = _complex(spec["alpha_volume_angstrom3"]) * units.ANGSTROM ** 3
            pos = [units.angstrom_to_m(x) for x in spec["position_angstrom"]]
        except KeyError as exc:
            raise ScenarioError(f"environment.{exc.args[0]}: required for a mediator") from None
        return greens.MediatorAtom(alpha, tuple(pos), nonretarded=spec.get("nonretarded", False)), {}
    raise ScenarioError(f"environment.type: unknown {kind!r}")


def _transition(spec):
    def conv(key, fn):
        if key not in spec:
            return None
        try:
            return fn(spec[key])
        except DomainError as exc:
            raise ScenarioError(f"transition.{key}: {exc}") from None

    omega = conv("omega_ev", units.ev_to_angular_frequency)
    sigma_icd = conv("sigma_icd_mb", units.megabarn_to_m2) or 0.0
    sigma_auger = conv("sigma_auger_mb", units.megabarn_to_m2) or 0.0
    sep = conv("separation_angstrom", units.angstrom_to_m)
    a = conv("auger_radius_angstrom", units.angstrom_to_m)
    common = dict(omega=omega, gamma=spec["gamma_per_s"], auger_radius=a,
                  separation=sep, c_nkm=spec.get("c_nkm"))
    try:
        return (AtomicTransitionData(sigma=sigma_icd, **common),
                AtomicTransitionData(sigma=sigma_auger, **common))
    except DomainError as exc:
        raise ScenarioError(f"transition: {exc}") from None


def parse_scenario(raw):
    """Validate a scenario mapping and convert it to SI."""
    validator = jsonschema.Draft202012Validator(_schema())
    errors = sorted(validator.iter_errors(raw), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        path = ".".join(str(p) for p in err.absolute_path) or "<root>"
        raise ScenarioError(f"{path}: {err.message}")

    icd, auger = _transition(raw["transition"])
    env, cavity = _environment(raw.get("environment", {"type": "free_space"}))

    geometry = dict(raw.get("geometry", {}))
    if "surface_distance_angstrom" in geometry:
        dr = units.angstrom_to_m(geometry.pop("surface_distance_angstrom"))
        if not dr > 0:
            raise ScenarioError("geometry.surface_distance_angstrom: must be positive")
        geometry["surface_distance"] = dr

    sweep = {}
    if "sweep" in raw:
        s = raw["sweep"]
        lo, hi = s["dr_min_angstrom"], s["dr_max_angstrom"]
        if not 0 < lo < hi:
            raise ScenarioError("sweep: need 0 < dr_min_angstrom < dr_max_angstrom")
        sweep = {"dr_min": units.angstrom_to_m(lo), "dr_max": units.angstrom_to_m(hi),
                 "steps": s["steps"], "spacing": s.get("spacing", "linear")}

    return ScenarioConfig(process=raw["process"], icd=icd, auger=auger, environment=env,
                          geometry=geometry, sweep=sweep, output=dict(raw.get("output", {})),
                          cavity=cavity)


def load_scenario(path):
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ScenarioError(f"{path}: cannot read ({exc.strerror})") from None
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}: JSON parse error at line {exc.lineno}: {exc.msg}") from None
    return parse_scenario(raw)


def dump_scenario(cfg):
    """Inverse of :func:`parse_scenario` (spectroscopic units)."""
    t = cfg.icd
    transition = {"omega_ev": units.angular_frequency_to_ev(t.omega), "gamma_per_s": t.gamma,
                  "sigma_icd_mb": units.m2_to_megabarn(cfg.icd.sigma),
                  "sigma_auger_mb": units.m2_to_megabarn(cfg.auger.sigma)}
    if t.separation is not None:
        transition["separation_angstrom"] = units.m_to_angstrom(t.separation)
    if t.auger_radius is not None:
        transition["auger_radius_angstrom"] = units.m_to_angstrom(t.auger_radius)
    if t.c_nkm is not None:
        transition["c_nkm"] = t.c_nkm

    env = cfg.environment
    if isinstance(env, greens.Surface):
        environment = {"type": "surface", "r_nr": _pair(env.r_nr), "normal": list(env.normal)}
    elif isinstance(env, greens.SphericalCavity):
        environment = {"type": "cavity", "n": _pair(env.n), "radius_m": env.radius}
    elif isinstance(env, greens.MediatorAtom):
        environment = {"type": "mediator",
                       "alpha_volume_angstrom3": _pair(env.alpha_volume / units.ANGSTROM ** 3),
                       "position_angstrom": [units.m_to_angstrom(x) for x in env.position],
                       "nonretarded": env.nonretarded}
    elif cfg.cavity:
        environment = {"type": "cavity"}
    else:
        environment = {"type": "free_space", "nonretarded": env.nonretarded}
    if cfg.cavity:
        environment.update(q_factor=cfg.cavity["Q"], scale_factor=cfg.cavity["s"])

    out = {"process": cfg.process, "transition": transition, "environment": environment}
    if cfg.geometry:
        geometry = dict(cfg.geometry)
        if "surface_distance" in geometry:
            geometry["surface_distance_angstrom"] = units.m_to_angstrom(geometry.pop("surface_distance"))
        out["geometry"] = geometry
    if cfg.sweep:
        out["sweep"] = {"dr_min_angstrom": units.m_to_angstrom(cfg.sweep["dr_min"]),
                        "dr_max_angstrom": units.m_to_angstrom(cfg.sweep["dr_max"]),
                        "steps": cfg.sweep["steps"], "spacing": cfg.sweep["spacing"]}
    if cfg.output:
        out["output"] = dict(cfg.output)
    return out


# --------------------------------------------------------------------------
# CSV
# --------------------------------------------------------------------------

def _fmt(value):
    if isinstance(value, str):
        return value
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, (int,)) and not isinstance(value, bool):
        return str(value)
    value = float(value)
    if math.isnan(value):
        return "nan"
    return f"{value:.{CSV_PRECISION}g}"


def render_csv(grid, columns=None):
    """CSV text for ``grid`` (optionally a subset of its columns, in the given order)."""
    columns = list(grid.columns if columns is None else columns)
    try:
        idx = [grid.columns.index(c) for c in columns]
    except ValueError as exc:
        raise DomainError(f"unknown column: {exc}") from None
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in grid.rows:
        writer.writerow([_fmt(row[i]) for i in idx])
    return buf.getvalue()


def atomic_write(path, text):
    """Write ``text`` to ``path`` via a temporary file in the same directory."""
    path = Path(path)
    directory = path.parent if str(path.parent) else Path(".")
    try:
        fd, tmp = tempfile.mkstemp(dir=directory, prefix=f".{path.name}.", suffix=".tmp")
    except OSError as exc:
        raise OSError(f"{path}: cannot write ({exc.strerror})") from None
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except OSError as exc:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise OSError(f"{path}: cannot write ({exc.strerror})") from None


def write_csv(grid, path, columns=None):
    atomic_write(path, render_csv(grid, columns))
