"""Run configuration loaded from a single JSON file."""

from dataclasses import dataclass, field, fields, replace
import json
import math

from .curve import Differential, curve_from_json, sextic_curve
from .errors import ConfigError
from .lattice import IntMatrix
from .moduli import ComponentSpec
from .periods import Cycle, builtin_cycles
from . import sextic

FORMATS = ("json", "csv", "obj")
MATRIX_NAMES = ("G1", "G2", "G1_prime", "G2_prime", "R1", "R2", "minus_I")
_DEFAULT_MATRICES = {
    "G1": sextic.G1, "G2": sextic.G2, "G1_prime": sextic.G1_PRIME,
    "G2_prime": sextic.G2_PRIME, "R1": sextic.R1, "R2": sextic.R2, "minus_I": sextic.MINUS_I,
}
DEFAULT_MODULI = (
    ComponentSpec("hyperelliptic", 5, r=2),
    ComponentSpec("trigonal", 4),
    ComponentSpec("d_gonal", 7, d=4),
    ComponentSpec("holomorphic", 4),
)


@dataclass(frozen=True)
class MeshOptions:
    rays: int = 12
    radii: int = 8
    radius: float = 2.0
    theta: float = 0.0


@dataclass(frozen=True)
class RunConfig:
    precision: float = 1e-12
    tol_algebraic: float = 1e-12
    tol_numeric: float = 1e-8
    max_height: int = 10 ** 6
    output_path: str = None
    output_format: str = "json"
    roots: tuple = None
    differentials: tuple = None
    cycles: tuple = None
    b1: complex = 1
    b2: complex = 1
    property_p_bound: int = 10
    associate_thetas: tuple = (math.pi / 6, math.pi / 3, 1.0)
    matrices: dict = field(default_factory=dict)
    mesh: MeshOptions = MeshOptions()
    moduli: tuple = DEFAULT_MODULI

    def __post_init__(self):
        if not 0 < self.tol_algebraic <= self.tol_numeric:
            raise ConfigError("need 0 < tol_algebraic <= tol_numeric")
        if not 0 < self.precision <= self.tol_numeric:
            raise ConfigError("need 0 < precision <= tol_numeric")
        if self.output_format not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}")
        if self.max_height < 1:
            raise ConfigError("max_height must be positive")
        unknown = set(self.matrices) - set(MATRIX_NAMES)
        if unknown:
            raise ConfigError(f"unknown matrix overrides {sorted(unknown)}")

    def curve(self):
        if self.roots is None:
            return sextic_curve()
        return curve_from_json({"roots": self.roots})

    def diffs(self):
        return tuple(self.differentials) if self.differentials else sextic.PHI

    def cycle_list(self, curve=None):
        if self.cycles:
            return list(self.cycles)
        return builtin_cycles(curve or self.curve())

    def matrix(self, name):
        if name in self.matrices:
            return self.matrices[name]
        return IntMatrix(_DEFAULT_MATRICES[name])

    def with_overrides(self, **kw):
        kw = {k: v for k, v in kw.items() if v is not None}
        try:
            return replace(self, **kw)
        except TypeError as exc:
            raise ConfigError(str(exc)) from None

    def to_json(self):
        out = {
            "precision": self.precision, "tol_algebraic": self.tol_algebraic,
            "tol_numeric": self.tol_numeric, "max_height": self.max_height,
            "b1": _complex_json(self.b1), "b2": _complex_json(self.b2),
            "property_p_bound": self.property_p_bound,
            "associate_thetas": list(self.associate_thetas),
            "mesh": {f.name: getattr(self.mesh, f.name) for f in fields(MeshOptions)},
        }
        if self.roots is not None:
            out["curve"] = {"roots": [list(r) for r in self.roots]}
        if self.differentials:
            out["differentials"] = [d.to_json() for d in self.differentials]
        if self.cycles:
            out["cycles"] = [c.to_json() for c in self.cycles]
        if self.matrices:
            out["matrices"] = {k: v.to_json() for k, v in self.matrices.items()}
        out["moduli"] = [s.to_json() for s in self.moduli]
        return out


def _complex_json(v):
    v = complex(v)
    return v.real if v.imag == 0 else [v.real, v.imag]


def _complex(v):
    if isinstance(v, (list, tuple)):
        return complex(*v)
    return complex(v)


_SCALARS = {"precision": float, "tol_algebraic": float, "tol_numeric": float,
            "max_height": int, "property_p_bound": int}


def config_from_dict(obj):
    if not isinstance(obj, dict):
        raise ConfigError("config must be a JSON object")
    known = set(_SCALARS) | {"curve", "differentials", "cycles", "b1", "b2", "matrices",
                             "associate_thetas", "mesh", "moduli", "output"}
    unknown = set(obj) - known
    if unknown:
        raise ConfigError(f"unknown config keys {sorted(unknown)}")
    kw = {}
    try:
        for key, conv in _SCALARS.items():
            if key in obj:
                kw[key] = conv(obj[key])
        if "curve" in obj:
            roots = tuple(tuple(float(x) for x in r) for r in obj["curve"]["roots"])
            curve_from_json({"roots": roots})
            kw["roots"] = roots
        if "differentials" in obj:
            kw["differentials"] = tuple(Differential.from_json(d) for d in obj["differentials"])
        if "cycles" in obj:
            kw["cycles"] = tuple(Cycle.from_json(c) for c in obj["cycles"])
        for key in ("b1", "b2"):
            if key in obj:
                kw[key] = _complex(obj[key])
        if "matrices" in obj:
            kw["matrices"] = {k: IntMatrix.from_json(v) for k, v in obj["matrices"].items()}
        if "associate_thetas" in obj:
            kw["associate_thetas"] = tuple(float(t) for t in obj["associate_thetas"])
        if "mesh" in obj:
            kw["mesh"] = MeshOptions(**obj["mesh"])
        if "moduli" in obj:
            kw["moduli"] = tuple(ComponentSpec.from_json(s) for s in obj["moduli"])
        if "output" in obj:
            kw["output_path"] = obj["output"].get("path")
            kw["output_format"] = obj["output"].get("format", "json")
    except ConfigError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"invalid config: {exc}") from exc
    return RunConfig(**kw)


def load_config(path):
    if path is None:
        return RunConfig()
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return config_from_dict(obj)
