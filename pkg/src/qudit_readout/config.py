"""Scenario files: a YAML tree with unit suffixes in every dimensional key.

Every mapping remembers the source line of each key so validation errors
can point at the offending line.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np
import yaml

from .constants import K_B, MU_B
from .eigen import Explicit, Pure, Thermal
from .errors import ConfigError, QuditReadoutError
from .inout import CavityParams
from .model import (
    CouplingVector,
    DimerConfig,
    ElectroNuclearConfig,
    FieldVector,
    GiantSpinConfig,
    stevens_operator,
)

TASKS = ("spectrum", "field-sweep", "shifts", "sw-check", "qnd", "optimize")


class LineDict(dict):
    line: int = 0

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.lines = {}


class _LineLoader(yaml.SafeLoader):
    pass


def _construct_mapping(loader, node):
    loader.flatten_mapping(node)
    out = LineDict()
    out.line = node.start_mark.line + 1
    for knode, vnode in node.value:
        key = loader.construct_object(knode, deep=True)
        if key in out:
            raise ConfigError(f"duplicate key {key!r}", knode.start_mark.line + 1)
        out[key] = loader.construct_object(vnode, deep=True)
        out.lines[key] = knode.start_mark.line + 1
    return out


_LineLoader.add_constructor(yaml.resolver.BaseResolver.DEFAULT_MAPPING_TAG, _construct_mapping)


class _Section:
    """Typed accessor over one mapping; tracks consumed keys to reject unknown ones."""

    def __init__(self, data, path: str, source: str | None, line: int | None = None):
        if not isinstance(data, LineDict):
            raise ConfigError(f"'{path}' must be a mapping", line, source)
        self.data, self.path, self.source = data, path, source
        self.used: set = set()

    def _err(self, key, msg):
        line = self.data.lines.get(key, self.data.line)
        return ConfigError(f"{self.path}.{key}: {msg}" if key else f"{self.path}: {msg}", line, self.source)

    def has(self, key) -> bool:
        return key in self.data

    def get(self, key, default=None, required=False):
        if key not in self.data:
            if required:
                raise ConfigError(f"{self.path}: missing required key '{key}'", self.data.line, self.source)
            return default
        self.used.add(key)
        return self.data[key]

    def number(self, key, default=None, required=False, positive=False, nonneg=False) -> float:
        v = self.get(key, default, required)
        if v is None:
            return None
        if isinstance(v, str):
            # YAML 1.1 reads 1e-6 (no dot, unsigned exponent) as a string
            try:
                v = float(v)
            except ValueError:
                pass
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise self._err(key, f"expected a number, got {v!r}")
        v = float(v)
        if not np.isfinite(v):
            raise self._err(key, "must be finite")
        if positive and v <= 0:
            raise self._err(key, "must be positive")
        if nonneg and v < 0:
            raise self._err(key, "must be non-negative")
        return v

    def integer(self, key, default=None, required=False, minimum=None) -> int:
        v = self.get(key, default, required)
        if v is None:
            return None
        if isinstance(v, bool) or not isinstance(v, int):
            raise self._err(key, f"expected an integer, got {v!r}")
        if minimum is not None and v < minimum:
            raise self._err(key, f"must be >= {minimum}")
        return v

    def vector(self, key, length=3, default=None, required=False) -> np.ndarray:
        v = self.get(key, default, required)
        if v is None:
            return None
        arr = np.asarray(v, dtype=object)
        ok = arr.shape == (length,) and all(
            isinstance(x, (int, float)) and not isinstance(x, bool) for x in arr
        )
        if not ok:
            raise self._err(key, f"expected a list of {length} numbers")
        return np.asarray(v, dtype=float)

    def matrix_or_vector(self, key, default=None) -> np.ndarray:
        v = self.get(key, default)
        try:
            arr = np.asarray(v, dtype=float)
        except (TypeError, ValueError):
            raise self._err(key, "expected 3 numbers or a 3x3 matrix") from None
        if arr.shape not in ((3,), (3, 3)):
            raise self._err(key, "expected 3 numbers or a 3x3 matrix")
        return arr

    def choice(self, key, options, default=None, required=False):
        v = self.get(key, default, required)
        if v not in options:
            raise self._err(key, f"must be one of {list(options)}, got {v!r}")
        return v

    def sub(self, key, required=True) -> "_Section | None":
        if key not in self.data:
            if required:
                raise ConfigError(f"{self.path}: missing required section '{key}'", self.data.line, self.source)
            return None
        self.used.add(key)
        return _Section(self.data[key], f"{self.path}.{key}", self.source, self.data.lines.get(key))

    def done(self):
        extra = [k for k in self.data if k not in self.used]
        if extra:
            raise self._err(extra[0], "unknown key (check spelling and unit suffix)")


# ---------------------------------------------------------------- scenario


@dataclass
class Scenario:
    name: str
    model: object
    coupling: CouplingVector
    cavity: CavityParams
    eta: float
    n: float
    direction: np.ndarray
    magnitude: float
    preparation: object
    states: object  # tuple of indices or None for all (pure preparation)
    task: str
    task_params: dict = field(default_factory=dict)
    description: str = ""
    source: str | None = None

    @property
    def field(self) -> FieldVector:
        return FieldVector.along(self.direction, self.magnitude)


def _parse_model(sec: _Section):
    kind = sec.choice("kind", ("toy_s1", "giant_spin", "dimer", "electronuclear"), required=True)
    if kind == "toy_s1":
        cfg = GiantSpinConfig(s=1, g=sec.matrix_or_vector("g", [2.0, 2.0, 2.0]),
                              axial_d=sec.number("d_ghz", required=True), zeeman_sign=1)
    elif kind == "giant_spin":
        stevens = {}
        for entry in sec.get("stevens", []) or []:
            if not isinstance(entry, LineDict):
                raise sec._err("stevens", "entries must be mappings with k, q, b_ghz")
            es = _Section(entry, f"{sec.path}.stevens", sec.source)
            k, q = es.integer("k", required=True), es.integer("q", required=True)
            stevens[(k, q)] = es.number("b_ghz", required=True)
            es.done()
        spin = sec.number("spin", required=True, nonneg=True)
        zs = sec.choice("zeeman_sign", (1, -1), default=1)
        cfg = GiantSpinConfig(s=spin, stevens=stevens, g=sec.matrix_or_vector("g", [2.0, 2.0, 2.0]),
                              zeeman_sign=zs, axial_d=sec.number("axial_d_ghz", 0.0))
        for (k, q) in stevens:
            try:
                stevens_operator(k, q, spin)
            except QuditReadoutError as exc:
                raise sec._err("stevens", str(exc)) from None
    elif kind == "dimer":
        if sec.has("j12_ghz") == sec.has("j12_over_kb_k"):
            raise sec._err("", "give exactly one of j12_ghz or j12_over_kb_k")
        j12 = sec.number("j12_ghz") if sec.has("j12_ghz") else sec.number("j12_over_kb_k") * K_B
        theta = sec.number("theta_deg", 0.0)
        if not 0 <= theta < 180:
            raise sec._err("theta_deg", "must lie in [0, 180)")
        cfg = DimerConfig(
            s1=sec.number("s1", 0.5), s2=sec.number("s2", 0.5),
            g1_diag=tuple(sec.vector("g1", required=True)), g2_diag=tuple(sec.vector("g2", required=True)),
            theta=np.deg2rad(theta), j12=j12,
            gj1=sec.number("gj1", 1.0), gj2=sec.number("gj2", 1.0),
            zeeman_sign=sec.choice("zeeman_sign", (1, -1), default=-1),
        )
    else:
        cfg = ElectroNuclearConfig(
            s=sec.number("s", 0.5), i=sec.number("i", required=True),
            g_perp=sec.number("g_perp", required=True), g_par=sec.number("g_par", required=True),
            g_i=sec.number("g_i", 0.0), a_par=sec.number("a_par_ghz", 0.0),
            a_perp=sec.number("a_perp_ghz", 0.0), p=sec.number("p_ghz", 0.0),
            zeeman_sign=sec.choice("zeeman_sign", (1, -1), default=1),
        )
    sec.done()
    return cfg


def _parse_coupling(sec: _Section, model) -> CouplingVector:
    if sec.has("lambda_ghz") == sec.has("brms_t"):
        raise sec._err("", "give exactly one of lambda_ghz or brms_t")
    if sec.has("lambda_ghz"):
        lam = CouplingVector(*sec.vector("lambda_ghz"))
    else:
        lam = CouplingVector(*(MU_B * sec.vector("brms_t")))
    nuclear = sec.get("nuclear", "none")
    if isinstance(nuclear, list):
        lam = CouplingVector(lam.lx, lam.ly, lam.lz, tuple(sec.vector("nuclear")))
    elif nuclear == "scaled":
        lam = lam.with_nuclear_scaled()
    elif nuclear != "none":
        raise sec._err("nuclear", "must be 'none', 'scaled' or a list of 3 numbers (GHz)")
    if lam.nuclear is not None and not isinstance(model, ElectroNuclearConfig):
        raise sec._err("nuclear", "nuclear coupling only applies to electronuclear models")
    sec.done()
    return lam


def _parse_sweep(sec: _Section, unit: str):
    start = sec.number(f"start_{unit}", required=True)
    stop = sec.number(f"stop_{unit}", required=True)
    points = sec.integer("points", required=True, minimum=1)
    if stop < start:
        raise sec._err(f"stop_{unit}", "must not be below start")
    sec.done()
    return start, stop, points


def _parse_task(sec: _Section, source):
    kind = sec.choice("kind", TASKS, required=True)
    params = {}
    if kind == "spectrum":
        params["grid"] = _parse_sweep(sec.sub("grid"), "ghz")
        params["svg"] = bool(sec.get("svg", False))
    elif kind == "field-sweep":
        params["sweep"] = _parse_sweep(sec.sub("sweep"), "t")
        params["probe_ghz"] = sec.number("probe_ghz", None, positive=True)
        params["svg"] = bool(sec.get("svg", False))
    elif kind == "shifts":
        params["at_omega"] = bool(sec.get("at_omega", False))
    elif kind == "sw-check":
        params["n_max"] = sec.integer("n_max", 8, minimum=2)
        params["photons"] = sec.integer("photons", 2, minimum=0)
        params["sweep"] = _parse_sweep(sec.sub("sweep"), "t")
    elif kind == "optimize":
        params.update(_parse_optimize(sec))
    sec.done()
    return kind, params


def _parse_optimize(sec: _Section) -> dict:
    ms = sec.sub("magnitude")
    start = ms.number("start_t", required=True, nonneg=True)
    stop = ms.number("stop_t", required=True, nonneg=True)
    step = ms.number("step_t", required=True, positive=True)
    if stop < start:
        raise ms._err("stop_t", "must not be below start")
    ms.done()
    out = {"magnitude": (start, stop, step)}
    dirs = sec.sub("directions", required=False)
    if dirs is None:
        out["directions"] = None
    else:
        out["directions"] = (dirs.integer("polar_points", required=True, minimum=1),
                             dirs.integer("azimuth_points", required=True, minimum=1))
        dirs.done()
    out["refine_levels"] = sec.integer("refine_levels", 4, minimum=0)
    return out


def parse_scenario(text: str, source: str | None = None) -> Scenario:
    try:
        data = yaml.load(text, Loader=_LineLoader)
    except yaml.MarkedYAMLError as exc:
        line = exc.problem_mark.line + 1 if exc.problem_mark else None
        raise ConfigError(f"YAML syntax error: {exc.problem}", line, source) from None
    except ConfigError as exc:
        raise ConfigError(exc.message, exc.line, source) from None
    if not isinstance(data, LineDict):
        raise ConfigError("top level must be a mapping", 1, source)
    top = _Section(data, "scenario", source)
    name = top.get("name", required=True)
    if not isinstance(name, str) or not name or any(c in name for c in "/\\ "):
        raise top._err("name", "must be a non-empty string without spaces or slashes")
    description = top.get("description", "")
    try:
        model = _parse_model(top.sub("model"))
    except ConfigError:
        raise
    except QuditReadoutError as exc:
        raise ConfigError(f"scenario.model: {exc}", data.lines.get("model"), source) from None
    lam = _parse_coupling(top.sub("coupling"), model)

    cs = top.sub("cavity")
    try:
        cavity = CavityParams(cs.number("omega_ghz", required=True, positive=True),
                              cs.number("gamma1_ghz", required=True, nonneg=True),
                              cs.number("gamma2_ghz", required=True, nonneg=True))
    except ConfigError:
        raise
    except QuditReadoutError as exc:
        raise ConfigError(f"scenario.cavity: {exc}", data.lines.get("cavity"), source) from None
    cs.done()

    ls = top.sub("lineshape", required=False)
    eta, n = 0.0, 1.0
    if ls is not None:
        eta = ls.number("eta_ghz", 0.0, nonneg=True)
        n = ls.number("n_molecules", 1.0)
        if n < 1:
            raise ls._err("n_molecules", "must be >= 1")
        ls.done()

    fs = top.sub("field")
    direction = fs.vector("direction", default=[0.0, 0.0, 1.0])
    if np.linalg.norm(direction) == 0:
        raise fs._err("direction", "must be nonzero")
    magnitude = fs.number("magnitude_t", 0.0)
    fs.done()

    ps = top.sub("preparation", required=False)
    states = None
    preparation = Pure(0)
    if ps is not None:
        kind = ps.choice("kind", ("pure", "thermal", "explicit"), default="pure")
        if kind == "pure":
            st = ps.get("states", "all")
            if st != "all":
                if not isinstance(st, list) or not all(isinstance(x, int) and not isinstance(x, bool) and x >= 0 for x in st):
                    raise ps._err("states", "must be 'all' or a list of non-negative state indices")
                if any(x >= model.dim for x in st):
                    raise ps._err("states", f"state index out of range for dimension {model.dim}")
                states = tuple(st)
        elif kind == "thermal":
            preparation = Thermal(ps.number("temperature_k", required=True, nonneg=True))
        else:
            w = ps.get("weights", required=True)
            if not isinstance(w, list) or len(w) != model.dim:
                raise ps._err("weights", f"expected {model.dim} weights")
            preparation = Explicit(tuple(float(x) for x in w))
        ps.done()

    ts = top.sub("task")
    task, params = _parse_task(ts, source)
    if top.has("optimize"):
        params.setdefault("optimize", _parse_optimize_block(top.sub("optimize")))
    elif task == "optimize":
        params["optimize"] = {k: params[k] for k in ("magnitude", "directions", "refine_levels")}
    top.done()
    return Scenario(name, model, lam, cavity, eta, n, direction, magnitude, preparation, states,
                    task, params, description, source)


def _parse_optimize_block(sec: _Section) -> dict:
    out = _parse_optimize(sec)
    sec.done()
    return out


def load_scenario(path) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}", None, str(path)) from None
    return parse_scenario(text, str(path))


def bundled_scenarios() -> dict[str, str]:
    """name -> YAML text of every scenario shipped with the package."""
    out = {}
    for entry in sorted(resources.files("qudit_readout.scenarios").iterdir(), key=lambda p: p.name):
        if entry.name.endswith(".yaml"):
            out[entry.name[:-5]] = entry.read_text(encoding="utf-8")
    return out


def resolve_scenario(ref: str) -> Scenario:
    """A path to a YAML file, or the name of a bundled scenario."""
    path = Path(ref)
    if path.exists():
        return load_scenario(path)
    bundled = bundled_scenarios()
    if ref in bundled:
        return parse_scenario(bundled[ref], f"<bundled:{ref}>")
    raise ConfigError(f"no such file or bundled scenario: {ref}", None, None)
