"""Scenario files for the command line.

A scenario is a flat JSON object::

    {"model": "sir", "beta": 0.0004, "gamma": 0.02, "n": 998, "a": 2,
     "T": 365, "method": "euler_relax", "P": 100, "K": 5, "M": 0.02}

A scenario *set* (for ``compare``) holds the shared fields at top level and
the varying ones in ``runs``; each run is merged over the shared fields.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Optional

from .analysis import Method
from .models import InvalidParamsError, ModelSpec, Variant

__all__ = [
    "ConfigError",
    "ScenarioConfig",
    "load_json",
    "load_scenario",
    "load_scenario_set",
    "preset_path",
    "list_presets",
]

MODEL_FIELDS = ("model", "beta", "gamma", "sigma", "n", "a", "T", "N")
RUN_FIELDS = ("method", "P", "K", "M", "allow_violation")
KNOWN_FIELDS = frozenset(MODEL_FIELDS + RUN_FIELDS + ("label",))

_RELAX = {Method.EULER_RELAX, Method.RK4_RELAX}


class ConfigError(ValueError):
    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


def _number(d, key, required=True):
    if key not in d or d[key] is None:
        if required:
            raise ConfigError(key, "is required")
        return None
    v = d[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(key, f"must be a number, got {v!r}")
    return float(v)


def _integer(d, key, minimum, required=True):
    if key not in d or d[key] is None:
        if required:
            raise ConfigError(key, "is required")
        return None
    v = d[key]
    if isinstance(v, float) and v.is_integer():
        v = int(v)
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(key, f"must be an integer, got {v!r}")
    if v < minimum:
        raise ConfigError(key, f"must be >= {minimum}, got {v}")
    return v


@dataclass(frozen=True)
class ScenarioConfig:
    model: str
    beta: float
    gamma: float
    n: float
    a: float
    T: float
    method: str
    P: int
    sigma: Optional[float] = None
    N: Optional[float] = None
    K: Optional[int] = None
    M: Optional[float] = None
    allow_violation: bool = False
    label: Optional[str] = None

    @classmethod
    def from_mapping(cls, d) -> "ScenarioConfig":
        if not isinstance(d, dict):
            raise ConfigError("config", "must be a JSON object")
        unknown = sorted(set(d) - KNOWN_FIELDS)
        if unknown:
            raise ConfigError(unknown[0], "unknown field")

        try:
            variant = Variant(d.get("model"))
        except ValueError:
            choices = ", ".join(v.value for v in Variant)
            raise ConfigError("model", f"must be one of {choices}, got {d.get('model')!r}") from None
        try:
            method = Method(d.get("method"))
        except ValueError:
            choices = ", ".join(m.value for m in Method)
            raise ConfigError("method", f"must be one of {choices}, got {d.get('method')!r}") from None

        values = {k: _number(d, k) for k in ("beta", "gamma", "n", "a", "T")}
        values["N"] = _number(d, "N", required=False)
        sigma = _number(d, "sigma", required=variant is not Variant.SIR)
        if variant is Variant.SIR and sigma is not None:
            raise ConfigError("sigma", "is not used by model sir")
        P = _integer(d, "P", 2)

        needs_K = method.is_relaxation
        K = _integer(d, "K", 1, required=needs_K)
        M = _number(d, "M", required=method in _RELAX)
        if method is Method.LINEARIZATION and M not in (None, 0.0):
            raise ConfigError("M", "linearization fixes M = 0")
        if not needs_K and (K is not None or M is not None):
            # harmless extras for methods that do not iterate
            K = M = None
        if method in _RELAX and M < 0:
            raise ConfigError("M", "must be >= 0")
        if not method.is_relaxation and variant is not Variant.SIR:
            raise ConfigError("method", f"{method.value} is only defined for model sir")

        allow = d.get("allow_violation", False)
        if not isinstance(allow, bool):
            raise ConfigError("allow_violation", "must be true or false")
        label = d.get("label")
        if label is not None and not isinstance(label, str):
            raise ConfigError("label", "must be a string")

        cfg = cls(model=variant.value, method=method.value, P=P, sigma=sigma, K=K, M=M,
                  allow_violation=allow, label=label, **values)
        cfg.to_model()
        return cfg

    def to_model(self) -> ModelSpec:
        kw = dict(beta=self.beta, gamma=self.gamma, n=self.n, a=self.a, T=self.T, N=self.N)
        try:
            if self.model == Variant.SIR.value:
                return ModelSpec.sir(**kw)
            if self.model == Variant.SIRD.value:
                return ModelSpec.sird(sigma=self.sigma, **kw)
            return ModelSpec.sir_mortality(sigma=self.sigma, **kw)
        except InvalidParamsError as exc:
            raise ConfigError(exc.field, str(exc).split(": ", 1)[-1]) from None

    def model_key(self):
        return (self.model, self.beta, self.gamma, self.sigma, self.n, self.a, self.T)


def load_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ConfigError("config", f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError("config", f"{path} is not valid JSON ({exc.msg}, line {exc.lineno})") from None


def load_scenario(path) -> ScenarioConfig:
    return ScenarioConfig.from_mapping(load_json(path))


def load_scenario_set(path):
    """Return the merged run mappings of a scenario set, in file order.

    Runs are returned unvalidated so that one bad run can be reported
    without discarding the others.
    """
    data = load_json(path)
    if not isinstance(data, dict) or not isinstance(data.get("runs"), list) or not data["runs"]:
        raise ConfigError("runs", "a scenario set needs a non-empty 'runs' list")
    base = {k: v for k, v in data.items() if k != "runs"}
    merged = []
    for i, run in enumerate(data["runs"]):
        if not isinstance(run, dict):
            raise ConfigError(f"runs[{i}]", "must be a JSON object")
        merged.append({**base, **run})
    keys = {tuple(m.get(k) for k in MODEL_FIELDS) for m in merged}
    if len(keys) != 1:
        raise ConfigError("runs", "all runs in a set must share the model and its parameters")
    return merged


def preset_path(name: str) -> Path:
    ref = resources.files("sirelax") / "presets" / f"{name}.json"
    if not ref.is_file():
        raise ConfigError("preset", f"no preset named {name!r} (available: {', '.join(list_presets())})")
    return Path(str(ref))


def list_presets():
    folder = resources.files("sirelax") / "presets"
    return sorted(p.name[:-5] for p in folder.iterdir() if p.name.endswith(".json"))
