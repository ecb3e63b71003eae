"""Experiment configuration: JSON schema, defaults and (de)serialization.

Every field has a default, so ``{}`` is a valid configuration. Parsing
validates structure with ``jsonschema`` and ranges by constructing the domain
objects; failures are reported as :class:`~oef.errors.ConfigError` carrying a JSON path.
"""

import copy
import json
from dataclasses import dataclass, field

import jsonschema

from .errors import ConfigError, DomainError
from .montecarlo import PER_QUESTION, STATE_INTEGRAL
from .rewards import InstructorParams, StudentTypeParams
from .stackelberg import STEADY, TRANSIENT, StrategyGrid

_num = {"type": "number"}
_pos_int = {"type": "integer", "minimum": 1}
_num_list = {"type": "array", "items": _num, "minItems": 1}
_int_list = {"type": "array", "items": {"type": "integer", "minimum": 0}, "minItems": 1}

SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "chain": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"M": _pos_int, "T": _num},
        },
        "types": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["alpha", "m"],
                "properties": {"alpha": _num, "m": {"type": "integer", "minimum": 0}, "count": _pos_int, "bias_total": _num},
            },
        },
        "instructor": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"beta": _num, "delta": _num},
        },
        "grids": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"instructor_rates": _num_list, "student_rates": _num_list},
        },
        "error_curve": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"alpha": _num, "m": {"type": "integer", "minimum": 0}, "lambda": _num, "mu": _num, "T_values": _num_list},
        },
        "sweep": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"alphas": _num_list, "m_values": _int_list},
        },
        "bias_study": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "alpha1": _num_list,
                "alpha2": _num_list,
                "m_values": _int_list,
                "bias_cases": {"type": "array", "minItems": 1, "items": {"type": "array", "items": _num, "minItems": 2, "maxItems": 2}},
                "student_rates": _num_list,
            },
        },
        "simulate": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "lambdas": _num_list,
                "mu": _num,
                "replications": _pos_int,
                "reward_mode": {"enum": [STATE_INTEGRAL, PER_QUESTION]},
            },
        },
        "mode": {"enum": [STEADY, TRANSIENT]},
        "method": {"enum": ["milp", "pure"]},
        "seed": {"type": "integer", "minimum": 0, "maximum": 2**64 - 1},
    },
}

DEFAULTS = {
    "chain": {"M": 100, "T": 11.0},
    "types": [
        {"alpha": 0.1, "m": 6, "count": 500, "bias_total": 0.99},
        {"alpha": 0.8, "m": 6, "count": 500, "bias_total": 0.01},
    ],
    "instructor": {"beta": 0.5, "delta": 0.9},
    "grids": {
        "instructor_rates": [1, 2, 3, 4, 5, 6, 7, 8, 9, 10],
        "student_rates": [1, 4, 5, 6, 7, 8, 10],
    },
    "error_curve": {"alpha": 0.3, "m": 3, "lambda": 1.0, "mu": 1.0, "T_values": list(range(1, 26))},
    "sweep": {"alphas": [0.1, 0.2, 0.3, 0.6, 0.8, 0.9], "m_values": [2, 6, 10]},
    "bias_study": {
        "alpha1": [0.01, 0.1, 0.2],
        "alpha2": [0.8, 0.9, 0.99],
        "m_values": [2, 6, 10],
        "bias_cases": [[0.01, 0.99], [0.99, 0.01]],
        # 0 and 2 let a type opt out or answer sparingly
        "student_rates": [0, 1, 2, 4, 5, 6, 7, 8, 10],
    },
    "simulate": {"lambdas": [4.0, 1.0], "mu": 2.0, "replications": 10000, "reward_mode": STATE_INTEGRAL},
    "mode": TRANSIENT,
    "method": "pure",
    "seed": 20240101,
}


@dataclass(frozen=True)
class ExperimentConfig:
    """Validated configuration; ``raw`` is the fully defaulted JSON document."""

    raw: dict = field(repr=False)

    @property
    def M(self):
        return self.raw["chain"]["M"]

    @property
    def T(self):
        return float(self.raw["chain"]["T"])

    @property
    def types(self):
        raw = self.raw["types"]
        even = 1.0 / len(raw)
        return tuple(StudentTypeParams(t["alpha"], t["m"], t.get("count", 1), t.get("bias_total", even)) for t in raw)

    @property
    def instructor(self):
        ins = self.raw["instructor"]
        return InstructorParams(ins["beta"], ins["delta"], InstructorParams.budget_for(self.types))

    @property
    def grid(self):
        g = self.raw["grids"]
        return StrategyGrid(tuple(g["instructor_rates"]), tuple(g["student_rates"]))

    @property
    def mode(self):
        return self.raw["mode"]

    @property
    def method(self):
        return self.raw["method"]

    @property
    def seed(self):
        return self.raw["seed"]

    def block(self, name):
        return self.raw[name]

    def with_overrides(self, **kw):
        """Copy with top-level keys (``mode``, ``method``, ``seed``) replaced; ``None`` leaves a key as is."""
        raw = copy.deepcopy(self.raw)
        raw.update({k: v for k, v in kw.items() if v is not None})
        return parse_config(raw)

    def to_dict(self):
        return copy.deepcopy(self.raw)

    def to_json(self):
        return json.dumps(self.raw, indent=2, sort_keys=True) + "\n"


def _merge(defaults, given):
    out = copy.deepcopy(defaults)
    for key, value in given.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = _merge(out[key], value)
        else:
            out[key] = copy.deepcopy(value)
    return out


def _semantic_checks(cfg):
    raw = cfg.raw
    try:
        types = cfg.types
    except DomainError as exc:
        raise ConfigError(str(exc), "$.types") from None
    for i, t in enumerate(types):
        if t.m > cfg.M:
            raise ConfigError(f"m={t.m} exceeds M={cfg.M}", f"$.types[{i}].m")
    if abs(sum(t.bias_total for t in types) - 1.0) > 1e-9:
        raise ConfigError("bias_total values must sum to 1", "$.types")
    if not cfg.T > 0:
        raise ConfigError("T must be positive", "$.chain.T")
    for path, thunk in (("$.instructor", lambda: cfg.instructor), ("$.grids", lambda: cfg.grid)):
        try:
            thunk()
        except DomainError as exc:
            raise ConfigError(str(exc), path) from None
    ec = raw["error_curve"]
    if not 0 < ec["alpha"] < 1:
        raise ConfigError("alpha must lie in (0, 1)", "$.error_curve.alpha")
    if ec["m"] > cfg.M:
        raise ConfigError("m exceeds M", "$.error_curve.m")
    if not ec["mu"] > 0 or not ec["lambda"] >= 0:
        raise ConfigError("need mu > 0 and lambda >= 0", "$.error_curve")
    if any(not t > 0 for t in ec["T_values"]):
        raise ConfigError("horizons must be positive", "$.error_curve.T_values")
    for key in ("alphas",):
        if any(not 0 < a < 1 for a in raw["sweep"][key]):
            raise ConfigError("alpha must lie in (0, 1)", f"$.sweep.{key}")
    bs = raw["bias_study"]
    for key in ("alpha1", "alpha2"):
        if any(not 0 < a < 1 for a in bs[key]):
            raise ConfigError("alpha must lie in (0, 1)", f"$.bias_study.{key}")
    for i, case in enumerate(bs["bias_cases"]):
        if any(c < 0 for c in case) or abs(sum(case) - 1.0) > 1e-9:
            raise ConfigError("bias pair must be non-negative and sum to 1", f"$.bias_study.bias_cases[{i}]")
    for key, values in (("sweep.m_values", raw["sweep"]["m_values"]), ("bias_study.m_values", bs["m_values"])):
        if max(values) > cfg.M:
            raise ConfigError("m exceeds M", f"$.{key}")
    try:
        StrategyGrid(tuple(raw["grids"]["instructor_rates"]), tuple(bs["student_rates"]))
    except DomainError as exc:
        raise ConfigError(str(exc), "$.bias_study.student_rates") from None
    sim = raw["simulate"]
    if len(sim["lambdas"]) != len(types):
        raise ConfigError("need one simulated rate per type", "$.simulate.lambdas")
    if any(not v >= 0 for v in sim["lambdas"]) or not sim["mu"] > 0:
        raise ConfigError("need mu > 0 and lambdas >= 0", "$.simulate")


def parse_config(doc):
    """Validate a JSON document (dict) and fill in defaults."""
    if not isinstance(doc, dict):
        raise ConfigError("configuration must be a JSON object")
    validator = jsonschema.Draft7Validator(SCHEMA)
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        raise ConfigError(err.message, err.json_path)
    cfg = ExperimentConfig(_merge(DEFAULTS, doc))
    _semantic_checks(cfg)
    return cfg


def load_config(path):
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc}") from None
    return parse_config(doc)


def default_config():
    return parse_config({})
