import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oef.config import DEFAULTS, default_config, load_config, parse_config
from oef.errors import ConfigError


def test_empty_document_gives_defaults():
    cfg = parse_config({})
    assert cfg.M == 100 and cfg.T == 11.0
    assert cfg.grid.instructor_rates == tuple(float(v) for v in range(1, 11))
    assert cfg.grid.student_rates == (1.0, 4.0, 5.0, 6.0, 7.0, 8.0, 10.0)
    assert cfg.instructor.beta == 0.5 and cfg.instructor.delta == 0.9
    assert [t.count for t in cfg.types] == [500, 500]
    assert cfg.instructor.budget == 500 * 6 * 2
    assert cfg.mode == "transient"


def test_round_trip():
    cfg = default_config()
    again = parse_config(json.loads(cfg.to_json()))
    assert again.to_dict() == cfg.to_dict()
    assert again.to_json() == cfg.to_json()


@settings(max_examples=30, deadline=None)
@given(M=st.integers(10, 200), T=st.floats(0.5, 50), beta=st.floats(0.01, 0.99),
       alphas=st.lists(st.floats(0.01, 0.99), min_size=1, max_size=3))
def test_round_trip_property(M, T, beta, alphas):
    doc = {"chain": {"M": M, "T": T}, "instructor": {"beta": beta},
           "types": [{"alpha": a, "m": 2} for a in alphas],
           "simulate": {"lambdas": [1.0] * len(alphas)}}
    cfg = parse_config(doc)
    assert parse_config(json.loads(cfg.to_json())).to_dict() == cfg.to_dict()
    assert sum(t.bias_total for t in cfg.types) == pytest.approx(1.0)


def test_partial_blocks_merge_with_defaults():
    cfg = parse_config({"chain": {"T": 4}})
    assert cfg.M == 100 and cfg.T == 4.0


def test_overrides():
    cfg = default_config().with_overrides(mode="steady", method="milp", seed=5)
    assert (cfg.mode, cfg.method, cfg.seed) == ("steady", "milp", 5)
    assert default_config().with_overrides(mode=None).mode == "transient"


@pytest.mark.parametrize("doc,path", [
    ({"chain": {"M": 0}}, "$.chain.M"),
    ({"chain": {"M": "100"}}, "$.chain.M"),
    ({"types": [{"alpha": 0.3}]}, "$.types[0]"),
    ({"unknown": 1}, "$"),
    ({"mode": "sometimes"}, "$.mode"),
    ({"grids": {"student_rates": []}}, "$.grids.student_rates"),
    ({"simulate": {"replications": 0}}, "$.simulate.replications"),
])
def test_schema_errors_carry_path(doc, path):
    with pytest.raises(ConfigError) as exc:
        parse_config(doc)
    assert exc.value.path == path
    assert str(exc.value).startswith(path)


@pytest.mark.parametrize("doc,path", [
    ({"types": [{"alpha": 1.5, "m": 2}], "simulate": {"lambdas": [1]}}, "$.types"),
    ({"types": [{"alpha": 0.5, "m": 200}], "simulate": {"lambdas": [1]}}, "$.types[0].m"),
    ({"types": [{"alpha": 0.5, "m": 2, "bias_total": 0.4}], "simulate": {"lambdas": [1]}}, "$.types"),
    ({"chain": {"T": 0}}, "$.chain.T"),
    ({"instructor": {"delta": 1.0}}, "$.instructor"),
    ({"grids": {"instructor_rates": [2, 1]}}, "$.grids"),
    ({"error_curve": {"alpha": 0}}, "$.error_curve.alpha"),
    ({"sweep": {"m_values": [2, 500]}}, "$.sweep.m_values"),
    ({"bias_study": {"bias_cases": [[0.5, 0.6]]}}, "$.bias_study.bias_cases[0]"),
    ({"simulate": {"lambdas": [1.0]}}, "$.simulate.lambdas"),
])
def test_semantic_errors_carry_path(doc, path):
    with pytest.raises(ConfigError) as exc:
        parse_config(doc)
    assert exc.value.path == path


def test_load_from_file(tmp_path):
    f = tmp_path / "cfg.json"
    f.write_text(json.dumps({"chain": {"T": 3}}))
    assert load_config(f).T == 3.0


@pytest.mark.parametrize("text", ["{not json", "[1, 2]"])
def test_load_rejects_bad_documents(tmp_path, text):
    f = tmp_path / "cfg.json"
    f.write_text(text)
    with pytest.raises(ConfigError):
        load_config(f)


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "absent.json")


def test_defaults_are_not_mutated():
    cfg = parse_config({"chain": {"M": 50}})
    assert cfg.M == 50 and DEFAULTS["chain"]["M"] == 100
