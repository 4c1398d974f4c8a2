import json

import numpy as np
import pytest

from wishart_traces.config import ConfigError, RunConfig, load_config, parse_matrix


def test_parse_matrix_forms():
    M = parse_matrix([[[1, 0], [0, 2]], [[0, -2], 3]])
    assert np.array_equal(M, np.array([[1, 2j], [-2j, 3]]))
    assert np.array_equal(parse_matrix("identity", 2), np.eye(2))
    with pytest.raises(ConfigError):
        parse_matrix([[1, 2]])
    with pytest.raises(ConfigError):
        parse_matrix("identity")


def test_roundtrip_model(tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"sigmas": [[[2, 0], [0, 1]], "identity"], "p": [3, 4], "m": [1, 2]}))
    cfg = load_config(path)
    model = cfg.model()
    assert model.N == 2 and model.shapes == (3.0, 4.0)
    assert np.array_equal(model.sigmas[0], np.diag([2.0, 1.0]))
    assert cfg.moments()(2) == 2


def test_identity_model_from_n():
    model = RunConfig.from_dict({"N": 3, "p": [2]}).model()
    assert np.array_equal(model.sigmas[0], np.eye(3))


@pytest.mark.parametrize(
    "data",
    [
        {"sigmas": [[[1, 2], [0, 1]]], "p": [1]},  # not Hermitian
        {"sigmas": [[[1, 0], [0, -1]]], "p": [1]},  # not PSD
        {"N": 2, "sigmas": [[[1]]], "p": [1]},  # wrong size
        {"N": 2, "p": [0]},
        {"N": 2, "p": [1], "extra": 1},
        {"N": -1},
        [],
    ],
)
def test_invalid(data):
    with pytest.raises(ConfigError):
        RunConfig.from_dict(data)


def test_shape_count_mismatch():
    cfg = RunConfig.from_dict({"sigmas": ["identity"], "N": 2, "p": [1, 2]})
    with pytest.raises(ConfigError):
        cfg.model()


def test_bad_json(tmp_path):
    path = tmp_path / "c.json"
    path.write_text("{")
    with pytest.raises(ConfigError):
        load_config(path)
