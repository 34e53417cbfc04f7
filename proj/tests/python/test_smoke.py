import math
import os
from pathlib import Path

import numpy as np
import pytest

import skewless as sk

CONFIGS = Path(os.environ.get("SKEWLESS_CONFIG_DIR", Path(__file__).resolve().parents[2] / "configs"))


def test_client_server_threshold():
    v = sk.check_theorem2(sk.client_server(0.7), sk.default_params(1.0))
    assert v["stable"]
    assert v["tau_max"] == pytest.approx(1.27173, rel=1e-4)


def test_loop_unstable_at_one_second():
    v = sk.check_theorem2(sk.leader_loop(0.7), sk.default_params(1.0))
    assert not v["stable"]
    assert v["tau_max"] == pytest.approx(0.8478, rel=1e-3)


def test_topology_free_bound():
    assert sk.tau_bound_topology_free(sk.default_params(1.0), 0.7) == pytest.approx(0.63586, rel=1e-4)


def test_topology_roundtrip():
    t = sk.Topology(3, [sk.Edge(1, 0, 0.5), sk.Edge(2, 1, 0.5)], np.array([1.0, 1 + 1e-5, 1 - 2e-5]))
    assert t.n == 3
    assert t.leader == 0
    lap = np.asarray(t.laplacian)
    assert np.allclose(lap.sum(axis=1), 0.0)


def test_bad_topology_raises():
    with pytest.raises(ValueError):
        sk.Topology(2, [sk.Edge(0, 5)])


def test_fixed_point_leader():
    t = sk.client_server(0.7)
    x_star, r_star = sk.predict_fixed_point(t, sk.default_params(0.5), np.array([3.0, 1.0]), np.array([1.0, 1.0]))
    assert x_star == 3.0
    assert r_star == 1.0


def test_h2_gradient_matches_norm():
    t = sk.experiment6_topology("jitter")
    q = sk.default_params(0.5)
    f, *_ = sk.h2_gradient(t, q)
    assert f == pytest.approx(sk.h2_norm(t, q), rel=1e-12)


def test_optimize_descends():
    params, f, rho, history = sk.optimize(sk.experiment6_topology("jitter"), sk.default_params(0.5), max_iter=50)
    assert f < history[0]
    assert all(b <= a for a, b in zip(history, history[1:]))
    assert rho < 0.999


def test_simulate_config():
    trace = sk.simulate(str(CONFIGS / "exp1_client_server.yaml"), seed=3)
    offsets = np.asarray(trace["offsets_us"])
    assert offsets.ndim == 2 and offsets.shape[1] == 2
    assert math.isfinite(trace["sqrt_sn_us"])


def test_simulate_preset_wheel():
    trace = sk.simulate_preset("exp2", steps=400, wheel_k=2)
    assert trace["sqrt_sn_us"] > 0


def test_missing_config_raises():
    with pytest.raises(Exception):
        sk.load_config(str(CONFIGS / "does_not_exist.yaml"))


def test_bad_config_raises_config_error(tmp_path):
    bad = tmp_path / "bad.yaml"
    bad.write_text("topology:\n  nodes: 2\n  edges:\n    - [2, 7]\n")
    with pytest.raises(sk.ConfigError, match="bad.yaml:4"):
        sk.load_config(str(bad))
