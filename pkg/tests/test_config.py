import json

import numpy as np
import pytest

from polyens import ConfigError
from polyens.config import (
    build_ensemble,
    build_measure,
    build_profile,
    build_table,
    config_hash,
    load_config,
)


def test_named_measure_config():
    m = build_measure({"kind": "named", "name": "chebyshev-arcsine", "nodes": 32})
    assert len(m) == 32
    assert np.isclose(m.total_mass, 1.0)
    with pytest.raises(ConfigError):
        build_measure({"kind": "named", "name": "lebesgue"})
    with pytest.raises(ConfigError):
        build_measure({"kind": "mystery"})
    with pytest.raises(ConfigError):
        build_measure(["not", "a", "dict"])


def test_atoms_measure_config_real_and_complex():
    m = build_measure({"kind": "atoms", "points": [0.0, 1.0], "weights": [0.5, 0.5]})
    assert not m.is_complex
    mc = build_measure(
        {"kind": "atoms", "points": [[1.0, 0.0], [0.0, 1.0]], "weights": [0.5, 0.5]}
    )
    assert mc.is_complex
    assert mc.points[1] == 1.0j


def test_grid_measure_config():
    x = np.linspace(-1, 1, 11)
    m = build_measure({"kind": "grid", "points": x.tolist(), "density": np.ones(11).tolist()})
    assert np.isclose(m.total_mass, 2.0)


def test_op_table_config_default_b_is_zero():
    t = build_table({"form": "op", "a": [0.5, 0.5, 0.5], "N": 2})
    assert t.coeff(1, 1) == 0.0
    assert t.coeff(0, 1) == 0.5
    assert t.N == 2


def test_banded_table_config():
    t = build_table(
        {"form": "banded", "q": 2, "c": [[0, -1, 1.0], [1, -1, 0.5], [2, 2, 0.25]], "N": 2}
    )
    assert t.q == 2
    assert t.coeff(2, 0) == 0.25
    # K inferred from the largest row index
    assert t.top == 2


def test_banded_table_complex_entries():
    t = build_table({"form": "banded", "q": 0, "c": [[0, -1, 0.0, 1.0], [1, -1, 1.0]], "N": 1})
    assert t.is_complex
    assert t.coeff(0, 1) == 1.0j


def test_table_config_errors():
    with pytest.raises(ConfigError):
        build_table({"form": "hessenberg"})
    with pytest.raises(ConfigError):
        build_table({"form": "op"})  # no 'a'
    with pytest.raises(ConfigError):
        build_table({"form": "banded", "q": 1, "c": [[0, 5, 1.0]]})  # step out of band
    with pytest.raises(ConfigError):
        build_table({"form": "banded", "q": 1, "c": []})


def test_classical_ensemble_configs():
    for name, herm in (("gue", True), ("chebyshev", True), ("circle", True)):
        ens = build_ensemble({"classical": name, "N": 4, "nodes": 64})
        assert ens.N == 4
        assert ens.hermitian == herm
    with pytest.raises(ConfigError):
        build_ensemble({"classical": "goe", "N": 4})
    with pytest.raises(ConfigError):
        build_ensemble({"classical": "gue"})


def test_measure_plus_N_ensemble_config():
    cfg = {
        "measure": {"kind": "named", "name": "chebyshev-arcsine", "nodes": 48},
        "N": 3,
        "pad": 4,
    }
    ens = build_ensemble(cfg)
    assert ens.N == 3
    assert ens.biorthogonality_defect() < 1e-9
    assert ens.table.pad == 4


def test_measure_plus_table_ensemble_defaults_to_table_N():
    cfg = {
        "measure": {"kind": "named", "name": "uniform-circle", "n": 16},
        "table": {"form": "banded", "q": 0, "c": [[k, -1, 1.0] for k in range(6)]},
    }
    ens = build_ensemble(cfg)
    assert ens.N == 6
    assert ens.hermitian


def test_tilted_ensemble_config():
    cfg = {
        "base": {"classical": "chebyshev", "N": 2, "nodes": 16, "pad": 2},
        "tilt": [[0.05, 0.0], [0.0, 0.05]],
    }
    ens = build_ensemble(cfg)
    assert not ens.hermitian
    assert ens.biorthogonality_defect() < 1e-10


def test_profile_configs():
    g = build_profile({"kind": "gue"})
    assert np.isclose(g(-1, 0.25), 0.5)
    p = build_profile({"kind": "op", "a": "sqrt", "b": 0.5})
    assert np.isclose(p(0, 0.9), 0.5)
    pw = build_profile(
        {"kind": "op", "a": {"s": [0.0, 1.0], "value": [1.0, 3.0]}}
    )
    assert np.isclose(pw(-1, 0.5), 2.0)
    b = build_profile({"kind": "banded", "funcs": {"-1": 1.0, "0": 0.0, "1": "sqrt", "2": 0.25}})
    assert b.q == 2
    with pytest.raises(ConfigError):
        build_profile({"kind": "op"})  # missing 'a'
    with pytest.raises(ConfigError):
        build_profile({"kind": "op", "a": [1, 2, 3]})  # bad function spec
    with pytest.raises(ConfigError):
        build_profile({"kind": "banded", "funcs": {"0": 1.0}})  # no up step
    with pytest.raises(ConfigError):
        build_profile({"kind": "semicircle"})


def test_config_hash_is_order_insensitive():
    h1 = config_hash({"a": 1, "b": [1, 2]})
    h2 = config_hash({"b": [1, 2], "a": 1})
    assert h1 == h2
    assert len(h1) == 12
    assert h1 != config_hash({"a": 2, "b": [1, 2]})


def test_load_config_inline_file_and_errors(tmp_path):
    assert load_config('{"N": 3}') == {"N": 3}
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps({"classical": "gue", "N": 5}))
    assert load_config(str(p))["N"] == 5
    with pytest.raises(ConfigError):
        load_config(str(tmp_path / "nope.json"))
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ConfigError):
        load_config(str(bad))
