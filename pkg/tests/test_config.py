import json

import pytest

from src.config.settings import ConfigManager, default_config_dir
from src.numerics.errors import ConfigError


def test_default_config_dir_follows_appdata(app_dir):
    assert default_config_dir() == app_dir


def test_defaults_without_user_file():
    manager = ConfigManager()
    assert manager.get_section("discretization") == {"n_modes": 160, "n_theta": 1024}
    opts = manager.lm_options()
    assert opts.tol == 1e-10
    assert opts.lambda_max == 1e16
    continuation = manager.continuation_config()
    assert continuation.n_steps == 825
    assert continuation.n_theta == 1024
    manager.validate()


def test_user_file_is_deep_merged(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps({"solver": {"tol": 1e-8}, "plotting": {"dpi": 300}}))
    manager = ConfigManager(config_file=path)
    assert manager.lm_options().tol == 1e-8
    assert manager.lm_options().max_iter == 200
    assert "plotting" not in manager.config


def test_explicit_file_errors(tmp_path):
    with pytest.raises(ConfigError, match="not found"):
        ConfigManager(config_file=tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ConfigError, match="not valid JSON"):
        ConfigManager(config_file=bad)


def test_corrupted_default_location_falls_back(app_dir):
    app_dir.mkdir(parents=True)
    (app_dir / "config.json").write_text("{oops")
    assert ConfigManager().get_section("solver")["max_iter"] == 200


def test_validate_rejects_inconsistent_settings():
    manager = ConfigManager()
    manager.update_setting("discretization", "n_theta", 64)
    with pytest.raises(ConfigError, match="continuation"):
        manager.validate()

    manager.reload_config()
    manager.update_setting("solver", "lambda_up", 0.5)
    with pytest.raises(ConfigError, match="solver"):
        manager.validate()

    manager.reload_config()
    manager.update_setting("output", "format", "xlsx")
    with pytest.raises(ConfigError, match="format"):
        manager.validate()


def test_update_setting_persists_on_request(app_dir):
    manager = ConfigManager()
    manager.update_setting("verify", "n_theta", 512, persist=True)
    stored = json.loads((app_dir / "config.json").read_text())
    assert stored["verify"]["n_theta"] == 512
    assert ConfigManager().get_section("verify")["n_theta"] == 512


def test_unknown_section():
    with pytest.raises(ValueError):
        ConfigManager().get_section("plotting")
