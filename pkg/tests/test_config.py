import pytest

from dualgraph.config import Settings, get_settings, load_settings
from dualgraph.errors import ConfigError


def test_defaults(tmp_path):
    settings = load_settings(env_path=tmp_path / ".env", environ={})
    assert settings == Settings()
    assert settings.log_level == "WARNING"
    assert settings.lift_step_limit == 1_000_000


def test_environment_overrides_env_file(tmp_path):
    env_file = tmp_path / ".env"
    env_file.write_text("DUALGRAPH_LOG_LEVEL=info\nDUALGRAPH_LIFT_STEP_LIMIT=50\n")
    settings = load_settings(env_path=env_file, environ={"DUALGRAPH_LIFT_STEP_LIMIT": "75"})
    assert settings.log_level == "INFO"
    assert settings.lift_step_limit == 75


def test_unrelated_variables_ignored(tmp_path):
    settings = load_settings(env_path=tmp_path / ".env", environ={"LOG_LEVEL": "DEBUG"})
    assert settings.log_level == "WARNING"


@pytest.mark.parametrize("environ,name", [
    ({"DUALGRAPH_LOG_LEVEL": "LOUD"}, "DUALGRAPH_LOG_LEVEL"),
    ({"DUALGRAPH_LIFT_STEP_LIMIT": "0"}, "DUALGRAPH_LIFT_STEP_LIMIT"),
    ({"DUALGRAPH_LIFT_STEP_LIMIT": "many"}, "DUALGRAPH_LIFT_STEP_LIMIT"),
])
def test_invalid_values(tmp_path, environ, name):
    with pytest.raises(ConfigError, match=name):
        load_settings(env_path=tmp_path / ".env", environ=environ)


def test_get_settings_reads_process_environment(monkeypatch):
    monkeypatch.setenv("DUALGRAPH_LOG_LEVEL", "debug")
    get_settings.cache_clear()
    assert get_settings().log_level == "DEBUG"
