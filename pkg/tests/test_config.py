"""
Tests for settings and the error hierarchy.
"""

import pytest
from pydantic import ValidationError as SettingsError

from varband.config import Settings, get_config_summary
from varband.errors import (
    DomainError,
    KappaMismatchError,
    NumericalError,
    QuadratureError,
    ValidationError,
    VerificationError,
)


def test_defaults():
    summary = get_config_summary()
    assert summary["gl_order"] == 15
    assert summary["series_max_ratio"] == 0.95
    assert summary["csv_digits"] == 15


def test_environment_override(monkeypatch):
    monkeypatch.setenv("VARBAND_OVERSAMPLING", "4")
    monkeypatch.setenv("VARBAND_LOG_LEVEL", "DEBUG")
    fresh = Settings()
    assert fresh.oversampling == 4
    assert fresh.log_level == "DEBUG"


def test_invalid_environment_value(monkeypatch):
    monkeypatch.setenv("VARBAND_SERIES_MAX_RATIO", "1.5")
    with pytest.raises(SettingsError):
        Settings()


def test_exit_codes():
    assert ValidationError("bad", field="levels").exit_code == 1
    assert DomainError("u <= 0").exit_code == 1
    assert KappaMismatchError("mismatch").exit_code == 2
    assert VerificationError("failed", failed=["id1"]).exit_code == 3


def test_error_details():
    err = ValidationError("must be positive", field="levels[1]")
    assert str(err) == "levels[1]: must be positive"
    assert err.to_dict()["field"] == "levels[1]"
    quad = QuadratureError("budget exhausted", achieved=1e-6, panels=65536)
    assert isinstance(quad, NumericalError)
    assert quad.to_dict() == {"error": "QuadratureError", "message": "budget exhausted", "achieved": 1e-6, "panels": 65536}
    assert isinstance(DomainError("x"), ValueError)


def test_entry_script_loads_dotenv_from_working_directory(tmp_path, monkeypatch):
    import importlib
    import os

    (tmp_path / ".env").write_text("VARBAND_DEFAULT_SEED=77\n", encoding="utf-8")
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv("VARBAND_DEFAULT_SEED", raising=False)
    import app

    importlib.reload(app)
    assert os.environ["VARBAND_DEFAULT_SEED"] == "77"
    assert Settings().default_seed == 77
