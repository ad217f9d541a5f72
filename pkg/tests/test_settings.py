import pytest
import sys
import os

sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))
from src.config.settings import Settings


def test_default_settings_are_valid():
    """Defaults pass validation"""
    Settings.validate_settings()
    assert Settings.bounds()['certify_arity'] >= 8


def test_non_positive_bound_rejected(monkeypatch):
    """Zero weight bound is refused"""
    monkeypatch.setattr(Settings, 'WEIGHT_BOUND', 0)
    with pytest.raises(ValueError, match='weight_bound'):
        Settings.validate_settings()


def test_short_resolution_rejected(monkeypatch):
    """Resolutions need depth at least 2"""
    monkeypatch.setattr(Settings, 'PERIODIC_DEPTH', 1)
    with pytest.raises(ValueError):
        Settings.validate_settings()


def test_invalid_log_level_rejected(monkeypatch):
    """Log level must be one of the known names"""
    monkeypatch.setattr(Settings, 'AINFTY_LOG_LEVEL', 'LOUD')
    with pytest.raises(ValueError, match='log level'):
        Settings.validate_settings()
