import pytest

from src.utils.config import ENV_PREFIX


@pytest.fixture(autouse=True)
def isolated_environment(tmp_path, monkeypatch):
    """Journal dans tmp_path, pas de progression, aucune variable QUADRANK_* héritée."""
    import os
    for key in list(os.environ):
        if key.startswith(ENV_PREFIX):
            monkeypatch.delenv(key, raising=False)
    monkeypatch.setenv("QUADRANK_LOG_FILE", str(tmp_path / "computation_log.json"))
    monkeypatch.setenv("QUADRANK_QUIET", "1")
    monkeypatch.chdir(tmp_path)
    return tmp_path
