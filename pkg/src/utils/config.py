"""
Configuration en couches : valeurs par défaut < fichier key=value < variables
d'environnement (.env inclus) < options de la ligne de commande.
"""
import os
from dataclasses import dataclass, fields, replace
from typing import Optional

from dotenv import dotenv_values, load_dotenv

from src.utils.errors import MalformedInput
from src.utils.logger import DEFAULT_LOG_FILE

ENV_PREFIX = "QUADRANK_"

# clé du fichier de configuration / suffixe d'environnement -> (champ, convertisseur)
_KEYS = {
    "WORKERS": ("workers", int),
    "PRECISION": ("precision_bits", int),
    "ABS_ERR": ("zeta_abs_err", float),
    "TOL": ("fe_tol", float),
    "LOG_FILE": ("log_file", str),
    "COEFFS": ("coeffs_path", str),
    "B1_SAMPLE": ("b1_sample_size", int),
}


@dataclass(frozen=True)
class Settings:
    workers: int = 1
    precision_bits: int = 96
    zeta_abs_err: float = 1e-9
    fe_tol: float = 1e-6
    log_file: str = DEFAULT_LOG_FILE
    coeffs_path: Optional[str] = None
    b1_sample_size: int = 23

    def with_overrides(self, **overrides) -> "Settings":
        """Apply command-line flags; None means 'flag not given'."""
        known = {f.name for f in fields(self)}
        unknown = set(overrides) - known
        if unknown:
            raise MalformedInput(f"unknown settings: {sorted(unknown)}")
        given = {k: v for k, v in overrides.items() if v is not None}
        return _validated(replace(self, **given))


def _convert(key: str, raw: str, source: str):
    name, cast = _KEYS[key]
    try:
        return name, cast(raw)
    except ValueError:
        raise MalformedInput(f"{source}: invalid value for {key}: {raw!r}")


def _validated(settings: Settings) -> Settings:
    if settings.workers < 1:
        raise MalformedInput("workers must be ≥ 1")
    if settings.precision_bits < 16:
        raise MalformedInput("precision must be at least 16 bits")
    if settings.zeta_abs_err <= 0 or settings.fe_tol <= 0:
        raise MalformedInput("abs_err and tol must be positive")
    return settings


def load_settings(config_path: Optional[str] = None) -> Settings:
    """
    Build the effective settings.

    Args:
        config_path: optional key=value file; defaults to $QUADRANK_CONFIG.
    """
    load_dotenv()
    values = {}

    config_path = config_path or os.getenv(ENV_PREFIX + "CONFIG")
    if config_path:
        if not os.path.exists(config_path):
            raise MalformedInput(f"config file not found: {config_path}")
        for raw_key, raw in dotenv_values(config_path).items():
            key = raw_key.upper().removeprefix(ENV_PREFIX)
            if key not in _KEYS:
                raise MalformedInput(f"{config_path}: unknown key {raw_key!r}")
            if raw is None:
                continue
            name, value = _convert(key, raw, config_path)
            values[name] = value

    for key in _KEYS:
        raw = os.getenv(ENV_PREFIX + key)
        if raw:
            name, value = _convert(key, raw, "environment")
            values[name] = value

    return _validated(Settings(**values))
