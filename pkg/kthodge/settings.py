"""Environment configuration for the kthodge package."""

import logging
import os

DEFAULT_NMAX = 64
DEFAULT_BASIS_SIZE = 256
DEFAULT_LOG_LEVEL = "WARNING"

# Cached values to avoid repeated environment lookups
_nmax_cache: int | None = None
_basis_size_cache: int | None = None
_log_level_cache: str | None = None


def _positive_int_from_env(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError as e:
        raise ValueError(f"{name} must be a positive integer, got '{raw}'") from e
    if value < 1:
        raise ValueError(f"{name} must be a positive integer, got '{raw}'")
    return value


def get_default_nmax() -> int:
    """
    Get the default enumeration bound for Weil-Brezin sectors.

    Reads KTHODGE_NMAX once and caches the result. Falls back to 64.

    Returns:
        int: The bound on |n|

    Raises:
        ValueError: If KTHODGE_NMAX is not a positive integer
    """
    global _nmax_cache
    if _nmax_cache is None:
        _nmax_cache = _positive_int_from_env("KTHODGE_NMAX", DEFAULT_NMAX)
    return _nmax_cache


def get_default_basis_size() -> int:
    """
    Get the default Hermite basis size used by numerical verification.

    Reads KTHODGE_BASIS_SIZE once and caches the result. Falls back to 256.

    Raises:
        ValueError: If KTHODGE_BASIS_SIZE is not a positive integer
    """
    global _basis_size_cache
    if _basis_size_cache is None:
        _basis_size_cache = _positive_int_from_env("KTHODGE_BASIS_SIZE", DEFAULT_BASIS_SIZE)
    return _basis_size_cache


def get_log_level() -> str:
    """
    Get the log level name for the command-line tool from KTHODGE_LOG_LEVEL.

    Raises:
        ValueError: If the value is not a standard logging level name
    """
    global _log_level_cache
    if _log_level_cache is None:
        _log_level_cache = validate_log_level(
            os.environ.get("KTHODGE_LOG_LEVEL") or DEFAULT_LOG_LEVEL
        )
    return _log_level_cache


def validate_log_level(name: str) -> str:
    level = name.strip().upper()
    if level not in logging.getLevelNamesMapping():
        raise ValueError(f"Unknown log level '{name}'")
    return level


def _clear_cache() -> None:
    """Forget cached environment values. Used by tests."""
    global _nmax_cache, _basis_size_cache, _log_level_cache
    _nmax_cache = None
    _basis_size_cache = None
    _log_level_cache = None
