"""Size caps, overridable through the environment."""

import os

DEFAULT_MAX_ORDER = 10**6
DEFAULT_MAX_VERTICES = 4096


def _env_int(name, default):
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{name} must be an integer, got {raw!r}") from None
    if value < 1:
        raise ValueError(f"{name} must be positive, got {value}")
    return value


def max_order() -> int:
    return _env_int("RZDG_MAX_ORDER", DEFAULT_MAX_ORDER)


def max_vertices() -> int:
    return _env_int("RZDG_MAX_VERTICES", DEFAULT_MAX_VERTICES)
