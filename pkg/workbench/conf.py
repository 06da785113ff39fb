"""Access to the WORKBENCH settings block with built-in fallbacks."""
from contextlib import contextmanager
from contextvars import ContextVar

from django.conf import settings

DEFAULTS = {
    'BALL_CAP': 200000,
    'ORDER_CAP': 100000,
    'BFS_CAP': 200000,
    'FACTORIZATION_CAP': 10000,
    'DEFAULT_BASE': '2',
    'DEFAULT_SEED': 0,
    'MAX_LEVEL': 8,
}

_overrides = ContextVar('workbench_overrides', default={})


def get_setting(name):
    """Return settings.WORKBENCH[name], falling back to DEFAULTS.

    Values set with overrides() win over both for the duration of the block.
    """
    active = _overrides.get()
    if name in active:
        return active[name]
    configured = getattr(settings, 'WORKBENCH', {}) or {}
    if name in configured:
        return configured[name]
    return DEFAULTS[name]


def resolve_cap(value, name):
    """An explicit cap wins; None means the configured one."""
    return get_setting(name) if value is None else value


@contextmanager
def overrides(**values):
    """Per-invocation settings, e.g. caps given on the command line."""
    unknown = set(values) - set(DEFAULTS)
    if unknown:
        raise KeyError(f"unknown workbench settings: {sorted(unknown)}")
    token = _overrides.set({**_overrides.get(), **{k: v for k, v in values.items() if v is not None}})
    try:
        yield
    finally:
        _overrides.reset(token)
