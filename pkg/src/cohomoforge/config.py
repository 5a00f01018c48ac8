"""Caps and budgets shared by every module.

The active limits live in a context variable so concurrent callers can run
with different settings; ``use_limits`` overrides them for a block.
"""

import contextlib
import contextvars
import dataclasses
import os

HARD_DEGREE_CAP = 3


@dataclasses.dataclass(frozen=True)
class Limits:
    order_cap: int = 5040          # closure size in from_permutations
    subgroup_order_cap: int = 128  # enumerate_subgroups
    degree_cap: int = 2
    size_budget: int = 4_000_000   # entries of the largest differential matrix
    endomorphism_cap: int = 81     # |A| bound for action-ring / centralizer work
    element_cap: int = 100_000     # exhaustive enumeration of a finite ring or group
    lattice_cap: int = 512         # submodule lattice size
    lie_enum_dim: int = 4          # subalgebra enumeration, dimension bound
    lie_enum_prime: int = 5        # subalgebra enumeration, prime bound


ENV_PREFIX = "COHOMOFORGE_"

_current = contextvars.ContextVar("cohomoforge_limits", default=Limits())


def get_limits():
    return _current.get()


def limits_from_env(base=None, environ=None):
    """Apply ``COHOMOFORGE_<FIELD>`` environment overrides to ``base``."""
    environ = os.environ if environ is None else environ
    base = base or Limits()
    changes = {}
    for field in dataclasses.fields(Limits):
        key = ENV_PREFIX + field.name.upper()
        if key in environ:
            changes[field.name] = int(environ[key])
    return dataclasses.replace(base, **changes)


@contextlib.contextmanager
def use_limits(limits=None, **overrides):
    new = dataclasses.replace(limits or get_limits(), **overrides)
    if new.degree_cap > HARD_DEGREE_CAP:
        new = dataclasses.replace(new, degree_cap=HARD_DEGREE_CAP)
    token = _current.set(new)
    try:
        yield new
    finally:
        _current.reset(token)
