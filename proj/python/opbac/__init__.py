"""Branch-and-cut solver for the orienteering problem."""

try:
    from ._opbac import (
        BackendError,
        ConsistencyError,
        Instance,
        ParseError,
        load,
        parse,
        solve,
        validate,
    )
except ImportError:  # in-tree test runs: extension next to us on sys.path
    from _opbac import (
        BackendError,
        ConsistencyError,
        Instance,
        ParseError,
        load,
        parse,
        solve,
        validate,
    )

__all__ = [
    "BackendError",
    "ConsistencyError",
    "Instance",
    "ParseError",
    "load",
    "parse",
    "solve",
    "validate",
]
