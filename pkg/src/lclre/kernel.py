"""Kernel selector: compiled extension when available, pure Python otherwise.

Set LCLRE_PURE=1 to force the pure-Python kernel.  The compiled kernel only
handles arities up to 8 and bitmasks below 2^64; larger inputs silently use
the pure path.
"""

import os

from . import _kernel_py

_compiled = None
if os.environ.get("LCLRE_PURE") != "1":
    try:
        from . import _kernel_cy as _compiled  # type: ignore[no-redef]
    except ImportError:
        _compiled = None

_MASK_LIMIT = 1 << 64


def backend_name():
    return "compiled" if _compiled is not None else "pure"


def has_compiled():
    return _compiled is not None


def _compiled_ok(base, arity):
    if _compiled is None or arity > 8:
        return False
    return all(m < _MASK_LIMIT for cfg in base for m in cfg)


def dominated_by(c, d):
    if _compiled_ok((c, d), len(c)):
        return _compiled.dominated_by(c, d)
    return _kernel_py.dominated_by(c, d)


def dominated_or_equal(c, d):
    if _compiled_ok((c, d), len(c)):
        return _compiled.dominated_or_equal(c, d)
    return _kernel_py.dominated_or_equal(c, d)


def combine(c, d, u, sigma):
    return _kernel_py.combine(c, d, u, sigma)


def maximize(base, arity, poll=None):
    base = list(base)
    if _compiled_ok(base, arity):
        return _compiled.maximize(base, arity, poll)
    return _kernel_py.maximize(base, arity, poll)
