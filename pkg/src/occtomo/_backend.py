"""Selects the compiled kernels when available, else the numpy fallback.

Set ``OCCTOMO_BACKEND=python`` to force the fallback (tests and the
benchmark use this to compare both paths).
"""
import os

from occtomo import _fallback

NAME = "python"
_impl = _fallback

if os.environ.get("OCCTOMO_BACKEND", "").lower() not in ("python", "numpy", "fallback"):
    try:
        from occtomo import _core as _impl  # noqa: F811
    except ImportError:
        _impl = _fallback
    else:
        NAME = "cython"

gauss_sum = _impl.gauss_sum
occupation_gram = _impl.occupation_gram


def available():
    """Names of the backends importable in this environment."""
    names = ["python"]
    try:
        from occtomo import _core  # noqa: F401
    except ImportError:
        pass
    else:
        names.append("cython")
    return names
