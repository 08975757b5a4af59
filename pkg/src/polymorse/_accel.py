"""Backend switch for the hot kernels.

Set ``POLYMORSE_NUMBA=0`` to force the pure-numpy path even when numba is
importable. The flag is read once at import time.
"""
import os

_FLAG = os.environ.get("POLYMORSE_NUMBA", "1").strip().lower()

try:
    import numba  # noqa: F401

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and _FLAG not in ("0", "false", "no", "off")


def backend_name():
    return "numba" if USE_NUMBA else "numpy"
