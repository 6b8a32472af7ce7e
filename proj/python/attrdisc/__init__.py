"""Attribute discovery and zero-shot learning toolkit.

The heavy lifting lives in the compiled ``_attrdisc`` extension; this package
re-exports it. During development the extension is built out-of-tree, so we
also look in ``ATTRDISC_EXT_DIR`` before giving up.
"""

import importlib
import os
import sys

try:
    from ._attrdisc import *  # noqa: F401,F403
    from . import _attrdisc as _ext
except ImportError:
    ext_dir = os.environ.get("ATTRDISC_EXT_DIR")
    if not ext_dir:
        raise
    if ext_dir not in sys.path:
        sys.path.insert(0, ext_dir)
    _ext = importlib.import_module("_attrdisc")
    globals().update(
        {name: getattr(_ext, name) for name in dir(_ext) if not name.startswith("_")}
    )

__all__ = [name for name in dir(_ext) if not name.startswith("_")]
