"""Anti-sycophancy synthetic-data intervention toolkit.

The compiled extension carries the real implementation; this package just
re-exports it so both the installed wheel layout (sdikit/_sdikit.so) and the
CMake build tree (PYTHONPATH pointing at the build directory) work.
"""

try:
    from ._sdikit import *  # noqa: F401,F403
    from . import _sdikit as _core
except ImportError:
    from _sdikit import *  # noqa: F401,F403
    import _sdikit as _core

__version__ = _core.__version__
__all__ = [name for name in dir(_core) if not name.startswith("_")]
