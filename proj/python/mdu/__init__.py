"""Distance-based multidimensional unfolding of binary response matrices."""

try:
    from ._mdu import *  # noqa: F401,F403  (installed wheel layout)
    from ._mdu import __version__  # noqa: F401
except ImportError:  # build-tree layout: _mdu.so on PYTHONPATH
    from _mdu import *  # noqa: F401,F403
    from _mdu import __version__  # noqa: F401
