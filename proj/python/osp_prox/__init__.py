"""Online saddle point engines, inner solvers, and the benchmark harness."""

try:
    from ._core import *  # noqa: F401,F403
    from . import _core as _impl
except ImportError:
    # editable/dev layout: the extension sits on sys.path next to the package
    from _core import *  # noqa: F401,F403
    import _core as _impl

__version__ = "0.1.0"
__doc__ = _impl.__doc__
