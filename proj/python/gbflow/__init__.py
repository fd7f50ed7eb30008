"""Coupled grain-boundary curve shortening with an evolving misorientation.

Thin Python layer over the C++ core: graph and front-tracking solvers, the
backward heat kernel with time-dependent conductivity, and the diagnostics
that certify the energy-dissipation and monotonicity structure of a run.
"""

try:
    from ._gbflow import *  # noqa: F401,F403  (installed wheel layout)
    from ._gbflow import __version__  # noqa: F401
except ImportError:  # in-tree build: module sits next to the build dir
    from _gbflow import *  # noqa: F401,F403
    from _gbflow import __version__  # noqa: F401
