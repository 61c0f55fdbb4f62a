"""Paul-trap QND monitoring: trajectories, stability, restricted-path-integral densities."""

from ._paultrap import *  # noqa: F401,F403
from ._paultrap import __doc__  # noqa: F401
