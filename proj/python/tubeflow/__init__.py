"""Minimum-energy transport through planar virtual tubes.

The compiled core lives in ``tubeflow._tubeflow``; this package re-exports
its public names (tubes, DOF reports, the oracle suite, swarm campaigns and
SVG rendering).
"""

from ._tubeflow import *  # noqa: F401,F403
