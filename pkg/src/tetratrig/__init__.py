"""Tetrahedron trigonometry through characters on E8 root lattices."""
from .chokim import psi, solve_angles
from .config import RunConfig
from .e8lattice import LatticeVec, e, half, roots
from .tetra import MetricSpec, angle_function, from_metric, length_function, metric_angles_oracle

__all__ = [
    "LatticeVec",
    "MetricSpec",
    "RunConfig",
    "angle_function",
    "e",
    "from_metric",
    "half",
    "length_function",
    "metric_angles_oracle",
    "psi",
    "roots",
    "solve_angles",
]
