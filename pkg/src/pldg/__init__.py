"""Localized construction of plane unit-disk-graph spanners (PLDG / PLDG')."""

from .geometry import (
    CircularArc,
    Disk,
    GeneralPositionError,
    LocalTriangulation,
    Point,
    Triangle,
    circumcenter,
    delaunay,
    in_circle,
    orient,
    segments_cross,
)
from .protocol import BroadcastMessage, RemovalCertificate, Variant
from .sim import RunReport, count_messages, locality_check, run
from .udg import Graph, PointSet, build_udg, neighborhood, shortest_path_length
from .verify import STRETCH_BOUND, VerificationVerdict, udel_oracle, verify_report

__version__ = "0.1.0"
