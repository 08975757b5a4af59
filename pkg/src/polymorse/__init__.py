"""Morse theory of the oriented area on polygon spaces."""
__version__ = "0.1.0"

from ._accel import backend_name
from .cyclic import CyclicConfig, delta, enumerate_cyclic, enumerate_equilateral, solve_cyclic
from .deform import DeformationLog, heptagon_to_pentagram, trace_deformation
from .errors import *  # noqa: F401,F403
from .linkage import (
    DecoratedConfig,
    Linkage,
    PlanarPolygon,
    SpatialPolygon,
    align,
    is_generic,
    s_value,
    signed_area,
    vector_area,
)
from .morse import (
    IndexReport,
    coorientation_flip,
    numeric_index_planar,
    numeric_index_spatial,
    planar_index,
    spatial_index,
)
from .render import render_svg
from .spatial import (
    CriticalClass,
    all_zigzags,
    classify,
    find_critical_points,
    solve_zigzag,
)
from .swap import is_sw_invariant, sw, swap_vertex
from .topology import (
    BettiTable,
    MorseReport,
    decorated_betti,
    equilateral_betti,
    klyachko_betti,
    verify_perfect_morse,
)
