"""Tate, Parshin and refined symbols on P1 and P1 x P1, exact and logarithmic."""

from .curves import TateInstance, random_tate_instance, tate_symbol, weil_verify
from .parshin import (
    det_constants,
    parshin_reciprocity_verify,
    parshin_symbol,
    refined_reciprocity_verify,
    refined_symbol,
    three_point_closed_form,
)
from .rational import INF, FactoredFunction1D, P1Point, divisor_support, order_at, pt, unit_part_at
from .surface import (
    SurfaceComponent,
    SurfaceFunction,
    SurfaceInstance,
    hline,
    intersection_points,
    local_data,
    vline,
)

__all__ = [
    "INF",
    "FactoredFunction1D",
    "P1Point",
    "SurfaceComponent",
    "SurfaceFunction",
    "SurfaceInstance",
    "TateInstance",
    "det_constants",
    "divisor_support",
    "hline",
    "intersection_points",
    "local_data",
    "order_at",
    "parshin_reciprocity_verify",
    "parshin_symbol",
    "pt",
    "random_tate_instance",
    "refined_reciprocity_verify",
    "refined_symbol",
    "three_point_closed_form",
    "tate_symbol",
    "unit_part_at",
    "vline",
    "weil_verify",
]

__version__ = "0.1.0"
