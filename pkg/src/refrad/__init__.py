"""Radii and refined radii of p-adic differential modules.

The package computes subsidiary radii, refined radii, Frobenius transforms,
the variation of radii over annuli and the Swan and refined Swan conductors
of Artin-Schreier characters through their Dwork isocrystals.
"""

from __future__ import annotations

from .conductors import (
    ASCharacter,
    MultiIndexLevel,
    RefinedConductor,
    df_oracle,
    dwork_isocrystal,
    dwork_module,
    filtration_level,
    reduce_AS,
    refined_artin,
    refined_swan,
)
from .errors import InvariantViolation, ParseError, PreconditionError, RefradError
from .fiber import FiberModule, RadiiMultiset, RefinedDatum, change_frame, tensor_refined
from .frobenius import pullback_radii, pushforward_radii
from .gf import GF
from .newton import NewtonPolygon, polygon
from .ore import Derivation
from .parse import emit_config, parse_config, parse_residue, parse_scalar
from .residue import ResElem
from .scalar import FieldContext, Scalar, dwork_pi, vs_valuation
from .variation import (
    FamilyModule,
    PiecewiseAffine,
    boundary_link,
    break_decomposition,
    fit_family,
    fit_piecewise,
    pure_family,
    sample_radii,
)

__version__ = "0.1.0"

__all__ = [
    "ASCharacter",
    "Derivation",
    "FamilyModule",
    "FiberModule",
    "FieldContext",
    "GF",
    "InvariantViolation",
    "MultiIndexLevel",
    "NewtonPolygon",
    "ParseError",
    "PiecewiseAffine",
    "PreconditionError",
    "RadiiMultiset",
    "RefinedConductor",
    "RefinedDatum",
    "RefradError",
    "ResElem",
    "Scalar",
    "boundary_link",
    "break_decomposition",
    "change_frame",
    "df_oracle",
    "dwork_isocrystal",
    "dwork_module",
    "dwork_pi",
    "emit_config",
    "filtration_level",
    "fit_family",
    "fit_piecewise",
    "parse_config",
    "parse_residue",
    "parse_scalar",
    "polygon",
    "pullback_radii",
    "pure_family",
    "pushforward_radii",
    "reduce_AS",
    "refined_artin",
    "refined_swan",
    "sample_radii",
    "tensor_refined",
    "vs_valuation",
]
