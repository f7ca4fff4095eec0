"""Equivariant fundamental classes of orbit closures in GL(2)- and torus representations."""

from .algebra import LinearForm, Polynomial, RationalTerm, RationalTermSum, exact_divide, substitute
from .applications import elliptic_degree, kodaira_contribution, profile_from_J, ratmap_class, split_hom
from .newton import WeightedPoint, beta_vectors, build_polygon, divisibility_check, polygon_scalars, shear
from .orbit import (
    EquivariantClass,
    OrbitDatum,
    OrbitPoint,
    Representation,
    localization_oracle,
    orbit_class,
    projective_degree,
    twist_class,
    twist_rep,
)
from .torus import CharacterList, Cone, equivariant_multiplicity, is_pointed, torus_orbit_class, triangulate, volume_oracle

__all__ = [
    "LinearForm", "Polynomial", "RationalTerm", "RationalTermSum", "exact_divide", "substitute",
    "elliptic_degree", "kodaira_contribution", "profile_from_J", "ratmap_class", "split_hom",
    "WeightedPoint", "beta_vectors", "build_polygon", "divisibility_check", "polygon_scalars", "shear",
    "EquivariantClass", "OrbitDatum", "OrbitPoint", "Representation", "localization_oracle",
    "orbit_class", "projective_degree", "twist_class", "twist_rep",
    "CharacterList", "Cone", "equivariant_multiplicity", "is_pointed", "torus_orbit_class",
    "triangulate", "volume_oracle",
]
