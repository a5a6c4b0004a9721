"""Nested point arrays with icosahedral and n-fold symmetry obtained by
projecting orbits of lattice points under subgroups of the hyperoctahedral
group, plus tools to fit them to virus capsids."""

from .errors import (CatalogMismatch, EmptyModel, NestedShellsError, NoSurface, NotCoprime,
                     NotInImage, NotSubgroup, ParseError, VerificationError)
from .exactnum import TAU, CycInt, QTau, galois_conj, qtau_cmp
from .groupcore import (FiniteGroup, Perm12, SignedPerm, compose, from_perm12, is_normal,
                        materialize, minimal_overgroups, right_transversal, stabilizer,
                        to_matrix, to_perm12)
from .icosa import SubgroupCatalog, build_catalog, build_embedding, project, verify_h3_structure
from .shells import (Library, PointArray, build_library, build_point_array, coset_orbits,
                     fundamental_reps, verify_coset_orbits)
from .dihedral import HolElement, a4_case, hol_group, lift_and_orbit
from .capsidfit import CapsidModel, FitResult, fit_array, ingest_pdb, rank_library, surface_clusters

__version__ = "0.1.0"

__all__ = [
    "CatalogMismatch",
    "EmptyModel",
    "NestedShellsError",
    "NoSurface",
    "NotCoprime",
    "NotInImage",
    "NotSubgroup",
    "ParseError",
    "VerificationError",
    "TAU",
    "CycInt",
    "QTau",
    "galois_conj",
    "qtau_cmp",
    "FiniteGroup",
    "Perm12",
    "SignedPerm",
    "compose",
    "from_perm12",
    "is_normal",
    "materialize",
    "minimal_overgroups",
    "right_transversal",
    "stabilizer",
    "to_matrix",
    "to_perm12",
    "SubgroupCatalog",
    "build_catalog",
    "build_embedding",
    "project",
    "verify_h3_structure",
    "Library",
    "PointArray",
    "build_library",
    "build_point_array",
    "coset_orbits",
    "fundamental_reps",
    "verify_coset_orbits",
    "HolElement",
    "a4_case",
    "hol_group",
    "lift_and_orbit",
    "CapsidModel",
    "FitResult",
    "fit_array",
    "ingest_pdb",
    "rank_library",
    "surface_clusters",
]
