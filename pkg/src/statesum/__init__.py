"""Homomorphism-count state sums, Cech cocycles and discrete holonomy on simplicial complexes."""

from __future__ import annotations

from .abelian import QMODZ, FinAbelianGroup, QmodZ, QmodZGroup, abelian_groups_of_order, count_abelian_homs
from .cech import (
    BundleCocycle,
    CohomologyClass,
    GaugeData,
    GerbeCocycle,
    Verdict,
    apply_gauge,
    bundle_coboundary,
    characteristic_class,
    characteristic_class_bundle,
    classify_bundles_smallcase,
    gerbe_coboundary,
    verify_bundle_cocycle,
    verify_gerbe_cocycle,
)
from .errors import StatesumError
from .groups import FiniteGroup, abelian_group_from_spec, group_from_spec
from .holonomy import (
    AbelianHom,
    EdgeLabeling,
    TriangleLabeling,
    gerbe_holonomy_hom,
    hom_to_connection,
    hom_to_gerbe_connection,
    holonomy_hom,
    is_flat,
    is_gerbe_flat,
    loop_holonomy,
    two_cycle_holonomy,
)
from .homology import betti_numbers, cohomology, homology
from .invariants import GroupHom, YetterResult, dw_invariant, enumerate_homs, yetter_invariant
from .matrix import IntMatrix
from .presentation import Presentation, abelianization, check_simply_connected, present_pi1, simplify_presentation
from .simplicial import (
    EdgePath,
    SimplicialComplex,
    TwoCycle,
    boundary_matrix,
    build_complex,
    load_complex,
    load_fixture,
    simplify_path,
)
from .smith import SmithForm, chain_homology, smith_normal_form

__version__ = "0.1.0"

__all__ = [
    "AbelianHom",
    "BundleCocycle",
    "CohomologyClass",
    "EdgeLabeling",
    "EdgePath",
    "FinAbelianGroup",
    "FiniteGroup",
    "GaugeData",
    "GerbeCocycle",
    "GroupHom",
    "IntMatrix",
    "Presentation",
    "QMODZ",
    "QmodZ",
    "QmodZGroup",
    "SimplicialComplex",
    "SmithForm",
    "StatesumError",
    "TriangleLabeling",
    "TwoCycle",
    "Verdict",
    "YetterResult",
    "abelian_group_from_spec",
    "abelian_groups_of_order",
    "abelianization",
    "apply_gauge",
    "betti_numbers",
    "boundary_matrix",
    "build_complex",
    "bundle_coboundary",
    "chain_homology",
    "characteristic_class",
    "characteristic_class_bundle",
    "check_simply_connected",
    "classify_bundles_smallcase",
    "cohomology",
    "count_abelian_homs",
    "dw_invariant",
    "enumerate_homs",
    "gerbe_coboundary",
    "gerbe_holonomy_hom",
    "group_from_spec",
    "holonomy_hom",
    "hom_to_connection",
    "hom_to_gerbe_connection",
    "homology",
    "is_flat",
    "is_gerbe_flat",
    "load_complex",
    "load_fixture",
    "loop_holonomy",
    "present_pi1",
    "simplify_path",
    "simplify_presentation",
    "smith_normal_form",
    "two_cycle_holonomy",
    "verify_bundle_cocycle",
    "verify_gerbe_cocycle",
    "yetter_invariant",
]
