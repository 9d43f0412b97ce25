"""Refined Burnside groups of Deligne-Mumford stacks.

Symbols and relations of cBurn_n, oBurn-bar_n and oBurn_n, decidable equality
through integer relation lattices, classes of orbifolds (toric ones straight
from stacky fans), and the comparison and specialization maps.
"""

from .abelian import FinAbGroup, GroupElement, GroupHom, cokernel, quotient, smith_normal_form
from .classes import (
    IncidenceEntry,
    OrbifoldDescription,
    SncOpenDescription,
    StabilizerComponentData,
    class_of_orbifold,
    class_open,
    class_open_punctured_form,
    line_bundle_sum_naive_class,
    naive_class_open,
    punctured_bundle_class,
)
from .errors import BurnsideError
from .lattice import build_lattice, close_universe, decide_equal, decide_zero, is_equal, is_zero, relation_vectors
from .maps import (
    CoverEntry,
    EquivariantSymbol,
    FreeFieldClass,
    LabelRegistry,
    ModelDescription,
    from_equivariant,
    kappa_bar,
    kappa_bar_inverse,
    specialize,
    to_classical,
    to_grothendieck,
)
from .symbols import (
    BurnElement,
    CSymbol,
    EquivalenceRegistry,
    FieldLabel,
    OSymbol,
    StackLabel,
    blowup_relation_cburn,
    blowup_relation_obar,
    blowup_relation_oburn,
    derived_blowup_expansion,
    derived_vanishing,
    normalize_obar,
    normalize_oburn,
)
from .toric import (
    StackyFan,
    blowup_center,
    cone_stabilizer,
    interior_probes,
    is_representable_subdivision,
    root_ray,
    stabilizer_components,
    stacky_star_contraction,
    stacky_star_subdivision,
    toric_class,
)

__version__ = "0.1.0"

__all__ = [
    "BurnElement",
    "BurnsideError",
    "CSymbol",
    "CoverEntry",
    "EquivalenceRegistry",
    "EquivariantSymbol",
    "FieldLabel",
    "FinAbGroup",
    "FreeFieldClass",
    "GroupElement",
    "GroupHom",
    "IncidenceEntry",
    "LabelRegistry",
    "ModelDescription",
    "OSymbol",
    "OrbifoldDescription",
    "SncOpenDescription",
    "StabilizerComponentData",
    "StackLabel",
    "StackyFan",
    "blowup_center",
    "blowup_relation_cburn",
    "blowup_relation_obar",
    "blowup_relation_oburn",
    "build_lattice",
    "class_of_orbifold",
    "class_open",
    "class_open_punctured_form",
    "close_universe",
    "cokernel",
    "cone_stabilizer",
    "decide_equal",
    "decide_zero",
    "derived_blowup_expansion",
    "derived_vanishing",
    "from_equivariant",
    "interior_probes",
    "is_equal",
    "is_representable_subdivision",
    "is_zero",
    "kappa_bar",
    "kappa_bar_inverse",
    "line_bundle_sum_naive_class",
    "naive_class_open",
    "normalize_obar",
    "normalize_oburn",
    "punctured_bundle_class",
    "quotient",
    "relation_vectors",
    "root_ray",
    "smith_normal_form",
    "specialize",
    "stabilizer_components",
    "stacky_star_contraction",
    "stacky_star_subdivision",
    "to_classical",
    "to_grothendieck",
    "toric_class",
]
