"""Combinatorial kernel for shapes of oriented graded posets: molecules,
Gray products, cylinders, marked structures, horns, and a lemma-checking
verification harness."""

from .cylinder import (
    gray_cylinder,
    inverted_cylinder,
    invertor_shape,
    projection,
    unit_shape,
    unitor_shape,
)
from .gray import gray, gray_boundary_decomposition, op_swap_iso
from .contexts import (
    AtomicHorn,
    ContextShape,
    MarkedHorn,
    atomic_horn,
    classified_context,
    is_a_context,
    marked_horn,
    pp_horn,
    pp_marked_horn,
)
from .marked import (
    MarkedMap,
    MarkedShape,
    generators,
    gray_marked,
    pushout_product,
    residual,
)
from .molecule import (
    Inclusion,
    Molecule,
    arrow,
    atom,
    dual,
    globe,
    is_round,
    merger,
    op,
    paste,
    paste_at,
    point,
    recognise_generalised_pasting,
    reconstruct,
)
from .poset import OgPoset, all_isos, build, find_iso

__all__ = [
    "AtomicHorn",
    "ContextShape",
    "Inclusion",
    "MarkedHorn",
    "MarkedMap",
    "MarkedShape",
    "Molecule",
    "OgPoset",
    "all_isos",
    "arrow",
    "atom",
    "atomic_horn",
    "build",
    "classified_context",
    "dual",
    "find_iso",
    "generators",
    "globe",
    "gray",
    "gray_boundary_decomposition",
    "gray_cylinder",
    "gray_marked",
    "inverted_cylinder",
    "invertor_shape",
    "is_a_context",
    "is_round",
    "marked_horn",
    "merger",
    "op",
    "op_swap_iso",
    "paste",
    "paste_at",
    "point",
    "pp_horn",
    "pp_marked_horn",
    "projection",
    "pushout_product",
    "recognise_generalised_pasting",
    "reconstruct",
    "residual",
    "unit_shape",
    "unitor_shape",
]
