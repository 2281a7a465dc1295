"""Finite distributive lattices, Conley forms and combinatorial dynamics."""

from .dynamics import (
    MorseRepresentation,
    Relation,
    alpha,
    attractor_lattice,
    conley_form_att,
    dual_repeller,
    inv,
    morse_representation,
    omega,
    reconstruct_attractors,
    repeller_lattice,
    verify_morse_representation,
)
from .errors import ComputeError, ConleyFormsError, ParseError, ValidationError
from .forms import (
    LatticeForm,
    MeetSemilattice,
    canonical_conley_form,
    check_extra_properties,
    check_form_axioms,
    dualize,
    gamma_from_form,
    induced_theta,
    pullback_form,
    spectral_representation,
    transition_iso,
)
from .order_core import (
    FiniteDistributiveLattice,
    FinitePoset,
    LatticeHom,
    booleanize,
    booleanize_hom,
    downset_lattice,
    ji_poset_of,
    join_irreducibles,
    lattice_from_order,
)
from .pipeline import (
    FixedPointOracle,
    PiecewiseMonotoneMap1D,
    build_outer_approximation,
    check_L,
    check_W,
    morse_tessellation,
    run_pipeline,
    tessellated_morse_decomposition,
    verify_commutative_model,
)
from .regular_closed import GridAlgebra1D, IntervalUnion

__version__ = "0.1.0"

__all__ = [
    "ComputeError",
    "ConleyFormsError",
    "FiniteDistributiveLattice",
    "FinitePoset",
    "FixedPointOracle",
    "GridAlgebra1D",
    "IntervalUnion",
    "LatticeForm",
    "LatticeHom",
    "MeetSemilattice",
    "MorseRepresentation",
    "ParseError",
    "PiecewiseMonotoneMap1D",
    "Relation",
    "ValidationError",
    "alpha",
    "attractor_lattice",
    "booleanize",
    "booleanize_hom",
    "build_outer_approximation",
    "canonical_conley_form",
    "check_L",
    "check_W",
    "check_extra_properties",
    "check_form_axioms",
    "conley_form_att",
    "downset_lattice",
    "dual_repeller",
    "dualize",
    "gamma_from_form",
    "induced_theta",
    "inv",
    "ji_poset_of",
    "join_irreducibles",
    "lattice_from_order",
    "morse_representation",
    "morse_tessellation",
    "omega",
    "pullback_form",
    "reconstruct_attractors",
    "repeller_lattice",
    "run_pipeline",
    "spectral_representation",
    "tessellated_morse_decomposition",
    "transition_iso",
    "verify_commutative_model",
    "verify_morse_representation",
]
