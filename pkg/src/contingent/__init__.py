"""Contingency logic under neighborhood semantics: formulas, finite models,
frame transforms, bounded countermodel search and a Hilbert proof checker."""

from .syntax import (
    And, Atom, Bot, Box, Delta, Formula, Iff, Imp, Meta, Not, Or, Top,
    instantiate, is_tautology_instance, parse, print_formula,
)
from .semantics import (
    ClassVerdict, Exhaustive, Frame, Model, PropertySet, Sample,
    check_property, evaluate, is_valid_in_frame, is_valid_on_class, truth_set,
)
from .transform import close_under, complementation, star_translate, supplementation
from .proof import Derivation, check_derivation, lattice_edges, load_derivation
from .search import correspondence_check, enumerate_frames, find_countermodel, paper_fixture_suite

__version__ = "0.1.0"
