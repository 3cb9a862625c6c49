"""Combinatorial algebras of interconnected Chen-Fliess systems."""

from .words import Alphabet, Letter, bracket, feedback_degree, format_word, parse_word, x
from .series import Series, cat_inverse, cat_product, parse_series, shift_series, star
from .shuffle import shuffle_power, shuffle_series, shuffle_words
from .quasishuffle import qsh_antipode, qsh_power_closed_form, qsh_series, qsh_words
from .composition import (GroupElement, comp_inverse, compose, feedback, group_product,
                          mixed_compose, mod_compose)

__all__ = [
    "Alphabet", "Letter", "bracket", "feedback_degree", "format_word", "parse_word", "x",
    "Series", "cat_inverse", "cat_product", "parse_series", "shift_series", "star",
    "shuffle_power", "shuffle_series", "shuffle_words",
    "qsh_antipode", "qsh_power_closed_form", "qsh_series", "qsh_words",
    "GroupElement", "comp_inverse", "compose", "feedback", "group_product", "mixed_compose",
    "mod_compose",
]

__version__ = "0.1.0"
