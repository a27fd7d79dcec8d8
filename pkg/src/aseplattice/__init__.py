"""Exact lattice-path representations of the open ASEP normalisation Z_L."""

from .models import ModelId, enumerate_paths, is_valid, total_weight, weight
from .pathcore import LabeledPath, Path, format_word, parse_word
from .symbolic import Polynomial, canonicalize, evaluate, from_text, to_text

__version__ = "0.1.0"

__all__ = [
    "LabeledPath",
    "ModelId",
    "Path",
    "Polynomial",
    "canonicalize",
    "enumerate_paths",
    "evaluate",
    "format_word",
    "from_text",
    "is_valid",
    "parse_word",
    "to_text",
    "total_weight",
    "weight",
]
