"""Optimal synthesis of 4-bit reversible functions over NOT/CNOT/TOF/TOF4."""

from .bfs import build, expanded_counts
from .canonical import canonical_rep, equivalence_class, is_canonical
from .gates import Circuit, Gate, format_circuit, parse_circuit
from .perm import IDENTITY, compose, format_perm, from_images, inverse, parse_perm, to_images
from .store import CanonicalTable, load, save
from .synth import EXCEEDS, ExpandMode, SearchConfig, SizeExceedsError, size_of, synthesize

__version__ = "0.1.0"

__all__ = [
    "build", "expanded_counts", "canonical_rep", "equivalence_class", "is_canonical",
    "Circuit", "Gate", "format_circuit", "parse_circuit", "IDENTITY", "compose",
    "format_perm", "from_images", "inverse", "parse_perm", "to_images", "CanonicalTable",
    "load", "save", "EXCEEDS", "ExpandMode", "SearchConfig", "SizeExceedsError", "size_of",
    "synthesize",
]
