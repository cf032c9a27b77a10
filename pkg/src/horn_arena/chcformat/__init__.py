"""Parsing, validation, normalization and fingerprinting of CHC benchmarks."""
from .ast import (
    BOOL,
    INT,
    REAL,
    Atom,
    Clause,
    Constructor,
    Datatype,
    Predicate,
    Script,
    Selector,
    Sort,
)
from .conformance import ConformanceReport, Profile, Verdict, Violation, validate_conformance
from .errors import (
    ChcFormatError,
    LexicalError,
    NormalizationError,
    SortError,
    SyntaxErrorInScript,
    UnknownCommandError,
)
from .fingerprint import Digest, canonical_fingerprint
from .normalize import merge_queries, normalize
from .parser import parse_file, parse_script
from .printer import print_script

__all__ = [
    "BOOL",
    "INT",
    "REAL",
    "Atom",
    "ChcFormatError",
    "Clause",
    "ConformanceReport",
    "Constructor",
    "Datatype",
    "Digest",
    "LexicalError",
    "NormalizationError",
    "Predicate",
    "Profile",
    "Script",
    "Selector",
    "Sort",
    "SortError",
    "SyntaxErrorInScript",
    "UnknownCommandError",
    "Verdict",
    "Violation",
    "canonical_fingerprint",
    "merge_queries",
    "normalize",
    "parse_file",
    "parse_script",
    "print_script",
    "validate_conformance",
]
