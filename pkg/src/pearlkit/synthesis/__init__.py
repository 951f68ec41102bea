from .grammar import (
    Grammar,
    corpus_dl,
    derivation_choices,
    fit_grammar,
    program_dl,
    sample_program,
    uniform_grammar,
)
from .enumeration import SearchBudget, EnumStats, enumerate_programs
from .solve import Frontier, predict, solve_task, frontier_to_json, frontier_from_json
from .compress import compress, CompressionResult

__all__ = [
    "Grammar", "corpus_dl", "derivation_choices", "fit_grammar", "program_dl",
    "sample_program", "uniform_grammar",
    "SearchBudget", "EnumStats", "enumerate_programs",
    "Frontier", "predict", "solve_task", "frontier_to_json", "frontier_from_json",
    "compress", "CompressionResult",
]
