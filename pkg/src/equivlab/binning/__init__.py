"""Small-blocklength simulation of the helper binning schemes."""

from .codes import (
    BinningCode, HashBins, HelperIndex, Message, SimConfig, TableBins, alice_encode,
    all_sequences, bob_decode, build_code, helper_encode, seq_keys,
)
from .equivocation import exact_equivocation
from .experiment import CSV_HEADER, SimReport, draw_source, run_experiment
from .typicality import jointly_typical, typical, typical_completions

__all__ = [
    "BinningCode", "HashBins", "HelperIndex", "Message", "SimConfig", "TableBins",
    "alice_encode", "all_sequences", "bob_decode", "build_code", "helper_encode", "seq_keys",
    "exact_equivocation", "CSV_HEADER", "SimReport", "draw_source", "run_experiment",
    "jointly_typical", "typical", "typical_completions",
]
