"""Training-corpus synthesis: thread splitting, reply alignment, record
assembly, and balanced JSONL export."""

from .export import (
    QuotaReport,
    SftRow,
    SynthesisJob,
    balance_and_export,
    balance_rows,
    build_sft_row,
    export_jsonl,
    load_sft_corpus,
)
from .pairing import pair_comments_with_responses, split_thread
from .records import focused_profile_json, synthesize_record

__all__ = [
    "QuotaReport",
    "SftRow",
    "SynthesisJob",
    "balance_and_export",
    "balance_rows",
    "build_sft_row",
    "export_jsonl",
    "focused_profile_json",
    "load_sft_corpus",
    "pair_comments_with_responses",
    "split_thread",
    "synthesize_record",
]
