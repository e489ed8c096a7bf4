from .metrics import macro_f1, rmse, rmse_per_axis
from .report import FoldScores, ResultRow, f1_report, results_table
from .skeleton import simulate_skeleton
from .splits import PROTOCOLS, ProtocolSplit, compose_protocol, subject_holdout_splits
from .traces import TraceFile, compare_traces, read_trace_csv

__all__ = [
    "FoldScores",
    "PROTOCOLS",
    "ProtocolSplit",
    "ResultRow",
    "TraceFile",
    "compare_traces",
    "compose_protocol",
    "f1_report",
    "macro_f1",
    "read_trace_csv",
    "results_table",
    "rmse",
    "rmse_per_axis",
    "simulate_skeleton",
    "subject_holdout_splits",
]
