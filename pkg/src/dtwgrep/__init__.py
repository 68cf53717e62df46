"""DTW pattern matching on run-length encoded strings."""

__version__ = "0.1.0"

from .approx import approx_min_dtw_general, approx_min_dtw_tree, gap_dtw, r_simplify, two_approx_or_large
from .baseline import dtw_pair, dtw_table, edit_distance_last_row, match_last_row
from .block import GT_K, CompressedMatchRow, retrieve, solve_kdtw
from .k1 import solve_1dtw
from .lcs_index import build_lcs_index
from .metric import LetterMetric
from .rle import RleString, Run, position_to_run, rle_decode, rle_encode, run_heads
from .tree import WellSeparatedTree, hst_embed, tree_distance

__all__ = [
    "CompressedMatchRow", "GT_K", "LetterMetric", "RleString", "Run", "WellSeparatedTree",
    "approx_min_dtw_general", "approx_min_dtw_tree", "build_lcs_index", "dtw_pair", "dtw_table",
    "edit_distance_last_row", "gap_dtw", "hst_embed", "match_last_row", "position_to_run",
    "r_simplify", "retrieve", "rle_decode", "rle_encode", "run_heads", "solve_1dtw", "solve_kdtw",
    "tree_distance", "two_approx_or_large",
]
