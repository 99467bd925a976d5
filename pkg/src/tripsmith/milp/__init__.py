"""Mixed-integer model builder, size contract, LP writer and toy solver."""

from .build import MilpModel, Row, VarInfo, build_model
from .decode import decode_assignment
from .lp_writer import emit_lp, render_lp
from .params import (
    DOWNSAMPLE,
    MilpParams,
    MilpSlice,
    slice_from_dataset,
    synthetic_slice,
)
from .sizes import ROW_CATEGORIES, VAR_CATEGORIES, SizeReport, count_sizes
from .solve import check_assignment, micro_solve

__all__ = [
    "DOWNSAMPLE",
    "MilpModel",
    "MilpParams",
    "MilpSlice",
    "ROW_CATEGORIES",
    "Row",
    "SizeReport",
    "VAR_CATEGORIES",
    "VarInfo",
    "build_model",
    "check_assignment",
    "count_sizes",
    "decode_assignment",
    "emit_lp",
    "micro_solve",
    "render_lp",
    "slice_from_dataset",
    "synthetic_slice",
]
