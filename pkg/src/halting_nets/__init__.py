"""Exact epsilon-nets, cubical homology and a dovetailed halting reduction."""
from .cubical import CubicalCell, CubicalComplex, boundary_matrix, build_cubical, euler_characteristic
from .estimators import BettiTransformer, VoidClassifier
from .homology import BettiVector, Verdict, betti, q_hat, rank_gf2
from .machines import (
    HaltStatus,
    MachineState,
    Program,
    ProgramError,
    collatz,
    format_program,
    halt_after,
    init,
    loop_forever,
    parse_program,
    run_quantum,
    sample_programs,
)
from .netbuilder import (
    DyadicPoint,
    EpsNet,
    Method,
    NetStream,
    OffGridError,
    boundary_net,
    covering_radius_sq,
    cumulative_net,
    grid_layer,
    puncture_radius_sq,
    punctured_layer,
    punctured_net,
    squared_distance,
)
from .netio import format_net, parse_net
from .reduction import ReductionReport, RoundLog, fooling_program, ground_truth, run_F, run_R

__version__ = "0.1.0"

__all__ = [
    "BettiTransformer",
    "BettiVector",
    "CubicalCell",
    "CubicalComplex",
    "DyadicPoint",
    "EpsNet",
    "HaltStatus",
    "MachineState",
    "Method",
    "NetStream",
    "OffGridError",
    "Program",
    "ProgramError",
    "ReductionReport",
    "RoundLog",
    "Verdict",
    "VoidClassifier",
    "betti",
    "boundary_matrix",
    "boundary_net",
    "build_cubical",
    "collatz",
    "covering_radius_sq",
    "cumulative_net",
    "euler_characteristic",
    "fooling_program",
    "format_net",
    "format_program",
    "grid_layer",
    "ground_truth",
    "halt_after",
    "init",
    "loop_forever",
    "parse_net",
    "parse_program",
    "puncture_radius_sq",
    "punctured_layer",
    "punctured_net",
    "q_hat",
    "rank_gf2",
    "run_F",
    "run_R",
    "run_quantum",
    "sample_programs",
    "squared_distance",
]
