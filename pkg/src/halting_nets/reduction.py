"""Dovetailing a machine against net construction, and why budgets fail.

Round ``r`` (1-based) gives the machine one quantum of steps and then builds
net layer ``r - 1``. While the machine runs, layers are full dyadic grid
layers (Method One). From the round in which it is first seen halted, layers
are punctured around the cube's centre with a radius frozen at that moment
(Method Two). After ``M`` rounds one closing layer ``M`` is built with the
method then in force, without further machine time, and the accumulated
level-``M`` net goes to :func:`~halting_nets.homology.q_hat`.

The procedure is sound within its budget, and every fixed budget is fooled
by a machine that halts one step later: see :func:`fooling_program`.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .homology import Verdict, q_hat
from .machines import RUNNING, HaltStatus, Program, halt_after, init, run_quantum
from .netbuilder import (
    Cube,
    DyadicPoint,
    Method,
    NetStream,
    Punctured,
    StreamLayer,
    certified_net,
    check_dimension,
    check_level,
    layer_grid,
    puncture_radius_sq_grid,
    punctured_layer_grid,
)


def _frac(x: Fraction | None) -> str | None:
    return None if x is None else str(x)


@dataclass(frozen=True)
class RoundLog:
    round: int
    machine_status: HaltStatus
    steps_executed: int
    method: Method
    layer_size: int
    net_size: int
    epsilon_bound: Fraction
    d_squared: Fraction | None = None
    machine_ran: bool = True

    def __post_init__(self):
        if (self.method is Method.TWO) != self.machine_status.halted:
            raise ValueError("method must be Two exactly when the machine has halted")
        if (self.d_squared is not None) != (self.method is Method.TWO):
            raise ValueError("d_squared is recorded exactly for Method Two rounds")

    def to_dict(self) -> dict:
        return {
            "round": self.round,
            "machine_status": str(self.machine_status),
            "steps_executed": self.steps_executed,
            "machine_ran": self.machine_ran,
            "method": self.method.value,
            "layer_size": self.layer_size,
            "net_size": self.net_size,
            "epsilon_bound": _frac(self.epsilon_bound),
            "d_squared": _frac(self.d_squared),
        }


@dataclass(frozen=True)
class ReductionReport:
    program: str
    input: int
    quantum: int
    level_budget: int
    dimension: int
    rounds: tuple[RoundLog, ...]
    final_verdict: Verdict
    steps_executed: int
    ground_truth: HaltStatus | None = None
    stream: NetStream | None = field(default=None, compare=False, repr=False)

    @property
    def answer(self) -> str:
        return self.final_verdict.answer

    @property
    def misclassified(self) -> bool:
        gt = self.ground_truth
        return (
            gt is not None
            and gt.halted
            and gt.halted_at > self.steps_executed
            and not self.final_verdict.nontrivial
        )

    def to_dict(self) -> dict:
        return {
            "program": self.program,
            "input": self.input,
            "quantum": self.quantum,
            "level_budget": self.level_budget,
            "dimension": self.dimension,
            "steps_executed": self.steps_executed,
            "rounds": [r.to_dict() for r in self.rounds],
            "final_verdict": self.final_verdict.to_dict(),
            "answer": self.answer,
            "ground_truth": None if self.ground_truth is None else str(self.ground_truth),
            "misclassified": self.misclassified,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


@lru_cache(maxsize=64)
def _stream(switch: int | None, levels: int, D: int) -> NetStream:
    C = DyadicPoint.center(D)
    acc = np.zeros((0, D), dtype=np.int64)
    d_sq = None
    layers = []
    for m in range(levels):
        if m > 0:
            acc = acc << 1
        if switch is not None and m == switch:
            d_sq = puncture_radius_sq_grid(acc, m, C)
        if d_sq is None:
            new, tag, method = layer_grid(m, D), Cube(), Method.ONE
        else:
            new, tag, method = punctured_layer_grid(m, d_sq, C, D), Punctured(C, d_sq), Method.TWO
        acc = np.concatenate([acc, new])
        layers.append(StreamLayer(m, certified_net(D, m, acc, tag), method))
    return NetStream(tuple(layers), switch)


@lru_cache(maxsize=64)
def _final_verdict(switch: int | None, levels: int, D: int) -> Verdict:
    # streams are keyed by the same triple, so the oracle's answer is too
    return q_hat(_stream(switch, levels, D).accumulated, levels - 1)


def switch_round(statuses: Sequence[HaltStatus]) -> int | None:
    """Index of the first halted status; raises if a later status is Running again."""
    first = None
    for i, st in enumerate(statuses):
        if st.halted and first is None:
            first = i
        elif first is not None and not st.halted:
            raise ValueError(f"status sequence is not monotone: Running at round {i + 1} after a halt")
    return first


def run_R(status_per_round: Sequence[HaltStatus], levels: int, D: int = 3) -> NetStream:
    """Net stream for ``levels`` rounds given the machine's status after each round.

    Layer ``m`` uses ``status_per_round[m]``. The puncture radius is fixed at
    the first halted round from all points built before it.
    """
    levels, D = check_level(levels, "levels"), check_dimension(D)
    if len(status_per_round) < levels:
        raise ValueError("need one status per level")
    switch = switch_round(status_per_round)
    if switch is not None and switch >= levels:
        switch = None
    return _stream(switch, levels, D)


def ground_truth(program: Program, n: int, max_steps: int) -> HaltStatus:
    """Direct simulation for ``max_steps`` steps; Running only means "not yet"."""
    if max_steps < 1:
        return RUNNING
    return run_quantum(program, init(program, n), max_steps)[1]


def default_truth_steps(quantum: int, level_budget: int) -> int:
    return max(100_000, 10 * quantum * level_budget)


def run_F(
    program: Program,
    n: int,
    quantum: int = 1000,
    level_budget: int = 4,
    D: int = 3,
    truth_steps: int | None = None,
) -> ReductionReport:
    """Truncated decision procedure: ``level_budget`` dovetailed rounds, then one oracle call.

    ``truth_steps`` bounds the independent simulation recorded as ground
    truth; 0 skips it.
    """
    if quantum < 1:
        raise ValueError("quantum must be at least 1")
    if level_budget < 1:
        raise ValueError("level budget must be at least 1")
    D = check_dimension(D)
    state = init(program, n)
    status = RUNNING
    statuses, steps = [], []
    for _ in range(level_budget):
        if not status.halted:
            state, status = run_quantum(program, state, quantum)
        statuses.append(status)
        steps.append(state.steps_executed)
    statuses.append(status)
    steps.append(state.steps_executed)

    stream = run_R(statuses, level_budget + 1, D)
    rounds = []
    for r, (layer, st, s) in enumerate(zip(stream.layers, statuses, steps), start=1):
        prev = stream.layers[r - 2].net if r > 1 else None
        tag = layer.net.space_tag
        rounds.append(
            RoundLog(
                round=r,
                machine_status=st,
                steps_executed=s,
                method=layer.method,
                layer_size=len(layer.net) - (len(prev) if prev is not None else 0),
                net_size=len(layer.net),
                epsilon_bound=layer.net.epsilon_bound,
                d_squared=tag.d_squared if isinstance(tag, Punctured) else None,
                machine_ran=r <= level_budget,
            )
        )
    verdict = _final_verdict(stream.switch_level, level_budget + 1, D)
    if truth_steps is None:
        truth_steps = default_truth_steps(quantum, level_budget)
    truth = ground_truth(program, n, truth_steps) if truth_steps > 0 else None
    return ReductionReport(
        program=program.name,
        input=n,
        quantum=quantum,
        level_budget=level_budget,
        dimension=D,
        rounds=tuple(rounds),
        final_verdict=verdict,
        steps_executed=state.steps_executed,
        ground_truth=truth,
        stream=stream,
    )


def fooling_program(quantum: int, M: int) -> Program:
    """A machine halting one step after ``M`` rounds of ``quantum`` steps run out."""
    if quantum * M < 1:
        raise ValueError("quantum * M must be at least 1")
    return halt_after(quantum * M + 1)
