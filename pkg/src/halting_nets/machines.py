"""One-tape Turing machines with step-budgeted execution.

Machines are written in a small line-based text format::

    # optional comment lines start with '#'
    states: q0 q1 H ; init: q0 ; halt: H
    q0 0 -> q1 1 R
    q0 * -> q0 * S

The header names every state, the initial state and zero or more halting
states (segments may appear in any order, ``halt:`` may be empty). Each
transition line is ``STATE READ -> NEXT WRITE MOVE`` with symbols drawn from
``0``, ``1`` and ``_`` (blank) and moves ``L``, ``R`` or ``S`` (stay).

A ``*`` in the READ column covers every symbol that has no explicit rule for
that state, regardless of line order. A ``*`` in the WRITE column writes back
whatever was read. The table must be total on non-halting states and halting
states must have no transitions.

Inputs are written in binary with the most significant bit under the head at
position 0; zero is the single symbol ``0``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Mapping

BLANK = "_"
SYMBOLS = ("0", "1", BLANK)
MOVES = {"L": -1, "R": 1, "S": 0}
WILDCARD = "*"


class ProgramError(ValueError):
    """Malformed or inconsistent machine description."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class Program:
    states: tuple[str, ...]
    transitions: Mapping[tuple[str, str], tuple[str, str, str]]
    initial: str
    halting: frozenset[str]
    name: str = field(default="program", compare=False)

    def __post_init__(self):
        known = set(self.states)
        if len(known) != len(self.states):
            raise ProgramError("duplicate state in state list")
        if self.initial not in known:
            raise ProgramError(f"undefined state {self.initial}")
        for q in sorted(self.halting):
            if q not in known:
                raise ProgramError(f"undefined state {q}")
        for (q, sym), (nxt, write, move) in self.transitions.items():
            for s in (q, nxt):
                if s not in known:
                    raise ProgramError(f"undefined state {s}")
            if sym not in SYMBOLS or write not in SYMBOLS:
                raise ProgramError(f"bad symbol in transition from {q}")
            if move not in MOVES:
                raise ProgramError(f"bad move {move!r} in transition from {q}")
            if q in self.halting:
                raise ProgramError(f"transition out of halting state {q}")
        for q in self.states:
            if q in self.halting:
                continue
            for sym in SYMBOLS:
                if (q, sym) not in self.transitions:
                    raise ProgramError(f"no transition for state {q} on symbol {sym}")

    def to_text(self) -> str:
        return format_program(self)


@dataclass
class MachineState:
    tape: dict[int, str]
    head: int
    control: str
    steps_executed: int = 0

    def copy(self) -> "MachineState":
        return MachineState(dict(self.tape), self.head, self.control, self.steps_executed)

    def read_tape(self) -> str:
        """Non-blank span of the tape as a string, blanks inside shown as ``_``."""
        if not self.tape:
            return ""
        lo, hi = min(self.tape), max(self.tape)
        return "".join(self.tape.get(i, BLANK) for i in range(lo, hi + 1))


@dataclass(frozen=True)
class HaltStatus:
    """``Running`` when ``halted_at`` is None, otherwise ``HaltedAt(halted_at)``."""

    halted_at: int | None = None

    @property
    def halted(self) -> bool:
        return self.halted_at is not None

    def __str__(self):
        return "Running" if self.halted_at is None else f"HaltedAt({self.halted_at})"

    def to_json(self):
        return str(self)


RUNNING = HaltStatus()


# ---------------------------------------------------------------- text format

_HEADER_KEYS = ("states", "init", "halt")
_RULE = re.compile(r"^(\S+)\s+(\S+)\s*->\s*(\S+)\s+(\S+)\s+(\S+)$")


def _parse_header(line: str, lineno: int) -> dict[str, list[str]]:
    found: dict[str, list[str]] = {}
    for segment in line.split(";"):
        key, sep, value = segment.partition(":")
        key = key.strip()
        if not sep or key not in _HEADER_KEYS:
            raise ProgramError(f"bad header segment {segment.strip()!r}", lineno)
        if key in found:
            raise ProgramError(f"repeated header key {key!r}", lineno)
        found[key] = value.split()
    for key in _HEADER_KEYS:
        if key not in found:
            raise ProgramError(f"header is missing {key!r}", lineno)
    if len(found["init"]) != 1:
        raise ProgramError("init: needs exactly one state", lineno)
    if not found["states"]:
        raise ProgramError("states: is empty", lineno)
    return found


def parse_program(text: str, name: str = "program") -> Program:
    """Parse the text format described in the module docstring."""
    header = None
    explicit: dict[tuple[str, str], tuple[str, str, str]] = {}
    wild: dict[str, tuple[str, str, str]] = {}
    origin: dict[tuple[str, str], int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if header is None:
            header = _parse_header(line, lineno)
            known = set(header["states"])
            for q in header["init"] + header["halt"]:
                if q not in known:
                    raise ProgramError(f"undefined state {q}", lineno)
            continue
        m = _RULE.match(line)
        if m is None:
            raise ProgramError(f"cannot parse transition {line!r}", lineno)
        q, sym, nxt, write, move = m.groups()
        for s in (q, nxt):
            if s not in known:
                raise ProgramError(f"undefined state {s}", lineno)
        if sym not in SYMBOLS and sym != WILDCARD:
            raise ProgramError(f"unknown symbol {sym!r}", lineno)
        if write not in SYMBOLS and write != WILDCARD:
            raise ProgramError(f"unknown symbol {write!r}", lineno)
        if move not in MOVES:
            raise ProgramError(f"unknown move {move!r}", lineno)
        if q in header["halt"]:
            raise ProgramError(f"transition out of halting state {q}", lineno)
        if sym == WILDCARD:
            if q in wild:
                raise ProgramError(f"second wildcard rule for state {q}", lineno)
            wild[q] = (nxt, write, move)
            origin[(q, WILDCARD)] = lineno
        else:
            if write == WILDCARD:
                write = sym
            if (q, sym) in explicit:
                raise ProgramError(f"duplicate rule for ({q}, {sym})", lineno)
            explicit[(q, sym)] = (nxt, write, move)
    if header is None:
        raise ProgramError("empty machine description")

    table = dict(explicit)
    for q, (nxt, write, move) in wild.items():
        for sym in SYMBOLS:
            if (q, sym) not in table:
                table[(q, sym)] = (nxt, sym if write == WILDCARD else write, move)
    return Program(
        states=tuple(header["states"]),
        transitions=table,
        initial=header["init"][0],
        halting=frozenset(header["halt"]),
        name=name,
    )


def format_program(program: Program) -> str:
    halt = [q for q in program.states if q in program.halting]
    lines = [
        f"# {program.name}",
        f"states: {' '.join(program.states)} ; init: {program.initial} ; halt: {' '.join(halt)}".rstrip(),
    ]
    for q in program.states:
        for sym in SYMBOLS:
            rule = program.transitions.get((q, sym))
            if rule is not None:
                lines.append(f"{q} {sym} -> {rule[0]} {rule[1]} {rule[2]}")
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------------ execution

def encode_input(n: int) -> dict[int, str]:
    if n < 0:
        raise ValueError("input must be a natural number")
    return {i: bit for i, bit in enumerate(format(n, "b"))}


def init(program: Program, n: int) -> MachineState:
    return MachineState(tape=encode_input(n), head=0, control=program.initial)


def status_of(program: Program, state: MachineState) -> HaltStatus:
    if state.control in program.halting:
        return HaltStatus(state.steps_executed)
    return RUNNING


def step(program: Program, state: MachineState) -> MachineState:
    """Execute one transition in place and return ``state``; halted machines are left alone."""
    if state.control in program.halting:
        return state
    tape = state.tape
    nxt, write, move = program.transitions[(state.control, tape.get(state.head, BLANK))]
    if write == BLANK:
        tape.pop(state.head, None)
    else:
        tape[state.head] = write
    state.head += MOVES[move]
    state.control = nxt
    state.steps_executed += 1
    return state


def run_quantum(program: Program, state: MachineState, quantum: int) -> tuple[MachineState, HaltStatus]:
    """Run at most ``quantum`` steps on a copy of ``state``.

    Stops early when a halting state is reached. The returned status counts
    steps from the initial configuration, so ``HaltedAt(s)`` is the same no
    matter how the run was split into quanta.
    """
    if quantum < 1:
        raise ValueError("quantum must be at least 1")
    state = state.copy()
    table = program.transitions
    halting = program.halting
    tape = state.tape
    head, control, steps = state.head, state.control, state.steps_executed
    for _ in range(quantum):
        if control in halting:
            break
        control, write, move = table[(control, tape.get(head, BLANK))]
        if write == BLANK:
            tape.pop(head, None)
        else:
            tape[head] = write
        head += MOVES[move]
        steps += 1
    state.head, state.control, state.steps_executed = head, control, steps
    return state, status_of(program, state)


# ------------------------------------------------------------- sample library

def loop_forever() -> Program:
    return parse_program("states: q0 ; init: q0 ; halt:\nq0 * -> q0 * S\n", name="loop_forever")


def halt_after(s: int) -> Program:
    """A machine that halts at exactly step ``s`` on every input."""
    if s < 1:
        raise ValueError("halt_after needs s >= 1")
    names = [f"c{i}" for i in range(s)] + ["H"]
    table = {}
    for i in range(s):
        for sym in SYMBOLS:
            table[(names[i], sym)] = (names[i + 1], sym, "S")
    return Program(tuple(names), table, "c0", frozenset({"H"}), name=f"halt_after_{s}")


# Collatz on a binary tape, most significant bit leftmost.
#   seek    walk right to the blank after the last bit, then step back
#   lsb     last bit 0: erase it (n -> n/2) and stay on the new last bit;
#           last bit 1: look left to tell n == 1 from larger odd n
#   check   blank on the left means n == 1, so halt
#   tPC     n -> 3n+1 computed right to left as n + 2n + 1, where P is the
#           previous bit of n (current bit of 2n) and C the carry (0..2)
#   zero    the tape ran empty (input 0): spin forever
_COLLATZ = """\
states: seek lsb check zero t00 t01 t02 t10 t11 t12 H ; init: seek ; halt: H
seek 0 -> seek 0 R
seek 1 -> seek 1 R
seek _ -> lsb _ L
lsb 0 -> lsb _ L
lsb 1 -> check 1 L
lsb _ -> zero _ S
check _ -> H _ S
check 0 -> t01 0 R
check 1 -> t01 1 R
zero * -> zero * S
"""


def _collatz_text() -> str:
    lines = [_COLLATZ]
    for p in (0, 1):
        for c in (0, 1, 2):
            for b in (0, 1):
                total = b + p + c
                lines.append(f"t{p}{c} {b} -> t{b}{total // 2} {total % 2} L\n")
            if p == 0 and c == 0:
                lines.append("t00 _ -> seek _ R\n")
            else:
                total = p + c
                lines.append(f"t{p}{c} _ -> t0{total // 2} {total % 2} L\n")
    return "".join(lines)


def collatz() -> Program:
    """Halts on input n iff the Collatz iteration from n reaches 1."""
    return parse_program(_collatz_text(), name="collatz")


def sample_programs() -> dict[str, Program]:
    programs = {"loop_forever": loop_forever(), "collatz": collatz()}
    for s in (1, 3, 7, 25, 60):
        p = halt_after(s)
        programs[p.name] = p
    return programs
