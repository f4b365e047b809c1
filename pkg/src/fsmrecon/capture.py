"""Black-box capture: drive a hidden machine, record outputs and currents.

The device under attack exposes reset, a clock input, the functional output
vector, and an average-current reading per clock — nothing else.  A capture
run is a seeded random stimulus replayed from reset; the resulting trace
holds the observed output sequence, the per-step current, and the banded
distance estimate inferred from each current.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .channel import (
    CalibrationTable,
    DEFAULT_TABLE,
    InferredHd,
    NoiseModel,
    infer_hd,
    synthesize_current,
)
from .fsm import EncodedFsm, int_to_bits, step


class BlackBoxDevice:
    """A sequential circuit observed only through outputs and supply current.

    The device owns its noise generator, so captured noise depends only on
    the noise seed and the clocking sequence — never on how the stimulus
    was produced.
    """

    def __init__(self, encoded: EncodedFsm, noise: NoiseModel, noise_seed: int,
                 table: CalibrationTable = DEFAULT_TABLE):
        encoded.machine.require_complete()
        self._encoded = encoded
        self._noise = noise
        self._noise_seed = noise_seed
        self._table = table
        self._rng = random.Random(noise_seed)
        self._state = encoded.machine.reset

    @property
    def input_bits(self) -> int:
        return self._encoded.machine.input_bits

    @property
    def output_bits(self) -> int:
        return self._encoded.machine.output_bits

    @property
    def table(self) -> CalibrationTable:
        return self._table

    def reset(self) -> str:
        """Pulse reset: return to the reset state and report its output."""
        self._rng = random.Random(self._noise_seed)
        self._state = self._encoded.machine.reset
        return self._encoded.machine.outputs[self._state]

    def clock(self, vector: int) -> tuple[str, float]:
        """Apply one input vector: the new output and the current reading."""
        res = step(self._encoded, self._state, vector)
        self._state = res.next_state
        current = synthesize_current(res.hd, self._noise, self._rng, self._table)
        return res.output, current


@dataclass
class Trace:
    """One capture run: N input vectors, N+1 outputs, N current readings."""

    input_bits: int
    output_bits: int
    stimulus: list[int]
    outputs: list[str]
    currents: list[float]
    inferred: list[InferredHd]
    seed: int

    @property
    def n_steps(self) -> int:
        return len(self.stimulus)

    def __post_init__(self):
        n = len(self.stimulus)
        if len(self.outputs) != n + 1:
            raise ValueError(f"expected {n + 1} outputs, got {len(self.outputs)}")
        if len(self.currents) != n or len(self.inferred) != n:
            raise ValueError("currents/inferred must have one entry per step")


def choose_vector_count(state_count: int, input_bits: int, multiplier: float = 2.0) -> int:
    """Stimulus length for one capture: ceil(multiplier * states * 2**input_bits).

    The multiplier is at least 2 so a random walk has a fair chance of
    exercising each transition at least once.
    """
    if state_count < 1:
        raise ValueError(f"state count must be >= 1, got {state_count}")
    if input_bits < 1:
        raise ValueError(f"input bits must be >= 1, got {input_bits}")
    if multiplier < 2.0:
        raise ValueError(f"multiplier must be >= 2.0, got {multiplier}")
    return math.ceil(multiplier * state_count * (1 << input_bits))


def gen_stimulus(count: int, input_bits: int, seed: int) -> list[int]:
    """``count`` uniformly random input vectors from a seeded generator."""
    if count < 0:
        raise ValueError(f"count must be >= 0, got {count}")
    rng = random.Random(seed)
    return [rng.getrandbits(input_bits) for _ in range(count)]


def run_trace(device: BlackBoxDevice, stimulus: list[int], seed: int) -> Trace:
    """Reset the device and replay ``stimulus``, recording everything seen."""
    outputs = [device.reset()]
    currents: list[float] = []
    inferred: list[InferredHd] = []
    for vector in stimulus:
        out, current = device.clock(vector)
        outputs.append(out)
        currents.append(current)
        inferred.append(infer_hd(current, device.table))
    return Trace(
        input_bits=device.input_bits,
        output_bits=device.output_bits,
        stimulus=list(stimulus),
        outputs=outputs,
        currents=currents,
        inferred=inferred,
        seed=seed,
    )


def serialize_trace(trace: Trace) -> str:
    """Text form: ``N I O seed`` header, the reset output, then one
    ``input output current inferred_center`` line per step."""
    lines = [
        f"{trace.n_steps} {trace.input_bits} {trace.output_bits} {trace.seed}",
        f"reset {trace.outputs[0]}",
    ]
    for k, vector in enumerate(trace.stimulus):
        lines.append(
            f"{int_to_bits(vector, trace.input_bits)} {trace.outputs[k + 1]} "
            f"{trace.currents[k]!r} {trace.inferred[k].center}"
        )
    return "\n".join(lines) + "\n"


def parse_trace(text: str) -> Trace:
    """Inverse of :func:`serialize_trace`."""
    lines = [ln for ln in (raw.strip() for raw in text.splitlines()) if ln]
    if not lines:
        raise ValueError("empty trace text")
    head = lines[0].split()
    if len(head) != 4:
        raise ValueError(f"bad trace header {lines[0]!r}: expected 'N I O seed'")
    n_steps, input_bits, output_bits, seed = (int(x) for x in head)
    if len(lines) != n_steps + 2:
        raise ValueError(f"expected {n_steps + 2} lines, got {len(lines)}")
    reset_parts = lines[1].split()
    if len(reset_parts) != 2 or reset_parts[0] != "reset":
        raise ValueError(f"bad reset line {lines[1]!r}")
    outputs = [reset_parts[1]]
    stimulus: list[int] = []
    currents: list[float] = []
    inferred: list[InferredHd] = []
    for lineno, line in enumerate(lines[2:], start=3):
        parts = line.split()
        if len(parts) != 4:
            raise ValueError(f"line {lineno}: expected 'input output current center'")
        vector_bits, out, current_s, center_s = parts
        if len(vector_bits) != input_bits or any(c not in "01" for c in vector_bits):
            raise ValueError(f"line {lineno}: bad input vector {vector_bits!r}")
        if len(out) != output_bits or any(c not in "01" for c in out):
            raise ValueError(f"line {lineno}: bad output vector {out!r}")
        stimulus.append(int(vector_bits, 2))
        outputs.append(out)
        currents.append(float(current_s))
        center = int(center_s)
        if center == 0:
            inferred.append(InferredHd(center=0, exact=True, lo=0, hi=0))
        else:
            inferred.append(
                InferredHd(center=center, exact=False, lo=max(1, center - 1), hi=center + 1)
            )
    return Trace(
        input_bits=input_bits,
        output_bits=output_bits,
        stimulus=stimulus,
        outputs=outputs,
        currents=currents,
        inferred=inferred,
        seed=seed,
    )
