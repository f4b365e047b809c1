"""State-identification constraints over trace positions.

A captured trace pins down N+1 register snapshots ("positions").  Each
consecutive pair is tied by what the side channel said about that clocking:
an exact zero distance makes the two positions identical, anything else
bounds their distance inside the inference window clamped to the register
width.  Any two positions whose functional outputs differ must hold
different register values.  Solving these constraints at a given width
yields one candidate register value per position.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .capture import Trace


@dataclass(frozen=True, slots=True)
class Identical:
    """Positions ``i`` and ``j`` hold the same register value."""

    i: int
    j: int


@dataclass(frozen=True, slots=True)
class HdRange:
    """The distance between positions ``i`` and ``j`` lies in [lo, hi]."""

    i: int
    j: int
    lo: int
    hi: int


@dataclass(frozen=True, slots=True)
class Distinct:
    """Positions ``i`` and ``j`` hold different register values."""

    i: int
    j: int


Constraint = Identical | HdRange | Distinct


@dataclass
class ConstraintSet:
    """All constraints for one trace at one candidate register width."""

    width: int
    n_positions: int
    constraints: list[Constraint]
    trivially_unsat: bool

    def counts(self) -> dict[str, int]:
        out = {"identical": 0, "hd_range": 0, "distinct": 0}
        for c in self.constraints:
            if isinstance(c, Identical):
                out["identical"] += 1
            elif isinstance(c, HdRange):
                out["hd_range"] += 1
            else:
                out["distinct"] += 1
        return out


def r_min(trace: Trace) -> int:
    """Smallest width worth trying: distinct outputs force distinct values."""
    unique = len(set(trace.outputs))
    return max(1, math.ceil(math.log2(unique))) if unique > 1 else 1


def build_constraints(trace: Trace, width: int) -> ConstraintSet:
    """Constraints for ``trace`` at register width ``width``.

    Consecutive positions get an Identical constraint when the channel read
    an exact zero, otherwise the inference window [max(1, center-1),
    min(width, center+1)].  A window that empties after clamping (the width
    cannot carry the observed distance) marks the set trivially
    unsatisfiable but is still recorded.  Every unordered pair of positions
    with differing outputs gets one Distinct constraint; equal-output pairs
    get nothing.
    """
    if width < 1:
        raise ValueError(f"width must be >= 1, got {width}")
    constraints: list[Constraint] = []
    trivially_unsat = False
    for k, inf in enumerate(trace.inferred):
        i, j = k, k + 1
        if inf.center == 0:
            constraints.append(Identical(i, j))
        else:
            lo = max(1, inf.center - 1)
            hi = min(width, inf.center + 1)
            if lo > hi:
                trivially_unsat = True
            constraints.append(HdRange(i, j, lo, hi))
    outputs = trace.outputs
    n = len(outputs)
    for i in range(n):
        oi = outputs[i]
        for j in range(i + 1, n):
            if oi != outputs[j]:
                constraints.append(Distinct(i, j))
    return ConstraintSet(
        width=width,
        n_positions=n,
        constraints=constraints,
        trivially_unsat=trivially_unsat,
    )


def find_violation(cs: ConstraintSet, values: list[int]) -> Constraint | None:
    """First constraint the assignment breaks, or None.

    This is the independent checker: straight popcount arithmetic on the
    assigned values, sharing nothing with the CNF encoding or the solver.
    """
    if len(values) != cs.n_positions:
        raise ValueError(f"expected {cs.n_positions} values, got {len(values)}")
    limit = 1 << cs.width
    for k, v in enumerate(values):
        if not 0 <= v < limit:
            raise ValueError(f"value {v} at position {k} does not fit width {cs.width}")
    for c in cs.constraints:
        if isinstance(c, Identical):
            if values[c.i] != values[c.j]:
                return c
        elif isinstance(c, HdRange):
            if not c.lo <= (values[c.i] ^ values[c.j]).bit_count() <= c.hi:
                return c
        else:
            if values[c.i] == values[c.j]:
                return c
    return None


def evaluate(cs: ConstraintSet, values: list[int]) -> bool:
    """True iff the assignment satisfies every constraint."""
    return find_violation(cs, values) is None
