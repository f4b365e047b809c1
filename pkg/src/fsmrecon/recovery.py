"""Recovering per-position register values from one trace.

Pipeline: derive constraints at a candidate register width, encode to CNF,
and solve; on refutation grow the width by one and retry.  Before each solve
a decision-phase seed is computed by grouping trace positions into guessed
state classes (greedy state merging under determinism closure) and searching
for class codes that honor the distance-window hulls between classes.  A
good seed lets the solver descend to a model without conflicts; correctness
never depends on it, because every model is re-checked against the
constraints by an independent evaluator.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

from .capture import Trace
from .cnf import Cnf, decode_positions, encode_cnf, to_dimacs, variable_map_text
from .constraints import (
    ConstraintSet,
    HdRange,
    build_constraints,
    find_violation,
    r_min,
)
from .sat import SAT, TIMEOUT, UNSAT, CdclSolver

WIDTH_STEPS = 16  # probe r_min .. r_min + WIDTH_STEPS
_SEED_MAX_WIDTH = 12  # beyond this the class-code domain is too large
_SEARCH_BUDGET = 500_000


class ModelViolationError(RuntimeError):
    """A solver model failed the independent constraint evaluator."""


@dataclass(frozen=True)
class EncodingAssignment:
    """Register width and one value per trace position."""

    width: int
    values: tuple[int, ...]


@dataclass
class WidthAttempt:
    width: int
    status: str  # "sat" | "unsat" | "timeout" | "infeasible-window"
    seeded: bool = False
    n_vars: int = 0
    n_clauses: int = 0
    conflicts: int = 0
    decisions: int = 0
    propagations: int = 0
    restarts: int = 0
    elapsed_s: float = 0.0


@dataclass
class RecoveryResult:
    success: bool
    assignment: EncodingAssignment | None
    attempts: list[WidthAttempt] = field(default_factory=list)
    reason: str = ""  # "timeout" or "width-cap" when unsuccessful
    classes: list[int] | None = None  # partition used for seeding, if any


# ----------------------------------------------------------- partitioning


def _find(parent: list[int], x: int) -> int:
    root = x
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        parent[x], x = root, parent[x]
    return root


def _closure(
    parent: list[int],
    succs: dict[int, dict[int, tuple[int, int, int]]],
    outs: dict[int, str],
    a: int,
    b: int,
) -> int:
    """Union a and b and propagate determinism; -1 on refuted evidence.

    Merging two nodes of a deterministic machine forces their successors
    under each shared input to merge as well, recursively — and the merged
    step's distance windows must overlap, since one state stepped by one
    input moves a fixed distance.  Returns the number of unions performed —
    each passed an output-agreement check, so the count measures how much
    evidence corroborates the merge.  Mutates the three structures in
    place; callers pass copies when the merge is a trial that may be
    rejected.  Edge values are (target node, window lo, window hi).
    """
    score = 0
    stack = [(a, b)]
    while stack:
        x, y = stack.pop()
        rx, ry = _find(parent, x), _find(parent, y)
        if rx == ry:
            continue
        if outs[rx] != outs[ry]:
            return -1
        if ry < rx:
            rx, ry = ry, rx
        parent[ry] = rx
        score += 1
        sx = succs.setdefault(rx, {})
        sy = succs.pop(ry, {})
        for vec, (ty, lo_y, hi_y) in sy.items():
            if vec in sx:
                tx, lo_x, hi_x = sx[vec]
                lo, hi = max(lo_x, lo_y), min(hi_x, hi_y)
                if lo > hi:
                    return -1  # incompatible step distances
                sx[vec] = (tx, lo, hi)
                stack.append((tx, ty))
            else:
                sx[vec] = (ty, lo_y, hi_y)
    return score


def _densify(parent: list[int], n: int) -> list[int]:
    """Class per position for the first ``n`` positions, ids dense from 0."""
    remap: dict[int, int] = {}
    classes = [0] * n
    for p in range(n):
        root = _find(parent, p)
        if root not in remap:
            remap[root] = len(remap)
        classes[p] = remap[root]
    return classes


# Ceiling on positions fed to the evidence-driven merge search below; its
# trial merges copy the whole union-find per candidate, so cost grows
# roughly quadratically.  Captures past the ceiling either validate via the
# output-grouping fast path or settle for plain output grouping.
_MERGE_MAX_POSITIONS = 2000


def merge_hypothesis(
    trace: Trace, extra: list[Trace] | tuple[Trace, ...] = ()
) -> list[int]:
    """Guess which trace positions share a state, by evidence-driven merging.

    Grouping by output vector is tried first, validated by determinism
    closure over the distance windows and the rule that a nonzero-distance
    step never collapses into a self-loop; it is exact whenever every state
    owns its output vector, at near-linear cost.  Failing that, positions joined by exact zero-distance
    steps are one node from the start, and determinism closure runs over
    them: one node stepped by one input reaches one node.  A core of
    confirmed-distinct classes then grows outward: any frontier node that
    clashes with every core class is itself a new class, and otherwise the
    frontier merge corroborated by the most evidence is taken — a merge is
    valid when closure finds no output clash and no step with a nonzero
    distance window collapses into a self-loop.
    The result is a deterministic grouping consistent with everything the
    trace shows; it seeds solver decision phases, so a wrong guess on sparse
    evidence costs solver conflicts, never correctness.

    ``extra`` traces captured from the same device contribute evidence
    without contributing positions: all traces start at the one reset state,
    so their position graphs join at the root and every extra observation
    sharpens the merges.  A single walk rarely pins down machines with few
    distinct outputs; pooled walks usually do.
    """
    n = trace.n_steps + 1
    walks = [trace, *extra]
    for w in walks[1:]:
        if (w.input_bits, w.output_bits) != (
            trace.input_bits,
            trace.output_bits,
        ):
            raise ValueError("pooled traces must share input/output arity")
    offsets = []
    total = 0
    for w in walks:
        offsets.append(total)
        total += w.n_steps + 1
    parent = list(range(total))
    outs: dict[int, str] = {}
    succs: dict[int, dict[int, tuple[int, int, int]]] = {}
    nonzero: list[int] = []
    for w, off in zip(walks, offsets):
        for p in range(w.n_steps + 1):
            outs[off + p] = w.outputs[p]
        for k in range(w.n_steps):
            inf = w.inferred[k]
            succs.setdefault(off + k, {})[w.stimulus[k]] = (
                off + k + 1,
                inf.lo,
                inf.hi,
            )
            if inf.center > 0:
                nonzero.append(off + k)

    def chains_intact(parent: list[int]) -> bool:
        return all(
            _find(parent, k) != _find(parent, k + 1) for k in nonzero
        )

    def output_grouping() -> list[int]:
        key_to_class: dict[str, int] = {}
        return [
            key_to_class.setdefault(out, len(key_to_class))
            for out in trace.outputs
        ]

    # Fast path: when grouping positions by output vector survives
    # determinism closure (windows included) and keeps every
    # nonzero-distance step's endpoints apart, the outputs alone identify
    # the states — always true when each state owns its output vector.
    # One linear pass, so it also carries large captures that the
    # evidence-driven search below could not afford.
    fast_parent = list(parent)
    fast_succs = {p: dict(m) for p, m in succs.items()}
    head_of: dict[str, int] = {}
    consistent = True
    for p in range(total):
        head = head_of.setdefault(outs[p], p)
        if head != p and (
            _closure(fast_parent, fast_succs, outs, head, p) < 0
        ):
            consistent = False
            break
    if consistent and chains_intact(fast_parent):
        return _densify(fast_parent, n)

    if total > _MERGE_MAX_POSITIONS:
        # the merge search below is too costly here: shed the optional
        # pooled evidence first, past that settle for output grouping
        if extra and n <= _MERGE_MAX_POSITIONS:
            return merge_hypothesis(trace)
        return output_grouping()

    # every walk begins at the same physical reset state
    for off in offsets[1:]:
        if _closure(parent, succs, outs, 0, off) < 0:
            return output_grouping()
    # zero-distance steps: same state before and after, merge up front
    for w, off in zip(walks, offsets):
        for k, inf in enumerate(w.inferred):
            if inf.center == 0:
                if _closure(parent, succs, outs, off + k, off + k + 1) < 0:
                    return output_grouping()  # inconsistent; best effort
    if not chains_intact(parent):
        return output_grouping()

    red: list[int] = [_find(parent, 0)]
    while True:
        red = [r for r in red if _find(parent, r) == r]
        frontier = sorted(
            {
                _find(parent, t)
                for r in red
                for t, _, _ in succs.get(r, {}).values()
            }
            - set(red)
        )
        if not frontier:
            break
        best = None  # (score, frontier idx, red idx, parent, succs)
        promoted = None
        for bi, node in enumerate(frontier):
            mergeable = False
            for ri, cand in enumerate(red):
                if outs[cand] != outs[node]:
                    continue
                trial_parent = list(parent)
                trial_succs = {r: dict(m) for r, m in succs.items()}
                score = _closure(trial_parent, trial_succs, outs, cand, node)
                if score < 0 or not chains_intact(trial_parent):
                    continue
                mergeable = True
                key = (score, -bi, -ri)
                if best is None or key > best[0]:
                    best = (key, trial_parent, trial_succs)
            if not mergeable:
                promoted = node  # distinct from every class: a new one
                break
        if promoted is not None:
            red.append(promoted)
        else:
            _, parent, succs = best

    return _densify(parent, n)


def class_hulls(
    cs: ConstraintSet, classes: list[int], *, best_effort: bool = False
) -> dict[tuple[int, int], tuple[int, int]] | None:
    """Distance-window hull per class pair.

    Returns None when no seed can exist (a window inside one class, or
    contradictory windows between two).  With ``best_effort=True`` such
    contradictions — expected when the partition is a lax guess — drop the
    offending window instead, and the remaining hulls are returned.
    """
    hulls: dict[tuple[int, int], tuple[int, int]] = {}
    dead: set[tuple[int, int]] = set()
    for c in cs.constraints:
        if not isinstance(c, HdRange):
            continue
        a, b = classes[c.i], classes[c.j]
        if a == b:
            if best_effort:
                continue
            return None
        key = (a, b) if a < b else (b, a)
        if key in dead:
            continue
        lo, hi = hulls.get(key, (0, cs.width))
        lo, hi = max(lo, c.lo), min(hi, c.hi)
        if lo > hi:
            if best_effort:
                hulls.pop(key, None)
                dead.add(key)  # conflicting evidence: constrain by
                continue  # distinctness alone
            return None
        hulls[key] = (lo, hi)
    return hulls


def search_class_codes(
    n_classes: int,
    width: int,
    hulls: dict[tuple[int, int], tuple[int, int]],
) -> list[int] | None:
    """Search for pairwise-distinct class codes meeting every hull.

    Most-constrained-first ordering with forward checking; deterministic.
    Returns None when no assignment exists or the node budget runs out.
    """
    if width > _SEED_MAX_WIDTH or n_classes > (1 << width):
        return None
    size = 1 << width
    neighbors: dict[int, list[tuple[int, int, int]]] = {}
    for (a, b), (lo, hi) in hulls.items():
        neighbors.setdefault(a, []).append((b, lo, hi))
        neighbors.setdefault(b, []).append((a, lo, hi))
    domains = [set(range(size)) for _ in range(n_classes)]
    codes = [-1] * n_classes
    budget = _SEARCH_BUDGET

    def bt() -> bool:
        nonlocal budget
        cid = -1
        best = size + 1
        for c in range(n_classes):
            if codes[c] < 0 and len(domains[c]) < best:
                best = len(domains[c])
                cid = c
        if cid < 0:
            return True
        for code in sorted(domains[cid]):
            budget -= 1
            if budget <= 0:
                raise _BudgetExhausted
            codes[cid] = code
            removed: list[tuple[int, int]] = []
            wiped = False
            for other in range(n_classes):
                if codes[other] < 0 and code in domains[other]:
                    domains[other].discard(code)  # codes stay distinct
                    removed.append((other, code))
                    if not domains[other]:
                        wiped = True
                        break
            if not wiped:
                for other, lo, hi in neighbors.get(cid, ()):
                    if codes[other] >= 0:
                        continue
                    for cand in sorted(domains[other]):
                        hd = (cand ^ code).bit_count()
                        if not lo <= hd <= hi:
                            domains[other].discard(cand)
                            removed.append((other, cand))
                    if not domains[other]:
                        wiped = True
                        break
            if not wiped and bt():
                return True
            for other, cand in removed:
                domains[other].add(cand)
            codes[cid] = -1
        return False

    try:
        if not bt():
            return None
    except _BudgetExhausted:
        return None
    return codes


class _BudgetExhausted(Exception):
    pass


def build_phases(
    cnf: Cnf, classes: list[int], codes: list[int]
) -> dict[int, bool]:
    """Decision phases priming each position's bits with its class code."""
    phases: dict[int, bool] = {}
    width = cnf.width
    for p in range(cnf.n_positions):
        code = codes[classes[p]]
        for b in range(width):
            phases[cnf.position_var[(p, b)]] = bool(
                (code >> (width - 1 - b)) & 1
            )
    return phases


# -------------------------------------------------------------- main loop


def recover_encodings(
    trace: Trace,
    *,
    width_start: int | None = None,
    width_steps: int = WIDTH_STEPS,
    timeout_ms: int | None = 1_000_000,
    phase_seeding: bool = True,
    seed_traces: list[Trace] | tuple[Trace, ...] = (),
    dimacs_dir: str | None = None,
    dimacs_prefix: str = "",
) -> RecoveryResult:
    """Find a register width and per-position values satisfying the trace.

    Tries widths ``r0 .. r0 + width_steps`` where r0 defaults to the
    information-theoretic minimum for the outputs seen.  ``timeout_ms``
    bounds each individual solve.  Every model returned by the solver is
    re-validated by the direct constraint evaluator before being trusted.
    ``seed_traces`` are earlier captures from the same device that sharpen
    the state-grouping guess behind phase seeding; they never contribute
    constraints, so the solved problem is the same with or without them.
    """
    r0 = width_start if width_start is not None else r_min(trace)
    if r0 < 1:
        raise ValueError("width_start must be at least 1")
    timeout_s = None if timeout_ms is None else timeout_ms / 1000.0
    result = RecoveryResult(success=False, assignment=None)

    classes: list[int] | None = None
    if phase_seeding:
        classes = merge_hypothesis(trace, seed_traces)
        result.classes = classes

    for width in range(r0, r0 + width_steps + 1):
        cs = build_constraints(trace, width)
        if cs.trivially_unsat:
            result.attempts.append(
                WidthAttempt(width=width, status="infeasible-window")
            )
            continue
        cnf = encode_cnf(cs)

        phases: dict[int, bool] | None = None
        if classes is not None:
            hulls = class_hulls(cs, classes, best_effort=True)
            codes = search_class_codes(max(classes) + 1, width, hulls)
            if codes is None and hulls:
                # hulls may be jointly unsatisfiable under a guessed
                # partition; a distinctness-only seed still beats none
                codes = search_class_codes(max(classes) + 1, width, {})
            if codes is not None:
                phases = build_phases(cnf, classes, codes)

        if dimacs_dir is not None:
            base = os.path.join(dimacs_dir, f"{dimacs_prefix}width{width}")
            with open(base + ".cnf", "w", encoding="ascii") as fh:
                fh.write(to_dimacs(cnf))
            with open(base + ".vars", "w", encoding="ascii") as fh:
                fh.write(variable_map_text(cnf))

        solver = CdclSolver(
            cnf.n_vars,
            cnf.clauses,
            initial_phases=phases,
            timeout_s=timeout_s,
            assume_clean=True,
        )
        out = solver.solve()
        attempt = WidthAttempt(
            width=width,
            status=out.status,
            seeded=phases is not None,
            n_vars=cnf.n_vars,
            n_clauses=len(cnf.clauses),
            conflicts=out.stats.conflicts,
            decisions=out.stats.decisions,
            propagations=out.stats.propagations,
            restarts=out.stats.restarts,
            elapsed_s=out.stats.elapsed_s,
        )
        result.attempts.append(attempt)

        if out.status == SAT:
            values = decode_positions(cnf, out.model)
            violation = find_violation(cs, values)
            if violation is not None:
                raise ModelViolationError(
                    f"model at width {width} violates {violation!r}"
                )
            result.success = True
            result.assignment = EncodingAssignment(
                width=width, values=tuple(values)
            )
            return result
        if out.status == TIMEOUT:
            result.reason = "timeout"
            return result
        assert out.status == UNSAT

    result.reason = "width-cap"
    return result
