"""CNF encoder tests: structure, equivalence with the direct evaluator,
and DIMACS round-trips.

The equivalence oracle enumerates every assignment of register values to
positions and checks that the formula is satisfiable under that projection
exactly when the constraint evaluator accepts it.  Auxiliary variables are
functionally determined by the position bits, so unit propagation completes
(or refutes) each projection without search.
"""

import itertools
import random

import pytest

from conftest import cnf_projection_status, make_inferred, synthetic_trace
from fsmrecon.cnf import (
    Cnf,
    decode_positions,
    encode_cnf,
    parse_dimacs,
    to_dimacs,
    variable_map_text,
)
from fsmrecon.constraints import (
    ConstraintSet,
    Distinct,
    HdRange,
    Identical,
    build_constraints,
    evaluate,
)


def exhaustive_check(cs: ConstraintSet) -> None:
    """Assert CNF-satisfiability == evaluator verdict on every projection."""
    cnf = encode_cnf(cs)
    n = cs.n_positions
    for values in itertools.product(range(1 << cs.width), repeat=n):
        status = cnf_projection_status(cnf, list(values))
        assert status in ("sat", "conflict"), f"propagation stuck on {values}"
        expected = evaluate(cs, list(values))
        assert (status == "sat") == expected, (
            f"values={values} evaluator={expected} cnf={status}"
        )


def cset(width, n_positions, constraints):
    return ConstraintSet(
        width=width,
        n_positions=n_positions,
        constraints=list(constraints),
        trivially_unsat=any(
            isinstance(c, HdRange) and c.lo > c.hi for c in constraints
        ),
    )


# --------------------------------------------------------------- structure


def test_position_variables_are_contiguous_msb_first():
    cs = cset(3, 2, [Distinct(0, 1)])
    cnf = encode_cnf(cs)
    assert cnf.position_var == {
        (0, 0): 1, (0, 1): 2, (0, 2): 3,
        (1, 0): 4, (1, 1): 5, (1, 2): 6,
    }
    assert cnf.n_vars == 6 + 3  # three difference variables follow


def test_identical_emits_two_equivalence_clauses_per_bit():
    cs = cset(4, 2, [Identical(0, 1)])
    cnf = encode_cnf(cs)
    assert len(cnf.clauses) == 8
    assert [-1, 5] in cnf.clauses and [1, -5] in cnf.clauses
    assert cnf.n_vars == 8  # no auxiliaries


def test_distinct_emits_xor_definitions_and_or_clause():
    cs = cset(2, 2, [Distinct(0, 1)])
    cnf = encode_cnf(cs)
    ds = cnf.pair_diff_vars[(0, 1)]
    assert ds == [5, 6]
    # 4 XOR clauses per difference variable plus the at-least-one clause
    assert len(cnf.clauses) == 4 * 2 + 1
    assert ds in cnf.clauses
    d = ds[0]
    for clause in ([-d, 1, 3], [-d, -1, -3], [d, -1, 3], [d, 1, -3]):
        assert clause in cnf.clauses


def test_distinct_and_window_share_difference_variables():
    cs = cset(2, 2, [Distinct(0, 1), HdRange(0, 1, 1, 2)])
    cnf = encode_cnf(cs)
    assert len(cnf.pair_diff_vars) == 1
    # XOR definitions appear only once
    d = cnf.pair_diff_vars[(0, 1)][0]
    assert sum(1 for c in cnf.clauses if c == [-d, 1, 3]) == 1


def test_infeasible_window_emits_empty_clause():
    cs = cset(1, 2, [HdRange(0, 1, 2, 1)])
    assert cs.trivially_unsat
    cnf = encode_cnf(cs)
    assert cnf.trivially_unsat
    assert [] in cnf.clauses


def test_no_empty_clause_otherwise():
    trace = synthetic_trace(["0", "1", "1", "0"], [1, 0, 2], input_bits=2)
    cs = build_constraints(trace, width=2)
    cnf = encode_cnf(cs)
    assert not cnf.trivially_unsat
    assert all(clause for clause in cnf.clauses)


def test_decode_positions_reads_msb_first():
    cs = cset(2, 2, [Distinct(0, 1)])
    cnf = encode_cnf(cs)
    model = [0] * (cnf.n_vars + 1)
    # position 0 = 0b10, position 1 = 0b01
    model[1], model[2], model[3], model[4] = 1, -1, -1, 1
    for d in cnf.pair_diff_vars[(0, 1)]:
        model[d] = 1
    assert decode_positions(cnf, model) == [2, 1]


# ------------------------------------------------------------- equivalence


@pytest.mark.parametrize(
    "width,lo,hi",
    [
        (1, 1, 1),
        (2, 1, 1),
        (2, 2, 2),
        (2, 1, 2),
        (3, 1, 2),
        (3, 2, 3),
        (3, 3, 3),
        (3, 1, 3),
    ],
)
def test_single_window_matches_evaluator(width, lo, hi):
    exhaustive_check(cset(width, 2, [HdRange(0, 1, lo, hi)]))


def test_window_with_slack_upper_bound_matches_evaluator():
    # hi == width means the at-most side is vacuous
    exhaustive_check(cset(2, 2, [HdRange(0, 1, 1, 2), Distinct(0, 1)]))


def test_identity_chain_matches_evaluator():
    exhaustive_check(
        cset(2, 3, [Identical(0, 1), Identical(1, 2), Distinct(0, 2)])
    )


def test_three_position_mixed_chain_matches_evaluator():
    exhaustive_check(
        cset(
            2,
            3,
            [
                HdRange(0, 1, 1, 2),
                Identical(1, 2),
                Distinct(0, 1),
                Distinct(0, 2),
            ],
        )
    )


def test_four_position_trace_constraints_match_evaluator():
    trace = synthetic_trace(["00", "01", "01", "10"], [1, 0, 2], input_bits=1)
    cs = build_constraints(trace, width=2)
    exhaustive_check(cs)


def test_trivially_unsat_projections_all_conflict():
    cs = cset(1, 2, [HdRange(0, 1, 2, 1)])
    cnf = encode_cnf(cs)
    for values in itertools.product(range(2), repeat=2):
        assert cnf_projection_status(cnf, list(values)) == "conflict"


def test_randomized_constraint_sets_match_evaluator():
    rng = random.Random(424_242)
    for _ in range(60):
        width = rng.randint(1, 3)
        n = rng.randint(2, 4)
        constraints = []
        for i in range(n - 1):
            kind = rng.randrange(3)
            if kind == 0:
                constraints.append(Identical(i, i + 1))
            else:
                center = rng.randint(1, width + 1)
                lo = max(1, center - 1)
                hi = min(width, center + 1)
                if lo > hi:
                    continue
                constraints.append(HdRange(i, i + 1, lo, hi))
        for i in range(n):
            for j in range(i + 1, n):
                if rng.random() < 0.4:
                    constraints.append(Distinct(i, j))
        exhaustive_check(cset(width, n, constraints))


# ------------------------------------------------------------------ dimacs


def test_dimacs_round_trip():
    trace = synthetic_trace(["00", "01", "01", "10"], [1, 0, 2], input_bits=1)
    cs = build_constraints(trace, width=2)
    cnf = encode_cnf(cs)
    text = to_dimacs(cnf)
    n_vars, clauses = parse_dimacs(text)
    assert n_vars == cnf.n_vars
    assert clauses == cnf.clauses


def test_dimacs_header_and_terminators():
    cs = cset(1, 2, [Distinct(0, 1)])
    cnf = encode_cnf(cs)
    text = to_dimacs(cnf)
    lines = text.strip().splitlines()
    assert lines[0] == f"p cnf {cnf.n_vars} {len(cnf.clauses)}"
    assert all(line.endswith(" 0") or line == "0" for line in lines[1:])


def test_dimacs_empty_clause_round_trips():
    cs = cset(1, 2, [HdRange(0, 1, 2, 1)])
    cnf = encode_cnf(cs)
    n_vars, clauses = parse_dimacs(to_dimacs(cnf))
    assert [] in clauses
    assert n_vars == cnf.n_vars


def test_variable_map_sidecar_lists_every_position_bit():
    cs = cset(2, 3, [Distinct(0, 2)])
    cnf = encode_cnf(cs)
    text = variable_map_text(cnf)
    lines = text.strip().splitlines()
    assert lines[0].startswith("#")
    rows = [tuple(int(x) for x in line.split()) for line in lines[1:]]
    assert rows == sorted(
        (p, b, var) for (p, b), var in cnf.position_var.items()
    )


def test_parse_dimacs_accepts_comments_and_multiline_clauses():
    text = "c header\np cnf 3 2\n1 -2\n0\nc mid\n2 3 0\n"
    n_vars, clauses = parse_dimacs(text)
    assert n_vars == 3
    assert clauses == [[1, -2], [2, 3]]


@pytest.mark.parametrize(
    "text",
    [
        "p cnf x 2\n1 0\n",
        "1 2 0\n",
        "p cnf 2 1\n1 3 0\n",
        "p cnf 2 1\n1 2\n",
        "p cnf 2 2\n1 0\n",
        "",
    ],
)
def test_parse_dimacs_rejects_malformed(text):
    with pytest.raises(ValueError):
        parse_dimacs(text)
