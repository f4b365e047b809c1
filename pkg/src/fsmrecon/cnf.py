"""CNF encoding of state-identification constraints, plus DIMACS I/O.

Every position gets one propositional variable per register bit.  Each
unordered position pair that needs one gets a shared set of difference
variables, one per bit, each defined as the XOR of the two position bits.
Distance windows become a sequential-counter register over the difference
variables; distinctness becomes a single at-least-one clause over them.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .constraints import ConstraintSet, Distinct, HdRange, Identical


@dataclass
class Cnf:
    """A propositional formula with the position-bit variable map."""

    n_vars: int
    clauses: list[list[int]]
    position_var: dict[tuple[int, int], int]
    width: int
    n_positions: int
    trivially_unsat: bool
    pair_diff_vars: dict[tuple[int, int], list[int]] = field(default_factory=dict)


def encode_cnf(cs: ConstraintSet) -> Cnf:
    """Encode a constraint set.

    Variables 1 .. n_positions*width are the position bits, most significant
    bit first within each position; auxiliary variables follow.  An
    infeasible distance window (lo > hi after clamping) contributes the
    empty clause — the only case one is ever emitted.
    """
    width = cs.width
    n_positions = cs.n_positions
    clauses: list[list[int]] = []
    position_var = {
        (p, b): p * width + b + 1
        for p in range(n_positions)
        for b in range(width)
    }
    n_vars = n_positions * width
    pair_diff: dict[tuple[int, int], list[int]] = {}

    def diff_vars(i: int, j: int) -> list[int]:
        nonlocal n_vars
        key = (i, j) if i < j else (j, i)
        got = pair_diff.get(key)
        if got is not None:
            return got
        ds = []
        base_i = key[0] * width
        base_j = key[1] * width
        for b in range(width):
            xi = base_i + b + 1
            xj = base_j + b + 1
            n_vars += 1
            d = n_vars
            # d <-> (xi XOR xj)
            clauses.append([-d, xi, xj])
            clauses.append([-d, -xi, -xj])
            clauses.append([d, -xi, xj])
            clauses.append([d, xi, -xj])
            ds.append(d)
        pair_diff[key] = ds
        return ds

    def counter_window(ds: list[int], lo: int, hi: int) -> None:
        """Sequential-counter register asserting lo <= sum(ds) <= hi."""
        nonlocal n_vars
        n = len(ds)
        track = hi if hi < n else lo  # highest register rank we consult
        if track == 0:
            return
        # reg[k][j] (1-based k, j) <-> at least j of ds[:k] are true
        reg: list[list[int]] = [[]]
        for k in range(1, n + 1):
            row = []
            for j in range(1, min(k, track) + 1):
                n_vars += 1
                row.append(n_vars)
            reg.append(row)

        def r(k: int, j: int) -> int | None:
            """Register var, or None when constant (j==0 true, j>k false)."""
            if j <= 0 or j > track:
                return None  # j<=0 is TRUE, j>track untracked (treated FALSE)
            if j > k:
                return None  # FALSE
            return reg[k][j - 1]

        for k in range(1, n + 1):
            dk = ds[k - 1]
            for j in range(1, min(k, track) + 1):
                skj = r(k, j)
                prev_same = r(k - 1, j)
                prev_less = r(k - 1, j - 1)
                # forward: carrying j-1 and seeing dk reaches j
                if j == 1:
                    clauses.append([-dk, skj])
                elif prev_less is not None:
                    clauses.append([-prev_less, -dk, skj])
                # forward: already at j stays at j
                if prev_same is not None:
                    clauses.append([-prev_same, skj])
                # backward: reaching j needs a justification
                head = [-skj]
                if prev_same is not None:
                    head.append(prev_same)
                clauses.append(head + [dk])
                if j > 1:
                    tail = [-skj]
                    if prev_same is not None:
                        tail.append(prev_same)
                    if prev_less is not None:
                        tail.append(prev_less)
                    clauses.append(tail)
        if hi < n:
            # one more true bit past a full register would exceed hi
            for k in range(hi + 1, n + 1):
                prev_full = r(k - 1, hi)
                if prev_full is not None:
                    clauses.append([-ds[k - 1], -prev_full])
        if lo >= 1:
            final = r(n, lo)
            assert final is not None
            clauses.append([final])

    for c in cs.constraints:
        if isinstance(c, Identical):
            for b in range(width):
                xi = c.i * width + b + 1
                xj = c.j * width + b + 1
                clauses.append([-xi, xj])
                clauses.append([xi, -xj])
        elif isinstance(c, Distinct):
            clauses.append(list(diff_vars(c.i, c.j)))
        else:  # HdRange
            if c.lo > c.hi:
                clauses.append([])
                continue
            counter_window(diff_vars(c.i, c.j), c.lo, c.hi)

    return Cnf(
        n_vars=n_vars,
        clauses=clauses,
        position_var=position_var,
        width=width,
        n_positions=n_positions,
        trivially_unsat=cs.trivially_unsat,
        pair_diff_vars=pair_diff,
    )


def decode_positions(cnf: Cnf, model: list[int]) -> list[int]:
    """Position register values from a solver model (assigns[var] in {1,-1})."""
    values = []
    for p in range(cnf.n_positions):
        v = 0
        for b in range(cnf.width):
            v = (v << 1) | (1 if model[cnf.position_var[(p, b)]] > 0 else 0)
        values.append(v)
    return values


def to_dimacs(cnf: Cnf) -> str:
    """Standard DIMACS CNF text."""
    lines = [f"p cnf {cnf.n_vars} {len(cnf.clauses)}"]
    for clause in cnf.clauses:
        if clause:
            lines.append(" ".join(str(lit) for lit in clause) + " 0")
        else:
            lines.append("0")
    return "\n".join(lines) + "\n"


def variable_map_text(cnf: Cnf) -> str:
    """Sidecar mapping ``position bit variable``, one line each."""
    lines = ["# position bit variable"]
    for (p, b), var in sorted(cnf.position_var.items()):
        lines.append(f"{p} {b} {var}")
    return "\n".join(lines) + "\n"


def parse_dimacs(text: str) -> tuple[int, list[list[int]]]:
    """Read DIMACS CNF text: (variable count, clauses)."""
    n_vars: int | None = None
    n_clauses: int | None = None
    clauses: list[list[int]] = []
    pending: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ValueError(f"line {lineno}: bad problem line {line!r}")
            n_vars, n_clauses = int(parts[2]), int(parts[3])
            continue
        if n_vars is None:
            raise ValueError(f"line {lineno}: clause before problem line")
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                clauses.append(pending)
                pending = []
            else:
                if not 1 <= abs(lit) <= n_vars:
                    raise ValueError(f"line {lineno}: literal {lit} out of range")
                pending.append(lit)
    if pending:
        raise ValueError("last clause is not 0-terminated")
    if n_vars is None:
        raise ValueError("missing problem line")
    if n_clauses is not None and n_clauses != len(clauses):
        raise ValueError(f"problem line declares {n_clauses} clauses, found {len(clauses)}")
    return n_vars, clauses
