"""Conflict-driven clause-learning satisfiability solver.

Self-contained and deterministic: two-literal watching, first-UIP conflict
analysis, activity-ordered decisions with ties broken by variable index,
saved phases (seedable via ``initial_phases``), Luby-scheduled restarts,
and bounded learned-clause retention.  Given the same formula and options
the solver always takes the same path.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

SAT = "sat"
UNSAT = "unsat"
TIMEOUT = "timeout"

_RESCALE_LIMIT = 1e100


@dataclass
class SolverStats:
    decisions: int = 0
    conflicts: int = 0
    propagations: int = 0
    restarts: int = 0
    learned: int = 0
    elapsed_s: float = 0.0


@dataclass
class SolveOutcome:
    status: str
    model: list[int] | None  # index by variable, entries +1 / -1
    stats: SolverStats


def luby(i: int) -> int:
    """i-th element (0-based) of the Luby restart sequence 1,1,2,1,1,2,4,..."""
    while True:
        k = (i + 1).bit_length()
        if (i + 1) == (1 << k) - 1:
            return 1 << (k - 1)
        i = i - (1 << (k - 1)) + 1


class CdclSolver:
    def __init__(
        self,
        n_vars: int,
        clauses: list[list[int]],
        *,
        initial_phases: dict[int, bool] | None = None,
        var_decay: float = 0.95,
        restart_interval: int = 100,
        timeout_s: float | None = None,
        assume_clean: bool = False,
    ):
        self.n_vars = n_vars
        self.assume_clean = assume_clean
        self.var_decay = var_decay
        self.restart_interval = restart_interval
        self.timeout_s = timeout_s
        self.stats = SolverStats()

        self.assigns = [0] * (n_vars + 1)
        self.level = [0] * (n_vars + 1)
        self.reason = [-1] * (n_vars + 1)
        self.phase = [0] * (n_vars + 1)
        if initial_phases:
            for v, val in initial_phases.items():
                if not 1 <= v <= n_vars:
                    raise ValueError(f"phase for unknown variable {v}")
                self.phase[v] = 1 if val else 0
        self.activity = [0.0] * (n_vars + 1)
        self.act_inc = 1.0
        self.seen = bytearray(n_vars + 1)

        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.qhead = 0
        self.decision_level = 0
        self.unsat_at_load = False

        self.clauses: list[list[int]] = []
        self.watches: list[list[int]] = [[] for _ in range(2 * n_vars + 1)]
        self.first_learned = 0  # set after loading; earlier clauses are core
        self.reduce_budget = 20_000

        import heapq  # stdlib; local alias for the hot paths

        self._heapq = heapq
        self.order: list[tuple[float, int]] = [(0.0, v) for v in range(1, n_vars + 1)]
        heapq.heapify(self.order)

        for clause in clauses:
            if not self._load_clause(clause):
                self.unsat_at_load = True
                break
        self.first_learned = len(self.clauses)

    # ------------------------------------------------------------- loading

    def _load_clause(self, lits: list[int]) -> bool:
        """Add an input clause; False when it makes the formula unsatisfiable."""
        if self.assume_clean:
            uniq = lits
        else:
            uniq = []
            present = set()
            for lit in lits:
                if not 1 <= abs(lit) <= self.n_vars:
                    raise ValueError(f"literal {lit} out of range")
                if -lit in present:
                    return True  # tautology
                if lit not in present:
                    present.add(lit)
                    uniq.append(lit)
        if not uniq:
            return False
        if len(uniq) == 1:
            return self._enqueue(uniq[0], -1)
        ci = len(self.clauses)
        self.clauses.append(uniq)
        nv = self.n_vars
        self.watches[uniq[0] + nv].append(ci)
        self.watches[uniq[1] + nv].append(ci)
        return True

    # ------------------------------------------------------------ assigning

    def _enqueue(self, lit: int, reason: int) -> bool:
        var = lit if lit > 0 else -lit
        val = 1 if lit > 0 else -1
        cur = self.assigns[var]
        if cur != 0:
            return cur == val
        self.assigns[var] = val
        self.level[var] = self.decision_level
        self.reason[var] = reason
        self.trail.append(lit)
        return True

    def _backtrack(self, target: int) -> None:
        if self.decision_level <= target:
            return
        heappush = self._heapq.heappush
        order = self.order
        activity = self.activity
        assigns = self.assigns
        phase = self.phase
        bound = self.trail_lim[target]
        for k in range(len(self.trail) - 1, bound - 1, -1):
            lit = self.trail[k]
            var = lit if lit > 0 else -lit
            phase[var] = 1 if assigns[var] > 0 else 0
            assigns[var] = 0
            heappush(order, (-activity[var], var))
        del self.trail[bound:]
        del self.trail_lim[target:]
        self.qhead = len(self.trail)
        self.decision_level = target

    # ----------------------------------------------------------- propagate

    def _propagate(self) -> int:
        """Exhaust the implication queue; conflict clause index or -1."""
        watches = self.watches
        clauses = self.clauses
        assigns = self.assigns
        trail = self.trail
        level = self.level
        reason = self.reason
        nv = self.n_vars
        dl = self.decision_level
        props = 0
        qhead = self.qhead
        conflict = -1
        while qhead < len(trail):
            lit = trail[qhead]
            qhead += 1
            props += 1
            falsified = -lit
            widx = falsified + nv
            watchlist = watches[widx]
            if not watchlist:
                continue
            new_list: list[int] = []
            i = 0
            n_w = len(watchlist)
            while i < n_w:
                ci = watchlist[i]
                i += 1
                clause = clauses[ci]
                if clause[0] == falsified:
                    clause[0] = clause[1]
                    clause[1] = falsified
                first = clause[0]
                v0 = assigns[first] if first > 0 else -assigns[-first]
                if v0 == 1:
                    new_list.append(ci)
                    continue
                moved = False
                for k in range(2, len(clause)):
                    lk = clause[k]
                    vk = assigns[lk] if lk > 0 else -assigns[-lk]
                    if vk != -1:
                        clause[1] = lk
                        clause[k] = falsified
                        watches[lk + nv].append(ci)
                        moved = True
                        break
                if moved:
                    continue
                new_list.append(ci)
                if v0 == -1:
                    new_list.extend(watchlist[i:])
                    conflict = ci
                    break
                var = first if first > 0 else -first
                assigns[var] = 1 if first > 0 else -1
                level[var] = dl
                reason[var] = ci
                trail.append(first)
            watches[widx] = new_list
            if conflict >= 0:
                qhead = len(trail)
                break
        self.qhead = qhead
        self.stats.propagations += props
        return conflict

    # ------------------------------------------------------------- analyze

    def _bump(self, var: int) -> None:
        act = self.activity[var] + self.act_inc
        self.activity[var] = act
        if act > _RESCALE_LIMIT:
            self._rescale()
        elif self.assigns[var] == 0:
            self._heapq.heappush(self.order, (-act, var))

    def _rescale(self) -> None:
        scale = 1e-100
        activity = self.activity
        for v in range(1, self.n_vars + 1):
            activity[v] *= scale
        self.act_inc *= scale
        heapify = self._heapq.heapify
        self.order = [(-activity[v], v) for v in range(1, self.n_vars + 1)
                      if self.assigns[v] == 0]
        heapify(self.order)

    def _analyze(self, confl: int) -> tuple[list[int], int]:
        """First-UIP learned clause (asserting literal first) and backjump level."""
        seen = self.seen
        level = self.level
        reason = self.reason
        trail = self.trail
        clauses = self.clauses
        cur = self.decision_level
        learnt: list[int] = []
        touched: list[int] = []
        counter = 0
        p = 0
        idx = len(trail) - 1
        btlevel = 0
        while True:
            clause = clauses[confl]
            start = 1 if p else 0  # clause[0] is the resolved literal
            for k in range(start, len(clause)):
                q = clause[k]
                v = q if q > 0 else -q
                if not seen[v] and level[v] > 0:
                    seen[v] = 1
                    touched.append(v)
                    self._bump(v)
                    if level[v] == cur:
                        counter += 1
                    else:
                        learnt.append(q)
                        if level[v] > btlevel:
                            btlevel = level[v]
            while True:
                p = trail[idx]
                idx -= 1
                v = p if p > 0 else -p
                if seen[v]:
                    break
            counter -= 1
            if counter == 0:
                break
            confl = reason[v]
        learnt.insert(0, -p)
        for v in touched:
            seen[v] = 0
        return learnt, btlevel

    def _record(self, learnt: list[int]) -> None:
        if len(learnt) == 1:
            ok = self._enqueue(learnt[0], -1)
            assert ok, "asserting literal must be enqueueable after backjump"
            return
        # position 1 must hold a literal from the backjump level
        best = 1
        best_level = self.level[abs(learnt[1])]
        for k in range(2, len(learnt)):
            lv = self.level[abs(learnt[k])]
            if lv > best_level:
                best_level = lv
                best = k
        learnt[1], learnt[best] = learnt[best], learnt[1]
        ci = len(self.clauses)
        self.clauses.append(learnt)
        nv = self.n_vars
        self.watches[learnt[0] + nv].append(ci)
        self.watches[learnt[1] + nv].append(ci)
        self.stats.learned += 1
        ok = self._enqueue(learnt[0], ci)
        assert ok, "asserting literal must be enqueueable after backjump"

    # ------------------------------------------------------------ decisions

    def _decide(self) -> int:
        heappop = self._heapq.heappop
        order = self.order
        assigns = self.assigns
        activity = self.activity
        while order:
            neg_act, var = heappop(order)
            if assigns[var] == 0 and -neg_act == activity[var]:
                return var if self.phase[var] else -var
        return 0

    # -------------------------------------------------------------- reduce

    def _reduce_db(self) -> None:
        """At level 0: drop long learned clauses once the budget is exceeded."""
        learned_count = len(self.clauses) - self.first_learned
        if learned_count <= self.reduce_budget:
            return
        for lit in self.trail:  # level-0 facts are permanent
            self.reason[abs(lit)] = -1
        keep = self.clauses[: self.first_learned]
        learned = self.clauses[self.first_learned:]
        learned.sort(key=len)
        retain = max(len(learned) // 2, 1)
        kept_learned = [c for c in learned[:retain]]
        kept_learned += [c for c in learned[retain:] if len(c) <= 3]
        keep.extend(kept_learned)
        self.clauses = keep
        self.reduce_budget = int(self.reduce_budget * 1.3)
        self._rebuild_watches()

    def _rebuild_watches(self) -> None:
        nv = self.n_vars
        assigns = self.assigns
        self.watches = [[] for _ in range(2 * nv + 1)]
        watches = self.watches
        for ci, clause in enumerate(self.clauses):
            # move two non-false literals (w.r.t. level-0 facts) to the front
            slot = 0
            for k in range(len(clause)):
                lk = clause[k]
                vk = assigns[lk] if lk > 0 else -assigns[-lk]
                if vk != -1:
                    clause[slot], clause[k] = clause[k], clause[slot]
                    slot += 1
                    if slot == 2:
                        break
            watches[clause[0] + nv].append(ci)
            watches[clause[1] + nv].append(ci)

    # ----------------------------------------------------------------- run

    def solve(self) -> SolveOutcome:
        start = time.monotonic()
        stats = self.stats

        def finish(status: str, model: list[int] | None) -> SolveOutcome:
            stats.elapsed_s = time.monotonic() - start
            return SolveOutcome(status=status, model=model, stats=stats)

        if self.unsat_at_load:
            return finish(UNSAT, None)

        deadline = None if self.timeout_s is None else start + self.timeout_s
        restart_no = 0
        limit = self.restart_interval * luby(0)
        since_restart = 0
        decay_mult = 1.0 / self.var_decay

        while True:
            confl = self._propagate()
            if confl >= 0:
                stats.conflicts += 1
                since_restart += 1
                if self.decision_level == 0:
                    return finish(UNSAT, None)
                learnt, btlevel = self._analyze(confl)
                self._backtrack(btlevel)
                self._record(learnt)
                self.act_inc *= decay_mult
                if self.act_inc > _RESCALE_LIMIT:
                    self._rescale()
                if (
                    deadline is not None
                    and stats.conflicts % 256 == 0
                    and time.monotonic() > deadline
                ):
                    return finish(TIMEOUT, None)
                continue
            if since_restart >= limit:
                restart_no += 1
                stats.restarts += 1
                since_restart = 0
                limit = self.restart_interval * luby(restart_no)
                self._backtrack(0)
                self._reduce_db()
                if deadline is not None and time.monotonic() > deadline:
                    return finish(TIMEOUT, None)
                continue
            lit = self._decide()
            if lit == 0:
                model = [v if v != 0 else -1 for v in self.assigns]
                model[0] = 0  # slot 0 is unused
                return finish(SAT, model)
            stats.decisions += 1
            if (
                deadline is not None
                and stats.decisions % 4096 == 0
                and time.monotonic() > deadline
            ):
                return finish(TIMEOUT, None)
            self.trail_lim.append(len(self.trail))
            self.decision_level += 1
            ok = self._enqueue(lit, -1)
            assert ok


def solve_cnf(
    n_vars: int,
    clauses: list[list[int]],
    *,
    initial_phases: dict[int, bool] | None = None,
    var_decay: float = 0.95,
    restart_interval: int = 100,
    timeout_s: float | None = None,
) -> SolveOutcome:
    """Solve a CNF given as (variable count, clause list of non-zero ints)."""
    solver = CdclSolver(
        n_vars,
        [list(c) for c in clauses],
        initial_phases=initial_phases,
        var_decay=var_decay,
        restart_interval=restart_interval,
        timeout_s=timeout_s,
    )
    return solver.solve()


def check_model(clauses: list[list[int]], model: list[int]) -> bool:
    """True when every clause has a literal made true by the model."""
    for clause in clauses:
        for lit in clause:
            val = model[lit] if lit > 0 else -model[-lit]
            if val > 0:
                break
        else:
            return False
    return True
