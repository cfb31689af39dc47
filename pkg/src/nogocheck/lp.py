"""Exact rational linear feasibility and optimization with certificates.

Systems are linear rows over named nonnegative variables with Fraction
coefficients.  ``solve`` runs a two-phase primal simplex (Bland's rule,
exact arithmetic).  Infeasibility comes with a Farkas certificate that is
re-verified by direct multiplication before being returned; optima come
with an exactly verified dual bound.  ``enumerate_feasible`` is an
independent brute-force decision procedure used as an oracle: presolve by
sign propagation, then exhaustive search over basic supports.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

EQ, LE, GE = "==", "<=", ">="

FEASIBLE = "feasible"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


class CertificateError(AssertionError):
    """A certificate or witness failed exact re-verification."""


class OracleSizeError(RuntimeError):
    """The brute-force oracle exceeded its node budget."""


@dataclass(frozen=True)
class LinearRow:
    coeffs: dict          # variable -> Fraction
    rel: str              # "==", "<=", ">="
    rhs: Fraction
    tag: str = ""         # provenance: which modeling rule emitted the row

    def evaluate(self, assignment: dict) -> Fraction:
        return sum((c * assignment.get(v, Fraction(0))
                    for v, c in self.coeffs.items()), Fraction(0))

    def satisfied_by(self, assignment: dict) -> bool:
        lhs = self.evaluate(assignment)
        if self.rel == EQ:
            return lhs == self.rhs
        if self.rel == LE:
            return lhs <= self.rhs
        return lhs >= self.rhs


@dataclass
class ConstraintSystem:
    variables: list
    rows: list
    objective: dict | None = None     # maximize sum coeff*var
    meta: dict = field(default_factory=dict)

    def row_tags(self) -> list:
        return [r.tag for r in self.rows]


@dataclass
class FeasibilityResult:
    status: str
    witness: dict | None = None            # variable -> Fraction
    certificate: list | None = None        # per-row Farkas multipliers
    objective_value: Fraction | None = None
    dual: list | None = None               # per-row multipliers bounding the objective
    method: str = ""


# ---------------------------------------------------------------------------
# standard form

def _standardize(cs: ConstraintSystem):
    """Equality form A x = b over nonnegative variables (slacks appended).

    Returns (columns, rows, rhs) where columns is the ordered variable
    list and each row is a dict over columns.  Row order matches cs.rows.
    """
    columns = list(cs.variables)
    rows = []
    rhs = []
    for i, row in enumerate(cs.rows):
        coeffs = dict(row.coeffs)
        b = Fraction(row.rhs)
        if row.rel == GE:
            coeffs = {v: -c for v, c in coeffs.items()}
            b = -b
        if row.rel in (LE, GE):
            slack = f"__slack{i}"
            columns.append(slack)
            coeffs[slack] = Fraction(1)
        rows.append(coeffs)
        rhs.append(b)
    return columns, rows, rhs


# ---------------------------------------------------------------------------
# simplex

def _pivot(tableau, basis, row_i, col_j):
    piv = tableau[row_i][col_j]
    tableau[row_i] = [x / piv for x in tableau[row_i]]
    for k in range(len(tableau)):
        if k != row_i and tableau[k][col_j] != 0:
            f = tableau[k][col_j]
            tableau[k] = [a - f * b for a, b in zip(tableau[k], tableau[row_i])]
    basis[row_i] = col_j


def _reduced_costs(tableau, basis, costs, ncols):
    r = list(costs) + [Fraction(0)]
    for i, bi in enumerate(basis):
        if costs[bi] != 0:
            f = costs[bi]
            r = [a - f * b for a, b in zip(r, tableau[i])]
    return r  # r[-1] == -objective value


def _run_simplex(tableau, basis, costs, ncols, banned=frozenset()):
    """Minimize costs over the tableau in place; returns (status, redcosts)."""
    r = _reduced_costs(tableau, basis, costs, ncols)
    while True:
        enter = None
        for j in range(ncols):
            if j not in banned and r[j] < 0:
                enter = j
                break
        if enter is None:
            return "optimal", r
        leave, best = None, None
        for i in range(len(tableau)):
            a = tableau[i][enter]
            if a > 0:
                ratio = tableau[i][-1] / a
                if best is None or ratio < best or \
                        (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:
            return "unbounded", r
        _pivot(tableau, basis, leave, enter)
        f = r[enter]
        if f != 0:
            r = [a - f * b for a, b in zip(r, tableau[leave])]


def solve(cs: ConstraintSystem) -> FeasibilityResult:
    columns, rows, rhs = _standardize(cs)
    n = len(columns)
    m = len(rows)
    col_index = {v: j for j, v in enumerate(columns)}
    # tableau rows: [x cols | artificial cols | rhs], rhs >= 0
    sigma = []
    tableau = []
    for i in range(m):
        coeffs = [Fraction(0)] * (n + m + 1)
        s = -1 if rhs[i] < 0 else 1
        sigma.append(s)
        for v, c in rows[i].items():
            coeffs[col_index[v]] = s * c
        coeffs[n + i] = Fraction(1)
        coeffs[-1] = s * rhs[i]
        tableau.append(coeffs)
    basis = [n + i for i in range(m)]
    ncols = n + m

    phase1_costs = [Fraction(0)] * n + [Fraction(1)] * m
    status, r = _run_simplex(tableau, basis, phase1_costs, ncols)
    assert status == "optimal"  # phase 1 is bounded below by 0
    infeas = -r[-1]
    if infeas > 0:
        # y_i = 1 - reduced cost of artificial column i, unflipped
        y = [sigma[i] * (Fraction(1) - r[n + i]) for i in range(m)]
        verify_farkas(cs, y)
        return FeasibilityResult(INFEASIBLE, certificate=y, method="simplex")

    # drive remaining artificials out of the basis
    drop = []
    for i in range(m):
        if basis[i] >= n:
            piv = next((j for j in range(n) if tableau[i][j] != 0), None)
            if piv is None:
                drop.append(i)  # redundant row
            else:
                _pivot(tableau, basis, i, piv)
    kept = [i for i in range(m) if i not in drop]
    tableau = [tableau[i] for i in range(m) if i not in drop]
    basis = [basis[i] for i in range(m) if i not in drop]

    def witness():
        x = {v: Fraction(0) for v in cs.variables}
        for i, bi in enumerate(basis):
            if bi < n and columns[bi] in x:
                x[columns[bi]] = tableau[i][-1]
        return x

    if cs.objective is None:
        w = witness()
        verify_witness(cs, w)
        return FeasibilityResult(FEASIBLE, witness=w, method="simplex")

    phase2_costs = [Fraction(0)] * (n + m)
    for v, c in cs.objective.items():
        phase2_costs[col_index[v]] = -Fraction(c)  # maximize -> minimize -c
    banned = frozenset(range(n, n + m))
    status, r = _run_simplex(tableau, basis, phase2_costs, ncols, banned)
    if status == "unbounded":
        return FeasibilityResult(UNBOUNDED, method="simplex")
    w = witness()
    verify_witness(cs, w)
    value = sum((Fraction(c) * w[v] for v, c in cs.objective.items()),
                Fraction(0))
    # dual bound from artificial reduced costs (columns n+i are unflipped
    # unit vectors of the sign-flipped rows, hence the sigma factor)
    y = [Fraction(0)] * m
    for orig in kept:
        y[orig] = sigma[orig] * r[n + orig]
    verify_objective_bound(cs, y, value)
    return FeasibilityResult(FEASIBLE, witness=w, objective_value=value,
                             dual=y, method="simplex")


# ---------------------------------------------------------------------------
# exact verification

def verify_witness(cs: ConstraintSystem, witness: dict) -> None:
    for v, x in witness.items():
        if x < 0:
            raise CertificateError(f"witness has negative value {v}={x}")
    for row in cs.rows:
        if not row.satisfied_by(witness):
            raise CertificateError(
                f"witness violates row [{row.tag}] "
                f"{row.evaluate(witness)} {row.rel} {row.rhs}")


def verify_farkas(cs: ConstraintSystem, y: list) -> None:
    """y combines the rows into sum(coeff*x) with all coefficients <= 0 but a
    positive right-hand side, impossible for x >= 0."""
    columns, rows, rhs = _standardize(cs)
    combined = {v: Fraction(0) for v in columns}
    total = Fraction(0)
    for yi, coeffs, b in zip(y, rows, rhs):
        for v, c in coeffs.items():
            combined[v] += yi * c
        total += yi * b
    if total <= 0:
        raise CertificateError(f"certificate rhs combination {total} <= 0")
    bad = {v: c for v, c in combined.items() if c > 0}
    if bad:
        raise CertificateError(f"certificate leaves positive coefficients {bad}")


def verify_objective_bound(cs: ConstraintSystem, y: list,
                           value: Fraction) -> None:
    """y proves max objective <= value: y^T A >= c componentwise, y^T b == value."""
    columns, rows, rhs = _standardize(cs)
    objective = {v: Fraction(c) for v, c in (cs.objective or {}).items()}
    combined = {v: Fraction(0) for v in columns}
    total = Fraction(0)
    for yi, coeffs, b in zip(y, rows, rhs):
        for v, c in coeffs.items():
            combined[v] += yi * c
        total += yi * b
    for v in columns:
        if combined[v] < objective.get(v, Fraction(0)):
            raise CertificateError(
                f"dual bound fails at {v}: {combined[v]} < "
                f"{objective.get(v, Fraction(0))}")
    if total != value:
        raise CertificateError(f"dual value {total} != primal value {value}")


# ---------------------------------------------------------------------------
# independent brute-force oracle

def _gauss_solve(matrix, rhs):
    """Exact solve of an overdetermined system; None if inconsistent or
    underdetermined."""
    m = len(matrix)
    n = len(matrix[0]) if m else 0
    aug = [list(row) + [rhs[i]] for i, row in enumerate(matrix)]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if aug[i][c] != 0), None)
        if piv is None:
            return None  # free column: underdetermined, a smaller support covers it
        aug[r], aug[piv] = aug[piv], aug[r]
        aug[r] = [x / aug[r][c] for x in aug[r]]
        for i in range(m):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    if r < n:
        return None
    for i in range(r, m):
        if aug[i][-1] != 0:
            return None  # inconsistent
    return [aug[i][-1] for i in range(n)]


def _rank(rows_list, columns):
    matrix = [[row.get(v, Fraction(0)) for v in columns] for row in rows_list]
    m, n = len(matrix), len(columns)
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if matrix[i][c] != 0), None)
        if piv is None:
            continue
        matrix[r], matrix[piv] = matrix[piv], matrix[r]
        matrix[r] = [x / matrix[r][c] for x in matrix[r]]
        for i in range(m):
            if i != r and matrix[i][c] != 0:
                f = matrix[i][c]
                matrix[i] = [a - f * b for a, b in zip(matrix[i], matrix[r])]
        r += 1
        if r == m:
            break
    return r


def enumerate_feasible(cs: ConstraintSystem,
                       max_nodes: int = 200_000) -> FeasibilityResult:
    """Brute-force feasibility decision, independent of the simplex.

    Presolve: propagate zero rows and variable fixings by sign analysis.
    Search: a feasible system has a basic solution supported on at most
    rank(A) columns, so exhaustively solve all column subsets up to that
    size.
    """
    columns, rows, rhs = _standardize(cs)
    active_cols = set(columns)
    fixed: dict = {}
    removed = set()

    def adjusted_rhs(i: int) -> Fraction:
        return rhs[i] - sum((c * fixed[v] for v, c in rows[i].items()
                             if v in fixed), Fraction(0))

    def make_witness(extra: dict) -> dict:
        x = {v: Fraction(0) for v in cs.variables}
        for v, val in {**fixed, **extra}.items():
            if v in x:
                x[v] = val
        return x

    # -- presolve: sign propagation and singleton fixing ---------------
    changed = True
    while changed:
        changed = False
        for i in range(len(rows)):
            if i in removed:
                continue
            b = adjusted_rhs(i)
            live = {v: c for v, c in rows[i].items()
                    if v in active_cols and c != 0}
            if not live:
                if b != 0:
                    return FeasibilityResult(
                        INFEASIBLE, method="enumeration/presolve")
                removed.add(i)
                changed = True
                continue
            pos = all(c > 0 for c in live.values())
            neg = all(c < 0 for c in live.values())
            if (pos and b < 0) or (neg and b > 0):
                return FeasibilityResult(
                    INFEASIBLE, method="enumeration/presolve")
            if (pos or neg) and b == 0:
                for v in live:
                    active_cols.discard(v)
                    fixed[v] = Fraction(0)
                removed.add(i)
                changed = True
                continue
            if len(live) == 1:
                (v, c), = live.items()
                val = b / c
                if val < 0:
                    return FeasibilityResult(
                        INFEASIBLE, method="enumeration/presolve")
                fixed[v] = val
                active_cols.discard(v)
                removed.add(i)
                changed = True

    cols = sorted(active_cols, key=columns.index)
    active = [({v: c for v, c in rows[i].items()
                if v in active_cols and c != 0}, adjusted_rhs(i))
              for i in range(len(rows)) if i not in removed]
    if not active:
        w = make_witness({})
        verify_witness(cs, w)
        return FeasibilityResult(FEASIBLE, witness=w,
                                 method="enumeration/presolve")

    rank = _rank([c for c, _ in active], cols)
    b_vec = [b for _, b in active]
    nodes = 0
    for size in range(0, rank + 1):
        for subset in itertools.combinations(cols, size):
            nodes += 1
            if nodes > max_nodes:
                raise OracleSizeError(
                    f"oracle exceeded {max_nodes} nodes "
                    f"({len(cols)} columns, rank {rank})")
            matrix = [[coeffs.get(v, Fraction(0)) for v in subset]
                      for coeffs, _ in active]
            sol = _gauss_solve(matrix, b_vec) if size else (
                [] if all(b == 0 for b in b_vec) else None)
            if sol is None or any(x < 0 for x in sol):
                continue
            w = make_witness(dict(zip(subset, sol)))
            verify_witness(cs, w)
            return FeasibilityResult(FEASIBLE, witness=w,
                                     method="enumeration")
    return FeasibilityResult(INFEASIBLE, method="enumeration")
