"""Sparse exact Gaussian elimination over cyclotomic scalars.

Rows are dicts ``column -> scalar`` without zero entries.  Columns may be any
sortable keys; elimination always pivots on the least column of a row.
"""

from __future__ import annotations

from .cyclotomic import reciprocal


def _axpy(row: dict, c, other: dict) -> None:
    """row -= c * other, in place."""
    for k, v in other.items():
        w = row.get(k)
        w = -(c * v) if w is None else w - c * v
        if w:
            row[k] = w
        else:
            row.pop(k, None)


class Echelon:
    """Incrementally maintained echelon form; pivot rows are monic."""

    def __init__(self):
        self.rows: dict = {}

    def __len__(self) -> int:
        return len(self.rows)

    def reduce(self, row: dict) -> dict:
        row = {k: v for k, v in row.items() if v}
        pivots = self.rows
        while True:
            hits = [k for k in row if k in pivots]
            if not hits:
                return row
            k = min(hits)
            _axpy(row, row[k], pivots[k])

    def add(self, row: dict) -> bool:
        """Insert a row; False when it already lies in the span."""
        row = self.reduce(row)
        if not row:
            return False
        p = min(row)
        inv = reciprocal(row[p])
        self.rows[p] = {k: v * inv for k, v in row.items()}
        return True

    def contains(self, row: dict) -> bool:
        return not self.reduce(row)

    def reduced_rows(self) -> dict:
        """Fully reduced (RREF) copy, keyed by pivot column."""
        out = {}
        for p in sorted(self.rows, reverse=True):
            row = dict(self.rows[p])
            for k in sorted(k for k in row if k in out and k != p):
                if k in row:
                    _axpy(row, row[k], out[k])
            out[p] = row
        return out


def nullspace(rows, columns) -> list[dict]:
    """Basis of {x : row . x = 0 for every row}, one vector per free column."""
    ech = Echelon()
    for r in rows:
        ech.add(r)
    rref = ech.reduced_rows()
    basis = []
    for free in columns:
        if free in rref:
            continue
        vec = {free: 1}
        for p, row in rref.items():
            c = row.get(free)
            if c:
                vec[p] = -c
        basis.append(vec)
    return basis


class _Rhs:
    """Sorts after every real column."""

    def __lt__(self, other):
        return False

    def __gt__(self, other):
        return other is not self

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return id(self)

    def __le__(self, other):
        return other is self

    def __ge__(self, other):
        return True


def solve(equations, columns):
    """Solve a linear system given as (row, rhs) pairs.

    Returns ``(solution, unique)``, or ``(None, False)`` when inconsistent.
    Free columns are set to zero in the returned particular solution.
    """
    rhs_key = _Rhs()
    ech = Echelon()
    for row, b in equations:
        r = dict(row)
        if b:
            r[rhs_key] = b
        ech.add(r)
    if rhs_key in ech.rows:
        return None, False
    rref = ech.reduced_rows()
    sol = {}
    for p, row in rref.items():
        b = row.get(rhs_key)
        if b:
            sol[p] = b
    unique = all(c in rref for c in columns)
    return sol, unique
