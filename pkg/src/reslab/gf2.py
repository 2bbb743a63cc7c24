"""Affine systems over GF(2): parity equations plus forced unit values.

Variables are arbitrary integer labels; solving uses Gaussian elimination
on int bitmasks and is exact.
"""

from __future__ import annotations

from typing import Iterable


class ParitySystem:
    """A conjunction of constraints ``xor(vars) = rhs`` over 0/1 variables."""

    def __init__(self) -> None:
        self._equations: list[tuple[frozenset[int], int]] = []

    def require_parity(self, variables: Iterable[int], rhs: int) -> None:
        self._equations.append((frozenset(variables), rhs & 1))

    def require_value(self, var: int, value: int) -> None:
        self.require_parity((var,), value)

    def solve(self) -> dict[int, int] | None:
        """A satisfying assignment with free variables set to 0, or None."""
        variables = sorted({v for vs, _ in self._equations for v in vs})
        col = {v: i for i, v in enumerate(variables)}
        rows: list[tuple[int, int]] = []
        for vs, rhs in self._equations:
            mask = 0
            for v in vs:
                mask ^= 1 << col[v]
            rows.append((mask, rhs))

        pivots: list[tuple[int, int, int]] = []  # (column, mask, rhs)
        for i in range(len(variables)):
            bit = 1 << i
            pivot_row = None
            for j, (mask, rhs) in enumerate(rows):
                if mask & bit:
                    pivot_row = j
                    break
            if pivot_row is None:
                continue
            pmask, prhs = rows.pop(pivot_row)
            rows = [(m ^ pmask, r ^ prhs) if m & bit else (m, r) for m, r in rows]
            pivots = [((c, m ^ pmask, r ^ prhs) if m & bit else (c, m, r)) for c, m, r in pivots]
            pivots.append((i, pmask, prhs))

        if any(mask == 0 and rhs == 1 for mask, rhs in rows):
            return None
        assignment = {v: 0 for v in variables}
        for i, mask, rhs in pivots:
            # After full elimination the pivot row holds only its pivot bit
            # among pivot columns; free variables are 0, so the value is rhs.
            assignment[variables[i]] = rhs
        return assignment

    def satisfiable(self) -> bool:
        return self.solve() is not None
