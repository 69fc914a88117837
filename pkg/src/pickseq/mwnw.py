"""Exact maximum weighted Nash welfare by exhaustive enumeration.

The objective is the weighted product of bundle utilities.  Rational
weights are scaled to a common-denominator integer exponent vector, so two
allocations compare through exact big-integer (Fraction) products; no
logarithm ever enters the decision path.

When no allocation can give every agent positive utility, the rule falls
back to the zero-welfare tie-breaking convention: prefer allocations whose
positive-utility support is largest, break support ties toward the
lexicographically smallest agent-index set, then maximize the product
restricted to that support.  Among exact score ties the solver returns the
allocation whose item-to-agent assignment vector is lexicographically
smallest, which makes every reported trace reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

from .core import Allocation, Instance, allocation_utilities

DEFAULT_BUDGET = 4_000_000


class BudgetExceededError(RuntimeError):
    """The assignment space is too large to enumerate; use a smaller instance."""


def weight_exponents(weights: Sequence[Fraction]) -> tuple[int, ...]:
    """Scale rational weights to the smallest proportional integer vector."""
    scale = lcm(*(w.denominator for w in weights))
    exps = [int(w * scale) for w in weights]
    shrink = gcd(*exps)
    return tuple(e // shrink for e in exps)


@dataclass(frozen=True)
class WelfareScore:
    """Comparable welfare of one allocation.

    ``support`` is the set of agents with positive utility; the score is
    positive iff the support covers all ``n`` agents.  ``product`` is the
    exact value of the weighted product restricted to the support, using
    the integer exponent vector.
    """

    n: int
    support: frozenset[int]
    utilities: tuple[Fraction, ...]
    exponents: tuple[int, ...]
    product: Fraction

    @property
    def is_positive(self) -> bool:
        return len(self.support) == self.n

    def compare(self, other: "WelfareScore") -> int:
        """-1, 0, or 1; the order maximized by the solver."""
        if self.n != other.n:
            raise ValueError("scores of different instances are not comparable")
        if len(self.support) != len(other.support):
            return 1 if len(self.support) > len(other.support) else -1
        if self.support != other.support:
            # equal size: the lexicographically smaller index set is preferred
            return 1 if sorted(self.support) < sorted(other.support) else -1
        if self.product != other.product:
            return 1 if self.product > other.product else -1
        return 0


def _score_from_utilities(
    n: int, utilities: tuple[Fraction, ...], exponents: tuple[int, ...]
) -> WelfareScore:
    support = frozenset(i for i in range(n) if utilities[i] > 0)
    product = Fraction(1)
    for i in support:
        product *= utilities[i] ** exponents[i]
    return WelfareScore(n, support, utilities, exponents, product)


def score(instance: Instance, allocation: Allocation) -> WelfareScore:
    """The comparable welfare score of an allocation."""
    utilities = allocation_utilities(instance, allocation)
    return _score_from_utilities(instance.n, utilities, weight_exponents(instance.weights))


def solve(
    instance: Instance, budget: int = DEFAULT_BUDGET, prune: bool = True
) -> Allocation:
    """Return the maximum weighted Nash welfare allocation.

    Enumerates all n^m item-to-agent assignments depth-first in
    lexicographic order, so the first optimum found is also the
    lexicographic tie-break winner.  With ``prune`` enabled, subtrees whose
    optimistic utility bound cannot strictly beat the positive incumbent
    are skipped; the result is identical to the unpruned enumeration
    because equal-score leaves always lose the lexicographic tie-break to
    the earlier incumbent.
    """
    n, m = instance.n, instance.m
    if n**m > budget:
        raise BudgetExceededError(
            f"{n}^{m} assignments exceed the budget of {budget}; "
            "reduce the instance or raise the budget"
        )
    exponents = weight_exponents(instance.weights)
    utilities = instance.utilities

    # rest[j][i]: agent i's utility for all items from j onward
    rest = [[Fraction(0)] * n for _ in range(m + 1)]
    for j in range(m - 1, -1, -1):
        for i in range(n):
            rest[j][i] = rest[j + 1][i] + utilities[i][j]

    best_assign: list[int] | None = None
    best_score: WelfareScore | None = None
    current = [Fraction(0)] * n
    assign = [0] * m

    def recurse(j: int) -> None:
        nonlocal best_assign, best_score
        if j == m:
            cand = _score_from_utilities(n, tuple(current), exponents)
            if best_score is None or cand.compare(best_score) > 0:
                best_score = cand
                best_assign = assign.copy()
            return
        if prune and best_score is not None and best_score.is_positive:
            bound = Fraction(1)
            for i in range(n):
                reach = current[i] + rest[j][i]
                if reach == 0:
                    bound = Fraction(0)
                    break
                bound *= reach ** exponents[i]
            if bound <= best_score.product:
                return
        for a in range(n):
            assign[j] = a
            current[a] += utilities[a][j]
            recurse(j + 1)
            current[a] -= utilities[a][j]

    recurse(0)
    assert best_assign is not None
    bundles = [set() for _ in range(n)]
    for j, a in enumerate(best_assign):
        bundles[a].add(j)
    return Allocation(tuple(frozenset(b) for b in bundles))
