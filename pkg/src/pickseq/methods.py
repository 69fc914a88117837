"""Picking-sequence generators for divisor methods and the quota method.

A divisor method assigns each pick to an agent minimizing f(t_i)/w_i, where
t_i is the agent's pick count so far and f is strictly increasing with
t <= f(t) <= t+1.  The quota method restricts the Jefferson rule
(f(t) = t+1) to agents still below their proportional upper quota.

Score comparisons are exact wherever the function family permits: rational
f values compare directly, square roots (Hill) compare as squares, and
power means with integer exponent (or exponent zero with rational mean
weight) compare after clearing roots by powering.  Only irrational
exponents fall back to high-precision arithmetic, and that fallback is off
by default.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Sequence

from .core import PickingSequence, format_rational, parse_rational

PRECISION_ENV_VAR = "FAIRSEQ_PRECISION_BITS"
DEFAULT_PRECISION_BITS = 128


class PrecisionError(ValueError):
    """Comparison cannot be made exact and approximation was not allowed."""


def _as_rational(value) -> Fraction:
    if isinstance(value, float):
        raise TypeError("floats are banned; pass Fraction, int, or 'p/q' string")
    if isinstance(value, str):
        return parse_rational(value, "parameter")
    return Fraction(value)


@dataclass(frozen=True)
class DivisorFunction:
    """One member of the divisor-function zoo, tagged by ``kind``.

    kind: adams | jefferson | webster | hill | dean | stationary |
          powermean | custom
    ``c`` parameterizes stationary (f(t) = t + c, c in [0,1]); ``p`` and
    ``w`` parameterize the weighted power mean of t and t+1; ``table`` plus
    ``tail_offset`` define a custom function (f(t) = t + tail_offset past
    the table).  ``allow_approx`` opts in to the high-precision fallback
    for variants with no exact comparison.
    """

    kind: str
    c: Fraction | None = None
    p: Fraction | None = None
    w: Fraction | None = None
    table: tuple[Fraction, ...] | None = None
    tail_offset: Fraction | None = None
    allow_approx: bool = False

    def __post_init__(self):
        if self.kind == "stationary":
            if self.c is None or not 0 <= self.c <= 1:
                raise ValueError("stationary offset must lie in [0, 1]")
        elif self.kind == "powermean":
            if self.p is None or self.w is None:
                raise ValueError("power mean needs both p and w")
            if not 0 <= self.w <= 1:
                raise ValueError("power-mean weight must lie in [0, 1]")
        elif self.kind == "custom":
            if not self.table:
                raise ValueError("custom divisor function needs a value table")
            self._validate_table()
        elif self.kind not in ("adams", "jefferson", "webster", "hill", "dean"):
            raise ValueError(f"unknown divisor function kind {self.kind!r}")

    def _validate_table(self):
        prev = None
        for t, value in enumerate(self.table):
            if not t <= value <= t + 1:
                raise ValueError(f"custom table violates t <= f(t) <= t+1 at t={t}")
            if prev is not None and value <= prev:
                raise ValueError(f"custom table is not strictly increasing at t={t}")
            prev = value
        if self.tail_offset is not None:
            if not 0 <= self.tail_offset <= 1:
                raise ValueError("custom tail offset must lie in [0, 1]")
            t = len(self.table)
            if prev is not None and t + self.tail_offset <= prev:
                raise ValueError("custom tail is not strictly increasing at the seam")

    @property
    def name(self) -> str:
        if self.kind == "stationary":
            return f"stationary:{format_rational(self.c)}"
        if self.kind == "powermean":
            return f"powermean:{format_rational(self.p)},{format_rational(self.w)}"
        return self.kind

    # -- evaluation helpers --------------------------------------------------

    def rational_value(self, t: int) -> Fraction | None:
        """f(t) as an exact rational, or None when f(t) is irrational."""
        if t < 0:
            raise ValueError("divisor functions are defined for t >= 0")
        if self.kind == "adams":
            return Fraction(t)
        if self.kind == "jefferson":
            return Fraction(t + 1)
        if self.kind == "webster":
            return Fraction(2 * t + 1, 2)
        if self.kind == "dean":
            # t(t+1) / (t + 1/2); equals 0 at t = 0
            return Fraction(2 * t * (t + 1), 2 * t + 1)
        if self.kind == "stationary":
            return t + self.c
        if self.kind == "custom":
            if t < len(self.table):
                value = self.table[t]
            elif self.tail_offset is not None:
                value = t + self.tail_offset
            else:
                raise ValueError(
                    f"custom divisor table covers t < {len(self.table)}; got t={t}"
                )
            if not t <= value <= t + 1:
                raise ValueError(f"custom divisor violates t <= f(t) <= t+1 at t={t}")
            return value
        if self.kind == "hill":
            return Fraction(0) if t == 0 else None
        if self.kind == "powermean":
            if t == 0 and self.p <= 0:
                return Fraction(0)
            if self.p == 1:
                return self.w * t + (1 - self.w) * (t + 1)
            if self.w == 0 and self.p != 0:
                return Fraction(t + 1)
            if self.w == 1 and self.p != 0:
                return Fraction(t)
            if self.p == 0 and self.w == 0:
                return Fraction(t + 1)
            if self.p == 0 and self.w == 1:
                return Fraction(t)
            return None
        raise AssertionError(self.kind)

    def is_zero_at(self, t: int) -> bool:
        value = self.rational_value(t)
        if value is not None:
            return value == 0
        return False  # hill and powermean are irrational only when positive

    # -- exact comparison core -------------------------------------------

    def compare_products(self, c1: Fraction, t1: int, c2: Fraction, t2: int) -> int:
        """Sign of c1*f(t1) - c2*f(t2) for non-negative rational c1, c2."""
        if c1 < 0 or c2 < 0:
            raise ValueError("scaling coefficients must be non-negative")
        left_zero = c1 == 0 or self.is_zero_at(t1)
        right_zero = c2 == 0 or self.is_zero_at(t2)
        if left_zero or right_zero:
            if left_zero and right_zero:
                return 0
            return -1 if left_zero else 1

        v1 = self.rational_value(t1)
        v2 = self.rational_value(t2)
        if v1 is not None and v2 is not None:
            return _sign(c1 * v1 - c2 * v2)

        if self.kind == "hill":
            # compare squares: both sides are positive
            lhs = c1 * c1 * t1 * (t1 + 1)
            rhs = c2 * c2 * t2 * (t2 + 1)
            return _sign(lhs - rhs)

        if self.kind == "powermean":
            p, w = self.p, self.w
            if p != 0 and p.denominator == 1:
                k = p.numerator
                g1 = w * Fraction(t1) ** k + (1 - w) * Fraction(t1 + 1) ** k
                g2 = w * Fraction(t2) ** k + (1 - w) * Fraction(t2 + 1) ** k
                lhs = c1**k * g1
                rhs = c2**k * g2
                # raising positives to a negative power flips the order
                return _sign(lhs - rhs) if k > 0 else -_sign(lhs - rhs)
            if p == 0:
                a, q = w.numerator, w.denominator
                lhs = c1**q * Fraction(t1) ** a * Fraction(t1 + 1) ** (q - a)
                rhs = c2**q * Fraction(t2) ** a * Fraction(t2 + 1) ** (q - a)
                return _sign(lhs - rhs)
            if not self.allow_approx:
                raise PrecisionError(
                    f"power mean with non-integer exponent {self.p} has no exact "
                    "comparison; construct it with allow_approx=True to use the "
                    "high-precision fallback"
                )
            return _sign_decimal(self._approx(c1, t1) - self._approx(c2, t2))

        raise AssertionError(f"no comparison path for {self.kind}")

    def _approx(self, coeff: Fraction, t: int) -> Decimal:
        bits = int(os.environ.get(PRECISION_ENV_VAR, DEFAULT_PRECISION_BITS))
        digits = max(28, math.ceil(bits * math.log10(2)) + 10)
        with localcontext() as ctx:
            ctx.prec = digits
            p, w = self.p, self.w
            dt = Decimal(t)
            dw = Decimal(w.numerator) / Decimal(w.denominator)
            dp = Decimal(p.numerator) / Decimal(p.denominator)
            mean = dw * dt**dp + (1 - dw) * (dt + 1) ** dp
            value = mean ** (1 / dp)
            dcoeff = Decimal(coeff.numerator) / Decimal(coeff.denominator)
            return dcoeff * value


def _sign(q: Fraction) -> int:
    return (q > 0) - (q < 0)


def _sign_decimal(d: Decimal) -> int:
    # exact representational equality at working precision counts as a tie
    return (d > 0) - (d < 0)


ADAMS = DivisorFunction("adams")
JEFFERSON = DivisorFunction("jefferson")
WEBSTER = DivisorFunction("webster")
HILL = DivisorFunction("hill")
DEAN = DivisorFunction("dean")

TRADITIONAL = {
    "adams": ADAMS,
    "jefferson": JEFFERSON,
    "webster": WEBSTER,
    "hill": HILL,
    "dean": DEAN,
}


def stationary(c) -> DivisorFunction:
    return DivisorFunction("stationary", c=_as_rational(c))


def power_mean(p, w, allow_approx: bool = False) -> DivisorFunction:
    return DivisorFunction(
        "powermean", p=_as_rational(p), w=_as_rational(w), allow_approx=allow_approx
    )


def custom(values: Sequence, tail_offset=None) -> DivisorFunction:
    table = tuple(_as_rational(v) for v in values)
    tail = _as_rational(tail_offset) if tail_offset is not None else None
    return DivisorFunction("custom", table=table, tail_offset=tail)


def divisor_from_name(text: str) -> DivisorFunction:
    """Parse ``adams|jefferson|webster|hill|dean|stationary:c|powermean:p,w|custom:@file``."""
    name = text.strip()
    if name in TRADITIONAL:
        return TRADITIONAL[name]
    if name.startswith("stationary:"):
        return stationary(parse_rational(name.split(":", 1)[1], "stationary offset"))
    if name.startswith("powermean:"):
        params = name.split(":", 1)[1].split(",")
        if len(params) != 2:
            raise ValueError("powermean takes two parameters: powermean:p,w")
        return power_mean(
            parse_rational(params[0].strip(), "powermean p"),
            parse_rational(params[1].strip(), "powermean w"),
        )
    if name.startswith("custom:@"):
        path = name.split("@", 1)[1]
        with open(path, "r", encoding="utf-8") as handle:
            doc = json.load(handle)
        values = [parse_rational(v, "custom table entry") for v in doc["values"]]
        tail = doc.get("tail_offset")
        return custom(values, tail if tail is None else parse_rational(tail, "tail_offset"))
    raise ValueError(f"unknown divisor method {text!r}")


def compare_scores(
    f: DivisorFunction, t_a: int, w_a: Fraction, t_b: int, w_b: Fraction
) -> int:
    """Exact order of f(t_a)/w_a versus f(t_b)/w_b: -1, 0, or 1."""
    if t_a < 0 or t_b < 0:
        raise ValueError("pick counts must be non-negative")
    w_a, w_b = Fraction(w_a), Fraction(w_b)
    if w_a <= 0 or w_b <= 0:
        raise ValueError("weights must be strictly positive")
    return f.compare_products(1 / w_a, t_a, 1 / w_b, t_b)


def _check_weights(n: int, weights: Sequence) -> tuple[Fraction, ...]:
    ws = tuple(Fraction(w) for w in weights)
    if len(ws) != n:
        raise ValueError(f"need {n} weights, got {len(ws)}")
    if any(w <= 0 for w in ws):
        raise ValueError("weights must be strictly positive")
    return ws


def divisor_sequence(
    f: DivisorFunction, n: int, m: int, weights: Sequence
) -> PickingSequence:
    """Length-m sequence: each turn goes to the argmin of f(t_i)/w_i.

    Ties break in favor of the lowest agent index.
    """
    if n < 1:
        raise ValueError("need at least one agent")
    if m < 0:
        raise ValueError("item count must be non-negative")
    ws = _check_weights(n, weights)
    counts = [0] * n
    turns = []
    for _ in range(m):
        best = 0
        for i in range(1, n):
            if compare_scores(f, counts[i], ws[i], counts[best], ws[best]) < 0:
                best = i
        turns.append(best)
        counts[best] += 1
    return PickingSequence(tuple(turns))


def quota_sequence(n: int, m: int, weights: Sequence) -> PickingSequence:
    """Jefferson-style argmin of (t_i+1)/w_i over agents below upper quota.

    For round k an agent is eligible iff t_i < w_i * k / sum(w) (strict);
    ties break to the lowest index.  The eligibility set is provably
    non-empty each round; an empty set would mean an arithmetic bug.
    """
    if n < 1:
        raise ValueError("need at least one agent")
    if m < 0:
        raise ValueError("item count must be non-negative")
    ws = _check_weights(n, weights)
    total = sum(ws, Fraction(0))
    counts = [0] * n
    turns = []
    for k in range(1, m + 1):
        eligible = [i for i in range(n) if counts[i] < Fraction(k) * ws[i] / total]
        assert eligible, "quota eligibility set is empty: arithmetic bug"
        best = eligible[0]
        for i in eligible[1:]:
            if Fraction(counts[i] + 1) / ws[i] < Fraction(counts[best] + 1) / ws[best]:
                best = i
        turns.append(best)
        counts[best] += 1
    return PickingSequence(tuple(turns))


@dataclass(frozen=True)
class Rule:
    """A named allocation procedure usable by the harness and CLI.

    kind: divisor | quota | mwnw | round_robin | envy_cycle |
          adjusted_winner | fixed_sequence
    """

    kind: str
    divisor: DivisorFunction | None = None
    fixed: PickingSequence | None = None

    def __post_init__(self):
        if self.kind == "divisor" and self.divisor is None:
            raise ValueError("divisor rule needs a DivisorFunction")
        if self.kind == "fixed_sequence" and self.fixed is None:
            raise ValueError("fixed_sequence rule needs a PickingSequence")
        if self.kind not in (
            "divisor",
            "quota",
            "mwnw",
            "round_robin",
            "envy_cycle",
            "adjusted_winner",
            "fixed_sequence",
        ):
            raise ValueError(f"unknown rule kind {self.kind!r}")

    @property
    def name(self) -> str:
        if self.kind == "divisor":
            return self.divisor.name
        return {
            "quota": "quota",
            "mwnw": "mwnw",
            "round_robin": "rr",
            "envy_cycle": "ecycle",
            "adjusted_winner": "aw",
            "fixed_sequence": "fixed",
        }[self.kind]

    @property
    def is_sequence_based(self) -> bool:
        return self.kind in ("divisor", "quota", "round_robin", "fixed_sequence")


def divisor_rule(f: DivisorFunction) -> Rule:
    return Rule("divisor", divisor=f)


QUOTA_RULE = Rule("quota")
MWNW_RULE = Rule("mwnw")
ROUND_ROBIN_RULE = Rule("round_robin")
ENVY_CYCLE_RULE = Rule("envy_cycle")
ADJUSTED_WINNER_RULE = Rule("adjusted_winner")


def fixed_sequence_rule(sequence: PickingSequence) -> Rule:
    return Rule("fixed_sequence", fixed=sequence)


def rule_from_name(text: str) -> Rule:
    name = text.strip()
    simple = {
        "quota": QUOTA_RULE,
        "mwnw": MWNW_RULE,
        "rr": ROUND_ROBIN_RULE,
        "ecycle": ENVY_CYCLE_RULE,
        "aw": ADJUSTED_WINNER_RULE,
    }
    if name in simple:
        return simple[name]
    return divisor_rule(divisor_from_name(name))
