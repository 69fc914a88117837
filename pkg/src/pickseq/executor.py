"""Run a picking sequence against an instance to produce an allocation.

Agents are truthful: at her turn an agent takes the remaining item she
values most, ties to the lowest item index.  An agent whose remaining
items are all worth zero still picks (the lowest-indexed one), so every
sequence of length m consumes all m items.
"""

from __future__ import annotations

from typing import Iterable

from .core import Allocation, Instance, PickingSequence, turns_of


def execute(instance: Instance, sequence: PickingSequence | Iterable[int]) -> Allocation:
    turns = turns_of(sequence)
    if len(turns) != instance.m:
        raise ValueError(
            f"sequence length {len(turns)} does not match item count {instance.m}"
        )
    if any(not 0 <= a < instance.n for a in turns):
        raise ValueError(f"sequence references an agent outside 1..{instance.n}")

    remaining = list(range(instance.m))
    bundles = [set() for _ in range(instance.n)]
    for agent in turns:
        row = instance.utilities[agent]
        pick = remaining[0]
        for g in remaining[1:]:
            if row[g] > row[pick]:
                pick = g
        bundles[agent].add(pick)
        remaining.remove(pick)
    return Allocation(tuple(frozenset(b) for b in bundles))
