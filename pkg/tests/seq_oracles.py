"""Brute-force transformation-closure oracles for the consistency checks.

These enumerate the literal edit operations (move a pick earlier, insert a
pick, trim the suffix back to length m) instead of using the derived
prefix-count characterizations, so they can referee those procedures.
"""

from __future__ import annotations

from itertools import combinations


def moved_set(pi: tuple[int, ...], agent: int) -> set[tuple[int, ...]]:
    """Closure of single moves of one of the agent's picks to any earlier slot."""
    seen = {pi}
    frontier = [pi]
    while frontier:
        current = frontier.pop()
        for src in range(len(current)):
            if current[src] != agent:
                continue
            for dst in range(src):
                edited = list(current)
                del edited[src]
                edited.insert(dst, agent)
                candidate = tuple(edited)
                if candidate not in seen:
                    seen.add(candidate)
                    frontier.append(candidate)
    return seen


def insert_images(tau: tuple[int, ...], agent: int, m: int) -> set[tuple[int, ...]]:
    """Every length-m result of inserting the agent's picks and trimming.

    Inserting k picks and trimming keeps some interleaving of tau's first
    m-k entries with k inserted picks, so enumerate all position subsets.
    """
    out = set()
    for k in range(m + 1):
        prefix = tau[: m - k]
        for positions in combinations(range(m), k):
            taken = set(positions)
            merged = []
            source = iter(prefix)
            for idx in range(m):
                merged.append(agent if idx in taken else next(source))
            out.add(tuple(merged))
    return out


def weight_closure(pi: tuple[int, ...], agent: int) -> set[tuple[int, ...]]:
    """All sequences reachable by move-earlier edits, insertions, and a trim."""
    m = len(pi)
    out: set[tuple[int, ...]] = set()
    for tau in moved_set(pi, agent):
        out |= insert_images(tau, agent, m)
    return out


def population_closure(pi: tuple[int, ...], new_agent: int) -> set[tuple[int, ...]]:
    """All sequences reachable by inserting the new agent's picks and a trim."""
    return insert_images(pi, new_agent, len(pi))
