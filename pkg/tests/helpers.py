"""Shared test utilities: random structure generators and brute-force oracles."""

from __future__ import annotations

from genboot.automata import Dfa, Dfg, dfg_to_dfa, trim
from genboot.core import INPUT_MARKER, OUTPUT_MARKER, Trace

# candidate action names; the markers are deliberately absent
LETTERS = tuple(c for c in "abcdefghjklmnpqrstuvwxyz")


def enum_words(a: Dfa, max_len: int) -> set:
    """Every word of length <= max_len in the automaton's formal language."""
    successors: dict = {}
    for (state, letter), target in a.transitions.items():
        successors.setdefault(state, []).append((letter, target))
    out: set = set()
    stack = [(a.start, ())]
    while stack:
        state, word = stack.pop()
        if state in a.accepting:
            out.add(word)
        if len(word) == max_len:
            continue
        for letter, target in successors.get(state, ()):
            stack.append((target, word + (letter,)))
    return out


def enum_traces(a: Dfa, max_len: int) -> set:
    """Every trace of length <= max_len the automaton accepts (as tuples)."""
    if a.o_terminated:
        return {
            word[:-1]
            for word in enum_words(a, max_len + 1)
            if word and word[-1] == OUTPUT_MARKER
        }
    return enum_words(a, max_len)


def _closure(arcs, origin, forward: bool) -> set:
    step: dict = {}
    for src, dst in arcs:
        if forward:
            step.setdefault(src, []).append(dst)
        else:
            step.setdefault(dst, []).append(src)
    seen = {origin}
    stack = [origin]
    while stack:
        node = stack.pop()
        for nxt in step.get(node, ()):
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return seen


def random_dfg(rng, max_actions: int = 12) -> Dfg:
    """A random DFG whose every node lies on an input-to-output walk."""
    while True:
        count = int(rng.integers(2, max_actions + 1))
        actions = list(LETTERS[:count])
        arcs = set()
        first = rng.choice(count, size=int(rng.integers(1, 3)), replace=False)
        for idx in first:
            arcs.add((INPUT_MARKER, actions[int(idx)]))
        pool = actions + [OUTPUT_MARKER]
        for action in actions:
            breadth = min(int(rng.integers(1, 4)), len(pool))
            chosen = rng.choice(len(pool), size=breadth, replace=False)
            for idx in chosen:
                arcs.add((action, pool[int(idx)]))
        useful = _closure(arcs, INPUT_MARKER, True) & _closure(arcs, OUTPUT_MARKER, False)
        kept = {(s, t) for s, t in arcs if s in useful and t in useful}
        if not any(s == INPUT_MARKER for s, _ in kept):
            continue
        arc_freq = {arc: int(rng.integers(1, 10)) for arc in sorted(kept)}
        return Dfg.from_arcs(kept, arc_freq=arc_freq)


def random_dfa(rng, max_states: int = 20, alphabet=("x", "y", "z")) -> Dfa:
    """A random trimmed DFA with a non-empty language."""
    while True:
        count = int(rng.integers(2, max_states + 1))
        transitions = {}
        for state in range(count):
            for letter in alphabet:
                if rng.random() < 0.75:
                    transitions[(state, letter)] = int(rng.integers(count))
        accepting = frozenset(q for q in range(count) if rng.random() < 0.3)
        if not accepting:
            accepting = frozenset({int(rng.integers(count))})
        candidate = Dfa(
            frozenset(range(count)), frozenset(alphabet), transitions, 0, accepting
        )
        pruned = trim(candidate)
        if not pruned.is_empty:
            return pruned


def nested_pair(rng, max_states: int = 20):
    """(parent, child) automata with language(child) a subset of language(parent)."""
    while True:
        parent = random_dfa(rng, max_states)
        transitions = {
            key: value
            for key, value in parent.transitions.items()
            if rng.random() > 0.25
        }
        accepting = frozenset(q for q in parent.accepting if rng.random() > 0.25)
        if not accepting:
            continue
        child = trim(
            Dfa(parent.states, parent.alphabet, transitions, parent.start, accepting)
        )
        if not child.is_empty:
            return parent, child


def model_like_dfa(rng, max_actions: int = 12) -> Dfa:
    return dfg_to_dfa(random_dfg(rng, max_actions))


def all_words(alphabet, max_len: int) -> list:
    """Every tuple over ``alphabet`` of length 0..max_len."""
    words = [()]
    frontier = [()]
    for _ in range(max_len):
        frontier = [w + (x,) for w in frontier for x in alphabet]
        words.extend(frontier)
    return words
