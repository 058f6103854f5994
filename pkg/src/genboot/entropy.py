"""Topological entropy of regular trace languages and the model-system
precision/recall measures built on it.

The entropy of a language is the logarithm of the spectral radius of its
short-circuited trimmed automaton: return edges from accepting states to the
start close every accepted word into a cycle, so finite and infinite
languages alike get a growth rate.  The radius is the same for every trimmed
deterministic acceptor of a language (walks from the start correspond
exactly to prefixes of return-closed words), so it can be computed directly
on whatever trimmed automaton is at hand.

The comparison measures are ratios of those growth rates:

* precision(m, s) — the share of the model's behavior present in the
  system: rho(m ∩ s) / rho(m).
* recall(m, s) — the share of the system's behavior captured by the model:
  rho(m ∩ s) / rho(s).

O-terminated automata are stripped to plain trace acceptors before
measuring, so both conventions yield the growth rate of the same trace
language and the two operands are always compared on equal footing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .automata import Dfa, WeightedDigraph, intersect, short_circuit, strip_terminal, trim
from .errors import EmptyLanguage, NoConvergence, ZeroDenominator

POWER_TOLERANCE = 1e-12
POWER_MAX_ITERATIONS = 100_000


@dataclass(frozen=True)
class EntropyValue:
    """An entropy measurement: value in nats plus convergence diagnostics."""

    value: float
    converged: bool
    iterations: int


def _trace_language_automaton(a: Dfa) -> Dfa:
    """Trimmed plain acceptor of the automaton's trace language."""
    return trim(strip_terminal(a))


def _adjacency(wd: WeightedDigraph) -> sp.csr_matrix:
    index = {node: i for i, node in enumerate(wd.nodes)}
    n = len(wd.nodes)
    rows, cols, vals = [], [], []
    for (src, dst), mult in wd.edges.items():
        rows.append(index[src])
        cols.append(index[dst])
        vals.append(float(mult))
    return sp.csr_matrix((vals, (rows, cols)), shape=(n, n))


def _spectral_radius(wd: WeightedDigraph) -> tuple[float, int]:
    """Dominant eigenvalue of the multigraph adjacency matrix by power
    iteration.

    Iterates on A + I: the shift breaks periodicity (the short-circuited
    graph is strongly connected but may be periodic) and adds exactly 1 to
    the dominant eigenvalue of a non-negative matrix.
    """
    a = _adjacency(wd)
    n = a.shape[0]
    x = np.full(n, 1.0 / math.sqrt(n))
    shifted = a @ x + x
    lam = 0.0
    for it in range(1, POWER_MAX_ITERATIONS + 1):
        norm = np.linalg.norm(shifted)
        if norm == 0.0:
            return 0.0, it
        x = shifted / norm
        shifted = a @ x + x
        lam_new = float(x @ shifted)
        if abs(lam_new - lam) < POWER_TOLERANCE:
            return lam_new - 1.0, it
        lam = lam_new
    raise NoConvergence(
        f"power iteration did not converge within {POWER_MAX_ITERATIONS} iterations"
    )


def _growth_rate(a: Dfa) -> tuple[float, int]:
    """Spectral radius of the short-circuited trace-language automaton."""
    core = _trace_language_automaton(a)
    if core.is_empty:
        raise EmptyLanguage("entropy is undefined for an empty language")
    rho, iterations = _spectral_radius(short_circuit(core))
    # short-circuiting guarantees a cycle, so the true radius is >= 1;
    # clamp tiny numerical undershoot
    return max(rho, 1.0), iterations


def topological_entropy(a: Dfa) -> EntropyValue:
    """ln of the spectral radius of the short-circuited trimmed automaton.

    Raises EmptyLanguage when the automaton accepts nothing and
    NoConvergence when power iteration exhausts its cap.
    """
    rho, iterations = _growth_rate(a)
    return EntropyValue(value=math.log(rho), converged=True, iterations=iterations)


def growth_oracle(a: Dfa, horizon: int) -> float:
    """Finite-horizon growth estimate, independent of the eigenvalue path.

    Counts the walks of length ``horizon`` from the start of the
    short-circuited trimmed automaton by exact integer dynamic programming
    and returns ln(count)/horizon.
    """
    if horizon < 8:
        raise ValueError(f"horizon must be at least 8, got {horizon}")
    core = _trace_language_automaton(a)
    if core.is_empty:
        raise EmptyLanguage("growth is undefined for an empty language")
    wd = short_circuit(core)
    out: dict = {}
    for (src, dst), mult in wd.edges.items():
        out.setdefault(src, []).append((dst, mult))
    counts = {wd.start: 1}
    for _ in range(horizon):
        nxt: dict = {}
        for node, c in counts.items():
            for dst, mult in out.get(node, ()):
                nxt[dst] = nxt.get(dst, 0) + c * mult
        counts = nxt
    total = sum(counts.values())
    return math.log(total) / horizon


def _measure(m: Dfa, s: Dfa) -> tuple[float, float, float]:
    nm = _trace_language_automaton(m)
    ns = _trace_language_automaton(s)
    if nm.is_empty:
        raise EmptyLanguage("the first operand accepts nothing")
    if ns.is_empty:
        raise EmptyLanguage("the second operand accepts nothing")
    rho_m, _ = _growth_rate(nm)
    rho_s, _ = _growth_rate(ns)
    inter = intersect(nm, ns)
    rho_i = 0.0 if inter.is_empty else _growth_rate(inter)[0]
    return rho_i, rho_m, rho_s


def model_system_precision(m: Dfa, s: Dfa) -> float:
    """Fraction of the model's behavior that the system exhibits."""
    rho_i, rho_m, _ = _measure(m, s)
    if rho_m <= 0.0 or not math.isfinite(rho_m):
        raise ZeroDenominator("model growth rate degenerated to zero")
    return rho_i / rho_m


def model_system_recall(m: Dfa, s: Dfa) -> float:
    """Fraction of the system's behavior that the model captures."""
    rho_i, _, rho_s = _measure(m, s)
    if rho_s <= 0.0 or not math.isfinite(rho_s):
        raise ZeroDenominator("system growth rate degenerated to zero")
    return rho_i / rho_s


def model_system_measures(m: Dfa, s: Dfa) -> tuple[float, float]:
    """Both measures from one shared computation: (precision, recall)."""
    rho_i, rho_m, rho_s = _measure(m, s)
    if rho_m <= 0.0 or not math.isfinite(rho_m):
        raise ZeroDenominator("model growth rate degenerated to zero")
    if rho_s <= 0.0 or not math.isfinite(rho_s):
        raise ZeroDenominator("system growth rate degenerated to zero")
    return rho_i / rho_m, rho_i / rho_s
