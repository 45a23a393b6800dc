"""Wang-Mendel rule learning and Mamdani inference on triangular partitions.

Each variable carries a uniform strong partition of triangular sets
(memberships sum to 1 everywhere inside the universe, boundary sets have
shoulders). Inference: min conjunction, min implication, max aggregation,
centroid defuzzification on a 1,000-point grid integrated exactly over
its piecewise-linear segments.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from ..core.types import NoRuleCoverage

GRID_POINTS = 1000

DEFAULT_LABELS = {
    3: ("low", "medium", "high"),
    5: ("very low", "low", "medium", "high", "very high"),
    7: ("extremely low", "very low", "low", "medium", "high", "very high", "extremely high"),
}


@dataclass(frozen=True)
class FuzzyVariable:
    name: str
    lo: float
    hi: float
    labels: Tuple[str, ...]

    def __post_init__(self):
        n = len(self.labels)
        if n < 3 or n % 2 == 0:
            raise ValueError("partition count must be odd and >= 3")
        if not self.hi > self.lo:
            raise ValueError(f"{self.name}: empty universe")

    @property
    def peaks(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, len(self.labels))

    def membership(self, x: float) -> np.ndarray:
        """Triangular strong-partition memberships; shoulders at the ends."""
        p = self.peaks
        out = np.zeros(len(self.labels))
        if x <= p[0]:
            out[0] = 1.0
            return out
        if x >= p[-1]:
            out[-1] = 1.0
            return out
        k = int(np.searchsorted(p, x, side="right")) - 1
        t = (x - p[k]) / (p[k + 1] - p[k])
        out[k] = 1.0 - t
        out[k + 1] = t
        return out

    def set_membership(self, label_index: int, grid: np.ndarray) -> np.ndarray:
        p = self.peaks
        step = p[1] - p[0]
        center = p[label_index]
        m = np.maximum(0.0, 1.0 - np.abs(grid - center) / step)
        if label_index == 0:
            m[grid <= center] = 1.0
        if label_index == len(self.labels) - 1:
            m[grid >= center] = 1.0
        return m


def make_variable(name: str, lo: float, hi: float, n_sets: int = 5) -> FuzzyVariable:
    if n_sets not in DEFAULT_LABELS:
        raise ValueError(f"no default labels for {n_sets} sets")
    return FuzzyVariable(name, float(lo), float(hi), DEFAULT_LABELS[n_sets])


@dataclass(frozen=True)
class FuzzyRule:
    antecedent: Tuple[int, ...]  # label index per input variable
    consequent: int
    degree: float


@dataclass(frozen=True)
class FuzzyRuleBase:
    input_vars: Tuple[FuzzyVariable, ...]
    output_var: FuzzyVariable
    rules: Tuple[FuzzyRule, ...]

    def __post_init__(self):
        seen = set()
        for r in self.rules:
            if len(r.antecedent) != len(self.input_vars):
                raise ValueError("rule antecedent arity mismatch")
            if r.antecedent in seen:
                raise ValueError(f"duplicate antecedent {r.antecedent}")
            seen.add(r.antecedent)


def _clamped(x: float, var: FuzzyVariable) -> float:
    if x < var.lo or x > var.hi:
        warnings.warn(f"{var.name}: value {x} outside universe, clamped", stacklevel=3)
        return min(max(x, var.lo), var.hi)
    return x


def wang_mendel_learn(X: np.ndarray, y: np.ndarray,
                      input_vars: Sequence[FuzzyVariable],
                      output_var: FuzzyVariable) -> FuzzyRuleBase:
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    y = np.asarray(y, dtype=np.float64)
    if X.shape[0] != y.size or X.shape[1] != len(input_vars):
        raise ValueError("training data shape mismatch")
    if y.size == 0:
        raise ValueError("need at least one training pair")

    best = {}
    for row, target in zip(X, y):
        antecedent, degree = [], 1.0
        for value, var in zip(row, input_vars):
            mu = var.membership(_clamped(float(value), var))
            k = int(np.argmax(mu))
            antecedent.append(k)
            degree *= float(mu[k])
        mu_out = output_var.membership(_clamped(float(target), output_var))
        consequent = int(np.argmax(mu_out))
        degree *= float(mu_out[consequent])
        key = tuple(antecedent)
        if key not in best or degree > best[key].degree:
            best[key] = FuzzyRule(key, consequent, degree)
    rules = tuple(best[k] for k in sorted(best))
    return FuzzyRuleBase(tuple(input_vars), output_var, rules)


def mamdani_infer(rule_base: FuzzyRuleBase, x: Sequence[float]):
    """Crisp centroid output plus fired rules sorted by strength."""
    values = np.asarray(x, dtype=np.float64).reshape(-1)
    if values.size != len(rule_base.input_vars):
        raise ValueError("input arity mismatch")
    memberships = [var.membership(float(v))
                   for v, var in zip(values, rule_base.input_vars)]

    fired = []
    for rule in rule_base.rules:
        strength = min(float(memberships[j][k]) for j, k in enumerate(rule.antecedent))
        if strength > 0:
            fired.append((rule, strength))
    if not fired:
        raise NoRuleCoverage("no rule fires at this input")
    fired.sort(key=lambda rs: -rs[1])

    out = rule_base.output_var
    grid = np.linspace(out.lo, out.hi, GRID_POINTS)
    agg = np.zeros(GRID_POINTS)
    for rule, strength in fired:
        agg = np.maximum(agg, np.minimum(strength, out.set_membership(rule.consequent, grid)))

    z0, z1 = grid[:-1], grid[1:]
    m0, m1 = agg[:-1], agg[1:]
    h = z1 - z0
    area = np.sum(h * (m0 + m1) / 2.0)
    moment = np.sum(h * (z0 * (2.0 * m0 + m1) + z1 * (m0 + 2.0 * m1)) / 6.0)
    return float(moment / area), fired
