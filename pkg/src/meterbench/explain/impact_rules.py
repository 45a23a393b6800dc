"""Local impact-rule mining on a perturbation neighborhood.

Rules are 1- or 2-condition conjunctions over quantile-binned features
whose segment mean shifts the model output; each kept rule is classified
by whether the instance satisfies it and whether its impact moves with
or against the instance's own deviation from the neighborhood mean.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

RULE_CLASSES = (
    "current_supporting",
    "current_contradicting",
    "hypothetically_supporting",
    "hypothetically_contradicting",
)


@dataclass(frozen=True)
class Condition:
    feature: str
    lower: Optional[float] = None  # exclusive
    upper: Optional[float] = None  # inclusive
    category: Optional[str] = None

    def __post_init__(self):
        if self.category is None and self.lower is None and self.upper is None:
            raise ValueError("condition needs a bound or a category")

    def satisfied(self, value) -> bool:
        if self.category is not None:
            return value == self.category
        v = float(value)
        if self.lower is not None and not v > self.lower:
            return False
        if self.upper is not None and not v <= self.upper:
            return False
        return True


@dataclass(frozen=True)
class ImpactRule:
    conditions: Tuple[Condition, ...]
    impact: float  # signed mean kWh shift of the segment vs the neighborhood
    support: int
    rule_class: str

    def __post_init__(self):
        if self.rule_class not in RULE_CLASSES:
            raise ValueError(f"unknown rule class {self.rule_class!r}")


def _feature_conditions(name: str, column: np.ndarray, bins: int,
                        domain: Optional[Sequence[str]]) -> List[Tuple[Condition, np.ndarray]]:
    """Conditions on one feature plus their masks over the neighborhood."""
    out = []
    if domain is not None:
        codes = np.rint(column).astype(int)
        for code, label in enumerate(domain):
            mask = codes == code
            if mask.any():
                out.append((Condition(name, category=label), mask))
        return out
    edges = np.unique(np.quantile(column, np.linspace(0.0, 1.0, bins + 1)))
    if edges.size < 2:
        return []
    for i in range(edges.size - 1):
        lower = None if i == 0 else float(edges[i])
        upper = None if i == edges.size - 2 else float(edges[i + 1])
        cond = Condition(name, lower=lower, upper=upper)
        mask = np.ones(column.size, dtype=bool)
        if lower is not None:
            mask &= column > lower
        if upper is not None:
            mask &= column <= upper
        if mask.any():
            out.append((cond, mask))
    return out


def mine_impact_rules(model: Callable, instance: Sequence[float],
                      feature_names: Sequence[str], feature_scales: Sequence[float],
                      categorical: Optional[Mapping[str, Sequence[str]]] = None,
                      neighborhood_size: int = 2000, perturb_scale: float = 0.3,
                      bins: int = 5, min_support: int = 50,
                      impact_threshold: Optional[float] = None,
                      switch_prob: float = 0.3, seed: int = 0) -> List[ImpactRule]:
    x = np.asarray(instance, dtype=np.float64)
    names = list(feature_names)
    scales = np.asarray(feature_scales, dtype=np.float64)
    if x.ndim != 1 or len(names) != x.size or scales.size != x.size:
        raise ValueError("instance, feature_names, and feature_scales must align")
    categorical = dict(categorical or {})
    unknown = set(categorical) - set(names)
    if unknown:
        raise ValueError(f"categorical domains for unknown features: {sorted(unknown)}")

    rng = np.random.default_rng(seed)
    X = np.tile(x, (neighborhood_size, 1))
    for j, name in enumerate(names):
        domain = categorical.get(name)
        if domain is None:
            X[:, j] += rng.normal(0.0, perturb_scale * scales[j], neighborhood_size)
        else:
            switch = rng.random(neighborhood_size) < switch_prob
            X[switch, j] = rng.integers(0, len(domain), int(switch.sum()))

    preds = np.asarray(model(X), dtype=np.float64)
    base = preds.mean()
    spread = preds.std()
    if spread == 0:
        return []
    threshold = impact_threshold if impact_threshold is not None else 0.1 * spread
    deviation = float(np.asarray(model(x[None, :]), dtype=np.float64)[0]) - base

    per_feature = []
    for j, name in enumerate(names):
        conds = _feature_conditions(name, X[:, j], bins, categorical.get(name))
        if conds:
            per_feature.append((j, conds))

    def instance_value(j):
        domain = categorical.get(names[j])
        return domain[int(round(x[j]))] if domain is not None else x[j]

    candidates: List[Tuple[Tuple[int, ...], Tuple[Condition, ...], np.ndarray]] = []
    for j, conds in per_feature:
        for cond, mask in conds:
            candidates.append(((j,), (cond,), mask))
    for (j1, conds1), (j2, conds2) in itertools.combinations(per_feature, 2):
        for c1, m1 in conds1:
            for c2, m2 in conds2:
                candidates.append(((j1, j2), (c1, c2), m1 & m2))

    rules = []
    for idx, conds, mask in candidates:
        support = int(mask.sum())
        if support < min_support:
            continue
        impact = float(preds[mask].mean() - base)
        if abs(impact) < threshold:
            continue
        satisfied = all(c.satisfied(instance_value(j)) for j, c in zip(idx, conds))
        toward = (impact > 0) == (deviation >= 0)
        if satisfied:
            rule_class = "current_supporting" if toward else "current_contradicting"
        else:
            rule_class = "hypothetically_supporting" if toward else "hypothetically_contradicting"
        rules.append(ImpactRule(tuple(conds), impact, support, rule_class))

    rules.sort(key=lambda r: -abs(r.impact))
    return rules
