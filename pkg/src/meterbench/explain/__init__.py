"""Explanation generators: Shapley attributions, impact rules, fuzzy baseline."""

from .bundle import (
    EXPLAINERS,
    ExplanationBundle,
    bundle_from_json,
    bundle_to_json,
    fuzzy_explainer,
    impact_rule_explainer,
    read_bundles,
    shapley_explainer,
    write_bundles,
)
from .fuzzy import (
    DEFAULT_LABELS,
    FuzzyRule,
    FuzzyRuleBase,
    FuzzyVariable,
    NoRuleCoverage,
    make_variable,
    mamdani_infer,
    wang_mendel_learn,
)
from .impact_rules import RULE_CLASSES, Condition, ImpactRule, mine_impact_rules
from .shapley import Attribution, efficiency_gap, exact_shapley
from .templates import (
    attribution_templates,
    comparative_adverb,
    fuzzy_baseline_explanation,
    month_label,
    rule_templates,
)

__all__ = [
    "EXPLAINERS",
    "ExplanationBundle",
    "bundle_from_json",
    "bundle_to_json",
    "fuzzy_explainer",
    "impact_rule_explainer",
    "read_bundles",
    "shapley_explainer",
    "write_bundles",
    "DEFAULT_LABELS",
    "FuzzyRule",
    "FuzzyRuleBase",
    "FuzzyVariable",
    "NoRuleCoverage",
    "make_variable",
    "mamdani_infer",
    "wang_mendel_learn",
    "RULE_CLASSES",
    "Condition",
    "ImpactRule",
    "mine_impact_rules",
    "Attribution",
    "efficiency_gap",
    "exact_shapley",
    "attribution_templates",
    "comparative_adverb",
    "fuzzy_baseline_explanation",
    "month_label",
    "rule_templates",
]
