"""Sentence templates for attribution and impact-rule explanations.

Every sentence is a deterministic instantiation of a fixed frame; the
wording of the frames is part of the artifact's contract and covered by
golden-text tests.
"""

from __future__ import annotations

import calendar as _calendar
from typing import List, Optional, Sequence

from .fuzzy import FuzzyRuleBase
from .impact_rules import Condition, ImpactRule
from .shapley import Attribution

# relative-delta thresholds (percent) for the comparative adverb
MUCH_THRESHOLD = 25.0
SLIGHT_THRESHOLD = 5.0


def comparative_adverb(delta_pct: float) -> str:
    if delta_pct <= -MUCH_THRESHOLD:
        return "much lower"
    if delta_pct <= -SLIGHT_THRESHOLD:
        return "slightly lower"
    if delta_pct < SLIGHT_THRESHOLD:
        return "similar"
    if delta_pct < MUCH_THRESHOLD:
        return "slightly higher"
    return "much higher"


def month_label(month: int) -> str:
    if not 0 <= month <= 11:
        raise ValueError(f"month index out of range: {month}")
    return _calendar.month_name[month + 1]


def _namelist(names: Sequence[str]) -> str:
    return "[" + ", ".join(f"'{n}'" for n in names) + "]"


def actionable_sentence(devices: Sequence[str], horizon: str = "year") -> str:
    if not devices:
        return ""
    shown = _namelist(list(devices)[:3])
    if horizon == "year":
        return f"Your consumption may reduce by controlling the following devices: {shown}."
    return ("Your consumption may reduce by controlling the following devices "
            f"and what is related to them: {shown}.")


def attribution_templates(attributions: Sequence[Attribution], horizon="year",
                          prev_month_delta: Optional[float] = None,
                          actionable_list: Sequence[str] = ()) -> str:
    if len(attributions) < 3:
        raise ValueError("need at least 3 attributions")
    ranked = sorted(attributions, key=lambda a: -abs(a.shapley_value))
    names = [a.feature for a in ranked[:3]]

    flagged = set(actionable_list)
    devices = [a.feature for a in ranked if a.actionable or a.feature in flagged]

    if horizon == "year":
        text = ("The estimation of your energy consumption for the next year "
                f"is mostly influenced by the following attributes: {_namelist(names)}.")
        extra = actionable_sentence(devices, "year")
    else:
        if prev_month_delta is None:
            raise ValueError("monthly template needs the previous-month delta")
        adverb = comparative_adverb(prev_month_delta)
        text = (f"In {month_label(int(horizon))}, your energy consumption will be "
                f"{adverb} because of the following attributes: {_namelist(names)}.")
        extra = actionable_sentence(devices, "month")
    return text + (" " + extra if extra else "")


def _cond_str(c: Condition) -> str:
    if c.category is not None:
        return f"{c.feature} = {c.category}"
    if c.lower is not None and c.upper is not None:
        return f"{c.lower:.2f} < {c.feature} ≤ {c.upper:.2f}"
    if c.upper is not None:
        return f"{c.feature} ≤ {c.upper:.2f}"
    return f"{c.feature} > {c.lower:.2f}"


def _supporting_clause(c: Condition) -> str:
    if c.category is not None:
        return f"your {c.feature} being {c.category}"
    return _cond_str(c)


def _counterfactual_clause(c: Condition) -> str:
    if c.category is not None:
        return f"a {c.feature} of {c.category}"
    if c.lower is not None and c.upper is not None:
        return f"a {c.feature} between {c.lower:.2f} and {c.upper:.2f}"
    if c.upper is not None:
        return f"a {c.feature} ≤ {c.upper:.2f}"
    return f"a {c.feature} > {c.lower:.2f}"


def _conds(rule: ImpactRule, render) -> str:
    return " and ".join(render(c) for c in rule.conditions)


def _strongest(rules: List[ImpactRule]) -> ImpactRule:
    return max(rules, key=lambda r: abs(r.impact))


def rule_templates(rules: Sequence[ImpactRule], prediction_kwh: float) -> str:
    """Render one sentence per present rule class, strongest rule each."""
    by_class = {}
    for r in rules:
        by_class.setdefault(r.rule_class, []).append(r)

    sentences = []
    if "current_supporting" in by_class:
        r = _strongest(by_class["current_supporting"])
        sentences.append(f"Your predicted consumption is {prediction_kwh:.2f}kWh, "
                         f"this is supported by {_conds(r, _supporting_clause)}.")
    if "current_contradicting" in by_class:
        r = _strongest(by_class["current_contradicting"])
        direction = "increased" if r.impact > 0 else "decreased"
        sentences.append("The conditions that currently exist that indicate a risk of "
                         f"{direction} consumption by {abs(r.impact):.2f}kWh for the "
                         f"particular month are {_conds(r, _cond_str)}.")
    if "hypothetically_supporting" in by_class:
        r = _strongest(by_class["hypothetically_supporting"])
        sentences.append("The conditions that need to be satisfied to maintain the "
                         f"monthly predicted consumption would be {_conds(r, _cond_str)}.")
    if "hypothetically_contradicting" in by_class:
        r = _strongest(by_class["hypothetically_contradicting"])
        direction = "increase" if r.impact > 0 else "decrease"
        sentences.append(f"If you have {_conds(r, _counterfactual_clause)} it may "
                         f"{direction} your consumption by {abs(r.impact):.2f}kWh.")
    return " ".join(sentences)


def fuzzy_baseline_explanation(rule_base: FuzzyRuleBase, fired, horizon="year") -> str:
    """Translate the strongest fired rule; the sentences carry no final
    period, matching the published examples."""
    if not fired:
        raise ValueError("need at least one fired rule")
    rule = fired[0][0]
    clauses = " and ".join(
        f"your {var.name} has been {var.labels[k]}"
        for var, k in zip(rule_base.input_vars, rule.antecedent))
    label = rule_base.output_var.labels[rule.consequent]
    if horizon == "year":
        return (f"The estimation of your energy consumption for next year is "
                f"{label} because {clauses}")
    return (f"In {month_label(int(horizon))}, your energy consumption will be "
            f"{label} because {clauses}")
