"""Per-meter explanation bundles for each generator, plus JSONL IO.

The forecast pipelines are lag-based black boxes, so the attribute-level
generators fit a global ridge surrogate of the forecast on household and
weather attributes, then explain that surrogate. Every sentence in a
bundle regenerates from the machine-readable backing stored next to it.
"""

from __future__ import annotations

import calendar as _calendar
import json
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..core import calendar as cal
from ..core.types import Cohort
from .fuzzy import make_variable, mamdani_infer, wang_mendel_learn
from .impact_rules import Condition, ImpactRule, mine_impact_rules
from .shapley import Attribution, exact_shapley
from .templates import attribution_templates, fuzzy_baseline_explanation, rule_templates

MONTH_NAMES = tuple(_calendar.month_name[1:])

# survey count fields the expert panel marked as controllable devices
ACTIONABLE_FIELDS = ("tv", "pc", "tumble_dryer", "washing_machine", "dishwasher",
                     "set_top_box", "game_console", "laptop", "freezer",
                     "fridge_freezer", "refrigerator", "router", "tablet")

_RULES_PER_CLASS = 5  # backing keeps the strongest rules per class


@dataclass(frozen=True)
class ExplanationBundle:
    meter_id: str
    generator_id: str
    yearly: dict
    monthly: Tuple[dict, ...]

    def __post_init__(self):
        if len(self.monthly) != 12:
            raise ValueError("bundle needs 12 monthly entries")
        if not self.yearly.get("text") or any(not m.get("text") for m in self.monthly):
            raise ValueError("every horizon needs a non-empty text")


def _hyphen(name: str) -> str:
    return name.replace("_", "-")


def _spaced(name: str) -> str:
    return name.replace("_", " ")


def _survey_columns(cohort: Cohort, fields: Sequence[str]) -> np.ndarray:
    rows = []
    for mid in cohort.meters:
        rec = cohort.survey.get(mid)
        rows.append([np.nan if rec is None or getattr(rec, f) is None
                     else float(getattr(rec, f)) for f in fields])
    return np.asarray(rows, dtype=np.float64)


def _impute(F: np.ndarray) -> np.ndarray:
    out = F.copy()
    for j in range(out.shape[1]):
        col = out[:, j]
        if np.isnan(col).all():
            col[:] = 0.0
            continue
        col[np.isnan(col)] = np.nanmedian(col)
    return out


def _mean_consumption(prep) -> Dict[str, float]:
    out = {}
    fallback = []
    for mid, mo in prep.monthly.items():
        v = mo.values
        if np.isnan(v).all():
            out[mid] = np.nan
        else:
            out[mid] = float(np.nanmean(v))
            fallback.append(out[mid])
    default = float(np.median(fallback)) if fallback else 0.0
    return {mid: (default if np.isnan(v) else v) for mid, v in out.items()}


def _monthly_weather(cohort: Cohort) -> np.ndarray:
    """(12, 3) mean of daily avg/max/min temperature per month of 2017."""
    w = cohort.weather.y2017
    out = np.empty((12, 3))
    for m in range(12):
        d = cal.days_of_month(m)
        out[m] = [w.temp_avg[d].mean(), w.temp_max[d].mean(), w.temp_min[d].mean()]
    return out


def _ridge_model(F: np.ndarray, y: np.ndarray, lam: float = 1e-3):
    mu = F.mean(axis=0)
    sd = F.std(axis=0)
    sd[sd == 0] = 1.0
    Z = (F - mu) / sd
    w = np.linalg.solve(Z.T @ Z + lam * len(y) * np.eye(F.shape[1]), Z.T @ (y - y.mean()))
    intercept = float(y.mean())

    def model(X):
        return (np.asarray(X, dtype=np.float64) - mu) / sd @ w + intercept

    return model


def _prev_reference(prep, mid: str, predictions: np.ndarray, month: int) -> float:
    if month > 0:
        return float(predictions[month - 1])
    mo = prep.monthly[mid].values
    if not np.isnan(mo[11]):
        return float(mo[11])
    if not np.isnan(mo).all():
        return float(np.nanmean(mo))
    return float(predictions[0])


def _delta_pct(current: float, previous: float) -> float:
    if previous <= 0:
        return 0.0
    return (current - previous) / previous * 100.0


def shapley_explainer(cohort: Cohort, forecast, meter_ids=None, prep=None,
                      seed: int = 0) -> List[ExplanationBundle]:
    from ..forecast import prepare
    if prep is None:
        prep = prepare(cohort)
    ids = list(meter_ids) if meter_ids is not None else list(cohort.meters)
    all_ids = list(cohort.meters)
    mean_cons = _mean_consumption(prep)

    yearly_survey = ("num_occupants", "num_bedrooms", "heating_temperature",
                     "efficient_lighting", "tv", "pc", "tumble_dryer",
                     "washing_machine", "dishwasher", "freezer", "refrigerator")
    monthly_survey = ("num_occupants", "num_bedrooms", "heating_temperature",
                      "tv", "pc", "tumble_dryer", "washing_machine", "set_top_box")
    actionable = [_hyphen(f) for f in ACTIONABLE_FIELDS]

    # yearly surrogate over all meters
    Fy = _impute(np.column_stack([
        np.array([mean_cons[m] for m in all_ids]),
        _survey_columns(cohort, yearly_survey),
    ]))
    yearly_names = ["mean-consumption"] + [_hyphen(f) for f in yearly_survey]
    totals = np.array([forecast.predictions[m].sum() for m in all_ids])
    yearly_model = _ridge_model(Fy, totals)
    yearly_background = np.median(Fy, axis=0)

    # monthly surrogate over all meter-months
    temps = _monthly_weather(cohort)
    Sm = _impute(_survey_columns(cohort, monthly_survey))
    monthly_names = (["month", "avg-temp", "max-temp", "min-temp", "mean-consumption"]
                     + [_hyphen(f) for f in monthly_survey])
    rows, targets = [], []
    for i, mid in enumerate(all_ids):
        for m in range(12):
            rows.append(np.concatenate([[m + 1], temps[m],
                                        [mean_cons[mid]], Sm[i]]))
            targets.append(forecast.predictions[mid][m])
    Fm = np.vstack(rows)
    monthly_model = _ridge_model(Fm, np.asarray(targets))
    monthly_background = np.median(Fm, axis=0)

    index = {m: i for i, m in enumerate(all_ids)}
    bundles = []
    for mid in ids:
        i = index[mid]
        preds = forecast.predictions[mid]
        attrs = exact_shapley(yearly_model, Fy[i], yearly_background,
                              yearly_names, actionable)
        yearly = {
            "text": attribution_templates(attrs, "year", actionable_list=actionable),
            "attributions": [_attr_json(a) for a in attrs],
        }
        monthly = []
        for m in range(12):
            row = np.concatenate([[m + 1], temps[m], [mean_cons[mid]], Sm[i]])
            attrs_m = exact_shapley(monthly_model, row, monthly_background,
                                    monthly_names, actionable)
            delta = _delta_pct(preds[m], _prev_reference(prep, mid, preds, m))
            monthly.append({
                "month": cal.format_month(m),
                "text": attribution_templates(attrs_m, m, prev_month_delta=delta,
                                              actionable_list=actionable),
                "prev_month_delta": delta,
                "attributions": [_attr_json(a) for a in attrs_m],
            })
        bundles.append(ExplanationBundle(mid, "kb_shapley", yearly, tuple(monthly)))
    return bundles


def _attr_json(a: Attribution) -> dict:
    return {"feature": a.feature, "shapley_value": a.shapley_value,
            "actionable": a.actionable}


def _rule_json(r: ImpactRule) -> dict:
    return {
        "conditions": [{"feature": c.feature, "lower": c.lower, "upper": c.upper,
                        "category": c.category} for c in r.conditions],
        "impact": r.impact,
        "support": r.support,
        "rule_class": r.rule_class,
    }


def rule_from_json(data: dict) -> ImpactRule:
    conds = tuple(Condition(c["feature"], c["lower"], c["upper"], c["category"])
                  for c in data["conditions"])
    return ImpactRule(conds, data["impact"], data["support"], data["rule_class"])


def _top_rules(rules: Sequence[ImpactRule]) -> List[ImpactRule]:
    kept, counts = [], {}
    for r in rules:  # already sorted by |impact|
        n = counts.get(r.rule_class, 0)
        if n < _RULES_PER_CLASS:
            kept.append(r)
            counts[r.rule_class] = n + 1
    return kept


def _rule_seed(seed: int, meter_index: int, month: int) -> int:
    return int(np.random.SeedSequence(seed, spawn_key=(meter_index, month)).generate_state(1)[0])


def impact_rule_explainer(cohort: Cohort, forecast, meter_ids=None, prep=None,
                          seed: int = 0) -> List[ExplanationBundle]:
    from ..forecast import prepare
    if prep is None:
        prep = prepare(cohort)
    ids = list(meter_ids) if meter_ids is not None else list(cohort.meters)
    all_ids = list(cohort.meters)
    mean_cons = _mean_consumption(prep)
    temps = _monthly_weather(cohort)

    survey = ("num_occupants", "num_bedrooms")
    S = _impute(_survey_columns(cohort, survey))
    monthly_names = ["target month", "temperature", "mean consumption",
                     "num occupants", "num bedrooms"]
    categorical = {"target month": MONTH_NAMES}
    rows, targets = [], []
    for i, mid in enumerate(all_ids):
        for m in range(12):
            rows.append(np.concatenate([[m], [temps[m, 0]], [mean_cons[mid]], S[i]]))
            targets.append(forecast.predictions[mid][m])
    Fm = np.vstack(rows)
    monthly_model = _ridge_model(Fm, np.asarray(targets))
    monthly_scales = Fm.std(axis=0)

    yearly_survey = ("num_occupants", "num_bedrooms", "heating_temperature")
    Fy = _impute(np.column_stack([
        np.array([mean_cons[m] for m in all_ids]),
        _survey_columns(cohort, yearly_survey),
    ]))
    yearly_names = ["mean consumption", "num occupants", "num bedrooms",
                    "heating temperature"]
    totals = np.array([forecast.predictions[m].sum() for m in all_ids])
    yearly_model = _ridge_model(Fy, totals)
    yearly_scales = Fy.std(axis=0)

    index = {m: i for i, m in enumerate(all_ids)}
    bundles = []
    for mid in ids:
        i = index[mid]
        preds = forecast.predictions[mid]
        total = float(preds.sum())
        rules_y = mine_impact_rules(yearly_model, Fy[i], yearly_names, yearly_scales,
                                    seed=_rule_seed(seed, i, 12))
        yearly = {
            "text": rule_templates(rules_y, total) or f"Your predicted consumption is {total:.2f}kWh.",
            "prediction_kwh": total,
            "rules": [_rule_json(r) for r in _top_rules(rules_y)],
        }
        monthly = []
        for m in range(12):
            row = np.concatenate([[m], [temps[m, 0]], [mean_cons[mid]], S[i]])
            rules = mine_impact_rules(monthly_model, row, monthly_names, monthly_scales,
                                      categorical=categorical,
                                      seed=_rule_seed(seed, i, m))
            pred = float(preds[m])
            monthly.append({
                "month": cal.format_month(m),
                "text": rule_templates(rules, pred) or f"Your predicted consumption is {pred:.2f}kWh.",
                "prediction_kwh": pred,
                "rules": [_rule_json(r) for r in _top_rules(rules)],
            })
        bundles.append(ExplanationBundle(mid, "dr_rules", yearly, tuple(monthly)))
    return bundles


def fuzzy_explainer(cohort: Cohort, forecast, meter_ids=None, prep=None,
                    seed: int = 0) -> List[ExplanationBundle]:
    from ..forecast import prepare
    if prep is None:
        prep = prepare(cohort)
    ids = list(meter_ids) if meter_ids is not None else list(cohort.meters)
    all_ids = list(cohort.meters)
    mean_cons = _mean_consumption(prep)
    x = np.array([mean_cons[m] for m in all_ids])

    def universe(values):
        lo, hi = float(values.min()), float(values.max())
        return (lo, hi) if hi > lo else (lo, lo + 1.0)

    in_var = make_variable("average monthly consumption this year", *universe(x))
    preds = np.vstack([forecast.predictions[m] for m in all_ids])

    out_year = make_variable("estimation", *universe(preds.sum(axis=1) / 12.0))
    base_year = wang_mendel_learn(x[:, None], preds.sum(axis=1) / 12.0, [in_var], out_year)
    bases_month = []
    for m in range(12):
        out_m = make_variable("estimation", *universe(preds[:, m]))
        bases_month.append(wang_mendel_learn(x[:, None], preds[:, m], [in_var], out_m))

    index = {m: i for i, m in enumerate(all_ids)}
    bundles = []
    for mid in ids:
        i = index[mid]
        crisp, fired = mamdani_infer(base_year, [x[i]])
        yearly = {
            "text": fuzzy_baseline_explanation(base_year, fired, "year"),
            "crisp": crisp,
            "rule": _fuzzy_rule_json(base_year, fired[0]),
        }
        monthly = []
        for m in range(12):
            crisp_m, fired_m = mamdani_infer(bases_month[m], [x[i]])
            monthly.append({
                "month": cal.format_month(m),
                "text": fuzzy_baseline_explanation(bases_month[m], fired_m, m),
                "crisp": crisp_m,
                "rule": _fuzzy_rule_json(bases_month[m], fired_m[0]),
            })
        bundles.append(ExplanationBundle(mid, "fuzzy_baseline", yearly, tuple(monthly)))
    return bundles


def _fuzzy_rule_json(base, fired_rule) -> dict:
    rule, strength = fired_rule
    return {
        "antecedent": [var.labels[k] for var, k in zip(base.input_vars, rule.antecedent)],
        "consequent": base.output_var.labels[rule.consequent],
        "degree": rule.degree,
        "strength": strength,
    }


EXPLAINERS = {
    "kb_shapley": shapley_explainer,
    "dr_rules": impact_rule_explainer,
    "fuzzy_baseline": fuzzy_explainer,
}


def bundle_to_json(bundle: ExplanationBundle) -> dict:
    return {
        "meter_id": bundle.meter_id,
        "generator_id": bundle.generator_id,
        "yearly": bundle.yearly,
        "monthly": list(bundle.monthly),
    }


def bundle_from_json(data: dict) -> ExplanationBundle:
    return ExplanationBundle(data["meter_id"], data["generator_id"],
                             data["yearly"], tuple(data["monthly"]))


def write_bundles(path, bundles: Sequence[ExplanationBundle]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for b in bundles:
            fh.write(json.dumps(bundle_to_json(b), sort_keys=True, ensure_ascii=False))
            fh.write("\n")


def read_bundles(path) -> List[ExplanationBundle]:
    out = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                out.append(bundle_from_json(json.loads(line)))
    return out
