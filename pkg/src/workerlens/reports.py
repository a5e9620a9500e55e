"""Natural-language reports rendered from explanations and KPI verdicts.

Templates are data files under ``templates/`` with ``key = text`` lines;
slots use ``{name}`` syntax.  The piece report has exactly 2 numbered
statements, the session report exactly 5.  A feature counts as
"significant" when its absolute surrogate weight is at least half of the
largest one in the explanation.
"""

from __future__ import annotations

from importlib import resources

from .explain import Explanation, ExplanationTerm
from .kpi import KpiVerdict, NEUTRAL, OVER, UNDER

SIGNIFICANT_FRACTION = 0.5

# display names per scenario (feature numbering differs between the two)
PIECE_LABELS = {
    "f02": "input instant",
    "f03": "output delay",
    "f04": "time between pieces",
}
SESSION_LABELS = {
    "f02": "input instants",
    "f03": "output delays",
    "f04": "number of incidences",
    "f05": "number of invalid pieces",
    "f06": "number of valid pieces",
    "f07": "number of directly placed pieces",
    "f08": "number of pieces collected from the tray",
    "f09": "number of pieces taken to the buffer",
    "f10": "number of reloads",
    "f11": "number of assistant reboots",
    "f12": "valid piece ratio",
    "f13": "time between pieces",
    "f14": "time between valid pieces",
    "f15": "total time",
}
STAT_WORDS = {"avg": "average", "q1": "Q1", "q2": "Q2", "q3": "Q3"}

# unit suffix by base feature: timings in seconds, counters in units
_SECONDS = {"f02", "f03", "f13", "f14", "f15"}
_UNITS = {"f04", "f05", "f06", "f07", "f08", "f09", "f10", "f11"}


def _split_column(column: str):
    if "(" in column:
        base, suffix = column[:-1].split("(")
        return base, suffix
    return column, None


def display_label(column: str, scenario: int) -> str:
    base, suffix = _split_column(column)
    labels = PIECE_LABELS if scenario == 1 else SESSION_LABELS
    label = labels.get(base, base)
    if suffix:
        label = f"{label} {STAT_WORDS[suffix]}"
    return label


def unit_of(column: str) -> str:
    base, _ = _split_column(column)
    if base in _SECONDS:
        return " s"
    if base in _UNITS:
        return " units"
    return ""


def display_statement(term: ExplanationTerm, scenario: int) -> str:
    """Bin statement with display names and units, e.g.
    '26.00 s < output delay ≤ 34.00 s'."""
    label = display_label(term.feature, scenario)
    unit = unit_of(term.feature)
    if term.bin_low is None:
        return f"{label} ≤ {term.bin_high:.2f}{unit}"
    if term.bin_high is None:
        return f"{label} > {term.bin_low:.2f}{unit}"
    return (f"{term.bin_low:.2f}{unit} < {label} ≤ "
            f"{term.bin_high:.2f}{unit}")


def load_template(name: str) -> dict:
    """Parse a ``key = text`` template file from the package data."""
    text = (resources.files("workerlens") / "templates" / name).read_text("utf-8")
    out = {}
    for line in text.splitlines():
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        key, _, value = line.partition(" = ")
        out[key.strip()] = value
    return out


def significant_terms(expl: Explanation) -> list[ExplanationTerm]:
    if not expl.terms:
        return []
    top = max(abs(t.weight) for t in expl.terms)
    if top <= 0.0:
        return []
    return [t for t in expl.terms if abs(t.weight) >= SIGNIFICANT_FRACTION * top]


def _confidence_pct(expl: Explanation) -> int:
    return round(expl.confidence * 100)


def _predicted_phrase(expl: Explanation) -> str:
    return "expert worker" if expl.predicted == 0 else "inexpert worker"


def render_piece_report(expl: Explanation, piece_id: str, worker_id: str) -> str:
    """Two numbered statements: significant features, then the prediction."""
    tpl = load_template("piece_report.template")
    slots = {
        "piece_id": piece_id,
        "worker_id": worker_id,
        "confidence_pct": _confidence_pct(expl),
        "predicted_phrase": _predicted_phrase(expl),
    }
    lines = [tpl["statement_1"].format(**slots)]
    terms = significant_terms(expl)
    if terms:
        for term in terms:
            label = display_label(term.feature, scenario=1)
            lines.append(tpl["feature_line"].format(
                label_title=label[0].upper() + label[1:],
                statement=display_statement(term, scenario=1),
                **slots,
            ))
    else:
        lines.append(tpl["no_significant"].format(**slots))
    lines.append(tpl["statement_2"].format(**slots))
    return "\n".join(lines)


_STATUS_PHRASES = {
    ("n_inc", OVER): "low", ("n_inc", UNDER): "high",
    ("n_val", OVER): "high", ("n_val", UNDER): "low",
    ("n_task", OVER): "high", ("n_task", UNDER): "low",
    ("t_total", OVER): "short", ("t_total", UNDER): "long",
}


def _kpi_phrase(verdict: KpiVerdict, kpi: str) -> str:
    status = verdict.statuses.get(kpi, NEUTRAL)
    return _STATUS_PHRASES.get((kpi, status), "within the usual range")


def render_session_report(expl: Explanation, verdict_intra: KpiVerdict,
                          verdict_inter: KpiVerdict, session_id: str,
                          worker_id: str) -> str:
    """Five numbered statements: significant features with their
    performance direction, the prediction, the intra- and inter-worker
    KPI sentences, and a summary naming the skill level and the weakest
    feature."""
    tpl = load_template("session_report.template")
    terms = significant_terms(expl)
    # a positive local contribution pushes this instance toward inexpert
    under = [t for t in terms if t.contribution > 0]
    over = [t for t in terms if t.contribution <= 0]

    slots = {
        "session_id": session_id,
        "worker_id": worker_id,
        "confidence_pct": _confidence_pct(expl),
        "predicted_phrase": _predicted_phrase(expl),
        "n_inc_phrase": _kpi_phrase(verdict_intra, "n_inc"),
        "n_val_phrase": _kpi_phrase(verdict_intra, "n_val"),
        "n_task_phrase": _kpi_phrase(verdict_inter, "n_task"),
        "t_total_phrase": _kpi_phrase(verdict_inter, "t_total"),
    }

    lines = [tpl["statement_1"].format(**slots)]
    if terms:
        for term in terms:
            key = "under_line" if term.contribution > 0 else "over_line"
            lines.append(tpl[key].format(
                statement=display_statement(term, scenario=2), **slots))
    else:
        lines.append(tpl["no_significant"].format(**slots))

    if terms:
        names = [display_label(t.feature, scenario=2) for t in terms[:2]]
        drivers = "the values of " + " and ".join(names)
    else:
        drivers = "the recorded feature values"
    lines.append(tpl["statement_2"].format(drivers=drivers, **slots))
    lines.append(tpl["statement_3"].format(**slots))
    lines.append(tpl["statement_4"].format(**slots))

    skill = "expert skills" if expl.predicted == 0 else "inexpert skills"
    weakness = ""
    if under:
        worst = max(under, key=lambda t: t.contribution)
        weakness = f", but the {display_label(worst.feature, scenario=2)} needs improvement"
    lines.append(tpl["statement_5"].format(
        skill_phrase=skill, weakness_clause=weakness, **slots))
    return "\n".join(lines)
