"""Replicate-endpoint summaries and two-sample comparisons.

Endpoints are the last-row values of each metrics CSV.  Comparisons use
Welch's unequal-variance t statistic with a two-sided p value; runs
where a metric is absent (never stable, baseline agent) are excluded
from that metric and counted separately.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

from scipy import stats as _scipy_stats

# metric label -> endpoint column
ENDPOINT_METRICS = {
    "stability": "first_stable_trial",
    "mutation": "mu_num",
    "neurons": "connected_hidden_num",
    "connectivity": "connectivity_pct_num",
    "macroclassifiers": "macroclassifiers",
}


def csv_endpoints(text: str) -> dict[str, float | None]:
    rows = list(csv.DictReader(io.StringIO(text)))
    if not rows:
        raise ValueError("metrics CSV has no data rows")
    last = rows[-1]
    out: dict[str, float | None] = {}
    for label, column in ENDPOINT_METRICS.items():
        raw = last.get(column, "")
        out[label] = float(raw) if raw not in ("", None) else None
    return out


def welch_t(a: list[float], b: list[float]) -> tuple[float, float, float]:
    """(t, two-sided p, degrees of freedom); t = 0 and p = 1 when both
    samples are constant with equal means."""
    na, nb = len(a), len(b)
    ma = sum(a) / na
    mb = sum(b) / nb
    va = sum((x - ma) ** 2 for x in a) / (na - 1) if na > 1 else 0.0
    vb = sum((x - mb) ** 2 for x in b) / (nb - 1) if nb > 1 else 0.0
    se2 = va / na + vb / nb
    if se2 == 0.0:
        if ma == mb:
            return 0.0, 1.0, float(na + nb - 2)
        return math.inf, 0.0, float(na + nb - 2)
    t = (ma - mb) / math.sqrt(se2)
    df = se2 ** 2 / ((va / na) ** 2 / max(na - 1, 1) +
                     (vb / nb) ** 2 / max(nb - 1, 1))
    p = 2.0 * float(_scipy_stats.t.sf(abs(t), df))
    return t, p, df


@dataclass
class MetricSummary:
    metric: str
    mean_a: float | None
    std_a: float | None
    count_a: int
    mean_b: float | None = None
    std_b: float | None = None
    count_b: int = 0
    t: float | None = None
    p: float | None = None


def _mean_std(values: list[float]) -> tuple[float | None, float | None]:
    if not values:
        return None, None
    m = sum(values) / len(values)
    if len(values) < 2:
        return m, 0.0
    var = sum((v - m) ** 2 for v in values) / (len(values) - 1)
    return m, math.sqrt(var)


def summarize_groups(group_a: list[str],
                     group_b: list[str] | None = None) -> list[MetricSummary]:
    """Summarise one or two groups of metrics CSV texts."""
    eps_a = [csv_endpoints(t) for t in group_a]
    eps_b = [csv_endpoints(t) for t in group_b] if group_b else None
    out = []
    for metric in ENDPOINT_METRICS:
        va = [e[metric] for e in eps_a if e[metric] is not None]
        ma, sa = _mean_std(va)
        summary = MetricSummary(metric, ma, sa, len(va))
        if eps_b is not None:
            vb = [e[metric] for e in eps_b if e[metric] is not None]
            summary.mean_b, summary.std_b = _mean_std(vb)
            summary.count_b = len(vb)
            if va and vb:
                summary.t, summary.p, _ = welch_t(va, vb)
        out.append(summary)
    return out


def format_summary(summaries: list[MetricSummary]) -> str:
    lines = [f"{'metric':<17}{'mean_a':>12}{'std_a':>12}{'n_a':>5}"
             f"{'mean_b':>12}{'std_b':>12}{'n_b':>5}{'t':>10}{'p':>12}"]
    for s in summaries:
        def fmt(v, width=12, prec=4):
            return f"{v:>{width}.{prec}g}" if v is not None else " " * (width - 1) + "-"
        lines.append(f"{s.metric:<17}{fmt(s.mean_a)}{fmt(s.std_a)}{s.count_a:>5}"
                     f"{fmt(s.mean_b)}{fmt(s.std_b)}{s.count_b:>5}"
                     f"{fmt(s.t, 10)}{fmt(s.p)}")
    return "\n".join(lines)
