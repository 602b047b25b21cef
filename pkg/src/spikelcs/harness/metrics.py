"""Metrics rows, CSV output and per-trial trace logs.

One schema for every agent and mode: columns that do not apply (neural
statistics under the tabular baseline, probe columns without a probe
environment) are emitted as empty markers.  Population averages come in
two weightings per quantity: ``*_num`` counts a macroclassifier once per
unit of numerosity, ``*_macro`` counts it once.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from ..networks.operators import connectivity_stats
from ..xcsf.population import Population

COLUMNS = [
    "trial",
    "probe_moves", "probe_formations",
    "probe_moves_avg", "probe_formations_avg",
    "exploit_moves_avg", "exploit_formations_avg",
    "mu_num", "psi_num", "omega_num", "tau_num",
    "mu_macro", "psi_macro", "omega_macro", "tau_macro",
    "connected_hidden_num", "connected_hidden_macro",
    "connectivity_pct_num", "connectivity_pct_macro",
    "macroclassifiers", "microclassifiers",
    "first_stable_trial",
]


def format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        if np.isnan(value):
            return ""
        return repr(value)
    return str(value)


class MetricsWriter:
    """Appends one CSV row at a time, flushing each write so a crashed
    run keeps everything logged so far."""

    def __init__(self, path: str):
        self.path = path
        self._fh = open(path, "w", encoding="utf-8")
        self._fh.write(",".join(COLUMNS) + "\n")
        self._fh.flush()

    def write_row(self, row: dict) -> None:
        self._fh.write(",".join(format_cell(row.get(col)) for col in COLUMNS) + "\n")
        self._fh.flush()

    def close(self) -> None:
        self._fh.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def population_metrics(pop: Population) -> dict:
    """Numerosity-weighted and plain-macro averages over the population."""
    out = {}
    for field, col in (("mu", "mu"), ("psi", "psi"), ("omega", "omega"),
                       ("tau", "tau")):
        w, m = pop.field_means(field)
        out[f"{col}_num"] = w
        out[f"{col}_macro"] = m
    if pop.members:
        connected = np.empty(len(pop.members))
        frac = np.empty(len(pop.members))
        num = np.empty(len(pop.members))
        for i, cl in enumerate(pop.members):
            c, f = connectivity_stats(cl.genome)
            connected[i] = c
            frac[i] = f
            num[i] = cl.numerosity
        wsum = num.sum()
        out["connected_hidden_num"] = float((connected * num).sum() / wsum)
        out["connected_hidden_macro"] = float(connected.mean())
        out["connectivity_pct_num"] = float((frac * num).sum() / wsum * 100.0)
        out["connectivity_pct_macro"] = float(frac.mean() * 100.0)
    else:
        for col in ("connected_hidden_num", "connected_hidden_macro",
                    "connectivity_pct_num", "connectivity_pct_macro"):
            out[col] = float("nan")
    out["macroclassifiers"] = pop.macro_count
    out["microclassifiers"] = pop.micro_count
    return out


class TraceWriter:
    """Optional per-trial decision log (tab-separated)."""

    def __init__(self, path: str):
        self._fh = open(path, "w", encoding="utf-8")
        self._fh.write("trial\tmove\tformations\tevent\tstate\taction\tset_size\n")
        self.trial = 0

    def set_trial(self, trial: int) -> None:
        self.trial = trial

    def move(self, state, action, set_size, move, formations) -> None:
        state_txt = ";".join(repr(float(v)) for v in state)
        self._fh.write(f"{self.trial}\t{move}\t{formations}\tmove\t"
                       f"{state_txt}\t{action}\t{set_size}\n")

    def decision(self, kind: str, move: int, formations: int) -> None:
        self._fh.write(f"{self.trial}\t{move}\t{formations}\t{kind}\t\t\t\n")

    def close(self) -> None:
        self._fh.close()
