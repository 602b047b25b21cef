"""Experiment orchestration.

A run alternates exploration and exploitation trials; after every
exploitation trial on a probe-capable environment an extra exploitation
trial is played from the fixed probe start without any learning, feeding
the stability tracker.  Metrics rows are appended every sample period
and the final population is snapshotted.

Reproducibility: the master seed is split into one child seed per
replicate with ``numpy.random.SeedSequence.spawn``; a single generator
per replicate drives every random draw in sequence, so (config, master
seed) fixes every byte of every output file.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

import numpy as np

from ..envs import GridWorld, MountainCar
from ..networks.lif import LifParams
from ..qlearn import QTable, q_select, q_update
from ..tcs import TcsParams, TrialResult, run_tcs_trial
from ..xcsf.ga import run_ga
from ..xcsf.matching import CoverFailure, build_match_set
from ..xcsf.params import XcsfParams
from ..xcsf.population import Population, save_snapshot
from ..xcsf.prediction import build_prediction_array, select_action
from ..xcsf.updates import update_action_set
from .config import ExperimentConfig
from .metrics import MetricsWriter, TraceWriter, population_metrics
from .stability import StabilityTracker


def build_env(cfg: ExperimentConfig):
    if cfg.environment == "grid":
        return GridWorld(step_size=cfg.step_size, noise_mag=cfg.noise,
                         noise_model=cfg.noise_model,
                         goal_threshold=cfg.goal_threshold,
                         reward=cfg.goal_reward, move_cap=cfg.move_cap)
    env = MountainCar(reward=cfg.goal_reward)
    if cfg.move_cap > 0:
        env.move_cap = cfg.move_cap
    return env


def build_population(cfg: ExperimentConfig) -> Population:
    params = XcsfParams(
        N=cfg.population_cap, beta=cfg.beta, epsilon0=cfg.epsilon0,
        theta_ga=cfg.theta_ga, theta_del=cfg.theta_del, x0=cfg.x0,
        eta=cfg.eta, gamma=cfg.gamma, alpha=cfg.alpha, nu=cfg.nu,
        delta=cfg.delta, cover_attempts=cfg.cover_attempts,
        fitness_init=cfg.fitness_init,
        ga_fitness_discount=cfg.ga_fitness_discount,
        weight_law=cfg.weight_law, gaussian_sigma=cfg.gaussian_sigma)
    lif = LifParams(a=cfg.lif_a, b=cfg.lif_b, c=cfg.lif_c,
                    c_ini=cfg.lif_c_ini, mthresh=cfg.lif_threshold,
                    window=cfg.lif_window)
    env = build_env(cfg)
    return Population(cfg.representation, env.input_count, env.n_actions,
                      env.codebook, params, lif,
                      initial_hidden=cfg.initial_hidden,
                      initial_conn_prob=cfg.initial_connection_enabled,
                      sa_init_max=(cfg.mu_init_max, cfg.psi_init_max,
                                   cfg.omega_init_max, cfg.tau_init_max))


def optimal_probe_value(cfg: ExperimentConfig, env) -> int | None:
    """Environment-oracle reference for the stability tracker."""
    if not env.has_probe:
        return None
    moves = env.min_moves(env.probe_reset())
    if cfg.agent == "lcs" and cfg.mode == "tcs":
        return int(math.ceil(moves / cfg.resolved_timeout()))
    return moves


# ---------------------------------------------------------------------------
# single trials
# ---------------------------------------------------------------------------

def run_mdp_trial(env, pop: Population, mode: str, rng: np.random.Generator,
                  trial_counter: int, learn: bool = True, probe: bool = False,
                  trace=None) -> TrialResult:
    """Standard multi-step trial: a match set forms at every move and the
    previous action set is reinforced with the discounted running payoff.
    Network states re-bootstrap for every activation batch."""
    pos = env.probe_reset() if probe else env.reset(rng)
    prev_slots = None
    prev_state = None
    prev_reward = 0.0
    moves = 0
    while moves < env.move_cap:
        obs = env.perceive(pos, rng)
        mset = build_match_set(pop, obs, rng, trial_counter, persist_state=False)
        pa = build_prediction_array(pop, mset)
        if learn and prev_slots is not None:
            target = prev_reward + pop.params.gamma * float(np.nanmax(pa))
            update_action_set(pop, prev_slots, target, prev_state)
            run_ga(pop, prev_slots, prev_state, trial_counter, rng)
        action = select_action(pa, mode, rng)
        sub = mset.action_subset(action)
        pos, reward, done = env.step(pos, action)
        moves += 1
        if trace is not None:
            trace.move(obs, action, len(sub.slots), moves, moves)
        if done:
            if learn:
                update_action_set(pop, sub.slots, reward, obs)
                run_ga(pop, sub.slots, obs, trial_counter, rng)
            return TrialResult(moves, moves, True)
        prev_slots, prev_state, prev_reward = sub.slots, obs, reward
    return TrialResult(moves, moves, False)


def run_q_trial(env, table: QTable, mode: str, rng: np.random.Generator,
                learn: bool = True, probe: bool = False) -> TrialResult:
    """Tabular baseline trial on the discretised (noisy) state."""
    pos = env.probe_reset() if probe else env.reset(rng)
    cell = table.cell(env.perceive(pos, rng))
    moves = 0
    while moves < env.move_cap:
        action = q_select(table, cell, mode, rng)
        pos, reward, done = env.step(pos, action)
        moves += 1
        if done:
            if learn:
                q_update(table, cell, action, reward, None)
            return TrialResult(moves, moves, True)
        next_cell = table.cell(env.perceive(pos, rng))
        if learn:
            q_update(table, cell, action, reward, next_cell)
        cell = next_cell
    return TrialResult(moves, moves, False)


# ---------------------------------------------------------------------------
# full runs
# ---------------------------------------------------------------------------

@dataclass
class TrialRecord:
    trial: int
    mode: str
    moves: int
    formations: int
    reached_goal: bool


@dataclass
class RunResult:
    csv_path: str
    snapshot_path: str | None
    history: list[TrialRecord] = field(default_factory=list)
    probes: list[TrialRecord] = field(default_factory=list)
    tracker: StabilityTracker | None = None
    population: Population | None = None
    qtable: QTable | None = None


class RunFailure(RuntimeError):
    """A trial failed (covering exhaustion); carries the trial index."""


def run_single(cfg: ExperimentConfig, seed: np.random.SeedSequence,
               csv_path: str, snapshot_path: str | None = None,
               trace_path: str | None = None,
               progress=None) -> RunResult:
    rng = np.random.Generator(np.random.PCG64(seed))
    env = build_env(cfg)
    tcs_params = TcsParams(cfg.tcs_phi, cfg.tcs_rho, cfg.resolved_timeout())
    pop = build_population(cfg) if cfg.agent == "lcs" else None
    table = None
    if cfg.agent == "qlearn":
        table = QTable(step_size=cfg.step_size, n_actions=env.n_actions,
                       gamma=cfg.q_gamma, learn_rate=cfg.q_learn_rate)
    tracker = StabilityTracker(optimal=optimal_probe_value(cfg, env))
    trace = TraceWriter(trace_path) if trace_path else None

    result = RunResult(csv_path, snapshot_path, tracker=tracker,
                       population=pop, qtable=table)
    total = cfg.total_trials
    explore_left = cfg.explore_trials
    exploit_left = cfg.exploit_trials
    window_probes: list[TrialRecord] = []
    window_exploit: list[TrialRecord] = []
    last_probe: TrialRecord | None = None
    report_every = max(1, total // 100)

    def one_trial(mode: str, trial: int, learn: bool, probe: bool) -> TrialResult:
        if trace is not None:
            trace.set_trial(trial)
        if cfg.agent == "qlearn":
            return run_q_trial(env, table, mode, rng, learn=learn, probe=probe)
        if cfg.mode == "tcs":
            return run_tcs_trial(env, pop, mode, rng, trial, tcs_params,
                                 learn=learn, probe=probe, trace=trace)
        return run_mdp_trial(env, pop, mode, rng, trial, learn=learn,
                             probe=probe, trace=trace)

    with MetricsWriter(csv_path) as writer:
        for trial in range(1, total + 1):
            prefer_explore = trial % 2 == 1
            if (prefer_explore and explore_left > 0) or exploit_left == 0:
                mode = "explore"
                explore_left -= 1
            else:
                mode = "exploit"
                exploit_left -= 1
            try:
                res = one_trial(mode, trial, learn=True, probe=False)
            except CoverFailure as exc:
                raise RunFailure(f"trial {trial}: {exc}") from exc
            rec = TrialRecord(trial, mode, res.moves, res.formations,
                              res.reached_goal)
            result.history.append(rec)
            if mode == "exploit":
                window_exploit.append(rec)
                if env.has_probe:
                    pres = one_trial("exploit", trial, learn=False, probe=True)
                    last_probe = TrialRecord(trial, "probe", pres.moves,
                                             pres.formations, pres.reached_goal)
                    result.probes.append(last_probe)
                    window_probes.append(last_probe)
                    value = pres.formations if (cfg.agent == "lcs" and
                                                cfg.mode == "tcs") else pres.moves
                    tracker.update(value, trial)
            if trial % cfg.sample_period == 0:
                writer.write_row(_metrics_row(cfg, pop, trial, last_probe,
                                              window_probes, window_exploit,
                                              tracker))
                window_probes = []
                window_exploit = []
            if progress is not None and trial % report_every == 0:
                progress(trial, total)

    if snapshot_path is not None:
        if pop is not None:
            with open(snapshot_path, "w", encoding="utf-8") as fh:
                fh.write(save_snapshot(pop, total))
        elif table is not None and cfg.dump_qtable:
            _dump_qtable(table, snapshot_path)
        else:
            result.snapshot_path = None
    if trace is not None:
        trace.close()
    return result


def _metrics_row(cfg, pop, trial, last_probe, window_probes, window_exploit,
                 tracker) -> dict:
    row: dict = {"trial": trial}
    if last_probe is not None:
        row["probe_moves"] = last_probe.moves
        row["probe_formations"] = last_probe.formations
    if window_probes:
        row["probe_moves_avg"] = float(np.mean([p.moves for p in window_probes]))
        row["probe_formations_avg"] = float(np.mean([p.formations
                                                     for p in window_probes]))
    if window_exploit:
        row["exploit_moves_avg"] = float(np.mean([t.moves for t in window_exploit]))
        row["exploit_formations_avg"] = float(np.mean([t.formations
                                                       for t in window_exploit]))
    if pop is not None:
        row.update(population_metrics(pop))
    row["first_stable_trial"] = tracker.first_stable_trial
    return row


def _dump_qtable(table: QTable, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("x,y,action,value\n")
        nx, ny, na = table.values.shape
        for ix in range(nx):
            for iy in range(ny):
                for a in range(na):
                    fh.write(f"{ix},{iy},{a},{table.values[ix, iy, a]!r}\n")


def replicate_seeds(master_seed: int, count: int) -> list[np.random.SeedSequence]:
    return np.random.SeedSequence(master_seed).spawn(count)


def run_replicates(cfg: ExperimentConfig, out_dir: str,
                   progress=None) -> list[RunResult]:
    """Run every replicate, writing ``metrics_rNN.csv`` (plus snapshot and
    optional trace files) into ``out_dir``."""
    os.makedirs(out_dir, exist_ok=True)
    results = []
    for rep, seed in enumerate(replicate_seeds(cfg.master_seed, cfg.replicates)):
        csv_path = os.path.join(out_dir, f"metrics_r{rep:02d}.csv")
        snap_path = os.path.join(out_dir, f"snapshot_r{rep:02d}.txt")
        trace_path = os.path.join(out_dir, f"trace_r{rep:02d}.tsv") \
            if cfg.trace else None

        def rep_progress(done, total, _rep=rep):
            if progress is not None:
                progress(_rep, done, total)

        results.append(run_single(cfg, seed, csv_path, snap_path, trace_path,
                                  progress=rep_progress))
    return results
