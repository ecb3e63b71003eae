"""Batch studies behind the CLI. Each returns a :class:`Table` of result rows."""

import csv
import io
import itertools
import json
from dataclasses import dataclass

import numpy as np

from .montecarlo import STATE_INTEGRAL, SimConfig, simulate_forum
from .rewards import (
    ChainSpec,
    StudentTypeParams,
    normalized_error,
    steady_reward_student,
    transient_reward_instructor,
    transient_reward_student,
)
from .stackelberg import StrategyGrid, build_payoff_matrices, follower_best_response, solve

NA = "NA"


@dataclass(frozen=True)
class Table:
    header: tuple
    rows: tuple

    def column(self, name):
        k = self.header.index(name)
        return [row[k] for row in self.rows]

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.header)
        for row in self.rows:
            writer.writerow([format_cell(v) for v in row])
        return buf.getvalue()


def format_cell(v):
    if v is None:
        return NA
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if v == 0.0:
            return "0"
        return format(v, ".12g")
    return str(v)


def error_curve(cfg):
    """Normalized steady-vs-transient gap in one student's utility as the horizon grows."""
    ec = cfg.block("error_curve")
    ins = cfg.instructor
    st = StudentTypeParams(ec["alpha"], ec["m"])
    header = ("alpha", "m", "lambda", "mu", "M", "beta", "delta",
              "T", "U_steady", "U_transient_avg", "normalized_error")
    rows = []
    for T in ec["T_values"]:
        spec = ChainSpec(ec["lambda"], ec["mu"], cfg.M, float(T))
        u_st = steady_reward_student(spec, st, ins)
        u_tr = transient_reward_student(spec, st, ins)
        rows.append((ec["alpha"], ec["m"], ec["lambda"], ec["mu"], cfg.M, ins.beta, ins.delta,
                     T, u_st, u_tr / float(T), normalized_error(u_st, u_tr, float(T))))
    return Table(header, tuple(rows))


def sweep(cfg):
    """Best-response student rate for every (alpha, m, mu) against a pure instructor rate."""
    sw = cfg.block("sweep")
    ins = cfg.instructor
    grid = cfg.grid
    mode = cfg.mode
    header = ("mode", "M", "T", "beta", "delta", "alpha", "m", "mu",
              "lambda_star", "student_value", "instructor_value")
    rows = []
    for alpha, m in itertools.product(sw["alphas"], sw["m_values"]):
        st = StudentTypeParams(alpha, m, 1, 1.0)
        pm = build_payoff_matrices(grid, [st], ins, cfg.M, cfg.T, mode)
        D, B = pm.D[0], pm.Bm[0]
        for a, mu in enumerate(grid.instructor_rates):
            phi = np.zeros(grid.v)
            phi[a] = 1.0
            ties, value = follower_best_response(D, phi)
            # single type carries the full bias, so Bm is the unweighted instructor reward
            b = max(ties, key=lambda k: (B[a, k], -k))
            rows.append((mode, cfg.M, cfg.T, ins.beta, ins.delta, alpha, m, mu,
                         grid.student_rates[b], value, B[a, b]))
    return Table(header, tuple(rows))


def bias_study(cfg):
    """Equilibrium rates of two types over the alpha/m grid for each instructor bias split.

    Configurations are numbered lexicographically over (alpha1, alpha2, m1, m2)
    in the listed value order, starting at 1.
    """
    bs = cfg.block("bias_study")
    ins = cfg.instructor
    grid = StrategyGrid(cfg.grid.instructor_rates, tuple(bs["student_rates"]))
    counts = [t.count for t in cfg.types[:2]]
    if len(counts) < 2:
        counts = [1, 1]
    method, mode = cfg.method, cfg.mode
    header = ("config_id", "alpha1", "alpha2", "m1", "m2", "bias_case", "c1", "c2", "n1", "n2",
              "M", "T", "beta", "delta", "mode", "method",
              "lambda1_star", "lambda2_star", "mu_star", "leader_value")
    rows = []
    combos = list(itertools.product(bs["alpha1"], bs["alpha2"], bs["m_values"], bs["m_values"]))
    for case_id, (c1, c2) in enumerate(bs["bias_cases"], start=1):
        for cid, (a1, a2, m1, m2) in enumerate(combos, start=1):
            types = [StudentTypeParams(a1, m1, counts[0], c1), StudentTypeParams(a2, m2, counts[1], c2)]
            pm = build_payoff_matrices(grid, types, ins, cfg.M, cfg.T, mode)
            sol = solve(pm, method)
            l1, l2 = sol.student_rates(grid)
            rows.append((cid, a1, a2, m1, m2, case_id, c1, c2, counts[0], counts[1],
                         cfg.M, cfg.T, ins.beta, ins.delta, mode, method,
                         l1, l2, sol.instructor_rate(grid), sol.leader_value))
    rows.sort(key=lambda r: (r[0], r[5]))
    return Table(header, tuple(rows))


def solve_game(cfg):
    """Solve the configured game; returns a JSON-serializable dict."""
    grid = cfg.grid
    pm = build_payoff_matrices(grid, list(cfg.types), cfg.instructor, cfg.M, cfg.T, cfg.mode)
    sol = solve(pm, cfg.method)
    return {"config": cfg.to_dict(), "mode": cfg.mode, "solution": sol.to_dict(grid)}


def solution_json(result):
    return json.dumps(result, indent=2, sort_keys=True) + "\n"


def solution_table(result):
    sol = result["solution"]
    cfg = result["config"]
    M, T = cfg["chain"]["M"], cfg["chain"]["T"]
    beta, delta = cfg["instructor"]["beta"], cfg["instructor"]["delta"]
    common = (result["mode"], sol["method"], M, T, beta, delta)
    header = ("mode", "method", "M", "T", "beta", "delta", "alpha", "m", "count", "bias_total",
              "kind", "index", "rate", "value")
    rows = [common + (None,) * 4 + ("phi", a, r, p)
            for a, (r, p) in enumerate(zip(sol["instructor_rates"], sol["phi"]))]
    types = cfg["types"]
    even = 1.0 / len(types)
    for l, (b, r, u) in enumerate(zip(sol["psi"], sol["student_rates"], sol["follower_values"])):
        t = types[l]
        rows.append(common + (t["alpha"], t["m"], t.get("count", 1), t.get("bias_total", even),
                              f"psi_type{l + 1}", b, r, u))
    rows.append(common + (None,) * 4 + ("leader", None, None, sol["leader_value"]))
    return Table(header, tuple(rows))


def simulate(cfg, seed=None):
    """Monte Carlo estimates next to the closed-form accumulated rewards."""
    sim = cfg.block("simulate")
    types = cfg.types
    ins = cfg.instructor
    seed = cfg.seed if seed is None else seed
    sc = SimConfig(M=cfg.M, lambdas=tuple(sim["lambdas"]), mu=sim["mu"], types=types, instructor=ins,
                   T=cfg.T, replications=sim["replications"], seed=seed, reward_mode=sim["reward_mode"])
    res = simulate_forum(sc)
    comparable = sim["reward_mode"] == STATE_INTEGRAL
    header = ("agent", "alpha", "m", "lambda", "mu", "bias_per_student", "M", "T", "beta", "delta",
              "replications", "seed", "reward_mode", "estimate", "std_error", "analytic", "sigmas")
    rows = []
    instr_analytic = 0.0
    for l, (st, lam, est) in enumerate(zip(types, sc.lambdas, res.students)):
        spec = ChainSpec(lam, sc.mu, cfg.M, cfg.T)
        analytic = transient_reward_student(spec, st, ins)
        instr_analytic += st.bias_per_student * transient_reward_instructor(spec, ins)
        rows.append((f"type{l + 1}", st.alpha, st.m, lam, sc.mu, st.bias_per_student, cfg.M, cfg.T,
                     ins.beta, ins.delta, sc.replications, seed, sc.reward_mode, est.mean, est.std_error,
                     analytic if comparable else None, est.sigmas(analytic) if comparable else None))
    est = res.instructor
    rows.append(("instructor", None, None, None, sc.mu, None, cfg.M, cfg.T, ins.beta, ins.delta,
                 sc.replications, seed, sc.reward_mode, est.mean, est.std_error,
                 instr_analytic if comparable else None, est.sigmas(instr_analytic) if comparable else None))
    return Table(header, tuple(rows))
