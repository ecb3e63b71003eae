"""Render a study's table to a PNG next to its CSV."""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

import numpy as np  # noqa: E402

_RC = {
    "font.size": 9,
    "axes.labelsize": 9,
    "legend.fontsize": 7,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.spines.top": False,
    "axes.spines.right": False,
}


def _num(values):
    return np.array([np.nan if v is None else float(v) for v in values])


def _error_curve(table, ax):
    ax.plot(_num(table.column("T")), _num(table.column("normalized_error")), "o-", ms=3)
    ax.set_xlabel("course duration T (weeks)")
    ax.set_ylabel("normalized error")


def _sweep(table, fig):
    alphas = sorted(set(table.column("alpha")))
    axes = fig.subplots(1, len(alphas), sharey=True, squeeze=False)[0]
    rows = list(zip(table.column("alpha"), table.column("m"), table.column("mu"), table.column("lambda_star")))
    for ax, alpha in zip(axes, alphas):
        for m in sorted({r[1] for r in rows if r[0] == alpha}):
            pts = [(r[2], r[3]) for r in rows if r[0] == alpha and r[1] == m]
            ax.plot([p[0] for p in pts], [p[1] for p in pts], "o-", ms=3, label=f"m={m}")
        ax.set_title(f"alpha={alpha:g}")
        ax.set_xlabel("instructor rate mu")
    axes[0].set_ylabel("best-response rate lambda*")
    axes[-1].legend()


def _bias_study(table, fig):
    axes = fig.subplots(1, 3, sharex=True, squeeze=False)[0]
    cases = sorted(set(table.column("bias_case")))
    cid = _num(table.column("config_id"))
    case = np.array(table.column("bias_case"))
    c1 = np.array(table.column("c1"), dtype=float)
    for ax, col, label in zip(axes, ("lambda1_star", "lambda2_star", "mu_star"),
                              ("type 1 rate", "type 2 rate", "instructor rate")):
        vals = _num(table.column(col))
        for k in cases:
            sel = case == k
            ax.scatter(cid[sel], vals[sel], s=6, label=f"c1={c1[sel][0]:g}")
        ax.set_xlabel("configuration")
        ax.set_ylabel(label)
    axes[-1].legend()


def _simulate(table, ax):
    agents = table.column("agent")
    est = _num(table.column("estimate"))
    se = _num(table.column("std_error"))
    ana = _num(table.column("analytic"))
    x = np.arange(len(agents))
    ax.errorbar(x - 0.1, est, yerr=3 * se, fmt="o", ms=3, label="simulation (3 s.e.)")
    ax.plot(x + 0.1, ana, "s", ms=3, label="closed form")
    ax.set_xticks(x, agents)
    ax.set_ylabel("accumulated net reward")
    ax.legend()


def _solution(table, ax):
    kinds = table.column("kind")
    sel = [i for i, k in enumerate(kinds) if k == "phi"]
    rates = [table.column("rate")[i] for i in sel]
    probs = [table.column("value")[i] for i in sel]
    ax.bar([str(r) for r in rates], probs)
    ax.set_xlabel("instructor rate")
    ax.set_ylabel("leader probability")


def render(command, table, path):
    """Draw the figure for ``command`` from its result table and save it to ``path``."""
    with plt.rc_context(_RC):
        wide = command in ("sweep", "bias-study")
        fig = plt.figure(figsize=(10, 3.2) if wide else (5, 3.2))
        if command == "sweep":
            _sweep(table, fig)
        elif command == "bias-study":
            _bias_study(table, fig)
        else:
            ax = fig.add_subplot(111)
            {"error-curve": _error_curve, "simulate": _simulate, "solve": _solution}[command](table, ax)
        fig.tight_layout()
        fig.savefig(path, dpi=120, metadata={"Software": None})
        plt.close(fig)
    return path
