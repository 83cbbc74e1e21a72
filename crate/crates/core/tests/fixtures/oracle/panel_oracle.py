"""Generate the bundled 28-quarter panel and the independent oracle values.

Run from this directory:  python3 panel_oracle.py
Writes ../panel.csv and ../pipeline_oracle.json.
"""
import json

import numpy as np
from scipy import stats
import statsmodels.api as sm
from statsmodels.stats.diagnostic import het_white
from statsmodels.stats.stattools import durbin_watson, jarque_bera

ALPHA = 0.05
SURFACE_5PCT = {
    "None": (-1.9393, -0.398, 0.0),
    "ConstantOnly": (-2.8621, -2.738, -8.36),
    "ConstantAndTrend": (-3.4126, -4.039, -17.83),
}


def fmt(x):
    s = repr(float(x))
    if "e" in s:
        raise ValueError(f"exponent in {s}")
    return s[:-2] if s.endswith(".0") else s


def periods(n):
    return [f"{2005 + i // 4}Q{i % 4 + 1}" for i in range(n)]


def write_csv(path, cols):
    names = list(cols)
    n = len(cols[names[0]])
    with open(path, "w", newline="\n") as f:
        f.write("period," + ",".join(names) + "\n")
        for i, p in enumerate(periods(n)):
            f.write(p + "," + ",".join(fmt(cols[c][i]) for c in names) + "\n")


def make_panel(seed):
    rng = np.random.default_rng(seed)
    n = 28
    r = lambda x, d=6: np.round(x, d)
    cols = {}
    logpib = r(4.0 + 0.08 * rng.standard_normal(n))
    debi = r(0.05 + 0.01 * rng.standard_normal(n))
    usd = r(8.5 + 0.4 * rng.standard_normal(n))
    eur = r(11.0 + 0.3 * rng.standard_normal(n))
    chom = r(0.09 + 0.005 * rng.standard_normal(n))
    infla = r(0.02 + 0.008 * rng.standard_normal(n))
    eparg = r(100.0 + np.cumsum(rng.standard_normal(n)), 4)
    noise = 0.004 * rng.standard_normal(n)
    tx_def = r(0.597018 - 0.140413 * logpib + 1.399099 * debi + 0.010964 * usd + noise)
    cols["TX_DEF"] = tx_def
    cols["LOGPIB_VOL"] = logpib
    cols["TX_CHOM"] = chom
    cols["TX_DEBI"] = debi
    cols["EPARG_VOL"] = eparg
    cols["MAD_EUR"] = eur
    cols["MAD_USD"] = usd
    cols["TX_INFLA"] = infla
    # pass the values through their text form so the oracle sees what the file holds
    return {k: np.array([float(fmt(v)) for v in c]) for k, c in cols.items()}


def adf(x, model):
    dx = np.diff(x)
    lagged = x[:-1]
    m = len(dx)
    cols = [lagged]
    names = ["RHO"]
    if model != "None":
        cols.append(np.ones(m))
        names.append("C")
    if model == "ConstantAndTrend":
        cols.append(np.arange(m, dtype=float))
        names.append("TREND")
    X = np.column_stack(cols)
    beta, *_ = np.linalg.lstsq(X, dx, rcond=None)
    resid = dx - X @ beta
    dof = m - X.shape[1]
    s2 = resid @ resid / dof
    se = np.sqrt(np.diag(s2 * np.linalg.inv(X.T @ X)))
    t = beta / se
    p = 2 * stats.t.sf(np.abs(t), dof)
    b0, b1, b2 = SURFACE_5PCT[model]
    cv = b0 + b1 / m + b2 / m**2
    return {
        "model": model,
        "adf_stat": t[0],
        "cv5": cv,
        "p": dict(zip(names, p)),
        "effective_n": m,
    }


def sequential(x, max_diff=2):
    stages = []
    for d in range(max_diff + 1):
        cur = np.diff(x, d) if d else x
        att = [adf(cur, "ConstantAndTrend")]
        if att[0]["p"]["TREND"] > ALPHA:
            att.append(adf(cur, "ConstantOnly"))
            if att[1]["p"]["C"] > ALPHA:
                att.append(adf(cur, "None"))
        stages.append(att)
        if att[-1]["adf_stat"] < att[-1]["cv5"]:
            return d, stages
    return None, stages


def backward(y, X):
    ladder = []
    while True:
        res = sm.OLS(y, X).fit()
        ladder.append(res)
        p = res.pvalues.drop("C")
        if p.empty or p.max() <= ALPHA:
            return ladder
        worst = p.max()
        tied = [c for c in p.index if p[c] == worst]
        drop = min(tied, key=lambda c: (abs(res.tvalues[c]), c))
        X = X.drop(columns=[drop])


def pipeline(cols, dep, regs):
    import pandas as pd

    orders, stationary = {}, {}
    for name in [dep] + regs:
        d, stages = sequential(cols[name])
        assert d is not None, name
        orders[name] = d
        col = name if d == 0 else f"{name}_DIFF{d}"
        stationary[name] = (col, np.diff(cols[name], d) if d else cols[name])
    maxd = max(orders.values())
    n = len(cols[dep]) - maxd
    frame = {col: v[len(v) - n:] for col, v in stationary.values()}
    y = frame[stationary[dep][0]]
    X = pd.DataFrame({"C": np.ones(n)})
    for r in regs:
        X[stationary[r][0]] = frame[stationary[r][0]]
    ladder = backward(y, X)
    final = ladder[-1]
    Xf = X[final.params.index]
    _, wp, wf, wfp = het_white(final.resid, Xf)
    lm, _, _, _ = het_white(final.resid, Xf)
    jb, jbp, skew, kurt = jarque_bera(final.resid)
    removed = [
        list(set(a.params.index) - set(b.params.index))[0]
        for a, b in zip(ladder, ladder[1:])
    ]
    return {
        "orders": orders,
        "nobs": int(n),
        "removed": removed,
        "final": {k: float(v) for k, v in final.params.items()},
        "final_t": {k: float(v) for k, v in final.tvalues.items()},
        "final_se": {k: float(v) for k, v in final.bse.items()},
        "r_squared": float(final.rsquared),
        "durbin_watson": float(durbin_watson(final.resid)),
        "white_obs_r2": float(lm),
        "white_p": float(wp),
        "white_f": float(wf),
        "white_f_p": float(wfp),
        "jb_stat": float(jb),
        "jb_p": float(jbp),
        "skewness": float(skew),
        "kurtosis": float(kurt),
    }


REGS = ["LOGPIB_VOL", "TX_CHOM", "TX_DEBI", "EPARG_VOL", "MAD_EUR", "MAD_USD", "TX_INFLA"]

if __name__ == "__main__":
    import sys

    seed = int(sys.argv[1]) if len(sys.argv) > 1 else 7
    cols = make_panel(seed)
    out = pipeline(cols, "TX_DEF", REGS)
    print(json.dumps(out, indent=2, sort_keys=True))
    write_csv("../panel.csv", cols)
    with open("../pipeline_oracle.json", "w") as f:
        json.dump(out, f, indent=2, sort_keys=True)
        f.write("\n")
