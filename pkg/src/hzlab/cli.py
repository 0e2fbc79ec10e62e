"""``hzlab <kind> --config FILE [--threads N] [--seed S] [--out DIR]``.

Writes ``<kind>.csv`` plus two-column plot-data files ``<kind>_<series>.dat``
into the output directory and prints a one-line summary. Exit status is 0 on
success, 2 on a configuration error and 1 on any other failure.
"""
import argparse
import csv
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import afe, moments
from .cache import EvalCache
from .config import KINDS, build_config, read_pairs
from .dirichlet import make_spec
from .errors import CacheCorrupt, ConfigError, HzlabError
from .hurwitz import EulerMaclaurinParams, HurwitzPoint, default_target, hurwitz_eval

MOMENT_HEADER = ("kind", "V_or_T", "y_or_params", "power", "step", "value",
                 "quad_error_est", "evals", "elapsed_seconds")
AFE_HEADER = ("t", "M", "N", "residual", "envelope", "ratio")
FIT_HEADER = ("logC", "p", "q", "rms_residual", "n_points")
EVAL_HEADER = ("sigma", "t", "y", "re", "im", "abs")
KERNEL_HEADER = ("t", "cutoff", "nodes", "l1", "l1_over_log_t")
T2_HEADER = ("t", "K", "theta", "alpha", "V", "T", "ratio")


def fmt(x):
    if isinstance(x, float):
        return repr(x)
    return str(x)


def write_csv(path, header, rows, append=False):
    path = Path(path)
    if append and path.exists():
        with path.open(newline="") as fh:
            existing = next(csv.reader(fh), None)
        if existing != list(header):
            raise HzlabError(f"{path} has a different header; refusing to append")
        mode = "a"
    else:
        mode = "w"
    with path.open(mode, newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        if mode == "w":
            w.writerow(header)
        for row in rows:
            w.writerow([fmt(x) for x in row])


def write_plot(path, xs, ys):
    with Path(path).open("w") as fh:
        for x, y in zip(xs, ys):
            fh.write(f"{float(x)!r} {float(y)!r}\n")


class Run:
    """Execution context for one experiment."""

    def __init__(self, config, out_dir, log=print):
        self.config = config
        self.p = config.parameters
        self.out = Path(out_dir)
        self.out.mkdir(parents=True, exist_ok=True)
        self.log = log
        self.cache = None
        if config.cache_dir:
            try:
                self.cache = EvalCache(config.cache_dir)
            except CacheCorrupt as exc:
                print(f"warning: {exc}; continuing without cache", file=sys.stderr)

    def elapsed(self, seconds):
        return seconds if self.config.record_timing else "NA"

    def critical_zeta(self, t, y, tag):
        if self.cache is not None:
            return self.cache.lookup_or_eval(y, t, tag)
        return hurwitz_eval(HurwitzPoint(0.5, t, y),
                            EulerMaclaurinParams.for_height(t, 10.0 ** -tag))

    def csv_path(self, name=None):
        return self.out / f"{name or self.config.kind}.csv"

    def plot_path(self, series):
        return self.out / f"{self.config.kind}_{series}.dat"


def run_eval(r):
    s, y = r.p["s"], r.p["y"]
    target = r.p["target"] or default_target(s.imag)
    tag = max(1, round(-math.log10(target)))
    if s.real == 0.5 and r.cache is not None:
        value = r.critical_zeta(s.imag, y, tag)
    else:
        value = hurwitz_eval(HurwitzPoint(s.real, s.imag, y),
                             EulerMaclaurinParams.for_height(s.imag, target))
    write_csv(r.csv_path(), EVAL_HEADER,
              [(s.real, s.imag, y, value.real, value.imag, abs(value))])
    return f"value={value.real!r}{value.imag:+.17g}j", target


def run_afe_scan(r):
    p = r.p
    zeta = (lambda t, y: r.critical_zeta(t, y, 9)) if r.cache is not None else None
    rows = afe.residual_envelope_scan(p["t_min"], p["t_max"], p["steps"], p["y"],
                                      p["M_policy"], p["M"], zeta=zeta)
    write_csv(r.csv_path(), AFE_HEADER, rows)
    ts = [row[0] for row in rows]
    write_plot(r.plot_path("ratio"), ts, [row[5] for row in rows])
    write_plot(r.plot_path("residual"), ts, [row[3] for row in rows])
    ratios = [row[5] for row in rows]
    return f"C_emp={max(ratios)!r} max/min={max(ratios) / min(ratios)!r}", 0.0


def run_kernel(r):
    p = r.p
    rows = []
    for t in p["t"]:
        l1 = afe.kernel_l1(t, p["nodes"])
        rows.append((t, afe.kernel_cutoff(t), p["nodes"], l1, l1 / math.log(t)))
    write_csv(r.csv_path(), KERNEL_HEADER, rows)
    write_plot(r.plot_path("l1"), p["t"], [row[3] for row in rows])
    u = (np.arange(p["u_points"]) + 0.5) / p["u_points"]
    write_plot(r.plot_path("profile"), u, np.abs(afe.kernel_values(p["t"][0], u)))
    return f"l1={rows[-1][3]!r} l1/log(t)={rows[-1][4]!r}", 0.0


def _moment_rows(r, kind, results):
    rows = []
    for key, params, power, step, res in results:
        rows.append((kind, key, params, power, step, res.value, res.quad_error_est,
                     res.evals, r.elapsed(res.elapsed_seconds)))
    return rows


def run_moment(r):
    p = r.p
    quad = moments.QuadratureSpec(p["step"], p["refine_check"])
    results = []
    for V in p["V"]:
        res = moments.zeta_power_moment(V, p["y"], p["power"], quad, r.config.threads)
        results.append((V, f"y={p['y']!r}", p["power"], p["step"], res))
    write_csv(r.csv_path(), MOMENT_HEADER, _moment_rows(r, "moment", results))
    write_plot(r.plot_path("value"), p["V"], [x[-1].value for x in results])
    return results[-1][-1]


def run_twisted(r):
    p = r.p
    quad = moments.QuadratureSpec(p["step"], p["refine_check"])
    results = []
    for V in p["V"]:
        vals = []
        for u in p["u"]:
            res = moments.twisted_fourth_moment(V, p["y"], u, quad, r.config.threads)
            results.append((V, f"y={p['y']!r};u={u!r}", 4, p["step"], res))
            vals.append(res.value)
        write_plot(r.plot_path(f"V{V:g}"), p["u"], vals)
    write_csv(r.csv_path(), MOMENT_HEADER, _moment_rows(r, "twisted-moment", results))
    return results[-1][-1]


def run_product(r):
    p = r.p
    seed = r.config.seed
    results, ratio_pts = [], []
    for K in p["K"]:
        for L in p["L"]:
            F = make_spec(p["coeffs"], K, p["theta"], p["alpha"], seed=[seed, 0, K])
            G = make_spec(p["coeffs"], L, p["xi"], p["beta"], seed=[seed, 1, L])
            limit = moments.product_step_limit(F, G)
            step = p["step"] if p["step"] is not None else min(0.05, limit)
            quad = moments.QuadratureSpec(step, p["refine_check"])
            for T in p["T"]:
                res = moments.product_mean_value(T, F, G, quad, r.config.threads)
                params = (f"K={K};L={L};theta={p['theta']!r};xi={p['xi']!r};"
                          f"alpha={p['alpha']!r};beta={p['beta']!r};"
                          f"coeffs={p['coeffs']};seed={seed}")
                results.append((T, params, 4, step, res))
                ratio_pts.append((T, moments.theorem3_ratio(res, T, K, L, p["log_power"])))
    write_csv(r.csv_path(), MOMENT_HEADER, _moment_rows(r, "product-moment", results))
    write_plot(r.plot_path("ratio"), *zip(*ratio_pts))
    return results[-1][-1]


def run_t2(r):
    p = r.p
    D = make_spec("all_ones", p["K"], p["theta"], p["alpha"])
    ts = np.linspace(p["t_min"], p["t_max"], p["steps"])
    ratios = [moments.t2_ratio(float(t), D, p["V"], p["T"], p["sigma_step"], r.config.threads)
              for t in ts]
    write_csv(r.csv_path(), T2_HEADER,
              [(float(t), p["K"], p["theta"], p["alpha"], p["V"], p["T"], q)
               for t, q in zip(ts, ratios)])
    write_plot(r.plot_path("ratio"), ts, ratios)
    return f"max_ratio={max(ratios)!r}", 0.0


def run_fit(r):
    p = r.p
    with open(p["input"], newline="") as fh:
        reader = csv.DictReader(fh)
        for col in (p["x_column"], p["y_column"]):
            if col not in (reader.fieldnames or []):
                raise ConfigError("x_column" if col == p["x_column"] else "y_column",
                                  f"column {col!r} not in {p['input']}")
        pts = [(float(row[p["x_column"]]), float(row[p["y_column"]])) for row in reader]
    fit = moments.scaling_fit(pts)
    write_csv(r.csv_path(), FIT_HEADER,
              [(fit.logC, fit.p, fit.q, fit.rms_residual, fit.n_points)], append=True)
    xs = [x for x, _ in pts]
    write_plot(r.plot_path("model"), xs,
               [math.exp(fit.logC + fit.p * math.log(x) + fit.q * math.log(math.log(x)))
                for x in xs])
    return f"p={fit.p!r} q={fit.q!r} rms={fit.rms_residual!r}", 0.0


RUNNERS = {
    "eval": run_eval,
    "afe-scan": run_afe_scan,
    "kernel": run_kernel,
    "moment": run_moment,
    "twisted-moment": run_twisted,
    "product-moment": run_product,
    "t2-scan": run_t2,
    "fit": run_fit,
}


def run(config, out_dir, log=print):
    """Execute ``config`` and write its artifacts into ``out_dir``."""
    start = time.perf_counter()
    outcome = RUNNERS[config.kind](Run(config, out_dir, log))
    elapsed = time.perf_counter() - start
    if isinstance(outcome, moments.MomentResult):
        summary = f"value={outcome.value!r} error={outcome.quad_error_est!r}"
    else:
        text, err = outcome
        summary = f"{text} error={err!r}"
    log(f"{config.kind}: {summary} elapsed={elapsed:.3f}s")
    return 0


def build_parser():
    ap = argparse.ArgumentParser(prog="hzlab", description=__doc__.splitlines()[0])
    ap.add_argument("kind", choices=KINDS)
    ap.add_argument("--config", required=True, help="key = value config file")
    ap.add_argument("--threads", type=int, default=None)
    ap.add_argument("--seed", type=int, default=None)
    ap.add_argument("--out", default="hzlab_out", help="output directory")
    ap.add_argument("--cache-dir", default=None)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        pairs = read_pairs(args.config)
        config = build_config(args.kind, pairs, overrides={
            "threads": args.threads, "seed": args.seed, "cache_dir": args.cache_dir})
        return run(config, args.out)
    except ConfigError as exc:
        print(f"hzlab: config error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"hzlab: {exc}", file=sys.stderr)
        return 2 if not Path(args.config).is_file() else 1
    except Exception as exc:  # any computation failure
        print(f"hzlab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
