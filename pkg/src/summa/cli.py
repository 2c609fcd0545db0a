"""``summa`` command line: run an experiment, write CSV, print a summary.

Exit codes: 0 success, 1 configuration error, 2 domain error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field, fields
from typing import Optional

import numpy as np

from . import diagnostics, dynamics, regularization
from .catalog import jumps_of, parse_signal_spec
from .errors import ConfigurationError, DomainError
from .means import METHODS, compute_means, number_series_partials
from .series_core import (QuadratureConfig, default_grid, fourier_coefficients,
                          l2_norms, partial_sums)

CSV_HEADER = ("experiment", "n", "x", "method", "value", "aux")
UNDEFINED = "undefined"
COMMANDS = ("coeffs", "sums", "means", "diagnose", "dynamics", "regularize", "demo")
DEMOS = ("grandi", "fejer", "golden")


@dataclass
class ExperimentConfig:
    signal: str = "offset-square"
    L: float = math.pi
    n_max: int = 50
    grid_points: int = 1024
    panels: int = 64
    points_per_panel: int = 8
    abs_tol: float = 1e-8
    methods: tuple = METHODS
    beta: Optional[float] = None
    delta: float = 1e-3
    zero_convention: bool = False
    output_path: Optional[str] = None
    terms: Optional[str] = None
    x0: float = math.pi / 2
    route: Optional[str] = None
    gnuplot: bool = False
    all_n: bool = False

    def validate(self):
        if self.n_max < 1:
            raise ConfigurationError(f"n_max must be >= 1, got {self.n_max}")
        if self.grid_points < 16:
            raise ConfigurationError(f"grid_points must be >= 16, got {self.grid_points}")
        if not self.methods:
            raise ConfigurationError("methods must not be empty")
        unknown = [m for m in self.methods if m not in METHODS]
        if unknown:
            raise ConfigurationError(f"unknown methods {unknown}; valid: {', '.join(METHODS)}")
        if not self.L > 0:
            raise ConfigurationError("L must be positive")
        if not self.delta > 0:
            raise ConfigurationError("delta must be positive")
        if self.beta is not None and self.beta == 0:
            raise ConfigurationError("beta must be nonzero")

    @property
    def quadrature(self) -> QuadratureConfig:
        return QuadratureConfig(self.panels, self.points_per_panel, self.abs_tol)


@dataclass(frozen=True)
class CsvRecord:
    experiment: str
    n: int
    x: Optional[float]
    method: str
    value: Optional[float]
    aux: str = ""

    def row(self):
        return (self.experiment, str(self.n), _fmt(self.x, blank=True), self.method,
                _fmt(self.value), self.aux)

    @classmethod
    def parse(cls, row):
        exp, n, x, method, value, aux = row
        return cls(exp, int(n), None if x == "" else float(x), method,
                   None if value == UNDEFINED else float(value), aux)


def _fmt(v, blank=False):
    if v is None:
        return "" if blank else UNDEFINED
    v = float(v)
    if not math.isfinite(v):
        return UNDEFINED
    return f"{v:.17g}"


@dataclass
class Result:
    experiment: str
    records: list = field(default_factory=list)
    summary: list = field(default_factory=list)

    def add(self, n, x, method, value, aux=""):
        self.records.append(CsvRecord(self.experiment, int(n), x, method, value, aux))

    def add_trace(self, method, values, x=None, start=0, aux=""):
        values = np.asarray(values, dtype=float)
        if values.ndim == 1:
            for i, v in enumerate(values):
                self.add(start + i, None if x is None else float(x), method, v, aux)
        else:
            for i, row in enumerate(values):
                for xi, v in zip(x, row):
                    self.add(start + i, float(xi), method, v, aux)


def write_csv(records, stream):
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for rec in records:
        writer.writerow(rec.row())


def read_csv(stream):
    reader = csv.reader(stream)
    header = next(reader)
    if tuple(header) != CSV_HEADER:
        raise ConfigurationError(f"unexpected CSV header {header}")
    return [CsvRecord.parse(row) for row in reader]


def _ordered(records):
    order = {}
    for rec in records:
        order.setdefault(rec.method, len(order))
    return sorted(records, key=lambda r: (order[r.method], r.n,
                                          -math.inf if r.x is None else r.x))


def _signal(cfg, kmax=None):
    return parse_signal_spec(cfg.signal, cfg.L, max(cfg.n_max, kmax or 0))


def _grid(cfg):
    return default_grid(cfg.L, cfg.grid_points)


def _number_terms(cfg):
    if cfg.terms is None:
        return None
    if cfg.terms == "grandi":
        return (-1.0) ** np.arange(cfg.n_max + 1)
    try:
        return np.array([float(t) for t in cfg.terms.split(",") if t.strip()])
    except ValueError as exc:
        raise ConfigurationError(f"bad term list {cfg.terms!r}") from exc


def _masked_trace(method, S, zero_convention):
    """Trace with ``nan`` wherever the mean is undefined (strict-mode failures)."""
    try:
        return compute_means(method, S, zero_convention).values
    except DomainError:
        pass
    S = np.asarray(S, dtype=float)
    cols = S.reshape(S.shape[0], -1)
    start = 1 if method == "rho" else 0
    out = np.full((S.shape[0] - start, cols.shape[1]), np.nan)
    for j in range(cols.shape[1]):
        stop = S.shape[0]
        while stop > start + (method == "rho"):
            try:
                out[:stop - start, j] = compute_means(method, cols[:stop, j], zero_convention).values
                break
            except DomainError as exc:
                stop = min(stop - 1, exc.index if exc.index is not None else stop - 1)
    return out.reshape((S.shape[0] - start,) + S.shape[1:])


def run_coeffs(cfg, res):
    sig = _signal(cfg)
    got = fourier_coefficients(sig, cfg.n_max, cfg.quadrature)
    res.add(0, None, "a", got.a0, "quadrature")
    for k in range(1, got.kmax + 1):
        res.add(k, None, "a", got.a[k - 1], "quadrature")
        res.add(k, None, "b", got.b[k - 1], "quadrature")
    res.summary.append(f"a0 = {_fmt(got.a0)}")
    if sig.coeffs is not None:
        gap = max(abs(got.a0 - sig.coeffs.a0),
                  float(np.max(np.abs(got.a - sig.coeffs.a[:got.kmax]), initial=0)),
                  float(np.max(np.abs(got.b - sig.coeffs.b[:got.kmax]), initial=0)))
        res.summary.append(f"max |quadrature - closed form| = {gap:.3e}")


def run_sums(cfg, res):
    sig = _signal(cfg)
    x = _grid(cfg)
    route = cfg.route or "coeffs"
    S = partial_sums(sig, cfg.n_max, x, route, cfg.quadrature)
    res.add_trace("S", S, x, aux=route)
    res.summary.append(f"partial sums S_0..S_{cfg.n_max} on {x.size} points via {route}")


def _means_rows(cfg, res, S, x=None):
    for m in cfg.methods:
        trace = _masked_trace(m, S, cfg.zero_convention)
        start = 1 if m == "rho" else 0
        if m == "rho":
            res.add_trace(m, np.full((1,) + np.shape(S)[1:], np.nan), x, 0, "rho_0 undefined")
        res.add_trace(m, trace, x, start)
        last = trace[-1]
        if np.ndim(last):
            res.summary.append(f"{m}_{cfg.n_max}: mean over grid "
                               f"{_fmt(np.nanmean(last)) if np.any(np.isfinite(last)) else UNDEFINED}")
        else:
            res.summary.append(f"{m}_{cfg.n_max} = {_fmt(last)}")


def run_means(cfg, res):
    terms = _number_terms(cfg)
    if terms is not None:
        _means_rows(cfg, res, number_series_partials(terms).values)
        return
    sig = _signal(cfg)
    x = _grid(cfg)
    S = partial_sums(sig, cfg.n_max, x, cfg.route or "coeffs", cfg.quadrature)
    _means_rows(cfg, res, S, x)


def run_diagnose(cfg, res):
    terms = _number_terms(cfg)
    if terms is not None:
        S = number_series_partials(terms).values
        cert = diagnostics.certify_theorem5(S, cfg.zero_convention)
        res.add_trace("theta", cert.theta)
        res.add_trace("theta_lower", cert.lower)
        res.add_trace("theta_upper", cert.upper)
        res.add_trace("m_term", cert.m_terms)
        res.summary.append(f"K = {_fmt(cert.K)}  M = {_fmt(cert.M)}  verdict = {cert.verdict}")
        if cert.substituted:
            res.summary.append(f"M-expression undefined at n = {list(cert.substituted)[:10]}"
                               " (exact increment used; zero convention)")
        norms = np.abs(S)
        grid = None
    else:
        sig = _signal(cfg)
        grid = _grid(cfg)
        S = partial_sums(sig, cfg.n_max, grid, cfg.route or "coeffs", cfg.quadrature)
        norms = l2_norms(S, grid)
    onset = diagnostics.contraction_onset_sigma(norms, cfg.delta)
    for n, r, v in zip(onset.indices, onset.ratio_trace, onset.verdicts):
        res.add(n, None, "ratio_sigma", r, v)
    res.summary.append(f"sigma: scan onset N = {onset.onset_N}, closed-form N = "
                       f"{onset.closed_form_N}")
    for m in cfg.methods:
        if m == "sigma":
            continue
        try:
            rep = diagnostics.contraction_condition(m, S, grid, zero_convention=cfg.zero_convention)
        except DomainError as exc:
            res.summary.append(f"{m}: undefined ({exc})")
            continue
        for n, r, v in zip(rep.indices, rep.ratio_trace, rep.verdicts):
            res.add(n, None, f"ratio_{m}", r, v)
        counts = {v: rep.verdicts.count(v) for v in ("contracting", "cyclic", "violated")}
        res.summary.append(f"{m}: first contracting n = {rep.onset_N}, verdicts {counts}")
    if np.all(S > 0):
        pyth = diagnostics.pythagorean_check(S)
        res.summary.append(f"Pythagorean inequality holds for all n: {pyth.ok}")


def run_dynamics(cfg, res):
    terms = _number_terms(cfg)
    if terms is not None:
        source, x0 = number_series_partials(terms).values, None
    else:
        source, x0 = _signal(cfg), cfg.x0
    q = cfg.quadrature
    tr = dynamics.pointwise_theta_trace(source, x0, cfg.n_max, q, cfg.route)
    tr = dynamics.logistic_reduction(tr)
    res.add_trace("S", tr.S, x0)
    res.add_trace("theta_tilde", tr.theta_tilde, x0)
    res.add_trace("u", tr.u, x0)
    res.add_trace("logistic_residual", tr.residuals, x0)
    res.add_trace("condition", tr.condition, x0)
    try:
        tr = dynamics.kalman_linearized_theta(tr)
        res.add_trace("theta_epsilon", tr.epsilon_model, x0, aux=f"kappa={tr.kappa:.6g}")
        res.summary.append(f"kappa = {tr.kappa:.6g}, alpha = {tr.alpha:.6g}")
    except DomainError as exc:
        res.summary.append(f"linearized theta model skipped: {exc}")
    rt = dynamics.kalman_linearized_rho(source, x0, cfg.n_max, q, cfg.route)
    res.add_trace("rho_tilde", rt.rho_tilde, x0, start=1)
    res.add_trace("rho_epsilon", rt.rho_epsilon, x0, start=1)
    if tr.S.size >= 20:
        res.summary.append(f"trajectory: {dynamics.trajectory_classify(tr)}")
    onset = dynamics.condition_onset(tr.condition)
    res.summary.append(f"logistic condition < 1 from n = {onset}")


def run_regularize(cfg, res):
    sig = _signal(cfg)
    x = _grid(cfg)
    q = cfg.quadrature
    beta = cfg.beta if cfg.beta is not None else regularization.default_beta(sig, x)
    beta2 = 2 * beta
    mask = regularization.interior_mask(x, sig.L, jumps_of(sig))
    f = sig(x) if sig.evaluator is not None else None
    finals = {}
    for m in cfg.methods:
        if m not in ("theta", "rho"):
            continue
        fn = regularization.regularized_theta if m == "theta" else regularization.regularized_rho
        runs = [fn(sig, b, cfg.n_max, x, q, cfg.route) for b in (beta, beta2)]
        rec = [regularization.recover(t) for t in runs]
        finals[m] = rec[0][-1]
        if cfg.all_n:
            res.add_trace(f"{m}_star_recovered", rec[0], x, runs[0].start, f"beta={beta:g}")
        else:
            for xi, v in zip(x, rec[0][-1]):
                res.add(cfg.n_max, float(xi), f"{m}_star_recovered", v, f"beta={beta:g}")
        gap = float(np.max(np.abs(rec[0][-1] - rec[1][-1])[mask]))
        res.summary.append(f"{m}*: beta={beta:g} vs beta={beta2:g} max interior gap {gap:.3e}"
                           f" (tolerance 1e-3: {'ok' if gap <= 1e-3 else 'exceeded'})")
        if f is not None:
            err = float(np.max(np.abs(rec[0][-1] - f)[mask]))
            res.summary.append(f"{m}*: max interior |recovered - f| {err:.3e}")
    if "theta" in finals and "rho" in finals:
        gap = float(np.max(np.abs(finals["theta"] - finals["rho"])[mask]))
        res.summary.append(f"max interior |rho* - theta*| recovery gap {gap:.3e}")


def run_demo(cfg, res, name):
    if name == "grandi":
        terms = (-1.0) ** np.arange(cfg.n_max + 1)
        S = number_series_partials(terms).values
        for m, zc in (("sigma", False), ("gamma", True), ("theta", True), ("rho", False)):
            tr = compute_means(m, S, zc)
            if m == "rho":
                res.add(0, None, m, None, "rho_0 undefined")
            res.add_trace(m, tr.values, start=tr.start,
                          aux="zero_convention" if tr.zero_convention_used else "")
            res.summary.append(f"{m}_{cfg.n_max} = {_fmt(tr.values[-1])}")
        cert = diagnostics.certify_theorem5(S, zero_convention=True)
        res.summary.append(f"certificate: K = {_fmt(cert.K)}, M = {_fmt(cert.M)}, "
                           f"zero convention = {cert.zero_convention_used}")
    elif name == "fejer":
        sig = parse_signal_spec("seismic-square", cfg.L, cfg.n_max)
        x = _grid(cfg)
        S = partial_sums(sig, cfg.n_max, x)
        sigma = compute_means("sigma", S).values
        res.add_trace("S", S[-1:], x, cfg.n_max)
        res.add_trace("sigma", sigma[-1:], x, cfg.n_max)
        res.summary.append(f"max S_{cfg.n_max} = {_fmt(S[-1].max())} (Gibbs overshoot)")
        res.summary.append(f"max sigma_{cfg.n_max} = {_fmt(sigma[-1].max())}")
    elif name == "golden":
        for i, K in enumerate((1.0, 5.0, 100.0)):
            res.add(i, None, "golden_ratio", diagnostics.golden_ratio_selfcheck(K), f"K={K:g}")
        res.summary.append(f"golden ratio self-check = {diagnostics.golden_ratio_selfcheck():.12f}")
    else:
        raise ConfigurationError(f"unknown demo {name!r}; valid: {', '.join(DEMOS)}")


def gnuplot_script(csv_path, methods):
    lines = ["set datafile separator ','", "set key outside", "set xlabel 'x'"]
    plots = [f"'{csv_path}' using ($4 eq '{m}' ? $3 : 1/0):5 with lines title '{m}'"
             for m in methods]
    lines.append("plot " + ", \\\n     ".join(plots))
    return "\n".join(lines) + "\n"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigurationError(message)


def build_parser():
    p = _Parser(prog="summa", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for cmd in COMMANDS:
        s = sub.add_parser(cmd)
        if cmd == "demo":
            s.add_argument("name", choices=DEMOS)
        s.add_argument("--config", help="JSON file with ExperimentConfig keys")
        s.add_argument("--signal")
        s.add_argument("--terms", help="number series: 'grandi' or comma-separated terms")
        s.add_argument("--L", type=float)
        s.add_argument("--n-max", type=int, dest="n_max")
        s.add_argument("--grid-points", type=int, dest="grid_points")
        s.add_argument("--panels", type=int)
        s.add_argument("--points-per-panel", type=int, dest="points_per_panel")
        s.add_argument("--abs-tol", type=float, dest="abs_tol")
        s.add_argument("--methods")
        s.add_argument("--beta", type=float)
        s.add_argument("--delta", type=float)
        s.add_argument("--x0", type=float)
        s.add_argument("--route", choices=("coeffs", "dirichlet"))
        s.add_argument("--zero-convention", action="store_true", default=None,
                       dest="zero_convention")
        s.add_argument("--all-n", action="store_true", default=None, dest="all_n")
        s.add_argument("--gnuplot", action="store_true", default=None)
        s.add_argument("-o", "--output", dest="output_path")
    return p


def load_config(args) -> ExperimentConfig:
    cfg = ExperimentConfig()
    if args.command == "demo":
        cfg.n_max = 100
    known = {f.name for f in fields(ExperimentConfig)}
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigurationError(f"cannot read config {args.config}: {exc}") from exc
        bad = set(data) - known
        if bad:
            raise ConfigurationError(f"unknown config keys {sorted(bad)}")
        for key, value in data.items():
            setattr(cfg, key, value)
    for key in known:
        value = getattr(args, key, None)
        if value is not None:
            setattr(cfg, key, value)
    if isinstance(cfg.methods, str):
        cfg.methods = tuple(m.strip() for m in cfg.methods.split(",") if m.strip())
    cfg.methods = tuple(cfg.methods)
    cfg.validate()
    return cfg


def run_experiment(cfg: ExperimentConfig, command: str, demo: Optional[str] = None) -> Result:
    experiment = f"demo:{demo}" if command == "demo" else f"{command}:{cfg.terms or cfg.signal}"
    res = Result(experiment)
    if command == "coeffs":
        run_coeffs(cfg, res)
    elif command == "sums":
        run_sums(cfg, res)
    elif command == "means":
        run_means(cfg, res)
    elif command == "diagnose":
        run_diagnose(cfg, res)
    elif command == "dynamics":
        run_dynamics(cfg, res)
    elif command == "regularize":
        run_regularize(cfg, res)
    elif command == "demo":
        run_demo(cfg, res, demo)
    else:
        raise ConfigurationError(f"unknown command {command!r}")
    res.records = _ordered(res.records)
    return res


def main(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        cfg = load_config(args)
        res = run_experiment(cfg, args.command, getattr(args, "name", None))
        path = cfg.output_path or f"summa-{args.command}.csv"
        buf = io.StringIO()
        write_csv(res.records, buf)
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())
        if cfg.gnuplot:
            methods = sorted({r.method for r in res.records})
            with open(path + ".gp", "w", encoding="utf-8", newline="") as fh:
                fh.write(gnuplot_script(path, methods))
        print(f"# {res.experiment}: {len(res.records)} rows -> {path}", file=stdout)
        for line in res.summary:
            print(line, file=stdout)
        return 0
    except ConfigurationError as exc:
        print(f"summa: configuration error: {exc}", file=sys.stderr)
        return 1
    except DomainError as exc:
        print(f"summa: domain error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
