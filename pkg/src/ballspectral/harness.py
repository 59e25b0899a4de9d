"""Degree sweeps, CSV output and convergence fits behind the CLI."""

import csv
import io
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .config import RunConfig
from .expr import flux_function, point_function
from .galerkin import ProblemSpec
from .mapping import identity_map, linear_map_3d, planar_quadratic_map, star_shaped_map
from .problems import ellipsoid_case, planar_case, run_degree, star_case
from .solve import RunReport

log = logging.getLogger(__name__)

CSV_HEADER = ("n", "N", "max_error", "cond", "q", "seconds")

# acceptance band for the condition-number growth exponent vs N_n
COND_EXPONENT_RANGE = (1.6, 2.4)


class SummaryError(ValueError):
    pass


def _gamma_value(text, d):
    try:
        return float(text)
    except ValueError:
        return point_function(text, d)


@dataclass(frozen=True)
class _CustomCase:
    """Problem builder for expression-defined data."""

    cfg: RunConfig

    def _mapping(self):
        kind = self.cfg.map
        if kind == "identity2":
            return identity_map(2)
        if kind == "identity3":
            return identity_map(3)
        if kind == "planar":
            return planar_quadratic_map(self.cfg.a)
        if kind == "linear":
            return linear_map_3d(np.reshape(self.cfg.M, (3, 3)))
        return star_shaped_map(e_s=self.cfg.e_s)

    @property
    def exact(self):
        if self.cfg.exact is None:
            return None
        return point_function(self.cfg.exact, self.cfg.dimension)

    def problem(self, n, mode, q):
        d = self.cfg.dimension
        gamma = None if mode == "poisson" else _gamma_value(self.cfg.gamma, d)
        return ProblemSpec(
            self._mapping(),
            n,
            point_function(self.cfg.f, d),
            flux_function(self.cfg.g, d),
            gamma=gamma,
            mode=mode,
            quad_order=q if q is not None else n + 4,
        )


def build_case(cfg):
    """Return an object with ``problem(n, mode, q)`` and ``exact``."""
    if cfg.case == "custom":
        return _CustomCase(cfg)
    if cfg.case == "planar-quadratic":
        case = planar_case(cfg.a)
    elif cfg.case == "ellipsoid":
        case = ellipsoid_case(np.reshape(cfg.M, (3, 3)))
    else:
        case = star_case(cfg.e_s)
    if cfg.gamma is not None and cfg.mode == "helmholtz":
        case = replace(case, gamma=_gamma_value(cfg.gamma, case.mapping.dimension))
    return case


def run_case(cfg, jobs=1):
    """One RunReport per configured degree, ordered by degree."""
    cfg.validate()
    case = build_case(cfg)

    def one(n):
        spec = case.problem(n, mode=cfg.mode, q=cfg.quad)
        report = run_degree(spec, n, mode=cfg.mode, exact=case.exact)
        log.info("n=%d N=%d err=%.3e cond=%.4g (%.2fs)", n, report.N, report.max_error, report.cond, report.seconds)
        return report

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(one, cfg.degrees))
    else:
        reports = [one(n) for n in cfg.degrees]
    return sorted(reports, key=lambda r: r.n)


def format_error(err):
    return "nan" if math.isnan(err) else f"{err:.2e}"


def format_cond(cond):
    return str(int(round(cond))) if cond >= 100 else f"{cond:.3g}"


def write_csv(reports, stream):
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in reports:
        w.writerow([r.n, r.N, format_error(r.max_error), format_cond(r.cond), r.q, f"{r.seconds:.3f}"])


def reports_to_csv(reports):
    buf = io.StringIO()
    write_csv(reports, buf)
    return buf.getvalue()


def read_csv(stream):
    rows = []
    reader = csv.DictReader(stream)
    missing = set(CSV_HEADER[:4]) - set(reader.fieldnames or ())
    if missing:
        raise SummaryError(f"CSV lacks columns: {', '.join(sorted(missing))}")
    for row in reader:
        rows.append(
            RunReport(
                int(row["n"]),
                int(row["N"]),
                float(row["max_error"]),
                float(row["cond"]),
                int(row["q"]) if row.get("q") else 0,
                float(row["seconds"]) if row.get("seconds") else 0.0,
            )
        )
    return rows


def _linfit(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - float(np.sum(resid**2)) / ss_tot
    return float(slope), float(intercept), r2


@dataclass(frozen=True)
class ConvergenceSummary:
    error_slope: float  # log10(error) per unit degree
    error_r2: float
    cond_exponent: float  # d log(cond) / d log(N)
    cond_r2: float
    rows: int

    def passes(self):
        lo, hi = COND_EXPONENT_RANGE
        return self.error_slope < 0.0 and lo <= self.cond_exponent <= hi


def convergence_summary(rows, min_n=None):
    """Least-squares fits of log10(error) vs n and log(cond) vs log(N)."""
    if min_n is not None:
        rows = [r for r in rows if r.n >= min_n]
    if len(rows) < 4:
        raise SummaryError(f"need at least 4 rows for a fit, got {len(rows)}")
    n = [r.n for r in rows]
    es, _, er2 = _linfit(n, np.log10([r.max_error for r in rows]))
    cs, _, cr2 = _linfit(np.log([r.N for r in rows]), np.log([r.cond for r in rows]))
    return ConvergenceSummary(es, er2, cs, cr2, len(rows))
