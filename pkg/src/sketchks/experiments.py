"""Presets and runners for the synthetic KS experiments.

Experiments 1-5 are the hypothesis-testing study: exact versus approximate
distances, p-values, and rejection decisions over seeded replications.
Experiments 6-10 compare the approximate-CDF distance and the sketch-direct
distance against the exact one at a common target precision, recording the
storage each route needs.

The distance precision for experiments 1-3 (phi = 0.000399) and 4-5
(phi = 0.00077, i.e. a CDF bound of 0.000385) is pinned to the values the
original study derived from (alpha=0.05, beta=0.025) and (alpha=0.20,
beta=0.1); rerunning at other sample sizes re-derives phi from
(alpha, beta).  Experiments 6-10 take the target precision directly, with
the CDF bound at precision/2 and the comparison sketches at precision/6.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import ks
from .approx_cdf import CdfPlan, build_cdf, empirical_cdf, error_bound, eval_cdf, plan_from_phi
from .gk_sketch import QuantileSketch
from .synth import DistributionSpec, gamma, normal, sample, uniform

__all__ = [
    "ExperimentSpec",
    "ExperimentResult",
    "ReplicationRecord",
    "experiment_spec",
    "run_experiment",
    "run_convergence",
    "CONVERGENCE_ROWS",
    "DEFAULT_SEED",
]

DEFAULT_SEED = 1729

# Convergence-study grid: (knots, quantile error); bound delta = 1/(a-1)+eps.
CONVERGENCE_ROWS = [
    (11, 0.1), (21, 0.1), (51, 0.1),
    (11, 0.01), (21, 0.01), (51, 0.01),
    (101, 0.001), (201, 0.001), (501, 0.001),
]

_PHI_GAUSS = 0.000399   # alpha=0.05, beta=0.025 at N=M=1e4
_PHI_GAMMA = 0.00077    # alpha=0.20, beta=0.1 at N=84000, M=7000

# "N(0,2)" in the study uses the N(mean, variance) notation: its distance
# band 0.0837..0.0976 matches sd = sqrt(2) (true D = 0.0829), not sd = 2.
_VAR2 = normal(0, math.sqrt(2))

_TABLE2 = {
    1: (normal(0, 1), normal(1, 1), 10000, 10000, 0.05, 0.025, _PHI_GAUSS),
    2: (normal(0, 1), _VAR2, 10000, 10000, 0.05, 0.025, _PHI_GAUSS),
    3: (normal(0, 1), normal(0, 1), 10000, 10000, 0.05, 0.025, _PHI_GAUSS),
    4: (gamma(0.5, 1), uniform(0, 1), 84000, 7000, 0.20, 0.10, _PHI_GAMMA),
    5: (gamma(0.5, 1), gamma(0.5, 1), 84000, 7000, 0.20, 0.10, _PHI_GAMMA),
}

_TABLE3 = {
    6: (normal(0, 1), normal(1, 1), 10000, 0.05),
    7: (normal(0, 1), _VAR2, 10000, 0.01),
    8: (normal(0, 1), normal(0, 1), 100000, 0.001),
    9: (gamma(0.5, 1), uniform(0, 1), 84000, 0.05),
    10: (gamma(0.5, 1), gamma(0.5, 1), 84000, 0.002),
}


@dataclass(frozen=True)
class ExperimentSpec:
    """One experiment configuration; ids 1-5 and 6-10 follow the presets."""

    id: int
    dist1: DistributionSpec
    dist2: DistributionSpec
    n: int
    m: int
    alpha: float
    phi: float
    beta: float | None = None
    sketch_epsilon: float | None = None
    replications: int = 20
    master_seed: int = DEFAULT_SEED

    @property
    def with_sketch(self) -> bool:
        return self.sketch_epsilon is not None


def experiment_spec(
    exp_id: int,
    *,
    replications: int = 20,
    master_seed: int = DEFAULT_SEED,
    n: int | None = None,
    m: int | None = None,
) -> ExperimentSpec:
    """Preset for one experiment id, optionally rescaled to other sizes.

    Overriding n or m on ids 1-5 re-derives phi from (alpha, beta) at the
    new sizes; on ids 6-10 the target precision is size-independent.
    """
    if exp_id in _TABLE2:
        d1, d2, n0, m0, alpha, beta, phi = _TABLE2[exp_id]
        n = n0 if n is None else n
        m = m0 if m is None else m
        if (n, m) != (n0, m0):
            phi = ks.phi_for_test(alpha, beta, n, m)
        return ExperimentSpec(
            id=exp_id, dist1=d1, dist2=d2, n=n, m=m, alpha=alpha, beta=beta,
            phi=phi, replications=replications, master_seed=master_seed,
        )
    if exp_id in _TABLE3:
        d1, d2, size, precision = _TABLE3[exp_id]
        n = size if n is None else n
        m = size if m is None else m
        return ExperimentSpec(
            id=exp_id, dist1=d1, dist2=d2, n=n, m=m, alpha=0.05,
            phi=precision, sketch_epsilon=precision / 6.0,
            replications=replications, master_seed=master_seed,
        )
    raise ValueError(f"experiment id must be 1..10, got {exp_id}")


@dataclass(frozen=True)
class ReplicationRecord:
    replication: int
    seed: int
    d_exact: float
    d_approx: float
    p_exact: float
    p_approx: float
    reject_exact: bool
    reject_approx: bool
    abs_err: float
    d_sketch: float | None = None
    cdf_knots_x: int | None = None
    cdf_knots_y: int | None = None
    sketch_tuples_x: int | None = None
    sketch_tuples_y: int | None = None


@dataclass
class ExperimentResult:
    spec: ExperimentSpec
    records: list[ReplicationRecord] = field(default_factory=list)

    def aggregates(self) -> dict:
        recs = self.records
        agg = {
            "d_exact_min": min(r.d_exact for r in recs),
            "d_exact_max": max(r.d_exact for r in recs),
            "d_approx_min": min(r.d_approx for r in recs),
            "d_approx_max": max(r.d_approx for r in recs),
            "p_exact_min": min(r.p_exact for r in recs),
            "p_exact_max": max(r.p_exact for r in recs),
            "p_approx_min": min(r.p_approx for r in recs),
            "p_approx_max": max(r.p_approx for r in recs),
            "max_abs_err": max(r.abs_err for r in recs),
            "rejections_exact": sum(r.reject_exact for r in recs),
            "rejections_approx": sum(r.reject_approx for r in recs),
            "decision_agreements": sum(
                r.reject_exact == r.reject_approx for r in recs
            ),
        }
        if self.spec.with_sketch:
            agg["d_sketch_min"] = min(r.d_sketch for r in recs)
            agg["d_sketch_max"] = max(r.d_sketch for r in recs)
            agg["max_sketch_err"] = max(
                abs(r.d_sketch - r.d_exact) for r in recs
            )
        return agg

    def to_csv(self, path) -> None:
        write_experiment_csv(self, path)


def _rep_seeds(master_seed: int, rep: int) -> tuple[int, int]:
    # per-replication seed = master + index; one stream per sample side
    rep_seed = master_seed + rep
    return 2 * rep_seed, 2 * rep_seed + 1


def run_replication(spec: ExperimentSpec, rep: int) -> ReplicationRecord:
    seed_x, seed_y = _rep_seeds(spec.master_seed, rep)
    x = sample(spec.dist1, spec.n, seed_x)
    y = sample(spec.dist2, spec.m, seed_y)

    d_exact = ks.exact_ks_distance(x, y)
    plan_x = plan_from_phi(spec.phi, spec.n)
    plan_y = plan_from_phi(spec.phi, spec.m)
    cdf_x = build_cdf(x, plan_x)
    cdf_y = build_cdf(y, plan_y)
    d_approx = ks.approx_two_sample_ks(cdf_x, cdf_y)
    p_exact = ks.p_value(d_exact, spec.n, spec.m)
    p_approx = ks.p_value(d_approx, spec.n, spec.m)

    extra: dict = {}
    if spec.with_sketch:
        s1 = QuantileSketch(spec.sketch_epsilon)
        s1.extend(x.tolist())
        s2 = QuantileSketch(spec.sketch_epsilon)
        s2.extend(y.tolist())
        s1.seal()
        s2.seal()
        extra = {
            "d_sketch": ks.lall_ks(s1, s2),
            "cdf_knots_x": plan_x.a,
            "cdf_knots_y": plan_y.a,
            "sketch_tuples_x": s1.tuple_count,
            "sketch_tuples_y": s2.tuple_count,
        }
    return ReplicationRecord(
        replication=rep,
        seed=spec.master_seed + rep,
        d_exact=d_exact,
        d_approx=d_approx,
        p_exact=p_exact,
        p_approx=p_approx,
        reject_exact=p_exact <= spec.alpha,
        reject_approx=p_approx <= spec.alpha,
        abs_err=abs(d_approx - d_exact),
        **extra,
    )


def run_experiment(spec: ExperimentSpec) -> ExperimentResult:
    result = ExperimentResult(spec=spec)
    for rep in range(spec.replications):
        result.records.append(run_replication(spec, rep))
    return result


def _csv_num(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    # Table-style formatting: p-values below 1e-300 (and exact zeros from
    # underflow) print as 0.0
    if 0 <= x < ks.P_VALUE_FLOOR:
        return "0.0"
    return format(float(x), ".17g")


_CSV_FIELDS = [
    "replication", "seed", "d_exact", "d_approx", "d_sketch",
    "p_exact", "p_approx", "reject_exact", "reject_approx", "abs_err",
    "cdf_knots_x", "cdf_knots_y", "sketch_tuples_x", "sketch_tuples_y",
]


def write_experiment_csv(result: ExperimentResult, path) -> None:
    """Per-replication rows, then min / max / summary aggregate rows."""
    recs = result.records
    agg = result.aggregates()
    lines = [",".join(_CSV_FIELDS)]
    for r in recs:
        row = [
            str(r.replication), str(r.seed), _csv_num(r.d_exact),
            _csv_num(r.d_approx), _csv_num(r.d_sketch), _csv_num(r.p_exact),
            _csv_num(r.p_approx), _csv_num(r.reject_exact),
            _csv_num(r.reject_approx), _csv_num(r.abs_err),
            _csv_num(r.cdf_knots_x), _csv_num(r.cdf_knots_y),
            _csv_num(r.sketch_tuples_x), _csv_num(r.sketch_tuples_y),
        ]
        lines.append(",".join(row))
    sk = result.spec.with_sketch
    lines.append(",".join([
        "min", "", _csv_num(agg["d_exact_min"]), _csv_num(agg["d_approx_min"]),
        _csv_num(agg["d_sketch_min"]) if sk else "",
        _csv_num(agg["p_exact_min"]), _csv_num(agg["p_approx_min"]),
        "", "", "", "", "", "", "",
    ]))
    lines.append(",".join([
        "max", "", _csv_num(agg["d_exact_max"]), _csv_num(agg["d_approx_max"]),
        _csv_num(agg["d_sketch_max"]) if sk else "",
        _csv_num(agg["p_exact_max"]), _csv_num(agg["p_approx_max"]),
        "", "", "", "", "", "", "",
    ]))
    lines.append(",".join([
        "summary", "", "", "",
        _csv_num(agg["max_sketch_err"]) if sk else "",
        "", "",
        str(agg["rejections_exact"]), str(agg["rejections_approx"]),
        _csv_num(agg["max_abs_err"]),
        "", "", "", "",
    ]))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def run_convergence(
    *,
    n: int = 10000,
    replications: int = 20,
    master_seed: int = DEFAULT_SEED,
    include_exact_row: bool = True,
) -> list[dict]:
    """Max CDF approximation error over seeded standard-normal samples.

    One output row per (a, epsilon) configuration; the optional final row
    is the degenerate exact-quantile plan (a = n, epsilon = 0) whose error
    collapses to the knot spacing.
    """
    rows = []
    configs = [(a, eps) for a, eps in CONVERGENCE_ROWS if a <= n]
    if include_exact_row:
        configs.append((n, 0.0))
    for a, eps in configs:
        delta = 1.0 / (a - 1) + eps
        plan = CdfPlan(n=n, delta=delta, epsilon=eps, a=a)
        worst = 0.0
        for rep in range(replications):
            data = sample(normal(0, 1), n, master_seed + rep)
            cdf = build_cdf(data, plan)
            err = np.max(np.abs(eval_cdf(cdf, data) - empirical_cdf(data, data)))
            worst = max(worst, float(err))
        rows.append({
            "a": a,
            "epsilon": eps,
            "delta": delta,
            "max_abs_error": worst,
            "within_bound": worst <= error_bound(plan),
        })
    return rows


def write_convergence_csv(rows: list[dict], path) -> None:
    lines = ["a,epsilon,delta,max_abs_error,within_bound"]
    for r in rows:
        lines.append(",".join([
            str(r["a"]), _csv_num(r["epsilon"]), _csv_num(r["delta"]),
            _csv_num(r["max_abs_error"]), "1" if r["within_bound"] else "0",
        ]))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
