"""Command-line pipelines over manifest-listed structure files.

Subcommands: featurize, analyze-similarity, regress, dof, project,
appendix-a.  Options come from flags, optionally backed by a JSON config
file (flags win).  Exit codes: 0 success, 1 usage/config error, 2
data/numeric error; failures print one ``error: ...`` line to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import dataio
from .errors import CrysimError
from .descriptors import KIND_CM_SORTED, KIND_CM_SPECTRUM, KIND_OFM, featurize_dataset
from .evaluation import (
    DEFAULT_GAMMA_GRID,
    DEFAULT_LAMBDA_GRID,
    DEFAULT_SEED,
    KrrConfig,
    RidgeConfig,
    cluster_groups,
    grid_search,
    kfold_cv,
    make_fold_plan,
    pca_project,
)
from .regression import (
    KERNEL_KINDS,
    KernelSpec,
    KnnConfig,
    degrees_of_freedom,
    krr_fit,
    ridge_fit,
)
from .similarity import (
    avg_neighbor_count_grid,
    data_variance,
    distinctiveness_correlation,
    parse_measure,
)
from .synthetic import SAMPLING_MODES, SyntheticSpec, curve_values, knn_curve_benchmark

DESCRIPTOR_KINDS = (KIND_OFM, KIND_CM_SPECTRUM, KIND_CM_SORTED)
MEASURE_NAMES = ("hamming", "l1", "l2", "l3", "cosine", "braycurtis")
DEFAULT_EPS_GRID = tuple(i / 10 for i in range(11))


class UsageError(Exception):
    """Bad flags or config; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _add_common(sub, *, manifest=True, descriptor=True):
    sub.add_argument("--config", help="JSON config file; flags override its values")
    sub.add_argument("--out", help="output directory (created if missing)")
    if manifest:
        sub.add_argument("--manifest", help="dataset manifest CSV (id,path,formation_energy)")
    if descriptor:
        sub.add_argument("--descriptor", help=f"one of {'|'.join(DESCRIPTOR_KINDS)}")


def build_parser() -> _Parser:
    parser = _Parser(prog="crysim", description=__doc__)
    commands = parser.add_subparsers(dest="command", required=True)

    sub = commands.add_parser("featurize", help="write the descriptor table for a dataset")
    _add_common(sub)

    sub = commands.add_parser(
        "analyze-similarity", help="distinctiveness correlations, neighbor counts, variance"
    )
    _add_common(sub)
    sub.add_argument("--eps", help="comma list of relative-radius offsets (default 0.0..1.0)")

    sub = commands.add_parser("regress", help="KNN sweep, ridge, and KRR cross-validation")
    _add_common(sub)
    sub.add_argument("--measure", help="comma list of KNN measures")
    sub.add_argument("--kernel", help="comma list of KRR kernels")
    sub.add_argument("--k", help="comma list of neighbor counts")
    sub.add_argument("--lambda", dest="lam", help="comma list: ridge/KRR lambda grid")
    sub.add_argument("--gamma", help="comma list: KRR gamma grid")
    sub.add_argument("--folds", help="number of CV folds")
    sub.add_argument("--seed", help="fold-plan seed")

    sub = commands.add_parser("dof", help="degrees of freedom per model and kernel")
    _add_common(sub)
    sub.add_argument("--kernel", help="comma list of KRR kernels")
    sub.add_argument("--lambda", dest="lam", help="fixed lambda (otherwise grid-searched)")
    sub.add_argument("--gamma", help="fixed gamma (otherwise grid-searched)")
    sub.add_argument("--folds", help="number of CV folds for the search")
    sub.add_argument("--seed", help="fold-plan seed")

    sub = commands.add_parser("project", help="2-D principal projection plus grouping")
    _add_common(sub)
    sub.add_argument("--groups", help="number of groups (default 3)")
    sub.add_argument("--seed", help="grouping seed")

    sub = commands.add_parser("appendix-a", help="1-D synthetic KNN benchmark")
    _add_common(sub, manifest=False, descriptor=False)
    sub.add_argument("--n", help="number of sample points")
    sub.add_argument("--sigma", help="noise standard deviation")
    sub.add_argument("--mu", help="noise mean")
    sub.add_argument("--x-range", dest="x_range", help="lo,hi sampling range")
    sub.add_argument("--sampling", help="uniform_random or grid")
    sub.add_argument("--seed", help="generator seed")
    sub.add_argument("--k", help="comma list of neighbor counts")

    return parser


# --- option handling -----------------------------------------------------


def _floats(value, what) -> tuple[float, ...]:
    if isinstance(value, (list, tuple)):
        items = value
    else:
        items = str(value).split(",")
    try:
        return tuple(float(v) for v in items)
    except (TypeError, ValueError):
        raise UsageError(f"{what}: expected numbers, got {value!r}") from None


def _ints(value, what) -> tuple[int, ...]:
    floats = _floats(value, what)
    ints = tuple(int(v) for v in floats)
    if any(i != f for i, f in zip(ints, floats)):
        raise UsageError(f"{what}: expected integers, got {value!r}")
    return ints


def _strings(value) -> tuple[str, ...]:
    if isinstance(value, (list, tuple)):
        return tuple(str(v) for v in value)
    return tuple(s.strip() for s in str(value).split(",") if s.strip())


def resolve_options(args) -> dict:
    """Merge flags over the optional config file, with validation."""
    opts = {}
    if args.config:
        config_path = Path(args.config)
        if not config_path.is_file():
            raise UsageError(f"config file not found: {config_path}")
        try:
            opts = json.loads(config_path.read_text())
        except json.JSONDecodeError as exc:
            raise UsageError(f"config file is not valid JSON: {exc}") from None
        if not isinstance(opts, dict):
            raise UsageError("config file must hold a JSON object")
    flag_to_key = {"lam": "lambda"}
    for dest, value in vars(args).items():
        if dest in ("command", "config") or value is None:
            continue
        opts[flag_to_key.get(dest, dest)] = value
    if not opts.get("out"):
        raise UsageError("--out is required")
    if args.command not in ("appendix-a",):
        manifest = opts.get("manifest")
        if not manifest:
            raise UsageError("--manifest is required")
        if not Path(manifest).is_file():
            raise UsageError(f"manifest not found: {manifest}")
        descriptor = opts.get("descriptor", KIND_OFM)
        if descriptor not in DESCRIPTOR_KINDS:
            raise UsageError(f"--descriptor must be one of {'|'.join(DESCRIPTOR_KINDS)}")
        opts["descriptor"] = descriptor
    return opts


def _out_dir(opts) -> Path:
    out = Path(opts["out"])
    out.mkdir(parents=True, exist_ok=True)
    return out


def _load_features(opts):
    structures = dataio.load_dataset(opts["manifest"])
    descriptors, pad_len = featurize_dataset(structures, opts["descriptor"])
    X = np.array([d.values for d in descriptors])
    ids = [s.id for s in structures]
    return structures, ids, X, pad_len


def _measures(opts, key, default):
    names = _strings(opts.get(key, default))
    for name in names:
        if name not in MEASURE_NAMES:
            raise UsageError(f"unknown measure {name!r}")
    return names


def _kernels(opts, default=KERNEL_KINDS):
    names = _strings(opts.get("kernel", default))
    for name in names:
        if name not in KERNEL_KINDS:
            raise UsageError(f"unknown kernel {name!r}")
    return names


# --- commands ------------------------------------------------------------


def cmd_featurize(opts) -> None:
    out = _out_dir(opts)
    _, ids, X, pad_len = _load_features(opts)
    dataio.write_feature_csv(out / "features.csv", ids, X)
    dataio.write_json(
        out / "features.json",
        {"kind": opts["descriptor"], "dimension": int(X.shape[1]), "pad_len": pad_len},
    )


def cmd_analyze_similarity(opts) -> None:
    out = _out_dir(opts)
    eps_grid = _floats(opts["eps"], "--eps") if "eps" in opts else DEFAULT_EPS_GRID
    _, _, X, pad_len = _load_features(opts)

    rows = []
    for name in ("l1", "l2", "l3", "cosine", "braycurtis"):
        rows.append([name, distinctiveness_correlation(X, parse_measure(name))])
    dataio.write_csv(out / "correlations.csv", ["measure", "correlation"], rows)

    rows = []
    for name in MEASURE_NAMES:
        counts = avg_neighbor_count_grid(X, parse_measure(name), eps_grid)
        rows.extend([name, float(eps), count] for eps, count in zip(eps_grid, counts))
    dataio.write_csv(out / "neighbor_counts.csv", ["measure", "eps", "avg_count"], rows)

    dataio.write_json(
        out / "variance.json",
        {
            "descriptor": opts["descriptor"],
            "n_dimensions": int(X.shape[1]),
            "pad_len": pad_len,
            "data_variance": data_variance(X),
        },
    )


def _report_dict(report, descriptor) -> dict:
    params = report.params
    return {
        "model": report.model,
        "descriptor": descriptor,
        "lambda": params.get("lambda"),
        "gamma": params.get("gamma"),
        **{k: v for k, v in params.items() if k not in ("lambda", "gamma")},
        "folds": [f.as_dict() for f in report.folds],
        "mean": report.mean.as_dict(),
        "std": report.std.as_dict(),
    }


def cmd_regress(opts) -> None:
    out = _out_dir(opts)
    structures, _, X, _ = _load_features(opts)
    y = dataio.require_energies(structures)
    folds = _ints(opts.get("folds", 10), "--folds")[0]
    seed = _ints(opts.get("seed", DEFAULT_SEED), "--seed")[0]
    plan = make_fold_plan(len(y), folds, seed)
    lambda_grid = _floats(opts.get("lambda", DEFAULT_LAMBDA_GRID), "--lambda")
    gamma_grid = _floats(opts.get("gamma", DEFAULT_GAMMA_GRID), "--gamma")
    descriptor = opts["descriptor"]

    knn_reports = []
    for name in _measures(opts, "measure", ("l1", "l2", "l3", "cosine", "braycurtis")):
        measure = parse_measure(name)
        for k in _ints(opts.get("k", (5, 10, 15)), "--k"):
            report = kfold_cv(X, y, KnnConfig(k=k, measure=measure), plan)
            knn_reports.append(_report_dict(report, descriptor))

    ridge_search = grid_search(
        X, y, lambda lam, _: RidgeConfig(lam), lambda_grid, (None,), plan
    )
    ridge_report = _report_dict(ridge_search.report, descriptor)

    krr_reports = []
    for kind in _kernels(opts):
        search = grid_search(
            X,
            y,
            lambda lam, gamma, kind=kind: KrrConfig(KernelSpec(kind, gamma), lam),
            lambda_grid,
            gamma_grid,
            plan,
        )
        krr_reports.append(_report_dict(search.report, descriptor))

    dataio.write_json(
        out / "regression_report.json",
        {
            "descriptor": descriptor,
            "n_structures": len(y),
            "n_folds": folds,
            "seed": seed,
            "knn": knn_reports,
            "ridge": ridge_report,
            "krr": krr_reports,
        },
    )


def cmd_dof(opts) -> None:
    out = _out_dir(opts)
    structures, _, X, _ = _load_features(opts)
    y = dataio.require_energies(structures)
    folds = _ints(opts.get("folds", 10), "--folds")[0]
    seed = _ints(opts.get("seed", DEFAULT_SEED), "--seed")[0]
    plan = make_fold_plan(len(y), folds, seed)
    fixed_lam = _floats(opts["lambda"], "--lambda")[0] if "lambda" in opts else None
    fixed_gamma = _floats(opts["gamma"], "--gamma")[0] if "gamma" in opts else None

    rows = []
    if fixed_lam is not None:
        ridge_lam = fixed_lam
    else:
        ridge_lam = grid_search(
            X, y, lambda lam, _: RidgeConfig(lam), DEFAULT_LAMBDA_GRID, (None,), plan
        ).lam
    df = degrees_of_freedom(ridge_fit(X, y, ridge_lam), X)
    rows.append(["ridge", "", float(ridge_lam), "", float(df)])

    for kind in _kernels(opts):
        if fixed_lam is not None and fixed_gamma is not None:
            lam, gamma = fixed_lam, fixed_gamma
        else:
            search = grid_search(
                X,
                y,
                lambda lam, gamma, kind=kind: KrrConfig(KernelSpec(kind, gamma), lam),
                (fixed_lam,) if fixed_lam is not None else DEFAULT_LAMBDA_GRID,
                (fixed_gamma,) if fixed_gamma is not None else DEFAULT_GAMMA_GRID,
                plan,
            )
            lam, gamma = search.lam, search.gamma
        model = krr_fit(X, y, lam, KernelSpec(kind, gamma))
        rows.append(["krr", kind, float(lam), float(gamma), degrees_of_freedom(model)])

    dataio.write_csv(out / "dof.csv", ["method", "kernel", "lambda", "gamma", "df"], rows)


def cmd_project(opts) -> None:
    out = _out_dir(opts)
    structures, ids, X, _ = _load_features(opts)
    groups = _ints(opts.get("groups", 3), "--groups")[0]
    seed = _ints(opts.get("seed", DEFAULT_SEED), "--seed")[0]
    projection, _ = pca_project(X, n_components=2)
    labels = cluster_groups(projection, k=groups, seed=seed)
    rows = []
    for i, struct_id in enumerate(ids):
        energy = structures[i].formation_energy
        rows.append(
            [
                struct_id,
                float(projection[i, 0]),
                float(projection[i, 1]),
                int(labels[i]),
                "" if energy is None else float(energy),
            ]
        )
    dataio.write_csv(
        out / "projection.csv", ["id", "pc1", "pc2", "group", "formation_energy"], rows
    )


def cmd_appendix_a(opts) -> None:
    out = _out_dir(opts)
    x_range = _floats(opts.get("x_range", (0.0, 5.0)), "--x-range")
    if len(x_range) != 2:
        raise UsageError("--x-range needs exactly lo,hi")
    sampling = str(opts.get("sampling", "uniform_random"))
    if sampling not in SAMPLING_MODES:
        raise UsageError(f"--sampling must be one of {'|'.join(SAMPLING_MODES)}")
    try:
        spec = SyntheticSpec(
            n=_ints(opts.get("n", 200), "--n")[0],
            x_range=(x_range[0], x_range[1]),
            mu=_floats(opts.get("mu", 0.0), "--mu")[0],
            sigma=_floats(opts.get("sigma", 0.1), "--sigma")[0],
            seed=_ints(opts.get("seed", 7), "--seed")[0],
            sampling=sampling,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    k_list = _ints(opts.get("k", (4, 8, 10)), "--k")
    result = knn_curve_benchmark(spec, k_list)

    order = np.argsort(result.x, kind="stable")
    header = ["x", "y_true", "y_noisy"] + [f"pred_k{k}" for k in k_list]
    y_true = curve_values(result.x)
    rows = []
    for i in order:
        rows.append(
            [float(result.x[i]), float(y_true[i]), float(result.y[i])]
            + [float(result.predictions[k][i]) for k in k_list]
        )
    dataio.write_csv(out / "appendix_a.csv", header, rows)
    dataio.write_json(
        out / "appendix_a_metrics.json",
        {
            "n": spec.n,
            "x_range": list(spec.x_range),
            "mu": spec.mu,
            "sigma": spec.sigma,
            "seed": spec.seed,
            "sampling": spec.sampling,
            "k_metrics": {
                str(k): {"rmse": result.errors[k][0], "mae": result.errors[k][1]}
                for k in k_list
            },
        },
    )


_HANDLERS = {
    "featurize": cmd_featurize,
    "analyze-similarity": cmd_analyze_similarity,
    "regress": cmd_regress,
    "dof": cmd_dof,
    "project": cmd_project,
    "appendix-a": cmd_appendix_a,
}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        opts = resolve_options(args)
        _HANDLERS[args.command](opts)
        return 0
    except UsageError as exc:
        print(f"error: usage: {exc}", file=sys.stderr)
        return 1
    except (CrysimError, np.linalg.LinAlgError) as exc:
        print(f"error: data: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
