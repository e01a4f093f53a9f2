"""Command-line driver for stochastic consensus clustering.

Usage: python -m cli.app [global flags] <subcommand> [options]
"""

import argparse
import logging
import os
import sys
from pathlib import Path
from typing import List, Optional

import numpy as np
import pandas as pd
from dotenv import load_dotenv
from pydantic import ValidationError

load_dotenv()
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

from balance import BalancedMatrix, sinkhorn_knopp
from cli.loaders import labels_to_result, load_data
from cli.reports import RunReport, describe_partition, export_histogram, write_membership, write_trace
from consensus import (
    consensus_sum,
    isolated_elements,
    knn_consensus,
    load_consensus,
    save_consensus,
    upper_triangle_values,
)
from core.matrix import stochastic_residual, sym_eigen
from datasets import baseball
from ensemble import ClusteringResult, EnsembleSpec, MemberSpec, clustering_errors, member_error_range, run_ensemble
from graph import PipelineConfig, run_pipeline
from sca import SCAConfig, run_cca, run_restarts
from uncouple import (
    lambda2_bound_check,
    perron_cluster,
    sigma_bound_check,
    sigma_sweep,
    stochastic_complement,
    uncoupling_measure,
)
from utils.config import get_settings
from utils.errors import BoundViolationError, ClusteringError, DomainError
from utils.matrix_io import read_matrix, write_matrix

logger = logging.getLogger(__name__)

# P itself is only balanced to --tol, so complements inherit that error
COMPLEMENT_TOL = 1e-8


def _out(args, name: str) -> Path:
    path = Path(args.out) / name
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def _load_dataset(args):
    if args.input == "baseball":
        return baseball.data_matrix(), None
    return load_data(args.input, args.orientation, args.label_column, not args.no_header)


def _load_truth(args) -> Optional[ClusteringResult]:
    if not getattr(args, "labels", None):
        return None
    return labels_to_result(pd.read_csv(args.labels).iloc[:, -1].astype(str).to_numpy())


def _ensemble_spec(args, settings) -> EnsembleSpec:
    return EnsembleSpec(
        members=[MemberSpec.parse(text) for text in args.member],
        seed_base=args.seed,
        nmf_max_iter=settings.nmf_max_iter,
        nmf_tol=settings.nmf_tol,
        kmeans_max_iter=settings.kmeans_max_iter,
    )


def _balanced(args, settings) -> BalancedMatrix:
    """Balance --consensus, or read an already balanced --balanced matrix."""
    if getattr(args, "balanced", None):
        P = np.atleast_2d(read_matrix(args.balanced)[0])
        return BalancedMatrix(P=P, d=None, iterations=0, residual=stochastic_residual(P))
    if not args.consensus:
        raise DomainError("Give --consensus FILE or --balanced FILE")
    return sinkhorn_knopp(load_consensus(args.consensus), tol=args.tol, max_iter=settings.sinkhorn_max_iter)


def _sca_config(args, settings) -> SCAConfig:
    return SCAConfig(
        k_override=args.k,
        stability_count=args.stability or settings.stability_count,
        max_iter=args.max_iter or settings.sca_max_iter,
        seed=args.seed,
        splitter=args.splitter,
        eigen_tol=settings.eigen_tol,
    )


def cmd_ensemble(args, settings) -> int:
    A, truth = _load_dataset(args)
    members = run_ensemble(A, _ensemble_spec(args, settings), workers=args.workers or settings.workers)
    labels = pd.DataFrame([m.labels for m in members], columns=[f"e{i + 1}" for i in range(A.n)])
    labels.insert(0, "member", [m.method for m in members])
    labels.to_csv(_out(args, "ensemble.csv"), index=False)
    save_consensus(_out(args, "consensus.txt"), consensus_sum(members))
    if truth is not None:
        low, high = member_error_range(members, truth)
        print(f"member_errors={low}-{high}")
    print(f"members={len(members)} consensus={_out(args, 'consensus.txt')}")
    return 0


def cmd_consensus(args, settings) -> int:
    frame = pd.read_csv(args.ensemble)
    frame = frame.drop(columns=[c for c in ("member",) if c in frame.columns])
    members = [labels_to_result(row) for row in frame.to_numpy()]
    S = consensus_sum(members)
    isolated_elements(S)
    save_consensus(_out(args, "consensus.txt"), S)
    print(f"n={S.n} r={S.r} consensus={_out(args, 'consensus.txt')}")
    return 0


def cmd_knn_consensus(args, settings) -> int:
    A, _ = _load_dataset(args)
    S = knn_consensus(A, args.kappa, args.metric, args.mode)
    save_consensus(_out(args, "consensus.txt"), S)
    print(f"n={S.n} kappa={args.kappa} mode={args.mode} consensus={_out(args, 'consensus.txt')}")
    return 0


def cmd_balance(args, settings) -> int:
    B = _balanced(args, settings)
    write_matrix(_out(args, "balanced.txt"), B.P, {"iterations": B.iterations})
    if B.d is None:
        print(f"iterations=0 residual={B.residual:.3e} scaling=unavailable")
        return 0
    write_matrix(_out(args, "scaling.txt"), B.d)
    print(f"iterations={B.iterations} residual={B.residual:.3e}")
    return 0


def cmd_eigen(args, settings) -> int:
    M, _ = read_matrix(args.matrix)
    spectrum = sym_eigen(np.atleast_2d(M), tol=settings.eigen_tol, max_sweeps=settings.eigen_max_sweeps)
    perron = perron_cluster(spectrum)
    write_matrix(_out(args, "eigenvalues.txt"), spectrum.eigenvalues)
    write_matrix(_out(args, "eigenvectors.txt"), spectrum.eigenvectors)
    print("eigenvalues=" + " ".join(f"{v:.6f}" for v in spectrum.eigenvalues))
    print(f"perron_k={perron.k} gap={perron.gap:.6f} sweeps={spectrum.sweeps}")
    return 0


def cmd_sca(args, settings) -> int:
    B = _balanced(args, settings)
    cfg = _sca_config(args, settings)
    summary = run_restarts(B, cfg, restarts=args.restarts or settings.restarts, workers=args.workers or settings.workers)
    top = summary.histogram[0]
    chosen = summary.results[top.first_restart]

    report = RunReport(
        detected_k=chosen.perron.k if chosen.perron else None,
        k_used=chosen.k_used,
        perron_gap=chosen.perron.gap if chosen.perron else None,
        stop_reason=chosen.stop_reason,
        iterations=chosen.iterations_run,
        histogram=[{"count": e.count, "partition": describe_partition(e.clustering)} for e in summary.histogram],
    )
    truth = _load_truth(args)
    if truth is not None:
        report.errors = clustering_errors(top.clustering, truth)

    write_membership(_out(args, "clusters.csv"), top.clustering)
    if args.trace:
        write_trace(_out(args, "trace.csv"), chosen.trace)
    report.write(args.out)
    print(report.to_text())
    return 0


def cmd_custom(args, settings) -> int:
    B = _balanced(args, settings)
    result = run_cca(
        B,
        target=args.target - 1,
        min_size=args.min,
        max_size=args.max,
        max_iter=args.max_iter or settings.sca_max_iter,
        closest_m=args.closest_m,
        k=args.k,
        splitter=args.splitter,
        eigen_tol=settings.eigen_tol,
    )
    members = [i + 1 for i in result.members]
    pd.DataFrame({"index": members}).to_csv(_out(args, "custom.csv"), index=False)
    if args.trace:
        write_trace(_out(args, "trace.csv"), result.trace)
    print(f"target={args.target} t={result.t} k={result.k_used} members={members}")
    return 0


def cmd_pipeline(args, settings) -> int:
    config = PipelineConfig(
        input=args.input,
        orientation=args.orientation,
        label_column=args.label_column,
        header=not args.no_header,
        consensus=args.consensus_kind,
        ensemble=_ensemble_spec(args, settings) if args.member else None,
        kappa=args.kappa,
        metric=args.metric,
        knn_mode=args.mode,
        consensus_path=args.consensus,
        sinkhorn_tol=args.tol,
        sinkhorn_max_iter=settings.sinkhorn_max_iter,
        sca=_sca_config(args, settings),
        restarts=args.restarts or settings.restarts,
        workers=args.workers or settings.workers,
        out_dir=args.out,
    )
    report = run_pipeline(config)
    print(report.to_text())
    return 0


def cmd_check(args, settings) -> int:
    """Verify the uncoupling bounds and complement properties on one consensus matrix."""
    S = load_consensus(args.consensus)
    B = sinkhorn_knopp(S, tol=args.tol, max_iter=settings.sinkhorn_max_iter)
    exact_limit = args.exact_limit or settings.exact_limit
    failures = []

    if S.kind == "ensemble-sum":
        d_max = float(B.d.max())
        ok = d_max <= 1.0 / np.sqrt(S.r) + 1e-12
        if not ok:
            failures.append("scaling_bound")
        print(f"scaling_bound d_max={d_max:.6g} limit={1.0 / np.sqrt(S.r):.6g} passed={ok}")

    if args.sweep:
        n1_values = list(range(1, S.n // 2 + 1))
    else:
        n1_values = [args.n1 or max(1, S.n // 2)]
    for n1 in n1_values:
        sigma_report = sigma_bound_check(S, B, n1, exact_limit)
        lambda_report = lambda2_bound_check(B, n1, exact_limit)
        # heuristic sigma values are upper estimates, so only exact runs can violate
        if sigma_report.exact and not sigma_report.passed:
            failures.append(f"sigma_bound n1={n1}")
        if lambda_report.required and not lambda_report.passed:
            failures.append(f"lambda2_bound n1={n1}")
        print(
            f"n1={n1} sigma_S={sigma_report.sigma_S:.6g} sigma_P={sigma_report.sigma_P:.6g} "
            f"sigma_bound={sigma_report.bound:.6g} passed={sigma_report.passed} exact={sigma_report.exact}"
        )
        print(
            f"n1={n1} |1-lambda2|={lambda_report.gap:.6g} bound={lambda_report.bound:.6g} "
            f"passed={lambda_report.passed} required={lambda_report.required}"
        )

    if args.sweep:
        for entry in sigma_sweep(S.S, exact_limit):
            print(f"sweep n1={entry.n1} sigma_S={entry.sigma:.6g} block={[i + 1 for i in entry.first_block]}")

    partition = uncoupling_measure(B.P, n1_values[0], exact_limit).minimizing_partition
    for block in range(2):
        complement = stochastic_complement(B.P, partition, block)
        ok = complement.residual <= COMPLEMENT_TOL
        if not ok:
            failures.append(f"complement block={block + 1}")
        print(f"complement block={block + 1} size={complement.C.shape[0]} residual={complement.residual:.3e} passed={ok}")

    if failures:
        raise BoundViolationError(f"{len(failures)} check(s) failed: {', '.join(failures)}", failures)
    logger.info("✅ All uncoupling checks passed")
    return 0


def cmd_hist(args, settings) -> int:
    S = load_consensus(args.consensus)
    values = upper_triangle_values(S)
    export_histogram(values, args.bins, _out(args, "histogram.csv"))
    print(f"values={values.size} bins={args.bins} histogram={_out(args, 'histogram.csv')}")
    return 0


def _add_data_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", "-i", required=True, help="CSV file, or 'baseball' for the built-in dataset")
    p.add_argument("--orientation", choices=["rows-elements", "rows-attributes"], default="rows-elements")
    p.add_argument("--label-column", default=None, help="Column holding truth labels (name or 0-based index)")
    p.add_argument("--no-header", action="store_true", help="CSV has no header line")


def _add_matrix_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--consensus", "-c", default=None, help="Consensus matrix file")
    p.add_argument("--balanced", default=None, help="Already balanced matrix file (skips balancing)")


def _add_sca_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--k", type=int, default=None, help="Cluster count (default: Perron cluster size)")
    p.add_argument("--stability", type=int, default=None, help="Identical clusterings required to stop")
    p.add_argument("--max-iter", type=int, default=None)
    p.add_argument("--splitter", choices=["gap", "kmeans"], default="gap")
    p.add_argument("--restarts", type=int, default=None)
    p.add_argument("--workers", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sca", description="Stochastic consensus clustering toolkit.")
    parser.add_argument("--seed", type=int, default=None, help="Seed (default: SCA_SEED or 0)")
    parser.add_argument("--out", "-o", default="out", help="Output directory [default: %(default)s]")
    parser.add_argument("--tol", type=float, default=None, help="Balancing tolerance (default: SCA_SINKHORN_TOL)")
    parser.add_argument("--log-level", default=None, help="Logging level (default: SCA_LOG_LEVEL)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ensemble", help="Run an NMF/k-means ensemble and sum it into a consensus matrix")
    _add_data_args(p)
    p.add_argument("--member", "-m", action="append", required=True, help="method:k:repetitions, e.g. nmf:2:50")
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(func=cmd_ensemble)

    p = sub.add_parser("consensus", help="Sum the members of a saved ensemble CSV")
    p.add_argument("--ensemble", "-e", required=True, help="ensemble.csv written by the ensemble command")
    p.set_defaults(func=cmd_consensus)

    p = sub.add_parser("knn-consensus", help="Build a kappa-nearest-neighbour consensus matrix")
    _add_data_args(p)
    p.add_argument("--kappa", type=int, required=True)
    p.add_argument("--metric", choices=["euclidean", "cosine"], default="euclidean")
    p.add_argument("--mode", choices=["intersection", "union"], default="intersection")
    p.set_defaults(func=cmd_knn_consensus)

    p = sub.add_parser("balance", help="Sinkhorn-Knopp balance a consensus matrix")
    _add_matrix_args(p)
    p.set_defaults(func=cmd_balance)

    p = sub.add_parser("eigen", help="Jacobi spectrum and Perron cluster of a symmetric matrix")
    p.add_argument("--matrix", required=True)
    p.set_defaults(func=cmd_eigen)

    p = sub.add_parser("sca", aliases=["run"], help="Stochastic clustering of a consensus matrix")
    _add_matrix_args(p)
    _add_sca_args(p)
    p.add_argument("--labels", default=None, help="CSV whose last column holds truth labels")
    p.add_argument("--trace", action="store_true", help="Also write trace.csv")
    p.set_defaults(func=cmd_sca)

    p = sub.add_parser("custom", help="Cluster around one target element")
    _add_matrix_args(p)
    p.add_argument("--target", type=int, required=True, help="1-based element index")
    p.add_argument("--min", type=int, required=True)
    p.add_argument("--max", type=int, required=True)
    p.add_argument("--closest-m", type=int, default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--max-iter", type=int, default=None)
    p.add_argument("--splitter", choices=["gap", "kmeans"], default="gap")
    p.add_argument("--trace", action="store_true")
    p.set_defaults(func=cmd_custom)

    p = sub.add_parser("pipeline", help="Data -> consensus -> balance -> spectrum -> clusters")
    p.add_argument("--input", "-i", default=None, help="CSV file, or 'baseball' for the built-in dataset")
    p.add_argument("--orientation", choices=["rows-elements", "rows-attributes"], default="rows-elements")
    p.add_argument("--label-column", default=None)
    p.add_argument("--no-header", action="store_true")
    p.add_argument("--consensus-kind", choices=["ensemble", "knn", "file"], default="ensemble")
    p.add_argument("--member", "-m", action="append", default=[], help="method:k:repetitions")
    p.add_argument("--kappa", type=int, default=None)
    p.add_argument("--metric", choices=["euclidean", "cosine"], default="euclidean")
    p.add_argument("--mode", choices=["intersection", "union"], default="intersection")
    p.add_argument("--consensus", "-c", default=None, help="Consensus file for --consensus-kind file")
    _add_sca_args(p)
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("check", help="Verify uncoupling bounds and complement properties")
    p.add_argument("--consensus", "-c", required=True)
    p.add_argument("--n1", type=int, default=None, help="Size of the first block (default: n // 2)")
    p.add_argument("--sweep", action="store_true", help="Check every n1 in 1..n // 2 and print the sigma sweep")
    p.add_argument("--exact-limit", type=int, default=None)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("hist", help="Histogram of off-diagonal consensus values")
    p.add_argument("--consensus", "-c", required=True)
    p.add_argument("--bins", type=int, default=20)
    p.set_defaults(func=cmd_hist)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        settings = get_settings()
    except ValueError as e:
        print(f"❌ {e}", file=sys.stderr)
        return 2

    logging.basicConfig(
        level=(args.log_level or settings.log_level).upper(),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    if args.seed is None:
        args.seed = settings.seed
    if args.tol is None:
        args.tol = settings.sinkhorn_tol

    try:
        return args.func(args, settings)
    except ValidationError as e:
        logger.error(f"❌ Invalid configuration: {e}")
        return 2
    except ClusteringError as e:
        logger.error(f"❌ {type(e).__name__}: {e}")
        return e.exit_code
    except ValueError as e:
        logger.error(f"❌ Invalid argument: {e}")
        return 2


if __name__ == "__main__":
    sys.exit(main())
