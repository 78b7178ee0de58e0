"""Command-line interface.

    stablesketch sketch --input train.txt --output train.sign --alpha 2 --k 8192
    stablesketch kernel --input small.txt --output K.csv --method cws --k 1024
    stablesketch verify --alpha 2,1,0+ --trials 20 --k 100000 --report report.json
    stablesketch bench --dim 10000 --nnz 100 --k 1024 --vectors 50

Exit status: 0 success, 1 validation failure, 2 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from . import keyed_rand
from .cws import DEFAULT_BUCKETS, CwsConfig, cws_corpus, encode_cws
from .dataset_io import l1_normalize, read_dataset, write_features
from .estimator import kernel_matrix
from .exceptions import NoClosedFormError
from .sign_projection import SketchConfig, encode_sign, project_sign, sketch_corpus
from .sparse import SparseVector
from .stable import ALPHA_ZERO_PLUS, parse_alpha
from .verify import report_json, run_verify

EXIT_OK, EXIT_INVALID, EXIT_VERIFY_FAILED = 0, 1, 2
DOMAIN_BENCH = 0x42454E43


class ValidationFailure(Exception):
    pass


def _alpha_label(text: str, alpha: float) -> str:
    if text.strip() == "0+":
        return f"{alpha} (surrogate for 0+)"
    return repr(alpha)


def _load(args):
    ds = read_dataset(args.input, dim=args.dim)
    if ds.dim < 1:
        raise ValidationFailure(f"{args.input}: dataset is empty")
    vectors = ds.vectors
    if args.normalize:
        vectors = []
        for lineno, v in zip(ds.linenos, ds.vectors):
            try:
                vectors.append(l1_normalize(v))
            except ValueError as exc:
                raise ValidationFailure(f"{args.input}:{lineno}: {exc}") from None
    return ds, vectors


def _check_rows(args, ds, vectors):
    for lineno, v in zip(ds.linenos, vectors):
        if v.nnz == 0:
            raise ValidationFailure(f"{args.input}:{lineno}: cannot sketch an all-zero vector")
        if args.method == "cws" and np.any(v.values < 0):
            raise ValidationFailure(f"{args.input}:{lineno}: negative value; cws needs nonnegative data")


def _sketch_all(args, vectors, dim, seed):
    if args.method == "sign":
        alpha = parse_alpha(args.alpha)
        cfg = SketchConfig(alpha, args.k, seed, dim)
        sketches = sketch_corpus(vectors, cfg, n_jobs=args.jobs)
        return sketches, [encode_sign(s) for s in sketches]
    cfg = CwsConfig(args.k, seed, dim)
    sketches = cws_corpus(vectors, cfg, n_jobs=args.jobs)
    return sketches, [encode_cws(s, args.buckets) for s in sketches]


def _summary(args, dim, seed) -> str:
    parts = [f"method={args.method}", f"D={dim}", f"k={args.k}", f"seed={seed}"]
    if args.method == "sign":
        parts.insert(3, f"alpha={_alpha_label(args.alpha, parse_alpha(args.alpha))}")
    else:
        parts.insert(3, f"buckets={args.buckets}")
    return " ".join(parts)


def cmd_sketch(args) -> int:
    ds, vectors = _load(args)
    _check_rows(args, ds, vectors)
    for rep in range(args.repeats):
        seed = args.seed + rep
        out = args.output if args.repeats == 1 else f"{args.output}.{rep}"
        _, encoded = _sketch_all(args, vectors, ds.dim, seed)
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            write_features(zip(ds.labels, encoded), fh)
        print(f"{_summary(args, ds.dim, seed)} n={len(ds)} -> {out}")
    return EXIT_OK


def cmd_kernel(args) -> int:
    ds, vectors = _load(args)
    _check_rows(args, ds, vectors)
    if not vectors:
        raise ValidationFailure(f"{args.input}: no examples")
    sketches, _ = _sketch_all(args, vectors, ds.dim, args.seed)
    km = kernel_matrix(sketches)
    with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
        for row in km.values:
            fh.write(",".join(repr(float(x)) for x in row) + "\n")
    print(f"{_summary(args, ds.dim, args.seed)} n={km.n} -> {args.output}")
    return EXIT_OK


def _verify_cases(args) -> list[str]:
    cases = []
    if args.method in ("sign", "all"):
        for text in args.alpha.split(","):
            text = text.strip()
            if text == "0+":
                cases.append("zero_plus")
                continue
            alpha = parse_alpha(text)
            if alpha == 2.0:
                cases.append("two")
            elif alpha == 1.0:
                cases.append("one")
            else:
                raise NoClosedFormError(f"no known closed-form collision probability for alpha={text}")
    if args.method in ("cws", "all"):
        cases.append("cws")
    return cases


def cmd_verify(args) -> int:
    cases = _verify_cases(args)
    if args.k < 1000:
        raise ValidationFailure("verify needs --k >= 1000")
    results = run_verify(cases, args.trials, args.k, args.seed)
    for r in results:
        alpha = "cws" if r.alpha is None else f"alpha={r.alpha}"
        status = "PASS" if r.passed else "FAIL"
        print(
            f"{status} {alpha:<12} pair={r.pair:<3} theory={r.theoretical:.5f} "
            f"empirical={r.empirical:.5f} tol={r.tolerance:.5f}"
        )
    report = report_json(results)
    report["seed"] = args.seed
    report["zero_plus_alpha"] = ALPHA_ZERO_PLUS
    if args.report:
        text = json.dumps(report, indent=2)
        if args.report == "-":
            print(text)
        else:
            with open(args.report, "w", encoding="utf-8") as fh:
                fh.write(text + "\n")
    print(f"{len(results) - report['n_failed']}/{len(results)} cases passed")
    return EXIT_OK if report["passed"] else EXIT_VERIFY_FAILED


def bench_vectors(dim: int, nnz: int, count: int, seed: int) -> list[SparseVector]:
    """``count`` synthetic vectors with ``nnz`` distinct coordinates each."""
    out = []
    for n in range(count):
        keys = keyed_rand.hash_stream(seed, DOMAIN_BENCH, n, np.arange(dim, dtype=np.int64))
        idx = np.sort(np.argsort(keys)[:nnz])
        vals = keyed_rand.exponential(seed, DOMAIN_BENCH, n, idx, 1) + 0.01
        out.append(SparseVector(dim, idx, vals))
    return out


def run_bench(dim: int, nnz: int, k: int, alpha: float, count: int, method: str = "sign", seed: int = 0) -> dict:
    if min(dim, nnz, k, count) < 1:
        raise ValueError("bench sizes must be positive")
    if nnz > dim:
        raise ValueError("nnz cannot exceed dim")
    vectors = bench_vectors(dim, nnz, count, seed)
    start = time.perf_counter()
    if method == "sign":
        cfg = SketchConfig(alpha, k, seed, dim)
        for v in vectors:
            project_sign(v, cfg)
    else:
        cws_corpus(vectors, CwsConfig(k, seed, dim))
    wall = time.perf_counter() - start
    return {
        "method": method,
        "dim": dim,
        "nnz": nnz,
        "k": k,
        "alpha": alpha if method == "sign" else None,
        "vectors": count,
        "wall_seconds": wall,
        "projections_per_second": count * k / wall if wall > 0 else float("inf"),
    }


def cmd_bench(args) -> int:
    result = run_bench(args.dim, args.nnz, args.k, parse_alpha(args.alpha), args.vectors, args.method, args.seed)
    print(json.dumps(result))
    return EXIT_OK


def _add_sketch_flags(p, output_help):
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True, help=output_help)
    p.add_argument("--method", choices=("sign", "cws"), default="sign")
    p.add_argument("--alpha", default="1", help='stability index in (0, 2], or "0+"')
    p.add_argument("--k", type=int, default=256)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--buckets", type=int, default=DEFAULT_BUCKETS)
    p.add_argument("--dim", type=int, default=None, help="override the feature dimension")
    p.add_argument("--normalize", action="store_true", help="l1-normalize each vector first")
    p.add_argument("--jobs", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stablesketch", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sketch", help="write encoded sketch features")
    _add_sketch_flags(p, "feature file to write")
    p.add_argument("--repeats", type=int, default=1, help="write N files with seeds seed..seed+N-1")
    p.set_defaults(func=cmd_sketch)

    p = sub.add_parser("kernel", help="write the collision-fraction matrix as CSV")
    _add_sketch_flags(p, "CSV file to write")
    p.set_defaults(func=cmd_kernel)

    p = sub.add_parser("verify", help="check collision rates against closed-form laws")
    p.add_argument("--alpha", default="2,1,0+", help="comma-separated list from {2, 1, 0+}")
    p.add_argument("--method", choices=("sign", "cws", "all"), default="all")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--k", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--report", default=None, help="JSON report path, or - for stdout")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="measure sketching throughput")
    p.add_argument("--dim", type=int, default=10_000)
    p.add_argument("--nnz", type=int, default=100)
    p.add_argument("--k", type=int, default=1024)
    p.add_argument("--alpha", default="1")
    p.add_argument("--vectors", type=int, default=20)
    p.add_argument("--method", choices=("sign", "cws"), default="sign")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "repeats", 1) < 1:
        print("error: --repeats must be at least 1", file=sys.stderr)
        return EXIT_INVALID
    try:
        return args.func(args)
    except (ValidationFailure, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
