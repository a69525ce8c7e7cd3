"""
Command-line front end.

    cnmf2d generate  --outdir DIR [--K 10 --N 25 --rank 5 --L 2 --M 2 --seed 0]
    cnmf2d factorize V.csv --rank I --outdir DIR [--beta 1 --iters 300 ...]
    cnmf2d evaluate  V.csv FACTORS_DIR [--beta 1]
    cnmf2d simulate  --outdir DIR [--betas 0 1 2 --n-matrices 10 --n-inits 3 ...]

Exit codes: 0 success, 1 usage or input error, 2 numerical abort.
"""

import argparse
import json
import logging
import os
import sys

from . import __version__
from .matrix import DEFAULT_FLOOR, ShapeError, read_csv, write_csv
from .model import ModelDims, init_random, load_factors, normalize, save_factors
from .simulation import (
    PRNG,
    EnsembleError,
    ExperimentPlan,
    data_seed,
    gen_ground_truth,
    run_ensemble,
    timing_report,
    write_curves,
)
from .solver import NumericalAbort, SolverConfig, cost_at, solve

logger = logging.getLogger("cnmf2d")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def beta_tag(beta):
    return format(float(beta), "g")


def _positive_int(s):
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {s}")
    return v


def _nonneg_float(s):
    v = float(s)
    if not v >= 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative number, got {s}")
    return v


def _add_support(p):
    p.add_argument("--L", type=_positive_int, default=2, help="vertical (down-shift) support")
    p.add_argument("--M", type=_positive_int, default=2, help="horizontal (right-shift) support")


def _add_shape(p):
    p.add_argument("--K", type=_positive_int, default=10, help="visible variables (rows of V)")
    p.add_argument("--N", type=_positive_int, default=25, help="observations (columns of V)")
    p.add_argument("-I", "--rank", type=_positive_int, default=5, help="hidden variables")
    _add_support(p)


def build_parser():
    parser = _Parser(prog="cnmf2d", description="2D convolutional NMF with beta-divergence updates.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("generate", help="write a synthetic V and its ground-truth factors")
    _add_shape(g)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--outdir", required=True)

    f = sub.add_parser("factorize", help="fit factor stacks to a CSV matrix")
    f.add_argument("V", help="CSV matrix to factorize")
    f.add_argument("-I", "--rank", type=_positive_int, required=True)
    _add_support(f)
    f.add_argument("--beta", type=float, default=1.0)
    f.add_argument("--iters", type=_positive_int, default=300)
    f.add_argument("--tol", type=_nonneg_float, default=0.0)
    f.add_argument("--seed", type=int, default=0, help="seed of the random initialization")
    f.add_argument("--floor", type=_nonneg_float, default=DEFAULT_FLOOR)
    f.add_argument("--normalize", type=float, default=None, metavar="P",
                   help="rescale the returned factors to unit p-norm W components")
    f.add_argument("--legacy-kl", action="store_true", help="use the unshifted-U rules (beta=1)")
    f.add_argument("--outdir", required=True)

    e = sub.add_parser("evaluate", help="print D_beta(V || reconstruction)")
    e.add_argument("V")
    e.add_argument("factors", help="directory written by generate/factorize")
    e.add_argument("--beta", type=float, default=1.0)
    e.add_argument("--floor", type=_nonneg_float, default=DEFAULT_FLOOR)

    s = sub.add_parser("simulate", help="run the convergence ensemble and write mean/std curves")
    _add_shape(s)
    s.add_argument("--betas", type=float, nargs="+", default=[0.0, 1.0, 2.0])
    s.add_argument("--n-matrices", type=_positive_int, default=10)
    s.add_argument("--n-inits", type=_positive_int, default=3)
    s.add_argument("--iters", type=_positive_int, default=300)
    s.add_argument("--seed", type=int, default=0, help="master seed")
    s.add_argument("--floor", type=_nonneg_float, default=DEFAULT_FLOOR)
    s.add_argument("--timing-iters", type=int, default=100,
                   help="iterations timed per beta for timing.json (0 disables)")
    s.add_argument("--outdir", required=True)
    return parser


def _dims(args, K=None, N=None):
    return ModelDims(K=K or args.K, N=N or args.N, I=args.rank, L=args.L, M=args.M)


def _write_json(path, obj):
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def cmd_generate(args):
    dims = _dims(args)
    W, H, V = gen_ground_truth(dims, data_seed(args.seed, 0))
    save_factors(
        args.outdir, W, H,
        beta=None, seed=args.seed, iterations=0, floor=None,
        normalized=False, p=None, legacy=False, prng=PRNG,
    )
    write_csv(os.path.join(args.outdir, "V.csv"), V)
    print(f"wrote V ({dims.K}x{dims.N}) and ground-truth factors to {args.outdir}")
    return EXIT_OK


def cmd_factorize(args):
    V = read_csv(args.V)
    K, N = V.shape
    dims = ModelDims(K=K, N=N, I=args.rank, L=args.L, M=args.M)
    cfg = SolverConfig(
        beta=args.beta, max_iters=args.iters, tol=args.tol, floor=args.floor,
        legacy=args.legacy_kl, seed=args.seed,
    )
    W0, H0 = init_random(dims, args.seed)
    W, H, trace = solve(V, W0, H0, cfg)
    if args.normalize is not None:
        W, H = normalize(W, H, args.normalize)
    save_factors(
        args.outdir, W, H,
        beta=cfg.beta, seed=args.seed, iterations=trace.iterations_run, floor=cfg.floor,
        normalized=args.normalize is not None, p=args.normalize, legacy=cfg.legacy,
        prng=PRNG, final_cost=trace.final_cost, stopped_early=trace.stopped_early,
    )
    trace.write_csv(os.path.join(args.outdir, "trace.csv"))
    print(f"iterations {trace.iterations_run}, initial cost {trace.costs[0]:.6g}, "
          f"final cost {trace.final_cost:.6g}")
    return EXIT_OK


def cmd_evaluate(args):
    V = read_csv(args.V)
    W, H, _ = load_factors(args.factors)
    print(f"{cost_at(V, W, H, args.beta, args.floor):.17g}")
    return EXIT_OK


def cmd_simulate(args):
    plan = ExperimentPlan(
        dims=_dims(args), betas=tuple(args.betas), n_matrices=args.n_matrices,
        n_inits=args.n_inits, iters=args.iters, master_seed=args.seed, floor=args.floor,
    )
    os.makedirs(args.outdir, exist_ok=True)
    stats = run_ensemble(plan)
    for beta, st in stats.items():
        write_curves(os.path.join(args.outdir, f"curves_beta{beta_tag(beta)}.csv"), st)
    manifest = plan.to_dict()
    manifest.update(normalized=False, p=None, legacy=False)
    _write_json(os.path.join(args.outdir, "manifest.json"), manifest)
    if args.timing_iters > 0:
        timing_plan = ExperimentPlan(
            dims=plan.dims, betas=plan.betas, n_matrices=1, n_inits=1,
            iters=args.timing_iters, master_seed=plan.master_seed, floor=plan.floor,
        )
        report = timing_report(timing_plan)
        _write_json(
            os.path.join(args.outdir, "timing.json"),
            {beta_tag(b): r for b, r in report.items()},
        )
        for b, r in report.items():
            print(f"beta={beta_tag(b)}: {r['seconds_per_iter'] * 1e6:.1f} us/iter, "
                  f"ratio to beta=2: {r['ratio']:.3f}")
    print(f"wrote {len(stats)} curves files to {args.outdir}")
    return EXIT_OK


COMMANDS = {
    "generate": cmd_generate,
    "factorize": cmd_factorize,
    "evaluate": cmd_evaluate,
    "simulate": cmd_simulate,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return COMMANDS[args.command](args)
    except (NumericalAbort, EnsembleError) as exc:
        print(f"cnmf2d: numerical abort: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, ShapeError, OSError, KeyError) as exc:
        print(f"cnmf2d: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
