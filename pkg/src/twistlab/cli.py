"""Command-line entry point: deterministic experiment orchestration.

Subcommands: sample, lemma, density, dioph, check.  Every run writes a CSV
(bit-reproducible given identical config and worker count) plus a JSON
sidecar echoing the full configuration; only the sidecar carries a
timestamp.  Exit codes: 0 success, 64 usage, 65 math-domain, 66 missing
input file, 2 I/O failure.
"""

from __future__ import annotations

import argparse
import datetime
import json
import os
import sys
from dataclasses import asdict, dataclass

import numpy as np

from . import __version__
from .diophantine import find_approx_sequence, from_quotients
from .experiments import check_suite, lemma_experiment, orbit_density
from .flow import CurveHandle, FlowSingularError
from .mapping import MappingClass
from .surface import (SurfaceRep, has_dense_image, is_irreducible,
                      relator_defect, sample)
from .words import Word

EXIT_OK = 0
EXIT_IO = 2
EXIT_USAGE = 64
EXIT_MATH = 65
EXIT_NOINPUT = 66


@dataclass
class RunConfig:
    genus: int = 2
    seed: int = 0
    q_max: int = 10 ** 7
    kh_threshold: float = 0.05
    hl_threshold: float = 0.05
    threads: int = 1
    out_dir: str = "."

    def validate(self):
        if self.genus < 2:
            raise ValueError("--genus must be >= 2")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("--seed must be a 64-bit unsigned integer")
        if not 1 <= self.q_max <= 10 ** 12:
            raise ValueError("--qmax must be in [1, 1e12]")
        if not (0 < self.kh_threshold <= 1 and 0 < self.hl_threshold <= 1):
            raise ValueError("thresholds must be in (0, 1]")
        if self.threads < 1:
            raise ValueError("--threads must be >= 1")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _sidecar(config: RunConfig, extra: dict) -> dict:
    return {"tool": "twistlab", "version": __version__,
            "config": asdict(config),
            "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
            **extra}


def _write_text(path: str, text: str):
    try:
        os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
        with open(path, "w") as fh:
            fh.write(text)
    except OSError as e:
        print(f"I/O error writing {path}: {e}", file=sys.stderr)
        sys.exit(EXIT_IO)


def _write_json(path: str, obj: dict):
    _write_text(path, json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _load_rep(path: str) -> SurfaceRep:
    if not os.path.exists(path):
        print(f"missing input file: {path}", file=sys.stderr)
        sys.exit(EXIT_NOINPUT)
    try:
        with open(path) as fh:
            return SurfaceRep.from_json(json.load(fh))
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as e:
        print(f"cannot read representation from {path}: {e}", file=sys.stderr)
        sys.exit(EXIT_NOINPUT)


def _out_path(config: RunConfig, name: str) -> str:
    return os.path.join(config.out_dir, name)


def cmd_sample(config: RunConfig, args) -> int:
    rep = sample(config.genus, np.random.default_rng(config.seed))
    out = args.out or _out_path(config, f"rep_g{config.genus}_s{config.seed}.json")
    _write_json(out, rep.to_json())
    defect = relator_defect(rep)
    irr = is_irreducible(rep)
    dense = has_dense_image(rep)
    print(f"wrote {out}")
    print(f"relator defect {defect:.3e}  irreducible {irr}  dense-image {dense}")
    return EXIT_OK


def cmd_lemma(config: RunConfig, args) -> int:
    rep = _load_rep(args.rep)
    if rep.genus != config.genus and args.genus_given:
        print("warning: --genus ignored, using the rep file's genus", file=sys.stderr)
    try:
        gamma = CurveHandle.parse(args.gamma, rep.genus)
        phi = MappingClass.parse(rep.genus, args.phi)
    except ValueError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_USAGE
    try:
        report = lemma_experiment(rep, gamma, phi, config.q_max,
                                  config.kh_threshold, config.hl_threshold,
                                  rep_seed=config.seed)
    except FlowSingularError as e:
        print(f"math domain error: {e}", file=sys.stderr)
        return EXIT_MATH
    prefix = args.out or _out_path(config, "lemma")
    _write_text(prefix + ".csv", report.to_csv())
    _write_json(prefix + ".json", _sidecar(config, report.sidecar()))
    flag = " (degenerate pair)" if report.degenerate else ""
    print(f"wrote {prefix}.csv ({len(report.rows)} rows){flag}")
    if report.rows:
        best = min(r.d for r in report.rows)
        print(f"alpha {report.alpha:.6f}  beta {report.beta:.6f}  best d {best:.3e}")
    else:
        print(f"score floors: kh {report.kh_floor:.4f}  hl {report.hl_floor:.4f}")
    return EXIT_OK


def cmd_density(config: RunConfig, args) -> int:
    rep = _load_rep(args.rep)
    witness = None
    if args.mode == "normal":
        try:
            witness = MappingClass.parse(rep.genus, args.witness or "Tb1")
        except ValueError as e:
            print(f"parse error: {e}", file=sys.stderr)
            return EXIT_USAGE
    try:
        obs = None
        if args.observables:
            parts = args.observables.split(",")
            if len(parts) != 2:
                raise ValueError("--observables needs two comma-separated words")
            obs = (Word.parse(parts[0]), Word.parse(parts[1]))
    except ValueError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_USAGE
    report = orbit_density(rep, args.steps, config.seed, mode=args.mode,
                           witness=witness, grid=args.grid, observables=obs,
                           chains=config.threads)
    prefix = args.out or _out_path(config, "density")
    _write_text(prefix + ".csv", report.to_csv())
    _write_json(prefix + ".json", _sidecar(config, report.sidecar()))
    print(f"wrote {prefix}.csv  final occupancy {report.occupancy:.4f} "
          f"({report.skipped} singular steps skipped)")
    return EXIT_OK


def cmd_dioph(config: RunConfig, args) -> int:
    try:
        if args.quotients:
            qs = [int(t) for t in args.quotients.split(",") if t.strip()]
            alpha = from_quotients(qs)
        elif args.alpha is not None:
            alpha = args.alpha
        else:
            print("dioph needs --alpha or --quotients", file=sys.stderr)
            return EXIT_USAGE
        beta = args.beta if args.beta is not None else alpha
        seq = find_approx_sequence(alpha, beta, config.q_max,
                                   config.kh_threshold, config.hl_threshold,
                                   exhaustive=args.exhaustive)
    except ValueError as e:
        print(f"invalid input: {e}", file=sys.stderr)
        return EXIT_USAGE
    out = args.out or _out_path(config, "dioph.csv")
    lines = ["q,kh_score,hl_score"]
    for q, kh, hl in seq.entries:
        lines.append(f"{q},{kh!r},{hl!r}")
    _write_text(out, "\n".join(lines) + "\n")
    _write_json(os.path.splitext(out)[0] + ".json", _sidecar(config, {
        "alpha": alpha, "beta": beta, "entries": len(seq.entries),
        "kh_floor": seq.kh_floor, "hl_floor": seq.hl_floor,
        "candidates_scanned": seq.candidates_scanned,
        "exhaustive": seq.exhaustive}))
    print(f"wrote {out} ({len(seq.entries)} entries; floors kh {seq.kh_floor:.4f}"
          f" hl {seq.hl_floor:.4f})")
    return EXIT_OK


def cmd_check(config: RunConfig, args) -> int:
    report = check_suite(config.genus, args.trials,
                         np.random.default_rng(config.seed))
    print(report.summary())
    if args.out:
        _write_json(args.out, _sidecar(config, report.sidecar()))
    return EXIT_OK if report.all_passed else 1


def build_parser() -> _Parser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--genus", type=int, default=2)
    shared.add_argument("--seed", type=int, default=0)
    shared.add_argument("--threads", type=int,
                        default=int(os.environ.get("TWISTLAB_THREADS", "1")),
                        help="worker chains (part of the determinism contract)")
    shared.add_argument("--out-dir", default=".")
    shared.add_argument("--qmax", type=int, default=10 ** 7)
    shared.add_argument("--kh", type=float, default=0.05, help="kh_score threshold")
    shared.add_argument("--hl", type=float, default=0.05, help="hl_score threshold")

    p = _Parser(prog="twistlab",
                description="SU(2) surface-group character experiments: "
                            "twist flows, Dehn twists, Diophantine twist powers")
    sub = p.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("sample", parents=[shared],
                        help="sample a representation on the relator variety")
    ps.add_argument("-o", "--out")

    pl = sub.add_parser("lemma", parents=[shared],
                        help="twist-power convergence experiment")
    pl.add_argument("--rep", required=True)
    pl.add_argument("--gamma", default="a1")
    pl.add_argument("--phi", default="Tb1")
    pl.add_argument("-o", "--out")

    pd = sub.add_parser("density", parents=[shared],
                        help="orbit density random walk")
    pd.add_argument("--rep", required=True)
    pd.add_argument("--steps", type=int, default=100_000)
    pd.add_argument("--mode", choices=("full", "normal"), default="full")
    pd.add_argument("--witness", help="witness mapping class for normal mode")
    pd.add_argument("--grid", type=int, default=32)
    pd.add_argument("--observables", help="two comma-separated curve words")
    pd.add_argument("-o", "--out")

    pq = sub.add_parser("dioph", parents=[shared],
                        help="Diophantine approximation search")
    pq.add_argument("--alpha", type=float)
    pq.add_argument("--beta", type=float)
    pq.add_argument("--quotients", help="comma-separated continued fraction quotients")
    pq.add_argument("--exhaustive", action="store_true")
    pq.add_argument("-o", "--out")

    pc = sub.add_parser("check", parents=[shared],
                        help="run the identity/relation check suite")
    pc.add_argument("--trials", type=int, default=100)
    pc.add_argument("-o", "--out")
    return p


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    parser = build_parser()
    args = parser.parse_args(argv)
    args.genus_given = any(a.startswith("--genus") for a in argv)
    config = RunConfig(genus=args.genus, seed=args.seed, q_max=args.qmax,
                       kh_threshold=args.kh, hl_threshold=args.hl,
                       threads=args.threads, out_dir=args.out_dir)
    try:
        config.validate()
    except ValueError as e:
        print(f"invalid configuration: {e}", file=sys.stderr)
        return EXIT_USAGE
    handlers = {"sample": cmd_sample, "lemma": cmd_lemma,
                "density": cmd_density, "dioph": cmd_dioph, "check": cmd_check}
    return handlers[args.command](config, args)


if __name__ == "__main__":
    sys.exit(main())
