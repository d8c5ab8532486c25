"""Command line: ``sample`` one instance, ``compare`` modes over a corpus, ``hist`` C(x)."""

from __future__ import annotations

import argparse
import csv
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .cnf import ParseError, read_dimacs, read_samples, write_samples
from .diversity import CompressorConfig, cx_distribution, write_histogram_csv
from .loop import Mode, SnapConfig, Status, run_mode
from .metrics import SuiteReport

log = logging.getLogger("snapsat")

EXIT_OK, EXIT_ERROR, EXIT_UNSAT, EXIT_TIMEOUT = 0, 1, 2, 3
MODE_ORDER = (Mode.SNAP, Mode.XOR_ONLY, Mode.SOLVER_ONLY)
COMPARE_COLUMNS = ("instance", "mode", "suite_size", "credibility", "uniqueness", "ncd",
                   "entropy_mean", "t_generate", "t_verify", "t_repair", "t_select",
                   "t_total", "status")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


@dataclass
class BenchmarkRun:
    instance: Path
    mode: Mode
    config: SnapConfig
    report: SuiteReport | None
    exit_status: int
    error: str = ""


def exit_code(status: str) -> int:
    return {Status.UNSAT.value: EXIT_UNSAT, Status.TIMEOUT.value: EXIT_TIMEOUT}.get(status, EXIT_OK)


def _add_run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--suite-size", type=int, default=100, help="target suite size")
    p.add_argument("--seeds", type=int, default=8, help="solver models to seed the XOR pool")
    p.add_argument("--batch", type=int, default=32, help="candidates examined per iteration")
    p.add_argument("--max-level", type=int, default=6, help="max deltas combined per candidate")
    p.add_argument("--budget-steps", type=int, default=200_000, help="step budget per solver/repair call")
    p.add_argument("--wall-secs", type=float, default=None, help="wall-clock cap for the whole run")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--compressor", choices=("zlib", "bz2", "lzma"), default="zlib")
    p.add_argument("--compress-level", type=int, default=9)
    p.add_argument("--clock", choices=("wall", "steps"), default="wall",
                   help="report phase costs in seconds or in deterministic work units")


def _config(args, mode: Mode) -> SnapConfig:
    return SnapConfig(
        target_size=args.suite_size, seeds=args.seeds, batch=args.batch,
        max_level=args.max_level, budget_steps=args.budget_steps, wall_secs=args.wall_secs,
        seed=args.seed, compressor=CompressorConfig(args.compressor, args.compress_level),
        mode=mode, clock=args.clock,
    )


def run_instance(path: Path, cfg: SnapConfig, out_dir: Path | None = None) -> BenchmarkRun:
    """Run one (instance, mode); writes samples and report when ``out_dir`` is given."""
    try:
        f = read_dimacs(path)
    except (OSError, ParseError, UnicodeDecodeError) as exc:
        return BenchmarkRun(path, cfg.mode, cfg, None, EXIT_ERROR, f"{path}: {exc}")
    members, report = run_mode(f, cfg)
    if out_dir is not None:
        out_dir.mkdir(parents=True, exist_ok=True)
        write_samples(out_dir / f"{f.name}.samples", members)
        (out_dir / f"{f.name}.report.json").write_text(report.to_json(), encoding="utf-8")
    return BenchmarkRun(path, cfg.mode, cfg, report, exit_code(report.status))


def cmd_sample(args) -> int:
    path = Path(args.file)
    if not path.is_file():
        print(f"error: no such file: {path}", file=sys.stderr)
        return EXIT_ERROR
    try:
        cfg = _config(args, Mode(args.mode))
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    res = run_instance(path, cfg, Path(args.out))
    if res.report is None:
        print(f"error: {res.error}", file=sys.stderr)
        return EXIT_ERROR
    r = res.report
    print(f"{r.formula_name}: mode={r.mode} status={r.status} size={r.suite_size} "
          f"credibility={r.credibility:.3f} uniqueness={r.uniqueness:.3f} ncd={r.ncd:.4f} "
          f"entropy={r.entropy_mean:.3f}")
    return res.exit_status


def _row(res: BenchmarkRun) -> dict:
    row = dict.fromkeys(COMPARE_COLUMNS, "")
    row["instance"] = res.instance.stem
    row["mode"] = res.mode.value
    r = res.report
    if r is None:
        row["status"] = "error"
        return row
    t = r.timings
    row.update(suite_size=r.suite_size, credibility=r.credibility, uniqueness=r.uniqueness,
               ncd=r.ncd, entropy_mean=r.entropy_mean, t_generate=t.generate,
               t_verify=t.verify, t_repair=t.repair, t_select=t.select, t_total=t.total,
               status=r.status)
    return row


def _job(item):
    path, cfg, out_dir = item
    return run_instance(path, cfg, out_dir)


def cmd_compare(args) -> int:
    corpus = Path(args.dir)
    if not corpus.is_dir():
        print(f"error: not a directory: {corpus}", file=sys.stderr)
        return EXIT_ERROR
    try:
        wanted = {Mode(m.strip()) for m in args.modes.split(",") if m.strip()}
        modes = [m for m in MODE_ORDER if m in wanted]
        configs = {m: _config(args, m) for m in modes}
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    instances = sorted(corpus.glob("*.cnf"), key=lambda p: p.name)
    jobs = []
    for inst in instances:
        for m in modes:
            run_dir = out / "runs" / m.value if args.save_runs else None
            jobs.append((inst, configs[m], run_dir))
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as ex:
            results = list(ex.map(_job, jobs))
    else:
        results = [_job(j) for j in jobs]
    rows = [_row(r) for r in results]
    for r in results:
        if r.error:
            log.warning(r.error)
    csv_path = out / "compare.csv"
    with open(csv_path, "w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, fieldnames=COMPARE_COLUMNS, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    print(f"wrote {csv_path} ({len(rows)} rows)")
    if args.plot and rows:
        from .plotting import plot_compare
        print(f"wrote {plot_compare(rows, out / 'compare.png')}")
    return EXIT_OK


def cmd_hist(args) -> int:
    path = Path(args.samples)
    try:
        members = read_samples(path)
    except (OSError, ValueError) as exc:
        print(f"error: {path}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if not members:
        print(f"error: {path}: no samples", file=sys.stderr)
        return EXIT_ERROR
    cfg = CompressorConfig(args.compressor, args.compress_level)
    edges, counts = cx_distribution(members, cfg, bins=args.bins)
    out = Path(args.out)
    write_histogram_csv(out, edges, counts)
    print(f"wrote {out} ({len(counts)} bins, {int(counts.sum())} members)")
    if args.plot is not None:
        from .plotting import plot_cx_histogram
        png = Path(args.plot) if args.plot else out.with_suffix(".png")
        print(f"wrote {plot_cx_histogram(edges, counts, png, title=path.stem)}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="snapsat", description="Small, diverse, valid solution suites for CNF formulas.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("sample", help="build a suite for one .cnf file")
    s.add_argument("file")
    s.add_argument("--mode", choices=[m.value for m in MODE_ORDER], default="snap")
    s.add_argument("--out", default=".", help="output directory")
    _add_run_flags(s)
    s.set_defaults(func=cmd_sample)

    c = sub.add_parser("compare", help="run modes over every .cnf in a directory")
    c.add_argument("dir")
    c.add_argument("--modes", default=",".join(m.value for m in MODE_ORDER))
    c.add_argument("--out", default=".", help="directory for compare.csv")
    c.add_argument("--jobs", type=int, default=int(os.environ.get("XORSAT_JOBS", "1")))
    c.add_argument("--save-runs", action="store_true",
                   help="also write samples and reports under OUT/runs/<mode>/")
    c.add_argument("--plot", action="store_true", help="render compare.png next to the CSV")
    _add_run_flags(c)
    c.set_defaults(func=cmd_compare)

    h = sub.add_parser("hist", help="C(x) histogram of a samples file")
    h.add_argument("samples")
    h.add_argument("--bins", type=int, default=20)
    h.add_argument("--out", default="hist.csv")
    h.add_argument("--compressor", choices=("zlib", "bz2", "lzma"), default="zlib")
    h.add_argument("--compress-level", type=int, default=9)
    h.add_argument("--plot", nargs="?", const="", default=None, metavar="PNG",
                   help="render the histogram (default path: OUT with .png suffix)")
    h.set_defaults(func=cmd_hist)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    if getattr(args, "bins", 1) < 1:
        print("error: --bins must be >= 1", file=sys.stderr)
        return EXIT_ERROR
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
