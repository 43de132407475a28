"""``dnascan`` command-line front end.

Subcommands ``count``, ``locate`` and ``bench`` share one option set.
Errors are reported as a single ``dnascan: error: <Kind>: <message>``
line on stderr with a non-zero exit status.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import statistics
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from .automaton import Automaton, compile_patterns
from .errors import DnaScanError, InternalError
from .ingest import FORMATS, expand_alternations, load_sequence, parse_pattern_file
from .scanner import ScanReport, scan_parallel

DEFAULT_LANES = 16
DEFAULT_REPS = 20
THREADS_ENV = "DNASCAN_THREADS"


class UsageError(DnaScanError):
    kind = "UsageError"


@dataclass
class RunConfig:
    command: str
    patterns: str
    input: str
    format: str = "fasta"
    threads: int = 1
    lanes: int = DEFAULT_LANES
    reps: int = DEFAULT_REPS
    output: str = "text"
    position: str = "start"
    record_separator: bool = False
    affinity: str | None = None
    sweep: list[int] = field(default_factory=list)
    speedup: bool = False

    def validate(self) -> None:
        for name in ("threads", "lanes", "reps"):
            if getattr(self, name) < 1:
                raise UsageError(f"--{name} must be >= 1")
        if any(p < 1 for p in self.sweep):
            raise UsageError("--sweep entries must be >= 1")


def default_threads() -> int:
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"{THREADS_ENV}={env!r} is not an integer") from None
    return os.cpu_count() or 1


def _prepare(config: RunConfig):
    config.validate()
    pset = expand_alternations(parse_pattern_file(config.patterns))
    seq = load_sequence(config.input, config.format, record_separator=config.record_separator)
    aut = compile_patterns(pset)
    return aut, seq


def _config_dict(config: RunConfig, aut: Automaton, n: int, threads: int) -> dict:
    return {
        "command": config.command,
        "threads": threads,
        "lanes": config.lanes,
        "m": aut.m,
        "n": n,
        "input": config.input,
        "patterns": config.patterns,
        "format": config.format,
        "affinity": config.affinity,
    }


def _results_dict(aut: Automaton, report: ScanReport) -> dict:
    return {
        "total": report.total_matches,
        "per_pattern": [
            {"pattern": pat.decode(), "count": int(c)}
            for pat, c in zip(aut.patterns, report.counts)
        ],
    }


def _perf_dict(runs: list[float], delta_ops: int) -> dict:
    return {
        "runs": runs,
        "mean": statistics.fmean(runs),
        "min": min(runs),
        "max": max(runs),
        "stddev": statistics.pstdev(runs),
        "median": statistics.median(runs),
        "delta_ops": delta_ops,
    }


def run_count(config: RunConfig) -> tuple[int, dict]:
    aut, seq = _prepare(config)
    report = scan_parallel(aut, seq.data, config.threads, config.lanes, locate=False)
    return 0, {
        "config": _config_dict(config, aut, seq.n, config.threads),
        "results": _results_dict(aut, report),
        "perf": _perf_dict([report.wall_time], report.delta_ops),
    }


def run_locate(config: RunConfig) -> tuple[int, dict]:
    aut, seq = _prepare(config)
    report = scan_parallel(aut, seq.data, config.threads, config.lanes, locate=True)
    shift = aut.m - 1 if config.position == "end" else 0
    results = _results_dict(aut, report)
    results["position"] = config.position
    results["matches"] = [
        {"position": int(s) + shift, "pattern": aut.patterns[int(p)].decode()}
        for s, p in zip(*report.matches)
    ]
    return 0, {
        "config": _config_dict(config, aut, seq.n, config.threads),
        "results": results,
        "perf": _perf_dict([report.wall_time], report.delta_ops),
    }


def _bench_one(aut: Automaton, data: bytes, threads: int, lanes: int, reps: int):
    scan_parallel(aut, data, threads, lanes, locate=False)  # warm-up
    runs = []
    first: ScanReport | None = None
    for _ in range(reps):
        t0 = time.perf_counter()
        report = scan_parallel(aut, data, threads, lanes, locate=False)
        runs.append(time.perf_counter() - t0)
        if first is None:
            first = report
        elif not np.array_equal(first.counts, report.counts):
            raise InternalError(f"counts changed between repetitions at p={threads}")
    return first, runs


def run_bench(config: RunConfig) -> tuple[int, dict]:
    """Warm-up plus ``reps`` timed runs per thread count.

    Returns one row per entry of ``sweep`` (or just ``threads``).
    """
    aut, seq = _prepare(config)
    thread_counts = config.sweep or [config.threads]
    rows = []
    measured: dict[int, list[float]] = {}
    for p in thread_counts:
        report, runs = _bench_one(aut, seq.data, p, config.lanes, config.reps)
        measured[p] = runs
        rows.append(
            {
                "config": _config_dict(config, aut, seq.n, p) | {"reps": config.reps},
                "results": _results_dict(aut, report),
                "perf": _perf_dict(runs, report.delta_ops),
            }
        )
    if len({json.dumps(r["results"]) for r in rows}) > 1:
        raise InternalError("counts differ between thread counts")
    if config.speedup:
        if 1 not in measured:
            _, measured[1] = _bench_one(aut, seq.data, 1, config.lanes, config.reps)
        base = statistics.fmean(measured[1])
        for row in rows:
            row["perf"]["speedup"] = base / row["perf"]["mean"]
    return 0, {"sweep": rows}


# -- output formatting --------------------------------------------------------

BENCH_COLUMNS = (
    "threads", "lanes", "reps", "m", "n", "total", "delta_ops",
    "mean", "min", "max", "stddev", "median", "speedup", "runs",
)


def _bench_row(row: dict) -> dict:
    cfg, perf = row["config"], row["perf"]
    return {
        "threads": cfg["threads"],
        "lanes": cfg["lanes"],
        "reps": cfg["reps"],
        "m": cfg["m"],
        "n": cfg["n"],
        "total": row["results"]["total"],
        "delta_ops": perf["delta_ops"],
        "mean": repr(perf["mean"]),
        "min": repr(perf["min"]),
        "max": repr(perf["max"]),
        "stddev": repr(perf["stddev"]),
        "median": repr(perf["median"]),
        "speedup": repr(perf["speedup"]) if "speedup" in perf else "",
        "runs": ";".join(repr(t) for t in perf["runs"]),
    }


def format_report(command: str, report: dict, output: str) -> str:
    if output == "json":
        return json.dumps(report, indent=2) + "\n"
    buf = io.StringIO()
    if command == "bench":
        if output == "csv":
            writer = csv.DictWriter(buf, fieldnames=BENCH_COLUMNS, lineterminator="\n")
            writer.writeheader()
            for row in report["sweep"]:
                writer.writerow(_bench_row(row))
        else:
            buf.write("threads\tlanes\treps\ttotal\tmean_s\tmedian_s\tmin_s\tmax_s\tstddev_s\tspeedup\n")
            for row in report["sweep"]:
                r = _bench_row(row)
                speed = f"{row['perf']['speedup']:.3f}" if r["speedup"] else "-"
                perf = row["perf"]
                buf.write(
                    f"{r['threads']}\t{r['lanes']}\t{r['reps']}\t{r['total']}\t"
                    f"{perf['mean']:.6f}\t{perf['median']:.6f}\t{perf['min']:.6f}\t"
                    f"{perf['max']:.6f}\t{perf['stddev']:.6f}\t{speed}\n"
                )
        return buf.getvalue()
    results = report["results"]
    if command == "locate":
        if output == "csv":
            writer = csv.writer(buf, lineterminator="\n")
            writer.writerow(["position", "pattern"])
            for mt in results["matches"]:
                writer.writerow([mt["position"], mt["pattern"]])
        else:
            for mt in results["matches"]:
                buf.write(f"{mt['position']} {mt['pattern']}\n")
        return buf.getvalue()
    if output == "csv":
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["pattern", "count"])
        for row in results["per_pattern"]:
            writer.writerow([row["pattern"], row["count"]])
        writer.writerow(["total", results["total"]])
    else:
        for row in results["per_pattern"]:
            buf.write(f"{row['pattern']}\t{row['count']}\n")
        buf.write(f"total\t{results['total']}\n")
    return buf.getvalue()


# -- argument parsing ---------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(message)


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated integer list: {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dnascan", description="Multi-pattern exact DNA matching.")
    parser.add_argument("command", choices=("count", "locate", "bench"))
    parser.add_argument("--patterns", required=True, metavar="FILE")
    parser.add_argument("--input", required=True, metavar="FILE")
    parser.add_argument("--format", choices=FORMATS, default="fasta")
    parser.add_argument("--threads", type=int, default=None, metavar="P")
    parser.add_argument("--lanes", type=int, default=DEFAULT_LANES, metavar="V")
    parser.add_argument("--reps", type=int, default=DEFAULT_REPS, metavar="R")
    fmt = parser.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="output", action="store_const", const="json")
    fmt.add_argument("--csv", dest="output", action="store_const", const="csv")
    parser.add_argument("--position", choices=("start", "end"), default="start")
    parser.add_argument("--record-separator", action="store_true")
    parser.add_argument("--affinity", default=None, help="echoed into reports only")
    parser.add_argument("--sweep", type=_int_list, default=[], metavar="P1,P2,...")
    parser.add_argument("--speedup", action="store_true", help="bench: add p=1 speedup")
    return parser


def parse_config(argv: list[str] | None = None) -> RunConfig:
    ns = build_parser().parse_args(argv)
    return RunConfig(
        command=ns.command,
        patterns=ns.patterns,
        input=ns.input,
        format=ns.format,
        threads=ns.threads if ns.threads is not None else default_threads(),
        lanes=ns.lanes,
        reps=ns.reps,
        output=ns.output or "text",
        position=ns.position,
        record_separator=ns.record_separator,
        affinity=ns.affinity,
        sweep=ns.sweep,
        speedup=ns.speedup,
    )


COMMANDS = {"count": run_count, "locate": run_locate, "bench": run_bench}


def _diagnose(kind: str, message: str) -> None:
    flat = " ".join(str(message).split())
    print(f"dnascan: error: {kind}: {flat}", file=sys.stderr)


def main(argv: list[str] | None = None) -> int:
    try:
        config = parse_config(argv)
        status, report = COMMANDS[config.command](config)
    except UsageError as exc:
        _diagnose(exc.kind, exc)
        return 2
    except InternalError as exc:
        _diagnose(exc.kind, exc)
        return 3
    except DnaScanError as exc:
        _diagnose(exc.kind, exc)
        return 1
    except OSError as exc:
        _diagnose("IoError", f"{exc.filename or ''}: {exc.strerror or exc}")
        return 1
    sys.stdout.write(format_report(config.command, report, config.output))
    return status


if __name__ == "__main__":
    sys.exit(main())
