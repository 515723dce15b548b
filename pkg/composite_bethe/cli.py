from __future__ import annotations
from typing import Any, Dict, List, Optional, Sequence, Tuple
import argparse
import json
import os
import sys

from .config import Config, JobConfig
from .errors import ConfigError, GenericityError, RetryExhausted
from .logger import LEVELS, log, set_level
from .runner import VerificationRunner
from .types import Suite, Verdict

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_CONFIG = 2


def build_parser() -> argparse.ArgumentParser:
    defaults = Config()
    parser = argparse.ArgumentParser(prog="verify", description="Exact checks of composite GL(3) Bethe vector identities.")
    parser.add_argument("--config", help="JSON job config (schema version 1); other flags override its fields")
    parser.add_argument("--suite", action="append", default=None,
                        help="suite to run, repeatable or comma separated: " + ", ".join(s.value for s in Suite))
    parser.add_argument("--L", type=int, default=None, help="chain length")
    parser.add_argument("--split", default=None, help="split index L1 or 'sweep'")
    parser.add_argument("--a", type=int, default=None, help="largest a of the sweep")
    parser.add_argument("--b", type=int, default=None, help="largest b of the sweep")
    parser.add_argument("--c", default=None, help=f"model constant (default {defaults.c})")
    parser.add_argument("--samples", type=int, default=None, help="generic draws per instance")
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--out", default=None, help="report path (default $COMPOSITE_BETHE_OUT_DIR/report.json)")
    parser.add_argument("--max-L", dest="max_L", type=int, default=None, help=f"largest accepted chain (default {defaults.max_L})")
    parser.add_argument("--jobs", type=int, default=None, help=f"worker threads (default {defaults.max_parallel_checks})")
    parser.add_argument("--timings", action="store_true", help="record wall time per check")
    parser.add_argument("--log-level", dest="log_level", type=str.upper, choices=LEVELS, default=None,
                        help="overrides COMPOSITE_BETHE_LOG_LEVEL")
    return parser


def _suites(values: List[str]) -> List[str]:
    out: List[str] = []
    for v in values:
        out.extend(s.strip() for s in v.split(",") if s.strip())
    return out


def job_from_args(args: argparse.Namespace) -> JobConfig:
    doc: Dict[str, Any] = {}
    if args.config:
        loaded = JobConfig.from_json(args.config)
        doc = loaded.as_dict()
        doc.pop("schema_version")
        doc["out"] = loaded.out
    overrides = {
        "L": args.L,
        "a_max": args.a,
        "b_max": args.b,
        "c": args.c,
        "samples": args.samples,
        "seed": args.seed,
        "out": args.out,
        "max_L": args.max_L,
        "jobs": args.jobs,
    }
    doc.update({k: v for k, v in overrides.items() if v is not None})
    if args.split is not None:
        doc["split"] = args.split if args.split == "sweep" else _int(args.split, "split")
    if args.suite is not None:
        doc["suites"] = _suites(args.suite)
    if args.L is not None and "split" not in doc:
        doc["split"] = min(1, args.L)
    return JobConfig.from_dict(doc)


def _int(s: str, name: str) -> int:
    try:
        return int(s)
    except ValueError:
        raise ConfigError(f"{name} must be an integer or 'sweep', got {s!r}") from None


def run(job: JobConfig, config: Optional[Config] = None, timings: bool = False) -> Tuple[Dict[str, Any], int]:
    """Run the selected suites; the exit code is 0 only when nothing failed."""
    runner = VerificationRunner(job, config)
    records = runner.run()
    report = runner.report(records, timings=timings)
    failed = any(r.verdict == Verdict.FAIL for r in records)
    summary = report["summary"]
    log.info("checks: %d ok, %d fail, %d skipped", summary["ok"], summary["fail"], summary["skipped"])
    return report, EXIT_FAIL if failed else EXIT_OK


def write_report(report: Dict[str, Any], path: str) -> None:
    folder = os.path.dirname(path)
    if folder:
        os.makedirs(folder, exist_ok=True)
    with open(path, "w") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.log_level:
        set_level(args.log_level)
    try:
        job = job_from_args(args)
        report, code = run(job, timings=args.timings)
    except GenericityError as e:
        log.error("genericity violation: %s", e)
        print(json.dumps({"error": "genericity", "message": str(e), "report": e.report}), file=sys.stderr)
        return EXIT_CONFIG
    except (ConfigError, RetryExhausted) as e:
        log.error("invalid configuration: %s", e)
        print(json.dumps({"error": type(e).__name__, "message": str(e)}), file=sys.stderr)
        return EXIT_CONFIG
    path = job.out_path()
    write_report(report, path)
    print(f"Done. {report['summary']['total']} checks, report written to {path}")
    return code


if __name__ == "__main__":
    sys.exit(main())
