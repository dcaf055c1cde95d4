"""Command-line front end: `toricstab {check,stable,stabilize,render}`."""
from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import dim2, ndim
from .fan import (Fan, Infeasible, classify_fan, is_complete, is_simplicial,
                  projectivity_certificate, validate_fan)
from .monomial import STABLE, UNKNOWN, UNSTABLE, MonomialMap, check_1stable

EXIT_OK, EXIT_IO, EXIT_NEGATIVE, EXIT_UNKNOWN = 0, 1, 2, 3
MODES = ("2d", "nd", "iterate", "thmB")


class UsageError(Exception):
    pass


@dataclass
class JobSpec:
    command: str
    fan: str = None
    matrix: str = None
    mode: str = "2d"
    n_max: int = 200
    retry_budget: int = 60
    seed: int = 0
    symmetric: bool = False
    eigenlines: bool = False
    out: str = None
    extra: dict = field(default_factory=dict)

    @classmethod
    def from_dict(cls, d, base=Path(".")):
        d = dict(d)
        for k in ("fan", "matrix", "out"):
            if d.get(k):
                d[k] = str(base / d[k])
        known = {k: d.pop(k) for k in list(d) if k in cls.__dataclass_fields__}
        return cls(extra=d, **known)


# ------------------------------------------------------------ file I/O

def dump_json(obj) -> str:
    """Canonical serialization used for every file the CLI writes."""
    return json.dumps(obj) + "\n"


def _read_json(path):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON ({exc.msg})") from exc


def parse_fan(d) -> Fan:
    try:
        f = Fan.from_dict(d)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"malformed fan JSON: {exc}") from exc
    if not f.rays:
        raise UsageError("fan has no rays")
    return f


def serialize_fan(f: Fan) -> str:
    return dump_json(f.to_dict())


def load_fan(path) -> Fan:
    return parse_fan(_read_json(path))


def load_matrix(path) -> MonomialMap:
    d = _read_json(path)
    entries = d.get("entries") if isinstance(d, dict) else d
    try:
        phi = MonomialMap(entries)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"malformed matrix JSON: {exc}") from exc
    if isinstance(d, dict) and d.get("rank", phi.rank) != phi.rank:
        raise UsageError("matrix rank field disagrees with entries")
    return phi


def _write(path, text):
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror}") from exc


def _sidecar(out, suffix):
    p = Path(out)
    stem = p.name[:-len(p.suffix)] if p.suffix else p.name
    return p.with_name(f"{stem}.{suffix}.json")


# ------------------------------------------------------------ commands

def cmd_check(job: JobSpec):
    f = load_fan(job.fan)
    violations = validate_fan(f)
    if violations:
        return EXIT_IO, {"valid": False, "violations": violations,
                         "summary": "invalid: " + "; ".join(violations)}
    cls = classify_fan(f)
    report = {"valid": True, **cls.as_dict(), "projective": None}
    words = ["valid", "complete" if cls.complete else "incomplete",
             "simplicial" if cls.simplicial else "non-simplicial",
             "regular" if cls.regular else "irregular"]
    if is_complete(f) and is_simplicial(f):
        h = projectivity_certificate(f)
        if isinstance(h, Infeasible):
            report["projective"] = False
            report["farkas_multipliers"] = [str(y) for y in h.multipliers]
            words.append("NOT projective")
        else:
            report["projective"] = True
            report["support_function"] = h.to_dict()
            words.append("projective")
    report["summary"] = ", ".join(words)
    return EXIT_OK, report


def _verdict_code(tag):
    return {STABLE: EXIT_OK, UNSTABLE: EXIT_NEGATIVE}.get(tag, EXIT_UNKNOWN)


def cmd_stable(job: JobSpec):
    f, phi = load_fan(job.fan), load_matrix(job.matrix)
    if phi.rank != f.rank:
        raise UsageError("matrix and fan have different rank")
    if not (is_complete(f) and is_simplicial(f)):
        raise UsageError("stability check needs a complete simplicial fan")
    verdict = check_1stable(phi, f, job.n_max)
    out = verdict.to_dict()
    if job.out and verdict.certificate is not None:
        _write(job.out, dump_json(verdict.certificate.to_dict()))
    return _verdict_code(verdict.tag), out


def _stabilize_2d(job, phi, f):
    res = dim2.stabilize_2d(phi, f, job.n_max, job.symmetric)
    report = res.to_dict()
    code = {dim2.REGULAR_STABILIZED: EXIT_OK, dim2.STABILIZED_IRREGULAR: EXIT_OK,
            dim2.IMPOSSIBLE_ANY: EXIT_NEGATIVE}.get(res.tag, EXIT_UNKNOWN)
    return code, res.fan if code == EXIT_OK else None, res.certificate, report


def _stabilize_higher(job, phi, f):
    try:
        if job.mode == "nd":
            res = ndim.stabilize_nd(phi, f, job.n_max, job.retry_budget)
        elif job.mode == "iterate":
            res = ndim.stabilize_iterate(phi, f, job.n_max)
        else:
            res = ndim.build_fan_thmB(phi, job.n_max, retry_budget=job.retry_budget)
    except ndim.HypothesisError as exc:
        reason = str(exc)
        code = EXIT_NEGATIVE if reason.startswith("OBSTRUCTED") else EXIT_UNKNOWN
        return code, None, None, {"verdict": "OBSTRUCTED" if code == EXIT_NEGATIVE else UNKNOWN,
                                  "reason": reason}
    except ndim.RetryBudgetExceeded as exc:
        return EXIT_UNKNOWN, None, None, {"verdict": UNKNOWN, "reason": str(exc)}
    report = res.to_dict()
    if res.verdict != STABLE:
        return EXIT_UNKNOWN, None, None, report
    return EXIT_OK, res.fan, res.certificate, report


def cmd_stabilize(job: JobSpec):
    if job.mode not in MODES:
        raise UsageError(f"unknown mode {job.mode!r}")
    phi = load_matrix(job.matrix)
    f = load_fan(job.fan) if job.fan else None
    if f is None and job.mode != "thmB":
        raise UsageError(f"mode {job.mode} needs a fan file")
    if f is not None and f.rank != phi.rank:
        raise UsageError("matrix and fan have different rank")
    if job.mode == "2d" and phi.rank != 2:
        raise UsageError("mode 2d needs a rank-2 matrix")
    runner = _stabilize_2d if job.mode == "2d" else _stabilize_higher
    code, fan, cert, report = runner(job, phi, f)
    report = {"mode": job.mode, "seed": job.seed, **report}
    report.pop("fan", None)
    if job.out:
        if fan is not None:
            _write(job.out, serialize_fan(fan))
            if cert is not None:
                _write(_sidecar(job.out, "cert"), dump_json(cert.to_dict()))
        _write(_sidecar(job.out, "report"), dump_json(report))
    elif fan is not None:
        report["fan"] = fan.to_dict()
    return code, report


def cmd_render(job: JobSpec):
    from .render import render_svg
    f = load_fan(job.fan)
    matrix = None
    if job.matrix:
        matrix = [list(r) for r in load_matrix(job.matrix).matrix]
    svg = render_svg(f, eigen_matrix=matrix)
    if job.out:
        _write(job.out, svg)
        return EXIT_OK, {"written": job.out}
    return EXIT_OK, svg


COMMANDS = {"check": cmd_check, "stable": cmd_stable, "stabilize": cmd_stabilize,
            "render": cmd_render}


def run_job(job: JobSpec):
    """(exit code, payload) for one job; usage and I/O problems map to exit 1."""
    try:
        if job.command not in COMMANDS:
            raise UsageError(f"unknown command {job.command!r}")
        return COMMANDS[job.command](job)
    except UsageError as exc:
        return EXIT_IO, {"error": str(exc)}
    except ValueError as exc:
        if "render supports rank 2 only" in str(exc):
            return EXIT_IO, {"error": str(exc)}
        raise


# ------------------------------------------------------------ batch mode

def _batch_one(path):
    path = Path(path)
    try:
        job = JobSpec.from_dict(_read_json(path), path.parent)
    except (UsageError, TypeError) as exc:
        return path.name, EXIT_IO, {"error": str(exc)}
    code, payload = run_job(job)
    return path.name, code, payload


def run_batch(directory, workers=None):
    """Run every *.json job file in a directory; results land in <dir>/results/."""
    d = Path(directory)
    jobs = sorted(p for p in d.glob("*.json") if p.is_file())
    outdir = d / "results"
    outdir.mkdir(exist_ok=True)
    summary = {}
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for name, code, payload in pool.map(_batch_one, jobs):
            summary[name] = code
            body = payload if isinstance(payload, dict) else {"svg": payload}
            (outdir / f"{Path(name).stem}.result.json").write_text(
                dump_json({"exit_code": code, **body}))
    return summary


# ------------------------------------------------------------ argument parsing

def build_parser():
    p = argparse.ArgumentParser(prog="toricstab",
                                description="Fans, monomial maps and toric stabilization.")
    p.add_argument("--batch", metavar="DIR", help="run every job file in DIR")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n-max", type=int, default=200)
    common.add_argument("--retry-budget", type=int, default=60)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--symmetric", action="store_true")
    common.add_argument("--out")
    sub = p.add_subparsers(dest="command")
    c = sub.add_parser("check", parents=[common], help="validate and classify a fan")
    c.add_argument("fan")
    s = sub.add_parser("stable", parents=[common], help="decide 1-stability of a map on a fan")
    s.add_argument("fan")
    s.add_argument("matrix")
    z = sub.add_parser("stabilize", parents=[common], help="build a stabilizing fan")
    z.add_argument("files", nargs="+", metavar="FILE",
                   help="FAN MATRIX, or just MATRIX with --mode thmB")
    z.add_argument("--mode", choices=MODES, default="2d")
    r = sub.add_parser("render", parents=[common], help="draw a rank-2 fan as SVG")
    r.add_argument("fan")
    r.add_argument("--eigenlines", metavar="MATRIX", help="overlay the eigenlines of MATRIX")
    return p


def _job_from_args(a) -> JobSpec:
    job = JobSpec(a.command, n_max=a.n_max, retry_budget=a.retry_budget, seed=a.seed,
                  symmetric=a.symmetric, out=a.out)
    if a.command in ("check", "render"):
        job.fan = a.fan
        if a.command == "render":
            job.matrix = a.eigenlines
    elif a.command == "stable":
        job.fan, job.matrix = a.fan, a.matrix
    else:
        job.mode = a.mode
        if len(a.files) == 2:
            job.fan, job.matrix = a.files
        elif len(a.files) == 1 and a.mode == "thmB":
            job.matrix = a.files[0]
        else:
            raise UsageError("stabilize takes FAN MATRIX (or MATRIX alone with --mode thmB)")
    return job


def main(argv=None):
    parser = build_parser()
    a = parser.parse_args(argv)
    if a.batch:
        if not Path(a.batch).is_dir():
            print(f"error: {a.batch} is not a directory", file=sys.stderr)
            return EXIT_IO
        summary = run_batch(a.batch)
        print(dump_json(summary), end="")
        return max(summary.values(), default=EXIT_OK)
    if a.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_IO
    try:
        job = _job_from_args(a)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    code, payload = run_job(job)
    if isinstance(payload, str):
        sys.stdout.write(payload)
    elif "error" in payload:
        print(f"error: {payload['error']}", file=sys.stderr)
    else:
        print(dump_json(payload), end="")
    return code


if __name__ == "__main__":
    sys.exit(main())
