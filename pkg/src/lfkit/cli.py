"""Command-line surface: table export, verification suites, experiments.

Commands mirror the library experiments one to one.  Every run persists
its reports as JSON (one file per report), a combined CSV of all ratio
rows, and a manifest.json naming the outputs.  Output bytes depend only
on the command line (including the seed), never on timing or paths, so a
repeated run is byte-identical.

Exit codes: 0 all assertion flags pass; 1 at least one flag failed;
2 configuration or ingestion problem; 3 numeric or capacity failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .coeffs import build_coefficient_table
from .config import PROFILES, get_profile
from .errors import (
    CapacityError,
    DomainError,
    FormValidationError,
    IngestionError,
    InsufficientTableError,
    NumericError,
    OracleWindowError,
)
from .experiments import (
    ExperimentReport,
    dual_suite,
    hecke_suite,
    lemma5_grid,
    lemma6_grid,
    mv_experiment,
    satake_suite,
    theorem1_majorant,
    theorem2_grid,
    zeta_oracle_crosscheck,
)
from .forms import load_form
from .meansquare import hard_cutoff, split_boundary

__all__ = ["RunConfig", "run", "main"]

EXIT_OK = 0
EXIT_ASSERT = 1
EXIT_CONFIG = 2
EXIT_NUMERIC = 3

_CONFIG_ERRORS = (
    DomainError,
    IngestionError,
    FormValidationError,
    InsufficientTableError,
    OracleWindowError,
)
_NUMERIC_ERRORS = (NumericError, CapacityError)

# Parameter keys that appear in report filenames, per experiment.
_STEM_KEYS = {
    "lemma5": (("sigma0", "s"), ("Y", "Y")),
    "lemma6": (("sigma0", "s"), ("Y", "Y")),
    "thm1": (("eps1", "eps"), ("prime_limit", "P"), ("r_max", "r")),
    "thm2": (("sigma0", "s"), ("eta", "eta"), ("T", "T")),
    "oracle": (("n", "n"), ("T", "T"), ("sigma0", "s")),
    "mv": (("samples", "k"), ("seed", "seed")),
    "verify-hecke": (),
    "verify-satake": (),
    "verify-dual": (),
}


@dataclass
class RunConfig:
    """One CLI invocation, fully determining every output byte."""

    command: str
    forms: list = field(default_factory=list)
    out: str = "reports"
    workers: int = 1
    profile_name: str = "default"
    seed: int = 1
    params: dict = field(default_factory=dict)


# -- job functions (top-level so a worker pool can pickle them) -----------------


def _job_verify(form_text, seed, suite, limit, profile_name):
    profile = get_profile(profile_name)
    form = load_form(form_text, seed=seed, profile=profile)
    if suite == "hecke":
        return [hecke_suite(form, profile=profile)]
    if suite == "satake":
        return [satake_suite(form, prime_count=limit, profile=profile)]
    return [dual_suite(form, prime_count=min(limit, 50), profile=profile)]


def _job_lemma(form_text, seed, which, sigma0, ygrid, limit, profile_name):
    profile = get_profile(profile_name)
    form = load_form(form_text, seed=seed, profile=profile)
    if limit is None:
        limit = 2
        for Y in ygrid:
            boundary = split_boundary(Y)
            cutoff2 = hard_cutoff(Y, profile.tol.weight_floor, power=2)
            if which == "lemma5":
                # an empty tail window (cutoff2 <= boundary) needs no table
                need = cutoff2 if cutoff2 > boundary else 2
            else:
                need = min(boundary, cutoff2)
            limit = max(limit, need)
    table = build_coefficient_table(form, limit, profile)
    if which == "lemma5":
        return lemma5_grid(table, sigma0, ygrid, profile)
    return lemma6_grid(table, sigma0, ygrid, profile)


def _job_thm1(form_text, seed, eps1, plimit, rmax, profile_name):
    profile = get_profile(profile_name)
    form = load_form(form_text, seed=seed, profile=profile)
    return [theorem1_majorant(form, eps1, plimit, rmax, profile)]


def _job_thm2(form_text, seed, tgrid, sigma0, eta, limit, profile_name):
    profile = get_profile(profile_name)
    form = load_form(form_text, seed=seed, profile=profile)
    table = None
    if limit is not None:
        table = build_coefficient_table(form, limit, profile)
    return theorem2_grid(form, tgrid, sigma0, eta, profile, table=table)


def _job_mv(samples, seed, tgrid, profile_name):
    profile = get_profile(profile_name)
    return [mv_experiment(samples, seed, tuple(tgrid), profile)]


def _job_oracle(n, T, sigma0, profile_name):
    profile = get_profile(profile_name)
    return [zeta_oracle_crosscheck(n, T, sigma0, profile=profile)]


def _job_coeffs(form_text, seed, limit, profile_name):
    profile = get_profile(profile_name)
    form = load_form(form_text, seed=seed, profile=profile)
    table = build_coefficient_table(form, limit, profile)
    a_rows = [
        (m, repr(float(table.A[m].real)), repr(float(table.A[m].imag)))
        for m in range(1, table.limit + 1)
    ]
    lam_rows = [
        (int(m), int(p), int(r), repr(float(v.real)), repr(float(v.imag)))
        for m, p, r, v in zip(
            table.lam_support, table.lam_primes, table.lam_exponents, table.lam_values
        )
    ]
    summary = {
        "form_id": table.form_id,
        "degree": int(table.degree),
        "self_dual": bool(table.self_dual),
        "theta": float(table.theta),
        "limit": int(table.limit),
        "lambda_terms": len(lam_rows),
    }
    return {"kind": "coeffs", "summary": summary, "a_rows": a_rows, "lam_rows": lam_rows}


# -- persistence ------------------------------------------------------------------


def _json_bytes(obj) -> bytes:
    return (json.dumps(obj, sort_keys=True, indent=2) + "\n").encode()


def _write_file(out_dir: str, name: str, data: bytes) -> str:
    path = os.path.join(out_dir, name)
    with open(path, "wb") as fh:
        fh.write(data)
    return name


def _report_stem(rep: ExperimentReport, used: set) -> str:
    parts = [rep.experiment, rep.form_id]
    for key, token in _STEM_KEYS.get(rep.experiment, ()):
        value = rep.params.get(key)
        if value is not None:
            parts.append(f"{token}{value:g}")
    stem = "-".join(str(p) for p in parts)
    if stem in used:
        index = 2
        while f"{stem}-{index}" in used:
            index += 1
        stem = f"{stem}-{index}"
    used.add(stem)
    return stem


def _csv_bytes(header, rows) -> bytes:
    import io

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue().encode()


def _persist(config: RunConfig, results, failures) -> tuple[int, list[ExperimentReport]]:
    os.makedirs(config.out, exist_ok=True)
    outputs = []
    reports: list[ExperimentReport] = []
    csv_rows = []
    used: set = set()
    for item in results:
        if isinstance(item, dict) and item.get("kind") == "coeffs":
            stem = f"coeffs-{item['summary']['form_id']}-M{item['summary']['limit']}"
            outputs.append(_write_file(
                config.out, f"{stem}.json", _json_bytes(item["summary"])))
            outputs.append(_write_file(
                config.out, f"{stem}-a.csv",
                _csv_bytes(("m", "a_re", "a_im"), item["a_rows"])))
            outputs.append(_write_file(
                config.out, f"{stem}-lambda.csv",
                _csv_bytes(("m", "p", "r", "lam_re", "lam_im"), item["lam_rows"])))
            continue
        rep = item
        reports.append(rep)
        stem = _report_stem(rep, used)
        outputs.append(_write_file(config.out, f"{stem}.json", _json_bytes(rep.to_dict())))
        for label in sorted(rep.ratios):
            csv_rows.append((
                stem, label,
                repr(rep.observed[label]), repr(rep.bounds[label]),
                repr(rep.ratios[label]), rep.flags[label],
            ))
    if csv_rows:
        outputs.append(_write_file(
            config.out, f"{config.command}-summary.csv",
            _csv_bytes(("report", "label", "observed", "bound", "ratio", "flag"),
                       csv_rows)))
    all_passed = all(rep.ok() for rep in reports)
    manifest = {
        "command": config.command,
        "forms": list(config.forms),
        "profile": config.profile_name,
        "seed": config.seed,
        "params": config.params,
        "outputs": outputs,
        "complete": not failures,
        "failures": failures,
        "all_passed": all_passed and not failures,
    }
    _write_file(config.out, "manifest.json", _json_bytes(manifest))
    return (EXIT_OK if all_passed else EXIT_ASSERT), reports


def _build_jobs(config: RunConfig):
    p = config.params
    jobs = []
    if config.command == "coeffs":
        for form in config.forms:
            jobs.append((_job_coeffs,
                         (form, config.seed, p["limit"], config.profile_name)))
    elif config.command == "verify":
        for form in config.forms:
            jobs.append((_job_verify,
                         (form, config.seed, p["suite"], p["limit"], config.profile_name)))
    elif config.command in ("lemma5", "lemma6"):
        for form in config.forms:
            jobs.append((_job_lemma,
                         (form, config.seed, config.command, p["sigma0"],
                          tuple(p["ygrid"]), p.get("limit"), config.profile_name)))
    elif config.command == "thm1":
        for form in config.forms:
            jobs.append((_job_thm1,
                         (form, config.seed, p["eps1"], p["plimit"], p["rmax"],
                          config.profile_name)))
    elif config.command == "thm2":
        for form in config.forms:
            jobs.append((_job_thm2,
                         (form, config.seed, tuple(p["tgrid"]), p["sigma0"],
                          p["eta"], p.get("limit"), config.profile_name)))
    elif config.command == "mv":
        jobs.append((_job_mv,
                     (p["samples"], config.seed, tuple(p["tgrid"]), config.profile_name)))
    elif config.command == "oracle":
        jobs.append((_job_oracle,
                     (p["n"], p["T"], p["sigma0"], config.profile_name)))
    else:
        raise DomainError(f"unknown command {config.command!r}")
    return jobs


def run(config: RunConfig) -> tuple[int, list[ExperimentReport]]:
    """Execute one configured command; persist reports; return (exit code, reports).

    Jobs run in a fixed order; with workers > 1 they execute in a process
    pool but results are collected and written in submission order, so the
    persisted bytes do not depend on scheduling.  On a job failure the
    completed results are still persisted with the manifest marked
    incomplete, and the failure is re-raised for exit-code mapping.
    """
    if config.workers < 1:
        raise DomainError(f"workers must be >= 1, got {config.workers}")
    jobs = _build_jobs(config)
    results = []
    failures = []
    error: Exception | None = None
    if config.workers == 1:
        for func, args in jobs:
            try:
                out = func(*args)
            except Exception as exc:  # persisted as partial, then re-raised
                failures.append({"job": func.__name__, "error": f"{type(exc).__name__}: {exc}"})
                error = exc
                break
            results.extend(out if isinstance(out, list) else [out])
    else:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            futures = [pool.submit(func, *args) for func, args in jobs]
            for (func, _), future in zip(jobs, futures):
                try:
                    out = future.result()
                except Exception as exc:
                    failures.append({"job": func.__name__,
                                     "error": f"{type(exc).__name__}: {exc}"})
                    error = exc
                    break
                results.extend(out if isinstance(out, list) else [out])
    code, reports = _persist(config, results, failures)
    if error is not None:
        raise error
    return code, reports


# -- argument parsing ----------------------------------------------------------------


def _float_list(text: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad numeric list {text!r}") from exc


def _add_common(sub: argparse.ArgumentParser, forms: bool = True) -> None:
    sub.add_argument("--out", default="reports", help="output directory")
    sub.add_argument("--workers", type=int, default=1, help="worker process count")
    sub.add_argument("--tol-profile", choices=sorted(PROFILES), default="default",
                     dest="tol_profile", help="tolerance profile")
    sub.add_argument("--seed", type=int, default=1,
                     help="seed for random-unitary builtins and sampling")
    if forms:
        sub.add_argument("--form", action="append", required=True,
                         help="builtin name (all-ones:N, random-unitary:N[:seed], "
                              "delta) or a form file path; repeatable")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lfkit",
        description="Coefficient tables and desk-scale experiments for "
                    "degree-n Dirichlet series built from local root data.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("coeffs", help="build and export a coefficient table")
    _add_common(s)
    s.add_argument("--limit", type=int, required=True, help="table length M")

    s = sub.add_parser("verify", help="run a local-data verification suite")
    _add_common(s)
    s.add_argument("--suite", choices=("hecke", "satake", "dual"), required=True)
    s.add_argument("--limit", type=int, default=200,
                   help="sampled prime count for satake/dual suites")

    for name, blurb in (("lemma5", "tail sums over a Y grid"),
                        ("lemma6", "head sums over a Y grid")):
        s = sub.add_parser(name, help=blurb)
        _add_common(s)
        s.add_argument("--sigma0", type=float, default=0.6)
        s.add_argument("--ygrid", type=_float_list, default=[1e2, 1e3, 1e4])
        s.add_argument("--limit", type=int, default=None,
                       help="override the coefficient-table length")

    s = sub.add_parser("thm1", help="double sum against its convergent majorant")
    _add_common(s)
    s.add_argument("--eps1", type=float, default=0.05)
    s.add_argument("--plimit", type=int, default=1_000_000)
    s.add_argument("--rmax", type=int, default=20)

    s = sub.add_parser("thm2", help="mean square of the smoothed proxy over [T, 2T]")
    _add_common(s)
    s.add_argument("--Tgrid", type=_float_list, default=[1e2, 1e3, 1e4], dest="tgrid")
    s.add_argument("--sigma0", type=float, default=0.6)
    s.add_argument("--eta", type=float, default=0.4)
    s.add_argument("--limit", type=int, default=None,
                   help="override the coefficient-table length")

    s = sub.add_parser("mv", help="random-polynomial off-diagonal stress test")
    _add_common(s, forms=False)
    s.add_argument("--samples", type=int, default=500)
    s.add_argument("--Tgrid", type=_float_list, default=[10.0, 100.0, 1000.0],
                   dest="tgrid")

    s = sub.add_parser("oracle", help="proxy moment vs direct zeta quadrature")
    _add_common(s, forms=False)
    s.add_argument("--n", type=int, default=1)
    s.add_argument("--T", type=float, default=100.0)
    s.add_argument("--sigma0", type=float, default=0.75)

    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    params = {
        key: value
        for key, value in vars(args).items()
        if key not in ("command", "form", "out", "workers", "tol_profile", "seed")
    }
    return RunConfig(
        command=args.command,
        forms=list(getattr(args, "form", None) or []),
        out=args.out,
        workers=args.workers,
        profile_name=args.tol_profile,
        seed=args.seed,
        params=params,
    )


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    config = _config_from_args(args)
    try:
        code, reports = run(config)
    except _CONFIG_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except _NUMERIC_ERRORS as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    for rep in reports:
        state = "pass" if rep.ok() else "FAIL"
        print(f"{state} {rep.experiment} {rep.form_id} "
              + " ".join(f"{label}={rep.ratios[label]:.4g}" for label in sorted(rep.ratios)))
    return code


if __name__ == "__main__":
    sys.exit(main())
