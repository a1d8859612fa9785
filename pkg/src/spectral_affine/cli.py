"""Command-line front end.

Reads a JSON problem file describing one digit system plus per-command
parameters, dispatches to the library, and emits a report as JSON, plain
text, or CSV point data. All numeric inputs are exact: integers or
two-element [numerator, denominator] lists; floats are rejected so that
exact verdicts are never computed from inexact data.

Exit codes: 0 for a definite verdict, 2 when a search or scan ended
undetermined (budget exhausted, incomplete zero set, failed certificate),
1 for errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction
from typing import Any, Optional, Sequence

from . import __version__
from .conjugacy import (
    make_conjugate,
    sierpinski_class,
    spectral_residue_criterion,
    spectrality_criterion,
)
from .errors import ProblemFormatError, SpectralAffineError
from .fourier import (
    attractor_sample,
    completeness_scan,
    mu_hat_numeric,
    spectrum_candidate,
    suggest_eta,
)
from .hadamard import find_spectrum_set, unitarity_defect, verify_triple
from .linalg import as_matrix
from .ortho import (
    has_infinite_orthogonal,
    nonspectral_certificate,
    nstar_bounds,
    suggest_certificate,
    transport_inclusion_check,
)
from .zeros import as_digit_set, zero_set

COMMANDS = (
    "zero-set",
    "find-hadamard",
    "verify-triple",
    "conjugate",
    "classify",
    "criterion-1-8",
    "infinite-orthogonal",
    "nstar",
    "nonspectral-cert",
    "transport-check",
    "fourier-eval",
    "attractor",
    "spectrum",
    "q-scan",
)


# ---------------------------------------------------------------- parsing


def _fail(where: str, why: str) -> ProblemFormatError:
    return ProblemFormatError(f"{where}: {why}")


def _int_value(x: Any, where: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise _fail(where, "expected an exact integer")
    return x


def _rat_value(x: Any, where: str) -> Fraction:
    if isinstance(x, bool):
        raise _fail(where, "expected a number")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        raise _fail(where, "floats are not accepted; use [num, den]")
    if (
        isinstance(x, list)
        and len(x) == 2
        and all(isinstance(c, int) and not isinstance(c, bool) for c in x)
    ):
        if x[1] == 0:
            raise _fail(where, "zero denominator")
        return Fraction(x[0], x[1])
    raise _fail(where, "expected an integer or a [num, den] pair")


def _int_matrix(x: Any, where: str):
    if not isinstance(x, list) or not x:
        raise _fail(where, "expected a list of rows")
    rows = []
    for i, row in enumerate(x):
        if not isinstance(row, list):
            raise _fail(f"{where}[{i}]", "expected a list")
        rows.append(tuple(_int_value(c, f"{where}[{i}]") for c in row))
    return tuple(rows)


def _int_vectors(x: Any, where: str):
    return _int_matrix(x, where)


def _rat_vectors(x: Any, where: str):
    if not isinstance(x, list) or not x:
        raise _fail(where, "expected a list of points")
    rows = []
    for i, row in enumerate(x):
        if not isinstance(row, list):
            raise _fail(f"{where}[{i}]", "expected a list")
        rows.append(tuple(_rat_value(c, f"{where}[{i}]") for c in row))
    return tuple(rows)


def _rat_vector(x: Any, where: str):
    if not isinstance(x, list) or not x:
        raise _fail(where, "expected a list of coordinates")
    return tuple(_rat_value(c, where) for c in x)


_SCALAR_INT_FIELDS = ("p", "J", "R", "depth", "grid", "seed", "j0", "levels", "k", "N", "budget")


def parse_problem(path: str) -> dict:
    """Parse and validate a JSON problem file into typed fields."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ProblemFormatError(f"cannot read problem file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ProblemFormatError(f"problem file is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ProblemFormatError("problem file must hold a JSON object")

    out: dict[str, Any] = {}
    if "M" not in raw:
        raise ProblemFormatError("problem file must define the matrix M")
    out["M"] = as_matrix(_int_matrix(raw["M"], "M"))
    n = len(out["M"])

    if "D" in raw:
        D = as_digit_set(_int_vectors(raw["D"], "D"))
        if len(D[0]) != n:
            raise _fail("D", "digit dimension does not match M")
        out["D"] = D
    for key in ("S",):
        if key in raw:
            vec = _int_vectors(raw[key], key)
            if any(len(v) != n for v in vec):
                raise _fail(key, "dimension does not match M")
            out[key] = vec
    for key in ("A", "B"):
        if key in raw:
            mat = as_matrix(_int_matrix(raw[key], key))
            if len(mat) != n:
                raise _fail(key, "dimension does not match M")
            out[key] = mat
    for key in ("C", "base"):
        if key in raw:
            pts = _rat_vectors(raw[key], key)
            if any(len(v) != n for v in pts):
                raise _fail(key, "dimension does not match M")
            out["C"] = pts
    if "xi" in raw:
        xi = _rat_vector(raw["xi"], "xi")
        if len(xi) != n:
            raise _fail("xi", "dimension does not match M")
        out["xi"] = xi
    if "L" in raw:
        out["L"] = _rat_value(raw["L"], "L")
    for key in _SCALAR_INT_FIELDS:
        if key in raw:
            out[key] = _int_value(raw[key], key)
    if "eta" in raw:
        out["eta"] = _rat_value(raw["eta"], "eta")
    if "mode" in raw:
        if raw["mode"] not in ("a", "b", "digit_expansion", "chaos_game"):
            raise _fail("mode", "unknown mode")
        out["mode"] = raw["mode"]
    if "q_hints" in raw:
        hints = raw["q_hints"]
        if not isinstance(hints, list):
            raise _fail("q_hints", "expected a list of integers")
        out["q_hints"] = tuple(_int_value(h, "q_hints") for h in hints)
    return out


# ---------------------------------------------------------------- encoding


def _enc(x: Any) -> Any:
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else [x.numerator, x.denominator]
    if isinstance(x, (list, tuple)):
        return [_enc(c) for c in x]
    if isinstance(x, dict):
        return {k: _enc(v) for k, v in x.items()}
    return x


def _need(problem: dict, key: str, command: str) -> Any:
    if key not in problem:
        raise ProblemFormatError(f"{command} needs the field '{key}'")
    return problem[key]


# ---------------------------------------------------------------- dispatch


def dispatch(command: str, problem: dict, opts: argparse.Namespace) -> tuple[dict, int, Optional[list]]:
    """Run one command; returns (result-dict, exit-code, csv-rows)."""
    M = problem["M"]

    def pick(name: str, default=None):
        flag = getattr(opts, name.replace("-", "_"), None)
        if flag is not None:
            return flag
        return problem.get(name, default)

    if command == "zero-set":
        D = _need(problem, "D", command)
        zs = zero_set(D, q_hints=problem.get("q_hints", ()))
        rows = [["x", "y"]] + [[str(c) for c in pt] for pt in zs.points]
        result = {
            "points": _enc(list(zs.points)),
            "q": zs.q,
            "complete": zs.complete,
        }
        return result, 0 if zs.complete else 2, rows

    if command == "find-hadamard":
        D = _need(problem, "D", command)
        budget = pick("budget", 10_000_000)
        found = find_spectrum_set(M, D, budget=budget, threads=opts.threads)
        result = {
            "status": found.status,
            "S": _enc(list(found.S)) if found.S is not None else None,
            "search_space": found.search_space,
            "examined": found.examined,
        }
        code = 2 if found.status == "undetermined" else 0
        return result, code, None

    if command == "verify-triple":
        D = _need(problem, "D", command)
        S = _need(problem, "S", command)
        ok = verify_triple(M, D, S)
        result = {
            "admissible_with_S": ok,
            "unitarity_defect": unitarity_defect(M, D, S),
        }
        return result, 0, None

    if command == "conjugate":
        D = _need(problem, "D", command)
        B = _need(problem, "B", command)
        p = _need(problem, "p", command)
        mode = problem.get("mode", "b")
        Mt, Dt, wit = make_conjugate(M, D, B, p, mode=mode)
        result = {
            "M_conjugate": _enc(list(Mt)),
            "D_conjugate": _enc(list(Dt)),
            "witness": {
                "p": wit.p,
                "A": _enc(list(wit.A)),
                "B": _enc(list(wit.B)),
                "mode": wit.mode,
            },
        }
        return result, 0, None

    if command == "classify":
        cls = sierpinski_class(M)
        result = {
            "class": cls.label,
            "m1_criterion": spectral_residue_criterion(M),
            "theorem18": None,
        }
        if "D" in problem and len(problem["D"]) == 3:
            verdict = spectrality_criterion(M, problem["D"])
            result["theorem18"] = {
                "verdict": verdict.verdict,
                "A": _enc(list(verdict.A)),
                "B": _enc(list(verdict.B)),
            }
        return result, 0, None

    if command == "criterion-1-8":
        D = _need(problem, "D", command)
        verdict = spectrality_criterion(M, D)
        result = {
            "verdict": verdict.verdict,
            "A": _enc(list(verdict.A)),
            "B": _enc(list(verdict.B)),
        }
        return result, 0, None

    if command == "infinite-orthogonal":
        D = _need(problem, "D", command)
        infinite, level = has_infinite_orthogonal(M, D)
        return {"infinite": infinite, "witness_level": level}, 0, None

    if command == "nstar":
        D = _need(problem, "D", command)
        p = _need(problem, "p", command)
        kwargs: dict[str, Any] = {}
        if pick("J") is not None:
            kwargs["J"] = pick("J")
        if pick("R") is not None:
            kwargs["R"] = pick("R")
        if pick("budget") is not None:
            kwargs["node_budget"] = pick("budget")
        bounds = nstar_bounds(M, D, p, **kwargs)
        result = {
            "lower": bounds.lower,
            "upper": bounds.upper,
            "method": bounds.method,
            "witness": _enc(list(bounds.witness.frequencies)),
            "witness_verified": bounds.witness.verified,
            "search_nodes": bounds.search_nodes,
            "search_complete": bounds.search_complete,
        }
        return result, 0 if bounds.search_complete else 2, None

    if command == "nonspectral-cert":
        D = _need(problem, "D", command)
        L = problem.get("L")
        j0 = problem.get("j0")
        suggested = False
        if L is None or j0 is None:
            pair = suggest_certificate(M, D)
            if pair is None:
                result = {
                    "verdict": "inconclusive",
                    "note": "no certificate scale found by the helper",
                }
                return result, 2, None
            L, j0 = pair
            suggested = True
        cert = nonspectral_certificate(M, D, L, j0)
        result = {
            "verdict": cert.verdict,
            "L": _enc(cert.L),
            "j0": cert.j0,
            "suggested": suggested,
            "checks": {
                "difference_closure": cert.difference_closure,
                "window_empty": cert.window_empty,
                "tail_integral": cert.tail_integral,
            },
        }
        return result, 0 if cert.valid else 2, None

    if command == "transport-check":
        D = _need(problem, "D", command)
        B = _need(problem, "B", command)
        p = _need(problem, "p", command)
        J = pick("J", 4)
        report = transport_inclusion_check(
            M, D, problem.get("A"), B, p, J=J, mode=problem.get("mode", "b")
        )
        result = {
            "c1": report.c1,
            "c2": report.c2,
            "ok": report.ok,
            "forward_checks": len(report.forward_hits),
            "backward_checks": len(report.backward_hits),
            "M_conjugate": _enc(list(report.conjugate_matrix)),
            "D_conjugate": _enc(list(report.conjugate_digits)),
        }
        return result, 0, None

    if command == "fourier-eval":
        D = _need(problem, "D", command)
        xi = _need(problem, "xi", command)
        depth = pick("depth", 40)
        val = mu_hat_numeric(M, D, xi, depth=depth)
        return {"re": val.real, "im": val.imag, "depth": depth}, 0, None

    if command == "attractor":
        digits = problem.get("C") or _need(problem, "D", command)
        mode = problem.get("mode", "digit_expansion")
        k = problem.get("k")
        if k is None:
            k = pick("depth", 8)
        sample = attractor_sample(
            M,
            digits,
            mode=mode,
            k=k,
            N=pick("N", 2000),
            seed=pick("seed"),
        )
        rows = [["x", "y"]] + [
            [repr(c) for c in pt] for pt in sample.points
        ]
        result = {
            "count": len(sample.points),
            "eps": sample.eps,
            "mode": sample.mode,
            "detail": sample.detail,
        }
        return result, 0, rows

    if command == "spectrum":
        D = _need(problem, "D", command)
        C = _need(problem, "C", command)
        levels = pick("levels", 1)
        cand = spectrum_candidate(M, D, C, levels)
        rows = [["x", "y"]] + [
            [str(c) for c in f] for f in cand.frequencies
        ]
        result = {
            "levels": cand.levels,
            "count": len(cand.frequencies),
            "orthogonal": cand.orthogonal,
            "failing_pair": _enc(list(cand.failing_pair))
            if cand.failing_pair
            else None,
            "frequencies": _enc(list(cand.frequencies)),
        }
        return result, 0, rows

    if command == "q-scan":
        D = _need(problem, "D", command)
        C = _need(problem, "C", command)
        levels = pick("levels", 1)
        depth = pick("depth", 40)
        resolution = pick("grid", 11)
        cand = spectrum_candidate(M, D, C, levels)
        eta = pick("eta")
        eta_source = "given"
        if eta is None:
            eta = suggest_eta(M, D, C).eta
            eta_source = "computed"
        scan = completeness_scan(
            M,
            D,
            cand,
            float(eta),
            resolution=resolution,
            depth=depth,
            threads=opts.threads,
        )
        rows = [["x", "y", "q"]]
        for i, x in enumerate(scan.axis):
            for j, y in enumerate(scan.axis):
                rows.append([repr(x), repr(y), repr(scan.values[i][j])])
        result = {
            "eta": scan.eta,
            "eta_source": eta_source,
            "resolution": scan.resolution,
            "depth": scan.depth,
            "levels": levels,
            "orthogonal": cand.orthogonal,
            "min_q": scan.min_q,
            "max_q": scan.max_q,
        }
        return result, 0, rows

    raise ProblemFormatError(f"unknown command: {command}")


# ---------------------------------------------------------------- emission


def _emit_text(report: dict) -> str:
    lines = [f"command: {report['command']}"]
    for key, value in report["result"].items():
        lines.append(f"{key}: {json.dumps(_enc(value), sort_keys=True)}")
    lines.append(f"elapsed: {report['timing_seconds']:.3f}s")
    return "\n".join(lines) + "\n"


def emit(report: dict, fmt: str, csv_rows: Optional[list]) -> str:
    if fmt == "json":
        return json.dumps(report, sort_keys=True, separators=(",", ": "), indent=1) + "\n"
    if fmt == "text":
        return _emit_text(report)
    if fmt == "csv":
        if csv_rows is None:
            raise ProblemFormatError(
                "csv output is only available for point-producing commands"
            )
        return "\n".join(",".join(row) for row in csv_rows) + "\n"
    raise ProblemFormatError(f"unknown format: {fmt}")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="spectral-affine",
        description="Exact spectrality tools for self-affine digit systems.",
    )
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--input", required=True, help="JSON problem file")
    ap.add_argument("--format", default="text", choices=("json", "text", "csv"))
    ap.add_argument("--threads", type=int, default=None)
    ap.add_argument("--depth", type=int, default=None)
    ap.add_argument("--levels", type=int, default=None)
    ap.add_argument("--eta", type=float, default=None)
    ap.add_argument("--grid", type=int, default=None)
    ap.add_argument("--seed", type=int, default=None)
    ap.add_argument("--J", type=int, default=None)
    ap.add_argument("--R", type=int, default=None)
    ap.add_argument("--budget", type=int, default=None)
    ap.add_argument("--q-hints", type=str, default=None)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    opts = build_parser().parse_args(argv)
    if opts.threads is None:
        env = os.environ.get("SPECTRAL_AFFINE_THREADS")
        opts.threads = int(env) if env else 1
    start = time.perf_counter()
    try:
        problem = parse_problem(opts.input)
        if opts.q_hints:
            problem["q_hints"] = tuple(
                int(tok) for tok in opts.q_hints.split(",") if tok
            )
        result, code, csv_rows = dispatch(opts.command, problem, opts)
        report = {
            "library": {"name": "spectral-affine", "version": __version__},
            "schema": 1,
            "command": opts.command,
            "result": _enc(result),
            "timing_seconds": time.perf_counter() - start,
        }
        rendered = emit(report, opts.format, csv_rows)
    except (SpectralAffineError, ValueError) as exc:
        report = {
            "library": {"name": "spectral-affine", "version": __version__},
            "schema": 1,
            "command": opts.command,
            "error": {"type": type(exc).__name__, "message": str(exc)},
            "timing_seconds": time.perf_counter() - start,
        }
        out = (
            json.dumps(report, sort_keys=True, indent=1) + "\n"
            if opts.format == "json"
            else f"error ({type(exc).__name__}): {exc}\n"
        )
        sys.stderr.write(out)
        return 1
    sys.stdout.write(rendered)
    return code


if __name__ == "__main__":
    sys.exit(main())
