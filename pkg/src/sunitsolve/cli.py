"""Command line interface: one job per invocation.

Every subcommand accepts either a JSON job file (--job) or the field and S
on the command line; command line values override the job file.  The JSON
result goes to --output (or stdout with --json); a short summary is printed
otherwise.  Exit codes: 0 success, 1 mathematical failure, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from .apps import MODES, RAMIFIED_CUBICS, JobSpec, load_job, run_job
from .errors import InputError, SUnitError


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--job", help="JSON job file")
    p.add_argument("--field", help='defining polynomial, constant term first, e.g. "1,-3,0,1" for x^3 - 3x + 1')
    p.add_argument("--s-primes", help="rational primes whose places form S, e.g. 2,3")
    p.add_argument("--generators", help="JSON file with {rho0, w, rho} in power-basis coordinates")
    p.add_argument("--allow-bruteforce", action="store_true", help="run the generator finder outside its documented range")
    p.add_argument("--precision-bits", type=int)
    p.add_argument("--memory-budget-mib", type=int)
    p.add_argument("--output", "-o", help="write the JSON result here")
    p.add_argument("--json", action="store_true", help="print the JSON result to stdout")
    p.add_argument("--verbose", "-v", action="store_true", help="log progress to stderr")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="sunitsolve", description="Solve x + y = 1 in S-units of a number field.")
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)
    p = sub.add_parser("solve", help="all solutions with a provable bound")
    _common(p)
    p.add_argument("--reduction-mode", choices=["both", "infinite-only"])
    p = sub.add_parser("bound", help="bound report (B1, B2, R(K)) without solving")
    _common(p)
    p = sub.add_parser("sieve-below-bound", help="all solutions with exponents bounded by --bound")
    _common(p)
    p.add_argument("--bound", type=int)
    p = sub.add_parser("fermat-check", help="asymptotic Fermat criterion over totally real fields")
    _common(p)
    p.add_argument("--slow", action="store_true", help="with no --field, run all built-in cubic fields")
    p = sub.add_parser("ramanujan-nagell", help="solve x^3 + p^k = q^n")
    p.add_argument("--q", help="odd primes q, e.g. 11,17")
    p.add_argument("--q-max", type=int, help="all odd primes q <= q-max except p")
    p.add_argument("--p-base", type=int, default=3)
    p.add_argument("--output", "-o")
    p.add_argument("--json", action="store_true")
    p.add_argument("--verbose", "-v", action="store_true")
    p = sub.add_parser("generators", help="S-unit generators from the brute-force finder")
    _common(p)
    p = sub.add_parser("run", help="run a job file, mode taken from the file")
    p.add_argument("job")
    p.add_argument("--output", "-o")
    p.add_argument("--json", action="store_true")
    p.add_argument("--verbose", "-v", action="store_true")
    return ap


def _read_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}")
    except json.JSONDecodeError as e:
        raise InputError(f"{path} is not valid JSON: {e}")


def _job_from_args(args) -> dict:
    data = _read_json(args.job) if getattr(args, "job", None) else {}
    if args.command != "run":
        data["mode"] = args.command
    if getattr(args, "field", None):
        data["field"] = args.field
    if getattr(args, "s_primes", None):
        data["s_primes"] = args.s_primes
        data.pop("s_ideals", None)
    if getattr(args, "generators", None):
        data["generators"] = _read_json(args.generators)
    if getattr(args, "allow_bruteforce", False):
        data["allow_bruteforce"] = True
    for key in ("precision_bits", "memory_budget_mib", "bound", "reduction_mode", "p_base"):
        v = getattr(args, key, None)
        if v is not None:
            data[key] = v
    return data


def _odd_primes(n: int, skip: int) -> list[int]:
    from flint import fmpz

    return [q for q in range(3, n + 1, 2) if q != skip and fmpz(q).is_prime()]


def _summary(doc: dict) -> str:
    cmd = doc["command"]
    lines = []
    if "field" in doc:
        f = doc["field"]
        lines.append(f"field {f['polynomial']} (degree {f['degree']}, disc {f['discriminant']})")
    if "generators" in doc:
        g = doc["generators"]
        lines.append(f"S-unit group: w = {g['w']}, t = {g['t']}")
    rep = doc.get("bound_report")
    if rep:
        lines.append(f"B_init = {rep['B_init']}, B1 = {rep.get('B1')}, B2 = {rep.get('B2')}, B_final = {rep.get('B_final')}")
        if rep.get("R") is not None:
            lines.append(f"R(K) = {rep['R']:.4g}")
    if "count" in doc:
        lines.append(f"{doc['count']} unordered solutions")
        for s in doc["solutions"]:
            lines.append(f"  {s['tau1']}  +  {s['tau2']}  = 1")
    if "fermat" in doc:
        lines.append(doc["fermat"]["verdict"])
    if "fields" in doc:
        for r in doc["fields"]:
            lines.append(f"{r['field']['polynomial']}: {r['count']} solutions, {r['fermat']['verdict']}")
    if cmd == "ramanujan-nagell":
        for r in doc["runs"]:
            lines.append(f"q = {r['q']}: B = {r['B']}, k <= {r['k_max']}, n <= {r['n_max']}: {r['solutions']}")
    return "\n".join(lines)


def _glue_negative_values(argv: list[str]) -> list[str]:
    # "--field -2,0,1" would otherwise read the polynomial as an option
    out: list[str] = []
    it = iter(argv)
    for a in it:
        if a in ("--field", "--q"):
            nxt = next(it, None)
            if nxt is not None and nxt.startswith("-") and nxt[1:2].isdigit():
                out.append(f"{a}={nxt}")
                continue
            out.append(a)
            if nxt is not None:
                out.append(nxt)
            continue
        out.append(a)
    return out


def main(argv=None) -> int:
    ap = build_parser()
    log = None
    argv = _glue_negative_values(list(sys.argv[1:] if argv is None else argv))
    try:
        args = ap.parse_args(argv)
        if args.command is None:
            ap.print_help()
            return 2
        if args.verbose:
            t0 = time.perf_counter()

            def log(msg):
                print(f"[{time.perf_counter() - t0:8.2f}s] {msg}", file=sys.stderr)

        if args.command == "ramanujan-nagell":
            qs = []
            if args.q:
                qs = [int(v) for v in args.q.split(",") if v.strip()]
            elif args.q_max:
                qs = _odd_primes(args.q_max, args.p_base)
            doc, code = run_job(load_job({"mode": "ramanujan-nagell", "field": [], "q": qs, "p_base": args.p_base}), log)
        elif args.command == "fermat-check" and not args.field and not args.job:
            polys = RAMIFIED_CUBICS if args.slow else RAMIFIED_CUBICS[:3]
            runs = []
            for f in polys:
                d, _ = run_job(load_job({"mode": "fermat-check", "field": f, "s_primes": [2]}), log)
                runs.append(d)
            ok = all(r["fermat"]["verdict"] == "criterion satisfied" for r in runs)
            doc = {
                "schema_version": runs[0]["schema_version"],
                "command": "fermat-check",
                "fields": runs,
                "verdict": "criterion satisfied" if ok else "criterion not satisfied",
            }
            code = 0
        else:
            data = _job_from_args(args)
            if args.command == "sieve-below-bound" and data.get("bound") is None:
                raise InputError("sieve-below-bound needs --bound")
            doc, code = run_job(load_job(data), log)
    except InputError as e:
        print(f"input error: {e}", file=sys.stderr)
        return 2
    except SUnitError as e:
        print(f"failed: {type(e).__name__}: {e}", file=sys.stderr)
        return 1
    text = json.dumps(doc, indent=2)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    if args.json:
        print(text)
    else:
        print(_summary(doc))
    return code


if __name__ == "__main__":
    sys.exit(main())
