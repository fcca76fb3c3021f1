"""Command line entry point ``hecke-descent``.

Exit codes: 0 success, 2 precision instability, 3 oracle or method mismatch,
64 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from .components import ModelMismatch
from .cosets import DegreeMismatch, InstabilityError
from .descent import OracleMismatch, adelic_descent, finite_descent
from .ladic import ExactMatrix
from .report import emit_report

EXIT_OK, EXIT_UNSTABLE, EXIT_MISMATCH, EXIT_USAGE = 0, 2, 3, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def thread_cap():
    raw = os.environ.get("HECKE_DESCENT_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"HECKE_DESCENT_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise UsageError("HECKE_DESCENT_THREADS must be at least 1")
    return n


def build_parser():
    p = _Parser(prog="hecke-descent", description="Hecke descent versus the naive coset sum.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    run = sub.add_parser("run", help="evaluate one scenario and write a report")
    run.add_argument("--scenario", required=True,
                     help="gsp4, gu22, finite:<catalog name> or finite:<path to JSON model>")
    run.add_argument("--ell", type=int, help="the prime (required for gsp4 and gu22)")
    run.add_argument("--precision", type=int, help="starting truncation exponent m")
    run.add_argument("--max-precision", type=int, default=8)
    run.add_argument("--d", type=int, default=1, help="field discriminant parameter for gu22")
    run.add_argument("--m-index", type=int, default=1, help="index of the norm-one unit for gu22")
    run.add_argument("--g", help="g as a JSON matrix (l-adic) or permutation/element index (finite)")
    run.add_argument("--sigma", help="sigma, same formats as --g")
    run.add_argument("--level", help="finite models only: JSON list of permutations generating K")
    run.add_argument("--out", help="write the report here instead of stdout")
    run.add_argument("--format", choices=("json", "text"), default="json")
    run.add_argument("--timings", action="store_true", help="include wall-clock timings")

    sc = sub.add_parser("selfcheck", help="run every finite-model suite")
    sc.add_argument("--format", choices=("json", "text"), default="text")
    sc.add_argument("--out")

    sw = sub.add_parser("schwartz", help="operator comparisons on function spaces")
    sw.add_argument("--format", choices=("json", "text"), default="text")
    sw.add_argument("--out")

    ra = sub.add_parser("ric-axioms", help="exhaustive axiom suite on finite models")
    ra.add_argument("--scenario", action="append",
                    help="finite:<catalog name>; repeatable; default is the built-in set")
    ra.add_argument("--format", choices=("json", "text"), default="text")
    ra.add_argument("--out")
    return p


# -- argument conversion ---------------------------------------------------------------

def _parse_matrix(text, ell, flag):
    try:
        rows = json.loads(text)
        m = ExactMatrix.parse(rows, ell)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise UsageError(f"{flag}: cannot parse matrix {text!r} ({exc})") from None
    if m.dim != 4 or m.det() == 0:
        raise UsageError(f"{flag}: need an invertible 4x4 matrix")
    return m


def _load_finite(spec):
    from .models import CATALOG, get_model, load_model_file
    name = spec.split(":", 1)[1]
    if name in CATALOG:
        return get_model(name)
    if os.path.exists(name):
        try:
            return load_model_file(name)
        except (KeyError, ValueError) as exc:
            raise UsageError(f"bad model file {name!r}: {exc}") from None
    raise UsageError(f"unknown finite model {name!r}")


def _finite_element(G, text, flag):
    try:
        val = json.loads(text)
        if isinstance(val, int):
            if not 0 <= val < G.order:
                raise ValueError("index out of range")
            return val
        return G.elem(tuple(val))
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"{flag}: not an element of the group ({exc})") from None


def _point_stabilizer(G):
    return frozenset(x for x in range(G.order) if G.perms[x][0] == 0)


def _run_finite(args):
    fm = _load_finite(args.scenario)
    G = fm.G
    if args.level:
        try:
            gens = [G.elem(tuple(p)) for p in json.loads(args.level)]
        except (ValueError, KeyError, TypeError) as exc:
            raise UsageError(f"--level: {exc}") from None
        K = G.generate(gens)
    else:
        K = _point_stabilizer(G)
    g = _finite_element(G, args.g, "--g") if args.g else G.identity
    if args.sigma:
        s = _finite_element(G, args.sigma, "--sigma")
    else:
        s = next((x for x in G.gen_idx if x not in K), G.identity)
    return finite_descent(fm, K, g, s)


def _run(args):
    if args.scenario.startswith("finite:"):
        if args.ell is not None or args.precision is not None:
            raise UsageError("--ell and --precision do not apply to finite models")
        return _run_finite(args)
    if args.scenario not in ("gsp4", "gu22"):
        raise UsageError(f"unknown scenario {args.scenario!r}")
    if args.ell is None:
        raise UsageError("--ell is required for gsp4 and gu22")
    if args.level:
        raise UsageError("--level applies to finite models only")
    if args.precision is not None and args.precision < 1:
        raise UsageError("--precision must be positive")
    if args.scenario == "gsp4" and (args.d != 1 or args.m_index != 1):
        raise UsageError("--d and --m-index apply to gu22 only")
    g = _parse_matrix(args.g, args.ell, "--g") if args.g else None
    sigma = _parse_matrix(args.sigma, args.ell, "--sigma") if args.sigma else None
    try:
        return adelic_descent(args.scenario, args.ell, precision=args.precision, d=args.d,
                              m_index=args.m_index, g=g, sigma=sigma,
                              max_precision=args.max_precision, timings=args.timings)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _write(data, out):
    if out:
        with open(out, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()


def _checks_output(rows, fmt):
    if fmt == "json":
        payload = [{"suite": r.suite, "name": r.name, "ok": r.ok, "detail": r.detail} for r in rows]
        return (json.dumps(payload, indent=2) + "\n").encode()
    width = max((len(r.suite) for r in rows), default=0)
    lines = [f"{'PASS' if r.ok else 'FAIL'}  {r.suite.ljust(width)}  {r.name}  {r.detail}".rstrip()
             for r in rows]
    lines.append(f"{sum(r.ok for r in rows)}/{len(rows)} passed")
    return ("\n".join(lines) + "\n").encode()


def _call(fn):
    return fn()


def _run_suites(funcs, threads):
    if threads == 1 or len(funcs) == 1:
        results = [fn() for fn in funcs]
    else:
        with ProcessPoolExecutor(max_workers=min(threads, len(funcs))) as ex:
            results = list(ex.map(_call, funcs))
    return [row for part in results for row in part]


def _selfcheck_suites():
    from . import selfcheck as s
    return [s.axiom_suite, s.mutation_suite, s.descent_suite, s.specialization_suite,
            s.lemma_suite, s.schwartz_suite, _shortcut_rows]


def _shortcut_rows():
    from .selfcheck import Check, shortcut_counter_instance
    inst = shortcut_counter_instance()
    return [Check("components", "finite instance with nu(H_i) outside nu(U)", inst is not None, str(inst))]


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        threads = thread_cap()
        if args.command == "run":
            rep = _run(args)
            _write(emit_report(rep, args.format), args.out)
            return EXIT_OK
        if args.command == "selfcheck":
            rows = _run_suites(_selfcheck_suites(), threads)
        elif args.command == "schwartz":
            from .selfcheck import schwartz_suite
            rows = schwartz_suite()
        else:
            from .selfcheck import axiom_suite, mutation_suite
            if args.scenario:
                names = []
                for spec in args.scenario:
                    if not spec.startswith("finite:"):
                        raise UsageError("ric-axioms takes finite:<model> scenarios")
                    names.append(spec.split(":", 1)[1])
                from .models import CATALOG
                unknown = [n for n in names if n not in CATALOG]
                if unknown:
                    raise UsageError(f"unknown finite model(s): {', '.join(unknown)}")
                rows = axiom_suite(tuple(names))
            else:
                rows = axiom_suite() + mutation_suite()
        _write(_checks_output(rows, args.format), args.out)
        return EXIT_OK if all(r.ok for r in rows) else EXIT_MISMATCH
    except UsageError as exc:
        print(f"hecke-descent: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InstabilityError as exc:
        print(f"hecke-descent: unstable: {exc}", file=sys.stderr)
        return EXIT_UNSTABLE
    except (OracleMismatch, DegreeMismatch, ModelMismatch) as exc:
        print(f"hecke-descent: mismatch: {exc}", file=sys.stderr)
        return EXIT_MISMATCH


if __name__ == "__main__":
    sys.exit(main())
