"""``forcing-lab`` command line: one subcommand per module.

Exit status is 0 on success, 1 when the computation itself fails (domain
errors, refused guards, failed preconditions) and 2 for usage errors,
including scenario files that do not parse or validate.
"""

from __future__ import annotations

import argparse
import csv
import io as _stdio
import sys
import time
from pathlib import Path

from . import io
from .errors import ForcingError, InputError

DEFAULT_DEVIATION_N = [2**k for k in range(4, 13)]


class UsageError(InputError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# -- output ----------------------------------------------------------------------------

def _csv(header, rows) -> str:
    buf = _stdio.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


class _Run:
    """Collects the manifest for one invocation and emits results."""

    def __init__(self, args, command: str, doc: dict | None = None):
        self.args = args
        self.t0 = time.perf_counter()
        self.manifest = io.RunManifest(command, io.scenario_hash(doc) if doc is not None else None)

    def budgets(self, **kw):
        self.manifest.budgets.update(kw)

    def _stamp(self) -> dict:
        self.manifest.wall_time_s = time.perf_counter() - self.t0
        return self.manifest.to_dict()

    def emit_text(self, text: str) -> None:
        """Plain text or CSV; a file output gets a ``.manifest.json`` next to it."""
        out = self.args.output
        if out is None:
            sys.stdout.write(text)
            return
        io.atomic_write(out, text)
        io.atomic_write(Path(str(out) + ".manifest.json"), io.dumps(self._stamp()))

    def emit_json(self, result: dict) -> None:
        text = io.dumps({"manifest": self._stamp(), "result": result})
        if self.args.output is None:
            sys.stdout.write(text)
        else:
            io.atomic_write(self.args.output, text)


def _threads(args) -> int:
    from .rotation.estimate import default_threads

    if args.threads is not None:
        if args.threads < 1:
            raise UsageError("--threads must be >= 1")
        return args.threads
    return default_threads()


# -- sft -------------------------------------------------------------------------------

def cmd_sft(args) -> None:
    from . import symbolic

    doc = io.load_document(args.matrix_file, "sft")
    A = symbolic.TransitionMatrix(doc["transition_matrix"], doc.get("labels"))
    run = _Run(args, "sft", doc)
    if not args.entropy and args.period is None:
        raise UsageError("sft: give --entropy and/or --period P")
    parts = []
    if args.entropy:
        h = symbolic.topological_entropy(A)
        run.budgets(entropy_rtol=symbolic.ENTROPY_RTOL, digits=args.digits)
        parts.append(f"{h:.{args.digits}f}\n")
    if args.period is not None:
        words = symbolic.periodic_words(A, args.period)
        run.budgets(period=args.period, periodic_points=symbolic.count_periodic_points(A, args.period))
        parts.append(_csv(["word", "minimal_period", "class_size"],
                          [[str(w), w.period, w.period] for w in words]))
    run.emit_text("".join(parts))


# -- interval ------------------------------------------------------------------------------

def _itinerary(it) -> str:
    return "".join(map(str, it)) if all(0 <= s <= 9 for s in it) else ".".join(map(str, it))


def cmd_interval(args) -> None:
    from . import interval

    doc = io.load_document(args.map_file, "interval")
    f = interval.PLMap([(io.parse_rational(x), io.parse_rational(y)) for x, y in doc["breakpoints"]])
    ends = [io.parse_rational(v) for v in doc["partition"]] if "partition" in doc else list(f.xs)
    P = interval.IntervalPartition(ends)
    G = interval.build_covering_graph(f, P)
    run = _Run(args, "interval", doc)
    certs = interval.forced_periodic_orbits(G, f, args.max_period)
    rows = [[T, _itinerary(pp.itinerary), io.format_rational(pp.point),
             " ".join(io.format_rational(x) for x in pp.orbit)] for T, pp in sorted(certs.items())]
    run.budgets(max_period=args.max_period, partition=[io.format_rational(e) for e in ends],
                boundary_periods=sorted(T for T, pp in certs.items() if pp.boundary),
                missing_periods=[T for T in range(1, args.max_period + 1) if T not in certs])
    run.emit_text(_csv(["period", "itinerary", "point", "orbit"], rows))


# -- rotation ------------------------------------------------------------------------------

def _int_vector(tokens, what: str):
    flat = [t for tok in tokens for t in str(tok).split(",") if t != ""]
    try:
        return [int(t) for t in flat]
    except ValueError:
        raise UsageError(f"{what}: expected integers, got {tokens}") from None


def cmd_rotation(args) -> None:
    from .rotation import backend
    from .rotation.degree import Box, find_periodic
    from .rotation.estimate import EmpiricalMeasure, deviation_profile, measure_rotation, rotation_set_estimate
    from .rotation.lift import TorusLift

    doc = io.load_document(args.lift_file, "rotation")
    g = TorusLift.from_dict(doc)
    run = _Run(args, "rotation", doc)
    threads = _threads(args)
    run.budgets(backend=backend.NAME)

    if args.find_periodic is not None:
        vals = _int_vector(args.find_periodic, "--find-periodic")
        if len(vals) != 3:
            raise UsageError("--find-periodic takes p (two integers) and q, e.g. '0,0 1'")
        p, q = vals[:2], vals[2]
        box = Box(*args.box)
        res = find_periodic(g, p, q, box)
        run.budgets(p=p, q=q, box=list(box.as_tuple()))
        run.emit_json(res.to_dict())
        return

    if args.measure is not None:
        if args.measure:
            mdoc = io.load_json(args.measure)
            io.validate_measure(mdoc, args.measure)
        else:
            mdoc = doc.get("measure", {"grid": args.grid})
        mu = EmpiricalMeasure.from_dict(mdoc)
        v = measure_rotation(g, mu)
        run.budgets(measure_points=len(mu.weights))
        run.emit_text(_csv(["x", "y"], [[io.format_float(v[0]), io.format_float(v[1])]]))
        return

    if not (args.N < args.n):
        raise UsageError("rotation: need N < n")
    rho = rotation_set_estimate(g, args.grid, args.N, args.n, threads=threads)
    run.budgets(grid=args.grid, N=args.N, n=args.n, threads=threads)
    if args.deviation is not None:
        ns = _int_vector([args.deviation], "--deviation") if args.deviation else DEFAULT_DEVIATION_N
        prof = deviation_profile(g, rho, args.grid, ns, threads=threads)
        run.budgets(n_list=ns)
        run.emit_text(_csv(["n", "deviation"], [[n, io.format_float(d)] for n, d in prof]))
        return
    run.emit_text(_csv(["x", "y"], [[io.format_float(x), io.format_float(y)] for x, y in rho.vertices]))


# -- forcing -------------------------------------------------------------------------------

def cmd_forcing(args) -> None:
    from .plane import ForcingScenario, horseshoe_certificate, is_above, is_admissible_geometric, is_brouwer_line
    from .errors import PreconditionError, WitnessNotFound

    doc = io.load_document(args.scenario_file, "forcing")
    sc = ForcingScenario.from_dict(doc)
    run = _Run(args, "forcing", doc)
    chart = sc.chart
    db = sc.database()
    result: dict = {"name": sc.name}

    if sc.f is not None:
        cb = sc.check_box or chart.box
        result["brouwer"] = {leaf.label: is_brouwer_line(leaf, sc.f, cb).to_dict() for leaf in chart.leaves}
        run.budgets(check_box=list(cb.as_tuple()))

    if args.above:
        rel = []
        labels = chart.labels
        for phi in labels:
            for a in labels:
                for b in labels:
                    if len({phi, a, b}) < 3:
                        continue
                    try:
                        ok = is_above(chart[a], chart[b], chart[phi], chart.box)
                    except (PreconditionError, WitnessNotFound):
                        continue
                    if ok:
                        rel.append({"upper": a, "lower": b, "relative_to": phi})
        result["above"] = rel

    if args.derive is not None:
        if args.derive < 1:
            raise UsageError("--derive budget must be >= 1")
        new = db.derive(args.derive)
        run.budgets(derive_budget=args.derive)
        result["derived"] = [f.id for f in new]
        if sc.f is not None:
            result["checks"] = {f.id: is_admissible_geometric(f.path, f.order, sc.f, chart).to_dict() for f in new}
    result["database"] = db.to_dict()

    if args.certify is not None:
        spec = dict(sc.certify or {})
        if args.certify:
            vals = _int_vector(args.certify, "--certify")
            if len(vals) != 3:
                raise UsageError("--certify takes q and T (two integers), e.g. '2 0,2'")
            spec.update(q=vals[0], T=vals[1:])
        if args.path:
            spec["path"] = args.path
        if "path" not in spec:
            if len(sc.paths) != 1:
                raise UsageError("--certify: name the path with --path")
            spec["path"] = next(iter(sc.paths))
        if "q" not in spec or "T" not in spec:
            raise UsageError("--certify: q and T are needed (on the command line or in the scenario)")
        if spec["path"] not in sc.paths:
            raise UsageError(f"--certify: unknown path {spec['path']!r}")
        cert = horseshoe_certificate(sc.paths[spec["path"]], spec["q"], spec["T"], chart)
        run.budgets(certify={"path": spec["path"], "q": spec["q"], "T": list(spec["T"])})
        result["certificate"] = None if cert is None else cert.to_dict()

    run.emit_json(result)


# -- parser -------------------------------------------------------------------------------

def _common(parent_default):
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--threads", type=int, default=parent_default,
                   help="worker threads for grid sweeps (default: $FORCING_THREADS or all cores)")
    p.add_argument("--output", "-o", type=Path, default=parent_default,
                   help="write the result here (atomically) instead of stdout")
    return p


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="forcing-lab", description=__doc__.splitlines()[0], parents=[_common(None)])
    ap.add_argument("--version", action="version", version=f"%(prog)s {io.__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)
    common = _common(argparse.SUPPRESS)

    s = sub.add_parser("sft", parents=[common], help="periodic points and entropy of a subshift")
    s.add_argument("--matrix-file", required=True)
    s.add_argument("--period", type=int)
    s.add_argument("--entropy", action="store_true")
    s.add_argument("--digits", type=int, default=6, help="decimals printed for the entropy")
    s.set_defaults(func=cmd_sft)

    s = sub.add_parser("interval", parents=[common], help="periodic orbits forced by a PL interval map")
    s.add_argument("--map-file", required=True)
    s.add_argument("--max-period", type=int, required=True)
    s.set_defaults(func=cmd_interval)

    s = sub.add_parser("rotation", parents=[common], help="rotation sets of torus lifts")
    s.add_argument("--lift-file", required=True)
    s.add_argument("--grid", type=int, default=64)
    s.add_argument("--n", type=int, default=256)
    s.add_argument("--N", type=int, default=0)
    s.add_argument("--box", type=float, nargs=4, default=[-0.2, 0.2, -0.2, 0.2], metavar=("X0", "X1", "Y0", "Y1"),
                   help="seed box for --find-periodic")
    mode = s.add_mutually_exclusive_group()
    mode.add_argument("--find-periodic", nargs="+", metavar="P Q", help="p as 'px,py' (or two integers), then q")
    mode.add_argument("--deviation", nargs="?", const="", metavar="N_LIST",
                      help="comma-separated n values (default 16,...,4096)")
    mode.add_argument("--measure", nargs="?", const="", metavar="FILE",
                      help="measure file; default: the lift file's 'measure' or the uniform grid")
    s.set_defaults(func=cmd_rotation)

    s = sub.add_parser("forcing", parents=[common], help="forcing deductions on a planar scenario")
    s.add_argument("--scenario-file", required=True)
    s.add_argument("--derive", type=int, nargs="?", const=64, metavar="BUDGET")
    s.add_argument("--certify", nargs="*", metavar="Q T", help="q then T as 'tx,ty'; empty uses the scenario's")
    s.add_argument("--path", help="path to certify")
    s.add_argument("--above", action="store_true", help="list the 'above' relations among the chart leaves")
    s.set_defaults(func=cmd_forcing)
    return ap


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        args.func(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except ForcingError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except BrokenPipeError:
        return 0
    return 0


if __name__ == "__main__":
    sys.exit(main())
