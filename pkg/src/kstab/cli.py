"""``kstab`` command line.

    kstab <command> <fixture>... [--config NAME] [--action NAME] [--depths LIST]
          [--subdivision NAME] [--format text|structured] [--guard-samples N]

Exit status: 0 success, 1 a mathematical check failed, 2 input error.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor

from . import settings
from .blowup import corollary_check, epsilon_fit, repulsive_vertex
from .exact import rat_vector
from .exceptions import CheckFailed, FixtureError, InputError
from .fixtures import _NUMBER, Fixture, load_fixture
from .futaki import extremal_action, invariant_routes, relative_futaki
from .report import Record, render_structured, render_text
from .search import Classification, build_problem, solve
from .subdivision import trivial_subdivision

EXIT_OK, EXIT_CHECK, EXIT_INPUT = 0, 1, 2
COMMANDS = ("futaki", "inner", "extremal", "relative", "blowup-scan", "corollary", "destabilize", "selftest")


def parse_depths(text: str) -> tuple:
    toks = [t for t in text.replace(",", " ").split() if t]
    bad = [t for t in toks if not _NUMBER.match(t)]
    if not toks or bad:
        raise InputError(f"--depths expects integers or rationals p/q, got {text!r}")
    return rat_vector(toks)


def _selected(fx: Fixture, args, default: str = "all"):
    """Named actions/configurations in command-line order; defaults per command."""
    names = list(args.action or []) + list(args.config or [])
    for n in args.action or []:
        if n not in fx.actions:
            raise FixtureError(f"no action named {n!r}", field=f"actions.{n}")
    for n in args.config or []:
        if n not in fx.configs:
            raise FixtureError(f"no config named {n!r}", field=f"config.{n}")
    if names:
        return [(n, fx.action(n)) for n in names]
    if default == "configs":
        return list(fx.configs.items())
    return [*fx.actions.items(), *fx.configs.items()]


def _futaki(fx, args):
    F, _, _ = invariant_routes(fx.polytope, args.route)
    return [Record(name, {"F": F(a)}) for name, a in _selected(fx, args)]


def _inner(fx, args):
    items = _selected(fx, args)
    if len(items) not in (1, 2) or not (args.action or args.config):
        raise InputError("inner needs one or two names via --action/--config")
    (na, a), (nb, b) = items[0], items[-1]
    _, ip, _ = invariant_routes(fx.polytope, args.route)
    return [Record(f"{na}, {nb}", {f"<{na}, {nb}>": ip(a, b)})]


def _extremal(fx, args):
    ext = extremal_action(fx.polytope)
    return [Record("extremal", {"chi": ext.chi.linear, "|chi|^2": ext.norm2,
                                "F(x_i)": ext.futaki_vector},
                   ["F(chi) = <chi,chi> verified"])]


def _relative(fx, args):
    P = fx.polytope
    out = []
    if args.route == "closed":
        F, ip, chi = invariant_routes(P, "closed")
        for name, a in _selected(fx, args, "configs"):
            f = F(a)
            out.append(Record(name, {"F": f, "F_T": f - ip(chi, a), "|a|^2": ip(a, a)}))
        return out
    ext = extremal_action(P)
    for name, a in _selected(fx, args, "configs"):
        rep = relative_futaki(P, a, extremal=ext)
        out.append(Record(name, {"F": rep.F, "F_T": rep.F_rel, "|a|^2": rep.norm_alpha, "|chi|^2": rep.norm_chi,
                                 "F/|a| >= -|chi|": rep.lower_bound_holds},
                          ["projection and chi routes agree"]))
    return out


def _one_config(fx, args):
    if args.action:
        raise InputError("this command takes configurations (--config), not actions")
    if args.config:
        if len(args.config) != 1:
            raise InputError("give exactly one --config")
        name = args.config[0]
        return name, _selected(fx, args)[0][1]
    scans = [s for s in fx.scans.values() if s.config]
    if len(scans) == 1:
        return scans[0].config, fx.configs[scans[0].config]
    raise InputError("choose a configuration with --config")


def _blowup_scan(fx, args):
    name, cfg = _one_config(fx, args)
    P = fx.polytope
    scan = next((s for s in fx.scans.values() if s.config == name), None)
    depths = args.depths if args.depths is not None else (scan.depths if scan else None)
    vertex = scan.vertex if scan and scan.vertex else repulsive_vertex(P, cfg).vertex
    s = epsilon_fit(P, cfg, vertex, depths)
    fields = {"vertex": s.vertex, "depths": tuple(s.depths), "lambda": s.lam, "b0/a0": s.mean,
              "F series": s.F.coeffs, "coefficient": s.coefficient}
    if s.expected_coefficient is not None:
        fields["expected (lambda - b0/a0)/(2(n-2)!)"] = s.expected_coefficient
    return [Record(name, fields, ["lemma verified"])]


def _corollary(fx, args):
    items = _selected(fx, args, "configs") if args.config else list(fx.configs.items())
    out = []
    for name, cfg in items:
        rep = corollary_check(fx.polytope, cfg)
        if rep.skipped:
            out.append(Record(name, {"skipped": rep.skipped}))
            continue
        out.append(Record(name, {"vertex": rep.vertex, "lambda": rep.lam, "b0/a0": rep.mean, "F": rep.F,
                                 "F after chops": [[e, f] for e, f in rep.chopped],
                                 "corner leading": rep.corner_leading},
                          ["corollary verified"]))
    return out


def _destabilize(fx, args):
    P = fx.polytope
    chi = extremal_action(P).chi if not args.absolute else None
    subs = {"trivial": trivial_subdivision(P), **fx.subdivisions}
    names = args.subdivision or list(subs)
    out = []
    for name in names:
        if name not in subs:
            raise FixtureError(f"no subdivision named {name!r}", field=f"subdivision.{name}")
        v = solve(build_problem(P, subs[name], chi, not args.absolute))
        notes = []
        if v.classification is Classification.NON_PRODUCT_NULL:
            notes.append("WARNING: non-affine minimizer with F_T = 0; inspect this subdivision")
        out.append(Record(name, {"points": len(v.points), "minimum": v.minimum,
                                 "classification": v.classification, "minimizer": v.minimizer,
                                 "pivots": v.pivots}, notes))
    return out


HANDLERS = {"futaki": _futaki, "inner": _inner, "extremal": _extremal, "relative": _relative,
            "blowup-scan": _blowup_scan, "corollary": _corollary, "destabilize": _destabilize}


def _run_fixture(job):
    command, path, args = job
    settings.GUARD_SAMPLES = args.guard_samples
    try:
        fx = load_fixture(path)
        return fx.name or str(path), HANDLERS[command](fx, args), None, EXIT_OK
    except InputError as exc:
        return str(path), [], f"input error: {exc}", EXIT_INPUT
    except CheckFailed as exc:
        return str(path), [], f"check failed ({type(exc).__name__}): {exc}", EXIT_CHECK


def _selftest(args):
    from .selftest import run

    results = run(fixtures=args.fixtures or None)
    records = [Record(f"criterion {r.number}", {"title": r.title, "passed": r.passed, "detail": r.detail},
                      [r.line()], compact=True) for r in results]
    code = EXIT_OK if all(r.passed for r in results) else EXIT_CHECK
    return [("selftest", records, None)], code


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kstab", description="Exact K-stability checks on toric fixtures.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("fixtures", nargs="*", help="fixture files or shipped fixture names")
    p.add_argument("--config", action="append", metavar="NAME")
    p.add_argument("--action", action="append", metavar="NAME")
    p.add_argument("--depths", metavar="LIST", help="comma-separated chop depths, e.g. 1/8,1/4,3/8")
    p.add_argument("--subdivision", action="append", metavar="NAME")
    p.add_argument("--format", choices=("text", "structured"), default="text")
    p.add_argument("--guard-samples", type=int, default=settings.GUARD_SAMPLES, metavar="N")
    p.add_argument("--route", choices=("lattice", "closed"), default="lattice",
                   help="lattice counting (default) or closed-form integrals")
    p.add_argument("--absolute", action="store_true", help="destabilize: minimize F instead of F_T")
    p.add_argument("--jobs", type=int, default=1, metavar="N", help="fixtures processed in parallel")
    return p


def run(argv=None) -> tuple[str, int]:
    """Return ``(output, exit code)``; errors of the invocation itself are reported in the output."""
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return "", int(exc.code or 0)
    try:
        if args.guard_samples < 1:
            raise InputError("--guard-samples must be at least 1")
        if args.jobs < 1:
            raise InputError("--jobs must be at least 1")
        args.depths = parse_depths(args.depths) if args.depths is not None else None
        settings.GUARD_SAMPLES = args.guard_samples
        if args.command == "selftest":
            blocks, code = _selftest(args)
        else:
            if not args.fixtures:
                raise InputError(f"{args.command} needs at least one fixture")
            jobs = [(args.command, f, args) for f in args.fixtures]
            if args.jobs > 1 and len(jobs) > 1:
                with ProcessPoolExecutor(args.jobs) as pool:
                    results = list(pool.map(_run_fixture, jobs))
            else:
                results = [_run_fixture(j) for j in jobs]
            blocks = [(name, recs, err) for name, recs, err, _ in results]
            code = max(c for *_, c in results)
    except InputError as exc:
        blocks, code = [(args.command, [], f"input error: {exc}")], EXIT_INPUT
    except CheckFailed as exc:
        blocks, code = [(args.command, [], f"check failed ({type(exc).__name__}): {exc}")], EXIT_CHECK
    status = {EXIT_OK: "ok", EXIT_CHECK: "check_failed", EXIT_INPUT: "input_error"}[code]
    if args.format == "structured":
        return render_structured(args.command, blocks, status), code
    return render_text(blocks, show_fixture=len(blocks) > 1), code


def main(argv=None) -> int:
    out, code = run(argv)
    sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
