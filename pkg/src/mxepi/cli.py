"""Command-line front end: generation, metrics, thresholds, sweeps, studies.

Every output starts with a '# command:' header echoing the resolved settings
(file config merged with flags), so the bytes below can be regenerated by
pasting the line back into a shell.  Worker count is deliberately left out of
the header: it changes scheduling, never results.  Exit codes: 0 ok, 1 bad
input, 2 unreachable coupling target, 3 solver non-convergence.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from .errors import (
    ConvergenceError,
    InfeasibleTargetError,
    InputError,
    UndefinedMetricError,
)
from .multiplex import (
    asn,
    ddc_of_graph,
    empirical_vector_distribution,
    load_edgelist,
    write_edgelist,
)
from .netgen import LayerSpec, couple_asn, couple_ddc, independent_multiplex
from .simulate import RateGrid, SimConfig, phase_diagram, run_ensemble
from .theory import (
    SpreadingRate,
    diagonal_threshold,
    outbreak_size,
    threshold_curve,
    threshold_lambda_a,
)


class _Parser(argparse.ArgumentParser):
    # argparse exits with code 2 on bad flags; 2 is taken by infeasible
    # targets, so route parse failures through InputError -> exit 1
    def error(self, message):
        raise InputError(message)


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def _derive_seed(seed: int, *parts: int) -> int:
    """Collision-safe integer sub-seed for one row/rate of a study."""
    ss = np.random.SeedSequence([int(seed), *[int(p) for p in parts]])
    return int(ss.generate_state(1, np.uint64)[0])


# ---------------------------------------------------------------------------
# option tables: one source of truth for argparse, config-file merging, and
# the '# command:' header.  kinds: int/float/str/bool/floats (comma list).

_GLOBAL_OPTS = [
    ("seed", "--seed", "int", 0, "master RNG seed"),
    ("out", "--out", "str", None, "output file path (default: stdout)"),
    ("config", "--config", "str", None, "key=value file, flags override"),
]

_SPEC_OPTS = [
    ("kind", "--kind", "str", None, "layer pair: er-er, sf-sf or er-sf"),
    ("n", "--n", "int", None, "nodes per layer"),
    ("ka", "--ka", "float", None, "target mean degree, layer A"),
    ("kb", "--kb", "float", None, "target mean degree, layer B"),
]

_SIM_OPTS = [
    ("realizations", "--realizations", "int", 500, "Monte Carlo sample size"),
    ("mode", "--mode", "str", "percolation", "percolation or sir"),
    ("cutoff", "--cutoff", "float", 0.01, "small/giant outcome cutoff"),
    ("workers", "--workers", "int", 1, "parallel workers (results identical)"),
    ("theory_only", "--theory-only", "bool", False, "skip Monte Carlo"),
]

_OPTS = {
    "generate": _SPEC_OPTS
    + [
        ("asn_target", "--asn", "float", None, "neighbor-similarity target"),
        ("ddc_target", "--ddc", "float", None, "degree-correlation target"),
        ("tolerance", "--tolerance", "float", None, "coupling tolerance"),
    ]
    + _GLOBAL_OPTS,
    "metrics": _GLOBAL_OPTS,
    "threshold": [
        ("grid_step", "--grid-step", "float", 0.01, "lambda_a sweep resolution"),
    ]
    + _GLOBAL_OPTS,
    "sweep": [
        ("max_lambda", "--max-lambda", "float", 0.5, "axis upper bound"),
        ("steps", "--steps", "int", 26, "points per axis (0 .. max inclusive)"),
        ("fix_lambda_a", "--fix-lambda-a", "floats", (), "section values; replaces the lambda_a axis"),
    ]
    + _SIM_OPTS
    + _GLOBAL_OPTS,
    "study": _SPEC_OPTS
    + [
        ("targets", "--targets", "floats", None, "coupling targets, comma separated"),
        ("rates", "--rates", "floats", None, "equal-rate lambda values for outbreak sizes"),
    ]
    + _SIM_OPTS
    + _GLOBAL_OPTS,
}

_POSITIONALS = {
    "generate": [],
    "metrics": ["graph"],
    "threshold": ["graph"],
    "sweep": ["graph"],
    "study": ["study"],
}

_TRUE_WORDS = {"1", "true", "yes", "on"}
print_err = lambda msg: print(msg, file=sys.stderr)  # noqa: E731


def _convert(text: str, kind: str, dest: str):
    try:
        if kind == "int":
            return int(text)
        if kind == "float":
            return float(text)
        if kind == "bool":
            return text.strip().lower() in _TRUE_WORDS
        if kind == "floats":
            return tuple(float(t) for t in text.split(",") if t.strip() != "")
        return text
    except ValueError:
        raise InputError(f"bad value for {dest}: {text!r}") from None


def _read_config(path: str) -> dict[str, str]:
    table: dict[str, str] = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                key, sep, value = line.partition("=")
                if not sep:
                    raise InputError(f"{path}:{lineno}: expected key=value, got {line!r}")
                table[key.strip().replace("-", "_")] = value.strip()
    except OSError as err:
        raise InputError(f"cannot read config {path}: {err}") from None
    return table


def _build_parser() -> _Parser:
    parser = _Parser(prog="mxepi", description=__doc__.splitlines()[0])
    subs = parser.add_subparsers(dest="command", required=True)
    for name, opts in _OPTS.items():
        sub = subs.add_parser(name)
        for pos in _POSITIONALS[name]:
            sub.add_argument(pos)
        for dest, flag, kind, _default, help_ in opts:
            if kind == "bool":
                sub.add_argument(flag, dest=dest, action="store_const", const=True,
                                 default=None, help=help_)
            else:
                # defaults land in _resolve so a config file can fill gaps
                sub.add_argument(flag, dest=dest, type=str, default=None, help=help_)
    return parser


def _resolve(ns: argparse.Namespace) -> argparse.Namespace:
    opts = _OPTS[ns.command]
    table: dict[str, str] = {}
    if ns.config is not None:
        table = _read_config(ns.config)
        known = {dest for dest, *_ in opts}
        for key in table:
            if key not in known:
                raise InputError(f"unknown config key {key!r} for {ns.command}")
    for dest, _flag, kind, default, _help in opts:
        value = getattr(ns, dest)
        if value is None and dest in table:
            value = _convert(table[dest], kind, dest)
        elif isinstance(value, str):
            value = _convert(value, kind, dest)
        if value is None:
            value = default
        setattr(ns, dest, value)
    return ns


def _command_line(ns: argparse.Namespace) -> str:
    """Canonical invocation for the metadata header (config inlined)."""
    parts = ["mxepi", ns.command]
    parts += [str(getattr(ns, pos)) for pos in _POSITIONALS[ns.command]]
    for dest, flag, kind, default, _help in _OPTS[ns.command]:
        # workers never changes results; out/config are plumbing; seed is
        # appended unconditionally below
        if dest in ("workers", "config", "out", "seed"):
            continue
        value = getattr(ns, dest)
        if value is None or value == default:
            continue
        if kind == "bool":
            parts.append(flag)
        elif kind == "floats":
            # '=' form survives re-parsing for negative and empty lists
            parts.append(f"{flag}={','.join(_fmt(v) for v in value)}")
        else:
            parts.append(f"{flag} {_fmt(value)}")
    parts.append(f"--seed {ns.seed}")
    return " ".join(parts)


def _emit(ns: argparse.Namespace, lines: list[str]) -> None:
    text = "\n".join(lines) + "\n"
    if ns.out is None:
        sys.stdout.write(text)
    else:
        with open(ns.out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _metrics_line(g) -> str:
    try:
        beta = ddc_of_graph(g)
    except UndefinedMetricError:
        beta = math.nan
    return (
        f"n={g.n} ka={_fmt(g.mean_degree_a())} kb={_fmt(g.mean_degree_b())} "
        f"asn={_fmt(asn(g))} ddc={_fmt(beta)}"
    )


def _layer_specs(ns: argparse.Namespace) -> tuple[LayerSpec, LayerSpec]:
    for dest in ("kind", "n", "ka", "kb"):
        if getattr(ns, dest) is None:
            raise InputError(f"--{dest} is required")
    try:
        kind_a, kind_b = ns.kind.split("-")
    except ValueError:
        raise InputError(f"--kind must look like er-sf, got {ns.kind!r}") from None
    return LayerSpec(kind_a, ns.n, ns.ka), LayerSpec(kind_b, ns.n, ns.kb)


# ---------------------------------------------------------------------------
# subcommands


def cmd_generate(ns: argparse.Namespace) -> int:
    spec_a, spec_b = _layer_specs(ns)
    if ns.asn_target is not None and ns.ddc_target is not None:
        raise InputError("choose one of --asn / --ddc, not both")
    if ns.out is None:
        raise InputError("generate requires --out <graph file>")

    if ns.asn_target is not None:
        kwargs = {} if ns.tolerance is None else {"tolerance": ns.tolerance}
        g = couple_asn(spec_a, spec_b, ns.asn_target, seed=ns.seed, **kwargs)
    elif ns.ddc_target is not None:
        base = independent_multiplex(spec_a, spec_b, seed=ns.seed)
        kwargs = {} if ns.tolerance is None else {"tolerance": ns.tolerance}
        result = couple_ddc(
            base.edges_a, base.edges_b, base.n, ns.ddc_target,
            seed=_derive_seed(ns.seed, 1), **kwargs,
        )
        g = result.graph
        if not result.target_met:
            print_err(
                f"warning: ddc target {_fmt(ns.ddc_target)} not met, "
                f"achieved {_fmt(result.achieved)}"
            )
    else:
        g = independent_multiplex(spec_a, spec_b, seed=ns.seed)

    write_edgelist(
        g, ns.out,
        header_lines=[
            f"command: {_command_line(ns)}",
            f"rng philox seed={ns.seed}",
        ],
    )
    print(_metrics_line(g))
    return 0


def cmd_metrics(ns: argparse.Namespace) -> int:
    g = load_edgelist(ns.graph)
    line = _metrics_line(g)
    if ns.out is not None:
        _emit(ns, [f"# command: {_command_line(ns)}", line])
    else:
        print(line)
    return 0


def _curve_rows(dist, grid_step: float) -> list[tuple[float, float]]:
    rows = list(threshold_curve(dist, grid_resolution=grid_step).points)
    end_a = threshold_lambda_a(dist, 0.0)
    if end_a is not None and (not rows or rows[-1] != (end_a, 0.0)):
        rows.append((end_a, 0.0))
    return rows


def cmd_threshold(ns: argparse.Namespace) -> int:
    g = load_edgelist(ns.graph)
    dist = empirical_vector_distribution(g)
    if not g.edges_b:
        end_a = threshold_lambda_a(dist, 0.0)
        if end_a is None:
            raise InputError("layer A has no finite threshold")
        print(f"critical_lambda_a={_fmt(end_a)}")
        rows = [(end_a, 0.0)]
    else:
        rows = _curve_rows(dist, ns.grid_step)
    lines = [f"# command: {_command_line(ns)}", "lambda_a,lambda_b"]
    lines += [f"{_fmt(la)},{_fmt(lb)}" for la, lb in rows]
    _emit(ns, lines)
    return 0


def _axis(stop: float, steps: int) -> tuple[float, ...]:
    if steps < 1:
        raise InputError(f"steps must be >= 1, got {steps}")
    return tuple(float(x) for x in np.linspace(0.0, stop, steps))


def _progress(total: int):
    ticks = max(1, total // 10)

    def report(done: int, _total: int) -> None:
        if done % ticks == 0 or done == total:
            print_err(f"progress {done}/{total}")

    return report


def cmd_sweep(ns: argparse.Namespace) -> int:
    g = load_edgelist(ns.graph)
    axis_b = _axis(ns.max_lambda, ns.steps)
    axis_a = tuple(ns.fix_lambda_a) if ns.fix_lambda_a else axis_b
    grid = RateGrid(lambda_a_values=axis_a, lambda_b_values=axis_b)
    cfg = SimConfig(
        realizations=ns.realizations, master_seed=ns.seed,
        mode=ns.mode, outbreak_cutoff=ns.cutoff,
    )
    workers = ns.workers if ns.workers and ns.workers > 1 else None
    result = phase_diagram(
        g, grid, cfg, theory_only=ns.theory_only, workers=workers,
        progress=_progress(len(axis_a) * len(axis_b)),
    )
    lines = [
        f"# command: {_command_line(ns)}",
        "lambda_a,lambda_b,s_theory,s_sim,stderr,outbreak_prob,realizations",
    ]
    lines += [
        f"{_fmt(r.lambda_a)},{_fmt(r.lambda_b)},{_fmt(r.s_theory)},"
        f"{_fmt(r.s_sim)},{_fmt(r.stderr)},{_fmt(r.outbreak_prob)},{r.realizations}"
        for r in result.rows
    ]
    _emit(ns, lines)
    return 0


def cmd_study(ns: argparse.Namespace) -> int:
    if ns.study not in ("asn", "ddc"):
        raise InputError(f"study must be 'asn' or 'ddc', got {ns.study!r}")
    spec_a, spec_b = _layer_specs(ns)
    if ns.targets is None:
        raise InputError("--targets is required")
    rates = tuple(ns.rates) if ns.rates is not None else ()
    workers = ns.workers if ns.workers and ns.workers > 1 else None

    header = "target,achieved,status,diag_threshold"
    for r in rates:
        header += f",s_theory_{r:g},s_sim_{r:g}"
    lines = [f"# command: {_command_line(ns)}", header]

    for idx, target in enumerate(ns.targets):
        achieved, status, g = math.nan, "ok", None
        if ns.study == "asn":
            try:
                g = couple_asn(spec_a, spec_b, target, seed=_derive_seed(ns.seed, idx))
                achieved = asn(g)
            except InfeasibleTargetError:
                status = "infeasible"
        else:
            base = independent_multiplex(spec_a, spec_b, seed=_derive_seed(ns.seed, idx))
            result = couple_ddc(
                base.edges_a, base.edges_b, base.n, target,
                seed=_derive_seed(ns.seed, idx, 1),
            )
            g, achieved = result.graph, result.achieved
            if not result.target_met:
                status = "offtarget"

        cells = [_fmt(float(target)), _fmt(achieved), status]
        if g is None:
            cells.append(_fmt(math.nan))
            cells += [_fmt(math.nan)] * (2 * len(rates))
        else:
            dist = empirical_vector_distribution(g)
            thr = diagonal_threshold(dist)
            cells.append(_fmt(math.nan if thr is None else thr))
            for ri, r in enumerate(rates):
                rate = SpreadingRate(r, r)
                try:
                    s_th = outbreak_size(dist, rate).s
                except ConvergenceError as err:
                    s_th = err.last.s
                if ns.theory_only:
                    s_sim = math.nan
                else:
                    cfg = SimConfig(
                        realizations=ns.realizations,
                        master_seed=_derive_seed(ns.seed, idx, 2, ri),
                        mode=ns.mode, outbreak_cutoff=ns.cutoff,
                    )
                    s_sim = run_ensemble(g, rate, cfg, workers=workers).mean_s
                cells += [_fmt(s_th), _fmt(s_sim)]
        lines.append(",".join(cells))
        print_err(f"study row {idx + 1}/{len(ns.targets)}")

    _emit(ns, lines)
    return 0


_COMMANDS = {
    "generate": cmd_generate,
    "metrics": cmd_metrics,
    "threshold": cmd_threshold,
    "sweep": cmd_sweep,
    "study": cmd_study,
}


def main(argv=None) -> int:
    try:
        ns = _build_parser().parse_args(argv)
        ns = _resolve(ns)
        return _COMMANDS[ns.command](ns)
    except InputError as err:
        print_err(f"error: {err}")
        return 1
    except InfeasibleTargetError as err:
        print_err(f"infeasible target: {err}")
        return 2
    except ConvergenceError as err:
        print_err(f"no convergence: {err}")
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
