"""Command-line interface: config parsing, subcommand dispatch, reports.

Three subcommands share one TOML configuration (user file merged over the
packaged ``default_config.toml``):

* ``inner``   evaluates one inner-product kernel on two test functions,
* ``verify``  runs the identity suites and writes record/sweep reports,
* ``scan``    sweeps observable commutators over a displacement grid.

Exit codes: 0 on success, 1 when any verification record or spacelike sweep
row fails (or a kernel evaluation errors out), 2 on configuration, parse or
I/O problems.  Reports are byte-deterministic for a fixed config and seed;
every subcommand writes a machine-readable summary.json next to its data
files.
"""

import argparse
import json
import sys
from importlib import resources
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from . import fields, shell, testfn, verify, wick
from .params import ModelParams, QuadratureSpec


class ConfigError(Exception):
    """Configuration file or function-spec problem; maps to exit code 2."""


# ---------------------------------------------------------------------------
# configuration

def _deep_merge(base, extra):
    out = dict(base)
    for key, val in extra.items():
        if isinstance(val, dict) and isinstance(out.get(key), dict):
            out[key] = _deep_merge(out[key], val)
        else:
            out[key] = val
    return out


def load_config(path=None):
    """Packaged defaults, with the user file (if any) merged on top."""
    text = resources.files("kgfield").joinpath("default_config.toml").read_text()
    cfg = tomllib.loads(text)
    if path is not None:
        try:
            raw = Path(path).read_bytes()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        try:
            user = tomllib.loads(raw.decode("utf-8"))
        except (tomllib.TOMLDecodeError, UnicodeDecodeError) as exc:
            raise ConfigError(f"config {path}: {exc}") from exc
        cfg = _deep_merge(cfg, user)
    return cfg


def params_from_config(cfg):
    model = cfg.get("model", {})
    quad = cfg.get("quadrature", {})
    try:
        spec = QuadratureSpec(
            rule=quad["rule"],
            abs_tol=float(quad["abs_tol"]),
            rel_tol=float(quad["rel_tol"]),
            max_nodes=int(quad["max_nodes"]),
            kmax=float(quad["kmax"]),
            panel_scale=float(quad["panel_scale"]),
        )
        return ModelParams(
            mass=float(model["mass"]),
            dim=int(model["dim"]),
            hbar=float(model["hbar"]),
            quad=spec,
        )
    except KeyError as exc:
        raise ConfigError(f"missing config key: [model]/[quadrature] {exc}") from exc
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad [model]/[quadrature] value: {exc}") from exc


# ---------------------------------------------------------------------------
# test-function specs

_WRAPPERS = {"conjugate": testfn.conjugate, "bullet": testfn.bullet}


def _vector(table, name, field, length):
    try:
        vec = tuple(float(x) for x in table[field])
    except KeyError as exc:
        raise ConfigError(f"functions.{name}: missing field {field!r}") from exc
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"functions.{name}.{field}: not a number list") from exc
    if len(vec) != length:
        raise ConfigError(
            f"functions.{name}.{field}: expected {length} entries "
            f"(t component first), got {len(vec)}")
    return vec


def _coeff(table, name):
    raw = table.get("coeff", [1.0, 0.0])
    if isinstance(raw, (int, float)):
        return complex(raw)
    try:
        re, im = (float(x) for x in raw)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"functions.{name}.coeff: expected [re, im]") from exc
    return complex(re, im)


def function_from_table(name, table, dim):
    """Build one test function from a [functions.NAME] config table."""
    kind = table.get("kind")
    n = dim + 1
    if kind == "gaussian":
        f = testfn.gaussian(_coeff(table, name), _vector(table, name, "center", n),
                            _vector(table, name, "widths", n),
                            _vector(table, name, "wavevector", n))
    elif kind == "bump":
        f = testfn.bump(_coeff(table, name), _vector(table, name, "center", n),
                        _vector(table, name, "radii", n))
    elif kind == "zero":
        f = testfn.zero(dim)
    else:
        raise ConfigError(
            f"functions.{name}.kind: expected gaussian, bump or zero, got {kind!r}")
    for wrap in table.get("wrappers", ()):
        if wrap not in _WRAPPERS:
            raise ConfigError(
                f"functions.{name}.wrappers: unknown wrapper {wrap!r}; "
                f"expected one of {sorted(_WRAPPERS)}")
        f = _WRAPPERS[wrap](f)
    return f


def parse_function_spec(spec, cfg, dim):
    """Resolve a CLI positional: a config function name, optionally under
    nested conjugate(...)/bullet(...) wrappers."""
    s = spec.strip()
    for wname, wfn in _WRAPPERS.items():
        if s.startswith(wname + "(") and s.endswith(")"):
            return wfn(parse_function_spec(s[len(wname) + 1:-1], cfg, dim))
    funcs = cfg.get("functions", {})
    if s not in funcs:
        raise ConfigError(
            f"unknown test function {s!r}; config defines {sorted(funcs)}")
    return function_from_table(s, funcs[s], dim)


# ---------------------------------------------------------------------------
# output plumbing

def _write_text(outdir, filename, text):
    outdir.mkdir(parents=True, exist_ok=True)
    with open(outdir / filename, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _outdir(args, cfg):
    return Path(args.out if args.out is not None else cfg["output"]["dir"])


def _format(args, cfg):
    fmt = args.format if args.format is not None else cfg["output"]["format"]
    if fmt not in ("csv", "jsonl"):
        raise ConfigError(f"output.format: expected csv or jsonl, got {fmt!r}")
    return fmt


def _override(cfg):
    val = cfg.get("verify", {}).get("tolerance_override")
    if val is None:
        return None
    try:
        return float(val)
    except (TypeError, ValueError) as exc:
        raise ConfigError("verify.tolerance_override: not a number") from exc


# ---------------------------------------------------------------------------
# subcommands

def cmd_inner(args):
    cfg = load_config(args.config)
    params = params_from_config(cfg)
    f = parse_function_spec(args.left, cfg, params.dim)
    g = parse_function_spec(args.right, cfg, params.dim)
    kernel = {"full": shell.ip_full, "pos": shell.ip_pos,
              "neg": shell.ip_neg, "bullet": shell.ip_bullet}[args.kernel]
    try:
        out = kernel(f, g, params)
    except Exception as exc:  # noqa: BLE001 - surfaced as exit code 1
        print(f"kernel evaluation failed: {exc}", file=sys.stderr)
        return 1
    value = complex(out.value)
    est = float(out.est_error)
    sign = "-" if value.imag < 0 else "+"
    print(f"value = {value.real!r} {sign} {abs(value.imag)!r}j")
    print(f"est_error = {est!r}")
    print(f"nodes = {int(out.nodes_used)}")
    summary = {
        "kernel": args.kernel, "left": args.left, "right": args.right,
        "value": [value.real, value.imag],
        "est_error": est, "nodes": int(out.nodes_used),
    }
    _write_text(_outdir(args, cfg), "summary.json",
                json.dumps(summary, sort_keys=True, indent=2) + "\n")
    return 0


def _dump_elements(outdir, seed):
    """elements.jsonl: normal-ordered terms of the moment-suite generators."""
    params = ModelParams()
    labels = verify.mixed_frequency_labels(seed, n=3, dim=params.dim)
    random_model = wick.random_field_model(params)
    quantum_model = wick.quantum_field_model(params)
    entries = []
    for i, lab in enumerate(labels):
        entries.append(("random", f"field_f{i}", fields.phi(random_model, lab)))
        entries.append(("random", f"observable_f{i}",
                        fields.random_observable(random_model, lab)))
        entries.append(("quantum", f"psi_f{i}", fields.psi(quantum_model, lab)))
        entries.append(("quantum", f"combined_annihilator_f{i}",
                        fields.combined_annihilator(quantum_model, lab)))
    lines = [json.dumps({"model": model, "label": label,
                         "terms": wick.element_records(elem)}, sort_keys=True)
             for model, label, elem in entries]
    _write_text(outdir, "elements.jsonl", "\n".join(lines) + "\n")


def cmd_verify(args):
    cfg = load_config(args.config)
    params = params_from_config(cfg)
    corpus = cfg["corpus"]
    seed = args.seed if args.seed is not None else int(corpus["seed"])
    jobs = args.jobs if args.jobs is not None else int(cfg["verify"]["jobs"])
    fmt = _format(args, cfg)
    outdir = _outdir(args, cfg)
    suites = [name for name in verify.SUITE_NAMES
              if cfg["suites"].get(name, True)]
    try:
        records, sweep_rows, timings = verify.run_identity_suite(
            seed=seed, jobs=jobs, quad=params.quad,
            tolerance_override=_override(cfg), suites=suites,
            n_gaussian=int(corpus["gaussian_pairs"]),
            n_bump=int(corpus["bump_pairs"]),
            crosscheck_pairs=int(corpus["crosscheck_pairs"]))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    if fmt == "csv":
        _write_text(outdir, "records.csv", verify.records_to_csv(records))
        _write_text(outdir, "sweep.csv", verify.sweep_to_csv(sweep_rows))
    else:
        _write_text(outdir, "records.jsonl", verify.records_to_jsonl(records))
        _write_text(outdir, "sweep.jsonl", verify.sweep_to_jsonl(sweep_rows))
    _write_text(outdir, "summary.json", verify.summary_json(records, sweep_rows))
    if args.dump_terms:
        _dump_elements(outdir, seed)

    summary = verify.summary_dict(records, sweep_rows)
    print(f"records: {summary['records_total']} total, "
          f"{summary['records_passed']} passed, "
          f"{summary['records_failed']} failed, "
          f"max residual {summary['max_residual']:.3e}; "
          f"sweep: {summary['sweep_rows']} rows, "
          f"{summary['sweep_failed']} failed")
    for name, seconds in timings:
        print(f"  {name}: {seconds:.2f}s", file=sys.stderr)
    failed = summary["records_failed"] + summary["sweep_failed"]
    return 1 if failed else 0


def cmd_scan(args):
    cfg = load_config(args.config)
    params = params_from_config(cfg)
    scan = cfg["scan"]
    fmt = _format(args, cfg)
    outdir = _outdir(args, cfg)
    try:
        time_offsets = [float(x) for x in scan["time_offsets"]]
        space_offsets = [float(x) for x in scan["space_offsets"]]
        radius = float(scan["radius"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad [scan] block: {exc}") from exc
    rows = verify.commutator_scan(params, time_offsets, space_offsets,
                                  radius=radius, override=_override(cfg))
    if fmt == "csv":
        _write_text(outdir, "sweep.csv", verify.sweep_to_csv(rows))
    else:
        _write_text(outdir, "sweep.jsonl", verify.sweep_to_jsonl(rows))
    _write_text(outdir, "summary.json", verify.summary_json([], rows))
    failed = sum(0 if r.passed else 1 for r in rows)
    print(f"sweep: {len(rows)} rows, {failed} spacelike failures")
    return 1 if failed else 0


# ---------------------------------------------------------------------------
# entry point

def _u64(text):
    val = int(text)
    if not 0 <= val < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit int")
    return val


def _positive_int(text):
    val = int(text)
    if val < 1:
        raise argparse.ArgumentTypeError("jobs must be >= 1")
    return val


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", default=None,
                        help="TOML config merged over the packaged defaults")
    common.add_argument("--seed", type=_u64, default=None,
                        help="override [corpus] seed")
    common.add_argument("--jobs", type=_positive_int, default=None,
                        help="parallel work items (1 = sequential, same bytes)")
    common.add_argument("--format", choices=("csv", "jsonl"), default=None,
                        help="report format, overrides [output] format")
    common.add_argument("--dump-terms", action="store_true",
                        help="verify only: also write elements.jsonl")
    common.add_argument("--out", metavar="DIR", default=None,
                        help="report directory, overrides [output] dir")

    parser = argparse.ArgumentParser(
        prog="kgfield",
        description="mass-shell kernels and field-algebra identity checks")
    sub = parser.add_subparsers(dest="command", required=True)

    p_inner = sub.add_parser("inner", parents=[common],
                             help="evaluate one kernel on two test functions")
    p_inner.add_argument("left", help="function name or conjugate(...)/bullet(...)")
    p_inner.add_argument("right")
    p_inner.add_argument("kernel", choices=("full", "pos", "neg", "bullet"))

    sub.add_parser("verify", parents=[common],
                   help="run identity suites, write records/sweep/summary")
    sub.add_parser("scan", parents=[common],
                   help="commutator magnitudes over a displacement grid")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    handler = {"inner": cmd_inner, "verify": cmd_verify, "scan": cmd_scan}
    try:
        return handler[args.command](args)
    except ConfigError as exc:
        print(f"kgfield: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"kgfield: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
