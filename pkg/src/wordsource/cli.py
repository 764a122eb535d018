"""Command-line entry points.

Utility subcommands (check-prefix, encode, decode, induced-prob, ...) are
thin wrappers over the library. ``run`` executes a named, config-driven
experiment and writes CSV/JSON results.

Exit codes: 0 pass, 1 experiment verdict failure, 2 config or input error,
3 resource-cap breach.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import __version__
from .entropy import InducedMeasure, sample_entropy_trace
from .ergodic import CylinderFunction, ams_diagnostic, default_checkpoints, ergodicity_spread
from .errors import (
    ConfigError,
    DecodeError,
    DomainError,
    NotPrefixFreeError,
    RangeError,
    ResourceError,
    UnsupportedModelError,
)
from .harness import (
    EXPERIMENT_DEFAULTS,
    resolve_config,
    run_experiment,
    validate_config,
    write_table_csv,
    write_table_jsonl,
)
from .shifts import TimeSubsequence, VariableLengthShiftSpec, bellow_check, variable_length_orbit
from .sources import MixtureSource, model_from_config
from .wordcode import (
    decode_prefix_free,
    encode_stream,
    is_prefix_free,
    kraft_sum,
    word_function_from_config,
)

EXIT_PASS = 0
EXIT_VERDICT = 1
EXIT_CONFIG = 2
EXIT_RESOURCE = 3


def _json_arg(text):
    """Parse an inline JSON argument or, when it names a file, its contents."""
    if os.path.exists(text):
        with open(text, "r", encoding="utf-8") as fh:
            return json.load(fh)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"argument is neither an existing file nor valid JSON: {text!r} ({exc})"
        ) from exc


def _symbols_arg(text):
    if not text.isdigit():
        raise ConfigError(f"expected a string of digit symbols, got {text!r}")
    return [int(ch) for ch in text]


def _emit_table(path, columns, rows, fmt):
    writer = write_table_csv if fmt == "csv" else write_table_jsonl
    writer(path, columns, rows)
    print(f"wrote {path}")


def cmd_check_prefix(args):
    wf = word_function_from_config(_json_arg(args.codebook))
    check = is_prefix_free(wf)
    print(f"prefix_free: {check.ok}")
    if not check.ok:
        print(f"witness: input symbols {check.witness} ({check.reason})")
    print(f"kraft_sum: {kraft_sum(wf)!r}")
    return EXIT_PASS


def cmd_encode(args):
    wf = word_function_from_config(_json_arg(args.codebook))
    enc = encode_stream(wf, _symbols_arg(args.input))
    print("output:", "".join(map(str, enc.output)))
    print("boundaries:", ",".join(map(str, enc.boundaries)))
    return EXIT_PASS


def cmd_decode(args):
    wf = word_function_from_config(_json_arg(args.codebook))
    decoded, consumed = decode_prefix_free(wf, _symbols_arg(args.input))
    print("decoded:", "".join(map(str, decoded)))
    print("consumed:", consumed)
    return EXIT_PASS


def cmd_induced_prob(args):
    model = model_from_config(_json_arg(args.model))
    wf = word_function_from_config(_json_arg(args.codebook))
    lp = InducedMeasure(model, wf).cylinder_log_probability(_symbols_arg(args.block))
    print(f"log_probability_nats: {lp!r}")
    print(f"log2_probability: {lp / np.log(2.0)!r}")
    print(f"probability: {np.exp(lp)!r}")
    return EXIT_PASS


def cmd_entropy_trace(args):
    model = model_from_config(_json_arg(args.model))
    if args.codebook:
        wf = word_function_from_config(_json_arg(args.codebook))
        measure = InducedMeasure(model, wf)
    else:
        measure = model
    path = measure.sample_path(args.horizon, args.seed)
    if args.checkpoints:
        cps = [int(c) for c in args.checkpoints.split(",")]
    else:
        cps = default_checkpoints(args.horizon).tolist()
    trace = sample_entropy_trace(measure, path.symbols, cps)
    rows = [(int(n), repr(float(v))) for n, v in zip(trace.horizons, trace.values)]
    if args.out:
        _emit_table(args.out, ["n", "sample_entropy_bits"], rows, args.format)
    else:
        for n, v in rows:
            print(f"{n},{v}")
    print(f"limit_estimate: {trace.limit_estimate!r} converged: {trace.converged}")
    if trace.left_support_at is not None:
        print(f"left_support_at: {trace.left_support_at}")
    return EXIT_PASS


def _run_named(name, overrides):
    cfg = resolve_config({"experiment": name, **overrides})
    manifest = run_experiment(cfg)
    print(f"experiment: {manifest.experiment}")
    print(f"config_hash: {manifest.config_hash}")
    print(f"passed: {manifest.passed}")
    print(f"wall_time_s: {manifest.wall_time_s:.3f}")
    for f in manifest.output_files:
        print(f"wrote {f}")
    return EXIT_PASS if manifest.passed else EXIT_VERDICT


def cmd_aep(args):
    model_cfg = _json_arg(args.model) if args.model else None
    codebook_cfg = _json_arg(args.codebook) if args.codebook else None
    overrides = {}
    if model_cfg:
        overrides["model"] = model_cfg
    if codebook_cfg:
        overrides["codebook"] = codebook_cfg
    for key in ("seed", "horizon", "paths"):
        value = getattr(args, key)
        if value is not None:
            overrides[key] = value
    if args.out:
        overrides["output_dir"] = args.out
    overrides["format"] = args.format
    model = model_from_config(model_cfg or EXPERIMENT_DEFAULTS["aep-prefix-free"]["model"])
    wf = word_function_from_config(
        codebook_cfg or EXPERIMENT_DEFAULTS["aep-prefix-free"]["codebook"]
    )
    if isinstance(model, MixtureSource) and is_prefix_free(wf):
        name = "aep-mixture"
    elif is_prefix_free(wf):
        name = "aep-prefix-free"
    else:
        name = "aep-non-prefix-free"
    return _run_named(name, overrides)


def cmd_conservation(args):
    overrides = {}
    if args.model:
        overrides["model"] = _json_arg(args.model)
    if args.codebook:
        overrides["codebook"] = _json_arg(args.codebook)
    if args.block_cap:
        overrides["params"] = {"block_cap": args.block_cap}
    if args.out:
        overrides["output_dir"] = args.out
    overrides["format"] = args.format
    return _run_named("conservation", overrides)


def cmd_ams_check(args):
    model = model_from_config(_json_arg(args.model))
    if args.codebook:
        wf = word_function_from_config(_json_arg(args.codebook))
        measure = InducedMeasure(model, wf)
    else:
        measure = model
    cylinders = [_symbols_arg(c) for c in args.cylinder]
    verdicts = ams_diagnostic(measure, cylinders, args.horizon, seed=args.seed)
    rows = []
    for cyl, verdict in zip(args.cylinder, verdicts):
        for n, v in zip(verdict.checkpoints, verdict.partial_averages):
            rows.append((cyl, int(n), repr(float(v))))
        err = "" if verdict.stderr2 is None else f" +-{verdict.stderr2!r}"
        print(f"cylinder {cyl}: final {verdict.final!r}{err} "
              f"spread {verdict.spread!r} converged {verdict.converged}")
    if args.out:
        _emit_table(args.out, ["cylinder", "n", "cesaro_average"], rows, args.format)
    return EXIT_PASS


def cmd_ergodic_check(args):
    model = model_from_config(_json_arg(args.model))
    if args.codebook:
        wf = word_function_from_config(_json_arg(args.codebook))
        measure = InducedMeasure(model, wf)
        alphabet = wf.output_alphabet_size
    else:
        measure = model
        alphabet = model.alphabet_size
    pattern = _symbols_arg(args.pattern) if args.pattern else [0]
    g = CylinderFunction.indicator(alphabet, pattern)
    sr = ergodicity_spread(measure, g, args.paths, args.horizon, args.seed)
    print(f"paths: {args.paths}")
    print(f"spread: {sr.spread!r}")
    print(f"final_time_averages_head: {[round(float(v), 6) for v in sr.finals[:10]]}")
    return EXIT_PASS


def cmd_vls_orbit(args):
    if args.codebook:
        wf = word_function_from_config(_json_arg(args.codebook))
        spec = VariableLengthShiftSpec.from_codebook(wf)
    elif args.constant:
        spec = VariableLengthShiftSpec.constant(args.alphabet, args.constant)
    else:
        raise ConfigError("vls-orbit needs --codebook or --constant")
    if args.input:
        symbols = _symbols_arg(args.input)
    elif args.model:
        model = model_from_config(_json_arg(args.model))
        symbols = model.sample_path(args.horizon, args.seed).symbols
    else:
        raise ConfigError("vls-orbit needs --input or --model")
    orbit = variable_length_orbit(spec, symbols, args.steps)
    print("zeta:", ",".join(map(str, orbit.zeta)))
    horizon = int(orbit.zeta[-1]) + 1
    xi = orbit.weight_prefix
    print("xi:", "".join(map(str, xi)))
    print(f"partial_density: {float(xi.sum() / horizon)!r}")
    if args.out:
        rows = [(int(n), int(z)) for n, z in enumerate(orbit.zeta)]
        _emit_table(args.out, ["n", "zeta_n"], rows, args.format)
    return EXIT_PASS


def cmd_bellow(args):
    if args.config:
        return cmd_run(args)
    horizon = args.horizon
    zeta = np.arange(0, horizon + args.stride + 1, args.stride)
    ts = TimeSubsequence(zeta=zeta)
    values = np.array([(-1.0) ** i for i in range(horizon)])
    checkpoints = default_checkpoints(horizon)
    rows = []
    for n in checkpoints:
        partials = bellow_check(values, ts, int(n))
        rows.append((int(n), repr(partials.lhs), repr(partials.rhs)))
    for row in rows:
        print(",".join(map(str, row)))
    if args.out:
        _emit_table(args.out, ["n", "lhs_partial", "rhs_partial"], rows, args.format)
    return EXIT_PASS


def cmd_run(args):
    cfg = validate_config(args.config)
    for key in ("seed", "horizon", "paths"):
        value = getattr(args, key, None)
        if value is not None:
            setattr(cfg, key, value)
    if getattr(args, "out", None):
        cfg.output_dir = args.out
    if getattr(args, "format", None):
        cfg.format = args.format
    manifest = run_experiment(cfg)
    print(f"experiment: {manifest.experiment}")
    print(f"config_hash: {manifest.config_hash}")
    print(f"artifact_version: {manifest.artifact_version}")
    print(f"passed: {manifest.passed}")
    print(f"wall_time_s: {manifest.wall_time_s:.3f}")
    for f in manifest.output_files:
        print(f"wrote {f}")
    return EXIT_PASS if manifest.passed else EXIT_VERDICT


def _add_common_out(sub):
    sub.add_argument("--out", help="output file or directory")
    sub.add_argument("--format", choices=["csv", "jsonl"], default="csv")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="wordsource",
        description="Word-valued sources: codes, induced measures, entropy checks.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("check-prefix", help="check the prefix-free property")
    sub.add_argument("--codebook", required=True, help="codebook JSON or file")
    sub.set_defaults(fn=cmd_check_prefix)

    sub = subs.add_parser("encode", help="encode a digit string")
    sub.add_argument("--codebook", required=True)
    sub.add_argument("--input", required=True, help="input symbols, e.g. 0110")
    sub.set_defaults(fn=cmd_encode)

    sub = subs.add_parser("decode", help="decode a digit string (prefix-free only)")
    sub.add_argument("--codebook", required=True)
    sub.add_argument("--input", required=True)
    sub.set_defaults(fn=cmd_decode)

    sub = subs.add_parser("induced-prob", help="exact output-block probability")
    sub.add_argument("--model", required=True, help="model JSON or file")
    sub.add_argument("--codebook", required=True)
    sub.add_argument("--block", required=True, help="output symbols, e.g. 10")
    sub.set_defaults(fn=cmd_induced_prob)

    sub = subs.add_parser("entropy-trace", help="sample-entropy trace along a path")
    sub.add_argument("--model", required=True)
    sub.add_argument("--codebook", help="trace the induced measure instead")
    sub.add_argument("--horizon", type=int, default=10_000)
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--checkpoints", help="comma-separated horizons")
    _add_common_out(sub)
    sub.set_defaults(fn=cmd_entropy_trace)

    sub = subs.add_parser("aep", help="per-path AEP experiment")
    sub.add_argument("--model")
    sub.add_argument("--codebook")
    sub.add_argument("--seed", type=int)
    sub.add_argument("--horizon", type=int)
    sub.add_argument("--paths", type=int)
    _add_common_out(sub)
    sub.set_defaults(fn=cmd_aep)

    sub = subs.add_parser("conservation", help="entropy conservation report")
    sub.add_argument("--model")
    sub.add_argument("--codebook")
    sub.add_argument("--block-cap", type=int, dest="block_cap")
    _add_common_out(sub)
    sub.set_defaults(fn=cmd_conservation)

    sub = subs.add_parser("ams-check", help="Cesaro traces of shifted probabilities")
    sub.add_argument("--model", required=True)
    sub.add_argument("--codebook", help="check the induced measure instead")
    sub.add_argument("--cylinder", action="append", required=True,
                     help="cylinder digits; repeatable")
    sub.add_argument("--horizon", type=int, default=10_000)
    sub.add_argument("--seed", type=int, default=0)
    _add_common_out(sub)
    sub.set_defaults(fn=cmd_ams_check)

    sub = subs.add_parser("ergodic-check", help="cross-path spread of time averages")
    sub.add_argument("--model", required=True)
    sub.add_argument("--codebook")
    sub.add_argument("--pattern", help="indicator cylinder digits (default 0)")
    sub.add_argument("--paths", type=int, default=100)
    sub.add_argument("--horizon", type=int, default=10_000)
    sub.add_argument("--seed", type=int, default=0)
    sub.set_defaults(fn=cmd_ergodic_check)

    sub = subs.add_parser("vls-orbit", help="variable-length shift orbit")
    sub.add_argument("--codebook", help="codeword-driven shift")
    sub.add_argument("--constant", type=int, help="constant shift size")
    sub.add_argument("--alphabet", type=int, default=2)
    sub.add_argument("--input", help="explicit symbol string")
    sub.add_argument("--model", help="sample the input from a model")
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--horizon", type=int, default=1000)
    sub.add_argument("--steps", type=int, default=20)
    _add_common_out(sub)
    sub.set_defaults(fn=cmd_vls_orbit)

    sub = subs.add_parser("bellow", help="density-lemma partial sums")
    sub.add_argument("--config", help="run the config-driven experiment instead")
    sub.add_argument("--horizon", type=int, default=10_000)
    sub.add_argument("--stride", type=int, default=2)
    sub.add_argument("--seed", type=int)
    sub.add_argument("--paths", type=int)
    _add_common_out(sub)
    sub.set_defaults(fn=cmd_bellow)

    sub = subs.add_parser("run", help="run a config-driven experiment")
    sub.add_argument("--config", required=True)
    sub.add_argument("--seed", type=int)
    sub.add_argument("--horizon", type=int)
    sub.add_argument("--paths", type=int)
    _add_common_out(sub)
    sub.set_defaults(fn=cmd_run)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        code = args.fn(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        code = EXIT_CONFIG
    except (DomainError, RangeError, DecodeError, NotPrefixFreeError,
            UnsupportedModelError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        code = EXIT_CONFIG
    except ResourceError as exc:
        print(f"resource error: {exc}", file=sys.stderr)
        code = EXIT_RESOURCE
    return code


if __name__ == "__main__":
    sys.exit(main())
