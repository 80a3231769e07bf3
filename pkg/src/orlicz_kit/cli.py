"""``orlicz-kit`` command line front end.

Exit codes: 0 when every check passed, 1 when a verification failed, 2 for
config, usage or I/O errors.
"""
from __future__ import annotations

import argparse
import datetime as _dt
import io
import json
import math
import os
import sys
import tempfile

import numpy as np

from . import __version__
from .config import (
    COMMANDS, ALIASES, ExperimentConfig, materialize_pairs, materialize_tests,
    parse_config, serialize_config,
)
from .errors import ConfigError, OrliczKitError
from .grid import lattice_cells, sample
from .norms import weak_lebesgue_norm, weak_orlicz_norm, weighted_profile
from .theorems import (
    char_norm_oracle, probe_no_global_inclusion, verify_ball_inclusion,
    verify_ball_inclusion_lebesgue, verify_char_norm, verify_holder, verify_inclusion_lebesgue,
    verify_inclusion_orlicz, verify_translation_bounds,
)
from .weights import One, check_dominates, check_submultiplicative
from .young import Power, check_delta2, check_precedes, validate_young

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


def _default_weight(params, key, n):
    return params.get(key) or One(n)


def run_command(cfg: ExperimentConfig) -> dict:
    """Dispatch a parsed config; returns a report bundle (plain data, JSON ready)."""
    p = cfg.params
    rng = np.random.default_rng(cfg.seed)
    cmd = cfg.command
    bundle = {"command": cmd, "seed": cfg.seed, "config": serialize_config(cfg)}
    profile = None
    results = []

    if cmd == "norm":
        spec = p["grid"]
        u = _default_weight(p, "u", spec.n)
        f = sample(p["f"], spec)
        if "phi" in p:
            res = weak_orlicz_norm(p["phi"], u, f)
        else:
            res = weak_lebesgue_norm(p["p"], u, f)
        profile = weighted_profile(f, u)
        results.append({"claim": "norm", "passed": res.finite, **res.to_dict()})
    elif cmd == "oracle":
        value = char_norm_oracle(p["phi"], p["ball"])
        entry = {"claim": "oracle", "passed": True, "value": value, "volume": p["ball"].volume}
        results.append(entry)
        if "grid" in p:
            u = _default_weight(p, "u", p["grid"].n)
            results.append(verify_char_norm(p["phi"], u, p["ball"], p["grid"]).to_dict())
    elif cmd == "validate-young":
        val = validate_young(p["phi"])
        entry = {"claim": "validate-young", **val.to_dict()}
        if val.passed:
            entry["delta2"] = check_delta2(p["phi"]).to_dict()
        results.append(entry)
    elif cmd == "validate-weight":
        results.append({"claim": "validate-weight", **check_submultiplicative(p["u"]).to_dict()})
    elif cmd == "check-precede":
        res = check_precedes(p["phi1"], p["phi2"])
        results.append({"claim": "check-precede", "passed": res.holds, **res.to_dict()})
    elif cmd == "check-dominate":
        res = check_dominates(p["u1"], p["u2"])
        results.append({"claim": "check-dominate", "passed": res.holds, **res.to_dict()})
    elif cmd == "verify-inclusion":
        spec = p["grid"]
        tests = materialize_tests(p["tests"], spec, rng)
        u1, u2 = _default_weight(p, "u1", spec.n), _default_weight(p, "u2", spec.n)
        if "phi1" in p:
            rep = verify_inclusion_orlicz(p["phi1"], p.get("phi2", p["phi1"]), u1, u2, tests)
        else:
            rep = verify_inclusion_lebesgue(p["p"], u1, u2, tests)
        results.append(rep.to_dict())
    elif cmd == "verify-holder":
        spec = p["grid"]
        pairs = materialize_pairs(p["pairs"], spec, rng)
        u1, u2, u3 = (_default_weight(p, k, spec.n) for k in ("u1", "u2", "u3"))
        rep = verify_holder(p["phi1"], p["phi2"], p["phi3"], u1, u2, u3, pairs, p["X"])
        results.append(rep.to_dict())
    elif cmd == "verify-ball-inclusion":
        spec = p["grid"]
        tests = materialize_tests(p["tests"], spec, rng)
        u1, u2 = _default_weight(p, "u1", spec.n), _default_weight(p, "u2", spec.n)
        if "p1" in p:
            rep = verify_ball_inclusion_lebesgue(p["p1"], p["p2"], u1, u2, p["X"], spec, tests)
        else:
            uQ = _default_weight(p, "uQ", spec.n)
            rep = verify_ball_inclusion(p["phi1"], p["phi2"], p["phiH"], u1, u2, uQ, p["X"], spec, tests)
        results.append(rep.to_dict())
    elif cmd == "verify-translation":
        spec = p["grid"]
        u = _default_weight(p, "u", spec.n)
        f = sample(p["f"], spec)
        shifts = [lattice_cells(spec, s) for s in p["shifts"]]
        rep = verify_translation_bounds(p.get("phi", p.get("p")), u, f, shifts)
        results.append(rep.to_dict())
    elif cmd == "probe-no-inclusion":
        u = p.get("u")
        rep = probe_no_global_inclusion(p["p1"], p["p2"], u, p.get("n"))
        results.append(rep.to_dict())
    else:  # pragma: no cover - parse_config rejects unknown commands
        raise ConfigError([("command", f"unknown command {cmd!r}")])

    bundle["results"] = results
    bundle["passed"] = all(r.get("passed", False) for r in results)
    if profile is not None:
        bundle["_profile"] = profile
    return bundle


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items() if not k.startswith("_")}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def _atomic_write(path, text):
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def emit_report(bundle: dict, out_dir: str, profile_csv: bool = False, timestamp: str | None = None) -> list:
    """Write one JSON file per result (plus the profile CSV on request); returns the paths."""
    os.makedirs(out_dir, exist_ok=True)
    if timestamp is None:
        timestamp = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
    written = []
    for result in bundle["results"]:
        doc = {
            "tool": f"orlicz-kit {__version__}",
            "command": bundle["command"],
            "seed": bundle["seed"],
            "config": bundle["config"],
            "result": result,
            "timestamp": timestamp,
        }
        path = os.path.join(out_dir, f"{result['claim']}.json")
        _atomic_write(path, json.dumps(_jsonable(doc), indent=2, sort_keys=True) + "\n")
        written.append(path)
    if profile_csv and "_profile" in bundle:
        buf = io.StringIO()
        bundle["_profile"].write_csv(buf)
        path = os.path.join(out_dir, "profile.csv")
        _atomic_write(path, buf.getvalue())
        written.append(path)
    return written


def build_parser():
    parser = argparse.ArgumentParser(
        prog="orlicz-kit",
        description="Weighted weak Lebesgue / weak Orlicz quasi-norms and inclusion checks.")
    parser.add_argument("command", choices=COMMANDS + tuple(sorted(ALIASES)))
    parser.add_argument("--config", required=True, help="JSON experiment config")
    parser.add_argument("--out", default=".", help="output directory for JSON reports")
    parser.add_argument("--profile-csv", action="store_true",
                        help="also write the (value, measure) distribution profile (norm command)")
    parser.add_argument("--seed", type=int, default=None, help="override the config seed")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        with open(args.config, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"orlicz-kit: cannot read config: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        command = None if args.command in ALIASES else args.command
        cfg = parse_config(text, command=command)
        if args.seed is not None:
            cfg = ExperimentConfig(cfg.command, cfg.params, args.seed)
        bundle = run_command(cfg)
    except ConfigError as exc:
        for path, msg in exc.errors:
            print(f"orlicz-kit: config error at {path or '<root>'}: {msg}", file=sys.stderr)
        return EXIT_USAGE
    except OrliczKitError as exc:
        print(f"orlicz-kit {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        paths = emit_report(bundle, args.out, args.profile_csv)
    except OSError as exc:
        print(f"orlicz-kit: cannot write report: {exc}", file=sys.stderr)
        return EXIT_USAGE
    for result in bundle["results"]:
        status = result.get("status", "passed" if result.get("passed") else "failed")
        print(f"{result['claim']}: {status}")
    for path in paths:
        print(f"wrote {path}")
    return EXIT_OK if bundle["passed"] else EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
