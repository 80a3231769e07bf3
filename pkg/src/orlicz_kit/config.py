"""JSON experiment configs: descriptor parsing, validation and serialization.

Every parse error carries a dotted path to the offending key, e.g.
``phi.p`` or ``tests[2].ball.r``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field


from .errors import ConfigError, OrliczKitError
from .grid import Ball, Gaussian, GridSpec, Indicator, PowerDecay, Scale, Sum, random_grid_function, sample
from .weights import ExpNorm, GaussExp, One, PolyNorm, Product, Quotient
from .young import ExpMinusOne, Power, PowerSum, ScaledPower, Tabulated

__all__ = [
    "COMMANDS", "ALIASES", "ExperimentConfig", "RandomTests",
    "parse_config", "serialize_config", "parse_young", "parse_weight", "parse_grid",
    "parse_ball", "parse_expr",
]

COMMANDS = (
    "norm", "oracle", "validate-young", "validate-weight", "check-precede", "check-dominate",
    "verify-inclusion", "verify-holder", "verify-ball-inclusion", "verify-translation",
    "probe-no-inclusion",
)
ALIASES = {"validate", "check", "verify", "probe"}


def _join(path, key):
    if isinstance(key, int):
        return f"{path}[{key}]"
    return f"{path}.{key}" if path else key


def _require(d, key, path):
    if not isinstance(d, dict):
        raise ConfigError([(path, "expected an object")])
    if key not in d:
        raise ConfigError([(_join(path, key), "missing field")])
    return d[key]


def _number(d, key, path, *, minimum=None, strict=False, default=None, integer=False):
    if default is not None and key not in d:
        return default
    v = _require(d, key, path)
    p = _join(path, key)
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError([(p, "expected a number")])
    if integer and not float(v).is_integer():
        raise ConfigError([(p, "expected an integer")])
    v = int(v) if integer else float(v)
    if not math.isfinite(v):
        raise ConfigError([(p, "must be finite")])
    if minimum is not None and (v <= minimum if strict else v < minimum):
        raise ConfigError([(p, f"must be {'>' if strict else '>='} {minimum}")])
    return v


def _wrap(path, build):
    try:
        return build()
    except ConfigError:
        raise
    except OrliczKitError as exc:
        raise ConfigError([(path, str(exc))]) from None


def parse_young(d, path="phi"):
    variant = _require(d, "variant", path)
    if variant == "power":
        p = _number(d, "p", path, minimum=1)
        return Power(p)
    if variant == "scaled_power":
        c = _number(d, "c", path, minimum=0, strict=True)
        p = _number(d, "p", path, minimum=1)
        return ScaledPower(c, p)
    if variant == "exp_minus_one":
        return ExpMinusOne()
    if variant == "power_sum":
        args = [_number(d, k, path, minimum=0, strict=True) if k[0] == "c" else _number(d, k, path, minimum=1)
                for k in ("c1", "p1", "c2", "p2")]
        return PowerSum(*args)
    if variant == "tabulated":
        nodes = _require(d, "nodes", path)
        npath = _join(path, "nodes")
        if not isinstance(nodes, list) or not all(
                isinstance(n, list) and len(n) == 2 and all(isinstance(x, (int, float)) for x in n)
                for n in nodes):
            raise ConfigError([(npath, "expected a list of [t, phi] pairs")])
        return _wrap(npath, lambda: Tabulated(tuple(tuple(n) for n in nodes)))
    raise ConfigError([(_join(path, "variant"), f"unknown Young function variant {variant!r}")])


def parse_weight(d, path="u"):
    variant = _require(d, "variant", path)
    if variant in ("one", "expnorm", "polynorm", "gaussexp"):
        n = _number(d, "n", path, integer=True, default=1)
        if n not in (1, 2, 3):
            raise ConfigError([(_join(path, "n"), "dimension must be 1, 2 or 3")])
        if variant == "one":
            return One(n)
        a = _number(d, "a", path, minimum=0, strict=(variant == "gaussexp"))
        return {"expnorm": ExpNorm, "polynorm": PolyNorm, "gaussexp": GaussExp}[variant](a, n)
    if variant == "product":
        factors = _require(d, "factors", path)
        fpath = _join(path, "factors")
        if not isinstance(factors, list) or len(factors) != 2:
            raise ConfigError([(fpath, "expected exactly two factor weights")])
        w1, w2 = (parse_weight(f, _join(fpath, i)) for i, f in enumerate(factors))
        return _wrap(fpath, lambda: Product(w1, w2))
    if variant == "quotient":
        num = parse_weight(_require(d, "numerator", path), _join(path, "numerator"))
        den = parse_weight(_require(d, "denominator", path), _join(path, "denominator"))
        return _wrap(path, lambda: Quotient(num, den))
    raise ConfigError([(_join(path, "variant"), f"unknown weight variant {variant!r}")])


def parse_grid(d, path="grid"):
    n = _number(d, "n", path, integer=True)
    R = _number(d, "R", path, minimum=0, strict=True)
    m = _number(d, "m", path, integer=True)
    return _wrap(path, lambda: GridSpec(n, R, m))


def parse_ball(d, path="ball"):
    a = _require(d, "a", path)
    if not isinstance(a, list) or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in a):
        raise ConfigError([(_join(path, "a"), "expected a list of coordinates")])
    r = _number(d, "r", path, minimum=0, strict=True)
    if "n" in d and _number(d, "n", path, integer=True) != len(a):
        raise ConfigError([(_join(path, "n"), f"center has {len(a)} coordinates")])
    return _wrap(path, lambda: Ball(tuple(a), r))


@dataclass(frozen=True)
class RandomTests:
    """Placeholder for ``count`` seeded random test functions, optionally supported in a ball."""

    count: int
    support: Ball | None = None

    def to_config(self):
        d = {"kind": "random", "count": self.count}
        if self.support is not None:
            d["support"] = self.support.to_config()
        return d


def parse_expr(d, path="f"):
    kind = _require(d, "kind", path)
    if kind == "indicator":
        return Indicator(parse_ball(_require(d, "ball", path), _join(path, "ball")))
    if kind == "power_decay":
        return PowerDecay(_number(d, "alpha", path, minimum=0, strict=True))
    if kind == "gaussian":
        return Gaussian(_number(d, "sigma", path, minimum=0, strict=True))
    if kind == "sum":
        terms = _require(d, "terms", path)
        if not isinstance(terms, list) or not terms:
            raise ConfigError([(_join(path, "terms"), "expected a non-empty list")])
        return Sum(tuple(parse_expr(t, _join(_join(path, "terms"), i)) for i, t in enumerate(terms)))
    if kind == "scale":
        return Scale(_number(d, "c", path), parse_expr(_require(d, "expr", path), _join(path, "expr")))
    raise ConfigError([(_join(path, "kind"), f"unknown function kind {kind!r}")])


def _parse_tests(v, path):
    if isinstance(v, dict) and v.get("kind") == "random":
        count = _number(v, "count", path, integer=True, minimum=1)
        support = parse_ball(v["support"], _join(path, "support")) if "support" in v else None
        return RandomTests(count, support)
    if not isinstance(v, list):
        raise ConfigError([(path, "expected a list of function descriptors or a random block")])
    return tuple(parse_expr(e, _join(path, i)) for i, e in enumerate(v))


def _parse_pairs(v, path):
    if isinstance(v, dict):
        return _parse_tests(v, path)
    if not isinstance(v, list):
        raise ConfigError([(path, "expected a list of [f1, f2] pairs or a random block")])
    out = []
    for i, pair in enumerate(v):
        ppath = _join(path, i)
        if not isinstance(pair, list) or len(pair) != 2:
            raise ConfigError([(ppath, "expected a [f1, f2] pair")])
        out.append((parse_expr(pair[0], _join(ppath, 0)), parse_expr(pair[1], _join(ppath, 1))))
    return tuple(out)


def _parse_shifts(v, path):
    if not isinstance(v, list):
        raise ConfigError([(path, "expected a list of shift vectors")])
    out = []
    for i, s in enumerate(v):
        s = [s] if isinstance(s, (int, float)) else s
        if not isinstance(s, list) or not all(isinstance(x, (int, float)) for x in s):
            raise ConfigError([(_join(path, i), "expected a shift vector")])
        out.append(tuple(float(x) for x in s))
    return tuple(out)


_YOUNG_KEYS = ("phi", "phi1", "phi2", "phi3", "phiH")
_WEIGHT_KEYS = ("u", "u1", "u2", "u3", "uQ")
_BALL_KEYS = ("ball", "X")
_SCALAR_KEYS = ("p", "p1", "p2", "eps")
_KNOWN = set(_YOUNG_KEYS + _WEIGHT_KEYS + _BALL_KEYS + _SCALAR_KEYS) | {
    "command", "claim", "grid", "f", "tests", "pairs", "shifts", "seed", "n"}

_PARSERS = {
    **{k: parse_young for k in _YOUNG_KEYS},
    **{k: parse_weight for k in _WEIGHT_KEYS},
    **{k: parse_ball for k in _BALL_KEYS},
    "grid": parse_grid,
    "f": parse_expr,
    "tests": _parse_tests,
    "pairs": _parse_pairs,
    "shifts": _parse_shifts,
}

# fields each command needs; tuples list alternatives (any one group suffices)
_REQUIRED = {
    "norm": [("grid", "f")],
    "oracle": [("phi", "ball")],
    "validate-young": [("phi",)],
    "validate-weight": [("u",)],
    "check-precede": [("phi1", "phi2")],
    "check-dominate": [("u1", "u2")],
    "verify-inclusion": [("grid", "tests")],
    "verify-holder": [("phi1", "phi2", "phi3", "X", "grid", "pairs")],
    "verify-ball-inclusion": [("X", "grid", "tests")],
    "verify-translation": [("grid", "f", "shifts")],
    "probe-no-inclusion": [("p1", "p2")],
}
_ONE_OF = {
    "norm": ("phi", "p"),
    "verify-inclusion": ("phi1", "p"),
    "verify-translation": ("phi", "p"),
    "verify-ball-inclusion": ("phi1", "p1"),
}


@dataclass(frozen=True)
class ExperimentConfig:
    command: str
    params: dict = field(default_factory=dict)
    seed: int = 0


def _resolve_alias(command, raw):
    if command == "validate":
        return "validate-young" if "phi" in raw else "validate-weight"
    if command == "check":
        return "check-precede" if "phi1" in raw else "check-dominate"
    if command == "probe":
        return "probe-no-inclusion"
    if command == "verify":
        claim = raw.get("claim")
        target = {"inclusion": "verify-inclusion", "holder": "verify-holder",
                  "ball-inclusion": "verify-ball-inclusion", "translation": "verify-translation"}.get(claim)
        if target is None:
            raise ConfigError([("claim", "verify needs claim: inclusion | holder | ball-inclusion | translation")])
        return target
    return command


def parse_config(text, command=None) -> ExperimentConfig:
    """Parse and validate a JSON config document (a string or an already decoded dict).

    ``command`` overrides a missing ``"command"`` field and must agree with it
    when both are present. All field errors are collected before raising.
    """
    if isinstance(text, (str, bytes)):
        if not text.strip():
            raise ConfigError([("", "empty document")])
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError([("", f"invalid JSON: {exc}")]) from None
    else:
        raw = text
    if not isinstance(raw, dict) or not raw:
        raise ConfigError([("", "expected a non-empty JSON object")])

    errors = []
    cmd = raw.get("command", command)
    if cmd is None:
        raise ConfigError([("command", "missing field")])
    if command is not None and cmd != command and _resolve_alias(cmd, raw) != command:
        raise ConfigError([("command", f"config says {cmd!r} but {command!r} was requested")])
    if cmd not in COMMANDS and cmd not in ALIASES:
        raise ConfigError([("command", f"unknown command {cmd!r}")])
    cmd = _resolve_alias(cmd, raw)

    params = {}
    for key, value in raw.items():
        if key in ("command", "seed"):
            continue
        if key not in _KNOWN:
            errors.append((key, "unknown field"))
            continue
        try:
            if key in _PARSERS:
                params[key] = _PARSERS[key](value, key)
            elif key in _SCALAR_KEYS:
                params[key] = _number(raw, key, "", minimum=0 if key == "eps" else 1,
                                      strict=key == "eps")
            elif key == "n":
                params[key] = _number(raw, key, "", integer=True)
            else:
                if not isinstance(value, str):
                    raise ConfigError([(key, "expected a string")])
                params[key] = value
        except ConfigError as exc:
            errors.extend(exc.errors)

    seed = 0
    if "seed" in raw:
        try:
            seed = _number(raw, "seed", "", integer=True, minimum=0)
        except ConfigError as exc:
            errors.extend(exc.errors)

    for group in _REQUIRED[cmd]:
        for key in group:
            if key not in raw:
                errors.append((key, f"missing field (required by {cmd})"))
    if cmd in _ONE_OF and not any(k in raw for k in _ONE_OF[cmd]):
        errors.append((_ONE_OF[cmd][0], f"{cmd} needs one of {' / '.join(_ONE_OF[cmd])}"))
    if errors:
        raise ConfigError(errors)

    errors.extend(_check_dimensions(params))
    if errors:
        raise ConfigError(errors)
    return ExperimentConfig(cmd, params, seed)


def _check_dimensions(params):
    grid = params.get("grid")
    if grid is None:
        dims = {k: params[k].n for k in _WEIGHT_KEYS + _BALL_KEYS if k in params}
        if len(set(dims.values())) > 1:
            return [(k, f"dimension {d} disagrees with the other descriptors") for k, d in dims.items()]
        return []
    errors = []
    for k in _WEIGHT_KEYS + _BALL_KEYS:
        if k in params and params[k].n != grid.n:
            errors.append((k, f"dimension {params[k].n} does not match grid.n = {grid.n}"))
    return errors


def serialize_config(cfg: ExperimentConfig) -> dict:
    out = {"command": cfg.command, "seed": cfg.seed}
    for key, value in cfg.params.items():
        if key == "tests":
            out[key] = value.to_config() if isinstance(value, RandomTests) else [e.to_config() for e in value]
        elif key == "pairs":
            out[key] = value.to_config() if isinstance(value, RandomTests) else [
                [a.to_config(), b.to_config()] for a, b in value]
        elif key == "shifts":
            out[key] = [list(s) for s in value]
        elif hasattr(value, "to_config"):
            out[key] = value.to_config()
        else:
            out[key] = value
    return out


def materialize_tests(value, spec, rng):
    """Grid functions for a ``tests`` entry."""
    if isinstance(value, RandomTests):
        return [random_grid_function(spec, rng, value.support) for _ in range(value.count)]
    return [sample(e, spec) for e in value]


def materialize_pairs(value, spec, rng):
    if isinstance(value, RandomTests):
        return [(random_grid_function(spec, rng, value.support),
                 random_grid_function(spec, rng, value.support)) for _ in range(value.count)]
    return [(sample(a, spec), sample(b, spec)) for a, b in value]
