"""Batch CLI: config parsing, subcommand dispatch, deterministic CSV/JSON output.

Configuration comes from an optional JSON file (strictly parsed: any
unknown key is rejected with its path) plus flag overrides.  Output is
written atomically (temp file + rename) with shortest-round-trip float
formatting, so identical runs produce byte-identical artifacts.

Exit codes: 0 success, 2 validation failure, 3 numerical-accuracy failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
import tempfile
from dataclasses import dataclass, field

import numpy as np

from . import acceptance, profiles, schwartz
from . import transform as tr
from .cfunction import c_function, plancherel_density
from .errors import AccuracyError, ConfigError, PoleError, SphtransError
from .groups import PRESET_NAMES, preset
from .specfun import QuadratureSpec
from .spherical import phi

SUBCOMMANDS = (
    "presets",
    "phi",
    "cfun",
    "transform",
    "invert",
    "plancherel",
    "expansion",
    "seminorm",
    "membership",
    "roundtrip",
    "accept",
)

SYMBOLS = {
    "gauss": lambda x: np.exp(-(x**2)),
    "x2gauss": lambda x: x**2 * np.exp(-(x**2)),
    "wide": lambda x: np.exp(-(x**2) / 4.0),
    "poly": lambda x: (1.0 + x**2) * np.exp(-(x**2)),
    "quartic": lambda x: np.exp(-(x**4) / 8.0),
    "flat4": lambda x: np.exp(-((x / 3.2) ** 4)),
}

COUNTEREXAMPLES = ("odd", "slow", "rough")


@dataclass
class GridSpec:
    min: float = -12.0
    max: float = 12.0
    count: int = 481


@dataclass
class OutputSpec:
    format: str = "csv"
    path: str | None = None


@dataclass
class ProfileSpec:
    family: str = "wave_packet"
    symbol: str = "gauss"
    symbol2: str = "x2gauss"
    width: float = 1.0
    scale: float = 1.0
    power: float | None = None
    p: int = 3


@dataclass
class RunConfig:
    preset: str = "SL2R"
    subcommand: str = "presets"
    lam: float = 1.0
    grid: GridSpec = field(default_factory=GridSpec)
    quadrature: QuadratureSpec = field(default_factory=QuadratureSpec)
    output: OutputSpec = field(default_factory=OutputSpec)
    profile: ProfileSpec = field(default_factory=ProfileSpec)
    lams: tuple = (0.5, 1.0, 2.0)
    eps_ladder: tuple = (0.4, 0.2, 0.1)
    r_values: tuple = (0.0, 1.0, 2.0, 3.0)
    k_values: tuple = (0, 1, 2)


_SPECTRAL_SUBCOMMANDS = {"cfun", "transform", "membership", "roundtrip"}


def _reject_unknown(data: dict, allowed: dict, path: str = ""):
    for key in data:
        if key not in allowed:
            raise ConfigError(f"unknown config field {path + key!r}", path=path + key)


def load_config(doc: dict) -> RunConfig:
    """Build a RunConfig from a parsed JSON document, strictly."""
    cfg = RunConfig()
    sections = {
        "preset": str,
        "subcommand": str,
        "lam": float,
        "grid": dict,
        "quadrature": dict,
        "output": dict,
        "profile": dict,
        "lams": list,
        "eps_ladder": list,
        "r_values": list,
        "k_values": list,
    }
    _reject_unknown(doc, sections)
    if "preset" in doc:
        cfg.preset = str(doc["preset"])
    if "subcommand" in doc:
        cfg.subcommand = str(doc["subcommand"])
    if "lam" in doc:
        cfg.lam = float(doc["lam"])
    if "grid" in doc:
        _reject_unknown(doc["grid"], {"min": 0, "max": 0, "count": 0}, "grid.")
        g = doc["grid"]
        cfg.grid = GridSpec(
            float(g.get("min", cfg.grid.min)),
            float(g.get("max", cfg.grid.max)),
            int(g.get("count", cfg.grid.count)),
        )
    if "quadrature" in doc:
        allowed = {"rel_tol": 0, "abs_tol": 0, "max_subdivisions": 0}
        _reject_unknown(doc["quadrature"], allowed, "quadrature.")
        qd = doc["quadrature"]
        try:
            cfg.quadrature = QuadratureSpec(
                rel_tol=float(qd.get("rel_tol", 1e-10)),
                abs_tol=float(qd.get("abs_tol", 1e-12)),
                max_subdivisions=int(qd.get("max_subdivisions", 4096)),
            )
        except SphtransError as exc:
            raise ConfigError(f"quadrature: {exc}", path="quadrature") from exc
    if "output" in doc:
        _reject_unknown(doc["output"], {"format": 0, "path": 0}, "output.")
        od = doc["output"]
        cfg.output = OutputSpec(str(od.get("format", "csv")), od.get("path"))
    if "profile" in doc:
        allowed = {
            "family": 0, "symbol": 0, "symbol2": 0, "width": 0,
            "scale": 0, "power": 0, "p": 0,
        }
        _reject_unknown(doc["profile"], allowed, "profile.")
        pd = doc["profile"]
        cfg.profile = ProfileSpec(
            family=str(pd.get("family", "wave_packet")),
            symbol=str(pd.get("symbol", "gauss")),
            symbol2=str(pd.get("symbol2", "x2gauss")),
            width=float(pd.get("width", 1.0)),
            scale=float(pd.get("scale", 1.0)),
            power=None if pd.get("power") is None else float(pd["power"]),
            p=int(pd.get("p", 3)),
        )
    for key in ("lams", "eps_ladder", "r_values"):
        if key in doc:
            setattr(cfg, key, tuple(float(v) for v in doc[key]))
    if "k_values" in doc:
        cfg.k_values = tuple(int(v) for v in doc["k_values"])
    return cfg


def validate_config(cfg: RunConfig):
    if cfg.preset not in PRESET_NAMES:
        raise ConfigError(
            f"preset: unknown preset {cfg.preset!r}; valid: {', '.join(PRESET_NAMES)}",
            path="preset",
        )
    if cfg.subcommand not in SUBCOMMANDS:
        raise ConfigError(f"subcommand: unknown {cfg.subcommand!r}", path="subcommand")
    if cfg.grid.count < 3:
        raise ConfigError("grid.count: need at least 3 points", path="grid.count")
    if not cfg.grid.min < cfg.grid.max:
        raise ConfigError("grid: need min < max", path="grid")
    if cfg.subcommand in _SPECTRAL_SUBCOMMANDS:
        if cfg.grid.count % 2 == 0:
            raise ConfigError(
                "grid.count: spectral grids must have an odd point count",
                path="grid.count",
            )
        if abs(cfg.grid.min + cfg.grid.max) > 1e-12:
            raise ConfigError(
                "grid: spectral grids must be symmetric about 0", path="grid"
            )
    if cfg.profile.family not in ("gaussian", "cosh", "xi_poly", "wave_packet", "counterexample"):
        raise ConfigError(
            f"profile.family: unknown family {cfg.profile.family!r}", path="profile.family"
        )
    if cfg.profile.family == "counterexample" and cfg.profile.symbol not in COUNTEREXAMPLES:
        raise ConfigError(
            f"profile.symbol: unknown counterexample {cfg.profile.symbol!r}",
            path="profile.symbol",
        )
    if cfg.profile.family == "wave_packet" and cfg.profile.symbol not in SYMBOLS:
        raise ConfigError(
            f"profile.symbol: unknown symbol {cfg.profile.symbol!r}; "
            f"valid: {', '.join(SYMBOLS)}",
            path="profile.symbol",
        )


def _spectral_grid(cfg: RunConfig) -> np.ndarray:
    return np.linspace(cfg.grid.min, cfg.grid.max, cfg.grid.count)


def _radial_grid(cfg: RunConfig) -> np.ndarray:
    lo = max(cfg.grid.min, 0.0)
    hi = cfg.grid.max if cfg.grid.max > 0 else 10.0
    return np.linspace(lo, hi, cfg.grid.count)


def _symbol(cfg: RunConfig, name: str | None = None) -> tr.SpectralFunction:
    name = name or cfg.profile.symbol
    return acceptance.make_symbol(SYMBOLS[name], name)


def _build_profile(G, cfg: RunConfig):
    fam = cfg.profile.family
    if fam == "gaussian":
        return profiles.gaussian_profile(G, width=cfg.profile.width, scale=cfg.profile.scale)
    if fam == "cosh":
        return profiles.cosh_profile(G, power=cfg.profile.power)
    if fam == "xi_poly":
        return profiles.xi_poly_profile(G, p=cfg.profile.p)
    if fam == "wave_packet":
        return tr.wave_packet(G, _symbol(cfg), q=cfg.quadrature)
    raise ConfigError(f"profile.family {fam!r} has no radial realization", path="profile.family")


# ---------------------------------------------------------------------------
# deterministic emission
# ---------------------------------------------------------------------------

def _fmt(x) -> str:
    """Shortest-round-trip decimal form (Python repr of binary64)."""
    if isinstance(x, (bool, int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def write_csv(header: list[str], rows: list[list], path: str | None) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    text = "\n".join(lines) + "\n"
    _emit(text, path)
    return text

def _json_default(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    raise TypeError(f"cannot serialize {type(obj)}")


def write_json(payload: dict, path: str | None) -> str:
    text = json.dumps(payload, indent=2, default=_json_default) + "\n"
    _emit(text, path)
    return text


def _emit(text: str, path: str | None):
    if path is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".sphtrans-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# ---------------------------------------------------------------------------
# subcommand implementations
# ---------------------------------------------------------------------------

def _run_presets(cfg: RunConfig):
    header = ["name", "m_alpha", "m_2alpha", "rho", "jacobi_alpha", "jacobi_beta",
              "plancherel_constant", "weyl_order"]
    rows = []
    for name in PRESET_NAMES:
        G = preset(name)
        rows.append([G.name, G.m_alpha, G.m_2alpha, G.rho, G.jacobi_alpha,
                     G.jacobi_beta, G.plancherel_constant, G.weyl_order])
    if cfg.output.format == "json":
        payload = {"operation": "presets",
                   "presets": [dict(zip(header, row)) for row in rows]}
        write_json(payload, cfg.output.path)
    else:
        rows = [[r[0]] + r[1:] for r in rows]
        write_csv(header, rows, cfg.output.path)


def _run_phi(cfg: RunConfig):
    G = preset(cfg.preset)
    ts = _radial_grid(cfg)
    vals = phi(G, cfg.lam, ts)
    write_csv(
        ["t", "re_phi", "im_phi"],
        [[t, v.real, v.imag] for t, v in zip(ts, vals)],
        cfg.output.path,
    )


def _run_cfun(cfg: RunConfig):
    G = preset(cfg.preset)
    grid = _spectral_grid(cfg)
    rows = []
    for lam in grid:
        try:
            c = c_function(G, lam)
            re, im = c.real, c.imag
        except PoleError:
            re = im = float("nan")
        rows.append([lam, re, im, plancherel_density(G, lam)])
    write_csv(["lambda", "re_c", "im_c", "density"], rows, cfg.output.path)


def _transform_payload(cfg: RunConfig, res: tr.TransformResult, operation: str) -> dict:
    per_sample = [
        {"lambda": float(l), "re": v.real, "im": v.imag, "err_est": float(e)}
        for l, v, e in zip(res.spectral.grid, res.spectral.values, res.err_est)
    ]
    return {
        "preset": cfg.preset,
        "operation": operation,
        "inputs": {"profile": dataclasses.asdict(cfg.profile), "grid": dataclasses.asdict(cfg.grid)},
        "max_error": float(np.max(res.err_est)),
        "per_sample": per_sample,
    }


def _run_transform(cfg: RunConfig):
    G = preset(cfg.preset)
    f = _build_profile(G, cfg)
    res = tr.hc_transform(G, f, _spectral_grid(cfg), cfg.quadrature)
    if cfg.output.format == "json":
        write_json(_transform_payload(cfg, res, "transform"), cfg.output.path)
    else:
        write_csv(
            ["lambda", "re", "im", "err_est"],
            [[l, v.real, v.imag, e] for l, v, e in
             zip(res.spectral.grid, res.spectral.values, res.err_est)],
            cfg.output.path,
        )


def _run_invert(cfg: RunConfig):
    G = preset(cfg.preset)
    psi = tr.wave_packet(G, _symbol(cfg), q=cfg.quadrature)
    ts = _radial_grid(cfg)
    vals = np.atleast_1d(psi(ts))
    write_csv(
        ["t", "re_psi", "im_psi"],
        [[t, v.real, v.imag] for t, v in zip(ts, vals)],
        cfg.output.path,
    )


def _run_plancherel(cfg: RunConfig):
    G = preset(cfg.preset)
    fa = tr.wave_packet(G, _symbol(cfg), q=cfg.quadrature)
    fb = tr.wave_packet(G, _symbol(cfg, cfg.profile.symbol2), q=cfg.quadrature)
    ha = tr.hc_transform(G, fa, q=cfg.quadrature).spectral
    hb = tr.hc_transform(G, fb, q=cfg.quadrature).spectral
    pairing = tr.plancherel_pairing(G, ha, hb, cfg.quadrature)
    convolve = tr.convolve_at_identity(G, fa, fb, cfg.quadrature)
    write_json(
        {
            "preset": cfg.preset,
            "operation": "plancherel",
            "inputs": {"symbol": cfg.profile.symbol, "symbol2": cfg.profile.symbol2},
            "max_error": abs(pairing - convolve),
            "pairing": pairing,
            "convolve_at_identity": convolve,
        },
        cfg.output.path,
    )


def _run_expansion(cfg: RunConfig):
    G = preset(cfg.preset)
    psi = tr.wave_packet(G, _symbol(cfg), q=cfg.quadrature)
    hf = tr.hc_transform(G, psi, q=cfg.quadrature).spectral
    records = []
    max_err = 0.0
    for lam in cfg.lams:
        ref = complex(hf(np.array([lam]))[0])
        for eps in cfg.eps_ladder:
            total = tr.expansion_term(G, "split", psi, lam, eps, cfg.quadrature) + \
                tr.expansion_term(G, "compact", psi, lam, eps, cfg.quadrature)
            err = abs(total - ref)
            max_err = max(max_err, err)
            records.append({"lambda": lam, "eps": eps, "value": total,
                            "reference": ref, "error": err})
    write_json(
        {
            "preset": cfg.preset,
            "operation": "expansion",
            "inputs": {"symbol": cfg.profile.symbol, "lams": list(cfg.lams),
                       "eps_ladder": list(cfg.eps_ladder)},
            "max_error": max_err,
            "per_sample": records,
        },
        cfg.output.path,
    )


def _run_seminorm(cfg: RunConfig):
    G = preset(cfg.preset)
    f = _build_profile(G, cfg)
    records = []
    for r in cfg.r_values:
        for k in cfg.k_values:
            rep = schwartz.schwartz_seminorm(G, f, r, k)
            records.append(dataclasses.asdict(rep))
    write_json(
        {
            "preset": cfg.preset,
            "operation": "seminorm",
            "inputs": {"profile": dataclasses.asdict(cfg.profile),
                       "r_values": list(cfg.r_values), "k_values": list(cfg.k_values)},
            "reports": records,
        },
        cfg.output.path,
    )


def _counterexample_spectral(cfg: RunConfig) -> tr.SpectralFunction:
    grid = _spectral_grid(cfg)
    name = cfg.profile.symbol
    if name == "odd":
        values = grid * np.exp(-(grid**2))
        decay = tr.SpectralDecay(270.0, 8.0)
    elif name == "slow":
        values = 1.0 / (1.0 + grid**2)
        decay = tr.SpectralDecay(2.0, 2.0)
    else:
        values = np.exp(-np.abs(grid))
        decay = tr.SpectralDecay(13.0, 4.0)
    return tr.SpectralFunction(grid, values, decay, label=name)


def _run_membership(cfg: RunConfig):
    G = preset(cfg.preset)
    if cfg.profile.family == "counterexample":
        A = _counterexample_spectral(cfg)
    else:
        f = _build_profile(G, cfg)
        A = tr.hc_transform(G, f, _spectral_grid(cfg), cfg.quadrature).spectral
    rep = schwartz.image_membership(G, A)
    write_json(
        {
            "preset": cfg.preset,
            "operation": "membership",
            "inputs": {"profile": dataclasses.asdict(cfg.profile)},
            "passed": rep.passed,
            "criteria": {
                "weyl": dataclasses.asdict(rep.weyl),
                "decay": {str(n): dataclasses.asdict(c) for n, c in rep.decay.items()},
                "smoothness": dataclasses.asdict(rep.smoothness),
            },
        },
        cfg.output.path,
    )


def _run_roundtrip(cfg: RunConfig):
    G = preset(cfg.preset)
    fn = SYMBOLS[cfg.profile.symbol]
    a = acceptance.make_symbol(fn, cfg.profile.symbol)
    psi = tr.wave_packet(G, a, q=cfg.quadrature)
    grid = _spectral_grid(cfg)
    res = tr.hc_transform(G, psi, grid, cfg.quadrature)
    target = fn(grid)
    errors = np.abs(res.spectral.values - target)
    payload = {
        "preset": cfg.preset,
        "operation": "roundtrip",
        "inputs": {"symbol": cfg.profile.symbol, "grid": dataclasses.asdict(cfg.grid)},
        "max_error": float(np.max(errors)),
        "per_sample": [
            {"lambda": float(l), "recovered": complex(v), "target": complex(w),
             "error": float(e)}
            for l, v, w, e in zip(grid, res.spectral.values, target, errors)
        ],
    }
    write_json(payload, cfg.output.path)


def _run_accept(cfg: RunConfig) -> int:
    outcomes = acceptance.run_all(echo=lambda s: print(s))
    n_fail = sum(not o.passed for o in outcomes)
    print(f"\n{len(outcomes) - n_fail}/{len(outcomes)} acceptance criteria passed")
    if cfg.output.path is not None:
        write_json(
            {
                "operation": "accept",
                "outcomes": [dataclasses.asdict(o) for o in outcomes],
            },
            cfg.output.path,
        )
    return 3 if n_fail else 0


_DISPATCH = {
    "presets": _run_presets,
    "phi": _run_phi,
    "cfun": _run_cfun,
    "transform": _run_transform,
    "invert": _run_invert,
    "plancherel": _run_plancherel,
    "expansion": _run_expansion,
    "seminorm": _run_seminorm,
    "membership": _run_membership,
    "roundtrip": _run_roundtrip,
    "accept": _run_accept,
}

_CONTEXT = {
    "presets": "groups.preset",
    "phi": "spherical.phi",
    "cfun": "cfunction.c_function",
    "transform": "transform.hc_transform",
    "invert": "transform.wave_packet",
    "plancherel": "transform.plancherel_pairing",
    "expansion": "transform.expansion_term",
    "seminorm": "schwartz.schwartz_seminorm",
    "membership": "schwartz.image_membership",
    "roundtrip": "transform.hc_transform",
    "accept": "acceptance.run_all",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sphtrans",
        description="spherical transform engine for rank-one symmetric spaces",
    )
    parser.add_argument("subcommand", choices=SUBCOMMANDS)
    parser.add_argument("--preset", default=None, help="group preset name")
    parser.add_argument("--config", default=None, help="path to a JSON config file")
    parser.add_argument("--out", default=None, help="output path (default: stdout)")
    parser.add_argument("--format", default=None, choices=["csv", "json"])
    parser.add_argument("--grid", default=None, help="spectral/radial grid as min:max:count")
    parser.add_argument("--tol", default=None, type=float, help="relative quadrature tolerance")
    parser.add_argument("--lam", default=None, type=float, help="spectral point for `phi`")
    parser.add_argument("--symbol", default=None, help="spectral symbol name")
    parser.add_argument("--profile", default=None, help="radial profile family")
    return parser


def config_from_args(args) -> RunConfig:
    doc = {}
    if args.config is not None:
        with open(args.config, "r", encoding="utf-8") as fh:
            try:
                doc = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"config file is not valid JSON: {exc}") from exc
        if not isinstance(doc, dict):
            raise ConfigError("config file must hold a JSON object")
    cfg = load_config(doc)
    cfg.subcommand = args.subcommand
    if args.preset is not None:
        cfg.preset = args.preset
    if args.format is not None:
        cfg.output.format = args.format
    if args.out is not None:
        cfg.output.path = args.out
    if args.lam is not None:
        cfg.lam = args.lam
    if args.symbol is not None:
        cfg.profile.symbol = args.symbol
        if cfg.profile.family not in ("wave_packet", "counterexample"):
            cfg.profile.family = "wave_packet"
    if args.profile is not None:
        cfg.profile.family = args.profile
    if args.grid is not None:
        parts = args.grid.split(":")
        if len(parts) != 3:
            raise ConfigError("grid flag must be min:max:count", path="grid")
        cfg.grid = GridSpec(float(parts[0]), float(parts[1]), int(parts[2]))
    if args.tol is not None:
        try:
            cfg.quadrature = QuadratureSpec(
                rel_tol=args.tol,
                abs_tol=cfg.quadrature.abs_tol,
                max_subdivisions=cfg.quadrature.max_subdivisions,
            )
        except SphtransError as exc:
            raise ConfigError(f"tol: {exc}", path="quadrature.rel_tol") from exc
    validate_config(cfg)
    return cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
    except (ConfigError, SphtransError) as exc:
        print(f"error in cli.config: {exc}", file=sys.stderr)
        return 2
    context = _CONTEXT[cfg.subcommand]
    try:
        rc = _DISPATCH[cfg.subcommand](cfg)
        return int(rc or 0)
    except AccuracyError as exc:
        print(f"error in {context}: {exc}", file=sys.stderr)
        return 3
    except SphtransError as exc:
        print(f"error in {context}: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error in {context}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
