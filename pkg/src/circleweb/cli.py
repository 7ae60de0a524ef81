"""Command-line entry point.

Reads a flat key=value config file, runs the requested verification or
rendering command, writes a JSON report (and SVG figures for render), and
exits 0 when all thresholds pass, 2 on a failed verification, 3 on
invalid input.
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys
import time
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional

import numpy as np

from . import minkgeom, polycurve, render, webcore
from .polycurve import BadParams, CurveError, CurveFamily, family_curve
from .render import RenderSpec
from .webcore import SampleSpec, WebError

EXIT_OK = 0
EXIT_FAILED = 2
EXIT_INVALID = 3

COMMANDS = ("verify-ideal", "verify-hex", "closure", "invariants",
            "classify", "render", "all")


class ConfigError(Exception):
    """Config file does not parse or validate."""


_NUMBER_RE = re.compile(
    r"^(?P<sign>-?)"
    r"(?P<num>sqrt\(\d+(\.\d+)?\)|\d+(\.\d+)?([eE][-+]?\d+)?)"
    r"(/(?P<den>sqrt\(\d+(\.\d+)?\)|\d+(\.\d+)?([eE][-+]?\d+)?))?$"
)


def parse_number(text: str) -> float:
    """Decimal numbers or quotients involving sqrt(k), e.g. sqrt(3)/2."""
    text = text.strip()
    if text in ("inf", "-inf"):
        return math.inf if text == "inf" else -math.inf
    m = _NUMBER_RE.match(text)
    if not m:
        raise ConfigError(f"not a number: {text!r}")

    def atom(s: str) -> float:
        if s.startswith("sqrt("):
            return math.sqrt(float(s[5:-1]))
        return float(s)

    v = atom(m.group("num"))
    if m.group("den"):
        v /= atom(m.group("den"))
    return -v if m.group("sign") else v


_KNOWN_KEYS = {
    "command", "seed",
    "curve.family", "curve.m", "curve.x0", "curve.y0",
    "curve.X", "curve.Y", "curve.Z", "curve.U",
    "samples.count", "samples.seed",
    "samples.u1_min", "samples.u1_max", "samples.u2_min", "samples.u2_max",
    "samples.reject_threshold",
    "closure.eps", "closure.bases",
    "thresholds.hex_residual", "thresholds.closure_defect",
    "thresholds.ideal_zero",
    "render.xmin", "render.xmax", "render.ymin", "render.ymax",
    "render.size", "render.count", "render.u_min", "render.u_max",
    "render.boundary", "render.unit_circle", "render.grid",
}


@dataclass
class RunConfig:
    command: str
    family: CurveFamily
    samples: SampleSpec
    render_spec: RenderSpec
    closure_eps: tuple[float, ...] = (0.02, 0.05, 0.1)
    closure_bases: int = 10
    hex_threshold: float = 1e-6
    closure_threshold: float = 1e-7
    ideal_threshold: float = 1e-10
    seed: int = 0


def _parse_lines(text: str) -> dict[str, tuple[int, str]]:
    entries: dict[str, tuple[int, str]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in _KNOWN_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in entries:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        if not value:
            raise ConfigError(f"line {lineno}: empty value for {key!r}")
        entries[key] = (lineno, value)
    return entries


def parse_config(text: str) -> RunConfig:
    """Strict parse of the flat config grammar (see README)."""
    entries = _parse_lines(text)

    def take(key: str, default=None) -> Optional[str]:
        if key in entries:
            return entries.pop(key)[0:2][1]
        return default

    def take_number(key: str, default: Optional[float] = None) -> Optional[float]:
        raw = take(key)
        if raw is None:
            return default
        try:
            return parse_number(raw)
        except ConfigError as e:
            raise ConfigError(f"key {key!r}: {e}") from None

    def take_int(key: str, default: Optional[int] = None) -> Optional[int]:
        v = take_number(key)
        if v is None:
            return default
        if v != int(v):
            raise ConfigError(f"key {key!r}: expected an integer")
        return int(v)

    def take_bool(key: str, default: bool = False) -> bool:
        raw = take(key)
        if raw is None:
            return default
        if raw not in ("true", "false"):
            raise ConfigError(f"key {key!r}: expected true or false")
        return raw == "true"

    def take_list(key: str) -> Optional[list[float]]:
        raw = take(key)
        if raw is None:
            return None
        try:
            return [parse_number(s) for s in raw.split(",")]
        except ConfigError as e:
            raise ConfigError(f"key {key!r}: {e}") from None

    command = take("command")
    if command is None:
        raise ConfigError("missing 'command'")
    if command not in COMMANDS:
        raise ConfigError(f"unknown command {command!r}")

    fam_name = take("curve.family")
    rows = {k: take_list(f"curve.{k}") for k in ("X", "Y", "Z", "U")}
    has_custom = any(v is not None for v in rows.values())
    if fam_name is None and not has_custom:
        raise ConfigError("missing curve block: set curve.family or curve.X..curve.U")
    if fam_name is not None and has_custom:
        raise ConfigError("ambiguous curve block: both family and custom table present")
    try:
        if fam_name is not None:
            if fam_name not in ("cubic", "cubic1", "cubic2"):
                raise ConfigError(f"unknown curve family {fam_name!r}")
            family = CurveFamily(
                fam_name,
                m=take_number("curve.m", 0.0),
                x0=take_number("curve.x0", 0.0),
                y0=take_number("curve.y0", 0.0),
            )
        else:
            missing = [k for k, v in rows.items() if v is None]
            if missing:
                raise ConfigError(f"custom curve missing rows: {', '.join(missing)}")
            family = CurveFamily(
                "custom", custom=tuple(tuple(rows[k]) for k in ("X", "Y", "Z", "U")))
    except BadParams as e:
        raise ConfigError(f"curve block: {e}") from None

    seed = take_int("seed", 0)
    samples = SampleSpec(
        count=take_int("samples.count", 100),
        seed=take_int("samples.seed", seed),
        u1_window=(take_number("samples.u1_min", -2.0),
                   take_number("samples.u1_max", 2.0)),
        u2_window=(take_number("samples.u2_min", -2.0),
                   take_number("samples.u2_max", 2.0)),
        reject_threshold=take_number("samples.reject_threshold", 1e-6),
    )
    render_spec = RenderSpec(
        window=(take_number("render.xmin", -2.0), take_number("render.xmax", 2.0),
                take_number("render.ymin", -2.0), take_number("render.ymax", 2.0)),
        size=take_int("render.size", 600),
        count=take_int("render.count", 20),
        u_range=(take_number("render.u_min", -4.0),
                 take_number("render.u_max", 4.0)),
        show_boundary=take_bool("render.boundary", False),
        show_unit_circle=take_bool("render.unit_circle", False),
        boundary_grid=take_int("render.grid", 81),
    )
    eps_list = take_list("closure.eps") or [0.02, 0.05, 0.1]
    config = RunConfig(
        command=command,
        family=family,
        samples=samples,
        render_spec=render_spec,
        closure_eps=tuple(eps_list),
        closure_bases=take_int("closure.bases", 10),
        hex_threshold=take_number("thresholds.hex_residual", 1e-6),
        closure_threshold=take_number("thresholds.closure_defect", 1e-7),
        ideal_threshold=take_number("thresholds.ideal_zero", 1e-10),
        seed=seed,
    )
    if entries:
        # keys consumed lazily; anything left was valid but unused for this command
        leftover = ", ".join(sorted(entries))
        raise ConfigError(f"unused keys: {leftover}")
    return config


def _curve_dict(f: CurveFamily) -> dict:
    d = {"family": f.tag}
    if f.tag == "custom":
        d["coefficients"] = [list(row) for row in f.custom]
    else:
        d["m"] = f.m
        d["x0"] = f.x0
        if f.tag in ("cubic1", "cubic2"):
            d["y0"] = f.y0
    return d


def _cmd_verify_ideal(cfg: RunConfig, report: dict) -> bool:
    if cfg.family.tag == "custom":
        raise ConfigError("verify-ideal needs a named curve family")
    curve = family_curve(cfg.family)
    gens = polycurve.ideal_generators(cfg.family)
    residuals = []
    for g in gens:
        comp = polycurve.compose_ideal(g, curve)
        scale = max(
            (abs(g.matrix[i, j]) * (curve.components[i] * curve.components[j]).max_abs()
             for i in range(4) for j in range(4) if g.matrix[i, j] != 0.0),
            default=1.0,
        )
        residuals.append(comp.max_abs() / max(scale, 1e-300))
    report["ideal_residuals"] = residuals
    return all(r <= cfg.ideal_threshold for r in residuals)


def _cmd_verify_hex(cfg: RunConfig, report: dict, curve) -> bool:
    cert = webcore.hex_certify(curve, cfg.samples)
    report["samples"] = cert.samples_used
    report["rejected"] = cert.rejected
    report["max_residual"] = cert.max_residual
    report["median_residual"] = cert.median_residual
    return cert.max_residual <= cfg.hex_threshold


def _cmd_closure(cfg: RunConfig, report: dict, curve) -> bool:
    w = webcore.web_function(curve)
    base_spec = replace(cfg.samples, count=cfg.closure_bases)
    bases = webcore.sample_bases(curve, base_spec, w)
    defects = []
    failures = 0
    for base in bases:
        for eps in cfg.closure_eps:
            try:
                rep = webcore.thomsen_closure(curve, base, eps, w)
            except WebError:
                failures += 1
                continue
            defects.append(rep.defect)
    report["defects"] = defects
    report["closure_failures"] = failures
    if not defects:
        return False
    return bool(max(defects) <= cfg.closure_threshold)


def _cmd_invariants(cfg: RunConfig, report: dict) -> bool:
    if cfg.family.tag != "cubic":
        raise ConfigError("invariants command needs curve.family = cubic")
    inv = webcore.invariants(cfg.family)
    report["invariants"] = inv.to_dict()
    m, x0 = cfg.family.m, cfg.family.x0
    closed_i = 1.0 + m * m * x0 * x0
    closed_ibar = 1.0 - x0 * x0
    report["invariants_closed_form"] = {"I": closed_i, "Ibar": closed_ibar}
    return (inv.S == -1 and inv.Sbar == 1
            and abs(inv.I - closed_i) <= 1e-8
            and abs(inv.Ibar - closed_ibar) <= 1e-8)


def _cmd_classify(cfg: RunConfig, report: dict, curve) -> bool:
    xmin, xmax, ymin, ymax = cfg.render_spec.window
    counts: dict[str, int] = {}
    n = 21
    for x in np.linspace(xmin, xmax, n):
        for y in np.linspace(ymin, ymax, n):
            tag = webcore.classify_point(curve, minkgeom.PlanarPoint(x, y))
            counts[tag.value] = counts.get(tag.value, 0) + 1
    report["classification"] = {k: counts[k] for k in sorted(counts)}
    return True


def _cmd_render(cfg: RunConfig, report: dict, curve, outdir: Path) -> bool:
    svg = render.render_web(curve, cfg.render_spec)
    name = f"render-{cfg.family.label}.svg"
    (outdir / name).write_text(svg)
    report["figures"] = [name]
    return True


def run(cfg: RunConfig, outdir: Path) -> int:
    """Execute the configured command; write report.json and figures."""
    outdir.mkdir(parents=True, exist_ok=True)
    report: dict = {
        "command": cfg.command,
        "curve": _curve_dict(cfg.family),
        "seed": cfg.seed,
        "samples": None,
        "max_residual": None,
        "median_residual": None,
        "rejected": None,
        "defects": [],
        "invariants": None,
    }
    curve = family_curve(cfg.family)
    checks: dict[str, bool] = {}
    try:
        if cfg.command in ("verify-ideal", "all") and cfg.family.tag != "custom":
            checks["ideal"] = _cmd_verify_ideal(cfg, report)
        if cfg.command in ("verify-hex", "all"):
            checks["hex"] = _cmd_verify_hex(cfg, report, curve)
        if cfg.command in ("closure", "all"):
            checks["closure"] = _cmd_closure(cfg, report, curve)
        if cfg.command in ("invariants", "all") and (
                cfg.command == "invariants" or cfg.family.tag == "cubic"):
            checks["invariants"] = _cmd_invariants(cfg, report)
        if cfg.command == "classify":
            checks["classify"] = _cmd_classify(cfg, report, curve)
        if cfg.command in ("render", "all"):
            checks["render"] = _cmd_render(cfg, report, curve, outdir)
    except (ConfigError, BadParams) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    except (WebError, CurveError, render.RenderError) as e:
        report["error"] = str(e)
        checks["completed"] = False

    passed = bool(checks) and all(checks.values())
    report["checks"] = checks
    report["passed"] = passed
    report["timestamp"] = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
    full = json.dumps(report, indent=2, sort_keys=True)
    (outdir / "report.json").write_text(full + "\n")
    for name, ok in checks.items():
        print(f"{name}: {'pass' if ok else 'FAIL'}")
    return EXIT_OK if passed else EXIT_FAILED


def main(argv: Optional[list[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="circleweb",
        description="Build, certify, and render circular 3-webs on the sphere "
                    "from rational polar curves.")
    parser.add_argument("--config", required=True, help="path to the config file")
    parser.add_argument("--output-dir", default=".", help="directory for reports/figures")
    parser.add_argument("--seed", type=int, default=None,
                        help="override the config seed")
    args = parser.parse_args(argv)
    try:
        text = Path(args.config).read_text()
    except OSError as e:
        print(f"error: cannot read config: {e}", file=sys.stderr)
        return EXIT_INVALID
    try:
        cfg = parse_config(text)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_INVALID
    if args.seed is not None:
        cfg.seed = args.seed
        cfg.samples = replace(cfg.samples, seed=args.seed)
    try:
        return run(cfg, Path(args.output_dir))
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
