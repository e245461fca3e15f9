"""Command-line front end.

Subcommands: ``partner``, ``verify``, ``norm``, ``integrate``, ``regularity``.

Exit codes:
    0  success
    1  ``verify`` found a failing check
    2  irregular free constant for ``partner`` without ``--force``
    3  numerical failure
    4  invalid configuration or usage

Settings come from built-in per-model defaults, then ``--config FILE`` (flat
``key = value`` lines), then explicit flags, the last one winning.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import checks, susy, wronskid
from .errors import JordanSusyError
from .io import GridSeries, read_config, to_jsonable, write_json
from .jordan import GridSpec, with_fd_lambda
from .models import BoxModel, EDHOModel, RadialOscillatorModel

EXIT_OK, EXIT_VERIFY_FAIL, EXIT_IRREGULAR, EXIT_NUMERICAL, EXIT_CONFIG = 0, 1, 2, 3, 4

MODEL_NAMES = ("box", "radial_osc", "edho")

DEFAULTS = {
    "box": {"lam": 4 * math.pi**2, "k": 0.555, "grid": "0:1:501", "n": 1, "x0": 0.5,
            "x": 1.0},
    "radial_osc": {"lam": 8.0, "k": -0.01, "grid": "0.05:6:500", "n": 0, "x0": 1.0,
                   "x": 2.0},
    "edho": {"lam": None, "k": None, "grid": "-6:6:601", "n": 0, "x0": 0.0, "x": 1.0},
}


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    model: str = "box"
    ell: int = 1
    lam: Optional[float] = None
    k: Optional[float] = None
    omega0: Optional[float] = None
    x0: Optional[float] = None
    x: Optional[float] = None
    n: Optional[int] = None
    grid: Optional[GridSpec] = None
    eps: list = field(default_factory=list)
    format: str = "csv"
    out: Optional[str] = None
    seed: int = 42
    force: bool = False
    tol: Optional[float] = None
    model_given: bool = False

    @property
    def representation(self) -> str:
        return "VC" if self.omega0 is not None else "DF"


def parse_grid(text: str) -> GridSpec:
    try:
        lo, hi, n = text.split(":")
        return GridSpec(float(lo), float(hi), int(n))
    except ValueError as exc:
        raise ConfigError(f"bad grid {text!r}; expected 'xmin:xmax:n' ({exc})") from None


def _parse_eps(text) -> list:
    if isinstance(text, (list, tuple)):
        return [float(v) for v in text]
    return [float(v) for v in str(text).replace(" ", "").split(",") if v]


_CONVERT = {
    "model": str, "ell": int, "lam": float, "k": float, "omega0": float, "x0": float,
    "x": float, "n": int, "grid": parse_grid, "eps": _parse_eps, "format": str, "out": str,
    "seed": int, "tol": float,
}
_ALIASES = {"lambda": "lam", "K": "k", "tolerance": "tol"}


def _bool(text) -> bool:
    if isinstance(text, bool):
        return text
    value = str(text).strip().lower()
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {text!r}")


def build_config(args: argparse.Namespace) -> RunConfig:
    raw = {}
    if args.config:
        try:
            raw.update(read_config(args.config))
        except (OSError, ValueError) as exc:
            raise ConfigError(str(exc)) from None
    for key in list(raw):
        if key in _ALIASES:
            raw[_ALIASES[key]] = raw.pop(key)
    unknown = set(raw) - set(_CONVERT) - {"force"}
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    for key in list(_CONVERT) + ["force"]:
        flag = getattr(args, key, None)
        if flag is not None and flag is not False:
            raw[key] = flag
    cfg = RunConfig()
    try:
        for key, value in raw.items():
            if key == "force":
                cfg.force = _bool(value)
            elif key == "grid" and isinstance(value, GridSpec):
                cfg.grid = value
            else:
                setattr(cfg, key, _CONVERT[key](value))
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from None
    cfg.model_given = "model" in raw
    if cfg.model not in MODEL_NAMES:
        raise ConfigError(f"unknown model {cfg.model!r}; choose from {MODEL_NAMES}")
    if cfg.ell < 0:
        raise ConfigError("ell must be non-negative")
    if cfg.format not in ("csv", "json"):
        raise ConfigError("format must be csv or json")
    if cfg.k is not None and cfg.omega0 is not None:
        raise ConfigError("give either --k (differential form) or --omega0 (integral form)")
    d = DEFAULTS[cfg.model]
    if cfg.n is None:
        cfg.n = d["n"]
    if cfg.lam is None:
        cfg.lam = d["lam"]
    if cfg.k is None and cfg.omega0 is None:
        cfg.k = d["k"]
    if cfg.x0 is None:
        cfg.x0 = d["x0"]
    if cfg.grid is None:
        cfg.grid = parse_grid(d["grid"])
    return cfg


# --- model plumbing ------------------------------------------------------------------


def _model(cfg):
    if cfg.model == "box":
        return BoxModel()
    if cfg.model == "radial_osc":
        return RadialOscillatorModel(cfg.ell)
    return EDHOModel()


def _check_grid(cfg, model):
    lo, hi = model.potential.domain
    g = cfg.grid
    # a finite wall may be sampled where the model stays finite there (box)
    closed_ok = cfg.model == "box"
    ok_lo = lo <= g.x_min if closed_ok else lo < g.x_min
    ok_hi = g.x_max <= hi if closed_ok else g.x_max < hi
    if not (ok_lo and ok_hi):
        raise ConfigError(f"grid [{g.x_min}, {g.x_max}] leaves the domain {model.potential.domain}")


def _transform(cfg, model):
    if cfg.model == "edho":
        raise ConfigError("edho has an energy-dependent potential; only norm, integrate "
                          "and verify are available")
    if not cfg.lam > 0 and cfg.model == "box":
        raise ConfigError("the box needs lambda > 0")
    fam, u2 = model.u1(), model.u2()
    if cfg.representation == "DF":
        return susy.SusyTransform.differential(model.potential, cfg.lam, fam, cfg.k, u2=u2)
    return susy.SusyTransform.integral(model.potential, cfg.lam, fam, cfg.omega0, cfg.x0, u2=u2)


def _default_eps(cfg, model):
    first = [model.eigenvalue(n) for n in ((1, 2, 3) if cfg.model == "box" else (0, 1, 2))]
    return sorted({cfg.lam, *first})[:3]


def _state_family(cfg, model):
    return model.u1(math.sqrt(2.0)) if cfg.model == "box" else model.u1()


def _rays(rays):
    return [{"end": r.end, "direction": "up" if r.upward else "down", "text": str(r)}
            for r in rays]


def _report_dict(rep: susy.RegularityReport) -> dict:
    return {
        "w_left": rep.w_left, "w_right": rep.w_right, "boundary_class": rep.boundary_class,
        "admissible_K": _rays(rep.admissible_K), "admissible_omega0": _rays(rep.admissible_omega0),
        "admissible_K_text": rep.describe("DF"), "admissible_omega0_text": rep.describe("VC"),
        "I_left": rep.i_left, "I_right": rep.i_right,
    }


def _params(cfg) -> dict:
    out = {k: v for k, v in asdict(cfg).items() if k not in ("grid", "model_given")}
    out["grid"] = {"x_min": cfg.grid.x_min, "x_max": cfg.grid.x_max, "n_points": cfg.grid.n_points}
    out["representation"] = cfg.representation
    return out


def _emit(cfg, payload: dict, text_lines: list):
    if cfg.format == "json":
        body = json.dumps(to_jsonable(payload), indent=2)
    else:
        body = "\n".join(text_lines)
    if cfg.out:
        Path(cfg.out).write_text(body + "\n", encoding="utf-8")
    print(body)


# --- commands --------------------------------------------------------------------------


def _masked(fn, x, mask):
    out = np.full(x.shape, np.nan)
    if mask.any():
        out[mask] = fn(x[mask])
    return out


def cmd_partner(cfg: RunConfig) -> int:
    model = _model(cfg)
    _check_grid(cfg, model)
    T = _transform(cfg, model)
    x = cfg.grid.points()
    chk = susy.check_regular(T, cfg.grid)
    if not chk.regular:
        where = f"x = {chk.zero:.12g}" if chk.zero is not None else "an undetermined point"
        msg = f"irregular: W[u, v] vanishes at {where} (limits {chk.w_left:.6g}, {chk.w_right:.6g})"
        print(msg, file=sys.stderr)
        if not cfg.force:
            return EXIT_IRREGULAR
    report = susy.regularity_range(T)
    eps_list = cfg.eps or _default_eps(cfg, model)
    psi = _state_family(cfg, model)

    w = T.w(x)
    mask = np.abs(w) > T.threshold()
    columns = [_masked(lambda t: susy.partner_potential(T, t), x, mask)]
    labels = ["partner_potential"]
    h = susy.RESIDUAL_STEP
    lo, hi = model.potential.domain
    interior = mask & (x - 2 * h > lo) & (x + 2 * h < hi)
    if not chk.regular:
        # keep the stencil clear of the pole
        interior &= np.abs(w) > 1e-6
    residuals = {}
    for eps in eps_list:
        columns.append(_masked(lambda t: susy.transform_state(T, psi, eps, t), x, mask))
        labels.append(f"phi(eps={eps!r})")
        if interior.any():
            r = susy.state_residual(T, psi, eps, x[interior], h)
            residuals[repr(eps)] = {"absolute": r.absolute, "relative": r.relative,
                                    "scale": r.scale}
    series = GridSeries(x, columns, labels)

    meta = {
        "command": "partner",
        "parameters": _params(cfg),
        "epsilons": eps_list,
        "columns": dict(zip(series.header[1:], labels)),
        "regular": chk.regular,
        "zero": chk.zero,
        "regularity": _report_dict(report),
        "max_residuals": residuals,
        "max_abs_residual": max((r["absolute"] for r in residuals.values()), default=math.nan),
        "residual_step": h,
    }
    out = Path(cfg.out or ("partner.csv" if cfg.format == "csv" else "partner.json"))
    if cfg.format == "csv":
        series.to_csv(out)
        sidecar = out.with_suffix(".json") if out.suffix != ".json" else out.with_name(out.name + ".meta.json")
        write_json(sidecar, meta)
        print(f"wrote {out} and {sidecar}")
    else:
        write_json(out, {**meta, "data": series.to_json()})
        print(f"wrote {out}")
    print(f"max residual {meta['max_abs_residual']:.3e}; K range {report.describe('DF')}")
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    models = ("specfun", cfg.model) if cfg.model_given else checks.MODELS
    results = checks.run_checks(models, seed=cfg.seed, tol_override=cfg.tol, ell=cfg.ell)
    ok = all(r.passed for r in results)
    lines = [f"{'PASS' if r.passed else 'FAIL'} {r.model}.{r.name} "
             f"max_error={r.max_error:.3e} tol={r.tolerance:.1e}  {r.detail}" for r in results]
    lines.append(f"{sum(r.passed for r in results)}/{len(results)} checks passed (seed {cfg.seed})")
    _emit(cfg, {"seed": cfg.seed, "passed": ok, "checks": [r.as_dict() for r in results]}, lines)
    return EXIT_OK if ok else EXIT_VERIFY_FAIL


def _norm_setup(cfg, model):
    n = cfg.n
    if cfg.model == "box":
        return model.eigenvalue(n), model.u1(), model.potential
    if cfg.model == "radial_osc":
        # 1F1 terminates at an eigenvalue, where d/da of the series has a pole
        return model.eigenvalue(n), with_fd_lambda(model.u1()), model.potential
    return model.eigenvalue(n), model.state(n), model.potential


def cmd_norm(cfg: RunConfig) -> int:
    model = _model(cfg)
    lam, fam, pot = _norm_setup(cfg, model)
    w = wronskid.norm_energy(fam, pot, lam)
    q = wronskid.norm_energy(fam, pot, lam, method="quadrature")
    payload = {"command": "norm", "model": cfg.model, "n": cfg.n, "lambda": lam,
               "wronskian": w.value, "quadrature": q.value, "difference": w.value - q.value,
               "left_limit": w.left_limit, "right_limit": w.right_limit}
    lines = [f"model {cfg.model}, n = {cfg.n}, lambda = {lam!r}",
             f"wronskian limits : {w.value!r}  (left {w.left_limit!r}, right {w.right_limit!r})",
             f"quadrature       : {q.value!r}",
             f"difference       : {w.value - q.value:.3e}"]
    if w.value > 0:
        payload["normalisation_A"] = 1.0 / math.sqrt(w.value)
        lines.append(f"normalisation A  : {payload['normalisation_A']!r}")
    _emit(cfg, payload, lines)
    return EXIT_OK


def cmd_integrate(cfg: RunConfig) -> int:
    model = _model(cfg)
    x0 = cfg.x0
    x = cfg.x if cfg.x is not None else DEFAULTS[cfg.model]["x"]
    if cfg.model == "edho":
        lam, fam = model.eigenvalue(cfg.n), model.state(cfg.n)
    else:
        lam, fam = cfg.lam, model.u1()
        lo, hi = model.potential.domain
        if not (lo <= min(x0, x) and max(x0, x) <= hi):
            raise ConfigError("integration limits leave the domain")
    pot = model.potential
    w = float(wronskid.integrate_u2_energy(fam, pot, x0, x, lam))
    q = wronskid.integrate_u2_quad(fam, x0, x, lam, pot)
    payload = {"command": "integrate", "model": cfg.model, "lambda": lam, "x0": x0, "x": x,
               "weight": "1 - V_lambda" if pot.energy_dependent else "1",
               "wronskian": w, "quadrature": q, "difference": w - q}
    lines = [f"int_{{{x0!r}}}^{{{x!r}}} {'(1 - V_lam) ' if pot.energy_dependent else ''}u^2 "
             f"at lambda = {lam!r}",
             f"wronskian  : {w!r}", f"quadrature : {q!r}", f"difference : {w - q:.3e}"]
    _emit(cfg, payload, lines)
    return EXIT_OK


def cmd_regularity(cfg: RunConfig) -> int:
    model = _model(cfg)
    T = _transform(cfg, model)
    rep = susy.regularity_range(T)
    chk = susy.check_regular(T)
    payload = {"command": "regularity", "parameters": _params(cfg), **_report_dict(rep),
               "constant": T.free_constant, "regular": chk.regular, "zero": chk.zero}
    name = "K" if cfg.representation == "DF" else "omega0"
    verdict = "regular" if chk.regular else (
        f"irregular, zero at x = {chk.zero:.12g}" if chk.zero is not None else "irregular")
    lines = [f"W[u, u_lam] limits: left {rep.w_left!r}, right {rep.w_right!r}",
             f"boundary class   : {rep.boundary_class}",
             f"admissible K     : {rep.describe('DF')}",
             f"admissible omega0: {rep.describe('VC')}",
             f"{name} = {T.free_constant!r}: {verdict}"]
    _emit(cfg, payload, lines)
    return EXIT_OK


COMMANDS = {"partner": cmd_partner, "verify": cmd_verify, "norm": cmd_norm,
            "integrate": cmd_integrate, "regularity": cmd_regularity}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key = value settings file")
    common.add_argument("--model", choices=MODEL_NAMES)
    common.add_argument("--ell", type=int, help="angular momentum of radial_osc (default 1)")
    common.add_argument("--lambda", dest="lam", type=float, help="factorisation energy")
    common.add_argument("--k", type=float, help="free constant K (differential form)")
    common.add_argument("--omega0", type=float, help="free constant omega0 (integral form)")
    common.add_argument("--x0", type=float, help="base point / lower integration limit")
    common.add_argument("--x", type=float, help="upper integration limit")
    common.add_argument("--n", type=int, help="state label")
    common.add_argument("--grid", type=parse_grid, help="xmin:xmax:n")
    common.add_argument("--eps", type=_parse_eps, help="comma-separated state energies")
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--out", help="output path")
    common.add_argument("--seed", type=int, help="RNG seed for verify (default 42)")
    common.add_argument("--tol", type=float, help="override every verify tolerance")
    common.add_argument("--force", action="store_true", help="write data for irregular K")

    parser = _Parser(prog="jordansusy", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    helps = {"partner": "sample the partner potential and transformed states",
             "verify": "run the invariant checks",
             "norm": "norm of a model state by Wronskian limits and by quadrature",
             "integrate": "integral of u^2 by the Wronskian identity and by quadrature",
             "regularity": "admissible free constants"}
    for name, text in helps.items():
        sub.add_parser(name, parents=[common], help=text)
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except ConfigError as exc:
        print(f"jordansusy: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        cfg = build_config(args)
        return COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"jordansusy: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (JordanSusyError, ArithmeticError, ValueError) as exc:
        print(f"jordansusy: numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
