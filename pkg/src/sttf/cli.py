"""Command-line front end.

Every command reads a PDE description (JSON), writes its result to ``--out``
and embeds a provenance record (tool version and a hash of the effective
configuration).  Exit codes: 64 bad usage or configuration, 65 malformed
input data, 70 numerical failure.  Stability verdicts never change the exit
code.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from dataclasses import asdict, dataclass, field
from decimal import Decimal, InvalidOperation
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .continuous import (
    SeparableDampedSineInput,
    find_peaks,
    magnitude_spectrum,
    output_spectrum,
    phase_spectrum,
    sttf_from_pde,
    topographic_prominence,
)
from .discretization import GridSpacing, StencilMode, discrete_coefficients, discrete_sttf
from .errors import (
    BoundaryContamination,
    CflViolation,
    DegeneratePde,
    DimMismatch,
    SttfError,
)
from .oracles import (
    convergence_orders,
    dalembert,
    dft_gain_oracle,
    discrete_wave_frequency,
    gaussian_data,
    leapfrog_error,
    measured_dispersion,
    wave_leapfrog,
)
from .pde import PdeModel
from .stability import DEFAULT_EPS_CIRCLE, DEFAULT_RESOLUTION, Verdict, classify

EX_USAGE, EX_DATAERR, EX_SOFTWARE = 64, 65, 70

DFT_THRESHOLD = 1e-10
ORDER_TARGET, ORDER_TOL = 2.0, 0.3

VERDICT_WORDS = {
    Verdict.STABLE: "STABLE",
    Verdict.MARGINALLY_STABLE: "MARGINAL",
    Verdict.UNSTABLE: "UNSTABLE",
}


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    pde_path: Optional[str] = None
    output_path: Optional[str] = None
    grid: dict = field(default_factory=dict)  # axis -> (min, max, step) as strings
    fixed: dict = field(default_factory=dict)  # axis -> value
    mode: str = StencilMode.PAPER_LITERAL.value
    spacing: tuple = (1.0, 1.0)
    resolution: Optional[int] = None
    input: Optional[dict] = None
    extra: dict = field(default_factory=dict)

    def digest(self, pde: Optional[PdeModel]) -> str:
        payload = {k: v for k, v in asdict(self).items() if k not in ("pde_path", "output_path")}
        payload["pde"] = pde.to_json_dict() if pde is not None else None
        blob = json.dumps(payload, sort_keys=True, default=str).encode()
        return hashlib.sha256(blob).hexdigest()


# -- parsing helpers --------------------------------------------------------------


def parse_grid(text: str) -> dict[int, tuple[str, str, str]]:
    """``"w1=-4:4:0.05,w2=..."`` -> ``{0: ("-4", "4", "0.05"), ...}``."""
    out = {}
    for item in filter(None, (s.strip() for s in text.split(","))):
        name, _, spec = item.partition("=")
        axis = _axis_index(name)
        parts = spec.split(":")
        if len(parts) != 3:
            raise UsageError(f"grid entry {item!r} must look like w1=min:max:step")
        lo, hi, step = (_decimal(p) for p in parts)
        if step <= 0 or hi < lo:
            raise UsageError(f"grid entry {item!r} needs step > 0 and max >= min")
        if (hi - lo) % step != 0:
            raise UsageError(f"grid entry {item!r}: (max - min) is not a multiple of step")
        if axis in out:
            raise UsageError(f"axis w{axis + 1} given twice")
        out[axis] = tuple(parts)
    return out


def grid_axis(lo: str, hi: str, step: str) -> np.ndarray:
    """Samples ``lo + i*step`` computed exactly in decimal, then rounded once."""
    lo_d, hi_d, st = Decimal(lo), Decimal(hi), Decimal(step)
    n = int((hi_d - lo_d) / st) + 1
    return np.array([float(lo_d + i * st) for i in range(n)])


def parse_fixed(text: str) -> dict[int, float]:
    out = {}
    for item in filter(None, (s.strip() for s in text.split(","))):
        name, _, value = item.partition("=")
        axis = _axis_index(name)
        if axis in out:
            raise UsageError(f"axis w{axis + 1} fixed twice")
        out[axis] = float(_decimal(value))
    return out


def parse_input(text: str) -> dict:
    """``"K=30,a=0.1,0.2,0.3,wp=1,2,3"``; bare values continue the previous key."""
    fields: dict[str, list[float]] = {}
    key = None
    for tok in (s.strip() for s in text.split(",")):
        if "=" in tok:
            key, _, tok = tok.partition("=")
            key = key.strip()
            if key not in ("K", "a", "wp"):
                raise UsageError(f"unknown input parameter {key!r}")
            if key in fields:
                raise UsageError(f"input parameter {key!r} given twice")
            fields[key] = []
        if key is None:
            raise UsageError("input description must start with a key")
        fields[key].append(float(_decimal(tok)))
    if set(fields) != {"K", "a", "wp"} or len(fields["K"]) != 1:
        raise UsageError("input needs K=<gain>, a=<decays...>, wp=<carriers...>")
    return {"K": fields["K"][0], "a": fields["a"], "wp": fields["wp"]}


def _axis_index(name: str) -> int:
    name = name.strip()
    if not (name.startswith("w") and name[1:].isdigit() and int(name[1:]) >= 1):
        raise UsageError(f"axis names are w1, w2, ...; got {name!r}")
    return int(name[1:]) - 1


def _decimal(s: str) -> Decimal:
    try:
        d = Decimal(s.strip())
    except InvalidOperation:
        raise UsageError(f"not a number: {s!r}") from None
    if not d.is_finite():
        raise UsageError(f"not a finite number: {s!r}")
    return d


def load_pde(path: Optional[str]) -> PdeModel:
    if path is None:
        raise UsageError("--pde is required")
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"PDE file not found: {path}")
    try:
        obj = json.loads(p.read_text())
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise DataError(f"{path}: invalid JSON: {exc}") from None
    if not isinstance(obj, dict):
        raise DataError(f"{path}: expected a JSON object")
    try:
        return PdeModel.from_json_dict(obj)
    except (ValueError, TypeError) as exc:
        raise DataError(f"{path}: {exc}") from None


# -- output helpers ---------------------------------------------------------------


def provenance(config: RunConfig, pde: Optional[PdeModel]) -> dict:
    return {"tool": f"sttf {__version__}", "config_sha256": config.digest(pde)}


def write_json(path: Optional[str], obj: dict) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _comment_line(prov: dict) -> str:
    return f"# {prov['tool']} config_sha256={prov['config_sha256']}\n"


def write_spectrum_csv(path: str, field_, prov: dict) -> None:
    mesh = np.meshgrid(*field_.axes, indexing="ij")
    mag = magnitude_spectrum(field_)
    ph = phase_spectrum(field_)
    masked = field_.pole_mask
    cols = [m.ravel() for m in mesh]
    re = np.where(masked, np.nan, field_.values.real).ravel()
    im = np.where(masked, np.nan, field_.values.imag).ravel()
    cols += [re, im, np.ma.filled(mag, np.nan).ravel(), np.ma.filled(ph, np.nan).ravel(),
             masked.ravel().astype(float)]
    names = [f"w{i + 1}" for i in range(len(field_.axes))]
    header = ",".join(names + ["re", "im", "magnitude", "phase", "masked"])
    with open(path, "w") as fh:
        fh.write(_comment_line(prov))
        fh.write(header + "\n")
        np.savetxt(fh, np.column_stack(cols), fmt="%.17g", delimiter=",")


def _sidecar(out: str, suffix: str) -> str:
    p = Path(out)
    return str(p.with_name(p.stem + suffix))


# -- commands ---------------------------------------------------------------------


def cmd_sttf(config: RunConfig) -> int:
    pde = load_pde(config.pde_path)
    g = sttf_from_pde(pde)
    write_json(config.output_path, {
        "provenance": provenance(config, pde),
        "pde": pde.to_json_dict(),
        "dim": g.dim,
        "denominator": g.denom.to_json(),
    })
    return 0


def cmd_discretize(config: RunConfig) -> int:
    pde = load_pde(config.pde_path)
    if pde.dim != 2:
        raise DataError("discretization needs a two-variable PDE")
    spacing = GridSpacing(*config.spacing)
    H = discrete_sttf(pde, spacing, config.mode)
    obj = H.to_json_dict()
    obj["coefficients"] = dict(zip(("c1", "c2", "c3", "c4", "c5", "c6"),
                                   discrete_coefficients(pde, spacing)))
    obj["provenance"] = provenance(config, pde)
    write_json(config.output_path, obj)
    return 0


def build_axes(config: RunConfig, dim: int) -> list[np.ndarray]:
    swept, fixed = set(config.grid), set(config.fixed)
    if swept & fixed:
        raise UsageError("an axis cannot be both swept and fixed")
    if swept | fixed != set(range(dim)):
        raise UsageError(f"every axis w1..w{dim} must be swept or fixed, and no others")
    return [grid_axis(*config.grid[i]) if i in swept else np.array([config.fixed[i]])
            for i in range(dim)]


def cmd_spectrum(config: RunConfig) -> int:
    pde = load_pde(config.pde_path)
    if config.input is None:
        raise UsageError("--input is required for the spectrum command")
    if config.output_path is None:
        raise UsageError("--out is required for the spectrum command")
    try:
        u = SeparableDampedSineInput(config.input["K"], config.input["a"], config.input["wp"])
    except ValueError as exc:
        raise UsageError(f"input: {exc}") from None
    if u.dim != pde.dim:
        raise UsageError(f"input has {u.dim} axes, PDE has {pde.dim}")
    axes = build_axes(config, pde.dim)
    g = sttf_from_pde(pde)
    f = output_spectrum(g, u, axes)
    prov = provenance(config, pde)
    write_spectrum_csv(config.output_path, f, prov)

    min_prom = config.extra.get("min_prominence", 0.05)
    swept = [i for i, ax in enumerate(axes) if ax.size > 1]
    peaks_obj: dict = {"provenance": prov, "min_prominence": min_prom, "swept_axes": swept}
    mag = magnitude_spectrum(f)
    slice_ = mag.reshape([axes[i].size for i in swept]) if swept else None
    if slice_ is None or any(s < 3 for s in slice_.shape):
        peaks_obj.update(count=None, peaks=None, note="peak search needs >= 3 samples per swept axis")
    else:
        idx = find_peaks(slice_, min_prom)
        prom = topographic_prominence(np.ma.filled(slice_.astype(float), 0.0))
        peaks = []
        for i in idx:
            full = [0] * pde.dim
            for ax, v in zip(swept, i):
                full[ax] = v
            peaks.append({
                "index": list(i),
                "omega": [float(axes[d][full[d]]) for d in range(pde.dim)],
                "magnitude": float(slice_[i]),
                "relative_prominence": float(prom[i] / slice_.max()),
            })
        peaks_obj.update(count=len(peaks), peaks=peaks)
    write_json(_sidecar(config.output_path, ".peaks.json"), peaks_obj)
    return 0


def cmd_stability(config: RunConfig) -> int:
    pde = load_pde(config.pde_path)
    if pde.dim != 2:
        raise DataError("stability analysis needs a two-variable PDE")
    res = config.resolution or DEFAULT_RESOLUTION
    eps = config.extra.get("eps_circle", DEFAULT_EPS_CIRCLE)
    report = classify(pde, GridSpacing(*config.spacing), config.mode, res, eps)
    obj = report.to_json_dict()
    obj["provenance"] = provenance(config, pde)
    if config.output_path is not None:
        write_json(config.output_path, obj)
    print(VERDICT_WORDS[report.verdict])
    return 0


def _wave_speed(pde: PdeModel) -> float:
    if pde.dim != 2 or not (pde.b == pde.d == pde.e == pde.g == 0 and pde.a > 0 and pde.c < 0):
        raise DataError("expected a wave-type PDE: a > 0, c < 0, b = d = e = g = 0")
    return math.sqrt(pde.a / -pde.c)


def _leapfrog_study(alpha: float) -> dict:
    data = gaussian_data(alpha, width=0.25)
    hs = [0.1, 0.05, 0.025, 0.0125]
    half_width = 4.0 + alpha
    errors = [leapfrog_error(data, h, h / (2 * alpha), half_width, 1.0) for h in hs]
    orders = convergence_orders(errors)
    return {
        "alpha": alpha, "h": hs, "lambda": 0.25, "t_end": 1.0, "errors": errors,
        "orders": [float(o) for o in orders],
        "pass": all(abs(o - ORDER_TARGET) <= ORDER_TOL for o in orders),
    }


def cmd_oracle(config: RunConfig) -> int:
    pde = load_pde(config.pde_path)
    which = config.extra.get("which", "all")
    out: dict = {"provenance": provenance(config, pde)}
    if which in ("dft", "all"):
        if pde.dim != 2:
            raise DataError("the DFT oracle needs a two-variable PDE")
        n = config.resolution or 16
        H = discrete_sttf(pde, GridSpacing(*config.spacing), config.mode)
        dev = dft_gain_oracle(H, n, n)
        out["dft"] = {"grid": [n, n], "mode": H.mode.value, "max_dev": dev,
                      "threshold": DFT_THRESHOLD, "pass": dev <= DFT_THRESHOLD}
    if which in ("leapfrog", "all"):
        try:
            alpha = _wave_speed(pde)
        except DataError:
            alpha = 1.0
        out["leapfrog"] = _leapfrog_study(alpha)
    out["pass"] = all(v["pass"] for k, v in out.items() if k in ("dft", "leapfrog"))
    write_json(config.output_path, out)
    return 0


def cmd_wave_demo(config: RunConfig) -> int:
    pde = load_pde(config.pde_path)
    alpha = _wave_speed(pde)
    h, k = config.spacing
    kappa = config.extra.get("kappa", 3.0)
    amplitude = config.extra.get("amplitude", 1.0)
    width = config.extra.get("width", 1.0)
    steps = config.extra.get("steps", 400)
    half_width = config.extra.get("half_width", 12 * width + alpha * k * steps + 1.0)
    if config.output_path is None:
        raise UsageError("--out is required for the wave-demo command")
    data = gaussian_data(alpha, width, amplitude, kappa=kappa, travelling=True)
    sim = wave_leapfrog(data, h, k, half_width, steps)
    exact = np.array([dalembert(data, x, sim.t[-1], 256) for x in sim.x])
    dev = float(np.max(np.abs(sim.values[:, -1] - exact)))
    prov = provenance(config, pde)
    summary: dict = {
        "provenance": prov, "alpha": alpha, "h": h, "k": k, "lambda": sim.lam,
        "steps": steps, "half_width": half_width, "max_dev_vs_dalembert": dev,
    }
    if amplitude != 0:
        kap, w_meas = measured_dispersion(sim, kappa)
        w_disc = discrete_wave_frequency(alpha, h, k, kap)
        summary["dispersion"] = {
            "kappa": kap, "measured_omega": w_meas, "continuous_omega": alpha * kap,
            "scheme_omega": w_disc, "rel_dev_continuous": abs(w_meas - alpha * kap) / (alpha * kap),
            "rel_dev_scheme": abs(w_meas - w_disc) / w_disc,
        }
    else:
        summary["dispersion"] = None
    with open(config.output_path, "w") as fh:
        fh.write(_comment_line(prov))
        fh.write("n,m,value\n")
        nn, mm = np.meshgrid(np.arange(sim.x.size), np.arange(sim.t.size), indexing="ij")
        np.savetxt(fh, np.column_stack([nn.ravel(), mm.ravel(), sim.values.ravel()]),
                   fmt=["%d", "%d", "%.17g"], delimiter=",")
    write_json(_sidecar(config.output_path, ".summary.json"), summary)
    return 0


COMMANDS = {
    "sttf": cmd_sttf,
    "spectrum": cmd_spectrum,
    "discretize": cmd_discretize,
    "stability": cmd_stability,
    "oracle": cmd_oracle,
    "wave-demo": cmd_wave_demo,
}


# -- argument parsing -------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EX_USAGE)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sttf", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"sttf {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, spacing=False):
        p.add_argument("--pde", required=True, help="PDE description (JSON)")
        p.add_argument("--out", help="output file (stdout for JSON commands when omitted)")
        if spacing:
            p.add_argument("--h", type=float, default=1.0)
            p.add_argument("--k", type=float, default=1.0)
            p.add_argument("--mode", choices=["paper", "corrected"], default="paper")
        return p

    common(sub.add_parser("sttf", help="continuous transfer function denominator"))
    sp = common(sub.add_parser("spectrum", help="output spectrum on a frequency grid"))
    sp.add_argument("--grid", required=True, help='e.g. "w1=-4:4:0.05,w2=-4:4:0.05"')
    sp.add_argument("--fix", default="", help='e.g. "w3=0.5"')
    sp.add_argument("--input", required=True, help='e.g. "K=30,a=0.1,0.2,0.3,wp=1,2,3"')
    sp.add_argument("--min-prominence", type=float, default=0.05)
    common(sub.add_parser("discretize", help="discrete characteristic polynomial"), spacing=True)
    st = common(sub.add_parser("stability", help="BIBO stability of the discretization"), spacing=True)
    st.add_argument("--resolution", type=int, default=DEFAULT_RESOLUTION)
    st.add_argument("--eps-circle", type=float, default=DEFAULT_EPS_CIRCLE)
    orc = common(sub.add_parser("oracle", help="DFT and leapfrog oracles"), spacing=True)
    orc.add_argument("--resolution", type=int, default=16, help="periodic grid size")
    orc.add_argument("--which", choices=["dft", "leapfrog", "all"], default="all")
    wd = common(sub.add_parser("wave-demo", help="leapfrog run with dispersion measurement"),
                spacing=True)
    wd.set_defaults(h=0.05, k=0.025)
    wd.add_argument("--kappa", type=float, default=3.0)
    wd.add_argument("--amplitude", type=float, default=1.0)
    wd.add_argument("--width", type=float, default=1.0)
    wd.add_argument("--steps", type=int, default=400)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=args.command, pde_path=args.pde, output_path=args.out)
    if hasattr(args, "mode"):
        cfg.mode = args.mode
        cfg.spacing = (args.h, args.k)
        if not (args.h > 0 and args.k > 0):
            raise UsageError("--h and --k must be positive")
    if getattr(args, "resolution", None) is not None:
        if args.resolution < 4:
            raise UsageError("--resolution must be at least 4")
        cfg.resolution = args.resolution
    if args.command == "spectrum":
        cfg.grid = parse_grid(args.grid)
        cfg.fixed = parse_fixed(args.fix)
        cfg.input = parse_input(args.input)
        cfg.extra["min_prominence"] = args.min_prominence
    elif args.command == "stability":
        cfg.extra["eps_circle"] = args.eps_circle
    elif args.command == "oracle":
        cfg.extra["which"] = args.which
    elif args.command == "wave-demo":
        cfg.extra.update(kappa=args.kappa, amplitude=args.amplitude, width=args.width,
                         steps=args.steps)
    return cfg


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # --help, --version and usage errors
        return exc.code if isinstance(exc.code, int) else EX_USAGE
    try:
        config = config_from_args(args)
        return COMMANDS[config.command](config)
    except UsageError as exc:
        print(f"sttf: {exc}", file=sys.stderr)
        return EX_USAGE
    except (CflViolation, BoundaryContamination) as exc:
        print(f"sttf: {exc}", file=sys.stderr)
        return EX_USAGE
    except (DataError, DegeneratePde, DimMismatch) as exc:
        print(f"sttf: {exc}", file=sys.stderr)
        return EX_DATAERR
    except (SttfError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"sttf: numerical failure: {exc}", file=sys.stderr)
        return EX_SOFTWARE
    except ValueError as exc:
        print(f"sttf: {exc}", file=sys.stderr)
        return EX_USAGE


if __name__ == "__main__":
    sys.exit(main())
