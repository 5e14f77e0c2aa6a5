"""Regenerate the Poisson output-spectrum slice at w3 = 0.5 and list its peaks.

Writes ``<out>/slice.csv`` and ``<out>/slice.peaks.json`` through the CLI, then
prints a short table.  Plotting is left to whatever tool reads the CSV.
"""
import argparse
import json
from dataclasses import dataclass
from pathlib import Path

from sttf.cli import main as sttf_main

ROOT = Path(__file__).resolve().parent.parent


@dataclass
class SliceConfig:
    out_dir: Path = ROOT / "results"
    step: float = 0.05
    extent: float = 4.0
    w3: float = 0.5
    min_prominence: float = 0.05


def run(cfg: SliceConfig) -> dict:
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    out = cfg.out_dir / "slice.csv"
    span = f"-{cfg.extent:g}:{cfg.extent:g}:{cfg.step:g}"
    code = sttf_main([
        "spectrum", "--pde", str(ROOT / "data" / "poisson3d.json"), "--out", str(out),
        "--grid", f"w1={span},w2={span}", "--fix", f"w3={cfg.w3:g}",
        "--input", "K=30,a=0.1,0.2,0.3,wp=1,2,3",
        "--min-prominence", str(cfg.min_prominence),
    ])
    if code:
        raise SystemExit(code)
    return json.loads((cfg.out_dir / "slice.peaks.json").read_text())


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out-dir", type=Path, default=SliceConfig.out_dir)
    ap.add_argument("--step", type=float, default=SliceConfig.step)
    ap.add_argument("--w3", type=float, default=SliceConfig.w3)
    args = ap.parse_args()
    peaks = run(SliceConfig(out_dir=args.out_dir, step=args.step, w3=args.w3))
    print(f"{peaks['count']} peaks")
    print(f"{'w1':>7} {'w2':>7} {'|Phi|':>10} {'rel prom':>9}")
    for p in peaks["peaks"]:
        w1, w2 = p["omega"][:2]
        print(f"{w1:7.2f} {w2:7.2f} {p['magnitude']:10.4f} {p['relative_prominence']:9.3f}")


if __name__ == "__main__":
    main()
