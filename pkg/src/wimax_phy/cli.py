"""Batch command line: configure a run, simulate BER curves, emit files.

One invocation runs every (channel, cp) combination requested (repeat
--channel / --cp to sweep) and writes per-combination CSV or JSON plus a
key=value manifest; --plot renders the curves of the whole invocation
into one PNG next to the data files.

A config file holds the same keys as the long flags (key=value, '#'
comments, lists comma-separated); explicit flags override file values.
"""

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__, harness, link
from .channel import TERRAIN_BY_MODEL, get_channel_model, tap_table_checksum
from .ofdm import CP_RATIOS

CSV_HEADER = "snr_db,bits,bit_errors,ber,stderr"
BANDWIDTH_RANGE = (1.25e6, 28e6)
CHANNEL_NAMES = ["awgn"] + sorted(TERRAIN_BY_MODEL)
MODULATIONS = ("bpsk", "qpsk", "16qam", "64qam")
RATES = ("1/2", "2/3", "3/4")


@dataclass
class RunConfig:
    modulation: str
    rate: str | None  # None = uncoded
    channels: list[str] = field(default_factory=lambda: ["awgn"])
    cps: list[str] = field(default_factory=lambda: ["1/4"])
    bandwidth_hz: float = 5e6
    snr_start: float = 0.0
    snr_step: float = 2.0
    snr_stop: float = 20.0
    snr_axis: str = "snr"
    estimation: str = "perfect"
    seed: int = 0
    min_errors: int = harness.DEFAULT_MIN_ERRORS
    max_bits: int = harness.DEFAULT_MAX_BITS
    output: str = "ber.csv"
    format: str = "csv"
    plot: bool = False

    @property
    def snr_grid(self) -> tuple:
        grid = []
        v = self.snr_start
        while v <= self.snr_stop + 1e-9:
            grid.append(round(v, 9))
            v += self.snr_step
        return tuple(grid)


def _parse_snr(text: str):
    parts = text.split(":")
    try:
        if len(parts) == 1:
            v = float(parts[0])
            return v, 1.0, v
        start, step, stop = (float(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"--snr expects START:STEP:STOP or a single value, got {text!r}")
    if step <= 0 or stop < start:
        raise argparse.ArgumentTypeError(f"--snr range {text!r} must ascend with positive step")
    return start, step, stop


def _read_config_file(path: str) -> dict:
    values = {}
    for ln, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{ln}: expected key=value, got {raw!r}")
        key, val = (s.strip() for s in line.split("=", 1))
        values[key.replace("-", "_")] = val
    return values


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="wimax-phy",
        description="Fixed-WiMAX OFDM PHY link simulator: BER vs SNR curves.",
    )
    ap.add_argument("--config", help="key=value config file; flags override its values")
    ap.add_argument("--modulation", choices=MODULATIONS)
    ap.add_argument("--rate", choices=RATES, help="overall code rate row; omit with --uncoded")
    ap.add_argument("--uncoded", action="store_true", help="bypass RS+CC coding")
    ap.add_argument("--channel", action="append", choices=CHANNEL_NAMES, dest="channels",
                    help="repeatable: awgn or sui1..sui6")
    ap.add_argument("--cp", action="append", choices=CP_RATIOS, dest="cps",
                    help="repeatable cyclic-prefix ratio")
    ap.add_argument("--bandwidth", type=float, dest="bandwidth_hz", help="channel bandwidth in Hz")
    ap.add_argument("--snr", type=_parse_snr, help="grid as START:STEP:STOP dB (or one value)")
    ap.add_argument("--snr-axis", choices=("snr", "ebn0"), dest="snr_axis",
                    help="interpret the grid as channel SNR or per-info-bit Eb/N0")
    ap.add_argument("--estimation", choices=("perfect", "pilot_ls"))
    ap.add_argument("--seed", type=int, help="master seed; equal seeds reproduce byte-identical results")
    ap.add_argument("--min-errors", type=int, dest="min_errors")
    ap.add_argument("--max-bits", type=int, dest="max_bits")
    ap.add_argument("-o", "--output", help="output path (stem is reused for sweeps/plots)")
    ap.add_argument("--format", choices=("csv", "json"))
    ap.add_argument("--plot", action="store_true", help="render a BER figure next to the output")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return ap


_LIST_KEYS = {"channels": "channel", "cps": "cp"}


def parse_config(argv) -> RunConfig:
    """Merge config file and flags into a validated RunConfig."""
    ap = build_parser()
    ns = ap.parse_args(argv)
    merged = {}
    if ns.config:
        try:
            file_vals = _read_config_file(ns.config)
        except OSError as exc:
            ap.error(f"cannot read config file: {exc}")
        for key, val in file_vals.items():
            if key == "channel":
                merged["channels"] = [v.strip() for v in val.split(",")]
            elif key == "cp":
                merged["cps"] = [v.strip() for v in val.split(",")]
            elif key in ("modulation", "rate", "snr_axis", "estimation", "output", "format"):
                merged[key] = val
            elif key == "snr":
                merged["snr"] = _parse_snr(val)
            elif key in ("seed", "min_errors", "max_bits"):
                merged[key] = int(val)
            elif key == "bandwidth" or key == "bandwidth_hz":
                merged["bandwidth_hz"] = float(val)
            elif key in ("uncoded", "plot"):
                merged[key] = val.lower() in ("1", "true", "yes")
            else:
                ap.error(f"unknown config key {key!r}")

    for key in ("modulation", "rate", "channels", "cps", "bandwidth_hz", "snr",
                "snr_axis", "estimation", "seed", "min_errors", "max_bits", "output", "format"):
        flag = getattr(ns, key if key != "snr" else "snr")
        if flag is not None:
            merged[key] = flag
    if ns.uncoded:
        merged["uncoded"] = True
    if ns.plot:
        merged["plot"] = True

    if not merged.get("modulation"):
        ap.error("--modulation is required (flag or config file)")
    uncoded = bool(merged.pop("uncoded", False))
    rate = merged.get("rate")
    if uncoded:
        if rate is not None:
            ap.error("--uncoded and --rate are mutually exclusive")
        merged["rate"] = None
    elif rate is None:
        ap.error("--rate is required unless --uncoded is given")
    else:
        try:
            link.coding_profile(merged["modulation"], rate)
        except ValueError as exc:
            ap.error(str(exc))

    snr = merged.pop("snr", (0.0, 2.0, 20.0))
    cfg = RunConfig(
        modulation=merged["modulation"],
        rate=merged["rate"],
        snr_start=snr[0],
        snr_step=snr[1],
        snr_stop=snr[2],
        **{k: v for k, v in merged.items() if k not in ("modulation", "rate")},
    )
    for name in cfg.channels:
        if name not in CHANNEL_NAMES:
            ap.error(f"unknown channel {name!r}; valid: {', '.join(CHANNEL_NAMES)}")
    for g in cfg.cps:
        if g not in CP_RATIOS:
            ap.error(f"invalid cp ratio {g!r}; valid: {', '.join(CP_RATIOS)}")
    lo, hi = BANDWIDTH_RANGE
    if not lo <= cfg.bandwidth_hz <= hi:
        ap.error(f"bandwidth {cfg.bandwidth_hz:g} Hz outside the supported {lo:g}..{hi:g} Hz range")
    if cfg.format not in ("csv", "json"):
        ap.error(f"unknown format {cfg.format!r}")
    return cfg


# ---- output files ---------------------------------------------------------


def format_csv(curve: harness.BerCurve) -> str:
    lines = [CSV_HEADER]
    for p in curve.points:
        lines.append(f"{p.snr_db:g},{p.bits},{p.bit_errors},{p.ber:.6e},{p.stderr:.6e}")
    return "\n".join(lines) + "\n"


def _config_record(cfg: RunConfig, channel: str, g: str) -> dict:
    return {
        "modulation": cfg.modulation,
        "rate": cfg.rate if cfg.rate is not None else "uncoded",
        "channel": channel,
        "cp": g,
        "bandwidth_hz": cfg.bandwidth_hz,
        "snr": f"{cfg.snr_start:g}:{cfg.snr_step:g}:{cfg.snr_stop:g}",
        "snr_axis": cfg.snr_axis,
        "estimation": cfg.estimation,
        "seed": cfg.seed,
        "min_errors": cfg.min_errors,
        "max_bits": cfg.max_bits,
    }


def _profile_row_text(cfg: RunConfig) -> str:
    if cfg.rate is None:
        return f"{cfg.modulation} uncoded"
    row = link.coding_profile(cfg.modulation, cfg.rate)
    return (f"{row.modulation} {row.uncoded_bytes}/{row.coded_bytes} bytes rate {row.overall_rate} "
            f"rs({row.rs.n_out},{row.rs.k_in},{row.rs.t_corr}) cc {row.cc_rate}")


def emit_results(curve: harness.BerCurve, cfg: RunConfig, path: Path, fmt: str,
                 channel: str, g: str) -> list[Path]:
    """Write the curve (csv or json) plus its manifest; returns written paths."""
    if not curve.points:
        raise ValueError("cannot emit an empty curve")
    path.parent.mkdir(parents=True, exist_ok=True)
    if fmt == "csv":
        path.write_text(format_csv(curve))
    else:
        doc = {
            "config": _config_record(cfg, channel, g),
            "points": [
                {"snr_db": p.snr_db, "bits": p.bits, "bit_errors": p.bit_errors,
                 "ber": p.ber, "stderr": p.stderr}
                for p in curve.points
            ],
        }
        path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")

    manifest = dict(_config_record(cfg, channel, g))
    manifest["profile_row"] = _profile_row_text(cfg)
    manifest["tap_table_sha256"] = tap_table_checksum()
    manifest["tool_version"] = __version__
    manifest["timestamp"] = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
    mpath = path.with_name(path.name + ".manifest")
    mpath.write_text("".join(f"{k}={manifest[k]}\n" for k in manifest))
    return [path, mpath]


def read_results_json(path) -> tuple[dict, harness.BerCurve]:
    doc = json.loads(Path(path).read_text())
    points = tuple(
        harness.BerPoint(p["snr_db"], p["bits"], p["bit_errors"]) for p in doc["points"]
    )
    return doc["config"], harness.BerCurve(points)


def _combo_path(base: Path, channel: str, g: str, single: bool) -> Path:
    if single:
        return base
    tag = f"{channel}_cp{g.replace('/', '-')}"
    return base.with_name(f"{base.stem}_{tag}{base.suffix}")


def main(argv=None) -> int:
    cfg = parse_config(argv if argv is not None else sys.argv[1:])
    base = Path(cfg.output)
    single = len(cfg.channels) == 1 and len(cfg.cps) == 1
    written = []
    curves = {}
    try:
        for channel_name in cfg.channels:
            model = get_channel_model(channel_name)
            for g in cfg.cps:
                profile = link.make_profile(cfg.modulation, cfg.rate, g=g,
                                            bandwidth_hz=cfg.bandwidth_hz, estimation=cfg.estimation)
                exp = harness.Experiment(profile, model, snr_grid=cfg.snr_grid,
                                         snr_axis=cfg.snr_axis, min_errors=cfg.min_errors,
                                         max_bits=cfg.max_bits, master_seed=cfg.seed)
                label = f"{channel_name} cp={g}"
                print(f"# {cfg.modulation} {cfg.rate or 'uncoded'} {label}")
                points = []
                for i in range(len(exp.snr_grid)):
                    pt = harness.run_point(exp, i)
                    points.append(pt)
                    print(f"{cfg.snr_axis} {pt.snr_db:g} dB -> ber {pt.ber:.3e} ({pt.bit_errors}/{pt.bits})")
                curve = harness.BerCurve(tuple(points))
                curves[label] = curve
                out = _combo_path(base, channel_name, g, single)
                written += emit_results(curve, cfg, out, cfg.format, channel_name, g)
        if cfg.plot:
            xlabel = "Eb/N0 (dB)" if cfg.snr_axis == "ebn0" else "SNR (dB)"
            fig_path = base.with_suffix(".png")
            from .plotting import render_ber_figure

            render_ber_figure(curves, str(fig_path), xlabel=xlabel,
                              title=f"{cfg.modulation} {cfg.rate or 'uncoded'}")
            written.append(fig_path)
    except OSError as exc:
        print(f"error: cannot write results: {exc}", file=sys.stderr)
        return 1
    for p in written:
        print(f"wrote {p}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
