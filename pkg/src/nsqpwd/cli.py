"""Command-line front end: distributions, LFM detection runs, the verification
suite and transforms of stored fields.

Exit codes: 0 ok, 1 verification failure, 2 config error, 3 numeric-domain
error, 4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import struct
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Optional, Sequence

import numpy as np

from . import lfm, oracle
from .errors import ConfigError, DomainError, NSQPWDError, ParseError
from .kernel import Point2
from .params import ParamTuple, derive_coeffs, omega0, omega1, validate
from .qpft import ComplexField, Grid2D, forward, gaussian, inverse
from .wigner import EvalMode, PaperRange, SupportClipped, WignerEvaluator, WignerSlice

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_CONFIG = 2
EXIT_DOMAIN = 3
EXIT_IO = 4

MAGIC = b"NSQW1"
_HEADER = struct.Struct("<5sII4d")


# data files


def _fmt(v: float) -> str:
    return repr(float(v))


def write_grid(f: ComplexField, path: str | Path, fmt: str = "bin") -> None:
    """Write a field as binary (NSQW1) or CSV (x1,x2,re,im)."""
    p = Path(path)
    g = f.grid
    if fmt == "bin":
        vals = np.ascontiguousarray(f.values, dtype="<c16")
        with open(p, "wb") as fh:
            fh.write(_HEADER.pack(MAGIC, g.n1, g.n2, g.start1, g.step1, g.start2, g.step2))
            fh.write(vals.tobytes())
    elif fmt == "csv":
        a1, a2 = g.axis1(), g.axis2()
        lines = ["x1,x2,re,im"]
        for i in range(g.n1):
            for j in range(g.n2):
                z = f.values[i, j]
                lines.append(f"{_fmt(a1[i])},{_fmt(a2[j])},{_fmt(z.real)},{_fmt(z.imag)}")
        p.write_text("\n".join(lines) + "\n", encoding="utf-8")
    else:
        raise ValueError(f"unknown format {fmt!r}")


def read_grid(path: str | Path) -> ComplexField:
    """Read a field written by write_grid; the format is detected from the content."""
    data = Path(path).read_bytes()
    if data.startswith(MAGIC):
        if len(data) < _HEADER.size:
            raise ParseError("truncated header")
        _, n1, n2, s1, h1, s2, h2 = _HEADER.unpack_from(data)
        if n1 < 1 or n2 < 1:
            raise ParseError(f"bad dimensions {n1}x{n2}")
        body = data[_HEADER.size :]
        if len(body) != 16 * n1 * n2:
            raise ParseError(f"expected {16 * n1 * n2} payload bytes, found {len(body)}")
        if not (h1 > 0 and h2 > 0):
            raise ParseError("non-positive grid step")
        vals = np.frombuffer(body, dtype="<c16").reshape(n1, n2).astype(np.complex128)
        return ComplexField(Grid2D(n1, n2, s1, s2, h1, h2), vals)
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError("unrecognized file format") from exc
    rows = [ln for ln in text.splitlines() if ln.strip()]
    if not rows or rows[0].strip() != "x1,x2,re,im":
        raise ParseError("bad magic or CSV header")
    try:
        arr = np.array([[float(t) for t in ln.split(",")] for ln in rows[1:]], dtype=float)
    except ValueError as exc:
        raise ParseError(f"malformed CSV row: {exc}") from exc
    if arr.ndim != 2 or arr.shape[1] != 4 or arr.shape[0] == 0:
        raise ParseError("CSV rows must have four columns")
    a1 = np.unique(arr[:, 0])
    a2 = np.unique(arr[:, 1])
    n1, n2 = a1.size, a2.size
    if n1 * n2 != arr.shape[0]:
        raise ParseError("CSV rows do not form a full grid")
    h1 = (a1[-1] - a1[0]) / (n1 - 1) if n1 > 1 else 1.0
    h2 = (a2[-1] - a2[0]) / (n2 - 1) if n2 > 1 else 1.0
    vals = (arr[:, 2] + 1j * arr[:, 3]).reshape(n1, n2)
    return ComplexField(Grid2D(n1, n2, float(a1[0]), float(a2[0]), float(h1), float(h2)), vals)


def write_slice_csv(slc: WignerSlice, path: Path) -> None:
    g = slc.wgrid
    a1, a2 = g.axis1(), g.axis2()
    lines = ["omega1,omega2,re,im,abs"]
    for i in range(g.n1):
        for j in range(g.n2):
            z = complex(slc.values[i, j])
            lines.append(f"{_fmt(a1[i])},{_fmt(a2[j])},{_fmt(z.real)},{_fmt(z.imag)},{_fmt(abs(z))}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_gnuplot_matrix(slc: WignerSlice, path: Path) -> None:
    """|W| as an ASCII 'nonuniform matrix' (first row: count and ω2 nodes; then ω1 and values)."""
    g = slc.wgrid
    mag = np.abs(slc.values)
    lines = [" ".join([str(g.n2)] + [_fmt(v) for v in g.axis2()])]
    for i, w1 in enumerate(g.axis1()):
        lines.append(" ".join([_fmt(w1)] + [_fmt(v) for v in mag[i]]))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_slice(slc: WignerSlice, stem: Path, fmt: str) -> list[Path]:
    out = []
    if fmt in ("csv", "both"):
        p = stem.with_suffix(".csv")
        write_slice_csv(slc, p)
        out.append(p)
    if fmt in ("bin", "both"):
        p = stem.with_suffix(".bin")
        write_grid(ComplexField(slc.wgrid, slc.values), p, "bin")
        out.append(p)
    p = stem.with_suffix(".dat")
    write_gnuplot_matrix(slc, p)
    out.append(p)
    return out


# configuration

OMEGA_PRESETS = {"omega0": omega0, "omega1": omega1}
SIGNAL_PRESETS = {"mono": lfm.mono_spec, "bi": lfm.bi_spec, "tri": lfm.tri_spec}


@dataclass
class RunConfig:
    omega: ParamTuple
    signal: Any
    grid: Grid2D
    wgrid: Any
    slices: list[Point2]
    mode: EvalMode
    snr_db: Optional[float] = None
    seed: int = 0
    out_dir: Path = Path("out")
    fmt: str = "csv"
    peaks: int = 3
    match_cells: float = 1.5
    tolerances: dict[str, float] = field(default_factory=dict)
    qpft: dict[str, Any] = field(default_factory=dict)
    base_dir: Path = Path(".")


def _need(d: dict, key: str, where: str) -> Any:
    if key not in d:
        raise ConfigError(f"missing key {key!r} in {where}")
    return d[key]


def parse_omega(v: Any) -> ParamTuple:
    if isinstance(v, str):
        if v not in OMEGA_PRESETS:
            raise ConfigError(f"unknown omega preset {v!r}")
        return OMEGA_PRESETS[v]()
    if not isinstance(v, dict):
        raise ConfigError("omega must be a preset name or an object with keys A..E")
    try:
        om = ParamTuple.from_dict(v)
    except (KeyError, ValueError, TypeError) as exc:
        raise ConfigError(f"bad omega: {exc}") from exc
    try:
        validate(om)
    except DomainError as exc:
        raise ConfigError(f"invalid matrix B: {exc}") from exc
    return om


def parse_component(d: Any) -> lfm.LFMComponent:
    if not isinstance(d, dict):
        raise ConfigError("each component must be an object")
    try:
        return lfm.LFMComponent(
            kappa=complex(float(d.get("kappa_re", 1.0)), float(d.get("kappa_im", 0.0))),
            alpha=float(d.get("alpha", 0.0)),
            beta=float(d.get("beta", 0.0)),
            mu=float(d.get("mu", 0.0)),
            lam=float(d.get("lambda", 0.0)),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad component: {exc}") from exc


def parse_signal(v: Any) -> Any:
    """SignalSpec, ("gaussian", width) or ("file", path)."""
    if isinstance(v, str):
        if v == "gaussian":
            return ("gaussian", 1.0)
        if v not in SIGNAL_PRESETS:
            raise ConfigError(f"unknown signal preset {v!r}")
        return SIGNAL_PRESETS[v]()
    if not isinstance(v, dict):
        raise ConfigError("signal must be a preset name or an object")
    if "gaussian" in v:
        g = v["gaussian"] or {}
        return ("gaussian", float(g.get("width", 1.0)) if isinstance(g, dict) else 1.0)
    if "file" in v:
        return ("file", str(v["file"]))
    comps = _need(v, "components", "signal")
    if not isinstance(comps, list):
        raise ConfigError("signal.components must be a list")
    try:
        return lfm.SignalSpec(tuple(parse_component(c) for c in comps), float(_need(v, "T", "signal")))
    except ValueError as exc:
        raise ConfigError(f"bad signal: {exc}") from exc


def parse_grid(v: Any, what: str) -> Grid2D:
    if not isinstance(v, dict):
        raise ConfigError(f"{what} must be an object")
    try:
        if "half_width" in v:
            return Grid2D.centered(int(v["n"]), float(v["half_width"]))
        if "lo1" in v:
            n = v.get("n")
            return Grid2D.from_intervals(
                float(v["lo1"]), float(v["hi1"]), int(v.get("n1", n)), float(v["lo2"]), float(v["hi2"]), int(v.get("n2", n))
            )
        return Grid2D(int(v["n1"]), int(v["n2"]), float(v["start1"]), float(v["start2"]), float(v["step1"]), float(v["step2"]))
    except (KeyError, TypeError, ValueError, NSQPWDError) as exc:
        raise ConfigError(f"bad {what}: {exc}") from exc


def _default_doc(command: str) -> dict:
    if command == "verify":
        return {
            "omega": "omega0",
            "signal": "gaussian",
            "grid": {"n": 64, "half_width": 4.0},
            "wgrid": {"lo1": -7.0, "hi1": 4.0, "lo2": -5.0, "hi2": 3.0, "n": 64},
        }
    if command == "qpft":
        return {"omega": "omega0"}
    return {
        "omega": "omega0",
        "signal": "mono",
        "grid": {"n": 256, "half_width": 20.0},
        "wgrid": {"lo1": -3.5, "hi1": -0.5, "lo2": -2.5, "hi2": 0.5, "n": 96},
        "slices": [[0.4, 0.1]],
        "mode": "paper",
        "xi_samples": 256,
    }


def load_config(doc: dict, command: str, base_dir: Path = Path(".")) -> RunConfig:
    if not isinstance(doc, dict):
        raise ConfigError("config root must be a JSON object")
    omega = parse_omega(doc.get("omega", "omega0"))
    signal = parse_signal(doc["signal"]) if "signal" in doc else (None if command == "qpft" else parse_signal("mono"))
    grid_doc = doc.get("grid")
    if grid_doc is None:
        if isinstance(signal, lfm.SignalSpec):
            grid = Grid2D.centered(256, 0.5 * signal.T)
        else:
            grid = Grid2D.centered(64, 4.0)
    else:
        grid = parse_grid(grid_doc, "grid")
    w = doc.get("wgrid")
    if isinstance(w, dict) and "auto" in w:
        a = w["auto"] or {}
        wgrid: Any = ("auto", float(a.get("pad", 0.6)), int(a.get("n", 64)))
    elif w is None:
        wgrid = None
    else:
        wgrid = parse_grid(w, "wgrid")
    slices = [(float(p[0]), float(p[1])) for p in doc.get("slices", [])]
    mode_name = doc.get("mode", "clipped")
    if mode_name == "paper":
        T = signal.T if isinstance(signal, lfm.SignalSpec) else float(doc.get("T", 0) or 0)
        if not T > 0:
            raise ConfigError("paper mode needs an LFM signal with support length T")
        mode: EvalMode = PaperRange(T, int(doc.get("xi_samples", 512)))
    elif mode_name == "clipped":
        mode = SupportClipped()
    else:
        raise ConfigError(f"mode must be 'paper' or 'clipped', got {mode_name!r}")
    out = doc.get("output", {}) or {}
    fmt = out.get("format", "csv")
    if fmt not in ("csv", "bin", "both"):
        raise ConfigError(f"unknown output format {fmt!r}")
    snr = doc.get("snr_db")
    return RunConfig(
        omega=omega,
        signal=signal,
        grid=grid,
        wgrid=wgrid,
        slices=slices,
        mode=mode,
        snr_db=None if snr is None else float(snr),
        seed=int(doc.get("seed", 0)),
        out_dir=Path(out.get("dir", "out")),
        fmt=fmt,
        peaks=int(doc.get("peaks", 3)),
        match_cells=float(doc.get("match_cells", 1.5)),
        tolerances={str(k): float(v) for k, v in (doc.get("tolerances") or {}).items()},
        qpft=dict(doc.get("qpft") or {}),
        base_dir=base_dir,
    )


def build_field(cfg: RunConfig) -> ComplexField:
    sig = cfg.signal
    if isinstance(sig, lfm.SignalSpec):
        f = lfm.synthesize(sig, cfg.grid)
    elif isinstance(sig, tuple) and sig[0] == "gaussian":
        f = gaussian(cfg.grid, sig[1])
    elif isinstance(sig, tuple) and sig[0] == "file":
        f = read_grid(cfg.base_dir / sig[1])
    else:
        raise ConfigError("no signal configured")
    if cfg.snr_db is not None:
        f = lfm.add_awgn(f, cfg.snr_db, cfg.seed)
    return f


def resolve_wgrid(cfg: RunConfig, x: Point2) -> Grid2D:
    if isinstance(cfg.wgrid, Grid2D):
        return cfg.wgrid
    if isinstance(cfg.wgrid, tuple) and isinstance(cfg.signal, lfm.SignalSpec):
        _, pad, n = cfg.wgrid
        pts = np.array([lfm.predicted_peak(cfg.omega, c, x) for c in cfg.signal.components])
        lo = pts.min(axis=0) - pad
        hi = pts.max(axis=0) + pad
        return Grid2D.from_intervals(lo[0], hi[0], n, lo[1], hi[1], n)
    raise ConfigError("wgrid must be a grid descriptor (or 'auto' with an LFM signal)")


# commands


def _slice_stem(cfg: RunConfig, i: int) -> Path:
    return cfg.out_dir / f"slice_{i}"


def _compute_slices(cfg: RunConfig, f: ComplexField) -> list[WignerSlice]:
    if not cfg.slices:
        raise ConfigError("no slice points configured")
    ev = WignerEvaluator(f, cfg.omega, cfg.mode)
    return [ev.slice(x, resolve_wgrid(cfg, x)) for x in cfg.slices]


def cmd_wd(cfg: RunConfig) -> int:
    f = build_field(cfg)
    slices = _compute_slices(cfg, f)
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    for i, slc in enumerate(slices):
        write_slice(slc, _slice_stem(cfg, i), cfg.fmt)
        print(f"slice {i} at x = ({slc.x[0]!r}, {slc.x[1]!r})")
        for rank, (w, mag) in enumerate(lfm.detect_peaks(slc, 3), 1):
            print(f"  peak {rank}: omega = ({w[0]:.6f}, {w[1]:.6f})  |W| = {mag:.6g}")
    return EXIT_OK


def detection_report(cfg: RunConfig, slices: Sequence[WignerSlice]) -> list[dict]:
    spec = cfg.signal if isinstance(cfg.signal, lfm.SignalSpec) else None
    k_eq = derive_coeffs(cfg.omega).equal
    report = []
    for slc in slices:
        g = slc.wgrid
        entry: dict[str, Any] = {
            "x": list(slc.x),
            "peaks": [{"omega": list(w), "abs": m} for w, m in lfm.detect_peaks(slc, cfg.peaks)],
            "components": [],
        }
        if spec is not None and k_eq:
            for n, comp in enumerate(spec.components):
                pred = lfm.predicted_peak(cfg.omega, comp, slc.x)
                hit = lfm.match_peak(slc, pred, cfg.match_cells)
                item: dict[str, Any] = {"component": n, "predicted": list(pred), "detected": hit is not None}
                if hit is not None:
                    item["omega"] = list(hit[0])
                    item["abs"] = hit[1]
                    item["deviation_cells"] = [float(hit[2][0]), float(hit[2][1])]
                    item["deviation"] = [hit[0][0] - pred[0], hit[0][1] - pred[1]]
                entry["components"].append(item)
            entry["cell"] = [g.step1, g.step2]
        report.append(entry)
    return report


def cmd_lfm(cfg: RunConfig) -> int:
    if not isinstance(cfg.signal, lfm.SignalSpec):
        raise ConfigError("lfm needs a signal with 'components' and 'T'")
    f = build_field(cfg)
    slices = _compute_slices(cfg, f)
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    for i, slc in enumerate(slices):
        write_slice(slc, _slice_stem(cfg, i), cfg.fmt)
    rep = detection_report(cfg, slices)
    (cfg.out_dir / "detection.json").write_text(json.dumps(rep, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    lines = []
    for entry in rep:
        lines.append(f"x = ({entry['x'][0]!r}, {entry['x'][1]!r})")
        for c in entry["components"]:
            if c["detected"]:
                d = c["deviation_cells"]
                lines.append(
                    f"  component {c['component']}: predicted ({c['predicted'][0]:.5f}, {c['predicted'][1]:.5f})"
                    f"  detected ({c['omega'][0]:.5f}, {c['omega'][1]:.5f})  |W| = {c['abs']:.6g}"
                    f"  offset [{d[0]:+.2f}, {d[1]:+.2f}] cells"
                )
            else:
                lines.append(f"  component {c['component']}: predicted ({c['predicted'][0]:.5f}, {c['predicted'][1]:.5f})  not detected")
        for p in entry["peaks"]:
            lines.append(f"  local max ({p['omega'][0]:.5f}, {p['omega'][1]:.5f})  |W| = {p['abs']:.6g}")
    text = "\n".join(lines) + "\n"
    (cfg.out_dir / "detection.txt").write_text(text, encoding="utf-8")
    sys.stdout.write(text)
    return EXIT_OK


DEFAULT_TOLERANCES = {
    "moyal": 2e-2,
    "energy": 2e-2,
    "marginal_time": 2e-2,
    "marginal_freq": 2e-2,
    "time_shift": 1e-9,
    "modulation": 1e-9,
    "dilation": 1e-9,
    "convolution": 5e-2,
    "conjugation": 1e-9,
    "stft_association": 1e-6,
}


def _bump(center: Point2, radius: float, wave: Point2):
    def fn(x1, x2):
        x1 = np.asarray(x1, dtype=float)
        x2 = np.asarray(x2, dtype=float)
        r2 = ((x1 - center[0]) ** 2 + (x2 - center[1]) ** 2) / radius**2
        env = np.where(r2 < 1.0, (1.0 - np.minimum(r2, 1.0)) ** 2, 0.0)
        return env * np.exp(1j * (wave[0] * x1 + wave[1] * x2))

    return fn


def convolution_fields() -> tuple[ComplexField, ComplexField, Point2]:
    """Two compact bumps on a 16 x 16 grid whose nodes are whole multiples of the step."""
    h = 0.25
    g = Grid2D(16, 16, -8 * h, -8 * h, h, h)
    f = ComplexField.from_function(g, _bump((-0.5, 0.25), 0.9, (0.5, -1.0)))
    k = ComplexField.from_function(g, _bump((0.25, -0.25), 0.8, (0.0, 0.7)))
    return f, k, (-0.25, 0.0)


def _interior_nodes(grid: Grid2D, shift: tuple[int, int] = (0, 0)) -> list[Point2]:
    c1, c2 = grid.n1 // 2, grid.n2 // 2
    d1, d2 = max(1, grid.n1 // 8), max(1, grid.n2 // 8)
    return [grid.node(c1 + a * d1 + shift[0], c2 + b * d2 + shift[1]) for a in (-1, 0, 1) for b in (-1, 0, 1)]


def run_suite(f: ComplexField, omega: ParamTuple, wgrid: Grid2D, tolerances: dict[str, float], seed: int = 0) -> list[oracle.CheckReport]:
    """The ten structural checks on a field, in a fixed order."""
    tol = dict(DEFAULT_TOLERANCES)
    tol.update(tolerances)
    grid = f.grid
    rng = np.random.default_rng(seed)
    x1, x2 = grid.mesh()
    g = ComplexField(grid, f.values * np.exp(1j * (0.3 * x1 - 0.2 * x2)))
    reports = [
        oracle.check_moyal(f, g, omega, grid, wgrid, tol["moyal"]),
        oracle.check_energy(f, omega, grid, wgrid, tol["energy"]),
    ]
    F = forward(f, omega, wgrid).values * np.conj(forward(f, omega.conjugate_pair(), wgrid).values)
    top = np.argsort(-np.abs(F).ravel(), kind="stable")[:9]
    wpts = [wgrid.node(*divmod(int(r), wgrid.n2)) for r in top]
    xpts = _interior_nodes(grid)
    reports.extend(oracle.check_marginals(f, omega, wpts, xpts, wgrid, tol=tol["marginal_time"]))
    reports[-1] = replace(reports[-1], tolerance=tol["marginal_freq"], passed=reports[-1].rel_err <= tol["marginal_freq"])
    wsel = wpts[:3]
    s1 = max(1, round(1.0 / grid.step1)) if grid.n1 > 4 * round(1.0 / grid.step1) else 1
    x0 = (s1 * grid.step1, 0.0)
    reports.append(oracle.check_shift_covariance(f, omega, x0, _interior_nodes(grid, (s1 // 2, 0)), wsel, tol["time_shift"]))
    reports.append(oracle.check_mod_covariance(f, omega, (1.0, 0.0), xpts, wsel, tol["modulation"]))
    dgrid = grid.scaled(0.5)
    reports.append(oracle.check_dilation(f, omega, 2.0, _interior_nodes(dgrid), wsel, tol["dilation"]))
    cf, cg, cx = convolution_fields()
    cw = [(-1.4, -1.1), (-1.0, -1.5), (-2.0, -0.8)]
    reports.append(oracle.check_convolution(cf, cg, omega.linear_part(), cx, cw, tol["convolution"]))
    reports.append(oracle.check_conjugation(f, omega, xpts, wsel, tol["conjugation"]))
    pairs = oracle.stft_pairs(f, omega, wgrid, rng)
    reports.append(oracle.check_stft_assoc(f, omega, pairs, tol["stft_association"]))
    return reports


def cmd_verify(cfg: RunConfig) -> int:
    f = build_field(cfg)
    if not isinstance(cfg.wgrid, Grid2D):
        raise ConfigError("verify needs an explicit wgrid")
    reports = run_suite(f, cfg.omega, cfg.wgrid, cfg.tolerances, cfg.seed)
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    table = oracle.reports_to_table(reports)
    (cfg.out_dir / "verify.txt").write_text(table + "\n", encoding="utf-8")
    (cfg.out_dir / "verify.json").write_text(oracle.reports_to_json(reports) + "\n", encoding="utf-8")
    print(table)
    print(f"{sum(r.passed for r in reports)}/{len(reports)} checks passed")
    return EXIT_OK if all(r.passed for r in reports) else EXIT_VERIFY


def cmd_qpft(cfg: RunConfig, input_path: Optional[str], direction: Optional[str]) -> int:
    src = input_path or cfg.qpft.get("input")
    if not src:
        raise ConfigError("qpft needs an input field (--input or qpft.input)")
    direction = direction or cfg.qpft.get("direction", "forward")
    if direction not in ("forward", "inverse"):
        raise ConfigError(f"direction must be 'forward' or 'inverse', got {direction!r}")
    target = cfg.qpft.get("grid")
    f = read_grid(Path(src) if input_path else cfg.base_dir / src)
    grid = parse_grid(target, "qpft.grid") if target is not None else f.grid
    out = forward(f, cfg.omega, grid) if direction == "forward" else inverse(f, cfg.omega, grid)
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    if cfg.fmt in ("bin", "both"):
        write_grid(out, cfg.out_dir / f"{direction}.bin", "bin")
        written.append(f"{direction}.bin")
    if cfg.fmt in ("csv", "both"):
        write_grid(out, cfg.out_dir / f"{direction}.csv", "csv")
        written.append(f"{direction}.csv")
    print(f"{direction} transform written to {cfg.out_dir}: {', '.join(written)}")
    return EXIT_OK


def _parse_point(s: str) -> Point2:
    try:
        a, b = s.split(",")
        return (float(a), float(b))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected x1,x2 but got {s!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nsqpwd", description="Quadratic-phase Wigner distribution toolkit")
    sub = p.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("wd", "compute distribution slices"),
        ("lfm", "LFM detection experiment"),
        ("verify", "run the structural property checks"),
        ("qpft", "forward/inverse transform of a stored field"),
    ):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--config", help="JSON run configuration")
        sp.add_argument("--out", help="output directory")
        sp.add_argument("--mode", choices=("paper", "clipped"))
        sp.add_argument("--seed", type=int)
        sp.add_argument("--snr-db", type=float, dest="snr_db")
        sp.add_argument("--slice", type=_parse_point, action="append", dest="slices", metavar="X1,X2")
        sp.add_argument("--format", choices=("csv", "bin", "both"), dest="fmt")
        if name == "qpft":
            sp.add_argument("--input", help="field file (NSQW1 binary or CSV)")
            sp.add_argument("--inverse", action="store_true", help="apply the inverse transform")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.config:
            path = Path(args.config)
            try:
                doc = json.loads(path.read_text(encoding="utf-8"))
            except OSError as exc:
                print(f"error: cannot read config: {exc}", file=sys.stderr)
                return EXIT_IO
            except json.JSONDecodeError as exc:
                print(f"error: config is not valid JSON: {exc}", file=sys.stderr)
                return EXIT_CONFIG
            base = path.parent
        else:
            doc = _default_doc(args.command)
            base = Path(".")
        if args.mode:
            doc["mode"] = args.mode
        if args.seed is not None:
            doc["seed"] = args.seed
        if args.snr_db is not None:
            doc["snr_db"] = args.snr_db
        if args.slices:
            doc["slices"] = [list(s) for s in args.slices]
        if args.fmt or args.out:
            out = dict(doc.get("output") or {})
            if args.fmt:
                out["format"] = args.fmt
            if args.out:
                out["dir"] = args.out
            doc["output"] = out
        cfg = load_config(doc, args.command, base)
        if args.command == "wd":
            return cmd_wd(cfg)
        if args.command == "lfm":
            return cmd_lfm(cfg)
        if args.command == "verify":
            return cmd_verify(cfg)
        return cmd_qpft(cfg, args.input, "inverse" if args.inverse else None)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DomainError as exc:
        print(f"numeric error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (OSError, ParseError) as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
