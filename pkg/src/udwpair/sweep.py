"""Parameter sweeps, correlation difference maps, and verification runs.

All sweep inputs and outputs are expressed in units of the switching width
sigma (energy gaps as Omega*sigma, lengths as L/sigma), matching how the
physics depends only on those ratios.  Detector placement follows the
orientation convention

    x_A = (d_a, 0, 0),    x_B = (d_a + L cos(theta), 0, L sin(theta)),

so theta = 0 separates the detectors transverse to the identified direction
and theta = pi/2 along it; ``d_a`` offsets both detectors in the reflected
plane, which matters only for the twisted cylinder (not translation
invariant there).

Row order is fixed by the grid index (ell, omega, l, theta outermost to
innermost), independent of the parallelism degree, and floats are written
with 17 significant digits, so identical configurations produce
byte-identical output.
"""

from __future__ import annotations

import math
import multiprocessing
import os
from dataclasses import dataclass, replace
from typing import Iterable, Iterator, NamedTuple

import numpy as np

from . import wightman
from .elements import (
    DetectorParams,
    elements_for,
    elements_minkowski,
    exchange_coefficient,
    nonlocal_coefficient,
)
from .entanglement import xstate_measures
from .errors import ConfigError, UdwError
from .geometry import (
    Topology,
    TopologyKind,
    WorldlinePair,
    image_separation,
    separation,
)

__all__ = [
    "GridAxis",
    "SweepConfig",
    "VerificationReport",
    "config_from_mapping",
    "parse_config_file",
    "parse_range",
    "run_sweep",
    "run_difference_map",
    "run_verification",
    "rows_to_csv",
    "rows_to_jsonl",
    "write_rows",
]

#: Environment variable naming the default output directory.
OUTPUT_DIR_ENV = "UDWPAIR_OUT_DIR"

VERIFY_TOLERANCE = 1e-6
_VERIFY_IMAGES = (1, -1, 2, -2)


@dataclass(frozen=True)
class GridAxis:
    """Inclusive linear axis start..stop with ``count`` points."""

    start: float
    stop: float
    count: int

    def validate(self, name: str) -> None:
        if not (math.isfinite(self.start) and math.isfinite(self.stop)):
            raise ConfigError(f"{name}: bounds must be finite")
        if self.count < 1:
            raise ConfigError(f"{name}: empty axis (count = {self.count})")
        if self.start > self.stop:
            raise ConfigError(f"{name}: start {self.start!r} > stop {self.stop!r}")
        if self.start < self.stop and self.count < 2:
            raise ConfigError(
                f"{name}: a non-degenerate range needs at least 2 points"
            )

    def values(self) -> np.ndarray:
        if self.count == 1:
            return np.array([self.start])
        return np.linspace(self.start, self.stop, self.count)


@dataclass(frozen=True)
class SweepConfig:
    """Everything needed to reproduce a sweep deterministically."""

    topology: TopologyKind = TopologyKind.MINKOWSKI
    ell: tuple[float, ...] = ()
    eta: int = 1
    omega: GridAxis = GridAxis(-3.0, 3.0, 64)
    l: GridAxis = GridAxis(10.0 / 64.0, 10.0, 64)
    theta: GridAxis = GridAxis(0.0, 0.0, 1)
    d_a: float = 0.0
    sigma: float = 1.0
    eps0: float = 0.01
    nmax: int = 10
    oracle: bool = False
    fmt: str = "csv"
    out: str | None = None
    jobs: int = 0  # 0 = all available cores

    def validate(self) -> "SweepConfig":
        if self.topology is TopologyKind.MINKOWSKI:
            if self.ell:
                raise ConfigError("Minkowski sweeps take no ell values")
        else:
            if not self.ell:
                raise ConfigError(f"{self.topology.value} sweeps need ell values")
            if any(e <= 0 or not math.isfinite(e) for e in self.ell):
                raise ConfigError(f"ell values must be finite and > 0: {self.ell}")
        if self.eta not in (1, -1):
            raise ConfigError(f"eta must be +1 or -1, got {self.eta!r}")
        self.omega.validate("omega")
        self.l.validate("l")
        self.theta.validate("theta")
        if self.l.start <= 0.0:
            raise ConfigError("separations must satisfy L > 0")
        if not (math.isfinite(self.sigma) and self.sigma > 0.0):
            raise ConfigError(f"sigma must be > 0, got {self.sigma!r}")
        if not (math.isfinite(self.eps0) and self.eps0 > 0.0):
            raise ConfigError(f"eps0 must be > 0, got {self.eps0!r}")
        if self.nmax < 1:
            raise ConfigError(f"nmax must be >= 1, got {self.nmax!r}")
        if self.fmt not in ("csv", "jsonl"):
            raise ConfigError(f"format must be 'csv' or 'jsonl', got {self.fmt!r}")
        if self.jobs < 0:
            raise ConfigError(f"jobs must be >= 0, got {self.jobs!r}")
        if not math.isfinite(self.d_a):
            raise ConfigError(f"d_a must be finite, got {self.d_a!r}")
        return self

    def topology_for(self, ell: float | None) -> Topology:
        if self.topology is TopologyKind.MINKOWSKI:
            return Topology.minkowski()
        return Topology(self.topology, ell, self.eta)

    def ell_values(self) -> tuple[float | None, ...]:
        if self.topology is TopologyKind.MINKOWSKI:
            return (None,)
        return self.ell


def parse_range(text: str, name: str) -> GridAxis:
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError(f"{name}: expected 'start:stop:count', got {text!r}")
    try:
        return GridAxis(float(parts[0]), float(parts[1]), int(parts[2]))
    except ValueError as exc:
        raise ConfigError(f"{name}: {exc}") from exc


def _parse_bool(text: str, name: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("true", "1", "yes", "on"):
        return True
    if lowered in ("false", "0", "no", "off"):
        return False
    raise ConfigError(f"{name}: expected a boolean, got {text!r}")


_TOPOLOGY_NAMES = {t.value: t for t in TopologyKind}


def config_from_mapping(mapping: dict[str, str]) -> SweepConfig:
    """Build a validated SweepConfig from flat string key/value pairs."""
    cfg = SweepConfig()
    updates: dict[str, object] = {}
    for key, raw in mapping.items():
        val = raw.strip()
        if key == "topology":
            if val not in _TOPOLOGY_NAMES:
                raise ConfigError(
                    f"topology must be one of {sorted(_TOPOLOGY_NAMES)}, got {val!r}"
                )
            updates["topology"] = _TOPOLOGY_NAMES[val]
        elif key == "ell":
            try:
                updates["ell"] = tuple(float(x) for x in val.split(",") if x.strip())
            except ValueError as exc:
                raise ConfigError(f"ell: {exc}") from exc
        elif key in ("omega", "l", "theta"):
            updates[key] = parse_range(val, key)
        elif key in ("eta", "nmax", "jobs"):
            try:
                updates[key] = int(val)
            except ValueError as exc:
                raise ConfigError(f"{key}: {exc}") from exc
        elif key in ("d_a", "sigma", "eps0"):
            try:
                updates[key] = float(val)
            except ValueError as exc:
                raise ConfigError(f"{key}: {exc}") from exc
        elif key == "oracle":
            updates["oracle"] = _parse_bool(val, key)
        elif key == "format":
            updates["fmt"] = val
        elif key == "out":
            updates["out"] = val
        else:
            raise ConfigError(f"unknown configuration key {key!r}")
    return replace(cfg, **updates).validate()


def parse_config_file(path: str) -> dict[str, str]:
    """Read a flat ``key = value`` file with '#' comments."""
    mapping: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            stripped = line.split("#", 1)[0].strip()
            if not stripped:
                continue
            if "=" not in stripped:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
            key, _, value = stripped.partition("=")
            mapping[key.strip()] = value.strip()
    return mapping


def _pair_for(config: SweepConfig, length: float, theta: float) -> WorldlinePair:
    return WorldlinePair(
        d_a=(config.d_a, 0.0),
        d_b=(config.d_a + length * math.cos(theta), 0.0),
        z_a=0.0,
        z_b=length * math.sin(theta),
    )


def _grid(config: SweepConfig) -> Iterator[tuple[float | None, float, float, float]]:
    for ell in config.ell_values():
        for om in config.omega.values():
            for length in config.l.values():
                for theta in config.theta.values():
                    yield ell, float(om), float(length), float(theta)


_NUMERIC_COLUMNS = (
    "a",
    "b",
    "x_re",
    "x_im",
    "x_abs",
    "c_re",
    "c_im",
    "c_abs",
    "e",
    "tail_bound",
    "concurrence_leading",
    "negativity",
    "concurrence",
    "eof",
    "eof_perturbative",
    "corr",
)


def _meta_columns(
    config: SweepConfig,
    ell: float | None,
    om: float,
    length: float,
    theta: float,
    pair: WorldlinePair,
) -> dict[str, object]:
    return {
        "topology": config.topology.value,
        "eta": config.eta,
        "ell": math.nan if ell is None else ell,
        "sigma": config.sigma,
        "eps0": config.eps0,
        "nmax": config.nmax,
        "omega": om,
        "l": length,
        "theta": theta,
        "d_a": pair.d_a[0],
        "d_b_x": pair.d_b[0],
        "z_b": pair.z_b,
        "delta_z": pair.delta_z,
    }


def _sweep_point(
    config: SweepConfig, ell: float | None, om: float, length: float, theta: float
) -> dict[str, object]:
    pair = _pair_for(config, length, theta)
    row = _meta_columns(config, ell, om, length, theta, pair)
    try:
        params = DetectorParams(
            omega=om / config.sigma, sigma=config.sigma, eps0=config.eps0
        )
        topology = config.topology_for(ell)
        state = elements_for(params, pair, topology, config.nmax)
        report = xstate_measures(state, config.eps0)
        e2 = config.eps0**2
        row.update(
            a=state.a,
            b=state.b,
            x_re=state.x.real,
            x_im=state.x.imag,
            x_abs=abs(state.x),
            c_re=state.c.real,
            c_im=state.c.imag,
            c_abs=abs(state.c),
            e=state.e,
            tail_bound=state.tail_bound,
            concurrence_leading=report.concurrence_leading / e2,
            negativity=report.negativity,
            concurrence=report.concurrence,
            eof=report.eof,
            eof_perturbative=report.eof_perturbative,
            corr=report.corr / e2,
            harvested=report.harvested,
        )
        if config.oracle:
            lsep = separation(pair)
            mink = elements_minkowski(params, lsep)
            row["oracle_dev_a"] = abs(mink.a - wightman.oracle_a(params))
            row["oracle_dev_x"] = abs(mink.x - wightman.oracle_x(params, lsep))
            row["oracle_dev_c"] = abs(mink.c - wightman.oracle_c(params, lsep))
        row["error"] = ""
    except (UdwError, np.linalg.LinAlgError) as exc:
        for col in _NUMERIC_COLUMNS:
            row[col] = math.nan
        if config.oracle:
            row["oracle_dev_a"] = math.nan
            row["oracle_dev_x"] = math.nan
            row["oracle_dev_c"] = math.nan
        row["harvested"] = False
        row["error"] = f"{type(exc).__name__}: {exc}"
    return row


def _sweep_task(args: tuple) -> dict[str, object]:
    return _sweep_point(*args)


def _diff_point(
    config: SweepConfig, ell: float | None, om: float, length: float, theta: float
) -> dict[str, object]:
    pair = _pair_for(config, length, theta)
    row = _meta_columns(config, ell, om, length, theta, pair)
    try:
        params = DetectorParams(
            omega=om / config.sigma, sigma=config.sigma, eps0=config.eps0
        )
        e2 = config.eps0**2
        topology = config.topology_for(ell)
        state_top = elements_for(params, pair, topology, config.nmax)
        state_mink = elements_minkowski(params, separation(pair))
        corr_top = xstate_measures(state_top, config.eps0).corr / e2
        corr_mink = xstate_measures(state_mink, config.eps0).corr / e2
        row.update(
            corr_minkowski=corr_mink,
            corr_topology=corr_top,
            corr_diff=corr_mink - corr_top,
            error="",
        )
    except (UdwError, np.linalg.LinAlgError) as exc:
        row.update(
            corr_minkowski=math.nan,
            corr_topology=math.nan,
            corr_diff=math.nan,
            error=f"{type(exc).__name__}: {exc}",
        )
    return row


def _diff_task(args: tuple) -> dict[str, object]:
    return _diff_point(*args)


def _run_parallel(config: SweepConfig, task, points: list[tuple]) -> list[dict]:
    jobs = config.jobs if config.jobs > 0 else (os.cpu_count() or 1)
    jobs = min(jobs, len(points)) or 1
    if jobs == 1:
        return [task(pt) for pt in points]
    with multiprocessing.Pool(processes=jobs) as pool:
        return pool.map(task, points, chunksize=max(1, len(points) // (jobs * 8)))


def run_sweep(config: SweepConfig) -> list[dict[str, object]]:
    """Evaluate all matrix elements and measures on the configured grid."""
    config = config.validate()
    points = [(config, *pt) for pt in _grid(config)]
    if not points:
        raise ConfigError("empty sweep grid")
    return _run_parallel(config, _sweep_task, points)


def run_difference_map(config: SweepConfig) -> list[dict[str, object]]:
    """Correlation difference corr_M - corr_topology on the configured grid."""
    config = config.validate()
    if config.topology is TopologyKind.MINKOWSKI:
        raise ConfigError("difference maps need a non-Minkowski topology")
    points = [(config, *pt) for pt in _grid(config)]
    if not points:
        raise ConfigError("empty sweep grid")
    return _run_parallel(config, _diff_task, points)


class VerificationReport(NamedTuple):
    rows: list[dict[str, object]]
    passed: bool
    max_deviation: float
    tolerance: float


def _verify_point(
    config: SweepConfig, ell: float | None, om: float, length: float, theta: float
) -> dict[str, object]:
    pair = _pair_for(config, length, theta)
    row = _meta_columns(config, ell, om, length, theta, pair)
    try:
        params = DetectorParams(
            omega=om / config.sigma, sigma=config.sigma, eps0=config.eps0
        )
        lsep = separation(pair)
        mink = elements_minkowski(params, lsep)
        devs = {
            "dev_a": abs(mink.a - wightman.oracle_a(params)),
            "dev_x": abs(mink.x - wightman.oracle_x(params, lsep)),
            "dev_c": abs(mink.c - wightman.oracle_c(params, lsep)),
        }
        if config.topology is not TopologyKind.MINKOWSKI:
            topology = config.topology_for(ell)
            worst = 0.0
            for n in _VERIFY_IMAGES:
                l_n = image_separation(topology, pair, n)
                worst = max(
                    worst,
                    abs(
                        nonlocal_coefficient(params, l_n)
                        - wightman.oracle_x(params, l_n)
                    ),
                    abs(
                        exchange_coefficient(params, l_n)
                        - wightman.oracle_c(params, l_n)
                    ),
                )
            devs["dev_image"] = worst
        else:
            devs["dev_image"] = 0.0
        row.update(devs)
        row["max_dev"] = max(devs.values())
        row["passed"] = row["max_dev"] < VERIFY_TOLERANCE
        row["error"] = ""
    except (UdwError, np.linalg.LinAlgError) as exc:
        row.update(
            dev_a=math.nan,
            dev_x=math.nan,
            dev_c=math.nan,
            dev_image=math.nan,
            max_dev=math.nan,
            passed=False,
            error=f"{type(exc).__name__}: {exc}",
        )
    return row


def _verify_task(args: tuple) -> dict[str, object]:
    return _verify_point(*args)


def run_verification(config: SweepConfig) -> VerificationReport:
    """Compare every closed form against the distributional quadrature oracle."""
    config = config.validate()
    points = [(config, *pt) for pt in _grid(config)]
    if not points:
        raise ConfigError("empty verification grid")
    rows = _run_parallel(config, _verify_task, points)
    finite = [r["max_dev"] for r in rows if not math.isnan(r["max_dev"])]
    max_dev = max(finite) if finite else math.nan
    passed = bool(rows) and all(r["passed"] for r in rows)
    return VerificationReport(rows, passed, max_dev, VERIFY_TOLERANCE)


def _format_value(value: object) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def rows_to_csv(rows: Iterable[dict[str, object]]) -> str:
    rows = list(rows)
    if not rows:
        return ""
    header = list(rows[0].keys())
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_format_value(row[k]) for k in header))
    return "\n".join(lines) + "\n"


def rows_to_jsonl(rows: Iterable[dict[str, object]]) -> str:
    import json

    out = []
    for row in rows:
        clean = {
            k: (None if isinstance(v, float) and math.isnan(v) else v)
            for k, v in row.items()
        }
        out.append(json.dumps(clean, allow_nan=False))
    return "\n".join(out) + ("\n" if out else "")


def write_rows(rows: list[dict[str, object]], fmt: str, stream) -> None:
    if fmt == "csv":
        stream.write(rows_to_csv(rows))
    elif fmt == "jsonl":
        stream.write(rows_to_jsonl(rows))
    else:
        raise ConfigError(f"unknown output format {fmt!r}")
