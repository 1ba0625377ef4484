"""Config-driven temperature sweeps, figure presets and CSV emission.

Output files carry a ``#``-prefixed provenance block (version, prefactor
convention, config echo) above the CSV header.  Rows are computed as a pure
map over the temperature grid and collected in input order, so the bytes do
not depend on the worker count.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .core import ModeQuench, QuenchSpec, beta_star, mode_thermo, normal_modes, purity_single
from .errors import DomainError, NumericalFailureError
from .kernels import thermal_rho_coupled
from .negativity import (boundary_g, check_separable, critical_temperature,
                         critical_temperature_sqm, negativity, pt_moments,
                         sigma_for_quench)
from .spectra import mutual_information, renyi_entropy, von_neumann_entropy

A_CONVENTION_NOTE = ("prefactor exponent A = (wf^2 - wi^2) sinh(2 wf beta) / (4 wf b^2)"
                     " (trace-preserving normalisation)")

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_DOMAIN = 2
EXIT_NUMERICAL = 3

_KNOWN_OBSERVABLES = ("purity", "von_neumann", "mutual_info", "negativity", "tc")
_CONFIG_KEYS = {"quench", "T_min", "T_max", "T_points", "scale", "observables", "threads"}
_QUENCH_KEYS = {"k0_i", "k0_f", "j_i", "j_f"}

FIGURE_NAMES = ("fig1a", "fig1b", "fig2a", "fig2b", "fig2c",
                "fig3a", "fig3b", "fig4a", "fig4b", "fig5a", "fig5b")


@dataclass(frozen=True)
class SweepConfig:
    quench: QuenchSpec
    t_min: float
    t_max: float
    t_points: int
    scale: str = "linear"
    observables: tuple[str, ...] = ("purity",)
    threads: int = 0

    def __post_init__(self):
        if not (0 < self.t_min < self.t_max):
            raise DomainError(f"need 0 < T_min < T_max, got ({self.t_min}, {self.t_max})")
        if self.t_points < 2:
            raise DomainError(f"T_points must be >= 2, got {self.t_points}")
        if self.scale not in ("linear", "log"):
            raise DomainError(f"scale must be 'linear' or 'log', got {self.scale!r}")
        if not self.observables:
            raise DomainError("observables must not be empty")
        for obs in self.observables:
            if obs in _KNOWN_OBSERVABLES:
                continue
            if obs.startswith("renyi:"):
                try:
                    alpha = float(obs.split(":", 1)[1])
                except ValueError:
                    raise DomainError(f"bad renyi observable {obs!r}")
                if alpha <= 0:
                    raise DomainError(f"renyi order must be positive in {obs!r}")
                continue
            raise DomainError(f"unknown observable {obs!r}")
        if self.threads < 0:
            raise DomainError(f"threads must be >= 0, got {self.threads}")

    def temperatures(self) -> np.ndarray:
        if self.scale == "log":
            return np.geomspace(self.t_min, self.t_max, self.t_points)
        return np.linspace(self.t_min, self.t_max, self.t_points)

    @classmethod
    def from_dict(cls, data: dict) -> "SweepConfig":
        if not isinstance(data, dict):
            raise DomainError("config must be a JSON object")
        unknown = set(data) - _CONFIG_KEYS
        if unknown:
            raise DomainError(f"unknown config keys: {sorted(unknown)}")
        missing = {"quench", "T_min", "T_max", "T_points", "observables"} - set(data)
        if missing:
            raise DomainError(f"missing config keys: {sorted(missing)}")
        qd = data["quench"]
        if not isinstance(qd, dict) or set(qd) != _QUENCH_KEYS:
            raise DomainError(f"quench must be an object with keys {sorted(_QUENCH_KEYS)}")
        quench = QuenchSpec(float(qd["k0_i"]), float(qd["k0_f"]), float(qd["j_i"]), float(qd["j_f"]))
        return cls(quench=quench, t_min=float(data["T_min"]), t_max=float(data["T_max"]),
                   t_points=int(data["T_points"]), scale=data.get("scale", "linear"),
                   observables=tuple(data["observables"]), threads=int(data.get("threads", 0)))

    def to_dict(self) -> dict:
        return {
            "quench": {"k0_i": self.quench.k0_i, "k0_f": self.quench.k0_f,
                       "j_i": self.quench.j_i, "j_f": self.quench.j_f},
            "T_min": self.t_min, "T_max": self.t_max, "T_points": self.t_points,
            "scale": self.scale, "observables": list(self.observables),
        }


@dataclass
class SweepResult:
    config: SweepConfig
    columns: list[str]
    rows: list[dict]
    provenance: list[str] = field(default_factory=list)

    def to_csv_text(self) -> str:
        lines = [f"# {line}" for line in self.provenance]
        lines.append(",".join(self.columns))
        for row in self.rows:
            cells = []
            for col in self.columns:
                v = row[col]
                if v is None:
                    cells.append("")
                elif isinstance(v, str):
                    cells.append(v)
                else:
                    cells.append(_fmt(v))
            lines.append(",".join(cells))
        return "\n".join(lines) + "\n"

    def write(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.to_csv_text())


def _fmt(v: float) -> str:
    if isinstance(v, float) and math.isnan(v):
        return "nan"
    return f"{v:.12g}"


def _observable_columns(observables) -> list[str]:
    cols = []
    for obs in observables:
        cols.append(obs.replace(":", "_") if obs.startswith("renyi:") else obs)
    return cols


def _point_values(spec: QuenchSpec, t: float, observables, tc_value) -> tuple[dict, list[str]]:
    """All requested observables at one temperature; failures become flags."""
    values: dict = {}
    flags: list[str] = []
    beta = 1.0 / t
    m1, m2 = normal_modes(spec)
    try:
        mt1, mt2 = mode_thermo(m1, beta), mode_thermo(m2, beta)
    except DomainError as exc:
        for obs in observables:
            values[_observable_columns([obs])[0]] = None
        flags.append(f"domain:{exc}")
        return values, flags
    xi1, xi2 = mt1.xi, mt2.xi
    rho = None
    for obs in observables:
        col = _observable_columns([obs])[0]
        try:
            if obs == "purity":
                values[col] = purity_single(mt1) * purity_single(mt2)
            elif obs == "von_neumann":
                values[col] = von_neumann_entropy(xi1) + von_neumann_entropy(xi2)
            elif obs.startswith("renyi:"):
                alpha = float(obs.split(":", 1)[1])
                values[col] = renyi_entropy(xi1, alpha) + renyi_entropy(xi2, alpha)
            elif obs == "mutual_info":
                rho = rho if rho is not None else thermal_rho_coupled(mt1, mt2)
                values[col] = mutual_information(rho).mutual
            elif obs == "negativity":
                mom = pt_moments(sigma_for_quench(spec, beta))
                values[col] = negativity(mom.zeta1, mom.zeta2)
            elif obs == "tc":
                values[col] = tc_value
        except (DomainError, NumericalFailureError) as exc:
            values[col] = None
            flags.append(f"{col}:{type(exc).__name__}")
    return values, flags


def run_sweep(cfg: SweepConfig, threads: int | None = None) -> SweepResult:
    """Evaluate all observables on the temperature grid (deterministic order)."""
    temps = cfg.temperatures()
    tc_value = None
    if "tc" in cfg.observables:
        m1, m2 = normal_modes(cfg.quench)
        if cfg.quench.is_constant:
            tc_value = critical_temperature(m1.omega_i, m2.omega_i).tc_exact
        else:
            tc_value = critical_temperature_sqm(cfg.quench)
    workers = threads if threads is not None else cfg.threads
    workers = workers if workers > 0 else None

    def one(t: float) -> dict:
        values, flags = _point_values(cfg.quench, t, cfg.observables, tc_value)
        row = {"T": t, "beta": 1.0 / t}
        row.update(values)
        row["warnings"] = ";".join(flags)
        return row

    with ThreadPoolExecutor(max_workers=workers) as pool:
        rows = list(pool.map(one, temps))
    columns = ["T", "beta", *_observable_columns(cfg.observables), "warnings"]
    provenance = [f"oscquench {__version__}",
                  f"a_convention: {A_CONVENTION_NOTE}",
                  f"config: {json.dumps(cfg.to_dict(), sort_keys=True)}"]
    return SweepResult(config=cfg, columns=columns, rows=rows, provenance=provenance)


def validate_config(path) -> tuple[bool, list[str]]:
    """Structural and physical validation; returns (ok, report lines)."""
    report: list[str] = []
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        return False, [f"error: cannot read {path}: {exc}"]
    except json.JSONDecodeError as exc:
        return False, [f"error: {path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}"]
    try:
        cfg = SweepConfig.from_dict(data)
    except (DomainError, ValueError, TypeError) as exc:
        return False, [f"error: {exc}"]
    m1, m2 = normal_modes(cfg.quench)
    report.append(f"ok: normal modes omega1 {m1.omega_i:.6g} -> {m1.omega_f:.6g}, "
                  f"omega2 {m2.omega_i:.6g} -> {m2.omega_f:.6g}")
    beta_max = 1.0 / cfg.t_min
    for label, mode in (("mode1", m1), ("mode2", m2)):
        bs = beta_star(mode)
        if beta_max >= bs * (1 - 1e-6):
            report.append(f"warning: {label} is a downward quench with beta* = {bs:.6g}; "
                          f"temperatures below T = {1 / bs:.6g} are out of domain and will be flagged")
    report.append(f"ok: {cfg.t_points} temperatures in [{cfg.t_min}, {cfg.t_max}] ({cfg.scale})")
    return True, report


# ---------------------------------------------------------------------------
# figure presets

_T_GRID_NOTE = "T grid [0.05, 20], 400 points, log-spaced (axis ranges are not fixed by the source figures)"


def _preset_grid(points: int = 400) -> np.ndarray:
    return np.geomspace(0.05, 20.0, points)


def _curve_csv(path, header_cols, rows, comments) -> None:
    lines = [f"# {c}" for c in comments]
    lines.append(",".join(header_cols))
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _single_mode_curve(omega_i, omega_f, kind, temps):
    rows = []
    for t in temps:
        mt = mode_thermo(ModeQuench(omega_i, omega_f), 1.0 / t)
        val = purity_single(mt) if kind == "purity" else von_neumann_entropy(mt.xi)
        rows.append((t, val))
    return rows


def _coupled_curve(spec: QuenchSpec, kind, temps):
    rows = []
    for t in temps:
        beta = 1.0 / t
        m1, m2 = normal_modes(spec)
        mt1, mt2 = mode_thermo(m1, beta), mode_thermo(m2, beta)
        if kind == "purity":
            val = purity_single(mt1) * purity_single(mt2)
        elif kind == "von_neumann":
            val = von_neumann_entropy(mt1.xi) + von_neumann_entropy(mt2.xi)
        elif kind == "mutual_info":
            val = mutual_information(thermal_rho_coupled(mt1, mt2)).mutual
        else:
            mom = pt_moments(sigma_for_quench(spec, beta))
            val = negativity(mom.zeta1, mom.zeta2)
        rows.append((t, val))
    return rows


def _negativity_at_zero_t(spec: QuenchSpec, beta_start: float) -> float:
    """N in the beta -> infinity limit, doubled until |dN/N| < 1e-4."""
    beta = max(beta_start, 1.0)
    mom = pt_moments(sigma_for_quench(spec, beta))
    prev = negativity(mom.zeta1, mom.zeta2)
    for _ in range(60):
        beta *= 2.0
        mom = pt_moments(sigma_for_quench(spec, beta))
        cur = negativity(mom.zeta1, mom.zeta2)
        if prev > 0 and abs(cur - prev) / prev < 1e-4:
            return cur
        prev = cur
    raise NumericalFailureError("negativity zero-temperature limit did not converge")


def figure_preset(name: str, out_dir, points: int = 400) -> list[str]:
    """Emit one CSV per curve of a source-figure parameter set."""
    import os

    if name not in FIGURE_NAMES:
        raise DomainError(f"unknown figure preset {name!r}; choose from {FIGURE_NAMES}")
    os.makedirs(out_dir, exist_ok=True)
    temps = _preset_grid(points)
    base = [f"oscquench {__version__}", f"a_convention: {A_CONVENTION_NOTE}", _T_GRID_NOTE]
    paths = []

    def emit(fname, cols, rows, extra):
        path = os.path.join(out_dir, fname)
        _curve_csv(path, cols, rows, base + extra)
        paths.append(path)

    if name in ("fig1a", "fig1b"):
        kind = "purity" if name == "fig1a" else "von_neumann"
        for omega in (3.0, 5.0, 7.0):
            rows = _single_mode_curve(3.0, omega, kind, temps)
            emit(f"{name}_omega{omega:g}.csv", ["T", kind],
                 rows, [f"single mode, omega_i=3, omega_f={omega:g}"])
    elif name in ("fig2a", "fig2b", "fig2c"):
        kind = {"fig2a": "purity", "fig2b": "von_neumann", "fig2c": "mutual_info"}[name]
        for label, spec in (("quench6", QuenchSpec(3, 6, 3, 6)),
                            ("quench9", QuenchSpec(3, 9, 3, 9)),
                            ("const3", QuenchSpec(3, 3, 3, 3))):
            rows = _coupled_curve(spec, kind, temps)
            emit(f"{name}_{label}.csv", ["T", kind], rows,
                 [f"coupled pair, k0 {spec.k0_i:g}->{spec.k0_f:g}, J {spec.j_i:g}->{spec.j_f:g}"])
    elif name in ("fig3a", "fig3b"):
        js = (1.0, 5.0, 10.0) if name == "fig3a" else (-0.45, -0.35, -0.2)
        for j in js:
            spec = QuenchSpec(1.0, 1.0, j, j)
            rows = _coupled_curve(spec, "negativity", temps)
            emit(f"{name}_J{j:g}.csv", ["T", "negativity"], rows, [f"constant k0=1, J={j:g}"])
    elif name == "fig4a":
        xs = np.linspace(0.05, 5.0, points)
        upper = [(x, x * boundary_g(x)) for x in xs]
        emit("fig4a_upper_boundary.csv", ["x", "y"], upper, ["upper separability boundary y(x)"])
        lower = [(y, x) for x, y in upper]
        emit("fig4a_lower_boundary.csv", ["x", "y"], lower, ["lower boundary (mirror of upper)"])
        dashed = [(x, x / math.tanh(x)) for x in xs]
        emit("fig4a_dashed.csv", ["x", "y"], dashed, ["approximation y = x coth x"])
        gs = np.linspace(0.05, 3.0, 61)
        mask = [(x, y, 1.0 if check_separable(2 * x, 2 * y, 1.0) else 0.0)
                for x in gs for y in gs]
        emit("fig4a_mask.csv", ["x", "y", "separable"], mask,
             ["separability mask on a 61x61 grid (x = omega1 beta/2, y = omega2 beta/2)"])
    elif name == "fig4b":
        js = np.linspace(0.5, 10.0, 200)
        rows = []
        for j in js:
            tc = critical_temperature(1.0, math.sqrt(1 + 2 * j))
            rows.append((j, tc.tc_exact, tc.tc_approx))
        emit("fig4b_tc.csv", ["J", "tc_exact", "tc_approx"], rows, ["k0 = 1"])
    else:  # fig5a, fig5b
        if name == "fig5a":
            settings = [(f"k0f{k:g}", QuenchSpec(1.0, k, 5.0, 5.0)) for k in (1.0, 20.0, 40.0)]
        else:
            settings = [(f"Jf{j:g}", QuenchSpec(1.0, 1.0, 5.0, j)) for j in (5.0, 25.0, 45.0)]
        for label, spec in settings:
            n_inf = _negativity_at_zero_t(spec, 1.0 / temps[0])
            rows = []
            for t in temps:
                mom = pt_moments(sigma_for_quench(spec, 1.0 / t))
                rows.append((t, negativity(mom.zeta1, mom.zeta2) / n_inf))
            emit(f"{name}_{label}.csv", ["T", "negativity_ratio"], rows,
                 [f"k0 {spec.k0_i:g}->{spec.k0_f:g}, J {spec.j_i:g}->{spec.j_f:g}; "
                  f"normalised by the zero-temperature limit N = {_fmt(n_inf)}"])
    return paths


# ---------------------------------------------------------------------------
# entry point

def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="oscquench",
                                 description="Thermal quantities of suddenly quenched coupled oscillators")
    ap.add_argument("--threads", type=int, default=0, help="worker threads (0 = auto)")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("sweep", help="run a temperature sweep from a JSON config")
    sp.add_argument("--config", required=True)
    sp.add_argument("--out", required=True)

    fp = sub.add_parser("figure", help="emit CSV curves for a source-figure preset")
    fp.add_argument("name", choices=FIGURE_NAMES)
    fp.add_argument("--out-dir", required=True)

    tp = sub.add_parser("tc", help="critical-temperature table over a coupling range")
    tp.add_argument("--k0", type=float, required=True)
    tp.add_argument("--j-min", type=float, required=True)
    tp.add_argument("--j-max", type=float, required=True)
    tp.add_argument("--points", type=int, default=100)
    tp.add_argument("--out", required=True)

    vp = sub.add_parser("validate", help="validate a sweep config file")
    vp.add_argument("--config", required=True)
    return ap


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "validate":
            ok, report = validate_config(args.config)
            for line in report:
                print(line)
            return EXIT_OK if ok else EXIT_CONFIG

        if args.command == "sweep":
            try:
                with open(args.config, encoding="utf-8") as fh:
                    data = json.load(fh)
                cfg = SweepConfig.from_dict(data)
            except (OSError, json.JSONDecodeError, DomainError, ValueError) as exc:
                print(f"config error: {exc}", file=sys.stderr)
                return EXIT_CONFIG
            threads = args.threads if args.threads > 0 else None
            result = run_sweep(cfg, threads=threads)
            result.write(args.out)
            n_flagged = sum(1 for r in result.rows if r["warnings"])
            if n_flagged == len(result.rows):
                print("domain error: every grid point failed", file=sys.stderr)
                return EXIT_DOMAIN
            print(f"wrote {args.out} ({len(result.rows)} rows, {n_flagged} flagged)")
            return EXIT_OK

        if args.command == "figure":
            paths = figure_preset(args.name, args.out_dir)
            for p in paths:
                print(p)
            return EXIT_OK

        # tc table
        if args.k0 <= 0:
            print(f"config error: k0 must be positive, got {args.k0}", file=sys.stderr)
            return EXIT_CONFIG
        if args.points < 1 or args.j_min > args.j_max:
            print("config error: need points >= 1 and j_min <= j_max", file=sys.stderr)
            return EXIT_CONFIG
        rows = []
        for j in np.linspace(args.j_min, args.j_max, args.points):
            if args.k0 + 2 * j <= 0:
                continue
            tc = critical_temperature(math.sqrt(args.k0), math.sqrt(args.k0 + 2 * j))
            rows.append((j, tc.tc_exact, tc.tc_approx))
        if not rows:
            print("domain error: no coupling in range keeps both modes real", file=sys.stderr)
            return EXIT_DOMAIN
        _curve_csv(args.out, ["J", "tc_exact", "tc_approx"], rows,
                   [f"oscquench {__version__}", f"a_convention: {A_CONVENTION_NOTE}",
                    f"k0 = {args.k0:g}"])
        print(f"wrote {args.out} ({len(rows)} rows)")
        return EXIT_OK
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except NumericalFailureError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
