"""Command-line front end: ``twoholes <command> [experiment] [options]``.

Every run writes into ``<out>/<command>[_<experiment>]/`` and leaves a
``config.txt`` there holding the fully resolved parameters; passing that
file back through ``--config`` replays the run.
"""

from __future__ import annotations

import argparse
import logging
import math
import os
import sys
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from . import bench as B
from . import cell as C
from . import geometry as G
from . import svg
from .fem import EigenSolveSettings, Protocol, eigenfunction_table, lambda1
from .mesh import refine_times, stats, to_text, triangulate

log = logging.getLogger("twoholes")

OUT_ENV = "TWOHOLES_OUT"
DEFAULT_OUT = "twoholes_out"
BENCH = ("table1", "table2", "table3", "gap", "scaling", "additivity")
CELL = ("energy", "identities", "threshold", "jinf", "jhp", "competitor", "gamma-k")
COMMANDS = ("mesh", "solve", "bench", "cell", "report")


@dataclass
class RunConfig:
    command: str = ""
    experiment: str = ""
    branch: str = "adjacent"
    r: float = 0.08
    radii: str = ""
    levels: int = 3
    n_side: int = 8
    m_circle: int = 32
    inset: float = 5e-4
    inset_mode: str = "shift"
    engine: str = "native"
    tol: float = 1e-10
    R: float = C.DEFAULT_R
    density: int = C.DEFAULT_DENSITY
    theta_grid: str = "32"
    theta: float = math.pi / 4
    xi: float = 0.0
    a: str = ""
    b: str = ""
    datum: str = "st"
    jobs: int = 0
    timing: bool = False
    common_topology: bool = False
    out: str = ""

    def protocol(self) -> Protocol:
        return Protocol(self.n_side, self.m_circle, self.inset, self.inset_mode, self.engine)

    def settings(self) -> EigenSolveSettings:
        return EigenSolveSettings(tolerance=self.tol)

    def radii_list(self, default) -> list[float]:
        return _floats(self.radii) if self.radii else list(default)

    def thetas(self) -> list[float]:
        s = self.theta_grid.strip()
        if "," in s:
            return _floats(s)
        n = int(s)
        if n < 2:
            raise ValueError("theta grid needs at least 2 points")
        return B.default_theta_grid(n)

    def n_jobs(self) -> int:
        return self.jobs or B.default_jobs()

    def echo(self) -> str:
        lines = []
        for f in fields(self):
            if f.name == "out":
                continue
            lines.append(f"{f.name}={getattr(self, f.name)!r}" if isinstance(getattr(self, f.name), str) else f"{f.name}={getattr(self, f.name)}")
        return "\n".join(lines) + "\n"


def _floats(s: str) -> list[float]:
    return [float(x) for x in s.replace(" ", "").split(",") if x]


def _coerce(name: str, raw: str):
    ftype = {f.name: f.type for f in fields(RunConfig)}[name]
    raw = raw.strip()
    if raw[:1] in "'\"" and raw[-1:] == raw[:1]:
        raw = raw[1:-1]
    if ftype in ("bool", bool):
        if raw.lower() in ("1", "true", "yes", "on"):
            return True
        if raw.lower() in ("0", "false", "no", "off"):
            return False
        raise ValueError(f"{name}: expected a boolean, got {raw!r}")
    if ftype in ("int", int):
        return int(raw)
    if ftype in ("float", float):
        return float(raw)
    return raw


def read_config(path: str | os.PathLike) -> dict:
    """Parse a key=value file; blank lines and # comments are skipped."""
    known = {f.name for f in fields(RunConfig)}
    out = {}
    for n, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{n}: expected key=value")
        k, v = (x.strip() for x in line.split("=", 1))
        k = k.replace("-", "_")
        if k not in known:
            raise ValueError(f"{path}:{n}: unknown key {k!r}")
        out[k] = _coerce(k, v)
    return out


# ===================================================================== parser
def _add_options(p: argparse.ArgumentParser) -> None:
    d = RunConfig()
    S = argparse.SUPPRESS
    g = p.add_argument_group("options (config-file values are overridden by flags)")
    g.add_argument("--config", default=S, help="key=value file with defaults for any option")
    g.add_argument("--branch", default=S, help=f"adjacent|opposite|opp_side|cluster|side|endpoint|contact|empty (default {d.branch})")
    g.add_argument("--r", type=float, default=S, help=f"hole radius (default {d.r})")
    g.add_argument("--radii", default=S, help="comma-separated radii (default depends on the experiment)")
    g.add_argument("--levels", type=int, default=S, help=f"red refinement levels (default {d.levels})")
    g.add_argument("--n-side", type=int, default=S, help=f"segments per square side (default {d.n_side})")
    g.add_argument("--m-circle", type=int, default=S, help=f"vertices per hole polygon (default {d.m_circle})")
    g.add_argument("--inset", type=float, default=S, help=f"geometric inset (default {d.inset})")
    g.add_argument("--inset-mode", choices=G.INSET_MODES, default=S, help=f"default {d.inset_mode}")
    g.add_argument("--engine", choices=("native", "geos"), default=S, help=f"triangulator (default {d.engine})")
    g.add_argument("--tol", type=float, default=S, help=f"eigen-solver residual tolerance (default {d.tol})")
    g.add_argument("--R", type=float, default=S, help=f"cell truncation radius (default {d.R})")
    g.add_argument("--density", type=int, default=S, help=f"cell mesh density (default {d.density})")
    g.add_argument("--theta-grid", default=S, help=f"contact-scan grid: a count or a comma list (default {d.theta_grid})")
    g.add_argument("--theta", type=float, default=S, help="contact angle for --branch contact (default pi/4)")
    g.add_argument("--xi", type=float, default=S, help=f"side position for --branch side (default {d.xi})")
    g.add_argument("--a", default=S, help="cell parameter a (comma list allowed)")
    g.add_argument("--b", default=S, help="cell parameter b (comma list allowed)")
    g.add_argument("--datum", choices=("st", "t", "s"), default=S, help=f"cell datum (default {d.datum})")
    g.add_argument("--out", default=S, help=f"output root (default ${OUT_ENV} or ./{DEFAULT_OUT})")
    g.add_argument("--jobs", type=int, default=S, help="worker processes (default: available CPUs)")
    g.add_argument("--timing", action="store_const", const=True, default=S, help="record wall times (CSV no longer byte-stable)")
    g.add_argument("--common-topology", action="store_const", const=True, default=S, help="gap scan on mirrored half meshes")
    g.add_argument("-v", "--verbose", action="store_true", default=S, help="log progress")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="twoholes",
        allow_abbrev=False,
        description="Eigenvalue benchmarks and cell problems for the square with two circular holes.",
        epilog="commands: mesh, solve, bench {" + ",".join(BENCH) + "}, cell {" + ",".join(CELL) + "}, report",
    )
    _add_options(p)
    sub = p.add_subparsers(dest="command")
    for name, helptext in (
        ("mesh", "write the mesh of one configuration (text + SVG)"),
        ("solve", "lambda_1 per refinement level, eigenfunction table and heatmap"),
        ("report", "run every check and write an aggregate pass/fail summary"),
    ):
        _add_options(sub.add_parser(name, help=helptext, allow_abbrev=False))
    pb = sub.add_parser("bench", help="benchmark experiments: " + ", ".join(BENCH), allow_abbrev=False)
    pb.add_argument("experiment", choices=BENCH)
    _add_options(pb)
    pc = sub.add_parser("cell", help="cell problems and constants: " + ", ".join(CELL), allow_abbrev=False)
    pc.add_argument("experiment", choices=CELL)
    _add_options(pc)
    return p


def resolve(argv=None) -> RunConfig:
    ns = vars(build_parser().parse_args(argv))
    ns.pop("verbose", None)
    cfg = read_config(ns.pop("config")) if "config" in ns else {}
    for k, v in ns.items():
        if v is not None:
            cfg[k] = v
    if not cfg.get("command"):
        raise SystemExit("twoholes: a command is required (or a config file naming one)")
    if cfg["command"] in ("bench", "cell") and not cfg.get("experiment"):
        raise SystemExit(f"twoholes: {cfg['command']} needs an experiment")
    if cfg["command"] not in ("bench", "cell"):
        cfg["experiment"] = ""
    return RunConfig(**cfg)


def out_dir(cfg: RunConfig) -> Path:
    root = Path(cfg.out or os.environ.get(OUT_ENV) or DEFAULT_OUT)
    name = cfg.command + (f"_{cfg.experiment}" if cfg.experiment else "")
    d = root / name
    d.mkdir(parents=True, exist_ok=True)
    return d


def _write(d: Path, name: str, text: str) -> Path:
    path = d / name
    path.write_text(text)
    return path


# ================================================================= commands
def config_from(cfg: RunConfig) -> G.Configuration:
    b, r = cfg.branch, cfg.r
    if b == "empty":
        return G.empty_config()
    if b in G.BRANCHES:
        return G.make_branch_config(b, r)
    if b == "side":
        return G.make_side_config(cfg.xi, r)
    if b == "endpoint":
        return G.make_endpoint_config(float(cfg.a or 1.0), r)
    if b == "contact":
        return G.make_contact_config(cfg.theta, r)
    raise ValueError(f"unknown branch {b!r}")


def cmd_mesh(cfg: RunConfig, d: Path) -> list[str]:
    conf = config_from(cfg)
    p = cfg.protocol()
    rep = G.validate(conf)
    mesh = refine_times(triangulate(G.polygonize(conf, p.n_side, p.m_circle, p.inset, p.inset_mode), engine=p.engine), cfg.levels)
    _write(d, "mesh.txt", to_text(mesh))
    _write(d, "mesh.svg", svg.mesh_svg(mesh))
    _write(d, "geometry.txt", G.to_keyvalue(conf))
    st = stats(mesh)
    return rep.lines() + [f"level {cfg.levels}: {st.n_vertices} vertices, {st.n_triangles} triangles, min angle {st.min_angle:.2f} deg"]


def cmd_solve(cfg: RunConfig, d: Path) -> list[str]:
    conf = config_from(cfg)
    res = lambda1(conf, cfg.levels, cfg.settings(), cfg.protocol(), keep=True)
    recs = [B.BenchRecord(conf.label, conf.r, q.level, q.stats.n_vertices, q.stats.n_triangles, q.lambda1) for q in res]
    _write(d, "solve.csv", B.to_csv(recs))
    last = res[-1]
    _write(d, "eigenfunction.txt", eigenfunction_table(last.mesh, last.eigvec))
    _write(d, "eigenfunction.svg", svg.heatmap_svg(last.mesh, last.eigvec))
    lines = ["level  nodes  triangles  lambda1  residual  min/max"]
    lines += [f"{q.level:5d} {q.stats.n_vertices:6d} {q.stats.n_triangles:10d}  {q.lambda1:.8f}  {q.residual:.1e}  {q.min_ratio:.1e}" for q in res]
    return lines


def _bench_plots(rep: B.Report, d: Path) -> None:
    radii = sorted(k for k in rep.extra if isinstance(k, float))
    if not radii:
        return
    series = {b: (radii, [rep.extra[r][b] for r in radii]) for b in B.ORDER}
    _write(d, "branches.svg", svg.line_plot(series, "lambda_1 by branch", "r", "lambda_1"))


def cmd_bench(cfg: RunConfig, d: Path) -> list[str]:
    p, s, j, e = cfg.protocol(), cfg.settings(), cfg.n_jobs(), cfg.experiment
    if e == "table1":
        rep = B.empty_square_convergence(cfg.levels, p, s, cfg.timing)
        _write(d, "table1.csv", B.to_csv(rep.records))
    elif e == "table2":
        rep = B.branch_table(cfg.radii_list((0.07, 0.08, 0.09)), cfg.levels, p, s, j, cfg.timing)
        _write(d, "table2.csv", B.to_csv(rep.records))
        _bench_plots(rep, d)
    elif e == "table3":
        rep = B.contact_scan(cfg.thetas(), cfg.r, cfg.levels, p, s, j, cfg.timing)
        _write(d, "table3.csv", B.to_csv(rep.records))
        ts, ls = zip(*rep.extra["scan"])
        _write(d, "contact.svg", svg.line_plot({"contact family": (list(ts), list(ls))}, f"contact scan r={cfg.r:g}", "theta", "lambda_1"))
    elif e == "gap":
        rep = B.gap_scan(cfg.radii_list((0.07, 0.08, 0.09)), cfg.levels, p, s, cfg.common_topology, j)
        rows = rep.extra["rows"]
        csv = ["r,adjacent,opposite,gap"] + [f"{q.r:g},{q.adjacent:.12f},{q.opposite:.12f},{q.gap:.6e}" for q in rows]
        _write(d, "gap.csv", "\n".join(csv) + "\n")
        _write(d, "gap.svg", svg.line_plot({"opposite - adjacent": ([q.r for q in rows], [q.gap for q in rows])}, "isolated gap", "r", "gap"))
    elif e == "scaling":
        radii = cfg.radii_list(B.DEFAULT_SCALING_RADII)
        branch = cfg.branch if cfg.branch not in G.BRANCHES else None
        names = [branch] if branch else ["corner_one_hole", "side_center", "side_at:0.5"]
        fits = [B.scaling_fit(n, radii, jobs=j) for n in names]
        rep = B.Report("scaling fits", [])
        csv = ["branch,r,delta"]
        for f in fits:
            lo, hi = (3.5, 4.5) if f.nominal == 4 else (1.8, 2.2)
            rep.check(f"{f.branch} exponent in [{lo}, {hi}]", lo <= f.exponent <= hi, f"{f.exponent:.4f}")
            csv += [f"{f.branch},{r:g},{dd:.10e}" for r, dd in zip(f.radii, f.deltas)]
        by = {f.branch: f for f in fits}
        if "side_center" in by and "side_at:0.5" in by:
            ok, got, want = B.side_ratio_check(by["side_center"], by["side_at:0.5"], 0.5)
            rep.check("side coefficient ratio cos^2-consistent within 15%", ok, f"{got:.4f} vs {want:.4f}")
            pred = B.side_coefficient_prediction()
            rep.check(
                "side coefficient vs (pi^2/4)(J_inf + pi) within 5%",
                abs(by["side_center"].limit_coefficient / pred - 1) < 0.05,
                f"{by['side_center'].limit_coefficient:.4f} vs {pred:.4f}",
            )
        _write(d, "scaling.csv", "\n".join(csv) + "\n")
        _write(
            d,
            "scaling.svg",
            svg.line_plot({f.branch: (list(np.log(f.radii)), list(np.log(f.deltas))) for f in fits}, "log shift vs log r", "log r", "log(lambda - ref)"),
        )
        lines = rep.lines()
        for f in fits:
            lines += f.lines()
        return lines
    else:  # additivity
        e1 = C.energy_E(1.0, cfg.R, cfg.density).energy
        rep = B.additivity_check(cfg.radii_list(B.DEFAULT_SCALING_RADII), jobs=j, cell_energy=e1)
        lines = rep.lines() + [f"cell E(1) = {e1:.6f}"]
        for key in ("one", "two", "cluster"):
            lines += rep.extra[key].lines()
        return lines
    return rep.lines()


def _ab_pairs(cfg: RunConfig, default):
    if not cfg.a and not cfg.b:
        return list(default)
    a = _floats(cfg.a) if cfg.a else [1.0]
    b = _floats(cfg.b) if cfg.b else [1.0] * len(a)
    if len(b) == 1 and len(a) > 1:
        b = b * len(a)
    if len(a) != len(b):
        raise ValueError("--a and --b lists must have equal length")
    return list(zip(a, b))


IDENTITY_CASES = ((1.0, 1.0), (1.5, 1.0), (2.0, 1.0), (1.5, 1.5))


def cmd_cell(cfg: RunConfig, d: Path) -> list[str]:
    e = cfg.experiment
    lines: list[str] = []
    if e == "energy":
        rows = [C.CELL_CSV_HEADER]
        for a, b in _ab_pairs(cfg, [(1.0, 1.0)]):
            spec = C.CellSpec(((a, b),), cfg.datum, cfg.R, cfg.density)
            res = C.solve_cell(spec)
            rows.append(C.cell_csv_row(spec, res))
            lines.append(
                f"({a:g},{b:g}) datum {cfg.datum}: energy {res.energy:.8f} farfield {res.farfield_coeff:.8f} "
                f"trunc {res.truncation_estimate:.2e} disc {res.discretization_estimate:.2e}"
            )
        _write(d, "cell.csv", "\n".join(rows) + "\n")
    elif e == "identities":
        for a, b in _ab_pairs(cfg, IDENTITY_CASES):
            rep = C.general_identity_residuals(a, b, cfg.R, cfg.density)
            lines += rep.lines()
            if a != b:
                lines.append("  " + C.symmetry_check(a, b, R=cfg.R, density=cfg.density).line())
    elif e == "threshold":
        lines = C.summary_lines(C.threshold_check(cfg.R, cfg.density))
    elif e == "jinf":
        v = C.jinf_closed_form()
        lines = [f"J_inf = {v:.15f}", f"pi(pi^2/3 - 1) = {math.pi * (math.pi**2 / 3 - 1):.15f}", f"difference {abs(v - math.pi * (math.pi**2 / 3 - 1)):.2e}"]
    elif e == "jhp":
        bs = _floats(cfg.b) if cfg.b else [1.0001, 1.1, 1.5, 2.0, 4.0]
        lines = [f"J_hp({b:g}) = {C.jhp_series(b):.12f}  (lower bound {C.jhp_lower_bound(b):.6f})" for b in bs]
        lines += C.summary_lines(C.jhp_checks())
    elif e == "competitor":
        ce, cq = C.competitor_energy(), C.competitor_quadrature()
        lines = [f"closed form {ce:.15f}", f"quadrature  {cq:.15f}", f"55/18+275pi/64 = {55 / 18 + 275 * math.pi / 64:.15f}", f"|difference| {abs(ce - cq):.2e}"]
        k = C.coercive_constants()
        lines += [f"{n} = {v:.15f}" for n, v in k.items()]
    else:  # gamma-k
        g = C.gamma_K_estimate(cfg.R, cfg.density)
        lines = [
            f"M_K = {g.mk:.6f} +- {g.error:.2e}",
            f"Gamma_K = (pi^2/4) M_K = {g.gamma_k:.6f}",
            f"2 J_inf = {2 * C.JINF:.6f}; relative difference {g.relative_to_2jinf:.2e}",
        ] + [f"half-plane energy at R={R:g}: {v:.8f}" for R, v in g.jhp_values]
    return lines


def cmd_report(cfg: RunConfig, d: Path) -> list[str]:
    """Every experiment at its default size; no exit-code effect from failed checks."""
    p, s, j = cfg.protocol(), cfg.settings(), cfg.n_jobs()
    lines: list[str] = []
    tally = {"pass": 0, "fail": 0, "inconclusive": 0}

    def add_bench(rep):
        lines.extend(rep.lines())
        for _, ok, _ in rep.checks:
            tally["pass" if ok else "fail"] += 1

    def add_cell(checks):
        lines.extend(c.line() for c in checks)
        for c in checks:
            tally[c.status] += 1

    add_bench(B.empty_square_convergence(3, p, s))
    add_bench(B.branch_table((0.07, 0.08, 0.09), 3, p, s, j))
    add_bench(B.gap_scan((0.07, 0.08, 0.09), 3, p, s, False, j))
    add_bench(B.contact_scan(cfg.thetas(), 0.08, 3, p, s, j))
    e1 = C.energy_E(1.0, cfg.R, cfg.density).energy
    add_bench(B.additivity_check(jobs=j, cell_energy=e1))
    lines.append("cell constants")
    add_cell(C.constants_checks())
    add_cell(C.jhp_checks())
    add_cell(C.threshold_check(cfg.R, cfg.density))
    for a, b in IDENTITY_CASES:
        rep = C.general_identity_residuals(a, b, cfg.R, cfg.density)
        lines.extend(rep.lines())
        for r in rep.residuals:
            tally[r.status] += 1
    add_cell(C.monotonicity_checks())
    add_cell(C.j_lower_checks())
    add_cell(C.family_lower_checks())
    add_cell(C.quadratic_bound_checks())
    add_cell(C.same_corner_checks())
    lines.append(f"TOTAL: {tally['pass']} pass, {tally['fail']} fail, {tally['inconclusive']} inconclusive")
    return lines


HANDLERS = {"mesh": cmd_mesh, "solve": cmd_solve, "bench": cmd_bench, "cell": cmd_cell, "report": cmd_report}


def run(cfg: RunConfig) -> Path:
    d = out_dir(cfg)
    _write(d, "config.txt", cfg.echo())
    lines = HANDLERS[cfg.command](cfg, d)
    _write(d, "report.txt", "\n".join(lines) + "\n")
    print("\n".join(lines))
    print(f"outputs in {d}")
    return d


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    logging.basicConfig(level=logging.INFO if ("-v" in argv or "--verbose" in argv) else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = resolve(argv)
        run(cfg)
    except SystemExit:
        raise
    except Exception as exc:  # execution errors only; failed checks are reported, not raised
        print(f"twoholes: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
