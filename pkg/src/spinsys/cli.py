"""Configuration-driven experiment runner.

Every campaign is a subcommand emitting a CSV or JSON table plus a JSON
manifest (config echo, versions, wall time, per-assertion verdicts).  The
process exits 0 iff every assertion passed; 2 on config errors, 3 on solver
failures, 4 on unwritable output paths.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from dataclasses import dataclass

import numpy as np

from . import __version__
from .lattice import SpinGraph, load_graph, path_graph, ring_graph, distances_from
from .hilbert import SpinSpace, embed_at, magnetization_sector, spin_matrices
from .models import XxzParams, aklt, assemble, custom, heisenberg, lambda_norm, xxz
from .spectral import ConvergenceError, full_spectrum, sector_spectrum, \
    sector_sweep_lowest, spectral_gap
from .symmetry import classify_total_spin, foel_check, lieb_mattis_check, \
    spin_multiplicities, su2_casimir_value, su2_totals
from .ssep import ssep_gaps, xxx_conjugacy_check
from .dynamics import HeisenbergDynamics, clustering_report, commutator_growth, \
    lr_bound_rhs, lr_corollary_bound
from .perturbation import gap_sweep
from .droplets import bandwidth_formula, compare_band_width, convergence_table, \
    droplet_energy_formula
from .util import fmt_float

SUBCOMMANDS = ("spectrum", "foel", "liebmattis", "ssep", "droplet",
               "lightcone", "cluster", "perturb")

COMMON_KEYS = {
    "out": str, "format": str, "threads": int, "tol": float, "config": str,
}

MODEL_KEYS = {
    "model": str, "L": int, "J": float, "spin": float, "Delta": float,
    "q": float, "graph": str,
}

SUB_KEYS = {
    "spectrum": dict(MODEL_KEYS),
    "foel": dict(MODEL_KEYS),
    "liebmattis": {"graph": str, "spin": float},
    "ssep": {"graph": str},
    "droplet": {"q": float, "Delta": float, "n": int, "Lmin": int, "Lmax": int,
                "J": float},
    "lightcone": {"L": int, "J": float, "spin": float, "lam": float,
                  "tmax": float, "tsteps": int, "bsite": int},
    "cluster": {"L": int, "lam": float},
    "perturb": {"L": int, "lambda_min": float, "lambda_max": float,
                "lambda_step": float},
}


class ConfigError(ValueError):
    pass


def parse_config_file(path):
    """Plain-text ``key = value`` file with optional [section] headers; only
    sections named 'common' or a subcommand are accepted."""
    sections = {"common": {}}
    current = "common"
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    for ln_no, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1].strip()
            if current != "common" and current not in SUBCOMMANDS:
                raise ConfigError(f"line {ln_no}: unknown section [{current}]")
            sections.setdefault(current, {})
            continue
        if "=" not in line:
            raise ConfigError(f"line {ln_no}: expected 'key = value', got {line!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        sections[current][key] = value
    return sections


def merge_config(sub, file_sections, flag_values):
    """Defaults <- config file <- command-line flags; unknown keys are errors."""
    allowed = dict(COMMON_KEYS)
    allowed.update(SUB_KEYS[sub])
    merged = {"format": "csv", "threads": 1, "tol": 1e-10,
              "out": f"spinsys_{sub}.csv"}
    for section in ("common", sub):
        for key, value in file_sections.get(section, {}).items():
            if key not in allowed:
                raise ConfigError(f"unknown key {key!r} in section [{section}]")
            merged[key] = allowed[key](value)
    for key, value in flag_values.items():
        if value is None:
            continue
        if key not in allowed:
            raise ConfigError(f"unknown flag {key!r}")
        merged[key] = value
    if merged["format"] not in ("csv", "json"):
        raise ConfigError(f"format must be csv or json, got {merged['format']!r}")
    return merged


@dataclass
class Assertion:
    name: str
    passed: bool
    detail: str = ""


def emit(columns, rows, fmt, path):
    """Write a table; floats go out with 17 significant digits."""

    def cell(v):
        if isinstance(v, float):
            return fmt_float(v)
        return str(v)

    try:
        if fmt == "csv":
            lines = [",".join(columns)]
            for row in rows:
                lines.append(",".join(cell(row[c]) for c in columns))
            payload = "\n".join(lines) + "\n"
        else:
            data = {c: [row[c] for row in rows] for c in columns}
            payload = json.dumps(data, indent=1, sort_keys=True) + "\n"
        with open(path, "w") as fh:
            fh.write(payload)
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc}") from exc


class OutputError(OSError):
    pass


def _model_space_and_interaction(cfg):
    model = cfg.get("model", "heisenberg")
    L = cfg.get("L", 6)
    J = cfg.get("J", 1.0)
    spin = cfg.get("spin", 0.5)
    if model == "heisenberg":
        if "graph" in cfg:
            g = load_graph(cfg["graph"])
        else:
            g = path_graph(L, weight=J, spin=spin)
        return g, SpinSpace.from_graph(g), heisenberg(g)
    if model == "aklt":
        g = path_graph(L, spin=1.0)
        return g, SpinSpace.from_graph(g), aklt(L)
    if model in ("xxz_open", "xxz_periodic"):
        if ("Delta" in cfg) == ("q" in cfg):
            raise ConfigError("give exactly one of Delta, q for the XXZ model")
        boundary = "periodic" if model == "xxz_periodic" else "open_with_field"
        if "q" in cfg:
            p = XxzParams.from_q(L, cfg["q"], J=J, boundary=boundary)
        else:
            p = XxzParams.from_delta(L, cfg["Delta"], J=J, boundary=boundary)
        g = ring_graph(L, weight=J) if boundary == "periodic" else path_graph(L, weight=J)
        return g, SpinSpace((2,) * L), xxz(p)
    raise ConfigError(f"unknown model {model!r}")


def run_spectrum(cfg):
    _, space, phi = _model_space_and_interaction(cfg)
    H = assemble(phi, space)
    rows = []
    trace = float(np.real(H.matrix.diagonal().sum()))
    total = 0.0
    for M in space.magnetization_values():
        sector = magnetization_sector(space, M)
        rep = sector_spectrum(H, sector)
        total += float(rep.eigenvalues.sum())
        for i, e in enumerate(rep.eigenvalues):
            rows.append({"sector_M": M, "index": i, "energy": float(e)})
    ok = abs(total - trace) <= 1e-9 * max(1.0, abs(trace))
    asserts = [Assertion("eigenvalue_sum_matches_trace", ok,
                         f"sum={total!r} trace={trace!r}")]
    return ["sector_M", "index", "energy"], rows, asserts, {}


def run_foel(cfg, tol):
    _, space, phi = _model_space_and_interaction(cfg)
    H = assemble(phi, space)
    mult = spin_multiplicities(space)
    cvals = {t: su2_casimir_value(t) for t in mult}
    totals = su2_totals(space)
    levels = classify_total_spin(H, totals.casimir, cvals, space)
    verdict = foel_check(levels)
    e0 = min(levels.entries.values())
    rows = []
    for M in space.magnetization_values():
        rep = sector_spectrum(H, magnetization_sector(space, M))
        for e in rep.eigenvalues:
            rows.append({"S3": M, "energy_offset": float(e - e0)})
    table_rows = [{"twice_S": t, "S": t / 2,
                   "E_min": levels.entries[t], "E_max": levels.max_entries[t]}
                  for t in levels.spins()]
    asserts = [Assertion("foel_holds", verdict.holds,
                         f"margin={verdict.margin!r} witness={verdict.witness}")]
    extra = {"levels": (["twice_S", "S", "E_min", "E_max"], table_rows)}
    return ["S3", "energy_offset"], rows, asserts, extra


def run_liebmattis(cfg):
    if "graph" not in cfg:
        raise ConfigError("liebmattis needs a graph file")
    g = load_graph(cfg["graph"])
    # 2-color by BFS from vertex 0
    dist = distances_from(g, 0)
    if any(math.isinf(d) for d in dist):
        raise ConfigError("graph must be connected for the bipartition")
    part_a = [x for x in g.vertices if int(dist[x]) % 2 == 0]
    part_b = [x for x in g.vertices if int(dist[x]) % 2 == 1]
    verdict = lieb_mattis_check(g, part_a, part_b)
    from .models import assemble as _asm
    from .symmetry import lieb_mattis_hamiltonian
    phi = lieb_mattis_hamiltonian(g, part_a, part_b)
    space = SpinSpace.from_graph(g)
    H = _asm(phi, space)
    mult = spin_multiplicities(space)
    cvals = {t: su2_casimir_value(t) for t in mult}
    levels = classify_total_spin(H, su2_totals(space).casimir, cvals, space)
    rows = [{"twice_S": t, "S": t / 2, "E_min": levels.entries[t],
             "E_max": levels.max_entries[t]} for t in levels.spins()]
    asserts = [Assertion("lieb_mattis_holds", verdict.holds,
                         f"margin={verdict.margin!r} witness={verdict.witness}")]
    return ["twice_S", "S", "E_min", "E_max"], rows, asserts, {}


def run_ssep(cfg):
    if "graph" not in cfg:
        raise ConfigError("ssep needs a graph file")
    g = load_graph(cfg["graph"])
    report = ssep_gaps(g)
    rows = [{"n": n, "dim": report.dims[n], "lambda_n": report.gaps[n],
             "aldous_margin": report.aldous_margin}
            for n in sorted(report.gaps)]
    asserts = [
        Assertion("uniform_is_stationary",
                  max(report.stationary_checks.values()) < 1e-12,
                  f"max |L 1| = {max(report.stationary_checks.values())!r}"),
        Assertion("aldous_margin_small", report.aldous_margin < 1e-9,
                  f"margin={report.aldous_margin!r}"),
    ]
    try:
        conj = xxx_conjugacy_check(g)
        asserts.append(Assertion("xxx_conjugacy", True,
                                 f"max deviation {conj.max_deviation!r}"))
    except ValueError as exc:
        asserts.append(Assertion("xxx_conjugacy", False, str(exc)))
    return ["n", "dim", "lambda_n", "aldous_margin"], rows, asserts, {}


def run_droplet(cfg):
    if ("Delta" in cfg) == ("q" in cfg):
        raise ConfigError("give exactly one of Delta, q")
    q = cfg["q"] if "q" in cfg else None
    if q is None:
        D = cfg["Delta"]
        q = D - math.sqrt(D * D - 1)
    n = cfg.get("n", 1)
    J = cfg.get("J", 1.0)
    Lmax = cfg.get("Lmax", 12)
    Lmin = cfg.get("Lmin", max(4, 2 * n + 2))
    Ls = list(range(Lmin, Lmax + 1, 2))
    table = convergence_table(q, n, Ls, J=J)
    rows = []
    for r in table.rows:
        p = XxzParams.from_q(r.L, q, J=J, boundary="periodic")
        width = compare_band_width(p, n)
        rows.append({
            "q": q, "n": n, "L": r.L,
            "E_L_periodic": r.e_periodic, "E_open_suq": r.e_open_suq,
            "E_formula": table.formula_energy,
            "abs_dev": r.dev_periodic,
            "band_width_measured": width.measured,
            "band_width_formula": width.printed,
        })
    last = table.rows[-1]
    asserts = [
        Assertion("periodic_converges", last.dev_periodic < 1e-2,
                  f"|E_L(n) - E(n)| = {last.dev_periodic!r} at L={last.L}"),
        Assertion("open_suq_converges", last.dev_open < 2e-2,
                  f"|E_open - E(n)| = {last.dev_open!r} at L={last.L}"),
    ]
    cols = ["q", "n", "L", "E_L_periodic", "E_open_suq", "E_formula",
            "abs_dev", "band_width_measured", "band_width_formula"]
    return cols, rows, asserts, {}


def run_lightcone(cfg):
    L = cfg.get("L", 8)
    J = cfg.get("J", 1.0)
    spin = cfg.get("spin", 0.5)
    lam = cfg.get("lam", 1.0)
    tmax = cfg.get("tmax", 1.0)
    tsteps = cfg.get("tsteps", 21)
    g = path_graph(L, weight=J, spin=spin)
    space = SpinSpace.from_graph(g)
    phi = heisenberg(g)
    H = assemble(phi, space)
    phi_norm = lambda_norm(phi, lam, g)
    bsite = cfg.get("bsite", L // 2)
    s = spin_matrices(spin)
    b_local = 2.0 * np.asarray(s.s3)      # sigma^3 for spin 1/2
    B = embed_at(space, [(bsite, b_local)]).toarray()
    b_norm = float(np.linalg.norm(b_local, 2))
    dyn = HeisenbergDynamics(H)
    ts = [tmax * i / (tsteps - 1) for i in range(tsteps)]
    rows = []
    violations = 0
    for x in range(L):
        for t in ts:
            measured = commutator_growth(dyn, B, x, t, space)
            bound = lr_bound_rhs(g, lam, phi_norm, x, {bsite}, b_norm, t)
            corollary = (lr_corollary_bound(g, lam, phi_norm, x, {bsite},
                                            1.0, b_norm, t)
                         if x != bsite else float("nan"))
            if measured > bound + 1e-9:
                violations += 1
            rows.append({"x": x, "t": t, "measured": measured,
                         "bound_thm1": bound, "bound_corollary": corollary})
    asserts = [Assertion("commutator_below_bound", violations == 0,
                         f"{violations} grid points violate the bound")]
    return ["x", "t", "measured", "bound_thm1", "bound_corollary"], rows, asserts, {}


def run_cluster(cfg, threads, tol):
    L = cfg.get("L", 8)
    lam = cfg.get("lam", 1.0)
    g = ring_graph(L, spin=1.0)
    phi = aklt(L, periodic=True)
    s3 = np.asarray(spin_matrices(1.0).s3)
    report = clustering_report(g, phi, s3, lam, threads=threads, tol=tol)
    rows = [{"x": r.x, "y": r.y, "d": r.distance, "b": r.b,
             "corr_abs": r.corr_abs, "bound_decay": r.bound,
             "gamma": report.gamma, "mu": report.rates.mu}
            for r in report.rows]
    asserts = [
        Assertion("unique_gapped_ground", report.ground_degeneracy == 1
                  and report.gamma > 0, f"gamma={report.gamma!r}"),
        Assertion("decay_bound_holds", report.bound_holds,
                  f"c={report.c_constant!r}"),
        Assertion("trivial_large_b_bound",
                  all(v <= bd + 1e-12 for (_, _, v, bd) in report.large_b),
                  "corr <= |A||B| e^(-gamma b)"),
    ]
    return ["x", "y", "d", "b", "corr_abs", "bound_decay", "gamma", "mu"], \
        rows, asserts, {}


def run_perturb(cfg, threads):
    L = cfg.get("L", 8)
    lo = cfg.get("lambda_min", -0.1)
    hi = cfg.get("lambda_max", 0.1)
    step = cfg.get("lambda_step", 0.02)
    count = int(round((hi - lo) / step)) + 1
    lambdas = [round(lo + i * step, 12) for i in range(count)]
    s3 = np.asarray(spin_matrices(1.0).s3)
    szsz = np.kron(s3, s3)

    def base(LL):
        return aklt(LL, periodic=True)

    def pert(LL):
        return custom([(((x, (x + 1) % LL)), szsz) for x in range(LL)])

    sweep = gap_sweep(base, pert, lambdas, [L], threads=threads)
    rows = [{"L": L, "lambda": lam, "ground_energy": sweep.ground_energies[(L, lam)],
             "degeneracy": sweep.ground_degeneracies[(L, lam)],
             "gap": sweep.gaps[(L, lam)]} for lam in lambdas]
    gap0 = sweep.gaps[(L, 0.0)] if (L, 0.0) in sweep.gaps else None
    weyl_ok = gap0 is None or all(
        abs(sweep.gaps[(L, lam)] - gap0) <= sweep.weyl_bound(L, lam) + 1e-8
        for lam in lambdas)
    asserts = [
        Assertion("gap_positive_throughout",
                  all(sweep.gaps[(L, lam)] > 0 for lam in lambdas),
                  f"min gap {min(sweep.gaps.values())!r}"),
        Assertion("weyl_estimate_respected", weyl_ok,
                  f"pert norm {sweep.pert_norms[L]!r}"),
    ]
    return ["L", "lambda", "ground_energy", "degeneracy", "gap"], rows, asserts, {}


def build_parser():
    parser = argparse.ArgumentParser(prog="spinsys",
                                     description="spin-system campaigns")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in SUBCOMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", type=str, default=None)
        p.add_argument("--out", type=str, default=None)
        p.add_argument("--format", type=str, default=None, choices=["csv", "json"])
        p.add_argument("--threads", type=int, default=None)
        p.add_argument("--tol", type=float, default=None)
        for key, typ in SUB_KEYS[name].items():
            p.add_argument(f"--{key}", type=typ, default=None)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    sub = args.subcommand
    started = time.time()
    try:
        file_sections = parse_config_file(args.config) if args.config else {}
        flag_values = {k: v for k, v in vars(args).items()
                       if k not in ("subcommand", "config")}
        cfg = merge_config(sub, file_sections, flag_values)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    threads = cfg["threads"]
    tol = cfg["tol"]
    try:
        if sub == "spectrum":
            cols, rows, asserts, extra = run_spectrum(cfg)
        elif sub == "foel":
            cols, rows, asserts, extra = run_foel(cfg, tol)
        elif sub == "liebmattis":
            cols, rows, asserts, extra = run_liebmattis(cfg)
        elif sub == "ssep":
            cols, rows, asserts, extra = run_ssep(cfg)
        elif sub == "droplet":
            cols, rows, asserts, extra = run_droplet(cfg)
        elif sub == "lightcone":
            cols, rows, asserts, extra = run_lightcone(cfg)
        elif sub == "cluster":
            cols, rows, asserts, extra = run_cluster(cfg, threads, tol)
        elif sub == "perturb":
            cols, rows, asserts, extra = run_perturb(cfg, threads)
        else:  # pragma: no cover
            raise ConfigError(f"unknown subcommand {sub}")
    except (ConfigError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (ConvergenceError, ValueError, RuntimeError) as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return 3

    out = cfg["out"]
    fmt = cfg["format"]
    try:
        emit(cols, rows, fmt, out)
        for suffix, (xcols, xrows) in extra.items():
            stem, dot, ext = out.rpartition(".")
            xpath = f"{stem}.{suffix}.{ext}" if dot else f"{out}.{suffix}"
            emit(xcols, xrows, fmt, xpath)
        manifest = {
            "subcommand": sub,
            "config": {k: v for k, v in sorted(cfg.items())},
            "versions": {
                "python": sys.version.split()[0],
                "numpy": np.__version__,
                "spinsys": __version__,
            },
            "wall_time_s": time.time() - started,
            "assertions": [{"name": a.name, "passed": a.passed, "detail": a.detail}
                           for a in asserts],
        }
        with open(out + ".manifest.json", "w") as fh:
            json.dump(manifest, fh, indent=1, sort_keys=True)
            fh.write("\n")
    except (OutputError, OSError) as exc:
        print(f"output error: {exc}", file=sys.stderr)
        return 4

    failed = [a for a in asserts if not a.passed]
    for a in asserts:
        status = "PASS" if a.passed else "FAIL"
        print(f"[{status}] {a.name}: {a.detail}")
    return 0 if not failed else 1


def main():  # pragma: no cover
    sys.exit(run())
