"""Batch front-end: single-point runs, sweeps, references, screening probes.

Exit codes: 0 success, 2 validation failure, 3 flagged non-convergence.

The run configuration is a JSON document mirroring VqdConfig field for field
(see README); it may also carry `fixtures`, `out`, and `emit` to act as a
full run manifest.  Command-line flags override file values.  Sweep points
dispatch to a process pool; output rows are written in deterministic sorted
order regardless of completion order, and every worker derives its own seed
from the master seed and the sorted task index.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import hamio
from .errors import ParseError, ValidationError
from .oracle import casci_reference, find_spin_eigenstate, labeled_spectrum
from .optimizers import OptimizerSpec
from .screen import (
    ancilla_distribution,
    attach_ancillas,
    build_screen_circuit,
    required_ancillas,
)
from .spinops import SpinSector, pass_probability
from .vqd import VqdConfig, run_deflation

RUN_COLUMNS = [
    "molecule", "mode", "lam", "method", "layers", "state", "energy",
    "s_squared", "s_target", "overlap_checks", "restart_index", "n_evals",
    "converged", "seed", "wall_time_s",
]

REFERENCE_COLUMNS = [
    "molecule", "mode", "lam", "n_alpha", "n_beta", "s_target", "state",
    "energy", "complete",
]


def _load_config_file(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read config {path}: {exc}") from exc


def _sector_from(doc: dict | None, record: hamio.HamiltonianRecord) -> SpinSector:
    if doc:
        return SpinSector(
            int(doc["n_alpha"]), int(doc["n_beta"]), float(doc["s_target"])
        )
    return record.sector


def _build_config(doc: dict, sector: SpinSector, seed: int) -> VqdConfig:
    opt = doc.get("optimizer", {})
    return VqdConfig(
        sector=sector,
        method=doc.get("method", "sfVQD/SSP"),
        layers=int(doc.get("layers", 6)),
        restarts=int(doc.get("restarts", 10)),
        n_states=int(doc.get("n_states", 1)),
        mode=doc.get("mode", "statevector"),
        n_shot=int(doc.get("n_shot", 1024)),
        c_penalty=float(doc.get("c_penalty", 0.0)),
        optimizer=OptimizerSpec(
            name=opt.get("name", "lbfgs"),
            max_evals=int(opt.get("max_evals", 5000)),
            tol=float(opt.get("tol", 1e-8)),
        ),
        seed=seed,
        overlap_on=doc.get("overlap_on", "prescreen"),
    )


def _run_one_task(task) -> list[dict]:
    """Worker: one (fixture, config) point; returns result rows."""
    record = hamio.load(task["fixture"])
    sector = _sector_from(task.get("sector"), record)
    config = _build_config(task["doc"], sector, task["seed"])
    start = time.perf_counter()
    result = run_deflation(config, record.to_pauli_sum())
    elapsed = time.perf_counter() - start
    rows = []
    for entry in result.states:
        rows.append({
            "molecule": record.molecule,
            "mode": record.geometry.mode,
            "lam": f"{record.geometry.lam:.6f}",
            "method": config.method,
            "layers": config.layers,
            "state": entry.state_index,
            "energy": f"{entry.energy:.12f}",
            "s_squared": f"{entry.s_squared:.8f}",
            "s_target": sector.s_target,
            "overlap_checks": entry.overlap_checks,
            "restart_index": entry.restart_index,
            "n_evals": entry.n_evals,
            "converged": entry.converged,
            "seed": task["seed"],
            "wall_time_s": f"{elapsed:.3f}",
        })
    return rows


def _write_csv(path: Path, columns, rows) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=columns)
        writer.writeheader()
        writer.writerows(rows)


def read_result_csv(path) -> list[dict]:
    """Round-trip reader for the emitted CSVs (used by tests)."""
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def cmd_run(args) -> int:
    doc = _load_config_file(args.config) if args.config else {}
    fixtures = list(args.fixtures) or list(doc.get("fixtures", []))
    if not fixtures:
        print("no fixture files given", file=sys.stderr)
        return 2
    for flag, key in (
        ("method", "method"), ("layers", "layers"), ("states", "n_states"),
        ("shots", "n_shot"), ("penalty", "c_penalty"), ("restarts", "restarts"),
    ):
        value = getattr(args, flag)
        if value is not None:
            doc[key] = value
    seed = args.seed if args.seed is not None else int(doc.get("seed", 0))
    out_dir = Path(args.out or doc.get("out", "results"))
    emit = set(args.emit or doc.get("emit", ["csv"]))

    # validate everything before any computation starts
    records = {}
    for path in fixtures:
        try:
            record = hamio.load(path)
        except (ParseError, ValidationError) as exc:
            print(f"fixture rejected: {exc}", file=sys.stderr)
            return 2
        report = hamio.validate_physics(record)
        if not report.clean:
            print(
                f"fixture {path} fails physics checks: {report.violations}",
                file=sys.stderr,
            )
            return 2
        records[path] = record

    tasks = []
    for path in sorted(fixtures):
        tasks.append({
            "fixture": path,
            "doc": doc,
            "sector": doc.get("sector"),
            "seed": 0,  # filled below from the sorted order
        })
    children = np.random.SeedSequence(seed).spawn(len(tasks))
    for i, task in enumerate(tasks):
        task["seed"] = int(children[i].generate_state(1)[0])

    if args.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            row_blocks = list(pool.map(_run_one_task, tasks))
    else:
        row_blocks = [_run_one_task(t) for t in tasks]
    rows = [row for block in row_blocks for row in block]
    rows.sort(key=lambda r: (
        r["molecule"], r["mode"], float(r["lam"]), r["method"],
        int(r["layers"]), int(r["state"]),
    ))

    if "csv" in emit:
        _write_csv(out_dir / "results.csv", RUN_COLUMNS, rows)
        print(f"wrote {out_dir / 'results.csv'} ({len(rows)} rows)")
    if "plot-data" in emit:
        _emit_plot_data(out_dir, rows)
    flagged = [r for r in rows if r["converged"] not in (True, "True")]
    if flagged:
        print(f"{len(flagged)} state(s) flagged as non-converged", file=sys.stderr)
        return 3
    return 0


def _emit_plot_data(out_dir: Path, rows) -> None:
    """One lambda-ordered series file per (molecule, mode, method, layers, state)."""
    series = {}
    for r in rows:
        key = (r["molecule"], r["mode"], r["method"], r["layers"], r["state"])
        series.setdefault(key, []).append(r)
    for (mol, mode, method, layers, state), items in sorted(series.items()):
        items.sort(key=lambda r: float(r["lam"]))
        tag = method.replace("/", "-").lower()
        name = f"plot_{mol.lower()}_{mode}_{tag}_L{layers}_S{state}.csv"
        _write_csv(
            out_dir / name,
            ["lam", "energy", "s_squared"],
            [
                {"lam": r["lam"], "energy": r["energy"], "s_squared": r["s_squared"]}
                for r in items
            ],
        )
    print(f"wrote {len(series)} plot-data series to {out_dir}")


def _feasible_triplet_sector(record: hamio.HamiltonianRecord) -> SpinSector | None:
    n_alpha, n_beta = record.n_alpha + 1, record.n_beta - 1
    if n_beta < 0 or n_alpha > record.n_spatial:
        return None
    return SpinSector(n_alpha, n_beta, abs(n_alpha - n_beta) / 2)


def cmd_reference(args) -> int:
    rows = []
    for path in sorted(args.fixtures):
        try:
            record = hamio.load(path)
        except (ParseError, ValidationError) as exc:
            print(f"fixture rejected: {exc}", file=sys.stderr)
            return 2
        if record.n_qubits > 14:
            print(f"{path}: exceeds the dense diagonalization guard", file=sys.stderr)
            return 2
        if args.sector:
            doc = json.loads(args.sector)
            sectors = [_sector_from(doc, record)]
        else:
            sectors = [record.sector]
            triplet = _feasible_triplet_sector(record)
            if triplet is not None:
                sectors.append(triplet)
        op = record.to_pauli_sum()
        for sector in sectors:
            ref = casci_reference(op, sector, args.states)
            if not ref.energies:
                rows.append({
                    "molecule": record.molecule, "mode": record.geometry.mode,
                    "lam": f"{record.geometry.lam:.6f}",
                    "n_alpha": sector.n_alpha, "n_beta": sector.n_beta,
                    "s_target": sector.s_target, "state": "",
                    "energy": "", "complete": False,
                })
                continue
            for k, energy in enumerate(ref.energies):
                rows.append({
                    "molecule": record.molecule, "mode": record.geometry.mode,
                    "lam": f"{record.geometry.lam:.6f}",
                    "n_alpha": sector.n_alpha, "n_beta": sector.n_beta,
                    "s_target": sector.s_target, "state": k,
                    "energy": f"{energy:.12f}", "complete": ref.complete,
                })
    out = Path(args.out or "results") / "reference.csv"
    _write_csv(out, REFERENCE_COLUMNS, rows)
    print(f"wrote {out} ({len(rows)} rows)")
    return 0


def cmd_probe(args) -> int:
    try:
        record = hamio.load(args.fixture)
    except (ParseError, ValidationError) as exc:
        print(f"fixture rejected: {exc}", file=sys.stderr)
        return 2
    op = record.to_pauli_sum()
    labels = labeled_spectrum(op)
    try:
        state = find_spin_eigenstate(
            labels, args.spin, args.mz, n_elec=record.n_alpha + record.n_beta
        )
    except ValueError as exc:
        print(f"no such eigenstate: {exc}", file=sys.stderr)
        return 2
    n_anc = required_ancillas(record.n_spatial, record.n_alpha + record.n_beta)
    composite = attach_ancillas(state.vector, n_anc)
    build_screen_circuit(record.n_spatial, n_anc).apply(composite)
    dist = ancilla_distribution(composite, n_anc)
    pass_mass = sum(p for m, p in dist.items() if abs(m) <= abs(args.mz))
    expected = pass_probability(args.spin, args.mz)
    print(f"eigenstate: S={state.s} m_z={state.m_z} E={state.energy:.8f}")
    for m in sorted(dist):
        if dist[m] > 1e-12:
            print(f"  m_x = {m:+d}: {dist[m]:.8f}")
    print(f"pass mass |m_x| <= {abs(args.mz):g}: {pass_mass:.10f}")
    print(f"predicted pass probability:  {expected:.10f}")
    if abs(pass_mass - expected) > 1e-6:
        print("MISMATCH beyond 1e-6", file=sys.stderr)
        return 2
    return 0


def cmd_validate(args) -> int:
    status = 0
    for path in args.fixtures:
        try:
            record = hamio.load(path, strict=not args.lenient)
        except (ParseError, ValidationError) as exc:
            print(f"{path}: REJECTED ({exc})")
            status = 2
            continue
        report = hamio.validate_physics(record)
        if report.clean:
            note = "; ".join(report.suspicious)
            print(f"{path}: OK" + (f" ({note})" if note else ""))
        else:
            print(f"{path}: VIOLATIONS " + "; ".join(report.violations))
            status = 2
    return status


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="sfvqd",
        description="Spin-filtering VQD batch runner and diagnostics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="optimize deflation ladders over fixtures")
    run.add_argument("fixtures", nargs="*", help="fixture JSON paths")
    run.add_argument("--config", help="JSON config / manifest file")
    run.add_argument("--seed", type=int)
    run.add_argument("--out", help="output directory")
    run.add_argument("--jobs", type=int, default=1)
    run.add_argument("--method", choices=["VQD/SP", "VQD/SSP", "sfVQD/SSP"])
    run.add_argument("--layers", type=int)
    run.add_argument("--states", type=int)
    run.add_argument("--shots", type=int)
    run.add_argument("--penalty", type=float)
    run.add_argument("--restarts", type=int)
    run.add_argument("--emit", action="append",
                     choices=["csv", "plot-data"])
    run.set_defaults(func=cmd_run)

    ref = sub.add_parser("reference", help="exact sector-resolved energies")
    ref.add_argument("fixtures", nargs="+")
    ref.add_argument("--states", type=int, default=5)
    ref.add_argument("--sector", help='JSON like {"n_alpha":1,"n_beta":1,"s_target":0}')
    ref.add_argument("--out", help="output directory")
    ref.set_defaults(func=cmd_reference)

    probe = sub.add_parser("probe", help="screen an exact eigenstate")
    probe.add_argument("fixture")
    probe.add_argument("--spin", type=float, required=True)
    probe.add_argument("--mz", type=float, required=True)
    probe.set_defaults(func=cmd_probe)

    val = sub.add_parser("validate", help="schema and physics checks")
    val.add_argument("fixtures", nargs="+")
    val.add_argument("--lenient", action="store_true",
                     help="keep unknown JSON fields instead of rejecting")
    val.set_defaults(func=cmd_validate)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
