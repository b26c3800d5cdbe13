"""Command line front-end: generate fixture scans.

Each lambda point runs independently; SCF failures are reported and the
scan continues with the remaining points.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .records import MODE_RANGES, MOLECULES, generate_point, write_point
from .scf import ScfError

COMMITTED_SCANS = [
    ("LiH", "bond", [-0.5, 0.0, 0.5, 1.0]),
    ("BeH2", "sym-stretch", [0.0, 0.5, 1.0]),
    ("BeH2", "antisym-stretch", [0.0, 0.5, 1.0]),
]


def _parse_lambdas(text: str) -> list[float]:
    return [float(x) for x in text.replace(",", " ").split()]


def cmd_generate(args) -> int:
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    if args.committed_set:
        scans = COMMITTED_SCANS
    else:
        if args.molecule is None or args.mode is None or args.lambdas is None:
            print("generate needs --molecule, --mode and --lambdas "
                  "(or --committed-set)", file=sys.stderr)
            return 2
        scans = [(args.molecule, args.mode, _parse_lambdas(args.lambdas))]
    failures = 0
    for molecule, mode, lambdas in scans:
        if molecule not in MOLECULES:
            print(f"unknown molecule {molecule!r}", file=sys.stderr)
            return 2
        lo, hi = MODE_RANGES.get((molecule, mode), (None, None))
        if lo is None:
            print(f"unknown mode {mode!r} for {molecule}", file=sys.stderr)
            return 2
        for lam in lambdas:
            if not lo <= lam <= hi:
                print(f"warning: lambda={lam} outside the studied range "
                      f"[{lo}, {hi}] for {molecule}/{mode}", file=sys.stderr)
            try:
                result = generate_point(molecule, mode, lam)
            except ScfError as exc:
                print(f"FAILED {molecule} {mode} lambda={lam:+.2f}: {exc}",
                      file=sys.stderr)
                failures += 1
                continue
            path = write_point(result, out_dir)
            print(f"wrote {path}  (SCF {result.scf_energy:.8f}, "
                  f"CASCI {result.casci_ground:.8f})")
    return 1 if failures else 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="chemgen",
        description="Generate active-space qubit Hamiltonian fixtures (STO-3G).",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    gen = sub.add_parser("generate", help="run a geometry scan")
    gen.add_argument("--molecule", choices=sorted(MOLECULES))
    gen.add_argument("--mode",
                     choices=["bond", "sym-stretch", "antisym-stretch"])
    gen.add_argument("--lambdas", help="comma- or space-separated lambda values")
    gen.add_argument("--out", required=True, help="output directory")
    gen.add_argument("--committed-set", action="store_true",
                     help="generate the full fixture set used by the simulator tests")
    gen.set_defaults(func=cmd_generate)
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
