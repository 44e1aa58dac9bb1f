"""Run every registered experiment and write one result envelope apiece.

Analytic tables always come along; pass --events to add Monte Carlo
counts with the four-sigma agreement check in each envelope row.

    python3 scripts/run_all.py --events 20000 --out-dir results/
"""

import argparse
import pathlib
import sys

from hqs.cli import RunSpec, emit_results, run_spec
from hqs.experiments import EXPERIMENTS


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--events", type=int, default=20_000,
                        help="Monte Carlo events per experiment (0 = analytic only)")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out-dir", default="results")
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    args = parser.parse_args(argv)

    out_dir = pathlib.Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    failures = 0
    for name in EXPERIMENTS:
        spec = RunSpec(
            experiment=name,
            parameters={},
            n=args.events or None,
            seed=args.seed,
            output_format=args.format,
        )
        envelope = run_spec(spec)
        path = out_dir / f"{name}.{args.format}"
        path.write_bytes(emit_results(envelope, args.format))
        entries = envelope.get("entries") or []
        bad = [e["outcome"] for e in entries if e.get("pass") is False]
        failures += len(bad)
        status = "ok" if not bad else f"outside 4-sigma: {', '.join(bad)}"
        print(f"{name:>14}  {len(entries):3d} outcomes  {status}  -> {path}")

    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
