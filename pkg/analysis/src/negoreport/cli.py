"""Command line entry: render tables/figures from a results CSV."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .reports import SELECTORS, ReportSpec, render_figure, render_table


def cli_main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="negoreport",
        description="Tables and figures from negotiation experiment results",
    )
    parser.add_argument("--input", required=True, type=Path,
                        help="results CSV from the experiment harness")
    parser.add_argument("--selector", required=True, choices=SELECTORS)
    parser.add_argument("--output-dir", required=True, type=Path)
    parser.add_argument("--grouping", choices=["strategy", "strategy_beta"],
                        default="strategy")
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    spec = ReportSpec(
        input_csv=args.input,
        selector=args.selector,
        output_dir=args.output_dir,
        grouping=args.grouping,
    )
    try:
        if spec.selector.startswith("table"):
            path = render_table(spec)
            print(path)
        else:
            for path in render_figure(spec):
                print(path)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
