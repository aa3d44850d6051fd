"""fracwave-plot: render a figure described by a TOML spec."""

from __future__ import annotations

import argparse
import sys

from .figures import SchemaError, load_figure_spec, render


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="fracwave-plot",
        description="Render solver output CSVs into PNG/SVG figures")
    parser.add_argument("config", help="figure spec (TOML)")
    args = parser.parse_args(argv)
    try:
        spec = load_figure_spec(args.config)
        out = render(spec)
    except (SchemaError, FileNotFoundError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
