"""Command line: render the heatmap and diagnostics panels of a run directory.

    slesim-plot <run_dir> [--out <dir>]

Outputs land in --out (default: current directory) as
<run>_heatmap.png and <run>_diagnostics.png; the run directory itself is
never written to.
"""

from __future__ import annotations

import argparse
import os
import sys

from .io import RunDataError
from .render import render_diagnostics, render_heatmap


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="slesim-plot",
                                     description="Render slesim run CSVs into figures")
    parser.add_argument("run_dir", help="simulation output directory")
    parser.add_argument("--out", default=".", help="directory for the images")
    args = parser.parse_args(argv)

    os.makedirs(args.out, exist_ok=True)
    base = os.path.basename(os.path.normpath(args.run_dir))
    try:
        heat = render_heatmap(args.run_dir, os.path.join(args.out, base + "_heatmap.png"))
        panels, slope = render_diagnostics(
            args.run_dir, os.path.join(args.out, base + "_diagnostics.png"))
    except RunDataError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    msg = f"wrote {heat} and {panels}"
    if slope is not None:
        msg += f" (sup-norm slope {slope:.3f})"
    print(msg)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
