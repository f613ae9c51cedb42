"""slesim-plots: heatmap and diagnostics rendering for slesim run directories."""

from .io import RunDataError, load_diagnostics, load_snapshot, load_summary, snapshot_files
from .render import assemble_density_matrix, linf_fit, render_diagnostics, render_heatmap

__version__ = "0.1.0"
