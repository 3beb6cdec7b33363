"""Post-hoc analysis of negotiation experiment result CSVs.

Recomputes every statistic (means, success rates, Welch t-tests, and the
best-equivalence bolding) directly from the raw per-negotiation rows and
renders the study's presentation artifacts: markdown tables and SVG line
charts with significance markers.
"""

from .reports import (
    SELECTORS,
    MissingCellsError,
    ReportSpec,
    render_figure,
    render_table,
)
from .results import collect_configs, read_result_rows, read_summary_csv
from .stats import WelchResult, betainc_regularized, student_t_sf, welch_t_test

__version__ = "0.1.0"
