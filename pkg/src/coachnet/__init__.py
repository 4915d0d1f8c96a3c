"""Coach hiring network analysis."""

__version__ = "0.1.0"

from .ingest import (CoachRecord, DropReport, Division, PollTable, SchemaError, SchoolInfo, Sport, Stint,
                     parse_ap_polls, parse_coach_records, parse_school_table)
from .netcore import HiringEdge, HiringNetwork, build_network, degree_sequences, read_edges, summarize, write_edges
from .inequality import coverage_fraction, gini, inequality_report, lorenz
from .community import community_report, export_geo, louvain, modularity
from .ranking import (Method, Ranking, leaderrank, mvr, outdegree_ranking, pagerank, pearson, violations)
from .temporal import Window, extract_windows, graduation_histogram, growth_time_histogram, subnetwork
from .rankcorr import (aggregate_polls, correlation_grid, fill_average_rank, kendall_tau,
                       median_rank_aggregate)
from .flows import division_flow_matrix, flow_findings
