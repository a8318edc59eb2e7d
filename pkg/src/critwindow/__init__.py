"""Exact enumeration, critical-window generating functions and scaling profiles on the complete graph."""
from .errors import BoundHypothesisError, CapacityError, ConvergenceError, PrecisionError
from .exact_counts import CountTable, brute_force_connected, cayley_count, connected_count, default_table
from .genfun import Real, TailCertificate, WindowPoint, chi_animal, chi_tree, g0_animal, g0_tree, g01_animal, g01_tree
from .profiles import ProfileEval, lambert_w0, perc_profile, profile_I, profile_Ik, tree_one_point_limit
from .saw import saw_chi, saw_two_point, saw_walk_count
from .percsim import MCEstimate, estimate_chi_perc, profile_fit, sample_cluster
from .harness import ConvergenceReport, SweepSpec, fit_convergence, run_sweep, verify

__version__ = "0.1.0"
