"""Evolutionary and multi-factorial local search solvers for the profit
chance-constrained quadratic multiple knapsack problem."""
from ._backend import BACKEND
from .budget import Budget
from .ea import (EaConfig, make_offspring, random_reset_mutation, run_mu_plus_lambda,
                 run_one_plus_one, swap_mutation)
from .hybrid import HybridConfig, run_hybrid_mu_plus_lambda, run_hybrid_one_plus_one
from .instance import (Instance, ParseError, derive_capacities, format_instance,
                       generate_instance, parse_instance, read_instance, write_instance)
from .mfo import (MfoConfig, MfoIndividual, evaluate_mfo_metrics, kt_crossover,
                  preference_mutation, run_mfo)
from .oracle import OracleResult, exhaustive_best
from .profit import (ChanceParams, FitnessValue, chebyshev_estimate, is_feasible,
                     knapsack_cc_profit, knapsack_moments, solution_fitness, task_fitness)
from .solution import (Assignment, PreferenceTable, apply_move, build_preference_table,
                       profit_density)
from .stats import kruskal_wallis, pairwise_significance, summarize

__version__ = "0.1.0"
