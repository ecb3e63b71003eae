"""Incentive planning for online question/answer forums.

Markov models of answer accumulation, closed-form reward expressions, a
Stackelberg solver for instructor/student rate selection, and a Monte Carlo
simulator, plus the batch studies exposed by the ``oef`` command.
"""

from .errors import CapacityError, ConfigError, DomainError, NumericError, OefError
from .markov import (
    Distribution,
    FullCtmc,
    LumpedCtmc,
    Partition,
    aggregate_distribution,
    build_full_ctmc,
    build_lumped_ctmc,
    check_lumpable,
    steady_state_solve,
    student_partition,
    uniformize_integral,
    uniformize_transient,
)
from .poisson import poisson_cdf, poisson_pmf, poisson_sf
from .rewards import (
    ChainSpec,
    InstructorParams,
    StudentTypeParams,
    discount,
    full_chain_rewards,
    normalized_error,
    reward_report,
    steady_probs_closed,
    steady_reward_instructor,
    steady_reward_student,
    transient_integrals_closed,
    transient_probs_closed,
    transient_reward_instructor,
    transient_reward_student,
)
from .stackelberg import (
    PayoffMatrices,
    StackelbergSolution,
    StrategyGrid,
    build_payoff_matrices,
    solve,
    solve_pure_leader,
    solve_stackelberg,
)
from .montecarlo import SimConfig, SimResult, simulate_forum
from .config import ExperimentConfig, default_config, load_config, parse_config

__version__ = "0.1.0"
