"""Static-to-dynamic modeling of utility-driven consumption and exchange."""
from .core import CobbDouglas, ConsumptionModel, Custom, Trajectory, utility, utility_gradient, validate_model
from .dynamics import (
    IntegratorConfig,
    analytic_trajectory,
    integrate_first_order,
    integrate_second_order,
    rate_coefficients,
)
from .exchange import ExchangeScenario, simulate_exchange
from .statics import solve_static_optimum

__version__ = "0.1.0"
