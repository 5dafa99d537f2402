"""Taylor-expansion hedging for Levy-driven assets.

Monte Carlo pricing, arbitrary-order finite-difference Greeks, exact
replication baskets from variance/moment swaps and power-jump assets,
minimal-variance portfolios, and a batch harness that measures how many
Taylor terms a tolerance requires.
"""

from .chaos import (
    constant_term,
    constant_term_poly,
    enumerate_compositions,
    enumerate_partitions,
    multinomial,
    phi_extract,
    pi_coefficient,
)
from .errors import (
    AlignmentError,
    BankruptcyError,
    BudgetExceededError,
    ConventionError,
    DegenerateModelError,
    GridError,
    IncompleteMarketError,
    InsufficientNodesError,
    LadderOrderError,
    LevyHedgeError,
    MissingJumpRecordsError,
    NeedsHigherOrderError,
    PricingFailedError,
    TableFormatError,
    UnhedgeableSetError,
    UnsupportedOrderError,
    ZeroRateError,
)
from .jump_baskets import (
    JumpBasket,
    PathState,
    ScenarioOutcome,
    iterated_integral,
    phi_hedge_basket,
    pja_basket_general,
    pja_basket_order2,
    pja_basket_simple,
    pji_basket,
    replication_report,
)
from .minvar import MinVarWeights, mvp_bank_stock, mvp_general, mvp_weight, mvp_with_varswap
from .models import (
    CompoundPoisson,
    FixedJumps,
    LevyModel,
    MomentVector,
    NormalJumps,
    PathGrid,
    VarianceGamma,
    evolve_asset,
    increment_cumulants,
    levy_moment,
    log_mean_growth,
    moment_vector,
    power_jump_path,
    relative_factors,
    risk_neutral_drift,
    simulate_increment,
    simulate_path,
)
from .neutral import NeutralitySystem, solve_neutrality
from .pricing import (
    DerivativeLadder,
    OptionSpec,
    PathBundle,
    black_scholes_delta,
    black_scholes_gamma,
    black_scholes_price,
    derivative_ladder,
    mc_price,
    payoff,
    price_curve,
)
from .stencil import (
    StencilTable,
    apply_stencil,
    build_lookup_table,
    load_table,
    save_table,
    stencil_coefficient,
)
from .swaps import (
    RealizedHistory,
    SwapBasket,
    SwapSpec,
    moment_swap_basket,
    realized_moment,
    variance_swap_basket,
)
from .taylor import HedgeLedger, HedgeScenario, assemble_ledger, bank_term, find_q, taylor_approx

__version__ = "0.1.0"
