"""Long-memory stochastic volatility: tail empirical processes and the Hill estimator."""
from .errors import (
    ConfigError,
    EmbeddingError,
    LmsvError,
    NumericalError,
    QuadratureError,
    RankUndetectedError,
    RegimeError,
    RootFindingError,
)
from .gauss_lrd import GaussianPath, LrdSpec, autocov, autocov_asymptotic, sample_autocov, simulate
from .hermite import HermiteExpansion, expand, expand_Gn, expand_sigma_alpha, rank_of, rozanov_cov
from .regimes import RegimeReport, classify, covariance_prediction, feasibility
from .tails import (
    NoiseSpec,
    TailGrid,
    VolatilitySpec,
    breiman_constant,
    conditional_tail_Tn,
    limit_tail,
    quantile_u,
    survival_y,
)
from .tep import (
    Sample,
    decompose,
    hill,
    hill_integral,
    random_level_tep,
    simulate_sample,
    tail_empirical,
)

__version__ = "0.1.0"
