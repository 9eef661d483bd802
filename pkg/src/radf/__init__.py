"""Recursive right-tailed unit-root tests (SADF, GSADF, BSADF) for dating explosive episodes."""

from .adf import AdfResult, AdfSpec, adf_t_stat, ols
from .critical import (
    CriticalValueCache,
    CriticalValueTable,
    bsadf_cv_sequence,
    critical_values,
    simulate_null,
)
from .dgp import DgpSpec, generate
from .errors import *  # noqa: F401,F403
from .kernels import BACKEND
from .recursive import BubbleEpisode, StatSequence, bsadf_sequence, date_stamp, full_sample_adf, gsadf, sadf
from .series import (
    FractionalWindow,
    Month,
    Series,
    load_csv,
    price_rent_ratio,
    ratio_from_rental_yield,
    spread,
    write_csv,
)

__version__ = "0.1.0"
