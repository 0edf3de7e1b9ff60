"""Bayesian Weibull multi-state survival models.

Competing-risks and illness-death event-history models with Weibull
proportional-hazards transitions: MCMC posterior inference, cumulative
incidence and transition-probability functionals, and synthetic cohort
generation. The heavy lifting lives in the compiled ``_msbayes`` extension.
"""

try:
    from ._msbayes import *  # noqa: F401,F403
    from ._msbayes import __version__  # noqa: F401
except ImportError:  # build-tree layout: extension next to the package
    from _msbayes import *  # noqa: F401,F403
    from _msbayes import __version__  # noqa: F401
