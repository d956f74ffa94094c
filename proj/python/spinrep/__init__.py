"""Spinor representation toolkit.

Conformal immersions in R^3, Nil_3 and R^4 built from spinor data, with
residual verification of the associated Dirac systems. The heavy lifting
happens in the compiled extension; this package re-exports its surface.
"""

from ._core import (  # noqa: F401
    Domain,
    builtin,
    builtin_names,
    congruence_rms,
    dbar_solve,
    dirac_residual,
    eval_expr,
    gauge_fix,
    generate_nil3,
    immerse_nil3,
    immerse_r3,
    induced_spinor,
    kt_immerse,
    mean_curvature_r3,
    potential_from_spinor,
    rot3,
    rot4,
    run_job_json,
    segre,
    spinor_from_weierstrass,
    __version__,
)

__all__ = [
    "Domain",
    "builtin",
    "builtin_names",
    "congruence_rms",
    "dbar_solve",
    "dirac_residual",
    "eval_expr",
    "gauge_fix",
    "generate_nil3",
    "immerse_nil3",
    "immerse_r3",
    "induced_spinor",
    "kt_immerse",
    "mean_curvature_r3",
    "potential_from_spinor",
    "rot3",
    "rot4",
    "run_job_json",
    "segre",
    "spinor_from_weierstrass",
    "__version__",
]
