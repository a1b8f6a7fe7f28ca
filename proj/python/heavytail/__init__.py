"""Parameter-free online learning under heavy-tailed gradient noise.

Thin re-export of the compiled extension.  Installed wheels place the
extension inside this package; in-tree builds put it on ``PYTHONPATH``
next to the build directory, hence the fallback import.
"""

try:
    from ._heavytail import *  # noqa: F401,F403
    from ._heavytail import __doc__ as _ext_doc  # noqa: F401
except ImportError:  # in-tree build: extension is a top-level module
    from _heavytail import *  # noqa: F401,F403

__all__ = [
    "Domain",
    "BaseLearner",
    "PsiConstants",
    "compute_psi_constants",
    "clip",
    "clip_vector",
    "default_clip_threshold",
    "ClippedMomentBounds",
    "clipped_moment_bounds",
    "CompositeConfig",
    "SolveInfo",
    "CompositeLearner",
    "composite_regret_bound_rhs",
    "ClippedConfig",
    "ClippedLearner",
    "DirectionLearner",
    "ReductionConfig",
    "DimensionFreeLearner",
    "EnvelopeInputs",
    "scalar_envelope",
    "vector_envelope",
    "sum_squares_envelope",
    "FixedParamBounds",
    "fixed_param_bounds",
    "HeavytailError",
]
