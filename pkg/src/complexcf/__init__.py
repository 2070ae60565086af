"""Complex continued fractions over the five Euclidean imaginary quadratic rings."""

from .algebraic import (
    AlgebraicValue,
    Cmp,
    ExtElt,
    SurdSpec,
    SurdState,
    approximate,
    cmp_abs2,
    make_surd,
    moebius_image,
    square_in_K,
    states_equal,
)
from .diophantine import (
    AllBad,
    CircleSpec,
    HasRationalPoint,
    circle_form,
    circle_point_surd,
    classify_circle,
    congruence_obstruction,
    is_norm,
    separating_circle,
)
from .errors import *  # noqa: F401,F403
from .expansion import (
    Composite,
    CycleReport,
    Expansion,
    FarthestWithin,
    NearestEven,
    NearestInteger,
    Script,
    StepRecord,
    approx_quality,
    detect_cycle,
    expand,
    identity_residual,
    iterate,
    mono_criterion,
    neat_indices,
    periodic_to_surd,
    q_norms_increase,
    recurrence_indices,
    relative_errors,
    step,
    substituted_sqrt2_chooser,
)
from .forms import (
    Circle,
    Empty,
    FormMatrix,
    Line,
    OrbitReport,
    Point,
    Sigma,
    classify_zero_set,
    entry_bound,
    eval_form,
    hermitian_quotient_bound,
    neat_radius,
    orbit,
    surd_to_form,
    transform,
)
from .intervals import ComplexInterval, RealInterval
from .rings import (
    KElt,
    RingElt,
    RingId,
    covering_radius,
    covering_radius_sq,
    elements_within,
    nearest_elements,
    norm,
    units,
)

__version__ = "0.1.0"
