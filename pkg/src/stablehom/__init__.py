"""Exact computations in the stable module category of graded quotient rings.

The package decides whether a module homomorphism is represented by
monomorphisms, constructs the canonical perfect short exact sequence when it
is, and verifies the torsionless/representability equivalences on concrete
inputs.  Everything is exact: rational or prime-field coefficients, Groebner
bases for normal forms, syzygies and lifts.
"""

__version__ = "0.1.0"

from .errors import (  # noqa: F401
    IllDefinedMap,
    InhomogeneousEntry,
    InhomogeneousIdeal,
    NonPrimeModulus,
    NotAComplex,
    NotRbm,
    ParseFailure,
    ResourceLimitExceeded,
    StablehomError,
    WindowTooSmall,
)
from .scalars import GF, QQ, Scalar  # noqa: F401
from .poly import MonomialOrder, Poly, compare, parse_poly, format_poly, poly_arith  # noqa: F401
from .ring import RingCtx, make_ring  # noqa: F401
from .fmod import (  # noqa: F401
    FreeMap,
    FreeModule,
    ModMap,
    Presentation,
    betti_table,
    dual_map,
    dual_module,
    ext,
    free_presentation,
    is_zero_module,
    kernel,
    cokernel,
    minimize,
    presentation_from_matrix,
    resolve,
    strip_free_summands,
    syzygy,
    transpose,
    validate_map,
)
from .complexes import ChainMap, Complex, cone, dual_complex, homology, is_exact_everywhere, truncate  # noqa: F401
from .stable import (  # noqa: F401
    PseudoKernelResult,
    RbmResult,
    StableReport,
    StandardResolution,
    ThetaSequence,
    check_stable_iso_certificate,
    ext_dual_vanishes,
    is_perfect_exact,
    is_rbm,
    j2_and_psi,
    kernel_filtration,
    lift_chain_map,
    pseudo_kernel_cokernel,
    rbm_report,
    standard_resolution,
    theta,
    torsionless,
    torsionless_both,
)
from .gallery import gallery_names, gallery_ring, property_gallery  # noqa: F401
