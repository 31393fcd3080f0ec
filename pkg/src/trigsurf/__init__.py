"""Periods, lattice certificates and moduli counts for minimal surfaces
built from trigonal curves ``w**3 = p(z)``."""

from .curve import (OMEGA, Differential, Seed, SurfacePoint, TrigonalCurve, continue_branch,
                    curve_from_roots, deck_transform, eval_differential, sextic_curve)
from .errors import *  # noqa: F401,F403
from .immersion import (ImmersionMatrix, SectionPair, WeierstrassData, check_common_zeros,
                        check_conformality, holomorphy_test, immerse, veronese)
from .kernels import available_backends, backend_name, use_backend
from .lattice import (AngleFamily, IntMatrix, LatticeBasis, RatMatrix, extended_gcd,
                      lattice_invariant_under, property_p_certificate, rational_rank,
                      verify_factorization, verify_property_p)
from .moduli import ComponentSpec, DimensionReport, brill_noether, component_dimension, \
    gonal_locus_dimension
from .periods import (Cycle, CycleSegment, PeriodMatrix, ReferenceConstants, builtin_cycles,
                      integrate_along, period_matrix, reference_constants)

__version__ = "0.1.0"
