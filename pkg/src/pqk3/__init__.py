"""Classification engine for K3 surfaces arising as minimal models of
quotients (C_1 x C_2)/Z_n, n = p or 2p with p an odd prime at most 19.

Everything is exact: rational arithmetic, cyclotomic field elements,
intersection theory and fixed-locus combinatorics.
"""

from .curves import (
    BranchPoint,
    CurveAction,
    EigenspaceProfile,
    GroupSpec,
    canonicalize,
    dp_curve,
    dp_tau_curve,
    eigenspace_profile,
    enumerate_curves,
    genus,
    intermediate_quotient_genus,
    is_admissible,
    lefschetz_check,
    max_genus_bound,
)
from .cyclotomic import CyclotomicNumber, root_of_unity
from .exact import (
    SingularityInvariants,
    continued_fraction,
    hj_evaluate,
    mod_inverse,
    singularity_invariants,
)
from .minimal_model import (
    FixedLocus,
    build_configuration,
    central_self_intersection,
    contract_to_minimal,
    fixed_locus,
    k3_verdict,
    run_pipeline,
)
from .surfaces import (
    Candidate,
    SurfacePair,
    chern_invariants,
    evaluate_pair,
    full_scan,
    hodge_numbers,
    moduli_dimension,
    pair_admissible,
    scan,
    singularity_multiset,
)

__version__ = "1.0.0"
