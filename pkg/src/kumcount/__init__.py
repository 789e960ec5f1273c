"""Exact component counts for moduli of polarised generalised Kummer type manifolds."""
from .arith import (
    ProfileInvariants,
    derive_profile,
    euler_phi,
    factorize,
    is_quadratic_residue,
    rho,
    split_w,
    valid_divisibilities,
)
from .components import (
    CountResult,
    PairClass,
    build_pair_lattice,
    congruence_eq2_holds,
    count_components_closed_form,
    count_components_oracle,
    count_embedding_orbit_classes,
    count_marked_components,
    enumerate_component_classes,
    isotropy_holds,
    pairs_isometric,
)
from .errors import ConsistencyError, DomainError, InvalidProfileError
from .lattice import DiscriminantClass, IntegerIsometry, KummerLattice

__version__ = "0.1.0"
