"""Exact invariants and equivalence of complex plane curve singularities."""

from .branch import (
    BranchParam,
    ChangeLog,
    NormalizedBranch,
    Semigroup,
    ValueSet,
    char_exponents,
    differential_values,
    normalize,
    primitive_reduce,
    semigroup,
    zariski_invariant,
)
from .coeff import GaussianRational, gr, gr_conj, gr_nth_root, gr_root_of_unity_order
from .curves import CurveSet, implicitize, intersection_matrix, intersection_multiplicity, topologically_equivalent
from .normalform import (
    analytic_equivalent,
    analyze_branch,
    conjugate_branch,
    eliminate,
    scaling_orbit_equal,
    smooth_equivalent,
)
from .powerseries import TruncatedSeries, comp_inverse, compose, nth_root, unit_root
from .rigidity import LinearTaylorMap, classify_linear_map, constraint_holds, solve_constraints

__version__ = "0.1.0"
