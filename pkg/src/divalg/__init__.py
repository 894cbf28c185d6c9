"""divalg: exact arithmetic for orders in rational division algebras.

Core surface: algebra presentations and elements (`algebra`), orders and
their invariants (`orders`, `modalg`), the SO(n)-proximity predicate
(`geometry`), complete enumeration of counting sets (`counting`), exact
counting certificates (`certify`), and the exponent engine (`bounds`).
A FastAPI service (`divalg.service`) wraps the package; the CLI is a thin
client of that service.
"""

from .algebra import (
    CyclicAlgebra,
    Element,
    MatrixAlgebra,
    QuaternionAlgebra,
    division_sanity,
    power_traces_to_charpoly,
    shipped_cyclic_division_algebra,
    shipped_cyclic_field,
)
from .bounds import (
    BoundParams,
    ExponentReport,
    eigenvalue_to_S,
    exponents_eichler_type,
    exponents_prime_degree,
    exponents_quaternion,
    optimize_L_disc,
    optimize_L_spectral,
    pretrace_rhs,
)
from .counting import (
    CountQuery,
    CountResult,
    enumerate_elements,
    fincke_pohst,
    ideal_count_bruteforce,
    ideal_count_formula,
    quadratic_form_at,
)
from .exactmat import Mat, NormalFormResult, hnf, lattice_index, snf
from .geometry import BasePoint, dist_to_so, near_so
from .orders import Order, OrderRelation, congruence_order, order_index, standard_matrix_order

__all__ = [
    "BasePoint",
    "BoundParams",
    "CountQuery",
    "CountResult",
    "CyclicAlgebra",
    "Element",
    "ExponentReport",
    "Mat",
    "MatrixAlgebra",
    "NormalFormResult",
    "Order",
    "OrderRelation",
    "QuaternionAlgebra",
    "congruence_order",
    "dist_to_so",
    "division_sanity",
    "eigenvalue_to_S",
    "enumerate_elements",
    "exponents_eichler_type",
    "exponents_prime_degree",
    "exponents_quaternion",
    "fincke_pohst",
    "hnf",
    "ideal_count_bruteforce",
    "ideal_count_formula",
    "lattice_index",
    "near_so",
    "optimize_L_disc",
    "optimize_L_spectral",
    "order_index",
    "power_traces_to_charpoly",
    "pretrace_rhs",
    "quadratic_form_at",
    "shipped_cyclic_division_algebra",
    "shipped_cyclic_field",
    "snf",
    "standard_matrix_order",
    "division_sanity",
]
