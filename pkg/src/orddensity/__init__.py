"""Densities of primes with prescribed multiplicative order and index
conditions: exact cyclotomic-Kummer degrees, truncated density series,
totient-series bounds, and empirical prime scans."""

from .arith import (
    FactoredRational,
    ResourceCapError,
    SpfTable,
    euler_phi,
    factorize,
    kronecker,
    moebius,
    multiplicative_order,
    segmented_primes,
)
from .cyclo import (
    QuadraticConductor,
    RadicalValue,
    fixed_by,
    is_power_in_cyclotomic,
    radical_product,
    signed_squarefree_part,
    sqrt_in_cyclotomic,
)
from .density import (
    ConditionSpec,
    DensityResult,
    IndexFixed,
    IndexSet,
    OrderAP,
    SetDescriptor,
    index_density_fixed,
    index_density_set,
    order_density,
    tail_estimate,
)
from .empirical import (
    DiagnosticReport,
    ScanResult,
    compare,
    large_index_diagnostic,
    scan,
    scan_many,
    splitting_fraction,
)
from .eulerseries import TailReport, gcd_phi_sum, lcm_phi_sum, phi_lcm_tail
from .kummer import (
    FieldSpec,
    KummerBound,
    RelationGroup,
    count_automorphisms,
    discriminant_bound,
    failure_ratio,
    kummer_degree,
    relation_group,
)

__version__ = "0.1.0"

__all__ = [
    "FactoredRational",
    "ResourceCapError",
    "SpfTable",
    "factorize",
    "moebius",
    "euler_phi",
    "kronecker",
    "multiplicative_order",
    "segmented_primes",
    "QuadraticConductor",
    "RadicalValue",
    "signed_squarefree_part",
    "sqrt_in_cyclotomic",
    "is_power_in_cyclotomic",
    "radical_product",
    "fixed_by",
    "FieldSpec",
    "RelationGroup",
    "KummerBound",
    "relation_group",
    "kummer_degree",
    "failure_ratio",
    "count_automorphisms",
    "discriminant_bound",
    "TailReport",
    "phi_lcm_tail",
    "gcd_phi_sum",
    "lcm_phi_sum",
    "ConditionSpec",
    "SetDescriptor",
    "OrderAP",
    "IndexFixed",
    "IndexSet",
    "DensityResult",
    "index_density_fixed",
    "index_density_set",
    "order_density",
    "tail_estimate",
    "ScanResult",
    "DiagnosticReport",
    "scan",
    "scan_many",
    "splitting_fraction",
    "large_index_diagnostic",
    "compare",
]
