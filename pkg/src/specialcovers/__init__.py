"""Exact classification of special degeneration data of metacyclic covers
of the projective line in characteristic p."""

from .ff import Field, FieldElement, embed, field, frobenius_inverse, kth_root
from .poly import (Polynomial, binom_mod_p, coeff, is_squarefree,
                   product_of_linear_powers, roots_in_extensions)
from .cover import (INF, CoverType, EigenDifferential, DegreeMismatchError,
                    divisor_of, eigen_basis, eigen_with_divisor, genus,
                    ram_data, validate_type)
from .cartier import (SemilinearMap, cartier_apply, cartier_matrix, is_exact,
                      logarithmic_space, minimal_working_degree,
                      verify_nonexactness)
from .degen import (ClassificationError, FourPointForm,
                    SpecialDegenerationDatum, canonical_key,
                    classify_r4_counts, classifying_polynomial,
                    datum_position_polynomial, enumerate_r4, enumerate_types,
                    equivalent, mu_normalize, normalized_lambda,
                    search_bruteforce, validate_datum)
from .tree import (EdgeInvariants, HurwitzTree, TreeEdge, assign_a_labels,
                   edge_invariants, median_vertex, nu_from_leaves,
                   shape_verdict, star_tree, validate_decorations)
from .invariants import (conductor, disk_radius, chain_radius,
                         invariant_report, moduli_degree, monodromy,
                         upper_jump, vanishing_cycle_check)

__version__ = "0.1.0"
