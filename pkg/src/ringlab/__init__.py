"""Exact computation of polarity and cleanness properties of small finite rings."""
from .dsl import eval_ring_expr, parse_element, parse_ring_expr, render
from .errors import (ArithmeticOverflowError, CapExceededError, CertificateInvalidError,
                     DSLSemanticError, DSLSyntaxError, ElementParseError,
                     InternalInconsistencyError, InvalidIdealError, InvalidParameterError,
                     RingLabError, RingMismatchError)
from .polarity import (CLASS_NAMES, PROPERTY_ORDER, PolarityCertificate, PropertyReport,
                       classify_ring, clean_family_element, conjugate_certificate,
                       jqp_element, quasipolar_element, six_in_j_gate,
                       spectral_idempotent_uniqueness, two_in_j, validate_certificate,
                       weakly_jqp_element)
from .rings import (DEFAULT_CLASSIFY_MAX_ORDER, DEFAULT_MAX_ORDER, Element, FiniteRing,
                    make_corner, make_matrix_ring, make_product, make_quotient,
                    make_triangular_ring, make_zn, ring_arith)
from .structure import (center, commutant, double_commutant, idempotents, is_qnil,
                        jacobson_radical, j_sharp, qnil_set, radical_quotient,
                        structural_predicates, units)
from .theorems import (Mat2, integer_m2_classify, m2_diagonal_classify, m2_idempotent_forms,
                       m2_quadratic_classify, m2_trace_det_obstruction, m2_unit_criterion,
                       t2_fast_classify, t2_idempotent_forms)
from .verify import BUILTIN_CORPUS, CHECKS, verify_corpus

__version__ = "0.1.0"
