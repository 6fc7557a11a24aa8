"""Certified construction of Anti M-Weierstrass function sequences.

A sequence is Anti M-Weierstrass (AMW) when its series converges absolutely
and uniformly while the series of sup norms diverges.
"""
from .errors import AmwError, DomainError, ParameterError, PreconditionError
from .realfn import (UNIT, Interval, NormEnclosure, RealFn, classic_bump, constant, evaluate,
                     exp_fn, fn_equal_sampled, power, scaled_sum, sup_norm, transplant, zero_fn)
from .poly import Polynomial, PolyNoConst
from .scalarseq import (MembershipCert, ScalarSeq, apply_poly, classify, make_logpower, make_power)
from .construct import (FnSeq, Partition, build_jlambda, check_family_f, classic_example,
                        default_partition)
from .series import AMWCertificate, c00_perturb, certify_amw, lemma22_uniform_oracle, tail_sup_disjoint
from .spaces import (ProductFamily, build_spaceable_family, build_thm31_family, build_thm32_family,
                     independence_rank, isometry_check, remark37_norm, scale_product)
from .algebra import (AlgebraSpec, build_thm43, build_thm45, certify_algebra_element, expand_affine,
                      freeness_check, poly_combine)

__version__ = "0.1.0"
