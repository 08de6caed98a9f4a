"""Exact Hochschild, cyclic and negative cyclic homology of small algebras.

Also a mechanical check of the resolution of the constant cocyclic module
by the staircase bicomplex ``K``, evaluated at each object of the cyclic
category.
"""

from .rings import GF, QQ, ZZ, RingSpec
from .matrix import SparseMatrix
from .linalg import HomologyGroup, invariant_factors, rank, smith_normal_form
from .complexes import Bicomplex, ChainComplex, TruncationWindow, homology, totalize
from .lambda_cat import LambdaMorphism, compose, hom_count, hom_set, representable_module
from .cyclic_module import CyclicModule, OperatorBundle, derived_operators, hochschild_chain_complex
from .hochschild import AlgebraPresentation, cyclic_nerve, validate_algebra
from .cyclic_homology import HomologyTable, bc_bicomplex, bn_bicomplex, hc, hh, hn, periodicity_map, sbi_check
from .mixed import K, MixedComplex, QkResolution, hom_qk, kassel_iso_check, tensor_qk

__version__ = "0.1.0"
