"""Exact-arithmetic engine for graded logarithmic-derivative calculus.

Word algebra over a finite alphabet with unshuffle coproduct and antipode,
enveloping algebras in normal form, weight-theta Rota-Baxter recursions, and
Magnus-type operator series, all computed over exact rationals.
"""

from .core_tensor import (
    GradedEndo,
    TensorElt,
    TensorElt2,
    antipode,
    bracket,
    concat_mul,
    convolve,
    is_primitive,
    letter_elt,
    lyndon_bracketing,
    lyndon_words,
    unshuffle,
    word_elt,
)
from .dynkin import LetterDerivation, apply_derivation, dynkin_bracket, \
    dynkin_convolution, lie_project
from .enveloping import (
    LiePresentation,
    PBWElement,
    exp_truncated,
    free_lie_presentation,
    log_truncated,
    pbw_antipode,
    pbw_coproduct,
    pbw_mul,
    witt_presentation,
)
from .errors import ParseError, PreconditionError, PresentationError
from .magnus import bernoulli, dynkin_inverse, magnus_forward, magnus_solve
from .ode_demo import LambdaSeries, MatrixPoly, magnus_relation_check, \
    omega_log, picard_matrix, prelie_time
from .rota_baxter import RBContext, atkinson_solve, logderiv_terms, picard_terms, \
    prelie, prelie_solve

__version__ = "0.1.0"
