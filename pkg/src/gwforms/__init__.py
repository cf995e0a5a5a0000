"""Exact-arithmetic bilinear forms, symplectic factorizations, Koszul
duality, and Grassmannian chart geometry over commutative rings."""

__version__ = "0.1.0"

from .errors import AlgebraError
from .forms import (
    BilinearSpace,
    FormFlavor,
    Isometry,
    check_isometry,
    embed_into_hyperbolic,
    hyperbolic,
    hyperbolic_of_rank,
    lower_decompose,
    orthogonal_sum,
    shuffle_isometry,
    standardize_symplectic,
    tensor_hyperbolic_isometry,
    tensor_product,
)
from .gw import (
    Decision,
    GWClass,
    IsometryClass,
    WittDecomposition,
    decide_isometry,
    diagonalize_symmetric,
    gw_add,
    gw_equal,
    gw_negate,
    gw_normalize,
    hyperbolic_multiple,
    ksp0_class,
    stable_isometry_test,
    witt_decompose,
)
from .koszul import (
    ChainComplex,
    ChainMap,
    DualityForm,
    borel_class_chart,
    compare_borel_thom,
    contracting_homotopy,
    dual_shifted,
    koszul_complex,
    tensor_with_forms,
    theta_form,
    thom_class_trivial_line,
)
from .matrices import Matrix, determinant, inverse_if_unit, is_unit
from .rings import (
    GF,
    QQ,
    ZZ,
    PolyRing,
    Ring,
    RingElement,
    Zmod,
    coerce,
    extend_with_variables,
    invert_variable,
)
from .symplectic import (
    HomotopyPath,
    SymplecticMatrix,
    Transvection,
    block_swap,
    factor_into_transvections,
    homotopy_witness,
    is_symplectic,
    stabilize,
)

__all__ = [name for name in dir() if not name.startswith("_")]
