"""Zigzag Hochschild complexes with Chen-type iterated integrals.

Exact rational arithmetic for the complexes and their identities;
floating-point quadrature, transport ODEs, and holonomy on top.
"""

from .chains import Chain
from .forms import (
    PolyMatrixForm,
    curvature,
    exterior_d,
    form_from_literal,
    form_to_literal,
    graded_bracket,
    wedge,
)
from .poly import Poly, parse_poly
from .entries import FormAtom, SplitAtom, expand_form, split_entry
from .zigzag import (
    Shuffle,
    ZigzagMonomial,
    shuffle_sign,
    shuffles,
    unit_chain,
    zigzag_chain,
    zz_D,
    zz_b,
    zz_d,
    zz_shuffle,
)
from .interval import (
    IntervalMonomial,
    collapse,
    collapse_mat,
    interval_chain,
    interval_D,
    interval_shuffle_comm,
    interval_shuffle_mat,
)
from .curved import (
    CurvedContext,
    DEFAULT_CONVENTION,
    SignConvention,
    c_component,
    curved_D,
    nabla_component,
    search_conventions,
)
from .rect import (
    DEFAULT_RECT_CONVENTION,
    RectMonomial,
    RectSignConvention,
    rect_chain,
    rect_curved_D,
    rect_D,
    search_rect_conventions,
    star,
)
from .families import (
    BigonFamily,
    PathFamily,
    bigon_from_literal,
    line_integral_exact,
    path_from_literal,
    surface_integral_exact,
)
from .quadrature import QuadratureSpec
from .itint import (
    algebra_map_residual,
    chain_map_residual,
    d_param,
    it_interval,
    it_rect,
    it_zz,
)
from .transport import (
    holonomy1,
    it_curved,
    parallel_transport,
    transport_word,
)
from .surface import (
    expb_term,
    holonomy2,
    it_rect_curved,
    ode_holonomy2,
)

__version__ = "0.1.0"
