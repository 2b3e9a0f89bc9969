"""Exact Witt rings of diagonal and separable forms of degree d >= 3.

Forms over finite fields (and over abstract finite power-class groups) are
modelled by multisets of power classes; Witt classes are canonical reduced
multisets, and the group ring Z[G]/(N_H) gives an independent lattice model.
"""

from .diagform import DiagonalForm, WittClass, parse_form
from .errors import DomainError
from .ffield import FieldCtx, PowerClassGroup, extend, make_field
from .groupring import AbGroup, GroupRingElement
from .sepform import SeparableForm, TransferSymbol

__all__ = [
    "AbGroup",
    "DiagonalForm",
    "DomainError",
    "FieldCtx",
    "GroupRingElement",
    "PowerClassGroup",
    "SeparableForm",
    "TransferSymbol",
    "WittClass",
    "extend",
    "make_field",
    "parse_form",
]

__version__ = "0.1.0"
