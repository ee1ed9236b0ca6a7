"""Number fields with certified embeddings, root isolation and interval arithmetic."""

from .intervals import Interval, Rect
from .roots import RootBox, root_isolation, refine_box, count_real_roots, roots_in_box
from .field import NumberField, NFElement, NFVector, nf_embed, kernel_over_K, rational_coordinates
from .transcendental import KPoly, TElement, TransExt, transcendental_coordinates

__all__ = [
    "Interval", "Rect", "RootBox", "root_isolation", "refine_box", "count_real_roots", "roots_in_box",
    "NumberField", "NFElement", "NFVector", "nf_embed", "kernel_over_K", "rational_coordinates",
    "KPoly", "TElement", "TransExt", "transcendental_coordinates",
]
