"""Mask algebra, boundary/section geometry, coverage, and augmentation."""

from .._kernels import BACKGROUND, BT, TS, VS, active_backend
from .masks import DEFECT_CLASSES, MaskSet, mask_intersection, mask_union
from .sections import (
    SECTION_IDS,
    SECTION_NAMES,
    BoundaryPair,
    DefectReport,
    boundaries_to_section_map,
    coverage,
    section_pixel_counts,
    suppress_ts_fouling,
)
from .transforms import (
    MAX_ROTATION_DEG,
    MAX_SHIFT_FRAC,
    SHIP_FRAME_H,
    SHIP_FRAME_W,
    AugmentParams,
    CropTransform,
    augment,
    crop_resize_ship,
)

__all__ = [
    "BACKGROUND", "TS", "BT", "VS", "active_backend",
    "DEFECT_CLASSES", "MaskSet", "mask_union", "mask_intersection",
    "SECTION_IDS", "SECTION_NAMES", "BoundaryPair", "DefectReport",
    "boundaries_to_section_map", "coverage", "section_pixel_counts", "suppress_ts_fouling",
    "MAX_ROTATION_DEG", "MAX_SHIFT_FRAC", "SHIP_FRAME_H", "SHIP_FRAME_W",
    "AugmentParams", "CropTransform", "augment", "crop_resize_ship",
]
