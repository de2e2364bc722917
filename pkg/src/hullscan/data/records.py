"""Dataset record types."""

from __future__ import annotations

from dataclasses import dataclass, field, asdict
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from ..errors import ValidationError
from ..raster import BoundaryPair, MaskSet, DEFECT_CLASSES

SPLITS = ("train", "val", "test")

#: Classifier label order: (corrosion, fouling, delamination).
CLS_LABEL_ORDER = ("corrosion", "fouling", "delamination")


@dataclass
class ImageRecord:
    """An RGB raster plus its annotations and provenance metadata."""

    id: str
    pixels: np.ndarray                      # H x W x 3 uint8
    ship_mask: Optional[np.ndarray] = None  # H x W bool
    boundaries: Optional[BoundaryPair] = None
    defect_masks: Optional[MaskSet] = None
    split: str = "train"
    meta: Dict = field(default_factory=dict)

    def validate(self):
        if self.pixels.ndim != 3 or self.pixels.shape[2] != 3:
            raise ValidationError(f"pixels must be HxWx3, got {self.pixels.shape}")
        if self.split not in SPLITS:
            raise ValidationError(f"unknown split {self.split!r}")
        h, w = self.pixels.shape[:2]
        if self.ship_mask is not None and self.ship_mask.shape != (h, w):
            raise ValidationError(f"ship mask {self.ship_mask.shape} not aligned to {h}x{w}")
        if self.boundaries is not None and self.boundaries.width != w:
            raise ValidationError(f"boundary width {self.boundaries.width} != image width {w}")
        if self.defect_masks is not None:
            if self.defect_masks.shape != (h, w):
                raise ValidationError(
                    f"defect masks {self.defect_masks.shape} not aligned to {h}x{w}")
            if self.ship_mask is not None:
                ship = self.ship_mask.astype(bool)
                for name, m in self.defect_masks.masks.items():
                    if np.any(m & ~ship):
                        raise ValidationError(f"{name} mask has pixels off the ship")

    @property
    def shape(self) -> Tuple[int, int]:
        return self.pixels.shape[:2]


@dataclass
class Patch:
    """A fixed-size crop with multi-label ground truth.

    labels follow CLS_LABEL_ORDER; roi_ratio is the fraction of the patch
    covered by the region-of-interest raster it was selected from.
    """

    pixels: np.ndarray
    labels: Tuple[int, int, int]
    roi_ratio: float
    origin: Tuple[int, int]            # (row, col) of the tile in the source grid
    source_id: str
    masks: Optional[MaskSet] = None    # cropped per-class masks (segmentation patches)
    roi: Optional[np.ndarray] = None   # cropped RoI raster (classification patches)

    @property
    def size(self) -> int:
        return self.pixels.shape[0]


@dataclass
class BlobSpec:
    """How many defect blobs of one class to place, and how they look."""

    count: int = 0
    size_range: Tuple[float, float] = (8.0, 24.0)   # blob half-size in pixels
    irregularity: float = 0.45                       # radial wobble of the outline
    shape: str = "irregular"                         # "irregular" or "rect"
    centers: Optional[Sequence[Tuple[int, int]]] = None  # fixed (row, col) placements

    def validate(self, name: str):
        if self.count < 0:
            raise ValidationError(f"blobs[{name}].count must be >= 0")
        lo, hi = self.size_range
        if not (0 < lo <= hi):
            raise ValidationError(f"blobs[{name}].size_range must satisfy 0 < lo <= hi")
        if self.shape not in ("irregular", "rect"):
            raise ValidationError(f"blobs[{name}].shape must be 'irregular' or 'rect'")
        if not (0.0 <= self.irregularity <= 1.0):
            raise ValidationError(f"blobs[{name}].irregularity must be in [0, 1]")


def _default_blobs() -> Dict[str, BlobSpec]:
    return {
        "corrosion": BlobSpec(count=3),
        "delamination": BlobSpec(count=2),
        "fouling": BlobSpec(count=2),
    }


@dataclass
class SceneSpec:
    """Deterministic recipe for one synthetic vessel scene.

    The seed fully determines the output; two calls with an equal spec
    produce byte-identical rasters.
    """

    height: int = 480
    width: int = 640
    hull_margin: float = 0.06     # left/right gap, fraction of width
    hull_top: float = 0.16        # deck line, fraction of height
    hull_bottom: float = 0.90     # keel line, fraction of height
    sheer: float = 0.03           # deck bows down amidships by this fraction
    keel_rise: float = 0.04       # keel lifts at bow/stern by this fraction
    band_fractions: Tuple[float, float] = (0.32, 0.24)   # TS, BT share of hull height
    blobs: Dict[str, BlobSpec] = field(default_factory=_default_blobs)
    overlap_prob: float = 0.0     # chance a non-corrosion blob is seeded on existing defects
    delamination_contrast: float = 1.0   # 1 = easy pale patches, smaller = subtler
    label_dropout: float = 0.0    # fraction of blobs omitted from the emitted label masks
    background: str = "water"     # water | dock | plain
    noise_level: float = 0.02
    seed: int = 0

    def validate(self):
        if self.height <= 0 or self.width <= 0:
            raise ValidationError("height/width must be positive")
        if not (0.0 <= self.hull_margin < 0.5):
            raise ValidationError("hull_margin out of range [0, 0.5)")
        if not (0.0 <= self.hull_top < self.hull_bottom <= 1.0):
            raise ValidationError("hull_top/hull_bottom must satisfy 0 <= top < bottom <= 1")
        f1, f2 = self.band_fractions
        if f1 < 0 or f2 < 0:
            raise ValidationError("band_fractions must be non-negative")
        if f1 + f2 > 1.0 + 1e-12:
            raise ValidationError("band_fractions must sum to <= 1")
        for name, spec in self.blobs.items():
            if name not in DEFECT_CLASSES:
                raise ValidationError(f"unknown defect class in blobs: {name!r}")
            spec.validate(name)
        if not (0.0 <= self.overlap_prob <= 1.0):
            raise ValidationError("overlap_prob must be in [0, 1]")
        if not (0.0 <= self.label_dropout <= 1.0):
            raise ValidationError("label_dropout must be in [0, 1]")
        if not (0.0 < self.delamination_contrast <= 1.0):
            raise ValidationError("delamination_contrast must be in (0, 1]")
        if self.background not in ("water", "dock", "plain"):
            raise ValidationError(f"unknown background style {self.background!r}")
        if self.noise_level < 0:
            raise ValidationError("noise_level must be >= 0")

    def to_json_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json_dict(cls, d: dict) -> "SceneSpec":
        d = dict(d)
        blobs = {k: BlobSpec(**{**v, "size_range": tuple(v["size_range"]),
                                "centers": ([tuple(c) for c in v["centers"]]
                                            if v.get("centers") else None)})
                 for k, v in d.pop("blobs", {}).items()}
        d["band_fractions"] = tuple(d["band_fractions"])
        return cls(blobs=blobs, **d)
