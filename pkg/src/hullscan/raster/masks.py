"""Binary mask containers and algebra."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, Mapping

import numpy as np

from ..errors import ValidationError

#: Defect classes in mask-storage order.
DEFECT_CLASSES = ("corrosion", "delamination", "fouling")


def _as_bool(mask: np.ndarray) -> np.ndarray:
    arr = np.asarray(mask)
    if arr.dtype != np.bool_:
        arr = arr.astype(bool)
    return arr


def mask_union(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Pixelwise OR of two binary rasters of equal shape."""
    if a.shape != b.shape:
        raise ValidationError(f"mask shapes differ: {a.shape} vs {b.shape}")
    return np.logical_or(_as_bool(a), _as_bool(b))


def mask_intersection(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Pixelwise AND of two binary rasters of equal shape."""
    if a.shape != b.shape:
        raise ValidationError(f"mask shapes differ: {a.shape} vs {b.shape}")
    return np.logical_and(_as_bool(a), _as_bool(b))


@dataclass
class MaskSet:
    """Per-class binary rasters aligned to one image.

    Classes may overlap: a pixel can carry corrosion and fouling at once.
    """

    masks: Dict[str, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        self.masks = {k: _as_bool(v) for k, v in self.masks.items()}
        shapes = {m.shape for m in self.masks.values()}
        if len(shapes) > 1:
            raise ValidationError(f"mask shapes differ across classes: {shapes}")

    @classmethod
    def empty(cls, shape: tuple, classes: Iterable[str] = DEFECT_CLASSES) -> "MaskSet":
        return cls({c: np.zeros(shape, dtype=bool) for c in classes})

    @property
    def classes(self) -> tuple:
        return tuple(self.masks)

    @property
    def shape(self) -> tuple:
        for m in self.masks.values():
            return m.shape
        return ()

    def get(self, name: str) -> np.ndarray:
        return self.masks[name]

    def union_all(self) -> np.ndarray:
        """OR over every class; all-zero raster for an empty set."""
        out = None
        for m in self.masks.values():
            out = m.copy() if out is None else np.logical_or(out, m)
        if out is None:
            raise ValidationError("union_all on a MaskSet with no classes")
        return out

    def union(self, other: "MaskSet") -> "MaskSet":
        if self.classes != other.classes:
            raise ValidationError(f"class sets differ: {self.classes} vs {other.classes}")
        return MaskSet({c: mask_union(self.masks[c], other.masks[c]) for c in self.classes})

    def intersection(self, other: "MaskSet") -> "MaskSet":
        if self.classes != other.classes:
            raise ValidationError(f"class sets differ: {self.classes} vs {other.classes}")
        return MaskSet({c: mask_intersection(self.masks[c], other.masks[c]) for c in self.classes})

    def copy(self) -> "MaskSet":
        return MaskSet({c: m.copy() for c, m in self.masks.items()})

    def crop(self, r0: int, r1: int, c0: int, c1: int) -> "MaskSet":
        return MaskSet({c: m[r0:r1, c0:c1].copy() for c, m in self.masks.items()})

    def stack(self, order: Iterable[str] = DEFECT_CLASSES) -> np.ndarray:
        return np.stack([self.masks[c] for c in order])

    @classmethod
    def from_stack(cls, stack: np.ndarray, order: Iterable[str] = DEFECT_CLASSES) -> "MaskSet":
        return cls({c: stack[i] for i, c in enumerate(order)})

    def counts(self) -> Mapping[str, int]:
        return {c: int(m.sum()) for c, m in self.masks.items()}
