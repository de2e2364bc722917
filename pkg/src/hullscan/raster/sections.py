"""Boundary curves, section maps, coverage, and the TS-fouling rule.

A vessel's hull is split into three horizontal sections (TS above BT above
VS) by two per-column boundary curves.  Curves are stored normalized: a
value y in [0, 1] corresponds to pixel row y * H, so curves survive
resizing.  A validity mask marks the columns where each boundary actually
exists; a boundary whose validity row is all zero is absent (images may
show one or zero boundaries).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np

from .. import _kernels
from .._kernels import BACKGROUND, BT, TS, VS
from ..errors import ValidationError
from .masks import DEFECT_CLASSES, MaskSet

SECTION_NAMES = {TS: "TS", BT: "BT", VS: "VS"}
SECTION_IDS = {"TS": TS, "BT": BT, "VS": VS}

BOUNDARY_JSON_VERSION = 1


@dataclass
class BoundaryPair:
    """Two per-column boundary curves (TS/BT and BT/VS) with validity.

    y:     (2, W) float, normalized vertical position in [0, 1]
    valid: (2, W) bool, which columns of each boundary exist
    """

    y: np.ndarray
    valid: np.ndarray

    def __post_init__(self):
        self.y = np.asarray(self.y, dtype=np.float64)
        self.valid = np.asarray(self.valid, dtype=bool)
        if self.y.shape != self.valid.shape or self.y.ndim != 2 or self.y.shape[0] != 2:
            raise ValidationError(
                f"boundary arrays must both be (2, W); got y {self.y.shape}, valid {self.valid.shape}")

    @property
    def width(self) -> int:
        return self.y.shape[1]

    def validate(self, eps: float = 1e-6):
        both = self.valid[0] & self.valid[1]
        if np.any(self.y[0, both] > self.y[1, both] + eps):
            raise ValidationError("upper boundary lies below lower boundary at a valid column")
        if np.any((self.y < -eps) | (self.y > 1 + eps)):
            bad = self.y[(self.y < -eps) | (self.y > 1 + eps)]
            raise ValidationError(f"normalized boundary values outside [0, 1]: {bad[:4]}")

    def copy(self) -> "BoundaryPair":
        return BoundaryPair(self.y.copy(), self.valid.copy())

    @classmethod
    def absent(cls, width: int) -> "BoundaryPair":
        return cls(np.zeros((2, width)), np.zeros((2, width), dtype=bool))

    def to_json_dict(self) -> dict:
        return {
            "format_version": BOUNDARY_JSON_VERSION,
            "y": [self.y[0].tolist(), self.y[1].tolist()],
            "valid": [self.valid[0].astype(int).tolist(), self.valid[1].astype(int).tolist()],
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "BoundaryPair":
        if d.get("format_version") != BOUNDARY_JSON_VERSION:
            raise ValidationError(f"unsupported boundary format_version: {d.get('format_version')}")
        return cls(np.asarray(d["y"], dtype=np.float64), np.asarray(d["valid"], dtype=bool))

    def dumps(self) -> str:
        return json.dumps(self.to_json_dict())

    @classmethod
    def loads(cls, text: str) -> "BoundaryPair":
        return cls.from_json_dict(json.loads(text))


def boundaries_to_section_map(ship_mask: np.ndarray, boundaries: BoundaryPair,
                              default_section: int = VS) -> np.ndarray:
    """Reconstruct the per-pixel TS/BT/VS labeling from the two 1D curves.

    Per column: ship rows above the first curve are TS, rows between the
    curves BT, rows below the second VS.  Invalid columns inherit the
    nearest valid column's value.  An entirely absent boundary collapses
    its two adjacent sections (TS+BT -> BT, BT+VS -> VS); with both absent
    the whole ship takes ``default_section``.
    """
    ship = np.asarray(ship_mask).astype(bool)
    h, w = ship.shape
    if boundaries.width != w:
        raise ValidationError(f"boundary width {boundaries.width} != mask width {w}")

    has1 = bool(boundaries.valid[0].any())
    has2 = bool(boundaries.valid[1].any())

    if not has1 and not has2:
        out = np.zeros(ship.shape, dtype=np.uint8)
        out[ship] = default_section
        return out

    # An absent boundary merges its two adjacent sections into the lower
    # one: no TS/BT curve -> everything above the BT/VS curve is BT; no
    # BT/VS curve -> everything below the TS/BT curve is VS.
    y1 = (_kernels.nearest_valid_fill(boundaries.y[0], boundaries.valid[0])
          if has1 else np.zeros(w))
    y2 = (_kernels.nearest_valid_fill(boundaries.y[1], boundaries.valid[1])
          if has2 else y1.copy())

    # degenerate order fixed by clamping the lower curve
    y2 = np.maximum(y1, y2)
    return _kernels.fill_sections(ship, y1 * h, y2 * h)


def section_pixel_counts(section_map: np.ndarray) -> Dict[str, int]:
    counts = np.bincount(section_map.ravel(), minlength=4)
    return {SECTION_NAMES[s]: int(counts[s]) for s in (TS, BT, VS)}


@dataclass
class DefectReport:
    """Per-section, per-defect coverage percentages for one image.

    Sections with zero area carry no percentages; their ``present`` flag is
    False and aggregation skips them.
    """

    image_id: str
    percentages: Dict[str, Dict[str, Optional[float]]]
    present: Dict[str, bool]
    note: str = ""

    def to_json_dict(self) -> dict:
        return {
            "image_id": self.image_id,
            "percentages": self.percentages,
            "present": self.present,
            "note": self.note,
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "DefectReport":
        return cls(d["image_id"], d["percentages"], d["present"], d.get("note", ""))

    @classmethod
    def empty(cls, image_id: str, note: str = "") -> "DefectReport":
        sections = tuple(SECTION_NAMES.values())
        return cls(
            image_id,
            {s: {c: None for c in DEFECT_CLASSES} for s in sections},
            {s: False for s in sections},
            note,
        )


def coverage(section_map: np.ndarray, defects: MaskSet, image_id: str = "") -> DefectReport:
    """Coverage percentage of each defect class over each hull section.

    percentage = 100 * |defect AND section| / |section|.  Absent sections
    (zero pixels) are flagged and excluded from downstream averaging.
    """
    if defects.shape != section_map.shape:
        raise ValidationError(f"defect masks {defects.shape} not aligned to map {section_map.shape}")
    order = defects.classes
    section_px, inter = _kernels.coverage_counts(section_map, defects.stack(order))
    percentages: Dict[str, Dict[str, Optional[float]]] = {}
    present: Dict[str, bool] = {}
    for sec in (TS, BT, VS):
        name = SECTION_NAMES[sec]
        if section_px[sec] == 0:
            present[name] = False
            percentages[name] = {c: None for c in order}
        else:
            present[name] = True
            percentages[name] = {
                c: 100.0 * inter[k, sec] / section_px[sec] for k, c in enumerate(order)
            }
    return DefectReport(image_id, percentages, present)


def suppress_ts_fouling(section_map: np.ndarray, defects: MaskSet) -> MaskSet:
    """Zero the fouling mask on TS pixels; other classes pass through."""
    if defects.shape != section_map.shape:
        raise ValidationError(f"defect masks {defects.shape} not aligned to map {section_map.shape}")
    out = defects.copy()
    if "fouling" in out.masks:
        out.masks["fouling"] = out.masks["fouling"] & (section_map != TS)
    return out
