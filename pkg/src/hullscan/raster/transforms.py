"""Crop/resize of ship regions and training-time augmentation.

Images are resampled bilinearly, masks with nearest neighbour so they stay
binary.  Every crop records the parameters needed to map predictions back
to the source frame.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import cv2
import numpy as np

from ..errors import NoShipError, ValidationError
from .sections import BoundaryPair

SHIP_FRAME_W = 640
SHIP_FRAME_H = 480


@dataclass
class CropTransform:
    """Axis-aligned crop + resize, with the inverse map back to the source."""

    x0: int
    y0: int
    crop_w: int
    crop_h: int
    src_w: int
    src_h: int
    out_w: int = SHIP_FRAME_W
    out_h: int = SHIP_FRAME_H

    def map_to_source(self, xy: np.ndarray) -> np.ndarray:
        """Map (x, y) pixel coordinates in the output frame to source pixels."""
        pts = np.asarray(xy, dtype=np.float64)
        sx = self.crop_w / self.out_w
        sy = self.crop_h / self.out_h
        out = np.empty_like(pts)
        out[..., 0] = self.x0 + pts[..., 0] * sx
        out[..., 1] = self.y0 + pts[..., 1] * sy
        return out

    def warp_mask_to_source(self, mask_out: np.ndarray) -> np.ndarray:
        """Nearest-neighbour resize of an output-frame mask back onto the source."""
        crop = cv2.resize(mask_out.astype(np.uint8), (self.crop_w, self.crop_h),
                          interpolation=cv2.INTER_NEAREST)
        full = np.zeros((self.src_h, self.src_w), dtype=np.uint8)
        full[self.y0:self.y0 + self.crop_h, self.x0:self.x0 + self.crop_w] = crop
        return full.astype(bool)

    def warp_labels_to_source(self, labels_out: np.ndarray, fill: int = 0) -> np.ndarray:
        crop = cv2.resize(labels_out.astype(np.uint8), (self.crop_w, self.crop_h),
                          interpolation=cv2.INTER_NEAREST)
        full = np.full((self.src_h, self.src_w), fill, dtype=np.uint8)
        full[self.y0:self.y0 + self.crop_h, self.x0:self.x0 + self.crop_w] = crop
        return full

    def apply_to_mask(self, mask_src: np.ndarray) -> np.ndarray:
        crop = mask_src[self.y0:self.y0 + self.crop_h, self.x0:self.x0 + self.crop_w]
        return cv2.resize(crop.astype(np.uint8), (self.out_w, self.out_h),
                          interpolation=cv2.INTER_NEAREST).astype(bool)

    def apply_to_boundaries(self, b: BoundaryPair) -> BoundaryPair:
        """Re-express source-frame curves in the cropped, resized frame."""
        src_cols = np.arange(b.width, dtype=np.float64)
        out_cols = np.arange(self.out_w, dtype=np.float64)
        # source column sampled by each output column
        sample = self.x0 + out_cols * (self.crop_w / self.out_w)
        y = np.zeros((2, self.out_w))
        valid = np.zeros((2, self.out_w), dtype=bool)
        for i in range(2):
            vcols = src_cols[b.valid[i]]
            if vcols.size == 0:
                continue
            vy = b.y[i][b.valid[i]]
            inside = (sample >= vcols[0]) & (sample <= vcols[-1])
            yi = np.interp(sample, vcols, vy)
            # renormalize: source rows y*src_h relative to the crop window
            yi = (yi * self.src_h - self.y0) / self.crop_h
            ok = inside & (yi >= 0.0) & (yi <= 1.0)
            y[i, ok] = yi[ok]
            valid[i] = ok
        return BoundaryPair(y, valid)


def crop_resize_ship(pixels: np.ndarray, ship_mask: np.ndarray,
                     out_w: int = SHIP_FRAME_W, out_h: int = SHIP_FRAME_H
                     ) -> Tuple[np.ndarray, CropTransform]:
    """Crop the tight bounding box of the ship mask and resize to 640x480."""
    mask = np.asarray(ship_mask).astype(bool)
    if pixels.shape[:2] != mask.shape:
        raise ValidationError(f"mask {mask.shape} not aligned to image {pixels.shape[:2]}")
    rows = np.flatnonzero(mask.any(axis=1))
    cols = np.flatnonzero(mask.any(axis=0))
    if rows.size == 0:
        raise NoShipError("ship mask is empty")
    y0, y1 = int(rows[0]), int(rows[-1]) + 1
    x0, x1 = int(cols[0]), int(cols[-1]) + 1
    crop = pixels[y0:y1, x0:x1]
    resized = cv2.resize(crop, (out_w, out_h), interpolation=cv2.INTER_LINEAR)
    t = CropTransform(x0=x0, y0=y0, crop_w=x1 - x0, crop_h=y1 - y0,
                      src_w=mask.shape[1], src_h=mask.shape[0], out_w=out_w, out_h=out_h)
    return resized, t


@dataclass
class AugmentParams:
    rotation: float = 0.0           # degrees, counter-clockwise
    shift: Tuple[float, float] = (0.0, 0.0)   # (dx, dy) pixels
    channel_flip: bool = False      # RGB -> BGR

    def is_identity(self) -> bool:
        return self.rotation == 0.0 and self.shift == (0.0, 0.0) and not self.channel_flip


MAX_ROTATION_DEG = 8.0
MAX_SHIFT_FRAC = 0.05


def _check_params(params: AugmentParams, shape, max_rotation: float, max_shift_frac: float):
    if abs(params.rotation) > max_rotation:
        raise ValidationError(f"rotation {params.rotation} exceeds +/-{max_rotation} degrees")
    h, w = shape[:2]
    dx, dy = params.shift
    if abs(dx) > max_shift_frac * w or abs(dy) > max_shift_frac * h:
        raise ValidationError(f"shift {params.shift} exceeds +/-{max_shift_frac:.0%} of image size")


def augment(pixels: np.ndarray, boundaries: Optional[BoundaryPair], params: AugmentParams,
            max_rotation: float = MAX_ROTATION_DEG, max_shift_frac: float = MAX_SHIFT_FRAC
            ) -> Tuple[np.ndarray, Optional[BoundaryPair]]:
    """Rotate/shift an image and its boundary curves consistently.

    Channel flip reverses RGB order and leaves geometry untouched.  Columns
    whose transformed curve leaves the frame are invalidated.
    """
    _check_params(params, pixels.shape, max_rotation, max_shift_frac)
    h, w = pixels.shape[:2]

    out = pixels
    out_b = boundaries.copy() if boundaries is not None else None

    if params.rotation != 0.0 or params.shift != (0.0, 0.0):
        m = cv2.getRotationMatrix2D((w / 2.0, h / 2.0), params.rotation, 1.0)
        m[0, 2] += params.shift[0]
        m[1, 2] += params.shift[1]
        out = cv2.warpAffine(pixels, m, (w, h), flags=cv2.INTER_LINEAR,
                             borderMode=cv2.BORDER_REFLECT_101)
        if boundaries is not None:
            out_b = _transform_boundaries(boundaries, m, h, w)
    else:
        out = pixels.copy()

    if params.channel_flip:
        out = out[..., ::-1].copy()
    return out, out_b


def _transform_boundaries(b: BoundaryPair, m: np.ndarray, h: int, w: int) -> BoundaryPair:
    y = np.zeros((2, w))
    valid = np.zeros((2, w), dtype=bool)
    for i in range(2):
        cols = np.flatnonzero(b.valid[i])
        if cols.size == 0:
            continue
        px = cols.astype(np.float64)
        py = b.y[i][cols] * h
        tx = m[0, 0] * px + m[0, 1] * py + m[0, 2]
        ty = m[1, 0] * px + m[1, 1] * py + m[1, 2]
        order = np.argsort(tx)
        tx, ty = tx[order], ty[order]
        out_cols = np.arange(w, dtype=np.float64)
        inside = (out_cols >= tx[0]) & (out_cols <= tx[-1])
        yi = np.interp(out_cols, tx, ty)
        ok = inside & (yi >= 0.0) & (yi <= h)
        y[i, ok] = yi[ok] / h
        valid[i] = ok
    # rotation can locally swap interpolated curves; restore the ordering
    both = valid[0] & valid[1]
    y[1, both] = np.maximum(y[0, both], y[1, both])
    return BoundaryPair(y, valid)
