"""Synthetic vessel-scene generator with exact ground truth.

Stands in for proprietary inspection photographs: every scene comes with
an exact ship mask, exact section boundary curves, exact per-class defect
masks, and an analytic coverage record in ``meta``.  Output is a pure
function of the SceneSpec (seed included).

Defect blobs are painted into the image even when ``label_dropout`` omits
them from the emitted label masks; regenerating the same spec with
``label_dropout=0`` recovers the complete ground truth over identical
pixels, which is what the weak-label experiments rely on.
"""

from __future__ import annotations

import dataclasses
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy import ndimage

from ..errors import ValidationError
from ..raster import BoundaryPair, MaskSet, DEFECT_CLASSES
from .records import BlobSpec, ImageRecord, SceneSpec

_PALE = np.array([212.0, 206.0, 192.0])

_HULL_BASE = {
    "TS": np.array([72.0, 80.0, 94.0]),
    "BT": np.array([170.0, 66.0, 48.0]),
    "VS": np.array([112.0, 50.0, 44.0]),
}

_BG_STYLES = {
    "water": (np.array([176.0, 196.0, 212.0]), np.array([36.0, 66.0, 92.0])),
    "dock": (np.array([152.0, 148.0, 140.0]), np.array([88.0, 84.0, 78.0])),
    "plain": (np.array([165.0, 165.0, 165.0]), np.array([140.0, 140.0, 140.0])),
}


def _hull_curves(spec: SceneSpec) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-column deck and keel rows for hull columns, plus the column index."""
    h, w = spec.height, spec.width
    x0 = int(round(spec.hull_margin * w))
    x1 = w - x0
    cols = np.arange(x0, x1)
    if cols.size == 0:
        raise ValidationError("hull_margin leaves no hull columns")
    t = (cols - cols[0]) / max(1, cols[-1] - cols[0])
    bow = 4.0 * t * (1.0 - t)              # 0 at the ends, 1 amidships
    top = h * (spec.hull_top + spec.sheer * bow)
    bot = h * (spec.hull_bottom - spec.keel_rise * (1.0 - bow))
    return cols, top, bot


def _smoothed_noise(rng: np.random.Generator, shape, sigma: float) -> np.ndarray:
    field = rng.standard_normal(shape)
    field = ndimage.gaussian_filter(field, sigma)
    std = field.std()
    return field / std if std > 0 else field


def _blob_mask(rng: np.random.Generator, spec: BlobSpec, center: Tuple[int, int],
               size: float, shape: Tuple[int, int]) -> np.ndarray:
    """Rasterize one blob outline inside the full canvas."""
    h, w = shape
    r, c = center
    out = np.zeros(shape, dtype=bool)
    if spec.shape == "rect":
        half = int(round(size))
        out[max(0, r - half):min(h, r + half), max(0, c - half):min(w, c + half)] = True
        return out
    amp = rng.uniform(-1.0, 1.0, size=3)
    phase = rng.uniform(0.0, 2.0 * np.pi, size=3)
    reach = int(np.ceil(size * (1.0 + spec.irregularity) + 2))
    r0, r1 = max(0, r - reach), min(h, r + reach + 1)
    c0, c1 = max(0, c - reach), min(w, c + reach + 1)
    dy = np.arange(r0, r1)[:, None] - r
    dx = np.arange(c0, c1)[None, :] - c
    theta = np.arctan2(dy, dx)
    wobble = sum((amp[k] / (k + 1)) * np.cos((k + 1) * theta + phase[k]) for k in range(3))
    radius = size * np.clip(1.0 + spec.irregularity * wobble, 0.3, None)
    out[r0:r1, c0:c1] = dy * dy + dx * dx <= radius * radius
    return out


def _paint_corrosion(rng, canvas, blob):
    base = np.array([138.0, 72.0, 34.0]) + rng.uniform(-10, 10, size=3)
    mottle = _smoothed_noise(rng, canvas.shape[:2], 2.0)
    pits = _smoothed_noise(rng, canvas.shape[:2], 1.2)
    color = base[None, :] + 46.0 * mottle[blob][:, None]
    color[pits[blob] > 0.9] *= 0.55
    canvas[blob] = color


def _paint_delamination(rng, canvas, blob, contrast: float):
    # paint loss: pale, flat patch close to the hull color, with a darker rim
    alpha = 0.18 + 0.55 * contrast
    rim = blob & ~ndimage.binary_erosion(blob, iterations=2)
    flat = _smoothed_noise(rng, canvas.shape[:2], 3.0)
    mixed = (1.0 - alpha) * canvas[blob] + alpha * _PALE[None, :]
    canvas[blob] = mixed + 6.0 * flat[blob][:, None]
    canvas[rim] *= 0.45 + 0.2 * (1.0 - contrast)


def _paint_fouling(rng, canvas, blob):
    base = np.array([52.0, 98.0, 44.0]) + rng.uniform(-10, 10, size=3)
    clump = _smoothed_noise(rng, canvas.shape[:2], 3.0)
    dark = _smoothed_noise(rng, canvas.shape[:2], 2.0)
    color = base[None, :] + 34.0 * clump[blob][:, None]
    color[dark[blob] > 0.7] *= 0.6
    canvas[blob] = color


def generate_scene(spec: SceneSpec, record_id: Optional[str] = None,
                   split: str = "train") -> ImageRecord:
    """Render one scene; identical specs give byte-identical records."""
    spec.validate()
    rng = np.random.default_rng(spec.seed)
    h, w = spec.height, spec.width

    cols, top, bot = _hull_curves(spec)
    rows = np.arange(h, dtype=np.float64)[:, None]

    ship = np.zeros((h, w), dtype=bool)
    ship[:, cols] = (rows >= top[None, :]) & (rows < bot[None, :])

    f1, f2 = spec.band_fractions
    hull_h = bot - top
    y1_px = np.zeros(w)
    y2_px = np.zeros(w)
    y1_px[cols] = top + f1 * hull_h
    y2_px[cols] = top + (f1 + f2) * hull_h

    band = np.zeros((h, w), dtype=np.uint8)          # 0 bg, 1 TS, 2 BT, 3 VS
    band[:, cols] = np.where(rows < y1_px[None, cols], 1,
                             np.where(rows < y2_px[None, cols], 2, 3))
    band[~ship] = 0

    # --- background ---------------------------------------------------
    c_top, c_bot = _BG_STYLES[spec.background]
    g = (rows / max(1, h - 1))
    canvas = (1.0 - g)[:, :, None] * c_top[None, None, :] + g[:, :, None] * c_bot[None, None, :]
    canvas = np.broadcast_to(canvas, (h, w, 3)).copy()
    if spec.background == "water":
        streak = np.sin(np.arange(h)[:, None] * 0.55 + rng.uniform(0, 6.28)) * 6.0
        canvas += ((streak * (g > 0.55))[:, :, None] * np.ones((1, w, 1)))
    elif spec.background == "dock":
        pillars = np.sin(np.arange(w)[None, :] * 0.08 + rng.uniform(0, 6.28)) * 8.0
        canvas += pillars[:, :, None]

    # --- hull paint ----------------------------------------------------
    jitter = {name: rng.uniform(-12, 12, size=3) for name in ("TS", "BT", "VS")}
    speckle = rng.standard_normal((h, w)) * 6.0
    for sid, name in ((1, "TS"), (2, "BT"), (3, "VS")):
        sel = band == sid
        canvas[sel] = (_HULL_BASE[name] + jitter[name])[None, :] + speckle[sel][:, None]

    # --- defect blobs ---------------------------------------------------
    blob_masks: Dict[str, List[np.ndarray]] = {c: [] for c in DEFECT_CLASSES}
    existing_defect = np.zeros((h, w), dtype=bool)
    below_ts = np.zeros((h, w), dtype=bool)
    below_ts[:, cols] = rows >= y1_px[None, cols]

    for cls in DEFECT_CLASSES:                       # fixed order keeps draws stable
        bspec = spec.blobs.get(cls)
        if bspec is None or bspec.count == 0:
            continue
        allowed_base = ship & below_ts if cls == "fouling" else ship
        for i in range(bspec.count):
            u_overlap = rng.uniform()
            size = rng.uniform(*bspec.size_range)
            if bspec.centers is not None:
                center = tuple(bspec.centers[i % len(bspec.centers)])
            else:
                pool = allowed_base
                if cls != "corrosion" and u_overlap < spec.overlap_prob:
                    overlap_pool = allowed_base & existing_defect
                    if overlap_pool.any():
                        pool = overlap_pool
                flat = np.flatnonzero(pool)
                if flat.size == 0:
                    continue
                pick = int(flat[rng.integers(0, flat.size)])
                center = (pick // w, pick % w)
            blob = _blob_mask(rng, bspec, center, size, (h, w)) & allowed_base
            if not blob.any():
                continue
            blob_masks[cls].append(blob)
            existing_defect |= blob
            if cls == "corrosion":
                _paint_corrosion(rng, canvas, blob)
            elif cls == "delamination":
                _paint_delamination(rng, canvas, blob, spec.delamination_contrast)
            else:
                _paint_fouling(rng, canvas, blob)

    canvas += rng.standard_normal((h, w, 3)) * (spec.noise_level * 255.0)
    pixels = np.clip(canvas, 0, 255).astype(np.uint8)

    # --- emitted label masks (optionally degraded) ----------------------
    drop_rng = np.random.default_rng([spec.seed, 0x1ABE1])
    masks = MaskSet.empty((h, w))
    dropped = 0
    for cls in DEFECT_CLASSES:
        for blob in blob_masks[cls]:
            if spec.label_dropout > 0 and drop_rng.uniform() < spec.label_dropout:
                dropped += 1
                continue
            masks.masks[cls] |= blob

    # --- boundaries ------------------------------------------------------
    by = np.zeros((2, w))
    bvalid = np.zeros((2, w), dtype=bool)
    by[0, cols] = y1_px[cols] / h
    by[1, cols] = y2_px[cols] / h
    bvalid[:, cols] = True
    boundaries = BoundaryPair(by, bvalid)

    # --- analytic coverage bookkeeping (plain numpy, kept independent of
    # the raster-module kernels) ------------------------------------------
    section_px = {name: int((band == sid).sum()) for sid, name in ((1, "TS"), (2, "BT"), (3, "VS"))}
    cov: Dict[str, Dict[str, Optional[float]]] = {}
    for sid, name in ((1, "TS"), (2, "BT"), (3, "VS")):
        if section_px[name] == 0:
            cov[name] = {c: None for c in DEFECT_CLASSES}
        else:
            cov[name] = {c: 100.0 * float((masks.masks[c] & (band == sid)).sum()) / section_px[name]
                         for c in DEFECT_CLASSES}

    record = ImageRecord(
        id=record_id or f"scene-{spec.seed:08d}",
        pixels=pixels,
        ship_mask=ship,
        boundaries=boundaries,
        defect_masks=masks,
        split=split,
        meta={
            "scene_spec": spec.to_json_dict(),
            "coverage": cov,
            "section_pixels": section_px,
            "blob_counts": {c: len(blob_masks[c]) for c in DEFECT_CLASSES},
            "dropped_blobs": dropped,
            "label_source": "human",
        },
    )
    record.validate()
    return record


def full_ground_truth(spec: SceneSpec) -> MaskSet:
    """Complete defect masks for a spec, ignoring any label dropout."""
    clean = dataclasses.replace(spec, label_dropout=0.0)
    return generate_scene(clean).defect_masks


def random_scene_spec(rng: np.random.Generator, seed: int, **overrides) -> SceneSpec:
    """Draw a plausible scene recipe; ``seed`` goes into the spec unchanged."""
    blobs = {
        "corrosion": BlobSpec(count=int(rng.integers(2, 6)),
                              size_range=(9.0, 22.0), irregularity=0.5),
        "delamination": BlobSpec(count=int(rng.integers(1, 4)),
                                 size_range=(10.0, 24.0), irregularity=0.4),
        "fouling": BlobSpec(count=int(rng.integers(1, 4)),
                            size_range=(10.0, 26.0), irregularity=0.55),
    }
    spec = SceneSpec(
        hull_margin=float(rng.uniform(0.03, 0.10)),
        hull_top=float(rng.uniform(0.12, 0.22)),
        hull_bottom=float(rng.uniform(0.84, 0.94)),
        sheer=float(rng.uniform(0.01, 0.05)),
        keel_rise=float(rng.uniform(0.02, 0.06)),
        band_fractions=(float(rng.uniform(0.26, 0.40)), float(rng.uniform(0.18, 0.32))),
        background=("water", "dock", "plain")[int(rng.integers(0, 3))],
        noise_level=float(rng.uniform(0.01, 0.03)),
        blobs=blobs,
        seed=seed,
    )
    for key, value in overrides.items():
        setattr(spec, key, value)
    spec.validate()
    return spec
