"""Hot raster loops: section-map fill, coverage tallies, nearest-valid fill.

Each kernel has a numba @njit implementation and a pure-numpy fallback.
The numpy path is selected when numba is unavailable or when the
environment variable ``HULLSCAN_NUMBA=0`` is set; ``active_backend()``
reports which one is in use.  ``benchmarks/bench_kernels.py`` compares
the two.
"""

import os

import numpy as np

_WANT_NUMBA = os.environ.get("HULLSCAN_NUMBA", "1") != "0"

try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised via env flag instead
    _HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def decorator(func):
            return func

        return decorator


USE_NUMBA = _WANT_NUMBA and _HAVE_NUMBA

# Section label values used throughout the package.
BACKGROUND, TS, BT, VS = 0, 1, 2, 3


def active_backend() -> str:
    return "numba" if USE_NUMBA else "numpy"


# ---------------------------------------------------------------------------
# section-map fill

def _fill_sections_np(ship: np.ndarray, y1_px: np.ndarray, y2_px: np.ndarray) -> np.ndarray:
    h = ship.shape[0]
    rows = np.arange(h, dtype=np.float64)[:, None]
    out = np.full(ship.shape, VS, dtype=np.uint8)
    out[rows < y2_px[None, :]] = BT
    out[rows < y1_px[None, :]] = TS
    out[~ship] = BACKGROUND
    return out


@njit(cache=True)
def _fill_sections_nb(ship, y1_px, y2_px, out):  # pragma: no cover - jitted
    h, w = ship.shape
    for c in range(w):
        a = y1_px[c]
        b = y2_px[c]
        for r in range(h):
            if not ship[r, c]:
                out[r, c] = BACKGROUND
            elif r < a:
                out[r, c] = TS
            elif r < b:
                out[r, c] = BT
            else:
                out[r, c] = VS
    return out


def fill_sections(ship: np.ndarray, y1_px: np.ndarray, y2_px: np.ndarray) -> np.ndarray:
    """Label ship pixels TS/BT/VS per column given boundary rows in pixels."""
    if USE_NUMBA:
        out = np.empty(ship.shape, dtype=np.uint8)
        return _fill_sections_nb(
            np.ascontiguousarray(ship), np.ascontiguousarray(y1_px, dtype=np.float64),
            np.ascontiguousarray(y2_px, dtype=np.float64), out)
    return _fill_sections_np(ship, y1_px, y2_px)


# ---------------------------------------------------------------------------
# coverage tallies

def _coverage_counts_np(section_map: np.ndarray, defect_stack: np.ndarray):
    section_px = np.bincount(section_map.ravel(), minlength=4).astype(np.int64)
    n_classes = defect_stack.shape[0]
    inter = np.zeros((n_classes, 4), dtype=np.int64)
    for k in range(n_classes):
        inter[k] = np.bincount(section_map.ravel(), weights=defect_stack[k].ravel(),
                               minlength=4).astype(np.int64)
    return section_px, inter


@njit(cache=True)
def _coverage_counts_nb(section_map, defect_stack, section_px, inter):  # pragma: no cover
    h, w = section_map.shape
    n_classes = defect_stack.shape[0]
    for r in range(h):
        for c in range(w):
            s = section_map[r, c]
            section_px[s] += 1
            for k in range(n_classes):
                if defect_stack[k, r, c]:
                    inter[k, s] += 1
    return section_px, inter


def coverage_counts(section_map: np.ndarray, defect_stack: np.ndarray):
    """Pixel totals per section label plus defect/section intersection counts.

    defect_stack is (C, H, W) boolean; returns (section_px[4], inter[C, 4]).
    """
    if USE_NUMBA:
        section_px = np.zeros(4, dtype=np.int64)
        inter = np.zeros((defect_stack.shape[0], 4), dtype=np.int64)
        return _coverage_counts_nb(
            np.ascontiguousarray(section_map),
            np.ascontiguousarray(defect_stack.astype(np.uint8)), section_px, inter)
    return _coverage_counts_np(section_map, defect_stack.astype(np.uint8))


# ---------------------------------------------------------------------------
# nearest-valid fill for boundary curves

def _nearest_valid_fill_np(y: np.ndarray, valid: np.ndarray) -> np.ndarray:
    idx = np.flatnonzero(valid)
    cols = np.arange(y.shape[0])
    pos = np.searchsorted(idx, cols)
    left = idx[np.clip(pos - 1, 0, idx.size - 1)]
    right = idx[np.clip(pos, 0, idx.size - 1)]
    pick = np.where(np.abs(cols - left) <= np.abs(right - cols), left, right)
    return y[pick]


@njit(cache=True)
def _nearest_valid_fill_nb(y, valid, out):  # pragma: no cover - jitted
    w = y.shape[0]
    for c in range(w):
        if valid[c]:
            out[c] = y[c]
            continue
        best = -1
        dist = w + 1
        for d in range(1, w):
            left = c - d
            right = c + d
            if left >= 0 and valid[left]:
                best = left
                dist = d
                break
            if right < w and valid[right]:
                best = right
                dist = d
                break
        out[c] = y[best]
    return out


def nearest_valid_fill(y: np.ndarray, valid: np.ndarray) -> np.ndarray:
    """Replace invalid entries with the value of the nearest valid column.

    Ties prefer the left neighbour.  At least one entry must be valid.
    """
    if not valid.any():
        raise ValueError("nearest_valid_fill needs at least one valid column")
    if USE_NUMBA:
        out = np.empty_like(np.asarray(y, dtype=np.float64))
        return _nearest_valid_fill_nb(
            np.ascontiguousarray(y, dtype=np.float64),
            np.ascontiguousarray(valid.astype(np.bool_)), out)
    return _nearest_valid_fill_np(np.asarray(y, dtype=np.float64), valid.astype(bool))
