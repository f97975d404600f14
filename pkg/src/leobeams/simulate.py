"""Scene-level experiments: coverage maps, SINR CDFs, pass series, handovers.

Maps are snapshots in the satellite frame. Pass series and handover counts
follow a fixed ground point through the moving footprint pattern: the point
drifts backward along x in the satellite frame at the ground-track speed.

Serving disciplines differ by design. Static codebooks (frozen lattice or the
DFT baseline) re-select the best beam at every sample; the sweep over the
pattern is monotone, so this never flaps. The dynamic codebook associates at
window entry and at codebook update instants only, holding the beam between
updates, which keeps the serving ID constant while footprints are frozen.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .antenna import ArrayGeometry
from .codebook import CodebookCycle, LabeledBeam, LatticeSpec
from .fields import CdfCurve, FieldMap, TimeSeries
from .geometry import Roi, slant_range
from .kernels import gain_matrix
from .link import LinkParams, noise_rel, sinr_db, snr_db

DEFAULT_GRID_STEP = 2000.0      # coverage-map spacing [m]
DEFAULT_HANDOVER_STEP = 5000.0  # handover-map spacing [m]
UPDATE_SUBSTEPS = 20            # time samples per codebook update period

MAP_MODES = ("hex", "dft")
PASS_MODES = ("static", "dynamic", "dft")

_BIG_ID = np.iinfo(np.int64).max


@dataclass(frozen=True)
class Scene:
    """Everything needed to run experiments: array, codebooks, ROI, budget."""

    geometry: ArrayGeometry
    lattice: LatticeSpec
    roi: Roi
    h_sat: float
    link: LinkParams
    cycle: CodebookCycle
    dft_beams: tuple[LabeledBeam, ...]
    v_ground: float

    @property
    def default_dt(self) -> float:
        return self.lattice.t_c / UPDATE_SUBSTEPS


# ---------------------------------------------------------------------------
# shared helpers
# ---------------------------------------------------------------------------

def roi_grid(roi: Roi, step: float) -> tuple[np.ndarray, np.ndarray]:
    """Grid axes centered on the sub-satellite point covering the ROI box."""
    if step <= 0:
        raise ValueError("grid step must be positive")
    nx = int(math.floor(roi.semi_x / step))
    ny = int(math.floor(roi.semi_y / step))
    return (step * np.arange(-nx, nx + 1, dtype=float),
            step * np.arange(-ny, ny + 1, dtype=float))


def _beam_arrays(scene: Scene, mode: str,
                 iteration: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Target coordinates and stable IDs of the active beams (one snapshot)."""
    if mode == "hex":
        targets = scene.cycle.targets(iteration)
        ids = scene.cycle.beam_ids(iteration)
    elif mode == "dft":
        targets = np.array([b.target for b in scene.dft_beams])
        ids = np.array([b.beam_id for b in scene.dft_beams])
    else:
        raise ValueError(f"unknown codebook mode {mode!r}")
    return targets[:, 0], targets[:, 1], ids


def _gains(scene: Scene, px, py, tx, ty) -> np.ndarray:
    g = scene.geometry
    return gain_matrix(np.asarray(px, dtype=float), np.asarray(py, dtype=float),
                       tx, ty, scene.h_sat, g.subarray_nx, g.subarray_ny,
                       g.spacing)


def _serve(gains: np.ndarray, ids: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per-row serving ID and gain: max gain, exact ties to the lowest ID.

    ids may be (n_beams,) shared across rows or (n_rows, n_beams).
    """
    best = gains.max(axis=1, keepdims=True)
    ids2 = np.broadcast_to(ids, gains.shape) if ids.ndim == 1 else ids
    cand = np.where(gains == best, ids2, _BIG_ID)
    cols = np.argmin(cand, axis=1)
    rows = np.arange(gains.shape[0])
    return cand[rows, cols], gains[rows, cols]


def serving_beam(scene: Scene, point_xy, mode: str = "hex",
                 iteration: int = 0) -> tuple[int, float]:
    """Serving beam ID and its linear gain at one satellite-frame point."""
    tx, ty, ids = _beam_arrays(scene, mode, iteration)
    gains = _gains(scene, [point_xy[0]], [point_xy[1]], tx, ty)
    sid, g = _serve(gains, ids)
    return int(sid[0]), float(g[0])


# ---------------------------------------------------------------------------
# maps and CDFs
# ---------------------------------------------------------------------------

def _point_metrics(scene: Scene, px: np.ndarray, py: np.ndarray, mode: str,
                   iteration: int) -> dict[str, np.ndarray]:
    tx, ty, ids = _beam_arrays(scene, mode, iteration)
    gains = _gains(scene, px, py, tx, ty)
    sid, g_serve = _serve(gains, ids)
    dist = slant_range(px, py, scene.h_sat)
    interf = gains.sum(axis=1) - g_serve
    return {
        "cell": sid.astype(float),
        "snr": snr_db(g_serve, dist, scene.link),
        "sinr": sinr_db(g_serve, interf, noise_rel(dist, scene.link)),
    }


def coverage_map(scene: Scene, metric: str = "sinr", mode: str = "hex",
                 iteration: int = 0, step: float = DEFAULT_GRID_STEP) -> FieldMap:
    """Satellite-frame map of SNR, SINR, or serving-cell ID over the ROI."""
    if metric not in ("snr", "sinr", "cell"):
        raise ValueError(f"unknown metric {metric!r}")
    xs, ys = roi_grid(scene.roi, step)
    gx, gy = np.meshgrid(xs, ys, indexing="xy")
    mask = scene.roi.contains(gx, gy)
    vals = np.full(gx.shape, np.nan)
    vals[mask] = _point_metrics(scene, gx[mask], gy[mask], mode, iteration)[metric]
    return FieldMap(xs=xs, ys=ys, values=vals)


def cdf_from_map(fmap: FieldMap, thresholds_db: np.ndarray,
                 label: str = "") -> CdfCurve:
    """Complementary CDF prob(value > threshold) over a map's in-ROI cells."""
    vals = fmap.values[np.isfinite(fmap.values)]
    if vals.size == 0:
        raise ValueError("map has no in-ROI cells")
    probs = (vals[:, None] > thresholds_db[None, :]).mean(axis=0)
    return CdfCurve(thresholds_db=thresholds_db, probs=probs, label=label)


def sinr_cdf(scene: Scene, modes=MAP_MODES, thresholds_db: np.ndarray = None,
             iteration: int = 0, step: float = DEFAULT_GRID_STEP) -> list[CdfCurve]:
    """Coverage curves prob(SINR > threshold) over the in-ROI grid."""
    if thresholds_db is None:
        thresholds_db = np.arange(-10.0, 20.0001, 0.25)
    return [cdf_from_map(coverage_map(scene, "sinr", mode, iteration, step),
                         thresholds_db, label=mode) for mode in modes]


# ---------------------------------------------------------------------------
# pass time series
# ---------------------------------------------------------------------------

def pass_window(scene: Scene, ut_xy) -> tuple[float, float]:
    """Times between which a fixed ground point sits inside the moving ROI."""
    x_g, y = float(ut_xy[0]), float(ut_xy[1])
    x_b = float(scene.roi.x_extent(y))
    return (x_g - x_b) / scene.v_ground, (x_g + x_b) / scene.v_ground


def pass_timeseries(scene: Scene, ut_xy, mode: str = "dynamic",
                    duration: float = None, dt: float = None,
                    t_start: float = 0.0) -> TimeSeries:
    """Serving ID and SNR for a fixed ground point while it crosses the ROI.

    Samples run from t_start at spacing dt (default one twentieth of the
    update period) and keep only instants where the point is inside the ROI;
    without an explicit duration the series extends to the point's exit.
    """
    if mode not in PASS_MODES:
        raise ValueError(f"unknown pass mode {mode!r}")
    if dt is None:
        dt = scene.default_dt
    if dt <= 0:
        raise ValueError("dt must be positive")
    x_g, y = float(ut_xy[0]), float(ut_xy[1])
    t_in, t_out = pass_window(scene, ut_xy)
    end = t_out if duration is None else t_start + duration
    n = int(math.floor((end - t_start) / dt + 1e-9)) + 1 if end >= t_start else 0
    ts = t_start + dt * np.arange(n)
    sx = x_g - scene.v_ground * ts
    keep = scene.roi.contains(sx, np.full_like(sx, y))
    ts, sx = ts[keep], sx[keep]
    if ts.size == 0:
        raise ValueError("no samples fall inside the region of interest")
    sy = np.full_like(sx, y)

    if mode in ("static", "dft"):
        cb_mode = "hex" if mode == "static" else "dft"
        tx, ty, ids = _beam_arrays(scene, cb_mode, 0)
        gains = _gains(scene, sx, sy, tx, ty)
        sid, g_serve = _serve(gains, ids)
    else:
        t_c = scene.lattice.t_c
        g_iter = np.floor(ts / t_c + 1e-12).astype(np.int64)
        sid = np.empty(ts.size, dtype=np.int64)
        g_serve = np.empty(ts.size)
        start = 0
        while start < ts.size:
            stop = start
            while stop < ts.size and g_iter[stop] == g_iter[start]:
                stop += 1
            g = int(g_iter[start])
            tx, ty, ids = _beam_arrays(scene, "hex", g)
            gains = _gains(scene, sx[start:stop], sy[start:stop], tx, ty)
            first_id, _ = _serve(gains[:1], ids)
            col = int(np.flatnonzero(ids == first_id[0])[0])
            sid[start:stop] = first_id[0]
            g_serve[start:stop] = gains[:, col]
            start = stop

    metric = snr_db(g_serve, slant_range(sx, sy, scene.h_sat), scene.link)
    return TimeSeries(t_s=ts, serving_id=sid.astype(np.int64), metric_db=metric)


# ---------------------------------------------------------------------------
# handover maps
# ---------------------------------------------------------------------------

def _swept_handover_counts(scene: Scene, px: np.ndarray, py: np.ndarray,
                           cb_mode: str, dt: float) -> np.ndarray:
    """Static-codebook handovers: every point of a row sees the same sweep."""
    tx, ty, ids = _beam_arrays(scene, cb_mode, 0)
    counts = np.zeros(px.size, dtype=np.int64)
    for y in np.unique(py):
        row = py == y
        x_b = float(scene.roi.x_extent(y))
        n = int(math.floor(2.0 * x_b / (scene.v_ground * dt) + 1e-9)) + 1
        sx = x_b - scene.v_ground * dt * np.arange(n)
        sx = sx[scene.roi.contains(sx, np.full_like(sx, y))]
        if sx.size == 0:
            continue
        gains = _gains(scene, sx, np.full_like(sx, y), tx, ty)
        sid, _ = _serve(gains, ids)
        counts[row] = int(np.count_nonzero(sid[1:] != sid[:-1]))
    return counts


def _dynamic_handover_counts(scene: Scene, px: np.ndarray,
                             py: np.ndarray) -> np.ndarray:
    """Dynamic-codebook handovers: associate at entry, re-check each update."""
    t_c = scene.lattice.t_c
    k_len = scene.cycle.cycle_len
    n_b = scene.cycle.n_beams
    x_b = scene.roi.x_extent(py)
    t_in = (px - x_b) / scene.v_ground
    t_out = (px + x_b) / scene.v_ground
    g_in = np.floor(t_in / t_c + 1e-12).astype(np.int64)

    # association at window entry (satellite-frame x is +x_extent there)
    prev = np.empty(px.size, dtype=np.int64)
    for k in range(k_len):
        grp = (g_in % k_len) == k
        if not grp.any():
            continue
        tx, ty, _ = _beam_arrays(scene, "hex", k)
        base = np.array([b.beam_id for b in scene.cycle.iterations[k]])
        gains = _gains(scene, x_b[grp], py[grp], tx, ty)
        ids2 = (base[None, :] + (g_in[grp] // k_len)[:, None]) % n_b
        sid, _ = _serve(gains, ids2)
        prev[grp] = sid

    # re-association at every update instant inside the window
    counts = np.zeros(px.size, dtype=np.int64)
    g_lo = int(math.ceil(t_in.min() / t_c))
    g_hi = int(math.floor(t_out.max() / t_c + 1e-12))
    for g in range(g_lo, g_hi + 1):
        tau = g * t_c
        live = (tau > t_in + 1e-9) & (tau <= t_out + 1e-9)
        if not live.any():
            continue
        tx, ty, ids = _beam_arrays(scene, "hex", g)
        gains = _gains(scene, px[live] - scene.v_ground * tau, py[live], tx, ty)
        sid, _ = _serve(gains, ids)
        counts[live] += sid != prev[live]
        prev[live] = sid
    return counts


def handover_map(scene: Scene, mode: str = "dynamic",
                 step: float = DEFAULT_HANDOVER_STEP,
                 dt: float = None) -> FieldMap:
    """Serving-ID changes over each ground point's full in-ROI window."""
    if mode not in PASS_MODES:
        raise ValueError(f"unknown pass mode {mode!r}")
    if dt is None:
        dt = scene.default_dt
    xs, ys = roi_grid(scene.roi, step)
    gx, gy = np.meshgrid(xs, ys, indexing="xy")
    mask = scene.roi.contains(gx, gy)
    px, py = gx[mask], gy[mask]
    if mode == "dynamic":
        counts = _dynamic_handover_counts(scene, px, py)
    else:
        counts = _swept_handover_counts(scene, px, py,
                                        "hex" if mode == "static" else "dft", dt)
    vals = np.full(gx.shape, np.nan)
    vals[mask] = counts.astype(float)
    return FieldMap(xs=xs, ys=ys, values=vals)


def dominance_violations(dynamic_map: FieldMap,
                         static_map: FieldMap) -> np.ndarray:
    """Grid cells where the dynamic codebook hands over MORE than the static.

    The dynamic scheme dominates almost everywhere; exceptions cluster near
    serving-cell boundary curves, whose satellite-frame position shifts
    slightly while a point crosses. Rows are (x_m, y_m, dynamic, static) so
    callers can report rather than silently tolerate them.
    """
    if (dynamic_map.xs.size != static_map.xs.size
            or dynamic_map.ys.size != static_map.ys.size):
        raise ValueError("maps must share the same grid")
    gx, gy = np.meshgrid(dynamic_map.xs, dynamic_map.ys, indexing="xy")
    d, s = dynamic_map.values, static_map.values
    bad = np.isfinite(d) & np.isfinite(s) & (d > s)
    return np.column_stack([gx[bad], gy[bad], d[bad], s[bad]])
