"""Downlink budget and the Rician channel draw.

All deterministic quantities (FSPL, noise, SNR, SINR) work in dB on top of
linear beam gains. The Rician sample is the only stochastic operation in the
package and takes an explicit numpy Generator so reruns are bit-reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .antenna import ArrayGeometry, steering_vector, upa_positions
from .geometry import LIGHT_SPEED, direction_to, slant_range

BOLTZMANN_DBW = -228.6  # [dBW / K / Hz]


def db_to_linear(db):
    return 10.0 ** (np.asarray(db, dtype=float) / 10.0)


def linear_to_db(x):
    return 10.0 * np.log10(x)


@dataclass(frozen=True)
class LinkParams:
    """Carrier, power, loss, and noise terms of the downlink budget."""

    f_carrier: float          # [Hz]
    bandwidth: float          # [Hz]
    p_tx_dbw: float           # transmit power [dBW]
    lp_cable_db: float        # cable loss [dB]
    lp_at_db: float           # atmospheric loss [dB]
    noise_temp_dbk: float     # system noise temperature [dBK]
    k_rician: float           # Rician factor (linear)
    ut_dims: tuple[int, int]  # user-terminal array size
    k_boltz_dbw: float = BOLTZMANN_DBW
    light_speed: float = LIGHT_SPEED

    def __post_init__(self):
        if self.bandwidth <= 0:
            raise ValueError("bandwidth must be positive")
        if not self.k_rician > 0:
            raise ValueError("k_rician must be positive")


def fspl(distance, f_carrier: float, light_speed: float = LIGHT_SPEED):
    """Free-space path loss [dB] at the given distance [m] and carrier [Hz]."""
    return 20.0 * np.log10(4.0 * np.pi * np.asarray(distance, dtype=float)
                           * f_carrier / light_speed)


def noise_power(noise_temp_dbk: float, bandwidth: float,
                k_boltz_dbw: float = BOLTZMANN_DBW) -> float:
    """Thermal noise power [dBW] over the signal bandwidth."""
    if bandwidth <= 0:
        raise ValueError("bandwidth must be positive")
    return noise_temp_dbk + k_boltz_dbw + 10.0 * math.log10(bandwidth)


def g_rx(ut_dims: tuple[int, int], k_rician: float) -> float:
    """Receive combining gain [dB], including the small scattered-power bonus."""
    n_x, n_y = ut_dims
    if n_x < 1 or n_y < 1:
        raise ValueError("ut dimensions must be at least 1")
    if not k_rician > 0:
        raise ValueError("k_rician must be positive")
    return 10.0 * math.log10(n_x * n_y + 1.0 / k_rician)


def snr_db(gain, distance, params: LinkParams):
    """Link-budget SNR [dB] for linear beam gain(s) at slant distance(s)."""
    return (params.p_tx_dbw - params.lp_cable_db + linear_to_db(gain)
            - params.lp_at_db - fspl(distance, params.f_carrier, params.light_speed)
            + g_rx(params.ut_dims, params.k_rician)
            - noise_power(params.noise_temp_dbk, params.bandwidth, params.k_boltz_dbw))


def noise_rel(distance, params: LinkParams):
    """Noise power expressed in beam-gain units at the given slant distance(s).

    Every co-channel beam reaches a ground point through the same distance,
    atmosphere, and receive combining, so those factors cancel in the SINR
    ratio and the noise floor becomes this distance-dependent scalar.
    """
    common = (params.p_tx_dbw - params.lp_cable_db - params.lp_at_db
              - fspl(distance, params.f_carrier, params.light_speed)
              + g_rx(params.ut_dims, params.k_rician)
              - noise_power(params.noise_temp_dbk, params.bandwidth, params.k_boltz_dbw))
    return db_to_linear(-common)


def sinr_db(g_serving, g_interference, rel_noise):
    """SINR [dB] from the serving gain, summed interferer gains, and noise_rel."""
    return linear_to_db(np.asarray(g_serving, dtype=float)
                        / (np.asarray(g_interference, dtype=float) + rel_noise))


@dataclass(frozen=True)
class ChannelSample:
    """One stochastic channel draw, with the LoS / scattered split retained."""

    matrix: np.ndarray
    los_part: np.ndarray
    rician_part: np.ndarray


def draw_scatter(n_ut: int, rng: np.random.Generator) -> np.ndarray:
    """Circularly-symmetric unit-covariance scattered component of length n_ut."""
    return (rng.standard_normal(n_ut) + 1j * rng.standard_normal(n_ut)) / np.sqrt(2.0)


def rician_sample(point_xy, sat_geometry: ArrayGeometry, h_sat: float,
                  params: LinkParams, rng: np.random.Generator = None,
                  ut_spacing: float = 0.5) -> ChannelSample:
    """Draw the Rician channel matrix toward a satellite-frame ground point.

    H = gamma * (a_ut + sqrt(1/k_rician) * a_scatter) outer conj(a_sat), where
    gamma is the aggregate loss magnitude (phase not modeled). Deterministic
    given the generator state.
    """
    if rng is None:
        rng = np.random.default_rng()
    x, y = float(point_xy[0]), float(point_xy[1])
    v_down = direction_to(x, y, h_sat)
    r = slant_range(x, y, h_sat)
    gamma = 10.0 ** (-(fspl(r, params.f_carrier, params.light_speed)
                       + params.lp_at_db + params.lp_cable_db) / 20.0)
    a_sat = steering_vector(sat_geometry.positions, v_down)
    ut_pos = upa_positions(params.ut_dims[0], params.ut_dims[1], ut_spacing)
    a_ut = steering_vector(ut_pos, -v_down)
    a_scatter = draw_scatter(a_ut.shape[0], rng)
    los = gamma * np.outer(a_ut, np.conj(a_sat))
    scaled = float(np.sqrt(1.0 / params.k_rician)) if np.isfinite(params.k_rician) else 0.0
    ric = gamma * scaled * np.outer(a_scatter, np.conj(a_sat))
    return ChannelSample(matrix=los + ric, los_part=los, rician_part=ric)
