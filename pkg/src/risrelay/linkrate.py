"""Achievable rates for relay-aided and surface-aided links.

A total power constraint splits the RF power between transmitter and relay
(both hops are budgeted with the relay share), while a reflecting surface
leaves the full power at the transmitter.  Decode-and-forward relaying is
limited by the weaker hop; full-duplex relaying additionally suffers
loop-back self-interference on its receive hop.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .wavefield import FieldSample, LinkBudget, cylindrical_power_gain


class RelayProtocol(enum.Enum):
    HALF_DUPLEX_DF = "HD-DF"
    FULL_DUPLEX_DF = "FD-DF"
    IDEAL_FULL_DUPLEX_DF = "IdealFD-DF"


@dataclass(frozen=True)
class RelayConfig:
    """Relay protocol, power split and self-interference strength.

    ``relay_power_fraction`` is P_R / P under the total power constraint
    (default an even split).  ``self_interference_coefficient`` c sets the
    residual loop-back interference I_S = c * N0 * (P_R / N0); the ideal
    full-duplex protocol ignores it.
    """

    protocol: RelayProtocol
    relay_power_fraction: float = 0.5
    self_interference_coefficient: float = 10.0

    def __post_init__(self):
        # fraction 1 is allowed: it models handing the whole budget to one hop
        if not (0 < self.relay_power_fraction <= 1):
            raise ValueError("relay_power_fraction must be in (0, 1]")
        if not (self.self_interference_coefficient >= 0):
            raise ValueError("self_interference_coefficient must be >= 0")


@dataclass(frozen=True)
class RateResult:
    """Spectral efficiency in bit/s/Hz and the end-to-end linear SNR."""

    rate: float
    snr_linear: float

    def __post_init__(self):
        if self.rate < 0 or not math.isfinite(self.rate):
            raise ValueError("rate must be finite and non-negative")


def relay_rate(budget: LinkBudget, config: RelayConfig, d_sr: float, d_rd: float) -> RateResult:
    """Decode-and-forward rate over the two hops.

    Hop SNRs are (P_R / N0) |E(d)|^2 with P_R / N0 the relay share of the
    reference SNR.  End-to-end SNR is the minimum of the hops; half-duplex
    halves the rate, full-duplex divides the receive hop by 1 + I_S / N0.
    """
    p_relay = config.relay_power_fraction * budget.reference_snr_linear
    gain_sr = cylindrical_power_gain(budget, d_sr).amplitude_sq
    gain_rd = cylindrical_power_gain(budget, d_rd).amplitude_sq

    snr_sr = p_relay * gain_sr
    snr_rd = p_relay * gain_rd

    if config.protocol is RelayProtocol.HALF_DUPLEX_DF:
        snr = min(snr_sr, snr_rd)
        rate = 0.5 * math.log2(1.0 + snr)
    elif config.protocol is RelayProtocol.FULL_DUPLEX_DF:
        interference = config.self_interference_coefficient * p_relay
        snr = min(snr_sr / (1.0 + interference), snr_rd)
        rate = math.log2(1.0 + snr)
    elif config.protocol is RelayProtocol.IDEAL_FULL_DUPLEX_DF:
        snr = min(snr_sr, snr_rd)
        rate = math.log2(1.0 + snr)
    else:  # pragma: no cover
        raise ValueError(f"unknown protocol {config.protocol!r}")
    return RateResult(rate=rate, snr_linear=snr)


def ris_rate(budget: LinkBudget, field: FieldSample) -> RateResult:
    """Surface-aided rate log2(1 + (P / N0) |E_ris|^2), full power at the TX."""
    snr = budget.reference_snr_linear * field.amplitude_sq
    return RateResult(rate=math.log2(1.0 + snr), snr_linear=snr)
