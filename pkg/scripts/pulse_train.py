#!/usr/bin/env python3
"""Chirped-pair beat matching and flat-phase comb synthesis.

Picks the delay so the pair's beat note b*t_d hits the Raman frequency,
then checks that a flat-phase sideband comb reproduces the same train
period.
"""

import argparse

import numpy as np

from vortexcascade import (
    ChirpedPulsePair,
    RamanConfig,
    SidebandLabel,
    TimeGrid,
    chirped_pair_field,
    envelope_modulation_frequency,
    synthesize_waveform,
    train_period,
)
from vortexcascade.cascade import CombChannel, SpectralComb, sideband_charge, sideband_frequency
from vortexcascade.pulses import delay_for_beat
from vortexcascade.units import omega_from_wavenumber_cm


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--shift-cm1", type=float, default=320.0)
    ap.add_argument("--chirp-b", type=float, default=1.0e26, help="rad/s^2")
    ap.add_argument("--tau-fs", type=float, default=800.0)
    ap.add_argument("--channels", type=int, default=5)
    args = ap.parse_args()

    omega_r = omega_from_wavenumber_cm(args.shift_cm1)
    period = 2.0 * np.pi / omega_r
    t_d = delay_for_beat(args.chirp_b, omega_r)
    print(f"Raman mode: {args.shift_cm1} cm^-1 -> {omega_r / 2 / np.pi / 1e12:.4f} THz, "
          f"period {period * 1e15:.3f} fs")
    print(f"matching delay for b={args.chirp_b:.3g}: t_d = {t_d * 1e15:.1f} fs")

    pair = ChirpedPulsePair(tau=args.tau_fs * 1e-15, b=args.chirp_b, t_d=t_d)
    nt, dt = 16384, 0.5e-15
    while nt * dt < 1.2 * (4 * pair.tau + pair.t_d):
        nt *= 2
    grid = TimeGrid(nt, dt, -(nt // 2) * dt + pair.t_d / 2.0)
    intensity = np.abs(chirped_pair_field(pair, grid)) ** 2
    beat = envelope_modulation_frequency(intensity, dt)
    print(f"pair beat note: {beat / 2 / np.pi / 1e12:.4f} THz "
          f"({abs(beat - omega_r) / omega_r:.2e} relative off target)")
    print(f"pair beat period (autocorrelation): {train_period(intensity, dt) * 1e15:.3f} fs")

    cfg = RamanConfig(
        omega_p=omega_from_wavenumber_cm(12500.0),
        omega_s=omega_from_wavenumber_cm(12500.0 - args.shift_cm1),
        ell_p=1,
        ell_s=1,
        omega_raman=omega_r,
    )
    k_lo = -(args.channels // 2)
    channels = tuple(
        CombChannel(
            label=SidebandLabel.from_ladder_index(k),
            omega=sideband_frequency(cfg, SidebandLabel.from_ladder_index(k)),
            ell=sideband_charge(cfg, SidebandLabel.from_ladder_index(k)),
            amplitude=1.0 + 0.0j,
        )
        for k in range(k_lo, k_lo + args.channels)
    )
    wave_grid = TimeGrid(16384, 0.4e-15)
    waveform = synthesize_waveform(SpectralComb(channels), wave_grid)
    print(f"{args.channels}-channel flat comb train period: "
          f"{train_period(waveform, wave_grid.dt) * 1e15:.3f} fs")
    print(f"peak/background ratio: {waveform.max() / waveform.mean():.2f} "
          f"(N channels would give {args.channels})")


if __name__ == "__main__":
    main()
