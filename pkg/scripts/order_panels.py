#!/usr/bin/env python3
"""Render both sideband-panel scenarios and print the recovered charges.

With the balancing mirror in, pump and Stokes carry equal charge and every
order reads the same; without it they carry opposite charges and the orders
read +-(2n+1). Images land in --out as 16-bit PGM files.
"""

import argparse
from pathlib import Path

from vortexcascade import (
    GridSpec,
    PanelGeometry,
    RamanConfig,
    SidebandLabel,
    analyze_order_panel,
    crystal_charges,
)
from vortexcascade.pgmio import write_pgm16
from vortexcascade.units import omega_from_wavenumber_cm


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--grid", type=int, default=512)
    ap.add_argument("--pitch-um", type=float, default=25.0)
    ap.add_argument("--waist-mm", type=float, default=1.0)
    ap.add_argument("--orders", type=int, default=2, help="highest S/AS order")
    ap.add_argument("--out", default=None, help="directory for PGM output")
    args = ap.parse_args()

    geometry = PanelGeometry(
        spec=GridSpec.square(args.grid, args.pitch_um * 1e-6),
        waist=args.waist_mm * 1e-3,
    )
    orders = [
        SidebandLabel.from_ladder_index(k)
        for k in range(args.orders + 1, -args.orders - 1, -1)
    ]

    for m5_in in (True, False):
        ell_p, ell_s = crystal_charges(1, m5_in)
        cfg = RamanConfig(
            omega_p=omega_from_wavenumber_cm(12500.0),
            omega_s=omega_from_wavenumber_cm(12500.0 - 320.0),
            ell_p=ell_p,
            ell_s=ell_s,
            omega_raman=omega_from_wavenumber_cm(320.0),
            max_as=args.orders,
            max_s=args.orders,
        )
        name = "balanced" if m5_in else "unbalanced"
        print(f"\n{name} arms (ell_p={ell_p}, ell_s={ell_s}):")
        for res in analyze_order_panel(cfg, geometry, orders):
            if res.ok:
                print(
                    f"  {str(res.label):>4}: ell={res.reading.ell:+d} "
                    f"(confidence {res.reading.confidence:.2f})"
                )
                if args.out:
                    outdir = Path(args.out)
                    outdir.mkdir(parents=True, exist_ok=True)
                    write_pgm16(outdir / f"{name}_beam_{res.label}.pgm", res.beam_intensity)
                    write_pgm16(
                        outdir / f"{name}_fork_{res.label}.pgm", res.interferogram.intensity
                    )
            else:
                print(f"  {str(res.label):>4}: {res.status}")


if __name__ == "__main__":
    main()
