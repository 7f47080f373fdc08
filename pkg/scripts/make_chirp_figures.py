#!/usr/bin/env python3
"""Synthesize a linear chirp WAV and run the full figure pipeline on it.

Produces the same four artifacts the `gtfa figures` command makes from real
audio: waveform CSV, nonperiodic and periodized Born-Jordan distribution
images, and a Gaussian-window spectrogram.

Usage:  python scripts/make_chirp_figures.py [outdir] [N] [f0_bin] [f1_bin]
"""

import os
import struct
import sys

import numpy as np

from gtfa.cli import main as gtfa_main


def write_chirp_wav(path, N, f0, f1, rate=4000, amplitude=0.8):
    t = np.arange(N)
    phase = 2 * np.pi * (f0 * t + (f1 - f0) * t**2 / (2 * N)) / N
    x = (amplitude * np.cos(phase) * 32767).astype("<i2")
    data = x.tobytes()
    hdr = b"RIFF" + struct.pack("<I", 36 + len(data)) + b"WAVE"
    hdr += b"fmt " + struct.pack("<IHHIIHH", 16, 1, 1, rate, 2 * rate, 2, 16)
    hdr += b"data" + struct.pack("<I", len(data))
    with open(path, "wb") as fh:
        fh.write(hdr + data)


def main():
    outdir = sys.argv[1] if len(sys.argv) > 1 else "chirp_figures"
    N = int(sys.argv[2]) if len(sys.argv) > 2 else 256
    f0 = float(sys.argv[3]) if len(sys.argv) > 3 else N * 10 / 256
    f1 = float(sys.argv[4]) if len(sys.argv) > 4 else N * 96 / 256
    os.makedirs(outdir, exist_ok=True)
    wav = os.path.join(outdir, "chirp.wav")
    write_chirp_wav(wav, N, f0, f1)
    rc = gtfa_main(["figures", "--wav", wav, "--outdir", outdir, "--grid-csv"])
    if rc == 0:
        print(f"wrote figures for a {N}-sample chirp ({f0:.0f} -> {f1:.0f} bins) to {outdir}/")
    return rc


if __name__ == "__main__":
    sys.exit(main())
