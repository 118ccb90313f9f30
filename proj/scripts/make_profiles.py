#!/usr/bin/env python3
"""Writes the synthetic hourly profiles in data/.

Deterministic (fixed seeds). Shapes are stylised GB-like weeks, not
reconstructions of any published dataset.
"""
import csv
import math
import pathlib

import numpy as np

HEADER = ["period", "demand_mw", "wind_mw", "solar_mw", "interconnector_mw"]


def daily_shape(hour):
    # Overnight trough, morning ramp, evening peak around 18:00.
    h = hour % 24
    base = 0.5 - 0.5 * math.cos(2 * math.pi * (h - 4) / 24)
    evening = math.exp(-((h - 18) ** 2) / 6.0)
    return 0.75 * base + 0.35 * evening


def week(seed, hours, d_min, d_max, wind_mean, wind_max, solar_peak, ic_mean):
    rng = np.random.default_rng(seed)
    shape = np.array([daily_shape(t) for t in range(hours)])
    weekend = np.array([0.9 if (t // 24) % 7 >= 5 else 1.0 for t in range(hours)])
    shape = shape * weekend
    shape = (shape - shape.min()) / (shape.max() - shape.min())
    demand = d_min + (d_max - d_min) * shape

    # Mean-reverting wind, clipped to the installed range.
    wind = np.empty(hours)
    w = wind_mean
    for t in range(hours):
        w = wind_mean + 0.93 * (w - wind_mean) + rng.normal(0.0, 0.08 * wind_max)
        wind[t] = min(max(w, 0.02 * wind_max), wind_max)

    h = np.arange(hours) % 24
    solar = solar_peak * np.clip(np.sin(math.pi * (h - 6) / 12), 0.0, None)
    solar *= rng.uniform(0.6, 1.0, size=hours // 24 + 1).repeat(24)[:hours]

    ic = ic_mean + rng.normal(0.0, 0.05 * ic_mean, size=hours)
    return demand, wind, solar, ic


def write(path, cols):
    with open(path, "w", newline="") as f:
        out = csv.writer(f)
        out.writerow(HEADER)
        for t, row in enumerate(zip(*cols)):
            out.writerow([t + 1] + [f"{v:.1f}" for v in row])


def main():
    root = pathlib.Path(__file__).resolve().parent.parent / "data"
    root.mkdir(exist_ok=True)
    write(root / "baseline_week.csv",
          week(seed=7, hours=168, d_min=23000, d_max=43000, wind_mean=4500,
               wind_max=9000, solar_peak=3500, ic_mean=2000))
    write(root / "toy_week.csv",
          week(seed=11, hours=168, d_min=22000, d_max=40000, wind_mean=5000,
               wind_max=10000, solar_peak=3000, ic_mean=1500))


if __name__ == "__main__":
    main()
