"""Writes the synthetic hourly series used by the desk scenarios.

The series are synthetic: a winter week of electricity and heat demand and a
PV availability profile with low, cloud-modulated midday peaks.
"""

import csv
import math
import pathlib

import numpy as np

HOURS = 168
OUT = pathlib.Path(__file__).parent / "series"


def series(seed=2024):
    rng = np.random.default_rng(seed)
    rows = []
    clouds = rng.uniform(0.35, 1.0, size=HOURS // 24)
    for t in range(HOURS):
        hour = t % 24
        day = t // 24
        weekend = day >= 5
        elec = 300 + 90 * math.sin(math.pi * (hour - 6) / 12) ** 2 * (hour >= 6 and hour <= 22)
        elec *= 0.9 if weekend else 1.0
        elec += rng.normal(0, 8)
        heat = 420 + 110 * math.cos(2 * math.pi * (hour - 5) / 24) + rng.normal(0, 10)
        sun = max(0.0, math.sin(math.pi * (hour - 8) / 8)) if 8 <= hour <= 16 else 0.0
        pv = round(0.55 * sun * clouds[day] * rng.uniform(0.85, 1.0), 4)
        rows.append((t, round(elec, 3), round(heat, 3), pv))
    return rows


def write(path, rows):
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["hour", "elec_load", "heat_load", "pv_availability"])
        w.writerows(rows)


def main():
    OUT.mkdir(exist_ok=True)
    rows = series()
    write(OUT / "winter_week_168.csv", rows)
    write(OUT / "winter_days_48.csv", rows[:48])


if __name__ == "__main__":
    main()
