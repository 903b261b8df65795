#!/usr/bin/env python3
"""Writes synthetic TMY-style hourly weather files for the nine bundled sites.

The values are not measurements. Each site gets a clear-sky irradiance curve from its
latitude and longitude (hours are UTC), a seasonal temperature cycle, and seeded
day-to-day cloudiness, which is enough to give the sites distinct, partly overlapping
solar windows.

usage: make_sample_nsrdb.py OUT_DIR
"""

import csv
import math
import random
import sys
from datetime import datetime, timedelta
from pathlib import Path

# name, latitude, longitude, mean temp C, seasonal swing C, mean cloudiness 0..1
SITES = [
    ("01_elmira_corning_regional", 42.16, -76.89, 8.5, 12.0, 0.55),
    ("02_watertown", 43.99, -76.02, 7.0, 13.5, 0.58),
    ("03_westhampton_gabreski", 40.84, -72.63, 11.0, 10.5, 0.45),
    ("04_homestead", 25.49, -80.38, 24.5, 3.5, 0.35),
    ("05_orlando", 28.43, -81.31, 22.5, 5.5, 0.33),
    ("06_tyndall", 30.07, -85.58, 20.5, 7.0, 0.32),
    ("07_lompoc", 34.67, -120.47, 14.5, 3.5, 0.30),
    ("08_march", 33.88, -117.26, 18.5, 7.5, 0.18),
    ("09_travis_field", 38.26, -121.93, 16.0, 7.0, 0.22),
]

SOLAR_CONSTANT = 1361.0


def clear_sky_ghi(lat, lon, day_of_year, utc_hour):
    decl = math.radians(23.45) * math.sin(2 * math.pi * (284 + day_of_year) / 365)
    # Mid-hour sample; solar time ignores the equation of time.
    solar_hour = utc_hour + 0.5 + lon / 15.0
    hour_angle = math.radians(15.0 * (solar_hour - 12.0))
    phi = math.radians(lat)
    cos_z = math.sin(phi) * math.sin(decl) + math.cos(phi) * math.cos(decl) * math.cos(hour_angle)
    if cos_z <= 0:
        return 0.0
    air_mass = 1.0 / (cos_z + 0.50572 * (96.07995 - math.degrees(math.acos(cos_z))) ** -1.6364)
    return SOLAR_CONSTANT * cos_z * 0.7 ** (air_mass**0.678)


def site_rows(index, lat, lon, t_mean, t_swing, cloudiness):
    rng = random.Random(1000 + index)
    start = datetime(2001, 1, 1)
    cloud = cloudiness
    for day in range(365):
        # AR(1) cloud cover, clamped; a fresh draw each day.
        cloud = min(0.95, max(0.0, 0.6 * cloud + 0.4 * cloudiness + rng.gauss(0.0, 0.22)))
        season = -math.cos(2 * math.pi * (day - 15) / 365)
        for hour in range(24):
            ghi = clear_sky_ghi(lat, lon, day + 1, hour) * (1.0 - 0.75 * cloud)
            ghi *= 1.0 + rng.uniform(-0.05, 0.05)
            local = (hour + lon / 15.0) % 24
            diurnal = -math.cos(2 * math.pi * (local - 3.0) / 24)
            temp = t_mean + t_swing * season + 4.0 * diurnal + rng.gauss(0.0, 1.0)
            stamp = start + timedelta(days=day, hours=hour)
            yield [
                stamp.strftime("%m/%d/%Y"),
                f"{hour + 1:02d}:00",
                f"{max(0.0, ghi):.0f}",
                f"{temp:.1f}",
                f"{min(100, max(5, round(55 + 35 * cloud + rng.gauss(0, 5))))}",
            ]


def main():
    if len(sys.argv) != 2:
        sys.exit(__doc__.strip().splitlines()[-1])
    out = Path(sys.argv[1])
    out.mkdir(parents=True, exist_ok=True)
    for i, (name, lat, lon, t_mean, t_swing, cloudiness) in enumerate(SITES):
        with open(out / f"{name}.csv", "w", newline="") as f:
            w = csv.writer(f, lineterminator="\n")
            w.writerow(["Date (MM/DD/YYYY)", "Time (HH:MM)", "GHI (W/m^2)", "Dry-bulb (C)",
                        "RHum (%)"])
            w.writerows(site_rows(i, lat, lon, t_mean, t_swing, cloudiness))


if __name__ == "__main__":
    main()
