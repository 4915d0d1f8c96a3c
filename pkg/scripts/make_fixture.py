"""Regenerate the bundled synthetic fixture in src/coachnet/data/.

30 coaches per sport (60 in all), 20 schools, 40 AP poll rows. Alma
maters are drawn with a prestige bias so rankings and poll correlations
have something to find. Two rows per sport violate the cleaning rules on
purpose.
"""

import csv
from pathlib import Path

import numpy as np

OUT = Path(__file__).resolve().parents[1] / "src" / "coachnet" / "data"

# id, name, lat, lon, basketball division, football division
SCHOOLS = [
    ("yale", "Yale", 41.31, -72.92, "DivI", "FCS"),
    ("harvard", "Harvard", 42.37, -71.12, "DivI", "FCS"),
    ("penn_state", "Penn State", 40.80, -77.86, "DivI", "FBS"),
    ("michigan", "Michigan", 42.28, -83.74, "DivI", "FBS"),
    ("ohio_state", "Ohio State", 40.01, -83.03, "DivI", "FBS"),
    ("alabama", "Alabama", 33.21, -87.54, "DivI", "FBS"),
    ("kansas", "Kansas", 38.95, -95.25, "DivI", "FBS"),
    ("ucla", "UCLA", 34.07, -118.44, "DivI", "FBS"),
    ("oregon", "Oregon", 44.05, -123.07, "DivI", "FBS"),
    ("montana", "Montana", 46.86, -113.99, "DivI", "FCS"),
    ("villanova", "Villanova", 40.04, -75.34, "DivI", "FCS"),
    ("slippery_rock", "Slippery Rock", 41.06, -80.04, "DivII", "DivII"),
    ("grand_valley", "Grand Valley State", 42.96, -85.89, "DivII", "DivII"),
    ("west_alabama", "West Alabama", 32.59, -88.19, "DivII", "DivII"),
    ("chico_state", "Chico State", 39.73, -121.85, "DivII", ""),
    ("williams", "Williams", 42.71, -73.20, "DivIII", "DivIII"),
    ("wooster", "Wooster", 40.81, -81.94, "DivIII", "DivIII"),
    ("whitworth", "Whitworth", 47.75, -117.42, "DivIII", "DivIII"),
    ("mount_union", "Mount Union", 40.90, -81.11, "DivIII", "DivIII"),
    ("guam_tech", "Guam Tech", "", "", "", ""),
]

PRESTIGE = np.array([6, 5, 7, 7, 6, 6, 5, 5, 3, 2, 3, 2, 2, 1, 1, 2, 1, 1, 1, 0.5])


def coaches(rng, sport, prefix):
    ids = [s[0] for s in SCHOOLS]
    p_alma = PRESTIGE ** 1.5 / (PRESTIGE ** 1.5).sum()
    rows = []
    for k in range(30):
        cid = f"{prefix}{k:03d}"
        alma = ids[rng.choice(len(ids), p=p_alma)]
        grad = int(rng.integers(1955, 2006))
        year = grad + int(rng.integers(3, 16))
        for _ in range(int(rng.integers(1, 4))):
            if year > 2013:
                break
            # some hires go back home; others lean toward similar prestige
            if rng.random() < 0.12:
                school = alma
            else:
                w = 1.0 / (1.0 + np.abs(PRESTIGE - PRESTIGE[ids.index(alma)]))
                school = ids[rng.choice(len(ids), p=w / w.sum())]
            length = int(rng.integers(1, 9))
            rows.append([cid, f"Coach {prefix.upper()}{k}", alma, grad, school, year, year + length - 1])
            year += length + int(rng.integers(0, 3))
    # rows the cleaning rules must drop
    rows.append([f"{prefix}900", "No Alma", "", 1980, ids[3], 1990, 1995])
    rows.append([f"{prefix}901", "Early Start", ids[0], 1990, ids[1], 1985, 1988])
    return rows


def polls(rng, sport):
    ids = [s[0] for s in SCHOOLS]
    rows = []
    for year in (1960, 1972, 1984, 2001):
        noise = rng.normal(0, 1.5, size=len(ids))
        order = np.argsort(-(PRESTIGE + noise), kind="stable")
        for rank, i in enumerate(order[:5], start=1):
            rows.append([sport, year, rank, ids[i]])
    return rows


def write(path, header, rows):
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def main():
    rng = np.random.default_rng(2017)
    write(OUT / "schools.csv",
          ["school", "display_name", "latitude", "longitude", "division_basketball", "division_football"],
          SCHOOLS)
    poll_rows = []
    for sport, prefix in (("basketball", "b"), ("football", "f")):
        write(OUT / sport / "coaches.csv",
              ["coach_id", "name", "alma_mater", "grad_year", "school", "start_year", "end_year"],
              coaches(rng, sport, prefix))
        poll_rows += polls(rng, sport)
    write(OUT / "ap_polls.csv", ["sport", "year", "rank", "school"], poll_rows)


if __name__ == "__main__":
    main()
