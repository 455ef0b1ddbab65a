"""Debris catalog ingestion: CSV files and two-line element sets.

Both readers produce :class:`~debrisplan.orbital.Debris` records with
circular orbits.  CSV rows give altitude/inclination/RAAN directly;
TLE records are reduced to semi-major axis from the mean motion, and
every record's RAAN is propagated to a common epoch with the J2 nodal
rate so the catalog shares one time origin.
"""

from __future__ import annotations

import csv
import datetime
import math

from .orbital import EARTH, CircularOrbit, Debris, EarthModel, raan_rate, wrap_angle


class CatalogError(Exception):
    """Raised for malformed catalog files, with file/line context."""


_REQUIRED_COLUMNS = ("id", "altitude_km", "inclination_deg", "raan_deg")


def parse_debris_csv(path, default_op_cost: float = 0.0,
                     default_weight: float = 1.0,
                     earth: EarthModel = EARTH) -> list[Debris]:
    """Read a debris catalog CSV.

    Required columns: ``id, altitude_km, inclination_deg, raan_deg``.
    Optional columns ``weight`` and ``op_cost`` override the defaults
    per row.  Errors carry the file name and row number.
    """
    debris = []
    seen = set()
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise CatalogError(f"{path}: empty file")
        missing = [c for c in _REQUIRED_COLUMNS
                   if c not in reader.fieldnames]
        if missing:
            raise CatalogError(
                f"{path}: missing column(s) {', '.join(missing)}")
        for lineno, row in enumerate(reader, start=2):
            try:
                ident = int(row["id"])
                alt = float(row["altitude_km"]) * 1.0e3
                inc = math.radians(float(row["inclination_deg"]))
                raan = math.radians(float(row["raan_deg"]))
                weight = float(row.get("weight") or default_weight)
                op_cost = float(row.get("op_cost") or default_op_cost)
            except (TypeError, ValueError) as exc:
                raise CatalogError(
                    f"{path}:{lineno}: bad value ({exc})") from exc
            if ident in seen:
                raise CatalogError(f"{path}:{lineno}: duplicate id {ident}")
            seen.add(ident)
            if alt <= 0.0:
                raise CatalogError(
                    f"{path}:{lineno}: altitude must be positive")
            if not 0.0 <= inc <= math.pi:
                raise CatalogError(
                    f"{path}:{lineno}: inclination outside [0, 180] deg")
            orbit = CircularOrbit(a=earth.r_eq + alt, inc=inc, raan0=raan,
                                  epoch=0.0)
            debris.append(Debris(id=ident, orbit=orbit, op_cost=op_cost,
                                 weight=weight))
    if not debris:
        raise CatalogError(f"{path}: no debris rows")
    return debris


def _tle_checksum(line: str) -> int:
    total = 0
    for ch in line[:68]:
        if ch.isdigit():
            total += int(ch)
        elif ch == "-":
            total += 1
    return total % 10


def _tle_epoch_days(field: str) -> float:
    """Convert a TLE epoch field (YYDDD.dddddddd) to days since J2000."""
    yy = int(field[:2])
    year = 2000 + yy if yy < 57 else 1900 + yy
    day = float(field[2:])
    origin = datetime.date(2000, 1, 1)
    start = datetime.date(year, 1, 1)
    return (start - origin).days + (day - 1.0)


def parse_tle(path, earth: EarthModel = EARTH,
              default_op_cost: float = 0.0,
              default_weight: float = 1.0) -> tuple[list[Debris], float]:
    """Read a file of two-line element sets.

    Returns ``(debris, epoch_days)`` where ``epoch_days`` is the latest
    record epoch in days since J2000; every orbit's ``raan0`` has been
    propagated to that instant and ``epoch`` reset to zero, so the
    returned catalog shares a single time origin.
    """
    records = []  # (id, a, inc, raan, epoch_days)
    with open(path) as fh:
        lines = [ln.rstrip("\n") for ln in fh]
    pending_l1 = None
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        if line.startswith("1 "):
            pending_l1 = (lineno, line)
            continue
        if not line.startswith("2 "):
            continue  # name line
        if pending_l1 is None:
            raise CatalogError(f"{path}:{lineno}: line 2 without a line 1")
        l1_no, l1 = pending_l1
        pending_l1 = None
        for no, ln in ((l1_no, l1), (lineno, line)):
            if len(ln) < 69:
                raise CatalogError(f"{path}:{no}: TLE line too short")
            if _tle_checksum(ln) != int(ln[68]):
                raise CatalogError(f"{path}:{no}: checksum mismatch")
        try:
            ident = int(l1[2:7])
            epoch = _tle_epoch_days(l1[18:32].strip())
            inc = math.radians(float(line[8:16]))
            raan = math.radians(float(line[17:25]))
            n_rev = float(line[52:63])  # mean motion, rev/day
        except ValueError as exc:
            raise CatalogError(
                f"{path}:{lineno}: bad TLE field ({exc})") from exc
        if n_rev <= 0.0:
            raise CatalogError(f"{path}:{lineno}: nonpositive mean motion")
        period = 86400.0 / n_rev
        a = (earth.mu * (period / (2.0 * math.pi)) ** 2) ** (1.0 / 3.0)
        records.append((ident, a, inc, raan, epoch))
    if pending_l1 is not None:
        raise CatalogError(f"{path}:{pending_l1[0]}: unpaired line 1")
    if not records:
        raise CatalogError(f"{path}: no TLE records")

    t_ref = max(r[4] for r in records)
    debris = []
    seen = set()
    for ident, a, inc, raan, epoch in records:
        if ident in seen:
            raise CatalogError(f"{path}: duplicate satellite number {ident}")
        seen.add(ident)
        rate = raan_rate(a, inc, earth)
        raan_ref = wrap_angle(raan + rate * (t_ref - epoch) * 86400.0)
        orbit = CircularOrbit(a=a, inc=inc, raan0=raan_ref, epoch=0.0)
        debris.append(Debris(id=ident, orbit=orbit,
                             op_cost=default_op_cost,
                             weight=default_weight))
    return debris, t_ref
