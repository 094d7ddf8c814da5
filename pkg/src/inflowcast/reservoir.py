"""Reservoir factor, release policy and rule-curve checks.

Volumes are unit-agnostic; callers keep them consistent.
"""

import datetime as dt
import json
import math
from dataclasses import dataclass

RELATIONS = ("not_exceed_by", "not_exceed_before", "not_reach_before", "reach_by", "hard_cap")


@dataclass(frozen=True)
class ReservoirAccount:
    available_storage: float
    total_inflow_remaining: float
    total_indent_remaining: float

    def __post_init__(self):
        for name in ("available_storage", "total_inflow_remaining", "total_indent_remaining"):
            v = getattr(self, name)
            if not math.isfinite(v) or v < 0:
                raise ValueError(f"{name} must be finite and >= 0")


def reservoir_factor(account):
    """(available storage + remaining inflow) / remaining indent, and whether it applies (<= 1)."""
    if account.total_indent_remaining <= 0:
        raise ValueError("total indent must be > 0")
    factor = (account.available_storage + account.total_inflow_remaining) / account.total_indent_remaining
    return factor, factor <= 1.0


def daily_release_from_storage(available_storage, total_indent_remaining):
    """Storage over remaining indent, as literally printed (a ratio, not a volume per day)."""
    if total_indent_remaining <= 0:
        raise ValueError("total indent must be > 0")
    return available_storage / total_indent_remaining


def daily_release_per_day(available_storage, remaining_days):
    """Dimensionally consistent companion: storage spread evenly over the remaining days."""
    if remaining_days <= 0:
        raise ValueError("remaining days must be > 0")
    return available_storage / remaining_days


def total_daily_release(release_from_storage, predicted_inflow):
    for v in (release_from_storage, predicted_inflow):
        if not math.isfinite(v) or v < 0:
            raise ValueError("release components must be finite and >= 0")
    return release_from_storage + predicted_inflow


@dataclass(frozen=True)
class Constraint:
    elevation_ft: float
    relation: str
    month: int | None = None
    day: int | None = None
    description: str = ""

    def __post_init__(self):
        if self.relation not in RELATIONS:
            raise ValueError(f"unknown relation {self.relation!r}")
        if self.relation != "hard_cap" and (self.month is None or self.day is None):
            raise ValueError(f"{self.relation} needs a calendar date")

    def to_dict(self):
        d = {"elevation_ft": self.elevation_ft, "relation": self.relation}
        if self.month is not None:
            d["date"] = f"{self.month:02d}-{self.day:02d}"
        if self.description:
            d["description"] = self.description
        return d


@dataclass(frozen=True)
class RuleCurve:
    """Calendar elevation limits for the filling season.

    Dated constraints only apply from ``season_start`` (month, day) up to
    their own date, so depletion-season levels are never flagged by them.
    """

    constraints: tuple
    season_start: tuple = (5, 21)

    def __post_init__(self):
        object.__setattr__(self, "constraints", tuple(self.constraints))
        dated = sorted((c for c in self.constraints if c.relation != "hard_cap"), key=lambda c: (c.month, c.day))
        elev = [c.elevation_ft for c in dated]
        if any(b <= a for a, b in zip(elev, elev[1:])):
            raise ValueError("dated constraint elevations must increase with date")

    def to_dict(self):
        return {
            "season_start": f"{self.season_start[0]:02d}-{self.season_start[1]:02d}",
            "constraints": [c.to_dict() for c in self.constraints],
        }

    @classmethod
    def from_dict(cls, d):
        def md(s):
            m, dd = (int(p) for p in s.split("-"))
            dt.date(2000, m, dd)  # validates
            return m, dd

        cons = []
        for c in d["constraints"]:
            m, dd = md(c["date"]) if "date" in c else (None, None)
            cons.append(Constraint(float(c["elevation_ft"]), c["relation"], m, dd, c.get("description", "")))
        return cls(tuple(cons), md(d.get("season_start", "05-21")))

    @classmethod
    def loads(cls, text):
        return cls.from_dict(json.loads(text))


BHAKRA_RULE_CURVE = RuleCurve(
    (
        Constraint(1650.0, "not_exceed_by", 7, 31, "not filled beyond El. 1650 ft by 31 July"),
        Constraint(1670.0, "not_exceed_before", 8, 15, "not beyond El. 1670 ft before 15 August"),
        Constraint(1680.0, "not_reach_before", 8, 31, "El. 1680 ft not reached earlier than 31 August"),
        Constraint(1680.0, "hard_cap", description="never filled beyond El. 1680 ft (512.06 m)"),
    )
)


def check_rule_curve(day, elevation_ft, curve=BHAKRA_RULE_CURVE):
    """Constraints violated by ``elevation_ft`` on ``day``."""
    key = (day.month, day.day)
    in_season = key >= curve.season_start
    violations = []
    for c in curve.constraints:
        if c.relation == "hard_cap":
            bad = elevation_ft > c.elevation_ft
        else:
            cd = (c.month, c.day)
            if c.relation == "not_exceed_by":
                bad = in_season and key <= cd and elevation_ft > c.elevation_ft
            elif c.relation == "not_exceed_before":
                bad = in_season and key < cd and elevation_ft > c.elevation_ft
            elif c.relation == "not_reach_before":
                bad = in_season and key < cd and elevation_ft >= c.elevation_ft
            else:  # reach_by: level must be attained on the date itself
                bad = key == cd and elevation_ft < c.elevation_ft
        if bad:
            violations.append(c)
    return violations
