"""Branch points of E(p) for catalog fields over a range of masses.

For each (field, m0, helicity) prints the exact E^2 on the ray, the finite
branch points, whether monodromy confirmed each one, and the infinity flag.
"""
import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List

from spinstat import catalog
from spinstat.analytic import all_branch_points


@dataclass
class SurveyConfig:
    names: List[str] = field(default_factory=lambda: list(catalog.NAMES))
    masses: List[Fraction] = field(default_factory=lambda: [Fraction(1, 2), Fraction(1), Fraction(4)])
    as_json: bool = False


def survey(cfg: SurveyConfig) -> list:
    rows = []
    for name in cfg.names:
        for m0 in cfg.masses:
            spec = catalog.get(name, m0=m0).spec
            for r in all_branch_points(spec):
                rows.append({
                    "name": name,
                    "m0": str(m0),
                    "sigma": str(Fraction(r.sigma_two, 2)),
                    "e_squared": str(r.e_squared),
                    "points": [[round(b.location.real, 9), round(b.location.imag, 9)] for b in r.finite_branch_points],
                    "confirmed": all(r.monodromy_confirmed),
                    "at_infinity": r.branch_at_infinity,
                })
    return rows


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--names", nargs="+", default=list(catalog.NAMES), choices=catalog.NAMES)
    ap.add_argument("--masses", nargs="+", type=Fraction, default=SurveyConfig().masses)
    ap.add_argument("--json", action="store_true")
    a = ap.parse_args(argv)
    rows = survey(SurveyConfig(a.names, a.masses, a.json))
    if a.json:
        json.dump(rows, sys.stdout, indent=2)
        print()
        return 0
    for r in rows:
        pts = ", ".join(f"{x:+.6g}{y:+.6g}i" for x, y in r["points"]) or "none"
        print(f"{r['name']:13s} m0={r['m0']:4s} sigma={r['sigma']:5s} E^2={r['e_squared']:28s} "
              f"points: {pts}  confirmed={r['confirmed']}  inf={r['at_infinity']}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
