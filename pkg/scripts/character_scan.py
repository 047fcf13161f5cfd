#!/usr/bin/env python3
"""Sector characters and the annulus sewing table for a chosen lattice.

Usage: python scripts/character_scan.py [name] [max_energy]
Defaults: a1, energy 8.  Names come from the bundled set plus z4, z6,
z2z2.
"""

import sys

from latticecft.fock import annulus_sewing_check, sector_character
from latticecft.lattices import (
    BUNDLED_GRAMS,
    EXTRA_GRAMS,
    discriminant_group,
    validate_even_lattice,
)

GRAMS = {**BUNDLED_GRAMS, **EXTRA_GRAMS}


def main() -> None:
    name = sys.argv[1] if len(sys.argv) > 1 else "a1"
    depth = int(sys.argv[2]) if len(sys.argv) > 2 else 8
    lat = validate_even_lattice(GRAMS[name])
    disc = discriminant_group(lat)
    print(f"== {name}: gram {lat.gram}, |A| = {disc.order}, depth {depth}")
    for phi in disc.elements():
        ch = sector_character(lat, disc, phi, depth)
        print(f"   phi {phi.coords}: ground {ch.ground_energy}, "
              f"coefficients {list(ch.coefficients)}")
    rep = annulus_sewing_check(lat, disc, min(depth, 12))
    print(f"   annulus sewing at depth {rep.max_energy}: "
          f"{'exact match' if rep.equal else 'MISMATCH'} "
          f"({len(rep.lhs_table)} energy pairs)")


if __name__ == "__main__":
    main()
