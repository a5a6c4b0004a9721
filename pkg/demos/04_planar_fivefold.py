# Planar point sets with five-fold symmetry.
import random

from nestedshells.dihedral import (A4_SEED, a4_case, dihedral_subgroup, hol_group, lift_and_orbit,
                                   random_cycint, verify_hol)
from nestedshells.exactnum import CycInt, exact_str

# The affine maps j -> m j + l on Z_n contain the dihedral group as a normal subgroup
for n in (5, 6, 7, 8, 12):
    rep = verify_hol(n)
    print(f"n = {n:2d}: |Hol| = {rep.order:3d}, |D_n| = {rep.dihedral_order:2d}, proper = {rep.proper}")

# Orbits in Z[xi_5], projected to the first Minkowski coordinate
z = CycInt(5, [1, 2])
for name, grp in (("dihedral", dihedral_subgroup(5)), ("holomorph", hol_group(5))):
    orb = lift_and_orbit(5, grp, z)
    print(name, [(len(layer), exact_str(layer.radius2)) for layer in orb.layers])

rng = random.Random(1)
print("random seeds, layer sizes:", [lift_and_orbit(5, hol_group(5), random_cycint(5, rng)).sizes() for _ in range(5)])

# The same picture on the A4 root lattice
chain = a4_case()
print()
print("orders H, K, Lambda:", len(chain.H), len(chain.K), len(chain.Lambda))
print("overgroups of H:", sorted(len(g) for g in chain.overgroups_of_h))
for which in ("H", "K", "Lambda"):
    layers = chain.orbit_layers(which, A4_SEED)
    print(f"{which:>6}: {[len(layer) for layer in layers]}  radii {[round(layer.radius, 4) for layer in layers]}")
