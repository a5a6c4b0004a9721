# Layered projected orbits for the two virus seeds.
from collections import Counter

from nestedshells.exactnum import decimal_str, exact_str
from nestedshells.icosa import build_catalog
from nestedshells.shells import axis_clusters, build_point_array

catalog = build_catalog()

cases = [("G6", (2, 1, -1, -1, 0, 0)), ("G4", (2, 1, 1, -1, 0, 1))]

for label, seed in cases:
    arr = build_point_array(catalog[label], seed, label=label)
    print(f"{label} {seed}: {arr.total_points} points in {len(arr.layers)} layers")
    for i, layer in enumerate(arr.layers, 1):
        clusters = Counter(axis_clusters(layer.points))
        shape = ", ".join(f"{n} x {size} on {fold}-fold" for (fold, size), n in sorted(clusters.items()))
        print(f"  L{i}: {len(layer):4d} pts  r^2 = {exact_str(layer.radius2):>14}"
              f" ({decimal_str(layer.radius2, 8)})  {shape}")
    print()

# The two outer MS2 layers sit almost at the same radius
ms2 = build_point_array(catalog["G4"], cases[1][1])
print("MS2 outer radius ratio:", (float(ms2.layers[-1].radius2 / ms2.layers[-2].radius2)) ** 0.5)
