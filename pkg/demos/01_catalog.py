# The thirteen subgroups of B6 that contain the icosahedral group.
from nestedshells.icosa import build_catalog

catalog = build_catalog()

for g in catalog:
    print(f"{g.name:>4}  order {g.order:6d}  index {g.order // 60:4d}")

# Cover relations of the containment lattice, smallest group first
print()
for small, big in sorted(catalog.inclusion_edges, key=lambda e: (int(e[0][1:]), int(e[1][1:]))):
    print(f"{small} < {big}")

print()
print("overgroups of G6:", ", ".join(catalog.overgroups_of("G6")))
