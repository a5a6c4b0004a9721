# Seeds in the cube [-N, N]^6 up to G4-equivalence, and the arrays they give.
from nestedshells.icosa import build_catalog
from nestedshells.shells import build_library, fundamental_reps

g4 = build_catalog()["G4"]
for n in (1, 2, 3, 4):
    print(f"N = {n}: {len(fundamental_reps(g4, n))} representatives")

lib = build_library(1)
print()
print(lib.summary())

# Many (seed, group) pairs project to the same point set
for i, arr in enumerate(lib.arrays[:8]):
    print(f"{arr.group_label:>4} {arr.seed}: {arr.sizes()}  shared by {len(lib.aliases(i))} pairs")
