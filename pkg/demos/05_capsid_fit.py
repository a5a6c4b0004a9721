# Rank library arrays against a capsid.
# Pass a PDB path to use a deposited structure; otherwise a toy capsid is
# built on the PaV array so the pipeline can run offline.
import sys

from nestedshells.capsidfit import ingest_pdb, rank_library, surface_clusters, synthetic_capsid
from nestedshells.icosa import build_catalog
from nestedshells.shells import build_library, build_point_array

if len(sys.argv) > 1:
    model = ingest_pdb(sys.argv[1], expand_symmetry=True)
else:
    pav = build_point_array(build_catalog()["G6"], (2, 1, -1, -1, 0, 0))
    model = synthetic_capsid(pav, outer_radius=160.0)

clusters = surface_clusters(model)
print(f"{len(model.calpha)} C-alpha atoms, {len(clusters)} surface clusters")

lib = build_library(2)
results = rank_library(lib, model)
selected = [r for r in results if r.selected]
print(f"{len(selected)} of {len(results)} arrays put every outer point inside a cluster sphere")
for r in selected[:10]:
    seed, group = r.array_id
    print(f"{group:>4} {seed}  score {r.score:7.2f}  scale {r.scale:7.2f}  aliases {len(r.aliases)}")
