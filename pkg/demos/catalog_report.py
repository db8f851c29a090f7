"""Verify the GF(2^10) catalog and show which entries the invariants separate."""

from apnwb.constructions import catalog_f2_10
from apnwb.invariants import catalog_fingerprints
from apnwb.vbf import is_apn

cat = catalog_f2_10()
fps = catalog_fingerprints(cat)
classes = {}
for (name, f), (_, fp) in zip(cat, fps):
    classes.setdefault(fp.to_json(), []).append(name)
    print(f"{name:45s} APN={is_apn(f)} degree={fp.algebraic_degree}")

print(f"\n{len(classes)} fingerprint classes among {len(cat)} entries:")
for names in classes.values():
    print("  " + " | ".join(names))
