"""Multi-mote access study: how many implants can one reader serve?

Covers the binary-tree selection cost, the slotted-ALOHA read-window
scans that size local and whole-body deployments, the CDMA spreading-code
trade, and the head-to-head of the two simulated schemes.
"""

from biomote.mac import (
    DeploymentGeometry,
    MacScenario,
    aloha_mean_successes,
    binary_tree_iterations,
    cdma_simulate,
    compare_schemes,
    global_recommendation,
    max_fully_read,
)

SEED = 0xB10B10

print("=== Binary tree: reader iterations to isolate one mote ===")
for n in (1, 2, 16, 91, 1024):
    print(f"  {n:5d} motes -> {binary_tree_iterations(n):5.2f} iterations")
print("Selection cost grows only logarithmically, but every iteration is a "
      "command exchange, so the scheme is priced out for bulk readout.")

print("\n=== Slotted ALOHA: deployment sizing ===")
print("rate=200 kbps, 64-byte packets; window scanned in steps of 10 motes")
for read_time in (2.0, 4.0, 6.0, 8.0, 10.0, 20.0):
    n = max_fully_read(200e3, read_time, 64, trials=100, seed=SEED)
    print(f"  read window {read_time:4.1f} s -> up to {n:3d} motes fully read")

zone_capacity = max_fully_read(200e3, 10.0, 64, trials=100, seed=SEED)
geom = DeploymentGeometry()
print(f"\nA 10 s window reads {zone_capacity} motes per interrogation zone "
      f"(hemisphere, r = {geom.zone_radius_cm:.0f} cm, "
      f"{geom.zone_volume_cm3:.1f} cm^3).")
print(f"Scaled to a {geom.body_volume_cm3:.3e} cm^3 body: deploy about "
      f"{global_recommendation(zone_capacity, geom):,} motes globally.")

print("\n=== CDMA: spreading codes vs contention ===")
print("random +-1 codes, 8-byte packets; mean motes read error-free")
header = "n motes " + "".join(f"  C={c:<5d}" for c in (16, 32, 64, 128, 256))
print(header)
for n in (2, 5, 10, 20, 40, 80):
    cells = "".join(f"  {cdma_simulate(n, c, 'random', 8, 100, SEED):7.2f}"
                    for c in (16, 32, 64, 128, 256))
    print(f"{n:7d} {cells}")
print("Longer codes push the peak out: each family rises, tops out, then "
      "collapses as multi-access interference wins.")

print("\n=== ALOHA vs CDMA at matched airtime ===")
for duration in (128, 1280):
    rows = compare_schemes([10, 20, 40, 80, 120], duration, trials=100, seed=SEED)
    by = {(r["n_motes"], r["scheme"]): r["mean_successes"] for r in rows}
    print(f"duration = {duration:5d} slots "
          f"({duration * 0.0256:.4f} s at 20 kbps / 64 B):")
    for n in (10, 20, 40, 80, 120):
        print(f"  n={n:4d}: ALOHA {by[(n, 'aloha')]:7.2f}   "
              f"CDMA {by[(n, 'cdma')]:7.2f}")
print("Short windows favour CDMA (orthogonal codes waste no airtime); give "
      "ALOHA ten times the slots and it reads everything up to ~50 motes, "
      "while CDMA is indifferent to the extra time.")
