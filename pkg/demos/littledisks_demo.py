"""Little disks retract onto configuration space.

    python demos/littledisks_demo.py

Shrinking all disks to a common radius determined by the centers gives an
equivariant retraction, and the straight-line homotopy between the radii
stays inside the space of valid configurations.
"""

import numpy as np

from shopd.littledisks import (check_all, disk_margins, include_with_radii, radius_kink,
                               random_disks, retract_to_points, straight_line_homotopy)


def main():
    rng = np.random.default_rng(0)
    c = random_disks(rng, 3)
    print("radii:", np.round(c.radii, 4))
    print("after i(r(c)):", np.round(include_with_radii(retract_to_points(c)).radii, 4))
    for tau in (0.0, 0.5, 1.0):
        m = disk_margins(straight_line_homotopy(c, tau))
        print("tau = %.1f  containment %.4f  disjointness %.4f"
              % (tau, m["containment"], m["disjointness"]))
    print("common radius has a kink in the separation:", radius_kink())
    for n in range(1, 5):
        print("n = %d:" % n, "all checks pass" if check_all(n, 200, seed=n)["ok"] else "FAIL")


if __name__ == "__main__":
    main()
