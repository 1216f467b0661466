"""Move the endomorphism operad of a small complex W to its homology V.

    python demos/transfer_demo.py

A random deformation retract of W onto V gives a family of maps phi_t,
one per tree, from End_W to End_V.  We check that the family is a homotopy
morphism, that it is a quasi-isomorphism, and that perturbing the sign on
the internal edges breaks it.
"""

import random

from shopd import dense
from shopd.shmaps import check_morphism, check_strictly_unital, is_quasi_iso
from shopd.transfer import random_retract, transfer_hom, validate_retract
from shopd.trees import parse_tree


def main():
    R = random_retract(random.Random(1), [0, 1], pair_degrees=[0])
    print("dim W = %d, dim V = %d" % (R.W.dim, R.V.dim))
    print("retract checks:", {k: v for k, v in validate_retract(R).items() if k != "failures"})

    phi = transfer_hom(R, 3, 3)
    rep = dense.check_morphism_dense(phi)
    print("morphism equation on %d inputs: %s" % (rep["checked"], rep["ok"]))
    print("quasi-isomorphism:", is_quasi_iso(phi))

    # the side conditions are what make the transfer strictly unital
    side = transfer_hom(random_retract(random.Random(1), [0, 1], pair_degrees=[0], side=True), 3, 2)
    print("strictly unital with side conditions:", check_strictly_unital(side)["ok"])
    print("strictly unital without:", check_strictly_unital(transfer_hom(R, 3, 2))["ok"])

    # +h instead of -h on internal edges
    phi.Hp = R.h
    bad = check_morphism(phi, trees=[parse_tree("((1,2),3)")])
    print("with +h on internal edges:", bad["ok"], bad["failures"][:1])


if __name__ == "__main__":
    main()
