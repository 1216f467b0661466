"""Write the small JSON inputs used by the CLI examples into demos/data/.

    python demos/make_data.py

End_W and End_V for a three-dimensional retract, the transfer morphism
between them, a broken copy of End_V, and the retract itself.
"""

import json
import os
import random

from shopd.collection import EndOperad, PerturbedOperad, tabulate
from shopd.shmaps import tabulate_morphism
from shopd.transfer import random_retract, retract_to_json, transfer_hom

HERE = os.path.join(os.path.dirname(os.path.abspath(__file__)), "data")


def dump(name, doc):
    path = os.path.join(HERE, name)
    with open(path, "w") as fh:
        json.dump(doc, fh, sort_keys=True, indent=1)
    print("wrote", path)


def main(cap=3):
    os.makedirs(HERE, exist_ok=True)
    rng = random.Random(7)
    R = random_retract(rng, [0], pair_degrees=[0])
    EW, EV = EndOperad(R.W, cap), EndOperad(R.V, cap)
    dump("retract.json", retract_to_json(R))
    dump("end_w.json", tabulate(EW).to_json())
    dump("end_v.json", tabulate(EV).to_json())
    phi = transfer_hom(R, cap, cap)
    dump("transfer.json", tabulate_morphism(phi).to_json())
    # break one composition: (id o_1 id) now returns twice the identity
    a = EV.index((0,), 0)
    bad = PerturbedOperad(EV, {(1, 1, 1, a, a): {a: 2}})
    dump("bad_structure.json", tabulate(bad).to_json())


if __name__ == "__main__":
    main()
