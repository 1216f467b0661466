"""Minimal A-infinity models of small dg algebras.

    python demos/ainf_demo.py

For each example algebra the product moves to homology along a retract.
m_1 vanishes, m_2 is the induced product, and m_3 is the homotopy that
measures the failure of the transferred m_2 to be associative on the nose.
The Massey examples carry a nonzero m_3.
"""

from shopd.transfer import EXAMPLE_ALGEBRAS, ainf_demo, example_algebra


def main():
    for name in EXAMPLE_ALGEBRAS:
        W, m = example_algebra(name)
        rep = ainf_demo(W, m)
        print("%s: dim W = %d, H degrees %s" % (name, W.dim, rep["H"].degrees))
        for k in sorted(rep["m"]):
            print("  m_%d = %s" % (k, rep["m"][k]))
        print("  checks:", rep["checks"])


if __name__ == "__main__":
    main()
