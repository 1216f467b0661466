"""Self-duality of the operad whose algebras are pseudo operads.

    python demos/selfduality_demo.py

Relations identify the two ways of building a three-vertex tree out of
generators.  Per colour signature we print the rank of the relation span,
the rank of the dual span, and whether the chosen base change carries one
onto the other.  The sign (-1)^c(T) alone depends only on the tree, so it
cannot do this; the word sign, which also sees the order of composition, can.
"""

from shopd.psopd import check_self_duality


def main(legs=4):
    rep = check_self_duality(legs)
    print("%-22s %5s %5s %5s %5s %7s" % ("signature", "words", "R", "dual", "word", "literal"))
    for r in rep["signatures"]:
        print("%-22s %5d %5d %5d %5s %7s" % (r["signature"], r["words"], r["rankR"],
                                              r["rankDual"], r["word"], r["literal"]))
    print("word sign works everywhere:", rep["ok"])
    print("literal tree sign works everywhere:", rep["literalReading"])


if __name__ == "__main__":
    main()
