from fractions import Fraction

import pylatcrit as lc


def main():
    e8 = lc.catalog("E8")
    assert e8.rank == 8 and e8.det() == 1 and e8.min_norm() == 2
    assert len(e8.short_vectors(2)) == 120

    e7 = lc.Gram.parse("E7")
    assert e7.min_dual_norm() == Fraction(3, 2)
    assert e7.dual()[0][0] > 0

    a = lc.Gram([[1, 0, 0], [0, 1, 0], [0, 0, 2]])
    c = lc.Gram.parse("2*Zn(3)")
    m = lc.represents(a, c)
    assert m is not None and len(m) == 3
    assert lc.represents(c, a) is None
    assert lc.Gram.from_text(a.to_text()) == a

    g = lc.Gram.parse("E8+An(2)+Zn(1)")
    parts = lc.indecomposable_summands(g)
    assert sorted(p.rank for p in parts) == [1, 2, 8]

    r = lc.check_criterion(a, [lc.Gram([[1, 0], [0, 1]]), c], rank=3, max_diag=6)
    assert r["verified"] and r["counterexample"] is None, r

    r = lc.check_criterion(a, [lc.Gram([[1, 0], [0, 1]])], rank=3, max_diag=2)
    assert not r["verified"]
    assert r["counterexample"]["q"] == lc.Gram([[1, 0, 0], [0, 1, 0], [0, 0, 1]])

    try:
        lc.Gram([[1, 2], [3, 4]])
    except ValueError:
        pass
    else:
        raise AssertionError("asymmetric matrix accepted")

    print("smoke test passed")


if __name__ == "__main__":
    main()
