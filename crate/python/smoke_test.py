"""Smoke test for the qkahler Python bindings.

Build and install the extension first:

    pip install -e crates/qkahler-py --no-build-isolation
"""

from fractions import Fraction

import qkahler_py as qk


def qint(m, q):
    return (q ** m - q ** -m) / (q - 1 / q)


def main():
    assert len(qk.ledger_hash()) == 64
    assert "line-bundle" in qk.ledger_text()

    assert qk.qint_at(3, "2") == "21/4"  # 2^-2 + 1 + 2^2
    assert qk.dims(2) == [[1, 2, 1], [2, 4, 2], [1, 2, 1]]

    g = qk.SUq2()
    assert all(ok for _, ok in g.validate())
    assert g.normal_form("a*d - q*b*c") == "(1*q^(0/2))*1"
    assert Fraction(g.haar_at("b*c", "4/5")) < 0

    passed, rows = qk.verify_local(1, "4/5")
    assert passed, [r for r in rows if not r[1]]

    cx = qk.PodlesComplex("1/2", 3)
    spec = cx.spectrum("dbar")
    assert [r[3] for r in spec] == [1, 6, 10, 14]
    q = 0.5
    mu1 = spec[1][2]
    for j, row in enumerate(spec[1:], start=1):
        ratio = row[2] / mu1
        assert abs(ratio - qint(j, q) * qint(j + 1, q) / qint(2, q)) < 1e-12
    assert cx.cohomology()[(0, 0)] == 1
    assert cx.euler_characteristic() == 1
    assert cx.kahler_identities()[0]
    assert cx.hodge_decomposition()[0]

    h00, h01, ind, ind_del = qk.index("4/5", 3)
    assert (h00, h01, ind, ind_del) == (1, 0, 1, 1)

    pos = qk.PodlesComplex("4/5", 3, twist=2)
    assert pos.cohomology()[(0, 0)] == 3
    assert pos.curvature()[1] > 0 > qk.PodlesComplex("4/5", 3, twist=-2).curvature()[1]

    print("qkahler_py smoke test: ok", cx)


if __name__ == "__main__":
    main()
