"""Smoke test for the cohomotopy_py extension.

Build and install first:  pip install --no-build-isolation -e crates/py
"""

import sys

import cohomotopy_py as c


def main() -> int:
    db = c.Database()
    assert db.check() == [], db.check()

    r = db.compute(6, 6)
    assert r.group.primary() == "Z/4 + Z/4 + Z/9 + Z/3", r.group
    assert r.group.notation() == "4^2+9+3"
    assert r.group == c.Group(0, [4, 4, 9, 3])
    assert "nubar_6 . ext(2i_14)" in r.generators
    assert r.citations and all(loc and quote for loc, quote in r.citations)

    r = db.compute(10, 7)
    assert (r.group.free_rank, r.group.notation()) == (1, "inf+8+2+63")

    rows = db.table(8, "csv").splitlines()
    assert len(rows) == 14 and rows[-1].endswith(",14,3,3"), rows[-1]

    ok, summary, cells = db.verify()
    assert ok, summary
    assert summary == "all golden cells pass; 1 documented discrepancy (components n=7)"
    assert len(cells) > 50

    g = db.gottlieb(3)
    assert (g.group, g.index) == (c.Group(1, [2]), 6)
    parts = db.components(7)
    assert (len(parts.classes), parts.expected, parts.status) == (7, 6, "documented-discrepancy")
    assert len(db.components(5).classes) == 4
    assert db.mapspace(11) == c.Group(0, [4, 9])

    assert c.middle_groups([2], [2]) == [c.Group(0, [2, 2]), c.Group(0, [4])]
    assert c.presented_group([[2, 4], [6, 8]], 2) == c.Group(0, [2, 4])

    code, out, _ = c.run_cli(["table", "--k", "8", "--format", "csv"])
    assert code == 0 and out.splitlines() == rows

    for bad in (lambda: db.compute(5, 9), lambda: db.table(6, "json"), lambda: db.mapspace(20)):
        try:
            bad()
        except ValueError:
            pass
        else:
            raise AssertionError("expected ValueError")
    try:
        c.Database("/nonexistent/paper.cohdb")
    except c.DatabaseError:
        pass
    else:
        raise AssertionError("expected DatabaseError")

    print("smoke test passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
