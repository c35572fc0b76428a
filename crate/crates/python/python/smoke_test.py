"""Smoke test for the pysupersingular extension module.

Build and install first, e.g.
    maturin build --release -m crates/python/Cargo.toml -o dist
    pip install dist/pysupersingular-*.whl
then run `python crates/python/python/smoke_test.py`.
"""

import pysupersingular as ss


def check_elliptic():
    e = ss.Curve(2, [0, 1, 0, 1], 3)
    assert e.genus == 1
    assert e.count_points(1) == 4
    assert e.l_polynomial() == [1, 0, 3]
    assert e.newton_slopes() == [(1, 2, 2)]
    assert e.is_supersingular()
    assert e.p_rank() == 0


def check_picard():
    c = ss.Curve.from_catalog("M6", 2)
    assert (c.m, c.genus, c.family) == (3, 3, "M6")
    assert c.count_sequence() == [3, 5, 9]
    assert c.l_polynomial() == [1, 0, 0, 0, 0, 0, 8]
    assert ss.Curve.from_catalog("M6", 7).is_supersingular() is False
    for strategy in ("auto", "exponentiation", "table"):
        assert c.count_points(3, strategy=strategy) == 9


def check_zeta_and_newton():
    assert ss.l_polynomial_from_point_counts(3, 1, [4]) == [1, 0, 3]
    assert ss.newton_slopes(2, [1, 0, 0, 2, 0, 0, 8]) == [(1, 3, 3), (2, 3, 3)]
    report = ss.weil_check(3, [1, 0, 3])
    assert all(report.values()), report


def check_galois():
    assert ss.frobenius_order(9, 2) == 6
    assert ss.splitting_count(9, 19) == 6
    assert [s["n"] for s in ss.field_specs()] == [9, 36, 45]


def check_reports():
    reports = ss.verify("M8", 11)
    assert [r["curve"]["p"] for r in reports] == [3, 7, 11]
    assert all(r["verdict"] == "PASS" for r in reports)
    r = ss.inspect(2, [0, 1, 0, 1], 3)
    assert r["counts"] == [4] and r["supersingular"] is True
    names = [e["name"] for e in ss.catalog()]
    assert len(names) == 3


def check_errors():
    for bad in (
        lambda: ss.Curve(3, [1, 0, 0, 1], 3),
        lambda: ss.Curve(2, [0, 1], 4),
        lambda: ss.Curve.from_catalog("M99", 5),
        lambda: ss.frobenius_order(9, 3),
        lambda: ss.newton_slopes(3, [1, 0]),
        lambda: ss.Curve(2, [0, 1, 0, 1], 3).count_points(1, strategy="magic"),
    ):
        try:
            bad()
        except ValueError:
            continue
        raise AssertionError("expected ValueError")


if __name__ == "__main__":
    check_elliptic()
    check_picard()
    check_zeta_and_newton()
    check_galois()
    check_reports()
    check_errors()
    print("pysupersingular smoke test: ok")
