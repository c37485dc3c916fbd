"""Smoke test for the `knotoid` extension module.

Build the module first, for example with
`maturin develop -m crates/py/Cargo.toml --features extension-module`,
or copy `target/<profile>/libknotoid.so` to `knotoid.so` on `PYTHONPATH`.
"""

import knotoid

E3 = "O1+U2+O3+U1+O2+U3+"


def main():
    code = knotoid.GaussCode(E3)
    assert str(code) == E3
    assert len(code) == 6 and code.crossing_count == 3
    assert code.degree_profile() == [1, 2, 1, 2, 1, 2]
    assert knotoid.warping_degree(code) == 1
    assert knotoid.warping_degree(code.mirror()) == knotoid.warping_degree(code.reverse())
    assert knotoid.warping_degree_at("O1+U1+", 0) == 0

    report = knotoid.report(E3)
    assert report["cr"] == 3 and report["alternating"]

    cert = knotoid.descending_certificate("O1+O2+U1+U2+", 0)
    assert len(cert["steps"]) == 3
    assert knotoid.verify_certificate(cert)["final"] == ""

    verdict = knotoid.bounded_trivialize("U1+O1+", max_nodes=1000, max_depth=4)
    assert verdict["status"] == "trivial"
    assert knotoid.verify_certificate(verdict["certificate"])["relation"]["relation"] == "plus_welded"

    result = knotoid.unknot_search(E3, op="change", max_k=2, max_nodes=2000, max_depth=4)
    assert result["upper_bound"] == 0
    seed = knotoid.warping_unknot_certificate(E3, op="virtualize")
    assert seed["upper_bound"] == 1
    assert knotoid.verify_certificate(seed["witness"]["certificate"])["final"] == ""

    tampered = dict(cert)
    tampered["steps"] = [dict(s) for s in cert["steps"]]
    tampered["steps"][1]["key"] = "U1+O1+"
    try:
        knotoid.verify_certificate(tampered)
    except ValueError as e:
        assert "key_mismatch" in str(e)
    else:
        raise AssertionError("tampered certificate accepted")

    try:
        knotoid.GaussCode("O1+O1+")
    except ValueError as e:
        assert "ChordArity" in str(e)
    else:
        raise AssertionError("invalid code accepted")

    assert len(knotoid.all_codes(2)) == 48
    assert knotoid.random_code(5, 7) == knotoid.random_code(5, 7)
    print("python smoke test: ok")


if __name__ == "__main__":
    main()
