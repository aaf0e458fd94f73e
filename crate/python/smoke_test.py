"""Smoke test for the `spectra` extension module.

Build and run from the repository root:

    cargo build --release -p spectra-python --features extension-module
    cp target/release/libspectra.so python/spectra.so
    python3 python/smoke_test.py
"""

import json
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent))

import spectra  # noqa: E402

DATA = pathlib.Path(__file__).resolve().parent.parent / "crates/cli/tests/data"
FOUR = ["t2 - t1^3", "t1 + 1", "t2", "1 - t2"]


def main():
    p = spectra.Poly("t1^3 - t1^2 - t1 - t2^2 + 1")
    assert p.nvars == 2 and p.degree == 3
    assert p.eval(["1", 0]) == "0"
    assert p.mult([1, 0]) == 2
    assert p.check_rz([0, 0], directions=16)["overall"] is True
    assert spectra.Poly("1 - t1^4 - t2^4").check_rz([0, 0], directions=16)["overall"] is False

    pencil = spectra.Pencil.from_json((DATA / "pencil_example1.json").read_text())
    assert pencil.det() == p
    assert [str(c) for c in pencil.char_poly_coeffs()][2] == "-3*t1 + 4"
    assert pencil.contains([0, 0]) and not pencil.contains([2, 0])
    face = pencil.face([1, 0])
    assert face["status"] == "proper", face

    try:
        spectra.Poly("t1 + * t2")
    except spectra.SpectraError as e:
        assert "parse error" in str(e)
    else:
        raise AssertionError("parse error not raised")

    qm = spectra.qm_member(FOUR, 3, "t2 - 3/4*t1 + 1/4")
    assert qm["status"] == "CERTIFIED", qm["status"]
    assert spectra.relaxation_member(FOUR, 3, [0.0, 0.0])["status"] == "IN"
    assert spectra.halving_probe(FOUR, 3)["a_star"] == "1/4"

    rep = spectra.face_2d(FOUR, ["1/2", "1/2"], [[-1.5, 1.5], [-0.5, 1.5]], [0, 0])
    assert rep["exposed"] is False and rep["face"]["kind"] == "point"

    assert "not exposed" in spectra.figure(2)
    report = spectra.reproduce(skip=["sdp", "c3"])
    assert report["skipped"] == [3, 5, 7, 8, 10]
    print(json.dumps({c["criterion"]: c["pass"] for c in report["criteria"]}))
    print("smoke test OK")


if __name__ == "__main__":
    main()
