from __future__ import annotations

import json

import pytest

from cycliccovers import cli
from cycliccovers.arrangements import (
    deleted_b3_arrangement,
    intersection_points,
    pencil_complex,
)


@pytest.fixture()
def pencil_file(tmp_path):
    path = tmp_path / "pencil.json"
    path.write_text(json.dumps(pencil_complex(3, (1, 2, 3)).to_json()))
    return str(path)


@pytest.fixture()
def ceva2_file(tmp_path):
    from cycliccovers.arrangements import LineArrangement

    arr = LineArrangement("P2", ((1, -1, 0), (1, 1, 0), (1, 0, -1),
                                 (1, 0, 1), (0, 1, -1), (0, 1, 1)))
    locus = [i for i, pt in enumerate(intersection_points(arr).points)
             if len(pt.incident) >= 3]
    blob = {
        "arrangement": arr.to_json(),
        "multinet": {
            "classes": [[0, 1], [2, 3], [4, 5]],
            "weights": [1] * 6,
            "base_locus": locus,
        },
    }
    path = tmp_path / "ceva2.json"
    path.write_text(json.dumps(blob))
    return str(path)


def run_cli(capsys, *argv) -> tuple[int, dict | None, str]:
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    report = json.loads(captured.out) if captured.out.startswith("{") else None
    return code, report, captured.err


# -- happy paths -------------------------------------------------------------------


def test_invariants_verb(capsys, pencil_file):
    code, report, _ = run_cli(capsys, "invariants", pencil_file, "--chars", "0,2",
                              "--max-cover", "8")
    assert code == 0
    r = report["results"]
    assert r["alexander"] == {"coeffs": [1, -1, 0, 0, 0, 0, -1, 1], "min_exp": 0}
    assert r["alpha"] == {"0": 0, "2": 0}
    assert r["mahler"]["exp_exact"] == 1
    assert set(r["scans"]) == {"0", "2"}
    assert report["provenance"]["characteristics"] == [0, 2]
    assert report["provenance"]["n_max"] == 8
    assert report["provenance"]["verb"] == "invariants"


def test_cover_verb(capsys, pencil_file):
    code, report, _ = run_cli(capsys, "cover", pencil_file, "--n", "3", "--chars", "0,2")
    assert code == 0
    degrees = report["results"]["degrees"]
    assert [d["betti"]["0"] for d in degrees] == [1, 5, 4]
    assert degrees[2]["torsion_order"] == 1


def test_orbifold_verb_checks_pass(capsys):
    code, report, err = run_cli(capsys, "orbifold", "--g", "0", "--r", "2", "--mu", "2",
                                "--chars", "0,2", "--max-cover", "8")
    assert code == 0
    assert err == ""
    r = report["results"]
    assert r["computed"]["alpha1"] == {"0": 0, "2": 1}
    assert r["computed"]["alexander"] == {"coeffs": [2], "min_exp": 0}
    assert r["computed"]["mahler"]["exp_exact"] == 2
    assert r["checks"] == {"alpha_match": {"0": True, "2": True},
                           "delta_divisor_divides": True, "mahler_match": True}


def test_arrangement_verb(capsys, tmp_path):
    arr_file = tmp_path / "db3.json"
    arr_file.write_text(json.dumps(deleted_b3_arrangement().to_json()))
    code, report, _ = run_cli(capsys, "arrangement", str(arr_file),
                              "--nu", "1,-1,0,-1,1,2,-2", "--chars", "0,2,3,5")
    assert code == 0
    r = report["results"]
    assert r["tau1"] == 4
    assert r["tau1_divisors"] == [4]
    assert r["beta1"] == {"0": 0, "2": 1, "3": 0, "5": 0}
    assert len(r["points"]["points"]) == 11


def test_multinet_verb(capsys, ceva2_file):
    code, report, _ = run_cli(capsys, "multinet", ceva2_file)
    assert code == 0
    r = report["results"]
    assert r["valid"] is True
    assert r["violated"] == []
    assert r["certificate"]["tau1"] == 1
    assert r["certificate"]["nu"] == [1, 1, 1, 1, -2, -2]


def test_multinet_verb_skips_certificate_for_k4(capsys, tmp_path):
    # a pencil of 4 concurrent lines with singleton classes is a valid (4,1)-net,
    # but the certificate only exists for 3-nets
    from cycliccovers.arrangements import LineArrangement

    arr = LineArrangement("P2", ((1, 0, 0), (0, 1, 0), (1, -1, 0), (1, 1, 0)))
    blob = {
        "arrangement": arr.to_json(),
        "multinet": {"classes": [[0], [1], [2], [3]],
                     "weights": [1] * 4, "base_locus": [0]},
    }
    path = tmp_path / "k4.json"
    path.write_text(json.dumps(blob))
    code, report, _ = run_cli(capsys, "multinet", str(path))
    assert code == 0
    assert report["results"]["valid"] is True
    assert "3 classes" in report["results"]["certificate_skipped"]
    assert report["results"]["certificate"] is None


def test_mahler_verb(capsys):
    code, report, _ = run_cli(capsys, "mahler", "--coeffs", "2,2")
    assert code == 0
    r = report["results"]
    assert r["is_cyclotomic_type"] is True
    assert r["mahler"]["exp_exact"] == 2
    assert r["at_one"]["value"] == 4


def test_construct_pencil(capsys):
    code, report, _ = run_cli(capsys, "construct", "pencil", "--d", "3", "--n", "1,2,3")
    assert code == 0
    assert report["results"]["complex"]["ranks"] == [1, 3, 2]


def test_construct_lift(capsys):
    code, report, _ = run_cli(capsys, "construct", "lift",
                              "--chi", "2,-2,1,1,-1,-1,0,0", "--modulus", "6", "--p", "2")
    assert code == 0
    r = report["results"]
    assert r["multiplicities"]["m"] == [2, 4, 1, 1, 5, 5, 6, 6]
    assert r["multiplicities"]["total"] == 30
    assert r["ratio"] == 5


def test_construct_deleted_b3_suggests_nu(capsys):
    code, report, _ = run_cli(capsys, "construct", "deleted-b3")
    assert code == 0
    assert report["results"]["nu"] == [1, -1, 0, -1, 1, 2, -2]


# -- output plumbing ----------------------------------------------------------------


def test_output_flag_writes_file(capsys, tmp_path, pencil_file):
    out = tmp_path / "report.json"
    code, report, _ = run_cli(capsys, "mahler", "--coeffs", "1,-3,1",
                              "--output", str(out))
    assert code == 0
    assert report is None                              # nothing on stdout
    parsed = json.loads(out.read_text())
    assert parsed["results"]["mahler"]["exp_exact"] is None


def test_json_deterministic(capsys, pencil_file):
    args = ("invariants", pencil_file, "--chars", "0,2", "--max-cover", "6")
    cli.main(list(args))
    first = capsys.readouterr().out
    cli.main(list(args))
    second = capsys.readouterr().out
    assert first == second
    assert first.endswith("\n")


def test_table_format(capsys):
    code = cli.main(["mahler", "--coeffs", "2,2", "--format", "table"])
    out = capsys.readouterr().out
    assert code == 0
    assert out.startswith("inputs:")
    assert "exp_exact: 2" in out


def test_figures_rendered(capsys, tmp_path, pencil_file):
    figdir = tmp_path / "figs"
    code, report, _ = run_cli(capsys, "invariants", pencil_file, "--chars", "0",
                              "--max-cover", "6", "--figures", str(figdir))
    assert code == 0
    assert report["figures"] == ["scan_degree1_char0.png"]
    assert (figdir / "scan_degree1_char0.png").stat().st_size > 0


# -- failure modes ------------------------------------------------------------------


def test_malformed_json_positions(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"ranks": [1,')
    code, _, err = run_cli(capsys, "invariants", str(bad))
    assert code == 2
    assert "line 1 column" in err


def test_missing_file(capsys, tmp_path):
    code, _, err = run_cli(capsys, "invariants", str(tmp_path / "nope.json"))
    assert code == 2
    assert "nope.json" in err


def test_nonprime_characteristic(capsys, pencil_file):
    code, _, err = run_cli(capsys, "invariants", pencil_file, "--chars", "0,4")
    assert code == 2
    assert "4 is not prime" in err


def test_invalid_orbifold_type(capsys):
    code, _, err = run_cli(capsys, "orbifold", "--g", "0", "--r", "0", "--mu", "2")
    assert code == 2
    assert "error:" in err


def test_internal_check_maps_to_exit_3(capsys, monkeypatch, pencil_file):
    from cycliccovers.covers import InternalCheckError

    def boom(args):
        raise InternalCheckError("synthetic breach")

    monkeypatch.setitem(cli._DISPATCH, "invariants", boom)
    code, _, err = run_cli(capsys, "invariants", pencil_file)
    assert code == 3
    assert "internal invariant breach" in err
