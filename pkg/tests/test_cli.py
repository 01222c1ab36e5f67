"""End-to-end command line behavior and exit-code contract."""

import json

import pytest

from freegrowth import cli
from freegrowth.sets import GrowthReport

ZZ_DOC = {
    "kind": "free-product",
    "params": {
        "factors": [
            {"kind": "integers", "generators": [{"name": "a", "element": 1}]},
            {"kind": "integers", "generators": [{"name": "b", "element": 1}]},
        ]
    },
}


@pytest.fixture
def zz_group_file(tmp_path):
    path = tmp_path / "zz.json"
    path.write_text(json.dumps(ZZ_DOC))
    return str(path)


def write_set(tmp_path, name, lines):
    path = tmp_path / name
    path.write_text("".join(line + "\n" for line in lines))
    return str(path)


class TestGrow:
    def test_two_generator_row(self, tmp_path, zz_group_file, capsys):
        set_path = write_set(tmp_path, "ab.txt", ["a", "b"])
        code = cli.main(["grow", "--group", zz_group_file, "--set", set_path])
        out = capsys.readouterr().out
        assert code == 0
        assert out.splitlines() == [
            "setsize,sq,cube,ratio2,ratio3,bound,verdict",
            "2,4,8,2,4,1/1944,bound-met",
        ]

    def test_cyclic_exemption(self, tmp_path, zz_group_file, capsys):
        set_path = write_set(tmp_path, "p.txt", [f"a^{k}" for k in range(1, 6)])
        code = cli.main(["grow", "--group", zz_group_file, "--set", set_path])
        assert code == 0
        assert capsys.readouterr().out.strip().endswith("exempt-cyclic")

    def test_malformed_set_exits_1_with_line(self, tmp_path, zz_group_file, capsys):
        set_path = write_set(tmp_path, "bad.txt", ["a", "b", "c^oops"])
        code = cli.main(["grow", "--group", zz_group_file, "--set", set_path])
        err = capsys.readouterr().err
        assert code == 1
        assert ":3:" in err

    def test_bound_violated_exits_2(self, tmp_path, zz_group_file, capsys, monkeypatch):
        # a genuine violation needs |A| > 7776 (|A^3| >= |A|); patch the
        # report to exercise the exit-code wiring at desk scale
        from fractions import Fraction

        def fake_report(words):
            return GrowthReport(
                size=2, sq=4, cube=8,
                ratio2=Fraction(2), ratio3=Fraction(4), ratio_quad=Fraction(2),
                bound=Fraction(1, 1944), verdict="bound-violated",
                classification=None, ambient_kind="free-product",
            )

        monkeypatch.setattr(cli, "growth_report", fake_report)
        set_path = write_set(tmp_path, "ab.txt", ["a", "b"])
        code = cli.main(["grow", "--group", zz_group_file, "--set", set_path])
        err = capsys.readouterr().err
        assert code == 2
        assert "soundness" in err


class TestDichotomyVerify:
    def test_random_set_certificate(self, tmp_path, zz_group_file, capsys):
        sample = str(tmp_path / "sample.txt")
        assert cli.main([
            "sample", "--group", zz_group_file, "--radius", "4",
            "--size", "50", "--seed", "5", "--out", sample,
        ]) == 0
        out_path = str(tmp_path / "cert.json")
        code = cli.main([
            "dichotomy", "--group", zz_group_file, "--set", sample, "--out", out_path,
        ])
        assert code == 0
        doc = json.loads((tmp_path / "cert.json").read_text())
        assert doc["valid"] is True
        assert doc["certificate"]["kind"] in ("growth", "structure", "factor-conjugate")
        assert doc["certificate"]["trace"]

    def test_structure_certificate(self, tmp_path, zz_group_file, capsys):
        set_path = write_set(
            tmp_path, "powers.txt",
            ["a b a b", "a b a b a b", "a b a b a b a b"],
        )
        out_path = str(tmp_path / "cert.json")
        code = cli.main([
            "dichotomy", "--group", zz_group_file, "--set", set_path, "--out", out_path,
        ])
        assert code == 0
        doc = json.loads((tmp_path / "cert.json").read_text())
        assert doc["certificate"]["kind"] == "structure"
        assert doc["certificate"]["classification"]["kind"] == "infinite-cyclic"

    def test_verify_roundtrip_and_tamper(self, tmp_path, zz_group_file, capsys):
        set_path = write_set(tmp_path, "ab.txt", ["a", "b"])
        cert_path = str(tmp_path / "cert.json")
        assert cli.main([
            "dichotomy", "--group", zz_group_file, "--set", set_path, "--out", cert_path,
        ]) == 0
        assert cli.main([
            "verify", "--group", zz_group_file, "--set", set_path,
            "--certificate", cert_path,
        ]) == 0
        doc = json.loads((tmp_path / "cert.json").read_text())
        doc["certificate"]["witness"][0] = "a^7 b^7"
        tampered = tmp_path / "tampered.json"
        tampered.write_text(json.dumps(doc))
        code = cli.main([
            "verify", "--group", zz_group_file, "--set", set_path,
            "--certificate", str(tampered),
        ])
        assert code == 4


class TestFamily:
    def test_bs_sweep_all_ok(self, tmp_path, capsys):
        code = cli.main(["family", "--name", "bs", "--m", "1", "--n", "2", "--d", "1..50"])
        out = capsys.readouterr().out.splitlines()
        assert code == 0
        assert out[0] == "family,params,size,sq,cube,bound,ok,notes"
        rows = out[1:]
        assert len(rows) == 50
        assert all(row.split(",")[6] == "1" for row in rows)

    def test_f2xz_notes_flag_discrepancy(self, capsys):
        code = cli.main(["family", "--name", "f2xz", "--N", "3"])
        out = capsys.readouterr().out.splitlines()
        assert code == 0
        assert "8|A|" in out[1]

    def test_bs_excluded_case_exits_1(self, capsys):
        code = cli.main(["family", "--name", "bs", "--m", "1", "--n", "1", "--d", "1..5"])
        assert code == 1

    def test_prop41(self, tmp_path, zz_group_file, capsys):
        code = cli.main([
            "family", "--name", "prop41", "--group", zz_group_file,
            "--x", "a b", "--N", "1..4",
        ])
        out = capsys.readouterr().out.splitlines()
        assert code == 0 and len(out) == 5

    def test_sl2z_quotient(self, capsys):
        code = cli.main([
            "family", "--name", "sl2z-quotient", "--radius", "3",
            "--size", "8", "--seed", "1",
        ])
        out = capsys.readouterr().out.splitlines()
        assert code == 0
        assert out[1].startswith("sl2z-quotient,radius=3;size=8;seed=1,8,")


class TestSample:
    def test_deterministic(self, tmp_path, zz_group_file):
        a = tmp_path / "a.txt"
        b = tmp_path / "b.txt"
        for out in (a, b):
            assert cli.main([
                "sample", "--group", zz_group_file, "--radius", "2",
                "--size", "9", "--seed", "42", "--out", str(out),
            ]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_infeasible_size(self, zz_group_file, capsys):
        code = cli.main([
            "sample", "--group", zz_group_file, "--radius", "1",
            "--size", "1000", "--seed", "1",
        ])
        assert code == 1


class TestApproxClassify:
    def test_approx(self, tmp_path, zz_group_file, capsys):
        set_path = write_set(tmp_path, "sym.txt", ["e", "a", "a^-1"])
        code = cli.main(["approx", "--group", zz_group_file, "--set", set_path])
        out = json.loads(capsys.readouterr().out)
        assert code == 0
        assert out["k"] == 2 and out["exactness"] == "exact"

    def test_classify(self, tmp_path, zz_group_file, capsys):
        set_path = write_set(tmp_path, "c.txt", ["a^2", "a^5"])
        code = cli.main(["classify", "--group", zz_group_file, "--set", set_path])
        out = json.loads(capsys.readouterr().out)
        assert code == 0
        assert out == {"kind": "infinite-cyclic", "root": "a"}

    def test_missing_group_file(self, tmp_path, capsys):
        set_path = write_set(tmp_path, "s.txt", ["a"])
        code = cli.main(["classify", "--group", str(tmp_path / "no.json"), "--set", set_path])
        assert code == 1
