import json
import os

import pytest

from carlitz.cli import EX_BUDGET, EX_MISMATCH, EX_OK, EX_USAGE, main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_density_basic(tmp_path, capsys):
    out = tmp_path / "d.csv"
    code, _, _ = run(capsys, "density", "--q", "2", "--k", "1", "--nmax", "8",
                     "--mode", "both", "--out", str(out))
    assert code == EX_OK
    lines = out.read_text().splitlines()
    assert lines[0] == "N,D_brute,D_formula,extra_m,delta_hat_num,delta_hat_den,delta_hat_real"
    assert len(lines) == 9
    for line in lines[1:]:
        n, db, df = line.split(",")[:3]
        assert db == df


def test_density_k0_closed_form(tmp_path, capsys):
    out = tmp_path / "d.csv"
    code, _, _ = run(capsys, "density", "--q", "5", "--k", "0", "--nmax", "6",
                     "--out", str(out))
    assert code == EX_OK
    rows = out.read_text().splitlines()[1:]
    for i, line in enumerate(rows, start=1):
        assert int(line.split(",")[2]) == 4 * 5 ** (i - 1)


def test_density_formula_only_large_k(tmp_path, capsys):
    out = tmp_path / "d.csv"
    code, _, _ = run(capsys, "density", "--q", "2", "--k", "9", "--nmax", "30",
                     "--mode", "formula", "--out", str(out))
    assert code == EX_OK
    lines = out.read_text().splitlines()
    assert len(lines) == 31
    assert all(line.split(",")[1] == "" for line in lines[1:])  # no brute column


def test_density_budget_exit(capsys):
    code, _, err = run(capsys, "density", "--q", "2", "--k", "0", "--nmax", "40",
                       "--mode", "brute")
    assert code == EX_BUDGET
    assert "budget" in err


def test_density_json_header(tmp_path, capsys):
    out = tmp_path / "d.json"
    code, _, _ = run(capsys, "density", "--q", "3", "--k", "1", "--nmax", "4",
                     "--format", "json", "--out", str(out))
    assert code == EX_OK
    obj = json.loads(out.read_text())
    assert obj["header"] == {"q": 3, "p": 3, "e": 1, "k": 1, "mode": "both",
                             "seed": 1729}
    assert [r["N"] for r in obj["rows"]] == [1, 2, 3, 4]
    assert obj["rows"][1]["D_brute"] == 18


def test_tensor_cli(tmp_path, capsys):
    out = tmp_path / "t.csv"
    code, _, _ = run(capsys, "tensor", "--q", "2", "--d", "2", "--nmax", "8",
                     "--mode", "both", "--out", str(out))
    assert code == EX_OK
    rows = out.read_text().splitlines()[1:]
    assert len(rows) == 8
    # trend toward 1/2: exponent is floor((N-1)/2)
    assert [int(r.split(",")[4]) for r in rows] == [(n - 1) // 2 for n in range(1, 9)]


def test_tensor_density_one_when_prime_to_p(tmp_path, capsys):
    out = tmp_path / "t.csv"
    code, _, _ = run(capsys, "tensor", "--q", "3", "--d", "2", "--nmax", "8",
                     "--out", str(out))
    assert code == EX_OK
    rows = out.read_text().splitlines()[1:]
    assert [int(r.split(",")[4]) for r in rows] == list(range(8))  # E = N-1


def test_staircase_d4(tmp_path, capsys):
    out = tmp_path / "t.csv"
    code, _, _ = run(capsys, "tensor", "--q", "2", "--d", "4", "--nmax", "12",
                     "--mode", "formula", "--out", str(out))
    assert code == EX_OK
    rows = out.read_text().splitlines()[1:]
    assert [int(r.split(",")[4]) for r in rows] == [(n - 1) // 4 for n in range(1, 13)]


def test_omega_verify_pass(capsys):
    code, out, _ = run(capsys, "omega-verify", "--q", "2", "--k", "2",
                       "--tprec", "8", "--uprec", "128")
    assert code == EX_OK
    assert out.count("PASS") == 5 and "FAIL" not in out


def test_omega_verify_k0(capsys):
    code, out, _ = run(capsys, "omega-verify", "--q", "3", "--k", "0",
                       "--tprec", "4", "--uprec", "32")
    assert code == EX_OK
    assert "carlitz-equation: PASS" in out


def test_omega_verify_precision_error_exit(capsys):
    # jet columns need tprec > k
    code, _, err = run(capsys, "omega-verify", "--q", "2", "--k", "3",
                       "--tprec", "2", "--uprec", "16")
    assert code == EX_BUDGET


def test_omega_verify_usage_error(capsys):
    code, _, err = run(capsys, "omega-verify", "--q", "2", "--k", "0",
                       "--tprec", "0", "--uprec", "32")
    assert code == EX_USAGE
    assert "tprec" in err


def test_omega_dump(tmp_path, capsys):
    dump = tmp_path / "omega.json"
    code, _, _ = run(capsys, "omega-verify", "--q", "2", "--k", "0",
                     "--tprec", "4", "--uprec", "32", "--dump-omega", str(dump))
    assert code == EX_OK
    obj = json.loads(dump.read_text())
    assert obj["q"] == 2 and len(obj["entries"]) == 4
    assert obj["entries"][0]["val"] == -1


def test_rep_example(capsys):
    code, out, _ = run(capsys, "rep", "--q", "2", "--k", "1", "--n", "2",
                       "--unit", "1+t+t^2")
    assert code == EX_OK
    obj = json.loads(out)
    assert obj["rows"] == ["1+t", "1"]


def test_rep_parse_error(capsys):
    code, _, err = run(capsys, "rep", "--q", "2", "--k", "1", "--n", "2",
                       "--unit", "1+bogus")
    assert code == EX_USAGE


def test_rep_nonunit(capsys):
    code, _, _ = run(capsys, "rep", "--q", "2", "--k", "1", "--n", "2", "--unit", "t")
    assert code == EX_USAGE


def test_torsion_level_cli(capsys):
    code, out, _ = run(capsys, "torsion-level", "--p", "2", "--n", "1", "--k", "1")
    assert code == EX_OK and json.loads(out)["m"] == 1
    code, out, _ = run(capsys, "torsion-level", "--p", "5", "--n", "3", "--k", "0")
    assert code == EX_OK and json.loads(out)["m"] == 3


def test_torsion_level_bad_p(capsys):
    code, _, _ = run(capsys, "torsion-level", "--p", "6", "--n", "1", "--k", "1")
    assert code == EX_USAGE


def test_zariski_cli(capsys):
    code, out, _ = run(capsys, "zariski", "--q", "2", "--k", "1", "--deg", "2",
                       "--tdeg", "1", "--n", "4")
    assert code == EX_OK
    obj = json.loads(out)
    assert obj["full_rank"] is True and obj["rank"] == 12


def test_unknown_flag_exits_64(capsys):
    assert run(capsys, "density", "--bogus")[0] == EX_USAGE


def test_missing_command_exits_64(capsys):
    assert run(capsys)[0] == EX_USAGE


def test_unresolvable_q(capsys):
    code, _, err = run(capsys, "density", "--q", "64", "--k", "0", "--nmax", "2")
    assert code == EX_USAGE


def test_config_env_var(tmp_path, capsys, monkeypatch):
    cfg = tmp_path / "fields.cfg"
    cfg.write_text("q=49 poly=3,1,1\n")  # x^2 + x + 3 over F_7
    monkeypatch.setenv("CARLITZ_CONFIG", str(cfg))
    out = tmp_path / "d.csv"
    code, _, _ = run(capsys, "density", "--q", "49", "--k", "0", "--nmax", "3",
                     "--mode", "formula", "--out", str(out))
    assert code == EX_OK
    rows = out.read_text().splitlines()[1:]
    assert int(rows[2].split(",")[2]) == 48 * 49 ** 2


def test_mismatch_exit_code(capsys, monkeypatch):
    import carlitz.density as dmod

    real = dmod.image_order_formula
    monkeypatch.setattr(dmod, "image_order_formula",
                        lambda spec, k, n: real(spec, k, n) + (n == 2))
    code, _, err = run(capsys, "density", "--q", "2", "--k", "1", "--nmax", "4")
    assert code == EX_MISMATCH
    assert "N=2" in err


def test_determinism_across_threads_and_runs(tmp_path, capsys):
    outs = []
    for i, threads in enumerate(["1", "4", "1"]):
        path = tmp_path / f"run{i}.csv"
        code, _, _ = run(capsys, "density", "--q", "3", "--k", "2", "--nmax", "6",
                         "--mode", "both", "--threads", threads, "--out", str(path))
        assert code == EX_OK
        outs.append(path.read_bytes())
    assert outs[0] == outs[1] == outs[2]


def test_golden_files(tmp_path, capsys):
    golden_dir = os.path.join(os.path.dirname(__file__), "golden")
    cases = [
        ("density_q2_k1_n8.csv",
         ["density", "--q", "2", "--k", "1", "--nmax", "8", "--mode", "both"]),
        ("density_q3_k1_n6.json",
         ["density", "--q", "3", "--k", "1", "--nmax", "6", "--mode", "both",
          "--format", "json"]),
        ("tensor_q2_d2_n8.csv",
         ["tensor", "--q", "2", "--d", "2", "--nmax", "8", "--mode", "both"]),
    ]
    for name, argv in cases:
        out = tmp_path / name
        code, _, _ = run(capsys, *argv, "--out", str(out))
        assert code == EX_OK
        want = open(os.path.join(golden_dir, name), "rb").read()
        assert out.read_bytes() == want, f"golden mismatch for {name}"
