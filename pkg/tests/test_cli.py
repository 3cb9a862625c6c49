import io
import json


from fliess import rational as rat
from fliess.cli import main
from fliess.series import load_series, parse_series
from fliess.quasishuffle import qsh_series

ANTIPODE_X0 = "-a^1_{x0} + a^1_{x1} a^1_e + a^1_{x2} a^2_e"


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def test_shuffle_files(tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    a.write_text("x1\n")
    b.write_text("x2\n")
    assert run("shuffle", str(a), str(b)) == (0, "x1 x2 + x2 x1\n")


def test_antipode_example():
    code, text = run("antipode", "--word", "x0", "--out-index", "1", "--m", "2", "--algo", "cfree")
    assert code == 0 and text.strip() == ANTIPODE_X0
    for algo in ("left", "right"):
        assert run("antipode", "--word", "x0", "--m", "2", "--algo", algo)[1].strip() == ANTIPODE_X0


def test_verify_hopf():
    code, text = run("verify", "hopf", "--degree", "5", "--m", "2")
    assert code == 0
    lines = text.splitlines()
    assert lines and all(line.startswith("PASS") for line in lines)
    assert any("coassociativity: 238/238" in line for line in lines)


def test_verify_json_counts():
    code, text = run("verify", "qshuffle", "--format", "json", "--degree", "4")
    report = json.loads(text)
    assert code == 0 and report["ok"]
    assert report["suites"]["qshuffle"]["closed form"]["passed"] > 0


def test_series_roundtrip_through_cli():
    expect = qsh_series(parse_series("x1 x0"), parse_series("x[1,2] - 1/2 x2"), -1)
    for fmt in ("text", "json"):
        code, text = run("qshuffle", "x1 x0", "x[1,2] - 1/2 x2", "--theta", "-1", "--format", fmt)
        assert code == 0 and load_series(text) == expect
        # feed the emitted form back in; the unit leaves it unchanged
        code, again = run("qshuffle", text.strip(), "e", "--theta", "1", "--format", fmt)
        assert code == 0 and load_series(again) == expect


def test_rep_roundtrip(tmp_path):
    code, text = run("rep", "from-series", "x1 x0 - 2 x1")
    assert code == 0
    r = rat.rep_from_json(text)
    path = tmp_path / "r.json"
    path.write_text(text)
    assert run("rep", "coeff", str(path), "--word", "x1 x0") == (0, "1\n")
    code, shuf = run("rep", "shuffle", str(path), str(path))
    r2 = rat.rep_from_json(shuf)
    assert rat.rep_coefficient(r2, "x1 x1 x0 x0") == rat.rep_coefficient(rat.rep_shuffle(r, r), "x1 x1 x0 x0")
    assert rat.reps_equal(rat.rep_from_json(run("rep", "from-series", "x1 x0 - 2 x1")[1]), r)


def test_group_commands():
    assert run("invert", "x1", "--degree", "4")[1].strip() == "-x1 + x0 x1 - x0 x0 x1 + x0 x0 x0 x1"
    assert run("feedback", "x1", "x1", "--degree", "5")[1].strip() == "x1 + x0 x0 x1 + x0 x0 x0 x0 x1"
    assert run("compose", "x1", "x1 x1 + e")[1].strip() == "x0 + x0 x1 x1"
    assert run("modcompose", "x1", "0", "--m", "1")[1].strip() == "x1"
    assert run("groupmul", "x1", "x0", "--degree", "3")[1].strip() == "x0 + x1 + x0 x0"


def test_coproduct_command():
    code, text = run("coproduct", "--word", "x0", "--m", "1", "--format", "json")
    assert code == 0 and len(json.loads(text)["terms"]) == 3


def test_eval_dt_and_simulate(tmp_path):
    sig = tmp_path / "u.csv"
    sig.write_text("k,u0,u1\n1,1/4,1/10\n2,1/4,1/5\n3,1/4,-1/10\n")
    code, text = run("eval-dt", "x1 x1 + x0", "--input", str(sig), "--format", "csv")
    assert code == 0
    assert text.splitlines()[0] == "N,y1" and text.splitlines()[-1] == "3,4/5"
    rep = tmp_path / "r.json"
    rep.write_text(rat.rep_to_json(rat.rep_scale(1, rat.rep_letter_star(1, 1))))
    code, text = run("simulate", str(rep), "--input", str(sig))
    assert code == 0 and text.splitlines()[0] == "N,y1" and len(text.splitlines()) == 5
    code, text = run("eval-dt", str(rep), "--input", str(sig))
    assert code == 0 and json.loads(text)["ok"]


def test_eval_ct_checks(tmp_path):
    sig = tmp_path / "u.csv"
    rows = ["k,t0,h,u1"] + [f"{k},0,0.01,0.2" for k in range(101)]
    sig.write_text("\n".join(rows) + "\n")
    code, text = run("eval-ct", "x1", "--feedback", "x1", "--input", str(sig), "--degree", "10")
    report = json.loads(text)
    assert code == 0 and report["ok"] and report["max_abs_error"] < 1e-6
    rep = rat.rep_to_json(rat.rep_letter_star(1, 1))
    # trapezoid error at h = 0.01 is O(1e-5); the tolerance has to cover it
    argv = ["eval-ct", rep, "--const", "1", "--T", "1", "--h", "0.01", "--degree", "12"]
    code, text = run(*argv, "--tolerance", "1e-4")
    assert code == 0 and json.loads(text)["ok"]
    assert run(*argv, "--tolerance", "1e-7")[0] == 1


def test_eval_dt_tail_bound_certifies_star():
    # (1/2 x1)* at u1 = 1/4: the per-letter bound sums the exact tail
    rep = json.dumps({"alphabet": ["x0", "x1"], "mu": {"x0": [["0"]], "x1": [["1/2"]]},
                      "gamma": ["1"], "lambda": [["1"]]})
    code, text = run("eval-dt", rep, "--const", "1/4", "--N", "5", "--degree", "8")
    report = json.loads(text)
    assert code == 0 and report["certified"] and report["ok"]
    assert report["max_abs_error"] <= report["tail_bound"] * (1 + 1e-12)


def test_eval_dt_outside_guard_is_domain_error():
    rep = rat.rep_to_json(rat.rep_letter_star(1, 1))
    assert run("eval-dt", rep, "--const", "2", "--N", "3", "--degree", "6")[0] == 2


def test_failed_verification_exit_code():
    argv = ["eval-ct", "x1 + 1/2 x1 x1", "--feedback", "1/2 x1", "--const", "0.5", "--T", "0.5",
            "--h", "0.05", "--degree", "9", "--tolerance", "1e-12"]
    code, text = run(*argv)
    assert code == 1 and json.loads(text)["ok"] is False


def test_usage_errors(monkeypatch):
    assert run("bogus")[0] == 2
    assert run("qshuffle", "x1", "x1")[0] == 2
    assert run("invert", "x1")[0] == 2
    assert run("shuffle", "x1 +", "x2")[0] == 2
    assert run("antipode", "--word", "x3", "--m", "2")[0] == 2
    monkeypatch.setenv("FLIESS_DEGREE_CAP", "3,3")
    assert run("shuffle", "x1", "x2", "--degree", "4")[0] == 2
    assert run("antipode", "--word", "x0 x0", "--m", "1")[0] == 2


def test_selftest():
    code, text = run("selftest")
    lines = text.splitlines()
    assert len(lines) == 14 and all(line[:4] in ("PASS", "FAIL") for line in lines)
    assert code == (0 if all(line.startswith("PASS") for line in lines) else 1)
