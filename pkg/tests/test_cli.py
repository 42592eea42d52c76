"""Command-line interface: parsing, outputs, exit codes, determinism."""

import io
import json
from contextlib import redirect_stderr, redirect_stdout

from mpmath import mp, mpf

from zetatel.cli import build_parser, run


def invoke(argv):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = run(argv)
    return code, out.getvalue(), err.getvalue()


class TestHelp:
    def test_documented_flags_in_help(self):
        parser = build_parser()
        text = parser.format_help()
        for sub in ("gosper", "zeilberger", "verify-cert", "mzv", "verify", "list"):
            assert sub in text

    def test_subcommand_flags(self):
        for sub, flags in {
            "gosper": ["--term", "--var", "--json"],
            "zeilberger": ["--term", "--sum", "--param", "--max-order", "--json"],
            "verify-cert": ["--term", "--sum", "--param", "--operator", "--cert"],
            "mzv": ["--kind", "--r", "--indices", "--prec", "--N", "--json"],
            "verify": ["--all", "--kind", "--jobs", "--prec", "--N", "--json",
                       "--timings"],
            "list": ["--export"],
        }.items():
            code, out, _ = invoke([sub, "--help"])
            assert code == 0
            for flag in flags:
                assert flag in out, (sub, flag)


class TestCommands:
    def test_gosper_summable(self):
        code, out, _ = invoke(["gosper", "--term", "2^n", "--var", "n", "--json"])
        assert code == 0
        data = json.loads(out)
        assert data["summable"] and data["certificate"] == "1"

    def test_gosper_not_summable(self):
        code, out, _ = invoke(["gosper", "--term", "Gamma(n)/Gamma(n+1)",
                               "--var", "n"]);
        assert code == 1 and "not Gosper-summable" in out

    def test_zeilberger_workhorse(self):
        code, out, _ = invoke([
            "zeilberger", "--term",
            "y^3*Poch(1+x,n)/(Poch(1-x,n)*(n+1-x)*((n+1)^2-y^2))",
            "--sum", "n", "--param", "x", "--json"])
        assert code == 0
        data = json.loads(out)
        assert data["verified"] is True
        assert data["operator"] == "(x^2+x)*S_x + (-x^2+y^2)"

    def test_verify_cert_accept_and_reject(self):
        args = ["verify-cert", "--term",
                "y^3*Poch(1+x,n)/(Poch(1-x,n)*(n+1-x)*((n+1)^2-y^2))",
                "--sum", "n", "--param", "x",
                "--operator", "x*(1+x)*S_x - (x-y)*(x+y)",
                "--cert", "(-1-n+x)*(1+n-y)*(1+n+y)/(2*x)"]
        code, out, _ = invoke(args)
        assert code == 0 and "verified" in out
        bad = args[:-1] + ["2*(-1-n+x)*(1+n-y)*(1+n+y)/(2*x)"]
        code, out, _ = invoke(bad)
        assert code == 1 and "REJECTED" in out

    def test_mzv_value(self):
        code, out, _ = invoke(["mzv", "--kind", "t", "--indices", "2",
                               "--prec", "96", "--N", "20000"])
        assert code == 0
        with mp.workprec(110):
            target = mp.nstr(mp.pi ** 2 / 8, 15)
        assert target[:12] in out

    def test_mzv_alternating_syntax(self):
        code, out, _ = invoke(["mzv", "--indices", "-2,3", "--prec", "96",
                               "--N", "20000", "--json"])
        assert code == 0
        data = json.loads(out)
        assert data["index"] == "zeta^(0)(-2,3)"
        assert data["value"].startswith("-0.186157")

    def test_mzv_divergent_is_usage_error(self):
        code, _, err = invoke(["mzv", "--indices", "2,1"])
        assert code == 2 and "error" in err

    def test_verify_single_json(self):
        code, out, _ = invoke(["verify", "I-CT-X", "--json"])
        assert code == 0
        data = json.loads(out)
        assert data["id"] == "I-CT-X" and data["status"] == "PASS"
        assert "ms" not in data

    def test_verify_unknown_id(self):
        code, _, err = invoke(["verify", "NO-SUCH-ID"])
        assert code == 2 and "error" in err

    def test_verify_requires_target(self):
        code, _, err = invoke(["verify"])
        assert code == 2

    def test_list_and_export(self):
        code, out, _ = invoke(["list"])
        assert code == 0 and "I-5-THM" in out
        code, out, _ = invoke(["list", "--export"])
        assert code == 0 and out.startswith("ZTREG 1")

    def test_json_determinism(self):
        a = invoke(["verify", "I-ZS2N", "--json", "--N", "40000", "--prec", "160"])
        b = invoke(["verify", "I-ZS2N", "--json", "--N", "40000", "--prec", "160"])
        assert a == b

    def test_usage_error_exit_code(self):
        code, _, _ = invoke(["zeilberger", "--term", "2^n"])
        assert code == 2
