"""Command-line surface: config loading, subcommands, exit codes, determinism."""

from fractions import Fraction
from pathlib import Path

import pytest

from cmprime.certificate import parse_certificate
from cmprime.cli import ConfigError, load_run_config, main

GOOD_SEQUENCE = """\
[sequence]
d = -7
iota = [2, 1]
gamma = [4, 1]
k = 5
b_seed = 3
alpha = "1/20"
curve_id = "cm7"
"""


@pytest.fixture
def config_file(tmp_path):
    def write(body=GOOD_SEQUENCE, name="family.toml"):
        path = tmp_path / name
        path.write_text(body, encoding="utf-8")
        return path

    return write


class TestLoadRunConfig:
    def test_good_config(self, config_file):
        cfg = load_run_config(config_file())
        assert cfg.params.d == -7
        assert cfg.params.q == 11  # defaults to norm(iota)
        assert cfg.params.alpha_exponent_threshold == Fraction(1, 20)
        assert cfg.curve.id == "cm7"
        assert cfg.seed == 0 and cfg.attempts == 4 and cfg.allow_fallback
        assert cfg.label == "family"

    def test_numeric_alpha(self, config_file):
        body = GOOD_SEQUENCE.replace('alpha = "1/20"', "alpha = 0.05")
        cfg = load_run_config(config_file(body))
        assert cfg.params.alpha_exponent_threshold == Fraction(1, 20)

    def test_extras(self, config_file):
        # run-level keys live above the [sequence] table
        body = "seed = 7\nattempts = 2\nbench_sizes = [3, 4]\n" + GOOD_SEQUENCE
        cfg = load_run_config(config_file(body))
        assert cfg.seed == 7 and cfg.attempts == 2
        assert cfg.bench_sizes == (3, 4)

    @pytest.mark.parametrize(
        "mangle",
        [
            lambda s: s.replace("b_seed = 3\n", ""),
            lambda s: s.replace('curve_id = "cm7"', 'curve_id = "cm17"'),
            lambda s: s.replace('curve_id = "cm7"', 'curve_id = "missing"'),
            lambda s: s.replace('alpha = "1/20"', 'alpha = "0"'),
            lambda s: s.replace('alpha = "1/20"', 'alpha = "huh"'),
            lambda s: s.replace("iota = [2, 1]", "iota = [2]"),
            lambda s: s.replace("[sequence]", "[sequenze]"),
            lambda s: "bench_sizes = [0]\n" + s,
            lambda s: "attempts = 0\n" + s,
            lambda s: "allow_fallback = 1\n" + s,
        ],
    )
    def test_rejections(self, config_file, mangle):
        with pytest.raises(ConfigError):
            load_run_config(config_file(mangle(GOOD_SEQUENCE)))

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_run_config(tmp_path / "nope.toml")


class TestProveCommand:
    def test_prime_member_with_recheck(self, config_file, tmp_path, capsys):
        cert_out = tmp_path / "n3.cert"
        rc = main([
            "prove", "--config", str(config_file()), "--n", "3",
            "--cert-out", str(cert_out), "--verify",
        ])
        out = capsys.readouterr().out
        assert rc == 0
        assert "N = 3581 (4 digits)" in out
        assert "verdict = prime" in out
        assert "method = curve_certificate" in out
        assert "recheck = valid" in out
        cert = parse_certificate(cert_out.read_text(encoding="utf-8"))
        assert cert.n_value == 3581 and cert.e_q == 3

    def test_composite_member(self, config_file, capsys):
        rc = main(["prove", "--config", str(config_file()), "--n", "1"])
        out = capsys.readouterr().out
        assert rc == 0
        assert "verdict = composite" in out
        assert "factor = 2" in out

    def test_default_cert_path_uses_label(self, config_file, tmp_path, capsys):
        body = f'cert_dir = "{tmp_path / "out"}"\n' + GOOD_SEQUENCE
        rc = main(["prove", "--config", str(config_file(body)), "--n", "3"])
        assert rc == 0
        assert (tmp_path / "out" / "family_n3.cert").exists()

    def test_bad_member_index(self, config_file, capsys):
        rc = main(["prove", "--config", str(config_file()), "--n", "0"])
        assert rc == 2
        assert "error:" in capsys.readouterr().err

    def test_stdout_is_deterministic(self, config_file, tmp_path, capsys):
        argv = [
            "prove", "--config", str(config_file()), "--n", "4",
            "--cert-out", str(tmp_path / "a.cert"),
        ]
        assert main(argv) == 0
        first = capsys.readouterr().out
        argv[-1] = str(tmp_path / "b.cert")
        assert main(argv) == 0
        second = capsys.readouterr().out
        assert first.replace("a.cert", "b.cert") == second
        assert (tmp_path / "a.cert").read_text() == (tmp_path / "b.cert").read_text()

    def test_seed_override_changes_point(self, config_file, tmp_path):
        certs = []
        for seed in ("1", "2"):
            path = tmp_path / f"s{seed}.cert"
            rc = main([
                "prove", "--config", str(config_file()), "--seed", seed,
                "--n", "3", "--cert-out", str(path), "--verify",
            ])
            assert rc == 0
            certs.append(parse_certificate(path.read_text()))
        assert certs[0].point_seed != certs[1].point_seed


class TestVerifyCommand:
    def _emit(self, config_file, tmp_path):
        path = tmp_path / "good.cert"
        assert main([
            "prove", "--config", str(config_file()), "--n", "3",
            "--cert-out", str(path),
        ]) == 0
        return path

    def test_valid_certificate(self, config_file, tmp_path, capsys):
        path = self._emit(config_file, tmp_path)
        capsys.readouterr()
        rc = main(["verify", str(path)])
        assert rc == 0
        assert capsys.readouterr().out.strip() == "valid"

    def test_tampered_certificate(self, config_file, tmp_path, capsys):
        path = self._emit(config_file, tmp_path)
        path.write_text(path.read_text().replace("e_q = 3", "e_q = 4"))
        capsys.readouterr()
        rc = main(["verify", str(path)])
        assert rc == 1
        assert capsys.readouterr().out.startswith("invalid: parse:")

    def test_missing_file(self, tmp_path, capsys):
        rc = main(["verify", str(tmp_path / "missing.cert")])
        assert rc == 2
        assert "error:" in capsys.readouterr().err


class TestScanCommand:
    def test_range_rows(self, config_file, capsys):
        rc = main([
            "scan", "--config", str(config_file()), "--n-start", "1",
            "--n-end", "4",
        ])
        out = capsys.readouterr().out.splitlines()
        assert rc == 0
        assert out[0] == "n\tdigits\tverdict\tmethod\tseconds"
        rows = [line.split("\t") for line in out[1:]]
        assert [(r[0], r[2], r[3]) for r in rows] == [
            ("1", "composite", "trial_division"),
            ("2", "composite", "trial_division"),
            ("3", "prime", "curve_certificate"),
            ("4", "prime", "curve_certificate"),
        ]

    def test_empty_range_prints_header_only(self, config_file, capsys):
        rc = main([
            "scan", "--config", str(config_file()), "--n-start", "5",
            "--n-end", "4",
        ])
        out = capsys.readouterr().out.splitlines()
        assert rc == 0 and out == ["n\tdigits\tverdict\tmethod\tseconds"]

    def test_bad_range(self, config_file, capsys):
        rc = main([
            "scan", "--config", str(config_file()), "--n-start", "0",
            "--n-end", "2",
        ])
        assert rc == 2

    def test_parallel_rows_match_serial(self, config_file, capsys):
        argv = [
            "scan", "--config", str(config_file()), "--n-start", "3",
            "--n-end", "4",
        ]
        assert main(argv) == 0
        serial = capsys.readouterr().out
        assert main(argv + ["--jobs", "2"]) == 0
        parallel = capsys.readouterr().out

        def strip_seconds(text):
            return [line.rsplit("\t", 1)[0] for line in text.splitlines()]

        assert strip_seconds(serial) == strip_seconds(parallel)


class TestBenchCommand:
    def test_single_size_smoke(self, config_file, capsys):
        rc = main([
            "bench", "--config", str(config_file()), "--sizes", "3",
            "--bench-seeds", "2",
        ])
        out = capsys.readouterr().out.splitlines()
        assert rc == 0
        assert out[0] == "n\tdigits\tseeds\tmean_seconds"
        n, digits, seeds, mean = out[1].split("\t")
        assert (n, digits, seeds) == ("3", "4", "2")
        assert float(mean) >= 0.0

    def test_requires_sizes(self, config_file, capsys):
        rc = main(["bench", "--config", str(config_file())])
        assert rc == 2
        assert "error:" in capsys.readouterr().err

    def test_rejects_ineligible_member(self, config_file, capsys):
        # member 5 is even, the curve test has no run on it
        rc = main([
            "bench", "--config", str(config_file()), "--sizes", "5",
        ])
        assert rc == 2


class TestLiftResiduesCommand:
    def test_zero_class(self, capsys):
        rc = main([
            "lift-residues", "--d", "-7", "--iota", "2,1", "--beta", "0,0",
        ])
        assert rc == 0
        assert capsys.readouterr().out.strip() == "{0, -2-1*sqrt(-7), 2+1*sqrt(-7)}"

    def test_unit_class(self, capsys):
        rc = main([
            "lift-residues", "--d", "-2", "--iota", "0,1", "--beta", "1,0",
        ])
        assert rc == 0
        assert capsys.readouterr().out.strip() == "{-1, 1}"

    def test_malformed_element(self, capsys):
        rc = main([
            "lift-residues", "--d", "-7", "--iota", "2x1", "--beta", "0,0",
        ])
        assert rc == 2
        assert "error:" in capsys.readouterr().err


class TestParser:
    def test_no_subcommand_is_usage_error(self):
        with pytest.raises(SystemExit) as exc:
            main([])
        assert exc.value.code == 2

    def test_unknown_subcommand(self):
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code == 2
