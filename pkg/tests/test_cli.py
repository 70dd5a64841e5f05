"""CLI thin client: exit codes and deterministic CSV output."""

from linwidths.cli import main

CASE5_CONCRETE = """\
r = 2
d = 1
p0 = 4/3
p1 = 4/3
q = 4
beta = 1
sigma = 2
lambda = 0
"""

CASE1_ABSTRACT = """\
p0 = 2
p1 = 2
q = 2
s_star = 2
gamma_star = 1
mu_star = 1
alpha_star = 1
k_star = 1
"""


def run(argv, capsys):
    try:
        code = main(argv)
    except SystemExit as exc:
        code = exc.code
    out, err = capsys.readouterr()
    return code, out, err


def test_classify_exit_codes(capsys):
    code, out, _ = run(["classify", "--p0", "3", "--p1", "3", "--q", "2"], capsys)
    assert code == 0 and out.startswith("case 1, j0=2")

    code, out, _ = run(["classify", "--p0", "5", "--p1", "3/2", "--q", "4"], capsys)
    assert code == 2 and "gap a" in out

    code, _, err = run(["classify", "--p0", "2", "--p1", "2", "--q", "inf"], capsys)
    assert code == 1 and "finite" in err


def test_exponents_csv(tmp_path, capsys):
    path = tmp_path / "case5.params"
    path.write_text(CASE5_CONCRETE)
    code, out, err = run(["exponents", "--params", str(path)], capsys)
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "j,theta_j,is_dominant,lower_bound_label"
    assert lines[3].startswith("3,3/4,1,")
    assert "theta_tilde=1" in err and "theta_hat=1/2" in err


def test_exponents_gap_exit_2(tmp_path, capsys):
    path = tmp_path / "gap.params"
    path.write_text(CASE5_CONCRETE.replace("p0 = 4/3", "p0 = 5").replace("p1 = 4/3", "p1 = 3/2"))
    code, _, err = run(["exponents", "--params", str(path)], capsys)
    assert code == 2 and "gap a" in err


def test_params_file_rejects_mixed_keys(tmp_path, capsys):
    path = tmp_path / "mixed.params"
    path.write_text(CASE5_CONCRETE + "s_star = 2\n")
    code, _, err = run(["exponents", "--params", str(path)], capsys)
    assert code == 1 and "error" in err


def test_simulate_csv_deterministic(tmp_path, capsys):
    path = tmp_path / "case1.params"
    path.write_text(CASE1_ABSTRACT)
    argv = ["simulate", "--params", str(path), "--nmin", "1024", "--nmax", str(2 ** 20)]
    code1, out1, _ = run(argv, capsys)
    code2, out2, _ = run(argv, capsys)
    assert code1 == code2 == 0
    assert out1 == out2
    lines = out1.strip().splitlines()
    assert lines[0] == "n,S,S1,S2,S3,S4,S5,S6,max_lower_probe"
    assert lines[-3].startswith("fitted_slope,")
    assert lines[-2].startswith("predicted,-0.5")
    # case 1 has two peaks: S3..S6 columns empty
    first = lines[1].split(",")
    assert first[4] == first[5] == first[6] == first[7] == ""


def test_simulate_requires_powers_of_two(tmp_path, capsys):
    path = tmp_path / "case1.params"
    path.write_text(CASE1_ABSTRACT)
    code, _, err = run(["simulate", "--params", str(path),
                        "--nmin", "1000", "--nmax", str(2 ** 20)], capsys)
    assert code == 1 and "powers of two" in err


def test_simulate_gap_tuple_exit_2(tmp_path, capsys):
    path = tmp_path / "gap.params"
    path.write_text(CASE5_CONCRETE.replace("p0 = 4/3", "p0 = 5")
                    .replace("p1 = 4/3", "p1 = 3/2"))
    code, _, err = run(["simulate", "--params", str(path),
                        "--nmin", "1024", "--nmax", str(2 ** 20)], capsys)
    assert code == 2 and "UncoveredCase" in err


def test_simulate_ambiguous_exit_2(tmp_path, capsys):
    path = tmp_path / "tie.params"
    path.write_text(CASE1_ABSTRACT.replace("p0 = 2", "p0 = 4")
                    .replace("p1 = 2", "p1 = 4")
                    .replace("s_star = 2", "s_star = 1/3")
                    .replace("mu_star = 1", "mu_star = -7/12"))
    code, _, err = run(["simulate", "--params", str(path),
                        "--nmin", "1024", "--nmax", str(2 ** 20)], capsys)
    assert code == 2 and "AmbiguousDominance" in err


def test_ballwidth_cli(capsys):
    code, out, _ = run(["ballwidth", "--p", "inf", "--q", "1", "--N", "3",
                        "--n", "1", "--brute-force"], capsys)
    assert code == 0
    assert "value,2" in out and "regime,exact" in out and "brute_value,2" in out

    code, _, err = run(["ballwidth", "--p", "1", "--q", "inf", "--N", "4", "--n", "1"],
                       capsys)
    assert code == 2 and "RegimeUnsupported" in err


def test_verify_cli_seeded_reproducible(capsys):
    code1, out1, _ = run(["verify", "--seed", "5"], capsys)
    code2, out2, _ = run(["verify", "--seed", "5"], capsys)
    assert code1 == code2 == 0
    assert out1 == out2
    assert "seed,5" in out1


def test_verify_cli_negative_control(capsys):
    code, out, _ = run(["verify", "--seed", "5", "--self-test-perturb"], capsys)
    assert code == 0 and "perturbation detected" in out
