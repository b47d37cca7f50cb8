import pytest

from syncword import automata as fa
from syncword import sequences, synchro
from syncword.cli import main


@pytest.fixture(scope="module")
def built(tmp_path_factory):
    d = tmp_path_factory.mktemp("artifacts")
    out = {}
    for analysis in ("complexity", "appearance", "powers", "primitive", "blockcount"):
        p = d / f"{analysis}.txt"
        assert main(["build", "--seq", "thue_morse", "--analysis", analysis, "--out", str(p)]) == 0
        out[analysis] = p
    return out


def run(argv, capsys):
    code = main(argv)
    return code, capsys.readouterr()


def test_build_header(built):
    A, vars, meta = fa.loads(built["complexity"].read_text())
    assert meta["sequence"] == "thue_morse"
    assert meta["analysis"] == "complexity"
    assert int(meta["states"]) == A.n_states
    assert int(meta["iterations"]) >= 1
    assert vars == ["n", "m"]
    assert A.accepts_values(6, 16)


def test_build_matches_in_memory(built, rho_tm):
    A, _, _ = fa.loads(built["complexity"].read_text())
    assert fa.equivalent(A, rho_tm.graph)


def test_powers_artifact(built):
    A, _, _ = fa.loads(built["powers"].read_text())
    assert A.accepts_values(2, 2)


@pytest.mark.parametrize("analysis,n,want", [
    ("complexity", 0, 1),
    ("complexity", 6, 16),
    ("appearance", 2, 5),
    ("blockcount", 6, 5),
    ("primitive", 4, 8),
])
def test_eval(built, capsys, analysis, n, want):
    code, cap = run(["eval", str(built[analysis]), "--n", str(n)], capsys)
    assert code == 0
    dec, base2 = cap.out.split()
    assert int(dec) == want
    assert int(base2, 2) == want


def test_eval_range_tsv(built, capsys):
    code, cap = run(["eval", str(built["blockcount"]), "--range", "0:14"], capsys)
    assert code == 0
    rows = [line.split("\t") for line in cap.out.strip().splitlines()]
    assert rows[0] == ["n", "value", "base2"]
    assert [int(r[1]) for r in rows[1:]] == [1, 1, 2, 1, 3, 1, 5, 3, 3, 1, 5, 5, 5, 3, 3]


@pytest.mark.parametrize("seq", sequences.BUILTINS)
def test_eval_on_artifact_agrees_with_oracle(tmp_path, capsys, seq):
    from syncword.oracles import oracle_table

    p = tmp_path / "rho.txt"
    assert main(["build", "--seq", seq, "--analysis", "complexity", "--out", str(p)]) == 0
    capsys.readouterr()
    code, cap = run(["eval", str(p), "--range", "0:64"], capsys)
    got = [int(line.split("\t")[1]) for line in cap.out.strip().splitlines()[1:]]
    assert got == oracle_table(sequences.load_dfao(seq), 64, with_powers=False).factors.tolist()


def test_dot_output(tmp_path):
    dot = tmp_path / "rho.dot"
    assert main(["build", "--seq", "thue_morse", "--analysis", "complexity",
                 "--out", str(tmp_path / "rho.txt"), "--dot", str(dot)]) == 0
    text = dot.read_text()
    assert text.startswith("digraph thue_morse_complexity {")
    assert "tracks: n, m" in text


def test_diagram(capsys):
    code, cap = run(["diagram", "--seq", "thue_morse", "--nmax", "9"], capsys)
    assert code == 0
    rows = cap.out.strip().splitlines()
    assert len(rows) == 9
    assert rows[5].split()[0] == "6" and "5 blocks: 0-11|15|19|21|23" in rows[5]
    cells = [r.split()[1] for r in rows]
    assert cells[0].startswith("##.")
    # row n+1 contains row n's cells and their left neighbours
    for a, b in zip(cells, cells[1:]):
        for i, ch in enumerate(a):
            if ch == "#":
                assert b[i] == "#" and (i == 0 or b[i - 1] == "#")
    code, cap = run(["diagram", "--seq", "thue_morse", "--nmax", "1"], capsys)
    assert cap.out.split()[1].rstrip(".") == "##"


def test_verify_passes(capsys):
    code, cap = run(["verify", "--seq", "powers_of_two_char", "--n", "256"], capsys)
    assert code == 0, cap.out
    assert "r+2 unbordered" in cap.out
    assert "FAIL" not in cap.out


def test_verify_catches_corrupted_dfao(tmp_path, capsys):
    text = sequences._data_path("thue_morse").read_text()
    swapped = text.replace("output 0 0", "output 0 T").replace("output 1 1", "output 1 0").replace("output 0 T", "output 0 1")
    p = tmp_path / "corrupt.txt"
    p.write_text(swapped)
    code, cap = run(["verify", "--seq", str(p), "--n", "64"], capsys)
    assert code == 1
    assert "FAIL  DFAO agrees with the thue_morse generator: n=0" in cap.out


@pytest.mark.parametrize("argv,code", [
    (["build", "--seq", "nope", "--analysis", "complexity"], 2),
    (["build", "--seq", "thue_morse", "--analysis", "complexity", "--base", "3"], 2),
    (["build", "--seq", "thue_morse", "--analysis", "complexity", "--iter-cap", "2"], 3),
    (["build", "--seq", "thue_morse", "--analysis", "complexity", "--state-cap", "5"], 3),
    (["verify", "--seq", "thue_morse", "--n", "0"], 2),
    (["diagram", "--seq", "thue_morse", "--nmax", "0"], 2),
    (["eval", "/no/such/file", "--n", "1"], 2),
])
def test_exit_codes(capsys, argv, code):
    got, cap = run(argv, capsys)
    assert got == code
    assert cap.err.startswith("syncword: ")


def test_cap_diagnostic_names_the_flag(capsys):
    _, cap = run(["build", "--seq", "thue_morse", "--analysis", "complexity", "--iter-cap", "2"], capsys)
    assert "--iter-cap" in cap.err
    _, cap = run(["build", "--seq", "thue_morse", "--analysis", "complexity", "--state-cap", "5"], capsys)
    assert "--state-cap" in cap.err


def test_eval_domain_and_malformed(tmp_path, capsys):
    p = tmp_path / "partial.txt"
    F = synchro.sync_from_pairs(2, [(1, 3)])
    p.write_text(fa.dumps(F.graph, ["n", "m"]))
    assert run(["eval", str(p), "--n", "1"], capsys)[0] == 0
    assert run(["eval", str(p), "--n", "2"], capsys)[0] == 2
    assert run(["eval", str(p), "--range", "a:b"], capsys)[0] == 2
    q = tmp_path / "garbage.txt"
    q.write_text("states x\n")
    assert run(["eval", str(q), "--n", "1"], capsys)[0] == 2
    r = tmp_path / "three.txt"
    r.write_text(fa.dumps(fa.universal(2, 3)))
    assert run(["eval", str(r), "--n", "1"], capsys)[0] == 2
