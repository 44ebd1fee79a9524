import pytest

from nanowords.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


@pytest.fixture
def remark_word(tmp_path):
    return write(tmp_path, "w1.txt", "proj: A=a_1_2\nphrase: A A\n")


@pytest.fixture
def empty_word(tmp_path):
    return write(tmp_path, "w2.txt", "phrase:\n")


class TestValidate:
    def test_valid_phrase(self, capsys, tmp_path):
        f = write(tmp_path, "p.txt", "alpha: a b\ntau: a=b\nproj: A=a B=b\nphrase: A B | B A\n")
        code, out, _ = run(capsys, "validate", f)
        assert code == 0 and "components=2" in out and "letters=2" in out

    def test_count_error_exits_2(self, capsys, tmp_path):
        f = write(tmp_path, "p.txt", "alpha: a\nproj: A=a\nphrase: A A A\n")
        code, _, err = run(capsys, "validate", f)
        assert code == 2 and "twice" in err

    def test_malformed_line_cites_line_number(self, capsys, tmp_path):
        f = write(tmp_path, "p.txt", "alpha: a b\ntau: a-b\nphrase:\n")
        code, _, err = run(capsys, "validate", f)
        assert code == 2 and "line 2" in err

    def test_builtin_conflicts_with_alpha(self, capsys, tmp_path):
        f = write(tmp_path, "p.txt", "alpha: a\nphrase:\n")
        code, _, err = run(capsys, "validate", f, "--builtin", "curves")
        assert code == 2 and "conflicts" in err


class TestInvariants:
    def test_remark_values(self, capsys, remark_word):
        code, out, _ = run(capsys, "invariants", remark_word,
                           "--builtin", "diagonal", "--k", "2")
        assert code == 0
        assert "lk: (a)" in out
        assert "clv: (1,1)" in out
        assert "conditions: satisfied" in out

    def test_empty_word_values(self, capsys, empty_word):
        code, out, _ = run(capsys, "invariants", empty_word,
                           "--builtin", "diagonal", "--k", "2")
        assert code == 0
        assert "lk: (1)" in out
        assert "clv: (0,0)" in out

    def test_phrase_level_report(self, capsys, tmp_path):
        f = write(tmp_path, "p.txt",
                  "proj: A=a B=a\nphrase: A B A B\n")
        code, out, _ = run(capsys, "invariants", f, "--builtin", "curves")
        assert code == 0
        assert "So: 1:" in out and "T: 1:" in out

    def test_links_reports_only_guaranteed_names(self, capsys, tmp_path):
        f = write(tmp_path, "p.txt", "proj: A=a+\nphrase: A A\n")
        code, out, _ = run(capsys, "invariants", f, "--builtin", "links")
        assert code == 0 and "lk:" in out and "So:" not in out

    def test_non_graph_r_is_input_error(self, capsys, tmp_path):
        f = write(tmp_path, "p.txt", "alpha: a\nR:\nproj: A=a\nphrase: A A\n")
        code, _, err = run(capsys, "invariants", f)
        assert code == 2 and "graph of tau" in err

    def test_tsv_format(self, capsys, remark_word):
        code, out, _ = run(capsys, "invariants", remark_word,
                           "--builtin", "diagonal", "--k", "2", "--format", "tsv")
        assert code == 0 and "lk\t(a)" in out


class TestEquiv:
    def test_doubled_letter_one_step(self, capsys, tmp_path):
        f1 = write(tmp_path, "a.txt", "alpha: a\nproj: A=a\nphrase: A A\n")
        f2 = write(tmp_path, "b.txt", "alpha: a\nphrase:\n")
        code, out, _ = run(capsys, "equiv", f1, f2)
        assert code == 0
        assert "verdict: Equivalent" in out and "steps: 1" in out

    def test_lifted_q_blocks_and_lk_separates(self, capsys, remark_word, empty_word):
        code, out, _ = run(capsys, "equiv", remark_word, empty_word,
                           "--builtin", "diagonal", "--k", "2",
                           "--max-letters", "3", "--max-states", "4000")
        assert code == 0
        assert "verdict: NotEquivalent" in out
        assert "separated-by: lk" in out

    def test_square_word_reduces_via_triple_data(self, capsys, tmp_path):
        f1 = write(tmp_path, "a.txt", "proj: A=a B=a\nphrase: A B A B\n")
        f2 = write(tmp_path, "b.txt", "phrase:\n")
        code, out, _ = run(capsys, "equiv", f1, f2, "--builtin", "diagonal",
                           "--max-letters", "8", "--max-states", "500000")
        assert code == 0 and "verdict: Equivalent" in out

    def test_free_orbit_square_word_is_separated(self, capsys, tmp_path):
        # Over the two-symbol free-orbit alphabet the square word does not
        # reduce; the census separates it from the empty word.
        f1 = write(tmp_path, "a.txt", "proj: A=a B=a\nphrase: A B A B\n")
        f2 = write(tmp_path, "b.txt", "phrase:\n")
        code, out, _ = run(capsys, "equiv", f1, f2, "--builtin", "curves",
                           "--max-letters", "4", "--max-states", "20000")
        assert code == 0
        assert "verdict: NotEquivalent" in out
        assert "separated-by: So" in out or "separated-by" not in out

    def test_unknown_exit_code(self, capsys, tmp_path):
        f1 = write(tmp_path, "a.txt", "proj: A=a B=a\nphrase: A B A B\n")
        f2 = write(tmp_path, "b.txt", "phrase:\n")
        code, out, _ = run(capsys, "equiv", f1, f2, "--builtin", "diagonal",
                           "--max-letters", "8", "--max-states", "40")
        assert code == 4 and "verdict: Unknown" in out

    def test_alphabet_mismatch(self, capsys, tmp_path):
        f1 = write(tmp_path, "a.txt", "alpha: a\nproj: A=a\nphrase: A A\n")
        f2 = write(tmp_path, "b.txt", "alpha: a b\nproj: A=a\nphrase: A A\n")
        code, _, err = run(capsys, "equiv", f1, f2)
        assert code == 2


class TestLiftProject:
    def test_lift_then_project_round_trip(self, capsys, tmp_path):
        f = write(tmp_path, "p.txt", "proj: A=a B=a\nphrase: A B | A B\n")
        code, out, _ = run(capsys, "lift", f, "--builtin", "curves")
        assert code == 0
        assert "proj: A=a_1_2 B=a_1_2" in out
        assert "phrase: A B A B" in out
        lifted_file = write(tmp_path, "w.txt",
                            "\n".join(l for l in out.splitlines()
                                      if not l.startswith("#")) + "\n")
        code, out2, _ = run(capsys, "project", lifted_file,
                            "--builtin", "curves", "--k", "2")
        assert code == 0
        assert "phrase: A B | A B" in out2

    def test_project_rejects_condition_violation(self, capsys, tmp_path):
        f = write(tmp_path, "w.txt", "proj: A=a_1_1 B=a_2_2\nphrase: A B A B\n")
        code, _, err = run(capsys, "project", f, "--builtin", "curves", "--k", "2")
        assert code == 2 and "condition (2)" in err

    def test_lift_explicit_alphabet_keeps_base_sections(self, capsys, tmp_path):
        f = write(tmp_path, "p.txt",
                  "alpha: x y\ntau: x=y\nproj: A=x\nphrase: A | A\n")
        code, out, _ = run(capsys, "lift", f)
        assert code == 0
        assert "alpha: x y" in out and "proj: A=x_1_2" in out


class TestEnumerate:
    def test_three_words_on_two_letters(self, capsys, tmp_path):
        f = write(tmp_path, "a.txt", "alpha: a\n")
        code, out, _ = run(capsys, "enumerate", f, "--n", "2")
        lines = [l for l in out.splitlines() if ";" in l]
        assert code == 0 and len(lines) == 3
        assert "total: 3" in out

    def test_tsv_indexing(self, capsys):
        code, out, _ = run(capsys, "enumerate", "--builtin", "diagonal",
                           "--n", "1", "--format", "tsv")
        assert code == 0 and out.splitlines() == ["1\t1 1 ; a"]


class TestClassify:
    def test_doubled_word_joins_empty_class(self, capsys):
        code, out, _ = run(capsys, "classify", "--builtin", "curves", "--n", "1")
        assert code == 0
        assert "consistency: ok" in out
        classes = [l for l in out.splitlines() if l.startswith("class ")]
        # AA reduces to the empty word for both projections: one class.
        assert len(classes) == 1 and "[size 3]" in classes[0]

    def test_zero_letters_single_class(self, capsys):
        code, out, _ = run(capsys, "classify", "--builtin", "curves", "--n", "0")
        assert code == 0
        assert "classes: 1" in out

    def test_truncation_reports_unknown_pairs(self, capsys):
        code, out, _ = run(capsys, "classify", "--builtin", "curves", "--n", "2",
                           "--max-letters", "4", "--max-states", "10")
        assert code == 0
        assert "truncated" in out and "unknown" in out

    def test_tsv_members(self, capsys):
        code, out, _ = run(capsys, "classify", "--builtin", "diagonal", "--n", "1",
                           "--format", "tsv")
        assert code == 0
        assert any(l.startswith("class\t1\t2") for l in out.splitlines())

    def test_output_is_identical_across_runs(self, capsys):
        _, first, _ = run(capsys, "classify", "--builtin", "curves", "--n", "2")
        _, second, _ = run(capsys, "classify", "--builtin", "curves", "--n", "2")
        assert first == second
