import io
import subprocess
import sys

import pytest

from hyperalg import core
from hyperalg.cli import main


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def test_sample_complexes_with_manifest():
    code, text = run("sample", "--expr", "down($0)", "--vertices", "a,b,c", "--p", "const:0.5",
                     "--seed", "7", "--trials", "3")
    assert code == 0
    manifests = [line for line in text.splitlines() if line.startswith("# seed=")]
    assert manifests == [f"# seed=7 model=down($0) <- const:0.5 trial={i}" for i in range(3)]
    hs = core.parse_hypergraphs(text)
    assert len(hs) == 3 and all(core.is_complex(h) for h in hs)


def test_sample_is_deterministic_and_per_trial():
    _, a = run("sample", "--expr", "$0", "--vertices", "a,b,c", "--seed", "3", "--trials", "4")
    _, b = run("sample", "--expr", "$0", "--vertices", "a,b,c", "--seed", "3", "--trials", "2")
    assert a.startswith(b)


def test_sample_certain_edges():
    _, text = run("sample", "--expr", "$0", "--vertices", "a,b", "--p", "const:1", "--trials", "2")
    assert all(h == core.Hypergraph.full(h.vertex_set) for h in core.parse_hypergraphs(text))


def test_sample_two_leaves():
    code, text = run("sample", "--expr", "$0 * $1", "--vertices", "a,b;c,d",
                     "--p", "const:0.5;const:0.5", "--trials", "2")
    assert code == 0
    assert all(h.vertex_set.labels == ("a", "b", "c", "d") for h in core.parse_hypergraphs(text))


@pytest.mark.parametrize(
    "argv",
    [
        ["sample", "--expr", "up(", "--vertices", "a"],
        ["sample", "--expr", "$0 * $1", "--vertices", "a,b"],
        ["sample", "--expr", "$0", "--vertices", "a", "--p", "const:7"],
        ["sample", "--expr", "$0", "--vertices", "a", "--trials", "0"],
        ["verify", "--check", "no-such-check"],
        ["verify", "--check", "thm3.5-part-1", "--vertices", "a,b,c,d,e"],
        ["enumerate", "--vertices", "a,b", "--class", "other"],
        ["dist", "--vertices", "a,b,c,d,e"],
        ["bogus"],
    ],
)
def test_usage_errors_exit_2(argv):
    assert run(*argv)[0] == 2


def test_verify_pass_and_fail_codes():
    code, text = run("verify", "--check", "thm1.1-all", "--vertices", "a,b,c", "--p", "const:0.5", "--seed", "7")
    assert code == 0
    assert [line.split()[0] for line in text.splitlines()] == ["PASS"] * 5
    code, text = run("verify", "--check", "lemma3.1-join-idown")
    assert code == 1 and text.startswith("FAIL lemma3.1-join-idown")


def test_eval_reads_files(tmp_path):
    path = tmp_path / "h.txt"
    path.write_text("# vertices: v'0 v'1 v'2 v'3\nv'0,v'1\nv'0,v'1,v'2\n\n")
    code, text = run("eval", "--expr", "iup($0)", "--input", str(path))
    assert code == 0
    h = core.parse_hypergraph(text)
    # all supersets of {v'0,v'1} inside the four vertices
    assert len(h) == 4
    assert run("eval", "--expr", "$0 * $1", "--input", str(path))[0] == 2
    assert run("eval", "--expr", "$0", "--input", str(tmp_path / "missing.txt"))[0] == 2


def test_enumerate_complexes():
    code, text = run("enumerate", "--vertices", "a,b", "--class", "complex")
    hs = core.parse_hypergraphs(text)
    assert code == 0 and [h.edge_sets() for h in hs] == [[], [("a",)], [("b",)], [("a",), ("b",)],
                                                        [("a",), ("b",), ("a", "b")]]


def test_dist_uniform():
    code, text = run("dist", "--model", "pbar", "--vertices", "a,b", "--p", "const:0.5")
    rows = [line for line in text.splitlines() if not line.startswith("#")]
    assert code == 0 and rows == [f"{i}\t0.125" for i in range(8)]


def test_dist_of_expression():
    _, text = run("dist", "--expr", "down($0)", "--vertices", "a,b", "--p", "const:0.5")
    masses = [float(line.split("\t")[1]) for line in text.splitlines() if not line.startswith("#")]
    assert sum(masses) == pytest.approx(1.0)
    assert sum(m > 0 for m in masses) == 5


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "hyperalg.cli", "enumerate", "--vertices", "a", "--class", "both"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout == "# vertices: a\n\n# vertices: a\na\n\n"
