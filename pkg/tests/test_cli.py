import pytest

from codegree.cli import (
    main,
    read_certificate,
    read_family,
    read_hypergraph,
    write_certificate,
    write_family,
    write_hypergraph,
)
from codegree.construct import base_family
from codegree.family import TypeFamily
from codegree.hypergraph import WalkCertificate, blow_up


def _fam_file(tmp_path, name="b33.fam"):
    path = str(tmp_path / name)
    assert main(["construct", "--kind", "hls", "--k", "3", "--ell", "4",
                 "--out", path]) == 0
    return path


def test_family_round_trip(tmp_path):
    p1 = str(tmp_path / "a.fam")
    p2 = str(tmp_path / "b.fam")
    fam = TypeFamily(3, 4, 3, base_family(3, 3).types)
    write_family(fam, p1)
    back = read_family(p1)
    assert back == fam
    write_family(back, p2)
    assert open(p1).read() == open(p2).read()


def test_family_file_comments_and_no_ell(tmp_path):
    p = tmp_path / "c.fam"
    p.write_text("# a comment\nkld 3 - 3\n2 1 0  # inline\n1 0 2\n0 2 1\n")
    fam = read_family(str(p))
    assert fam.ell is None and len(fam.types) == 3


def test_hypergraph_round_trip(tmp_path):
    p1 = str(tmp_path / "a.hg")
    p2 = str(tmp_path / "b.hg")
    H = blow_up(TypeFamily(3, 4, 3, base_family(3, 3).types), (3, 3, 3))
    write_hypergraph(H, p1)
    back = read_hypergraph(p1)
    assert back.n == H.n and back.k == H.k
    assert frozenset(back.edges) == frozenset(H.edges)
    assert back.partition == H.partition
    write_hypergraph(back, p2)
    # header d is family-derived and absent after reading; compare bodies
    assert open(p1).read().splitlines()[1:] == open(p2).read().splitlines()[1:]


def test_certificate_round_trip(tmp_path):
    p = str(tmp_path / "c.walk")
    cert = WalkCertificate("cycle-minus", (1, 1, 1, 2), missing_window=1)
    write_certificate(cert, p)
    assert read_certificate(p) == cert
    write_certificate(read_certificate(p), p + "2")
    assert open(p).read() == open(p + "2").read()


def test_cli_verify_pass_and_fail(tmp_path):
    fam = _fam_file(tmp_path)
    assert main(["verify", "--family", fam]) == 0
    # drop a required type: P1 fails
    bad = tmp_path / "bad.fam"
    lines = open(fam).read().splitlines()
    bad.write_text("\n".join(lines[:-1]) + "\n")
    assert main(["verify", "--family", str(bad)]) == 1


def test_cli_usage_errors():
    assert main(["construct", "--kind", "hls", "--k", "3", "--ell", "6",
                 "--out", "/tmp/x.fam"]) == 2  # k | ell
    assert main(["detect", "--level", "label", "--ell", "4"]) == 2
    assert main(["verify", "--family", "/nonexistent/file.fam"]) == 2


def test_cli_detect_and_certify(tmp_path, capsys):
    fam = _fam_file(tmp_path)
    assert main(["detect", "--level", "label", "--family", fam, "--ell", "4"]) == 1
    cert = str(tmp_path / "c.walk")
    assert main(["detect", "--level", "label", "--family", fam, "--ell", "6",
                 "--cert-out", cert]) == 0
    assert main(["certify", "--cert", cert, "--family", fam]) == 0
    out = capsys.readouterr().out
    assert "outcome=pass" in out


def test_cli_blowup_analyze(tmp_path):
    b24 = str(tmp_path / "b24.fam")
    assert main(["construct", "--kind", "base", "--k", "4", "--d", "2",
                 "--out", b24]) == 0
    hg = str(tmp_path / "h8.hg")
    assert main(["blowup", "--family", b24, "--sizes", "4,4", "--out", hg]) == 0
    assert main(["analyze", "--graph", hg]) == 0


def test_cli_search_exit_codes(tmp_path):
    assert main(["search", "--mode", "count", "--k", "3", "--ell", "4",
                 "--d", "3"]) == 0
    assert main(["search", "--mode", "brute", "--k", "3", "--ell", "4",
                 "--d", "3"]) == 0
    ck = str(tmp_path / "s.ckpt")
    assert main(["search", "--mode", "exists", "--k", "5", "--ell", "7",
                 "--d", "3", "--budget", "10", "--checkpoint", ck]) == 3
    assert main(["search", "--mode", "exists", "--k", "5", "--ell", "7",
                 "--d", "3", "--checkpoint", ck, "--resume"]) == 0


def test_cli_stable_verify(tmp_path):
    st = str(tmp_path / "st.fam")
    assert main(["construct", "--kind", "stable", "--k", "9", "--ell", "22",
                 "--out", st]) == 0
    assert main(["verify", "--family", st, "--stable"]) == 0
    assert main(["construct", "--kind", "stable", "--k", "9", "--ell", "20",
                 "--out", st]) == 2
