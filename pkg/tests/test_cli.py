import json
import subprocess
import sys

import pytest

from fusionlab.cli import main
from fusionlab import io


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    cap = capsys.readouterr()
    return code, cap.out, cap.err


@pytest.fixture
def files(tmp_path, capsys):
    paths = {}
    for name, extra in [("svec", []), ("ising", []), ("semion", []), ("s3", ["--d", "3"])]:
        p = tmp_path / f"{name}.json"
        entry = "rep-dihedral" if name == "s3" else name
        assert main(["catalog", entry, *extra, "--out", str(p)]) == 0
        paths[name] = p
    p = tmp_path / "svec_ising.json"
    assert main(["catalog", "product", str(paths["svec"]), str(paths["ising"]), "--out", str(p)]) == 0
    paths["svec_ising"] = p
    capsys.readouterr()
    return paths


def test_validate_ok(capsys, files):
    code, out, _ = run(capsys, "validate", files["svec"])
    assert code == 0
    assert "CHECK ring.associativity PASS" in out and "CHECK s.symmetric PASS" in out


def test_validate_corrupted(capsys, files, tmp_path):
    obj = json.loads(files["ising"].read_text())
    obj["N"] = [e for e in obj["N"] if e[:3] != [2, 2, 1]]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(obj))
    code, out, _ = run(capsys, "validate", bad)
    assert code == 1 and "FAIL" in out


@pytest.mark.parametrize("text", ["{not json", "[1, 2]", '{"labels": ["1"]}', '{"labels": ["1"], "dual": [3], "N": []}'])
def test_malformed_input(capsys, tmp_path, text):
    p = tmp_path / "x.json"
    p.write_text(text)
    code, _, err = run(capsys, "validate", p)
    assert code == 2 and err.startswith("ERROR input")


def test_missing_file(capsys, tmp_path):
    assert run(capsys, "validate", tmp_path / "nope.json")[0] == 2


def test_analyze(capsys, files):
    code, out, _ = run(capsys, "analyze", files["svec_ising"])
    assert code == 0
    assert "center SlightlyDegenerate" in out
    assert "nilpotency" in out
    code, out, _ = run(capsys, "analyze", files["s3"])
    assert code == 0 and "center Tannakian" in out


def test_super(capsys, files):
    code, out, _ = run(capsys, "super", files["svec_ising"])
    assert code == 0 and "fermion chi" in out
    assert run(capsys, "super", files["svec_ising"], "--seed", 7)[0] == 0
    code, out, _ = run(capsys, "super", files["ising"])
    assert code == 1 and "CenterNotSVecError" in out


def test_catalog_errors(capsys, files):
    assert run(capsys, "catalog", "pointed", "--orders", "2,2", "--form", "99")[0] == 2
    assert run(capsys, "catalog", "product", files["svec"])[0] == 2


def test_catalog_to_stdout(capsys):
    code, out, _ = run(capsys, "catalog", "ty", "--orders", "3")
    assert code == 0
    loaded = io.parse(out)
    assert loaded.ring.rank == 4 and loaded.dims is not None and loaded.twists is None


def test_enumerate(capsys, tmp_path):
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps({"dim_vector": [1, 1, 1, 1], "fermion": True}))
    out_dir = tmp_path / "enum"
    code, out, _ = run(capsys, "enumerate", spec, "--out", out_dir)
    assert code == 0 and "SUMMARY rings=2" in out
    assert json.loads((out_dir / "summary.json").read_text())["rings"] == 2
    assert len(list(out_dir.glob("ring_*.json"))) == 2
    assert run(capsys, "enumerate", spec, "--budget", 1)[0] == 4
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"dim_vector": [2, 2]}))
    assert run(capsys, "enumerate", bad)[0] == 2


def test_classify(capsys, tmp_path):
    out_dir = tmp_path / "cls"
    code, out, _ = run(capsys, "classify", 4, "--out", out_dir)
    assert code == 0 and "SUMMARY fpdim=4" in out
    survivors = sorted(out_dir.glob("survivor_*.json"))
    assert survivors
    loaded = io.load(survivors[0])
    assert loaded.is_premodular and loaded.fermion is not None
    assert run(capsys, "super", survivors[0])[0] == 0


def test_csp_and_obstruct(capsys, tmp_path):
    p = tmp_path / "ty4.json"
    assert main(["catalog", "ty", "--orders", "2,2", "--out", str(p)]) == 0
    prod = tmp_path / "sty.json"
    from fusionlab.catalog import svec, ty_dims, ty_ring
    from fusionlab.fusering import deligne_product
    from fusionlab.groups import AbelianGroup

    G = AbelianGroup((2, 2))
    ring = deligne_product(svec().ring, ty_ring(G))
    dims = [a * b for a in svec().dims for b in ty_dims(G)]
    prod.write_text(json.dumps(io.ring_with_dims_json(ring, dims)))
    capsys.readouterr()
    code, out, _ = run(capsys, "csp", prod, "--fermion", "chi")
    assert code == 3 and "UNSAT" in out
    assert run(capsys, "csp", prod, "--fermion", "zzz")[0] == 2
    assert run(capsys, "csp", p)[0] == 2
    code, out, _ = run(capsys, "obstruct", "LEMMA_4_8")
    assert code == 3 and "CERT E1+E4: 8=0" in out
    code, out, _ = run(capsys, "obstruct", "THM_4_3", "--gamma", "2")
    assert code == 0 and out.strip().endswith("witnesses=16")
    assert run(capsys, "obstruct", "bogus")[0] == 2


def test_conductor_cap_flag(capsys, files):
    code, _, err = run(capsys, "--conductor-cap", "4", "validate", files["ising"])
    assert code == 2 and "conductor" in err
    with pytest.raises(SystemExit):
        main(["--conductor-cap", "0", "validate", str(files["svec"])])


def test_module_entry_point(files):
    proc = subprocess.run([sys.executable, "-m", "fusionlab", "validate", str(files["svec"])], capture_output=True, text=True)
    assert proc.returncode == 0 and "PASS" in proc.stdout
