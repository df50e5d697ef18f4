import json
import math

import pytest

pidkit = pytest.importorskip("pidkit")


def test_copy_gate_atoms():
    atoms = pidkit.atoms(pidkit.Distribution.gate("copy2"), "imin")
    assert list(atoms) == ["{1}{2}", "{1}", "{2}", "{1,2}"]
    assert [atoms[k] for k in atoms] == [1.0, 0.0, 0.0, 1.0]


def test_isx_xor_negative_atom():
    atoms = pidkit.atoms(pidkit.Distribution.gate("xor"), measure="isx")
    assert abs(atoms["{1}{2}"] - math.log2(2 / 3)) < 1e-12


def test_xor_source_copy():
    d = pidkit.Distribution.gate("xor_source_copy")
    assert pidkit.rsi(d) == 1.0
    assert abs(d.mutual_information([1, 2, 3]) - 2.0) < 1e-12
    assert len(pidkit.atoms(d)) == 18
    assert pidkit.consistency_residual(d, "isx") < 1e-9


def test_json_round_trip():
    d = pidkit.Distribution.gate("and")
    again = pidkit.Distribution.from_json(d.to_json())
    assert again == d
    assert again.digest == d.digest
    assert json.loads(d.to_json())["n_sources"] == 2


def test_checks_and_witness():
    tcr = pidkit.check(pidkit.Distribution.gate("copy2"), "tcr", "imin")
    assert tcr["verdict"] == "fail"
    assert "witness" in tcr
    w = pidkit.theorem_witness("imin")
    assert w["verdicts"]["LP"] == "pass"
    assert w["verdicts"]["TCR"] == "fail"
    assert w["steps"]["RSI"] == 1.0


def test_lattice_counts():
    assert [pidkit.parthood_count(n) for n in range(1, 5)] == [1, 4, 18, 166]
    assert pidkit.lattice(2) == ["{1}{2}", "{1}", "{2}", "{1,2}"]


def test_errors():
    with pytest.raises(pidkit.CapacityError):
        pidkit.lattice(5)
    with pytest.raises(ValueError):
        pidkit.Distribution.gate("nand")
    with pytest.raises(ValueError):
        pidkit.Distribution.from_json('{"n_sources": 1}')


def test_cli_in_process():
    code, out, _ = pidkit.run_cli(["lattice", "--n", "2"])
    assert code == 0
    assert "{1}{2}" in out
