import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from entact.activation import ppt_activator, swapping_resource
from entact.cli import main
from entact.io import InputError, decode_matrix, encode_matrix, parse_state_document, state_document
from entact.linalg import BipartiteSpace, max_entangled_projector
from entact.states import DensityMatrix, FourPartySpace, isotropic, maximally_mixed, random_density, random_product

QUBITS = BipartiteSpace(2, 2)


def write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    doc = json.loads(captured.out) if code == 0 and captured.out.startswith("{") else None
    return code, doc, captured.err


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 10_000))
def test_matrix_round_trip_is_lossless(seed):
    rho = random_density(9, seed, BipartiteSpace(3, 3))
    doc = json.loads(json.dumps(state_document(rho)))
    back, fp = parse_state_document(doc)
    assert fp is None
    assert np.max(np.abs(back.matrix - rho.matrix)) <= 1e-15


def test_decode_reports_field():
    with pytest.raises(InputError) as err:
        decode_matrix([[1, 0], [0]], 1)
    assert err.value.field == "matrix"
    with pytest.raises(InputError) as err:
        decode_matrix([[1, 0], "x", [0, 0], [1, 0]], 2)
    assert err.value.field == "matrix[1]"
    assert decode_matrix(encode_matrix(np.eye(2)), 2)[1, 1] == 1


@pytest.mark.parametrize("doc, field", [
    ({"matrix": []}, "dims"),
    ({"dims": [2, 2]}, "matrix"),
    ({"dims": [2, 2], "matrix": encode_matrix(np.eye(4))}, "matrix"),  # trace 4
    ({"dims": [2, 2], "matrix": encode_matrix(np.eye(4) / 4), "density": False}, "density"),
    ({"dims": [2, 2], "matrix": encode_matrix(np.eye(4) / 4), "fourParty": {"m": 2, "d": 2}},
     "fourParty"),
])
def test_parse_errors_name_field(doc, field):
    with pytest.raises(InputError) as err:
        parse_state_document(doc)
    assert err.value.field == field


def test_robustness_command_bell(tmp_path, capsys):
    path = write(tmp_path, "bell.json",
                 state_document(DensityMatrix(max_entangled_projector(2), QUBITS)))
    code, doc, _ = run(capsys, ["robustness", path])
    assert code == 0
    res = doc["results"]
    assert res["value"] == pytest.approx(1.0, abs=1e-6)
    assert res["witness"]["valueOnTarget"] == pytest.approx(-1.0, abs=1e-6)
    assert res["relaxation"] == "ppt-exact"
    assert "iterations" in doc["provenance"] and "wallTime" in doc["provenance"]
    # the emitted witness re-parses
    w = decode_matrix(res["witness"]["matrix"], 4)
    np.testing.assert_allclose(w, w.conj().T, atol=1e-12)


def test_robustness_command_separable_and_three_by_three(tmp_path, capsys):
    code, doc, _ = run(capsys, ["robustness", write(tmp_path, "p.json",
                                                     state_document(random_product(QUBITS, 1)))])
    assert code == 0
    assert doc["results"]["value"] <= 1e-8
    assert np.all(np.array(doc["results"]["witness"]["matrix"]) == 0)
    code, doc, _ = run(capsys, ["robustness", write(tmp_path, "q.json",
                                                     state_document(isotropic(3, 0.5)))])
    assert code == 0
    assert doc["results"]["relaxation"] == "ppt-lower-bound"


def test_report_written_to_out_and_round_trips(tmp_path, capsys):
    src = write(tmp_path, "s.json", state_document(random_density(4, 3, QUBITS)))
    out = tmp_path / "report.json"
    assert main(["robustness", src, "--out", str(out)]) == 0
    assert capsys.readouterr().out == ""
    doc = json.loads(out.read_text())
    noise = decode_matrix(doc["results"]["optimalNoise"], 4)
    again = decode_matrix(json.loads(json.dumps(doc))["results"]["optimalNoise"], 4)
    assert np.max(np.abs(noise - again)) <= 1e-15


def test_teleport_command_examples(tmp_path, capsys):
    code, doc, _ = run(capsys, ["teleport", write(tmp_path, "i.json",
                                                   state_document(isotropic(2, 0.5))), "--dim", "2"])
    assert code == 0
    assert doc["results"]["teleportFidelity"] == pytest.approx(2 / 3, abs=1e-12)
    assert doc["results"]["beatsClassical"] is False
    code, doc, _ = run(capsys, ["teleport", write(tmp_path, "m.json",
                                                   state_document(maximally_mixed(QUBITS))),
                                "--samples", "2000", "--seed", "3"])
    assert code == 0
    assert doc["results"]["teleportFidelity"] == pytest.approx(0.5)
    assert doc["results"]["monteCarlo"]["mean"] == pytest.approx(0.5, abs=1e-12)


def test_teleport_dimension_mismatch_exits_2(tmp_path, capsys):
    path = write(tmp_path, "r.json", state_document(random_density(6, 0, BipartiteSpace(2, 3))))
    code, _, err = run(capsys, ["teleport", path])
    assert code == 2
    assert "dims" in err
    code, _, err = run(capsys, ["teleport", write(tmp_path, "b.json",
                                                   state_document(isotropic(2, 0.7))),
                                "--samples", "5"])
    assert code == 2


def test_malformed_and_missing_input_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["robustness", str(bad)]) == 2
    assert main(["robustness", str(tmp_path / "missing.json")]) == 2
    neg = write(tmp_path, "neg.json", {"dims": [2, 2],
                                       "matrix": encode_matrix(np.diag([0.6, 0.5, 0.1, -0.2]))})
    assert main(["robustness", neg]) == 2
    assert "psd" in capsys.readouterr().err


def test_activate_command(tmp_path, capsys):
    fp = FourPartySpace(2, 2)
    rho = write(tmp_path, "rho.json", state_document(swapping_resource(2, 2, noise=0.1), fp))
    sigma = write(tmp_path, "sigma.json",
                  state_document(DensityMatrix(max_entangled_projector(2), QUBITS)))
    code, doc, _ = run(capsys, ["activate", rho, sigma])
    assert code == 0
    res = doc["results"]
    assert res["activationRatio"] > 0
    assert res["detectionValue"] < 0
    assert res["witnessValueOnSigma"] == pytest.approx(-res["activationRatio"], abs=1e-9)
    assert res["robustnessOfSigma"] == pytest.approx(1.0, abs=1e-6)
    assert isinstance(res["ratioWithinRobustness"], bool)
    assert res["rhoIsPPT"] is False


def test_activate_with_ppt_resource_respects_bound(tmp_path, capsys):
    rho = write(tmp_path, "rho.json", state_document(ppt_activator(0.25), FourPartySpace(2, 2)))
    sigma = write(tmp_path, "sigma.json",
                  state_document(DensityMatrix(max_entangled_projector(2), QUBITS)))
    code, doc, _ = run(capsys, ["activate", rho, sigma])
    assert code == 0
    assert doc["results"]["rhoIsPPT"] is True
    assert doc["results"]["ratioWithinRobustness"] is True


def test_activate_degenerate_exits_1(tmp_path, capsys):
    rho = write(tmp_path, "rho.json", state_document(swapping_resource(2, 2), FourPartySpace(2, 2)))
    sigma = write(tmp_path, "sigma.json",
                  state_document(DensityMatrix(max_entangled_projector(2), QUBITS)))
    code, _, err = run(capsys, ["activate", rho, sigma])
    assert code == 1
    assert "degenerate-gd" in err


def test_activate_incompatible_m_exits_2(tmp_path, capsys):
    rho = write(tmp_path, "rho.json", state_document(swapping_resource(2, 2, 0.1), FourPartySpace(2, 2)))
    sigma = write(tmp_path, "sigma.json", state_document(isotropic(3, 0.5)))
    code, _, err = run(capsys, ["activate", rho, sigma])
    assert code == 2
    assert "fourParty" in err


def test_verify_quick_is_deterministic(tmp_path, capsys):
    out1, out2 = tmp_path / "v1.json", tmp_path / "v2.json"
    assert main(["verify", "--quick", "--seed", "1", "--out", str(out1)]) == 0
    assert main(["verify", "--quick", "--seed", "1", "--out", str(out2)]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert sum(line.startswith("PASS") for line in lines) == 22
    assert out1.read_bytes() == out2.read_bytes()
    assert json.loads(out1.read_text())["results"]["passed"] is True
