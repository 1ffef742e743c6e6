import math
import pathlib

import pytest

import eoprop

FIXTURE = pathlib.Path(__file__).resolve().parents[2] / "data" / "fixture"


def test_parse_smiles_ethanol():
    mol = eoprop.parse_smiles("CCO")
    assert [a["element"] for a in mol["atoms"]] == ["C", "C", "O"]
    assert [a["hydrogens"] for a in mol["atoms"]] == [3, 2, 1]
    assert mol["bonds"] == [(0, 1, 1), (1, 2, 1)]


def test_bad_smiles_is_a_value_error():
    with pytest.raises(ValueError):
        eoprop.parse_smiles("C1CC")


def test_ecfp_and_tanimoto():
    fp = eoprop.ecfp("CCO", radius=1, n_bits=2048)
    assert fp.n_bits == 2048
    assert fp.on_bits() == [17, 176, 1245, 1449, 1559, 1871]
    assert eoprop.tanimoto(fp, fp) == 1.0
    other = eoprop.ecfp("c1ccccc1")
    assert 0.0 <= eoprop.tanimoto(eoprop.ecfp("CCO"), other) < 1.0
    assert eoprop.Fingerprint.from_hex(fp.to_hex(), 2048, "ecfp").on_bits() == fp.on_bits()


def test_metrics():
    assert eoprop.auc([0.1, 0.4, 0.35, 0.8], [0, 0, 1, 1]) == 0.75
    roc = eoprop.roc_points([0.3, 0.3], [1, 0])
    assert roc == [(0.0, 0.0), (1.0, 1.0)]
    value, per_label = eoprop.macro_auc([[0.9, 0.1], [0.2, 0.8]], [[1, 0], [0, 0]])
    assert value == 1.0
    assert per_label == [1.0, None]
    with pytest.raises(ValueError):
        eoprop.auc([0.1, 0.2], [1, 1])


def test_split_kfold_partitions():
    folds = eoprop.split_kfold(23, 5, 42)
    assert len(folds) == 5
    assert sorted(i for f in folds for i in f) == list(range(23))


def test_normalize_adjacency():
    a = eoprop.normalize_adjacency([[1.0, 1.0], [1.0, 1.0]])
    assert all(math.isclose(v, 0.5) for row in a for v in row)


def test_cli_pipeline(tmp_path):
    config = str(FIXTURE / "eoprop.toml")
    code, out, _ = eoprop.run_cli(["featurize", "--config", config, "--out", str(tmp_path)])
    assert code == 0
    assert "12 samples" in out
    code, _, err = eoprop.run_cli(
        ["train", "--config", config, "--out", str(tmp_path), "--arch", "gcn", "--loss", "bce", "--epochs", "2"]
    )
    assert code == 0, err
    code, _, _ = eoprop.run_cli(["report", "--out", str(tmp_path)])
    assert code == 0
    assert (tmp_path / "reports" / "summary.json").exists()
    assert eoprop.run_cli(["train", "--arch", "mlp"])[0] == 2
