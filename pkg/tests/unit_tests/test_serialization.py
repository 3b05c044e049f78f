"""Test matrix, prediction, sidecar, descriptor and model outputs."""

import json

import numpy as np
import pytest

from pycovd.classify import LabeledSet, svm_decision_values, svm_train
from pycovd.divergences import DivergenceKind, PracticalKind
from pycovd.exceptions import DatasetIoError
from pycovd.models.config import RunConfig
from pycovd.models.kernel import KernelSpec
from pycovd.models.reports import AccuracyReport
from pycovd.rkhs_covd import fit_rkhs_covds
from pycovd.rkhs_divergences import divergence_matrix
from pycovd.serialization import (
    read_matrix_csv,
    read_rkhs_covd,
    read_svm_model,
    sidecar_path,
    write_matrix_csv,
    write_predictions_csv,
    write_report_json,
    write_rkhs_covd,
    write_sidecar,
    write_svm_model,
)
from pycovd.spd_core import covariance_descriptor


def test_matrix_csv_is_bit_exact(tmp_path, rng):  # noqa: D103
    # Arrange
    matrix = rng.standard_normal((3, 4)) * 1e-7

    # Act
    path = write_matrix_csv(tmp_path / "d.csv", matrix)

    # Assert
    np.testing.assert_array_equal(read_matrix_csv(path), matrix)


def test_labeled_matrix_csv(tmp_path):  # noqa: D103
    # Act
    path = write_matrix_csv(tmp_path / "d.csv", np.eye(2), labels=["a", "b"])

    # Assert
    assert path.read_text(encoding="utf-8").splitlines()[1] == "b,0,1"
    np.testing.assert_array_equal(read_matrix_csv(path, labeled=True), np.eye(2))


def test_one_by_one_matrix(tmp_path):  # noqa: D103
    path = write_matrix_csv(tmp_path / "d.csv", np.zeros((1, 1)))
    assert path.read_text(encoding="utf-8") == "0\n"


def test_read_matrix_errors(tmp_path):  # noqa: D103
    # Arrange
    bad = tmp_path / "bad.csv"
    bad.write_text("1,2\n3,x\n", encoding="utf-8")

    # Act / Assert
    with pytest.raises(DatasetIoError, match=r"bad\.csv:2"):
        read_matrix_csv(bad)
    with pytest.raises(DatasetIoError):
        read_matrix_csv(tmp_path / "missing.csv")


def test_predictions_csv(tmp_path):  # noqa: D103
    # Act
    path = write_predictions_csv(
        tmp_path / "p.csv", ["s0.csv", "s1.csv"], ["a", "b"], ["a", "a"]
    )

    # Assert
    assert path.read_text(encoding="utf-8").splitlines() == [
        "sample,label,predicted",
        "s0.csv,a,a",
        "s1.csv,b,a",
    ]


def test_sidecar_echoes_config(tmp_path):  # noqa: D103
    # Arrange
    output = tmp_path / "distances.csv"

    # Act
    sidecar = write_sidecar(output, RunConfig(seed=4), {"rho": 0.5})

    # Assert
    assert sidecar == sidecar_path(output) == tmp_path / "distances.csv.json"
    payload = json.loads(sidecar.read_text(encoding="utf-8"))
    assert payload["config"]["seed"] == 4
    assert payload["config"]["divergence"] == "stein_hat"
    assert payload["rho"] == 0.5
    assert RunConfig.model_validate(payload["config"]) == RunConfig(seed=4)


def test_report_json(tmp_path):  # noqa: D103
    # Arrange
    report = AccuracyReport.from_predictions(["a"], ["a"])

    # Act
    path = write_report_json(tmp_path / "report.json", report)

    # Assert
    assert json.loads(path.read_text(encoding="utf-8"))["correct"] == 1


@pytest.fixture
def spd_train(two_clusters):
    """Covariance descriptors of the two clusters."""
    sets, labels = two_clusters
    return LabeledSet(tuple(covariance_descriptor(x) for x in sets), tuple(labels))


@pytest.fixture
def rkhs_train(two_clusters):
    """RBF descriptors of the two clusters with a shared rho."""
    sets, labels = two_clusters
    covds = fit_rkhs_covds(KernelSpec.rbf(1.0), sets, 2)
    return LabeledSet(tuple(covds), tuple(labels))


def test_rkhs_covd_reloads_bit_exactly(rkhs_train, tmp_path):  # noqa: D103
    # Arrange
    originals = list(rkhs_train.descriptors[:4])

    # Act
    reloaded = [
        read_rkhs_covd(write_rkhs_covd(tmp_path / f"covd_{i}.json", covd))
        for i, covd in enumerate(originals)
    ]

    # Assert
    for original, copy in zip(originals, reloaded, strict=True):
        assert copy.kernel == original.kernel
        assert copy.rho == original.rho
        np.testing.assert_array_equal(copy.weights, original.weights)
        np.testing.assert_array_equal(copy.eigenvalues, original.eigenvalues)
        assert copy.fingerprint == original.fingerprint
    for kind in (DivergenceKind.STEIN, PracticalKind.JEFFREYS_HAT):
        np.testing.assert_array_equal(
            divergence_matrix(reloaded, kind), divergence_matrix(originals, kind)
        )


def test_rkhs_covd_record_names_its_shape(rkhs_train, tmp_path):  # noqa: D103
    # Act
    path = write_rkhs_covd(tmp_path / "covd.json", rkhs_train.descriptors[0])

    # Assert
    record = json.loads(path.read_text(encoding="utf-8"))
    assert (record["n"], record["m"], record["r"]) == (2, 60, 2)
    assert record["kernel"]["kind"] == "rbf"
    assert len(record["observations"]) == 2
    assert len(record["weights"]) == 60


def test_svm_model_reloads_with_same_decisions(rkhs_train, tmp_path):  # noqa: D103
    # Arrange
    train = rkhs_train.subset([*range(7), *range(10, 17)])
    queries = [rkhs_train.descriptors[i] for i in (7, 8, 9, 17, 18, 19)]
    model = svm_train(train, PracticalKind.STEIN_HAT, 0.5)

    # Act
    reloaded = read_svm_model(write_svm_model(tmp_path / "svm.json", model))

    # Assert
    assert reloaded.kind == PracticalKind.STEIN_HAT
    assert reloaded.kernel == model.kernel
    assert reloaded.classes == model.classes
    np.testing.assert_array_equal(reloaded.alphas, model.alphas)
    np.testing.assert_array_equal(reloaded.biases, model.biases)
    np.testing.assert_array_equal(
        svm_decision_values(reloaded, queries), svm_decision_values(model, queries)
    )


def test_observation_space_svm_reloads(spd_train, tmp_path):  # noqa: D103
    # Arrange
    model = svm_train(spd_train, DivergenceKind.JEFFREYS, 0.1)

    # Act
    reloaded = read_svm_model(write_svm_model(tmp_path / "svm.json", model))

    # Assert
    assert not reloaded.train.is_rkhs
    np.testing.assert_array_equal(
        svm_decision_values(reloaded, spd_train.descriptors),
        svm_decision_values(model, spd_train.descriptors),
    )


@pytest.mark.parametrize(
    "payload",
    [
        pytest.param("{", id="broken_json"),
        pytest.param('{"kind": "stein"}', id="incomplete"),
    ],
)
def test_read_svm_model_rejects(payload, tmp_path):  # noqa: D103
    # Arrange
    path = tmp_path / "svm.json"
    path.write_text(payload, encoding="utf-8")

    # Act / Assert
    with pytest.raises(DatasetIoError, match="invalid SVM model"):
        read_svm_model(path)


def test_rkhs_covd_record_checks_shapes(rkhs_train, tmp_path):  # noqa: D103
    # Arrange
    path = write_rkhs_covd(tmp_path / "covd.json", rkhs_train.descriptors[0])
    record = json.loads(path.read_text(encoding="utf-8"))
    record["r"] = 3
    path.write_text(json.dumps(record), encoding="utf-8")

    # Act / Assert
    with pytest.raises(DatasetIoError, match="weights has shape"):
        read_rkhs_covd(path)
    with pytest.raises(DatasetIoError, match="cannot read"):
        read_rkhs_covd(tmp_path / "missing.json")
