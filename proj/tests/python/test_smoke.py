"""Smoke tests for the python bindings: end-to-end fit, losses, IO round trip."""

import math

import numpy as np
import pytest

import mdu


def test_version_string():
    parts = mdu.__version__.split(".")
    assert len(parts) == 3
    assert all(p.isdigit() for p in parts)


def test_link_function_values():
    link = mdu.LinkFunction(0.1)
    assert link.eval(0.0) == pytest.approx(0.950042, abs=1e-6)
    assert link.eval(1.0) == pytest.approx(0.499480, abs=1e-6)
    assert link.deriv(0.0) == pytest.approx(link.eval(0.0) * (link.eval(0.0) / 2 - 1))
    with pytest.raises(Exception):
        mdu.LinkFunction(0.1).eval(-0.5)


def test_fit_recovers_small_configuration():
    truth = mdu.random_configuration(40, 12, 2, 0.9, seed=5)
    data = mdu.generate_responses(truth, 0.1, seed=6)
    assert data.n_persons == 40 and data.n_items == 12
    assert data.observed_count == 40 * 12

    options = mdu.FitOptions()
    options.dim = 2
    options.bound = 1.5
    options.delta = 0.1
    options.n_starts = 2
    options.seed = 7
    options.tol = 1e-5
    fit = mdu.fit_multistart(data, options)

    assert fit.converged
    assert len(fit.per_start_objectives) == 2
    assert fit.final_objective == min(fit.per_start_objectives)
    # negative log-likelihood trace from the winning start is monotone decreasing
    trace = np.asarray(fit.trace)
    assert np.all(np.diff(trace) <= 1e-9)

    # fitted points stay in the prescribed ball
    assert np.linalg.norm(fit.config.persons, axis=1).max() <= 1.5 + 1e-9
    assert np.linalg.norm(fit.config.items, axis=1).max() <= 1.5 + 1e-9

    dist = mdu.distance_matrix_loss(
        mdu.partial_distance_matrix(fit.config), mdu.partial_distance_matrix(truth)
    )
    conf = mdu.average_config_loss(truth, fit.config)
    assert 0 < dist < 1.0
    assert 0 < conf < 1.0


def test_alignment_recovers_isometry():
    truth = mdu.random_configuration(30, 8, 2, 1.0, seed=11)
    angle = 1.1
    rot = np.array(
        [[math.cos(angle), -math.sin(angle)], [math.sin(angle), math.cos(angle)]]
    )
    shift = np.array([0.4, -0.2])
    moved = mdu.Configuration(
        truth.persons @ rot.T + shift, truth.items @ rot.T + shift, 2.0
    )
    result = mdu.align_isometry(truth, moved)
    assert result.loss < 1e-12
    realigned = result.isometry.apply(moved.persons)
    assert np.allclose(realigned, truth.persons, atol=1e-9)


def test_response_csv_round_trip(tmp_path):
    values = np.array([[1, 0, 1], [0, 1, 1]], dtype=np.int8)
    mask = np.array([[1, 1, 0], [1, 1, 1]], dtype=np.int8)
    data = mdu.ResponseMatrix(values, mask)
    path = tmp_path / "responses.csv"
    mdu.save_response_csv(data, str(path))
    loaded = mdu.load_response_csv(str(path))
    assert np.array_equal(loaded.mask, mask)
    assert np.array_equal(loaded.values[mask == 1], values[mask == 1])


def test_configuration_csv_round_trip(tmp_path):
    config = mdu.random_configuration(5, 3, 2, 1.0, seed=3)
    path = tmp_path / "config.csv"
    mdu.save_configuration(config, str(path))
    loaded = mdu.load_configuration(str(path))
    assert np.allclose(loaded.persons, config.persons)
    assert np.allclose(loaded.items, config.items)
    with pytest.raises(ValueError):
        mdu.load_configuration(str(path), expect_bound=0.01)


def test_analysis_utilities():
    assert mdu.kendall_tau([1.0, 2.0, 3.0], [1.0, 3.0, 2.0]) == pytest.approx(1.0 / 3.0)
    assert mdu.cluster_agreement([1, 1, 2, 2], [2, 2, 1, 1], 2) == 1.0
    assert mdu.cross_entropy_heterogeneity(1 / 3, 1 / 3, 1 / 3) == pytest.approx(
        math.log(3.0)
    )
    points = np.array([[0.0, 0.0], [0.1, 0.0], [5.0, 5.0], [5.1, 5.0]])
    km = mdu.kmeans(points, 2, restarts=5, seed=1)
    assert km.labels[0] == km.labels[1]
    assert km.labels[2] == km.labels[3]
    assert km.labels[0] != km.labels[2]


def test_tiny_study_runs():
    spec = mdu.StudySpec()
    spec.j_values = [6]
    spec.n_rule = 4
    spec.replications = 2
    spec.n_starts = 1
    spec.seed = 9
    spec.tol = 1e-3
    spec.max_iters = 200
    lines = []
    report = mdu.run_study(spec, lines.append)
    assert len(report.cells) == 1
    cell = report.cells[0]
    assert cell.j == 6 and cell.n_persons == 24
    assert len(cell.distance_losses) == 2
    assert all(loss >= 0 for loss in cell.distance_losses)
    assert lines  # progress callback fired
