import numpy as np
import pytest

from pyrelay.beamforming import (
    Codebook,
    GeometricClassifier,
    build_codebook,
    channel_features,
    channel_ridge,
    channel_spd,
    classify,
    exp_correlation,
    genie_rate,
    link_rate,
    sample_channel,
    sample_channels,
    steering_vector,
    train_classifier,
)
from pyrelay.spd import log_euclidean_mean
from pyrelay.tools import make_rng

USER_PHASES = (np.pi, 0.0)


def training_set(rng, n_antennas, n_per_user, magnitude=0.5):
    channels = [
        sample_channels(exp_correlation(n_antennas, magnitude, phase), rng, n_per_user)
        for phase in USER_PHASES
    ]
    return np.vstack(channels), np.repeat([1, 2], n_per_user)


def spd_matrices(channels, epsilon):
    return [channel_spd(h, epsilon) for h in channels]


def phase_aligned(c, target):
    """c rotated by the global phase that best matches target"""
    phase = np.vdot(c, target)
    return c * phase / abs(phase)


def test_uncorrelated_antennas():
    np.testing.assert_allclose(exp_correlation(3, 0.0, 1.0).entries, np.eye(3))


def test_two_antennas_opposite_phase():
    q = exp_correlation(2, 0.5, np.pi)
    np.testing.assert_allclose(q.entries, [[1, -0.5], [-0.5, 1]], atol=1e-15)


def test_four_antennas_first_row():
    q = exp_correlation(4, 0.5, 0.0)

    np.testing.assert_allclose(q.entries[0], [1, 0.5, 0.25, 0.125])
    np.testing.assert_allclose(np.diag(q.entries), np.ones(4))
    np.testing.assert_allclose(q.entries, q.entries.conj().T)


def test_correlation_entries_below_diagonal_are_conjugate():
    q = exp_correlation(3, 0.5, np.pi / 3)
    t = 0.5 * np.exp(1j * np.pi / 3)

    assert q.entries[0, 2] == pytest.approx(t**2)
    assert q.entries[2, 0] == pytest.approx(np.conj(t) ** 2)
    assert q.eigenvalues[0] > 0


@pytest.mark.parametrize("magnitude", [1.0, 1.5, -0.1])
def test_correlation_magnitude_out_of_range(magnitude):
    with pytest.raises(ValueError, match="magnitude"):
        exp_correlation(2, magnitude, 0.0)


def test_white_channels_have_identity_covariance(rng):
    h = sample_channels(exp_correlation(3, 0.0, 0.0), rng, 100_000)
    covariance = h.T @ h.conj() / len(h)

    assert np.max(np.abs(covariance - np.eye(3))) < 0.05


def test_channel_covariance_converges(rng):
    q = exp_correlation(4, 0.5, np.pi / 3)
    h = sample_channels(q, rng, 100_000)
    covariance = h.T @ h.conj() / len(h)

    assert np.linalg.norm(covariance - q.entries) < 0.05 * np.linalg.norm(q.entries)


def test_channel_sampling_is_reproducible():
    q = exp_correlation(4, 0.5, 0.0)

    first = sample_channels(q, make_rng(3, 1), 10)
    second = sample_channels(q, make_rng(3, 1), 10)
    np.testing.assert_array_equal(first, second)

    sample = sample_channel(q, make_rng(3, 1), user=2)
    np.testing.assert_array_equal(sample.h, first[0])
    assert sample.user == 2


def test_zero_channel_gives_ridge():
    np.testing.assert_allclose(channel_spd(np.zeros(3), 0.1).entries, 0.1 * np.eye(3))


def test_unit_channel():
    matrix = channel_spd([1.0, 0.0, 0.0], 0.01)
    np.testing.assert_allclose(matrix.entries, np.diag([1.01, 0.01, 0.01]))


def test_channel_matrix_spectrum(rng):
    for _ in range(20):
        h = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        matrix = channel_spd(h, 1e-3)

        assert matrix.eigenvalues[-1] == pytest.approx(np.linalg.norm(h) ** 2 + 1e-3)
        np.testing.assert_allclose(matrix.eigenvalues[:-1], 1e-3, rtol=1e-6)


@pytest.mark.parametrize("epsilon", [0.0, -1e-3])
def test_non_positive_ridge_is_rejected(epsilon):
    with pytest.raises(ValueError, match="epsilon"):
        channel_spd([1.0, 1.0], epsilon)


def test_ridge_scales_with_channel_power():
    channels = np.array([[1.0, 1.0], [2.0, 0.0]])
    assert channel_ridge(channels, 1e-3) == pytest.approx(3e-3)


def test_features_have_one_coordinate_per_real_parameter(rng):
    channels, _ = training_set(rng, 4, 3)
    assert channel_features(spd_matrices(channels, 1e-3)).shape == (6, 16)


def test_separated_singletons():
    matrices = spd_matrices([np.array([1.0, 1.0]), np.array([1.0, -1.0])], 0.01)
    classifier = train_classifier(matrices, [1, 2])

    assert classify(classifier, matrices[0]) == 1
    assert classify(classifier, matrices[1]) == 2


@pytest.mark.parametrize("n_antennas, threshold", [(2, 0.7), (4, 0.8)])
def test_training_accuracy(n_antennas, threshold):
    accuracies = []
    for seed in range(5):
        channels, labels = training_set(make_rng(seed), n_antennas, 50)
        matrices = spd_matrices(channels, channel_ridge(channels))
        classifier = train_classifier(matrices, labels)

        predicted = [classify(classifier, matrix) for matrix in matrices]
        accuracies.append(np.mean(np.array(predicted) == labels))

    assert np.mean(accuracies) >= threshold


def test_duplicated_training_set_gives_same_classifier(rng):
    channels, labels = training_set(rng, 2, 20)
    matrices = spd_matrices(channels, channel_ridge(channels))

    once = train_classifier(matrices, labels)
    twice = train_classifier(matrices + matrices, np.concatenate([labels, labels]))

    np.testing.assert_allclose(twice.weights, once.weights, rtol=1e-2, atol=1e-3)
    assert twice.bias == pytest.approx(once.bias, rel=1e-2, abs=1e-3)


def test_decision_is_affine_in_the_features(rng):
    channels, labels = training_set(rng, 4, 20)
    epsilon = channel_ridge(channels)
    classifier = train_classifier(spd_matrices(channels, epsilon), labels)

    test_channels, _ = training_set(rng, 4, 10)
    test_matrices = spd_matrices(test_channels, epsilon)
    expected = channel_features(test_matrices) @ classifier.weights + classifier.bias

    for matrix, value in zip(test_matrices, expected):
        assert classifier.decision_function(matrix) == pytest.approx(value, abs=1e-12)
        assert classify(classifier, matrix) == (2 if value > 0 else 1)


def test_boundary_belongs_to_first_group():
    classifier = GeometricClassifier()
    classifier.weights = np.zeros(4)
    classifier.bias = 0.0
    classifier.dim = 2

    assert classify(classifier, channel_spd([1.0, 1.0j], 0.1)) == 1


def test_labels_stable_under_tiny_perturbation(rng):
    channels, labels = training_set(rng, 2, 20)
    epsilon = channel_ridge(channels)
    classifier = train_classifier(spd_matrices(channels, epsilon), labels)

    for h in channels:
        delta = 1e-11 * (rng.standard_normal(2) + 1j * rng.standard_normal(2))
        value = classifier.decision_function(channel_spd(h, epsilon))
        perturbed = classifier.decision_function(channel_spd(h + delta, epsilon))

        assert perturbed == pytest.approx(value, abs=1e-6)
        if abs(value) > 1e-6:
            assert np.sign(perturbed) == np.sign(value)


def test_classifier_rejects_other_dimension(rng):
    channels, labels = training_set(rng, 2, 5)
    classifier = train_classifier(spd_matrices(channels, 1e-3), labels)

    with pytest.raises(ValueError, match="Dimension mismatch"):
        classify(classifier, channel_spd(np.ones(4), 1e-3))


def test_untrained_classifier():
    with pytest.raises(ValueError, match="not been trained"):
        GeometricClassifier().predict(channel_spd([1.0, 0.0], 0.1))


@pytest.mark.parametrize(
    "labels, message",
    [([1, 1, 1], "both groups"), ([1, 2, 3], "Labels must be 1 or 2"), ([1, 2], "One label")],
)
def test_invalid_training_labels(rng, labels, message):
    matrices = spd_matrices(rng.standard_normal((3, 2)), 0.1)

    with pytest.raises(ValueError, match=message):
        train_classifier(matrices, labels)


@pytest.mark.parametrize(
    "n_antennas, theta, expected",
    [
        (2, np.pi / 2, np.array([1, 1]) / np.sqrt(2)),
        (2, 0.0, np.array([1, -1]) / np.sqrt(2)),
        (4, np.pi / 2, np.array([1, 1, 1, 1]) / 2),
        (4, 0.0, np.array([1, -1, 1, -1]) / 2),
    ],
)
def test_steering_vector(n_antennas, theta, expected):
    np.testing.assert_allclose(steering_vector(n_antennas, theta), expected, atol=1e-12)


def array_directions(n_antennas):
    """Codewords matching user phases pi (group 1) and 0 (group 2)"""
    return {
        1: np.array([(-1) ** m for m in range(n_antennas)]) / np.sqrt(n_antennas),
        2: np.ones(n_antennas) / np.sqrt(n_antennas),
    }


def training_codebooks(n_antennas, angle_grid_size, n_seeds=20):
    for seed in range(n_seeds):
        channels, labels = training_set(make_rng(seed), n_antennas, 100)
        grouped = {group: channels[labels == group] for group in (1, 2)}
        yield build_codebook(grouped, n_antennas, 10.0, angle_grid_size=angle_grid_size)


@pytest.mark.parametrize("n_antennas", [2, 4])
def test_coarse_codebook_recovers_array_directions(n_antennas):
    expected = array_directions(n_antennas)

    recovered = 0
    for codebook in training_codebooks(n_antennas, angle_grid_size=3):
        deviation = max(
            np.max(np.abs(phase_aligned(codebook.codeword(g), expected[g]) - expected[g]))
            for g in (1, 2)
        )
        recovered += deviation <= 1e-9

    assert recovered >= 18


@pytest.mark.parametrize("n_antennas", [2, 4])
def test_default_codebook_is_close_to_array_directions(n_antennas):
    # compared in codeword space, theta is flat around 0 and pi
    expected = array_directions(n_antennas)

    close = 0
    for codebook in training_codebooks(n_antennas, angle_grid_size=181):
        alignment = min(abs(np.vdot(codebook.codeword(g), expected[g])) for g in (1, 2))
        close += alignment >= 0.97

    assert close >= 18


def test_alignment_is_taken_against_the_log_euclidean_mean(rng):
    channels, labels = training_set(rng, 4, 30)
    group = channels[labels == 2]

    codebook = build_codebook({2: group}, 4, 10.0, epsilon=0.01)
    mean = log_euclidean_mean([channel_spd(h, 0.01) for h in group])

    dominant = mean.eigenvectors[:, -1]
    assert codebook.alignments[0] == pytest.approx(abs(np.vdot(codebook.codeword(2), dominant)))


@pytest.mark.parametrize("n_antennas", [2, 4])
def test_codewords_align_with_group_covariance(rng, n_antennas):
    channels, labels = training_set(rng, n_antennas, 100)
    grouped = {group: channels[labels == group] for group in (1, 2)}
    codebook = build_codebook(grouped, n_antennas, 10.0)

    assert codebook.groups == (1, 2)
    assert len(codebook) == 2
    assert min(codebook.alignments) >= 0.95
    assert all(0.0 <= theta <= np.pi for theta in codebook.angles)


def test_codeword_of_identical_channels(rng):
    h = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    codebook = build_codebook({1: np.tile(h, (5, 1))}, 4, 10.0, angle_grid_size=91)

    grid_gains = [
        abs(np.vdot(h, steering_vector(4, theta))) for theta in np.linspace(0, np.pi, 91)
    ]
    assert abs(np.vdot(h, codebook.codeword(1))) == pytest.approx(max(grid_gains), rel=1e-12)


def test_empty_group_is_rejected():
    with pytest.raises(ValueError, match="no channels"):
        build_codebook({1: np.ones((3, 2)), 2: []}, 2, 10.0)


def test_codewords_must_have_unit_norm():
    with pytest.raises(ValueError, match="unit norm"):
        Codebook(np.array([[1.0, 1.0]]), (1,))


def test_link_rate_of_aligned_channel():
    assert link_rate([1.0, 0.0], [1.0, 0.0], 1.0) == 1.0


def test_link_rate_of_orthogonal_channel():
    assert link_rate([1.0, 1.0], np.array([1.0, -1.0]) / np.sqrt(2), 10.0) == 0.0


def test_matched_beamformer_reaches_the_bound(rng):
    h = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    c = h / np.linalg.norm(h)

    assert link_rate(h, c, 10.0) == pytest.approx(np.log2(1 + 10.0 * np.linalg.norm(h) ** 2))


def test_link_rate_rejects_invalid_input():
    with pytest.raises(ValueError, match="unit norm"):
        link_rate([1.0, 0.0], [1.0, 1.0], 1.0)
    with pytest.raises(ValueError, match="snr"):
        link_rate([1.0, 0.0], [1.0, 0.0], 0.0)


def test_genie_rate_of_single_codeword(rng):
    h = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    codebook = Codebook(np.array([steering_vector(2, 1.0)]), (1,))

    genie = genie_rate(h, codebook, 10.0)
    assert genie.rate == link_rate(h, codebook.codewords[0], 10.0)
    assert genie.codeword_index == 0


def test_genie_rate_with_matched_codeword(rng):
    h = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    codebook = Codebook(np.array([steering_vector(4, 0.3), h / np.linalg.norm(h)]), (1, 2))

    genie = genie_rate(h, codebook, 10.0)
    assert genie.codeword_index == 1
    assert genie.rate == pytest.approx(genie.mrt_bound)


def test_genie_rate_is_best_of_codebook(rng):
    codebook = Codebook(
        np.array([steering_vector(2, 0.0), steering_vector(2, np.pi / 2)]), (1, 2)
    )
    for _ in range(20):
        h = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        rates = [link_rate(h, c, 10.0) for c in codebook.codewords]
        genie = genie_rate(h, codebook, 10.0)

        assert genie.rate == max(rates)
        assert genie.mrt_bound >= genie.rate


def test_classified_rate_never_beats_the_genie(rng):
    channels, labels = training_set(rng, 4, 50)
    epsilon = channel_ridge(channels)
    classifier = train_classifier(spd_matrices(channels, epsilon), labels)
    codebook = build_codebook(
        {group: channels[labels == group] for group in (1, 2)}, 4, 10.0
    )

    test_channels, _ = training_set(rng, 4, 20)
    for h in test_channels:
        group = classify(classifier, channel_spd(h, epsilon))
        rate = link_rate(h, codebook.codeword(group), 10.0)
        genie = genie_rate(h, codebook, 10.0)

        assert 0.0 <= rate <= genie.rate <= genie.mrt_bound
