"""
Beamforming
-----------

Relay-specific beamforming codebooks for spatially-correlated MISO
channels: exponential correlation model, channel sampling, a max-margin
(SVM) classifier over the tangent space of the Log-Euclidean geometry,
codebook construction over a uniform array and link rates.

Notes
-----
* A channel h is learned through the SPD matrix h h^H + epsilon I, whose
  Log-Euclidean tangent vector is the classifier feature
* In the tangent space the Log-Euclidean distance is the Euclidean distance,
  so a linear SVM on the features is the SVM of the manifold geometry
"""

import logging
from dataclasses import dataclass

import numpy as np
from sklearn.svm import SVC

from .spd import SpdMatrix, log_euclidean_mean, log_vectorize, sqrtm

logger = logging.getLogger(__name__)

GROUPS = (1, 2)


class CorrelationMatrix(SpdMatrix):
    """
    Exponential transmit correlation matrix Q[i, j] = t^(j - i) for j >= i,
    conjugate below the diagonal

    Attributes
    ----------
    n_antennas : int

    coefficient : complex
        Transmit correlation coefficient t, |t| < 1
    """

    def __init__(self, n_antennas, coefficient):
        t = complex(coefficient)
        entries = [
            [t ** (j - i) if j >= i else (t ** (i - j)).conjugate() for j in range(n_antennas)]
            for i in range(n_antennas)
        ]

        super().__init__(np.array(entries, dtype=complex))
        self.n_antennas = n_antennas
        self.coefficient = complex(coefficient)

    def __repr__(self):
        return (
            f"CorrelationMatrix(n_antennas={self.n_antennas}, "
            f"coefficient={self.coefficient:.4g})"
        )


def exp_correlation(n_antennas, magnitude, phase):
    """
    Exponential correlation model

    Parameters
    ----------
    n_antennas : int
        M

    magnitude : float
        |t|, 0 <= |t| < 1

    phase : float
        Angle of t (radians); it encodes the user direction

    Returns
    -------
    Q : CorrelationMatrix
    """
    if not 0 <= magnitude < 1:
        raise ValueError(
            f"Correlation magnitude must lie in [0, 1) to keep Q positive definite, got {magnitude}"
        )
    return CorrelationMatrix(n_antennas, magnitude * np.exp(1j * phase))


@dataclass(frozen=True)
class ChannelSample:
    """
    Attributes
    ----------
    h : ndarray (complex)
        MISO channel vector, length M

    user : int or None
        True user label (training data only)
    """

    h: np.ndarray
    user: int = None


def sample_channels(q, rng, size):
    """
    Draw `size` correlated Rayleigh channels h ~ CN(0, Q)

    Returns
    -------
    h : ndarray (complex)
        Shape (size, M), rows are channels Q^(1/2) w with w i.i.d. standard
        circularly-symmetric complex Gaussian
    """
    n_antennas = q.dim
    w = (
        rng.standard_normal((size, n_antennas)) + 1j * rng.standard_normal((size, n_antennas))
    ) / np.sqrt(2)
    return w @ sqrtm(q).T


def sample_channel(q, rng, user=None):
    """
    Draw one channel h ~ CN(0, Q)

    Returns
    -------
    sample : ChannelSample
    """
    return ChannelSample(sample_channels(q, rng, 1)[0], user)


def channel_spd(h, epsilon):
    """
    SPD form of a channel, h h^H + epsilon I

    Parameters
    ----------
    h : array_like (complex)

    epsilon : float
        Ridge, must be positive (the rank-one h h^H has no logarithm)

    Returns
    -------
    matrix : SpdMatrix
        Eigenvalues ||h||^2 + epsilon and epsilon (M - 1 times)
    """
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")

    h = np.asarray(h, dtype=complex)
    return SpdMatrix(np.outer(h, h.conj()) + epsilon * np.eye(len(h)))


def channel_ridge(channels, scale=1e-3):
    """
    Default ridge epsilon = scale * mean ||h||^2 over a set of channels
    """
    channels = np.atleast_2d(channels)
    return scale * float(np.mean(np.sum(np.abs(channels) ** 2, axis=1)))


def channel_features(matrices):
    """
    Tangent-space features log_vectorize(matrix_log(S)) of SPD matrices

    Returns
    -------
    X : ndarray (float)
        Shape (n_matrices, M^2)
    """
    return np.array([log_vectorize(matrix.log) for matrix in matrices])


class GeometricClassifier:
    """
    Soft-margin linear SVM over Log-Euclidean tangent-space features

    Attributes
    ----------
    reg : float
        Regularization constant. The objective is
        0.5 ||w||^2 + reg * mean(hinge loss), so duplicating the training set
        leaves the solution unchanged.

    weights : ndarray (float)

    bias : float

    dim : int
        Matrix dimension M seen in training

    Notes
    -----
    * Labels are the user groups 1 and 2. A decision value d(x) = w.x + b > 0
      gives group 2, anything else (boundary included) gives group 1.
    """

    def __init__(self, reg=1.0, tol=1e-6):
        self.reg = reg
        self.tol = tol
        self.weights = None
        self.bias = None
        self.dim = None

    def fit(self, matrices, labels):
        """
        Train the classifier

        Parameters
        ----------
        matrices : sequence of SpdMatrix
            Channel SPD matrices

        labels : sequence (int)
            Group labels, 1 or 2
        """
        labels = np.asarray(labels)
        if len(labels) != len(matrices):
            raise ValueError("One label per training matrix is required")
        if len(labels) < 2:
            raise ValueError(f"Training needs at least 2 samples, got {len(labels)}")
        if not set(labels.tolist()) <= set(GROUPS):
            raise ValueError(f"Labels must be 1 or 2, got {sorted(set(labels.tolist()))}")
        if len(set(labels.tolist())) < 2:
            raise ValueError("Training needs samples from both groups")

        dims = {matrix.dim for matrix in matrices}
        if len(dims) > 1:
            raise ValueError(f"Dimension mismatch: {sorted(dims)}")

        X = channel_features(matrices)
        svm = SVC(kernel="linear", C=self.reg / len(labels), tol=self.tol)
        svm.fit(X, labels)

        self.dim = dims.pop()
        self.weights = svm.coef_[0].copy()
        self.bias = float(svm.intercept_[0])

        return self

    def decision_function(self, matrix):
        """
        Affine decision value w.x + b of one SPD matrix
        """
        if self.weights is None:
            raise ValueError("The classifier has not been trained")
        if matrix.dim != self.dim:
            raise ValueError(f"Dimension mismatch: trained on {self.dim}, got {matrix.dim}")

        return float(log_vectorize(matrix.log) @ self.weights + self.bias)

    def predict(self, matrix):
        return GROUPS[1] if self.decision_function(matrix) > 0 else GROUPS[0]

    def __repr__(self):
        return f"GeometricClassifier(reg={self.reg}, dim={self.dim})"


def train_classifier(matrices, labels, reg=1.0):
    """
    Train a GeometricClassifier on labeled channel SPD matrices
    """
    return GeometricClassifier(reg).fit(matrices, labels)


def classify(classifier, matrix):
    """
    Group (1 or 2) of a channel SPD matrix
    """
    return classifier.predict(matrix)


def steering_vector(n_antennas, theta):
    """
    Unit-norm uniform array response, half-wavelength spacing

    Parameters
    ----------
    n_antennas : int

    theta : float
        Direction parameter in [0, pi]

    Returns
    -------
    c : ndarray (complex)
        (1 / sqrt(M)) (1, e^{j pi cos theta}, ..., e^{j pi (M - 1) cos theta})
    """
    return np.exp(1j * np.pi * np.cos(theta) * np.arange(n_antennas)) / np.sqrt(n_antennas)


@dataclass(frozen=True)
class Codebook:
    """
    Attributes
    ----------
    codewords : ndarray (complex)
        Shape (n_codewords, M), rows of unit norm

    groups : tuple (int)
        Group served by each codeword

    angles : tuple (float)
        Direction parameter theta of each codeword

    alignments : tuple (float)
        |c^H v| with v the dominant eigenvector of the group's Log-Euclidean
        mean covariance
    """

    codewords: np.ndarray
    groups: tuple
    angles: tuple = ()
    alignments: tuple = ()

    def __post_init__(self):
        norms = np.linalg.norm(self.codewords, axis=1)
        if not np.allclose(norms, 1.0, rtol=0, atol=1e-12):
            raise ValueError("Codewords must have unit norm")

    def codeword(self, group):
        return self.codewords[self.groups.index(group)]

    def __len__(self):
        return len(self.codewords)


def build_codebook(grouped_channels, n_antennas, snr, angle_grid_size=181, epsilon=None):
    """
    One codeword per channel group: the steering vector on a uniform grid of
    theta in [0, pi] maximizing the group's mean link rate

    Parameters
    ----------
    grouped_channels : dict
        Group label -> array of channels, shape (n, M)

    n_antennas : int

    snr : float
        Linear SNR

    angle_grid_size : int

    epsilon : float
        Ridge of the SPD channel matrices averaged into each group's
        representative covariance (default = channel_ridge of the group)

    Returns
    -------
    codebook : Codebook
        Alignments are taken against the dominant eigenvector of each
        group's Log-Euclidean mean covariance
    """
    grid = np.linspace(0.0, np.pi, angle_grid_size)
    steering = np.array([steering_vector(n_antennas, theta) for theta in grid])

    codewords, groups, angles, alignments = [], [], [], []
    for group in sorted(grouped_channels):
        channels = np.atleast_2d(np.asarray(grouped_channels[group], dtype=complex))
        if channels.size == 0:
            raise ValueError(f"Group {group} has no channels")
        if channels.shape[1] != n_antennas:
            raise ValueError(f"Group {group} channels are not of length {n_antennas}")

        gains = np.abs(channels.conj() @ steering.T) ** 2
        mean_rates = np.mean(np.log2(1 + snr * gains), axis=0)
        best = int(np.argmax(mean_rates))
        codeword = steering[best]

        ridge = channel_ridge(channels) if epsilon is None else epsilon
        representative = log_euclidean_mean([channel_spd(h, ridge) for h in channels])
        alignment = float(np.abs(np.vdot(codeword, representative.eigenvectors[:, -1])))
        if alignment < 0.95:
            logger.warning(
                "Codeword of group %d is poorly aligned with the group covariance (%.3f)",
                group,
                alignment,
            )
        logger.debug("Group %d codeword at theta = %.4f", group, grid[best])

        codewords.append(codeword)
        groups.append(group)
        angles.append(float(grid[best]))
        alignments.append(alignment)

    return Codebook(np.array(codewords), tuple(groups), tuple(angles), tuple(alignments))


def link_rate(h, c, snr):
    """
    Achievable link rate log2(1 + snr |h^H c|^2) in bits/s/Hz

    Parameters
    ----------
    h : array_like (complex)

    c : array_like (complex)
        Unit-norm beamforming vector

    snr : float
        Linear SNR, positive
    """
    c = np.asarray(c)
    if abs(np.linalg.norm(c) - 1) > 1e-9:
        raise ValueError("The beamforming vector must have unit norm")
    if not snr > 0:
        raise ValueError(f"snr must be positive, got {snr}")

    return float(np.log2(1 + snr * np.abs(np.vdot(h, c)) ** 2))


@dataclass(frozen=True)
class GenieRate:
    """
    Attributes
    ----------
    rate : float
        Best-of-codebook link rate

    codeword_index : int

    mrt_bound : float
        log2(1 + snr ||h||^2), the rate of the beamformer matched to h
    """

    rate: float
    codeword_index: int
    mrt_bound: float


def genie_rate(h, codebook, snr):
    """
    Genie-aided rate: the best codeword of the codebook for this channel
    """
    if len(codebook) == 0:
        raise ValueError("The codebook is empty")

    rates = [link_rate(h, c, snr) for c in codebook.codewords]
    best = int(np.argmax(rates))
    mrt_bound = float(np.log2(1 + snr * np.linalg.norm(h) ** 2))

    return GenieRate(rates[best], best, mrt_bound)
