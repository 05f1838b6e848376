"""Exception hierarchy.

Every domain error carries a stable machine-readable ``code`` so the command
line front end can report it without string matching.
"""


class TranscostError(ValueError):
    code = "domain_error"


class AsymmetricMatrix(TranscostError):
    code = "asymmetric_matrix"


class NegativeDistance(TranscostError):
    code = "negative_distance"


class ZeroDistanceDistinctPoints(TranscostError):
    code = "zero_distance_distinct_points"


class TriangleViolation(TranscostError):
    """``d(i, j) > d(i, k) + d(k, j)`` beyond tolerance."""

    code = "triangle_violation"

    def __init__(self, i, j, k, excess):
        self.i, self.j, self.k = int(i), int(j), int(k)
        self.excess = float(excess)
        super().__init__(
            f"triangle inequality fails: d({i},{j}) exceeds d({i},{k}) + d({k},{j}) by {excess:.3g}"
        )


class InvalidGraph(TranscostError):
    code = "invalid_graph"


class DisconnectedGraph(TranscostError):
    code = "disconnected_graph"


class InvalidSize(TranscostError):
    code = "invalid_size"


class EmptySubset(TranscostError):
    code = "empty_subset"


class InvalidMeasure(TranscostError):
    code = "invalid_measure"


class ZeroMeasure(TranscostError):
    code = "zero_measure"


class NotOneLipschitz(TranscostError):
    code = "not_one_lipschitz"


class NotProbability(TranscostError):
    code = "not_probability"


class SizeMismatch(TranscostError):
    code = "size_mismatch"


class NotDoublyStochastic(TranscostError):
    code = "not_doubly_stochastic"


class InvalidTree(TranscostError):
    code = "invalid_tree"


class EdgeNotInTree(TranscostError):
    code = "edge_not_in_tree"


class EmptyKeepSet(TranscostError):
    code = "empty_keep_set"


class InvalidEmbedding(TranscostError):
    code = "invalid_embedding"


class NonBijectiveComponents(TranscostError):
    code = "non_bijective_components"


class NotAWalk(TranscostError):
    code = "not_a_walk"


class NotConservative(TranscostError):
    code = "not_conservative"


class EmbeddingNotCanonical(TranscostError):
    code = "embedding_not_canonical"


class PathMismatch(TranscostError):
    code = "path_mismatch"


class TooLargeForExhaustive(TranscostError):
    code = "too_large_for_exhaustive"


class InvalidParameters(TranscostError):
    code = "invalid_parameters"


class ExpansivenessViolation(AssertionError):
    """A sampled tree contracted some pair. Always a bug, never a statistic."""
