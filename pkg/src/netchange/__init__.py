"""Change points in the community structure of multivariate time series.

Each candidate split of a segment yields two correlation networks. Both are
spectrally clustered, node embeddings are replaced by their community
centroids, and the nuclear norm of the product of the two expansions scores
how similar the structures are. The least similar split is tested with a
stationary bootstrap, and significant splits are searched recursively.
"""

from .clustering import ClusterAssignment, kmeans, spectral_clustering
from .config import BootstrapConfig, DetectionConfig, KMeansConfig
from .criterion import (
    CriterionValue,
    candidate_gamma,
    centroid_expand,
    gamma,
    network_expansion,
    network_similarity,
    similarity_matrix,
    split_gamma,
)
from .data import Segment, as_timeseries, correlation, load_matrix, split
from .detection import (
    CandidateSeries,
    ChangePointReport,
    best_candidate,
    binary_segment,
    detect_outliers,
    outlier_mask,
    outlier_scores,
    sweep,
)
from .errors import (
    BoundsError,
    ConfigError,
    ContractError,
    DegenerateColumnError,
    DegenerateInputError,
    DimensionError,
    ExhaustedError,
    InferenceError,
    NetChangeError,
    NumericalError,
    ParseError,
    SegmentTooShortError,
)
from .graph import community_graph, to_dot
from .inference import (
    NullDistribution,
    TestResult,
    empirical_quantile,
    null_distribution,
    permutation_resample,
    stationary_resample,
    test_change_point,
)
from .simulation import (
    SimSetting,
    evaluate,
    generate,
    make_setting,
    run_simulation,
    summarize,
)
from .spectral import Embedding, embed, laplacian

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
