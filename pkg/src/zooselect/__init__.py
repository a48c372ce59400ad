"""Checkpoint-zoo task-space modeling and informative subset selection.

Pipeline: load probing features for a zoo of checkpoints, estimate the
pairwise task covariance by linear kernel alignment, then pick the subset
that carries the most mutual information about the rest of the task space
with a greedy method backed by an exact brute-force oracle. Clustering,
robustness curves, and a synthetic transfer benchmark round out the
analysis tools.
"""

from .errors import (
    BadSchedule,
    BudgetOutOfRange,
    ConfigError,
    CountMismatch,
    DegenerateLabels,
    DimensionMismatch,
    DuplicateId,
    EmptyZoo,
    MalformedFile,
    NonFiniteEntry,
    NumericalError,
    SingularConditioning,
    TooLarge,
    ValidationError,
    ZeroGram,
    ZooSelectError,
)
from .feature_store import (
    FeatureMatrix,
    ValidatedZoo,
    ZooEntry,
    ZooManifest,
    load_feature_matrix,
    load_manifest,
    load_zoo,
    save_manifest,
    write_feature_matrix,
    write_feature_matrix_csv,
)
from .kernel_alignment import (
    PsdReport,
    TaskCovariance,
    estimate_covariance,
    gram,
    kernel_alignment,
    psd_report,
)
from .gp_task_space import (
    GainValue,
    conditional_variance,
    gaussian_kl,
    information_gain,
    mutual_information,
    vec_cosine,
)
from .mmi_selection import (
    SelectionTrace,
    SubmodularityReport,
    QualityReport,
    brute_force_select,
    check_submodularity,
    greedy_quality,
    select_mmi,
)
from .clustering import Dendrogram, cut_dendrogram, ward_linkage
from .robustness import ConvergenceReport, convergence_curve, nested_schedule
from .synthetic_bench import (
    BenchReport,
    TaskUniverseConfig,
    Universe,
    generate_universe,
    run_bench,
    train_linear_head,
)

__version__ = "0.1.0"
