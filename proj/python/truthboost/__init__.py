"""AdaBoost weights computed from truth-table counts, and the exact minimizer of the exponential risk."""

from ._core import (
    GENERATOR_NAME,
    SCHEMA_VERSION,
    BoostModel,
    BoostStep,
    DecisionStump,
    GaussianSpec,
    LabeledDataset,
    NumericalError,
    OutcomeMatrix,
    OutcomeTree,
    ValidationError,
    __version__,
    analytic_betas,
    analytic_state,
    build_tree,
    closed_form_p3,
    compare,
    compare_risk,
    euler_residual_p3,
    fit_stump,
    generate_gaussian,
    genealogy,
    genealogy_index,
    leaf_table_p3,
    minimize_risk,
    outcome_matrix,
    packet_reduce,
    read_dataset,
    read_outcomes,
    risk_bruteforce,
    risk_from_tree,
    risk_gradient,
    risk_hessian,
    train_adaboost,
    write_dataset,
    write_outcomes,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
