"""Similarity-weighted panel estimators.

Two-stage estimation for heterogeneous panels: fit each individual
separately, weight individuals by the similarity of their first-stage
coefficients, then re-estimate everyone on the full weighted panel.
"""

from adsmooth._core import (  # noqa: F401
    AdsConfig,
    AdsFit,
    Backend,
    CellResult,
    CoefficientSet,
    Design,
    DgpConfig,
    Estimator,
    GammaRule,
    GeneratedPanel,
    LassoConfig,
    LassoResult,
    LongPanel,
    MseReport,
    MseRow,
    PanelDataset,
    PenaltyRule,
    ReportFormat,
    Rng,
    SimConfig,
    Stage,
    WeightMatrix,
    WeightedSample,
    ads_fit,
    build_weight_matrix,
    cell_id,
    chronological_split,
    coef_distance,
    estimator_name,
    evaluation_targets,
    fit_estimator,
    fit_individual,
    gen_beta_dgp1,
    gen_beta_dgp2,
    gen_beta_sparse,
    gen_design,
    gen_panel,
    mse_against,
    naive_fit,
    paper_table,
    parse_estimator,
    plugin_lambda,
    predict,
    read_long_csv,
    render_report,
    resolve_gamma,
    run_cell,
    run_suite,
    soft_threshold,
    weighted_lasso,
    weighted_ols,
    write_long_csv,
    write_report,
)

__version__ = "0.1.0"
