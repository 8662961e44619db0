//! Progressive edge growth with a pluggable candidate-pruning pipeline.
//!
//! Four construction flavours share one skeleton and differ only in the
//! pruning stages between minimum weight and the final tie-break:
//!
//! | name            | stages after `MaxDistance, MinWeight`      |
//! |-----------------|--------------------------------------------|
//! | `peg`           | —                                          |
//! | `ipeg-ace`      | `MaxPathAce`                               |
//! | `ace-emd`       | `MaxPathAce, MaxExactSetEmd`               |
//! | `multipath-emd` | `MinPathCount, MaxMeanPathEmd`             |

mod builder;
mod paths;
mod stages;

pub use builder::{
    peg_construct, BuildError, ComplexityAudit, MetricPipeline, PegBuilder, PlacementRecord,
    QcShiftTable,
};
pub use paths::{
    enumerate_paths, enumerate_paths_capped, path_emd, PathError, PathMetrics, PathSet,
    DEFAULT_PATH_BUDGET,
};
pub use stages::{
    exact_set_emd, path_ace, stage_max_distance, stage_max_mean_path_emd, stage_max_path_ace,
    stage_max_exact_set_emd, stage_min_path_count, stage_min_weight, CandidateSets, Stage,
};
