pub mod accum;
pub mod bootstrap;
pub mod cli;
pub mod error;
pub mod estimate;
pub mod family;
pub mod kernels;
pub mod oracle;
pub mod quadrature;
pub mod sample;
pub mod sampling;
pub mod special;
pub mod statistic;
pub mod study;
pub mod weight;

pub use error::{Error, Result};
pub use estimate::estimate;
pub use family::{Family, FamilySpec, Params};
pub use kernels::{KernelTriple, PsiKernel};
pub use sample::Sample;
pub use sampling::{AltFamily, AltSpec, RngStream, Source};
pub use bootstrap::{bootstrap_test, warp_speed_power, FailurePolicy, PowerEstimate, Procedure, TestOutcome};
pub use study::{emit_table, run_study, PowerTable, StudyConfig, TableFormat};
pub use statistic::{t_statistic, u_statistic_cpg, StatKind};
pub use weight::{WeightShape, WeightSpec};
