//! Feature forecasting for iterative samplers: finite-difference derivative
//! caches extrapolated through monomial or scaled-Hermite bases.
//!
//! The crate covers the full loop needed to study cache-then-forecast
//! schemes without a model in the loop:
//!
//! * [`basis`] — monomial and σ-scaled physicists' Hermite basis evaluation;
//! * [`cache`] — backward-difference derivative caches refreshed at
//!   activation steps, with warm-up truncation;
//! * [`predictor`] — feature extrapolation at skip-step horizons;
//! * [`scheduler`] — full runs over T steps with activation scheduling and
//!   per-step error recording;
//! * [`sim`] — seeded synthetic trajectory generators (Gaussian process,
//!   AR(1), polynomial) and binary/CSV trace files;
//! * [`stats`] — the energy test for multivariate normality, non-cumulative
//!   prediction error reports, and analytic error envelopes.
//!
//! Everything stochastic is driven by explicit 64-bit seeds through a
//! counter-based generator, so every result in the crate is reproducible
//! bit-for-bit from its configuration.

pub mod basis;
pub mod cache;
pub mod feature;
pub mod linalg;
pub mod predictor;
pub mod rng;
pub mod scheduler;
pub mod sim;
pub mod stats;

pub use basis::{
    BasisConfig, BasisError, BasisKind, basis_value, hermite_eval, scaled_hermite_eval,
};
pub use cache::{CacheError, DerivativeCache};
pub use feature::{FeatureError, FeatureVector, Trajectory};
pub use predictor::{PredictError, Prediction, predict, predict_diagnostic};
pub use rng::{SplitMix64, derive_seed};
pub use scheduler::{
    BusyOracle, Direction, FeatureOracle, ScheduleConfig, ScheduleError, ScheduleTrace, StepMode,
    StepRecord, TrajectoryOracle, horizon_of, run_schedule,
};
pub use sim::{
    GenerateError, GeneratorKind, GeneratorSpec, generate,
    trace::{TraceError, TraceFormat, read_trace, write_trace},
};
pub use stats::{
    ConfigReport, EnergyTestConfig, EnergyTestResult, ErrorReport, RatioValue, StatsError,
    difference_samples, energy_test, hermite_truncation_envelope, non_cumulative_eval,
    taylor_error_envelope,
};
