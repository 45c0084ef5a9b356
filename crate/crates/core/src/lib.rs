//! Stochastic laser powder bed fusion (LPBF) simulation toolkit.
//!
//! Pipeline: a transient thermal(-fluid) melt-pool solver with an uncertain
//! cylindrical-Gaussian heat source is reduced to a separated-variable tensor
//! surrogate over (energy density, P1, P2, P3), calibrated against single-track
//! melt-pool statistics by KL-divergence matching, and the calibrated
//! parameter distribution is propagated back through the solver with
//! MCMC-sampled time series to predict track geometry, surface roughness,
//! and lack-of-fusion porosity.

pub mod calibrate;
pub mod cli;
pub mod heatsource;
pub mod material;
pub mod meltpool;
pub mod scanpath;
pub mod snapshot;
pub mod solver;
pub mod stats;
pub mod surrogate;

pub use material::MaterialProperties;
pub use scanpath::{RhfConfig, ScanPlan, ScanPoint, ScanSegment};
pub use heatsource::{EffectiveSource, HeatSourceCoefficients};
pub use solver::{Fidelity, Grid, SimulationResult, SolverConfig};
pub use stats::TrivariateNormal;
pub use surrogate::{ParameterGrid, SeparatedModel, SnapshotDatabase};
