//! Propagation of block generators and numerical diagnostics: growth
//! bounds, boundedness, resolvent probes for analyticity, cosine families
//! and Wentzell residuals.

mod analytic;
mod cosine;
mod evolve;
mod growth;

pub use analytic::{check_analyticity, log_radii, AnalyticityVerdict, ProbeSettings, SectorialityReport};
pub use cosine::{cosine_family, dalembert_check, dalembert_tolerance};
pub use evolve::{evolve, wentzell_residual, EvolutionTrace};
pub use growth::{check_boundedness, growth_bound, log_times, BoundednessReport, GrowthBound};
