//! Uncertainty pipelines: variances and Robertson products of the modified
//! operators, the quoted bound functions and their minima, and the
//! variational scans over Gaussian families.

mod bound;
mod experiments;
mod robertson;
mod scan;
mod uncertainty;

pub use bound::{minimize_bound, BoundFunction};
pub use experiments::{
    boosted_experiment, spherical_experiment, BoostedReport, BoostedSample,
    OrthogonalBoundEstimate, ScanProtocol, SphericalReport, SphericalSample,
};
pub use robertson::{
    cap_suite, random_mixture, robertson_suite, CapEntry, CapSummary, DrawRanges, RobertsonEntry,
    RobertsonSummary, ROBERTSON_SLACK_FLOOR,
};
pub use scan::{ScanResult, ScanSample};
pub use uncertainty::{uncertainty_report, UncertaintyReport, VARIANCE_FLOOR};
