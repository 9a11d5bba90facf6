//! Contention-neighbor adjustment for multihop CSMA/CA ad hoc networks.
//!
//! When a packet is relayed along a straight multihop path, the carrier-sense
//! disks of consecutive transmitters overlap, so the per-transmitter count of
//! contending neighbors is smaller than the single-hop census suggests. This
//! crate computes that correction exactly and cross-checks it stochastically:
//!
//! - [`geometry`]: lens areas of equal-radius circle pairs and union areas of
//!   collinear disk chains, in closed form and by full inclusion-exclusion.
//! - [`contention`]: the deployment model, the adjustment factor, and
//!   adjusted contending-neighbor reports.
//! - [`montecarlo`]: hit-or-miss area estimates, pointwise membership audits,
//!   and contender counts over random deployments.
//! - [`cli`]: the `mhc` command-line interface.

pub mod cli;
pub mod contention;
pub mod geometry;
pub mod montecarlo;

pub use contention::{adjustment_factor, incremental_increase, AdjustmentReport, NetworkModel};
pub use geometry::{
    chain_union_closed_form, chain_union_inclusion_exclusion, lens_area, subset_intersection_area,
    DiskChain, LensSpec,
};
pub use montecarlo::{
    check_extreme_pair_lemma, empirical_contenders, estimate_union_area, run_deployment_trials,
    Deployment, MonteCarloEstimate, SampleConfig,
};
