//! Stochastic cross-checks: hit-or-miss area estimates, pointwise membership
//! audits, and contender counts over random node deployments.

use crate::contention::{ModelError, NetworkModel};
use crate::geometry::{self, BoundingBox, DiskChain, GeometryError};
use rand::distr::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::error::Error;
use std::fmt;

/// Points drawn per RNG substream. Each batch seeds its own stream from the
/// batch index, so totals are bit-identical for any worker count.
const BATCH_SIZE: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SimulationError {
    ZeroSamples,
    ZeroTrials,
    /// The membership audit needs at least two disks.
    SubsetTooSmall {
        len: usize,
    },
    /// The region must leave a full radius of margin around every disk.
    RegionTooSmall {
        width: f64,
        height: f64,
        required_width: f64,
        required_height: f64,
    },
    PositionOutsideRegion {
        x: f64,
        y: f64,
    },
    Geometry(GeometryError),
    Model(ModelError),
}

impl fmt::Display for SimulationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::ZeroSamples => write!(f, "sample count must be >= 1"),
            Self::ZeroTrials => write!(f, "trial count must be >= 1"),
            Self::SubsetTooSmall { len } => {
                write!(f, "membership audit needs >= 2 disks, got {len}")
            }
            Self::RegionTooSmall { width, height, required_width, required_height } => write!(
                f,
                "region {width} x {height} cannot hold the chain with margin; \
                 needs {required_width} x {required_height}"
            ),
            Self::PositionOutsideRegion { x, y } => {
                write!(f, "position ({x}, {y}) lies outside the region")
            }
            Self::Geometry(err) => err.fmt(f),
            Self::Model(err) => err.fmt(f),
        }
    }
}

impl Error for SimulationError {}

impl From<GeometryError> for SimulationError {
    fn from(err: GeometryError) -> Self {
        Self::Geometry(err)
    }
}

impl From<ModelError> for SimulationError {
    fn from(err: ModelError) -> Self {
        Self::Model(err)
    }
}

/// Sample budget and RNG seed for one estimation run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleConfig {
    pub samples: u64,
    pub seed: u64,
}

impl SampleConfig {
    pub fn new(samples: u64, seed: u64) -> Self {
        Self { samples, seed }
    }
}

/// Estimate with its one-sigma standard error and the budget that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MonteCarloEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: u64,
}

fn uniform(low: f64, high: f64) -> Uniform<f64> {
    Uniform::new(low, high).expect("interval must be non-empty and finite")
}

/// Draws `config.samples` points uniformly over `bbox` and counts hits.
fn count_hits<F>(bbox: BoundingBox, config: SampleConfig, is_hit: F) -> u64
where
    F: Fn(f64, f64) -> bool + Sync,
{
    let across = uniform(bbox.min_x, bbox.max_x);
    let upward = uniform(bbox.min_y, bbox.max_y);
    let batches = config.samples.div_ceil(BATCH_SIZE);
    (0..batches)
        .into_par_iter()
        .map(|batch| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(batch);
            let drawn = (config.samples - batch * BATCH_SIZE).min(BATCH_SIZE);
            let mut hits = 0u64;
            for _ in 0..drawn {
                let x = across.sample(&mut rng);
                let y = upward.sample(&mut rng);
                if is_hit(x, y) {
                    hits += 1;
                }
            }
            hits
        })
        .sum()
}

/// Hit-or-miss estimate of the chain's union area over its bounding box.
pub fn estimate_union_area(
    chain: &DiskChain,
    config: SampleConfig,
) -> Result<MonteCarloEstimate, SimulationError> {
    if config.samples == 0 {
        return Err(SimulationError::ZeroSamples);
    }
    let bbox = chain.bounding_box();
    let hits = count_hits(bbox, config, |x, y| chain.contains(x, y));
    let hit_rate = hits as f64 / config.samples as f64;
    Ok(MonteCarloEstimate {
        mean: hit_rate * bbox.area(),
        std_error: bbox.area() * (hit_rate * (1.0 - hit_rate) / config.samples as f64).sqrt(),
        samples: config.samples,
    })
}

/// Counts sampled points where membership in all disks of `subset` disagrees
/// with membership in just its two extreme disks. Zero means the subset's
/// common intersection was indistinguishable from the extreme-pair lens.
pub fn check_extreme_pair_lemma(
    chain: &DiskChain,
    subset: &[usize],
    config: SampleConfig,
) -> Result<u64, SimulationError> {
    if subset.len() < 2 {
        return Err(SimulationError::SubsetTooSmall { len: subset.len() });
    }
    geometry::subset_intersection_area(chain, subset)?;
    if config.samples == 0 {
        return Err(SimulationError::ZeroSamples);
    }
    let lowest = *subset.iter().min().expect("subset is non-empty");
    let highest = *subset.iter().max().expect("subset is non-empty");
    let violations = count_hits(chain.bounding_box(), config, |x, y| {
        let in_all = subset.iter().all(|&disk| chain.disk_contains(disk, x, y));
        let in_extremes = chain.disk_contains(lowest, x, y) && chain.disk_contains(highest, x, y);
        in_all != in_extremes
    });
    Ok(violations)
}

fn required_region(chain: &DiskChain) -> (f64, f64) {
    (chain.length() + 4.0 * chain.radius(), 4.0 * chain.radius())
}

/// Nodes scattered over a rectangle with a relay chain laid across its
/// center, every carrier-sense disk at least one radius from the border.
#[derive(Debug, Clone)]
pub struct Deployment {
    width: f64,
    height: f64,
    chain: DiskChain,
    relay_centers: Vec<(f64, f64)>,
    positions: Vec<(f64, f64)>,
}

impl Deployment {
    pub fn new(
        width: f64,
        height: f64,
        chain: DiskChain,
        positions: Vec<(f64, f64)>,
    ) -> Result<Self, SimulationError> {
        let (required_width, required_height) = required_region(&chain);
        if !(width >= required_width && height >= required_height) {
            return Err(SimulationError::RegionTooSmall {
                width,
                height,
                required_width,
                required_height,
            });
        }
        for &(x, y) in &positions {
            let inside = (0.0..=width).contains(&x) && (0.0..=height).contains(&y);
            if !inside {
                return Err(SimulationError::PositionOutsideRegion { x, y });
            }
        }
        let start_x = (width - chain.length()) / 2.0;
        let mid_y = height / 2.0;
        let relay_centers = (0..chain.disks() as usize)
            .map(|relay| (start_x + chain.center_x(relay), mid_y))
            .collect();
        Ok(Self { width, height, chain, relay_centers, positions })
    }

    /// Scatters `node_count` uniform positions over the rectangle.
    pub fn sample(
        width: f64,
        height: f64,
        node_count: usize,
        chain: DiskChain,
        rng: &mut ChaCha8Rng,
    ) -> Result<Self, SimulationError> {
        let across = uniform(0.0, width);
        let upward = uniform(0.0, height);
        let positions = (0..node_count).map(|_| (across.sample(rng), upward.sample(rng))).collect();
        Self::new(width, height, chain, positions)
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn height(&self) -> f64 {
        self.height
    }

    pub fn chain(&self) -> &DiskChain {
        &self.chain
    }

    pub fn relay_centers(&self) -> &[(f64, f64)] {
        &self.relay_centers
    }

    pub fn positions(&self) -> &[(f64, f64)] {
        &self.positions
    }
}

/// Contenders heard by each relay and by the chain as a whole, where a node
/// contends with a relay when it sits within the carrier-sense radius.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContenderCounts {
    pub per_relay: Vec<u64>,
    pub distinct: u64,
}

pub fn empirical_contenders(deployment: &Deployment) -> ContenderCounts {
    let radius_sq = deployment.chain.radius() * deployment.chain.radius();
    let mut per_relay = vec![0u64; deployment.relay_centers.len()];
    let mut distinct = 0u64;
    for &(x, y) in &deployment.positions {
        let mut heard = false;
        for (relay, &(cx, cy)) in deployment.relay_centers.iter().enumerate() {
            let (dx, dy) = (x - cx, y - cy);
            if dx * dx + dy * dy <= radius_sq {
                per_relay[relay] += 1;
                heard = true;
            }
        }
        if heard {
            distinct += 1;
        }
    }
    ContenderCounts { per_relay, distinct }
}

/// Repeated random deployments of the model's nodes over a square region,
/// reporting the mean ratio of distinct contenders to `h` times the expected
/// single-relay count. One substream per trial keeps runs reproducible.
pub fn run_deployment_trials(
    model: &NetworkModel,
    hops: u32,
    trials: u32,
    seed: u64,
) -> Result<MonteCarloEstimate, SimulationError> {
    if trials == 0 {
        return Err(SimulationError::ZeroTrials);
    }
    let chain = model.contention_chain(hops)?;
    let side = model.area().sqrt();
    let (required_width, required_height) = required_region(&chain);
    if !(side >= required_width && side >= required_height) {
        return Err(SimulationError::RegionTooSmall {
            width: side,
            height: side,
            required_width,
            required_height,
        });
    }
    let node_count = model.node_count().round() as usize;
    let expected_total = hops as f64 * model.contenders_in_cs_range();
    let ratios: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(trial as u64);
            let deployment = Deployment::sample(side, side, node_count, chain, &mut rng)
                .expect("region size was checked against the chain");
            empirical_contenders(&deployment).distinct as f64 / expected_total
        })
        .collect();
    let (mean, std_error) = mean_and_std_error(&ratios);
    Ok(MonteCarloEstimate { mean, std_error, samples: trials as u64 })
}

/// Sample mean and its standard error (sample standard deviation over
/// `sqrt(n)`); a single observation reports zero error.
fn mean_and_std_error(values: &[f64]) -> (f64, f64) {
    let count = values.len() as f64;
    let mean = values.iter().sum::<f64>() / count;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let variance =
        values.iter().map(|value| (value - mean) * (value - mean)).sum::<f64>() / (count - 1.0);
    (mean, (variance / count).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn chain(disks: u32, spacing: f64) -> DiskChain {
        DiskChain::new(disks, spacing, 1.0).unwrap()
    }

    #[test]
    fn single_disk_estimate_brackets_the_disk_area() {
        let estimate = estimate_union_area(&chain(1, 0.5), SampleConfig::new(100_000, 7)).unwrap();
        assert_eq!(estimate.samples, 100_000);
        assert!(estimate.std_error > 0.0);
        assert!((estimate.mean - PI).abs() <= 3.0 * estimate.std_error);
    }

    #[test]
    fn estimates_are_reproducible_and_seed_sensitive() {
        let config = SampleConfig::new(200_000, 11);
        let chain = chain(3, 0.5);
        let first = estimate_union_area(&chain, config).unwrap();
        let second = estimate_union_area(&chain, config).unwrap();
        assert_eq!(first, second);
        let reseeded = estimate_union_area(&chain, SampleConfig::new(200_000, 12)).unwrap();
        assert_ne!(first.mean, reseeded.mean);
    }

    #[test]
    fn estimates_do_not_depend_on_worker_count() {
        let config = SampleConfig::new(150_000, 3);
        let chain = chain(4, 0.9);
        let single = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| estimate_union_area(&chain, config).unwrap());
        let several = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap()
            .install(|| estimate_union_area(&chain, config).unwrap());
        assert_eq!(single, several);
    }

    #[test]
    fn estimate_rejects_an_empty_budget() {
        assert!(matches!(
            estimate_union_area(&chain(2, 0.5), SampleConfig::new(0, 1)),
            Err(SimulationError::ZeroSamples)
        ));
    }

    #[test]
    fn membership_audit_finds_no_violations_on_chain_subsets() {
        let chain = chain(5, 0.5);
        let config = SampleConfig::new(50_000, 5);
        // Adjacent pair: the extremes are the whole subset.
        assert_eq!(check_extreme_pair_lemma(&chain, &[0, 1], config).unwrap(), 0);
        // Interior disk strictly covers the extreme-pair lens.
        assert_eq!(check_extreme_pair_lemma(&chain, &[0, 1, 2], config).unwrap(), 0);
        // Extremes four spacings apart: both sides are empty sets.
        assert_eq!(check_extreme_pair_lemma(&chain, &[0, 2, 4], config).unwrap(), 0);
    }

    #[test]
    fn membership_audit_validates_the_subset() {
        let chain = chain(3, 0.5);
        let config = SampleConfig::new(1_000, 5);
        assert!(matches!(
            check_extreme_pair_lemma(&chain, &[1], config),
            Err(SimulationError::SubsetTooSmall { len: 1 })
        ));
        assert!(matches!(
            check_extreme_pair_lemma(&chain, &[0, 9], config),
            Err(SimulationError::Geometry(GeometryError::DiskIndexOutOfRange { .. }))
        ));
    }

    #[test]
    fn deployment_centers_the_chain_with_margin() {
        let chain = DiskChain::new(3, 5.0, 10.0).unwrap();
        let deployment = Deployment::new(60.0, 44.0, chain, vec![]).unwrap();
        assert_eq!(deployment.relay_centers(), &[(25.0, 22.0), (30.0, 22.0), (35.0, 22.0)]);
        // 10 of chain span + two radii of margin per side.
        assert!(matches!(
            Deployment::new(49.9, 44.0, chain, vec![]),
            Err(SimulationError::RegionTooSmall { .. })
        ));
        assert!(matches!(
            Deployment::new(60.0, 39.9, chain, vec![]),
            Err(SimulationError::RegionTooSmall { .. })
        ));
        assert!(matches!(
            Deployment::new(60.0, 44.0, chain, vec![(61.0, 10.0)]),
            Err(SimulationError::PositionOutsideRegion { .. })
        ));
    }

    #[test]
    fn contender_counts_follow_the_carrier_sense_disks() {
        let chain = DiskChain::new(2, 5.0, 10.0).unwrap();
        let positions = vec![
            (27.5, 30.0), // inside both disks
            (27.5, 41.0), // just above both
            (40.0, 30.0), // inside the second disk only
        ];
        let deployment = Deployment::new(60.0, 60.0, chain, positions).unwrap();
        let counts = empirical_contenders(&deployment);
        assert_eq!(counts.per_relay, vec![1, 2]);
        assert_eq!(counts.distinct, 2);
    }

    #[test]
    fn trials_are_reproducible_and_match_a_single_relay() {
        let model = NetworkModel::new(400.0, 400.0, 1.0, 2.0, 2.0, 1.0).unwrap();
        let estimate = run_deployment_trials(&model, 1, 40, 9).unwrap();
        let replay = run_deployment_trials(&model, 1, 40, 9).unwrap();
        assert_eq!(estimate, replay);
        assert_eq!(estimate.samples, 40);
        // One relay: the distinct count is the plain carrier-sense census.
        assert!((estimate.mean - 1.0).abs() <= 4.0 * estimate.std_error.max(0.01));
    }

    #[test]
    fn trials_validate_region_and_budget() {
        let model = NetworkModel::new(400.0, 400.0, 1.0, 2.0, 2.0, 1.0).unwrap();
        assert!(matches!(run_deployment_trials(&model, 1, 0, 9), Err(SimulationError::ZeroTrials)));
        // Fourteen relays span 13 units; with four radii of margin that
        // needs 21, and the square region is only 20 wide.
        assert!(matches!(
            run_deployment_trials(&model, 14, 5, 9),
            Err(SimulationError::RegionTooSmall { .. })
        ));
    }

    #[test]
    fn mean_and_error_match_a_hand_computed_sample() {
        let (mean, std_error) = mean_and_std_error(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(mean, 2.5);
        // Sample variance 5/3, over n = 4.
        assert!((std_error - (5.0 / 12.0f64).sqrt()).abs() < 1e-15);
        assert_eq!(mean_and_std_error(&[2.0]), (2.0, 0.0));
    }
}
