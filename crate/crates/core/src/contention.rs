//! Random-deployment network model and the multihop contention adjustment.

use crate::geometry::{self, DiskChain, GeometryError};
use serde::Serialize;
use std::error::Error;
use std::f64::consts::PI;
use std::fmt;

/// Path-loss exponents outside this range are unusual for radio environments.
pub const TYPICAL_PATH_LOSS: std::ops::RangeInclusive<f64> = 2.0..=5.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelError {
    Parameter { name: &'static str, value: f64, constraint: &'static str },
    Geometry(GeometryError),
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Parameter { name, value, constraint } => {
                write!(f, "invalid {name} = {value}: {constraint}")
            }
            Self::Geometry(err) => err.fmt(f),
        }
    }
}

impl Error for ModelError {}

impl From<GeometryError> for ModelError {
    fn from(err: GeometryError) -> Self {
        Self::Geometry(err)
    }
}

fn require(
    name: &'static str,
    value: f64,
    ok: bool,
    constraint: &'static str,
) -> Result<f64, ModelError> {
    if ok && value.is_finite() {
        Ok(value)
    } else {
        Err(ModelError::Parameter { name, value, constraint })
    }
}

/// Nodes placed uniformly at random over a region, all sharing one
/// transmission radius, carrier-sense ratio, and path-loss law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NetworkModel {
    node_count: f64,
    area: f64,
    tx_radius: f64,
    cs_ratio: f64,
    path_loss_exponent: f64,
    tx_power: f64,
}

impl NetworkModel {
    pub fn new(
        node_count: f64,
        area: f64,
        tx_radius: f64,
        cs_ratio: f64,
        path_loss_exponent: f64,
        tx_power: f64,
    ) -> Result<Self, ModelError> {
        Ok(Self {
            node_count: require("node_count", node_count, node_count >= 1.0, "must be >= 1")?,
            area: require("area", area, area > 0.0, "must be > 0")?,
            tx_radius: require("tx_radius", tx_radius, tx_radius > 0.0, "must be > 0")?,
            cs_ratio: require("cs_ratio", cs_ratio, cs_ratio > 1.0, "must be > 1")?,
            path_loss_exponent: require(
                "path_loss_exponent",
                path_loss_exponent,
                path_loss_exponent > 0.0,
                "must be > 0",
            )?,
            tx_power: require("tx_power", tx_power, tx_power > 0.0, "must be > 0")?,
        })
    }

    /// Builds a model from a node density, choosing a unit of area (or the
    /// smallest area holding one node) so the density is preserved exactly.
    pub fn from_density(
        density: f64,
        tx_radius: f64,
        cs_ratio: f64,
        path_loss_exponent: f64,
        tx_power: f64,
    ) -> Result<Self, ModelError> {
        require("density", density, density > 0.0, "must be > 0")?;
        let area = (1.0 / density).max(1.0);
        Self::new(density * area, area, tx_radius, cs_ratio, path_loss_exponent, tx_power)
    }

    pub fn node_count(&self) -> f64 {
        self.node_count
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    pub fn tx_radius(&self) -> f64 {
        self.tx_radius
    }

    pub fn cs_ratio(&self) -> f64 {
        self.cs_ratio
    }

    pub fn path_loss_exponent(&self) -> f64 {
        self.path_loss_exponent
    }

    pub fn tx_power(&self) -> f64 {
        self.tx_power
    }

    pub fn density(&self) -> f64 {
        self.node_count / self.area
    }

    pub fn carrier_sense_range(&self) -> f64 {
        self.cs_ratio * self.tx_radius
    }

    /// Received power at `distance` under the `P0 / x^gamma` path-loss law.
    pub fn signal_power(&self, distance: f64) -> Result<f64, ModelError> {
        require("distance", distance, distance > 0.0, "must be > 0")?;
        Ok(self.tx_power / distance.powf(self.path_loss_exponent))
    }

    pub fn path_loss_is_typical(&self) -> bool {
        TYPICAL_PATH_LOSS.contains(&self.path_loss_exponent)
    }

    /// Expected neighbors inside one carrier-sense disk.
    pub fn contenders_in_cs_range(&self) -> f64 {
        let range = self.carrier_sense_range();
        self.density() * PI * range * range
    }

    /// Expected neighbors inside one transmission disk.
    pub fn nodes_in_tx_range(&self) -> f64 {
        self.density() * PI * self.tx_radius * self.tx_radius
    }

    /// Carrier-sense disks of the `hops` transmitters along a straight path
    /// whose relays sit one transmission radius apart.
    pub fn contention_chain(&self, hops: u32) -> Result<DiskChain, ModelError> {
        Ok(DiskChain::new(hops, self.tx_radius, self.carrier_sense_range())?)
    }

    /// Contending-neighbor report with the multihop overlap credit applied.
    pub fn adjusted_contenders(&self, hops: u32) -> Result<AdjustmentReport, ModelError> {
        self.report(hops, adjustment_factor(hops, self.cs_ratio)?)
    }

    /// Report for saturated traffic: queues keep every neighbor busy whether
    /// or not carrier-sense disks overlap, so no credit is taken.
    pub fn heavy_load_contenders(&self, hops: u32) -> Result<AdjustmentReport, ModelError> {
        adjustment_factor(hops, self.cs_ratio)?;
        self.report(hops, 0.0)
    }

    fn report(&self, hops: u32, factor: f64) -> Result<AdjustmentReport, ModelError> {
        let chain = self.contention_chain(hops)?;
        let contenders = self.contenders_in_cs_range();
        Ok(AdjustmentReport {
            hops,
            chi: factor,
            nu_cs: contenders,
            nu_cs_adjusted: contenders * (1.0 - factor),
            effective_area: geometry::chain_union_closed_form(&chain) / hops as f64,
        })
    }
}

/// Per-path contention summary: raw and adjusted expected contender counts
/// and the union area each transmitter effectively claims.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AdjustmentReport {
    #[serde(rename = "h")]
    pub hops: u32,
    pub chi: f64,
    pub nu_cs: f64,
    pub nu_cs_adjusted: f64,
    pub effective_area: f64,
}

/// Fraction by which overlapping carrier-sense disks shrink the per-node
/// contender count on an `hops`-transmitter straight path:
/// `chi(h) = (lens(R/beta, R) / (pi R^2)) (1 - 1/h)`, with `chi(1) = 0`.
///
/// The ratio in front is radius-free, so only the carrier-sense ratio enters.
pub fn adjustment_factor(hops: u32, cs_ratio: f64) -> Result<f64, ModelError> {
    require("hops", hops as f64, hops >= 1, "must be >= 1")?;
    require("cs_ratio", cs_ratio, cs_ratio > 1.0, "must be > 1")?;
    let overlap_share = geometry::lens_area(1.0 / cs_ratio, 1.0)? / PI;
    Ok(overlap_share * (1.0 - 1.0 / hops as f64))
}

/// Percentage growth of the adjustment factor from `hops` to `hops + 1`
/// transmitters; collapses to `100 / (h^2 - 1)` for every carrier-sense ratio.
pub fn incremental_increase(hops: u32) -> Result<f64, ModelError> {
    require("hops", hops as f64, hops >= 2, "must be >= 2")?;
    let h = hops as f64;
    Ok(100.0 / (h * h - 1.0))
}
