//! Exact areas of intersections and unions of equal-radius collinear disks.

use std::error::Error;
use std::f64::consts::PI;
use std::fmt;

/// Largest chain length for which the full inclusion-exclusion enumeration
/// (`2^h - 1` subsets) is allowed to run.
pub const MAX_ENUMERATION_DISKS: u32 = 25;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GeometryError {
    /// Separation must be finite and non-negative, radius finite and positive.
    InvalidLens {
        separation: f64,
        radius: f64,
    },
    /// A chain needs at least one disk, positive spacing, and positive radius.
    InvalidChain {
        disks: u32,
        spacing: f64,
        radius: f64,
    },
    EmptySubset,
    DiskIndexOutOfRange {
        index: usize,
        disks: u32,
    },
    /// Subset enumeration grows as `2^h`; chains longer than
    /// [`MAX_ENUMERATION_DISKS`] must use the closed form.
    EnumerationTooLarge {
        disks: u32,
    },
}

impl fmt::Display for GeometryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::InvalidLens { separation, radius } => write!(
                f,
                "invalid lens: separation {separation} must be >= 0 and radius {radius} > 0"
            ),
            Self::InvalidChain { disks, spacing, radius } => write!(
                f,
                "invalid chain: disks {disks} must be >= 1, spacing {spacing} > 0, radius {radius} > 0"
            ),
            Self::EmptySubset => write!(f, "subset of disks must be non-empty"),
            Self::DiskIndexOutOfRange { index, disks } => {
                write!(f, "disk index {index} out of range for chain of {disks}")
            }
            Self::EnumerationTooLarge { disks } => write!(
                f,
                "inclusion-exclusion over {disks} disks exceeds the {MAX_ENUMERATION_DISKS}-disk limit"
            ),
        }
    }
}

impl Error for GeometryError {}

/// Lens area for validated inputs: `separation >= 0`, `radius > 0`.
fn lens_area_unchecked(separation: f64, radius: f64) -> f64 {
    if separation >= 2.0 * radius {
        return 0.0;
    }
    // Clamp guards the arccos argument against rounding just above 1.
    let half_angle_cos = (separation / (2.0 * radius)).clamp(-1.0, 1.0);
    let chord_term = (4.0 * radius * radius - separation * separation).max(0.0).sqrt();
    // Near tangency the two terms cancel; keep rounding from going negative.
    (2.0 * radius * radius * half_angle_cos.acos() - 0.5 * separation * chord_term).max(0.0)
}

/// Two circles of equal radius whose centers sit `separation` apart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LensSpec {
    separation: f64,
    radius: f64,
}

impl LensSpec {
    pub fn new(separation: f64, radius: f64) -> Result<Self, GeometryError> {
        if separation.is_finite() && separation >= 0.0 && radius.is_finite() && radius > 0.0 {
            Ok(Self { separation, radius })
        } else {
            Err(GeometryError::InvalidLens { separation, radius })
        }
    }

    pub fn separation(&self) -> f64 {
        self.separation
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Area of the intersection of the two circles.
    ///
    /// `2R^2 (arccos(t / 2R) - (t / 4R^2) sqrt(4R^2 - t^2))` for `t < 2R`,
    /// exactly zero once the circles are tangent or disjoint.
    pub fn area(&self) -> f64 {
        lens_area_unchecked(self.separation, self.radius)
    }
}

/// Intersection area of two equal-radius circles `separation` apart.
pub fn lens_area(separation: f64, radius: f64) -> Result<f64, GeometryError> {
    LensSpec::new(separation, radius).map(|lens| lens.area())
}

/// `h` equal-radius disks with centers evenly spaced along a line; disk `i`
/// (zero-based) is centered at `(i * spacing, 0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskChain {
    disks: u32,
    spacing: f64,
    radius: f64,
}

impl DiskChain {
    pub fn new(disks: u32, spacing: f64, radius: f64) -> Result<Self, GeometryError> {
        let valid = disks >= 1
            && spacing.is_finite()
            && spacing > 0.0
            && radius.is_finite()
            && radius > 0.0;
        if valid {
            Ok(Self { disks, spacing, radius })
        } else {
            Err(GeometryError::InvalidChain { disks, spacing, radius })
        }
    }

    pub fn disks(&self) -> u32 {
        self.disks
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn center_x(&self, index: usize) -> f64 {
        index as f64 * self.spacing
    }

    pub fn disk_area(&self) -> f64 {
        PI * self.radius * self.radius
    }

    /// Distance between the first and last centers.
    pub fn length(&self) -> f64 {
        (self.disks - 1) as f64 * self.spacing
    }

    /// Smallest axis-aligned rectangle containing every disk.
    pub fn bounding_box(&self) -> BoundingBox {
        BoundingBox {
            min_x: -self.radius,
            max_x: self.length() + self.radius,
            min_y: -self.radius,
            max_y: self.radius,
        }
    }

    /// Whether disk `index` contains the point; `index` must be in range.
    pub fn disk_contains(&self, index: usize, x: f64, y: f64) -> bool {
        assert!(index < self.disks as usize, "disk index out of range");
        let dx = x - self.center_x(index);
        dx * dx + y * y <= self.radius * self.radius
    }

    /// Whether any disk of the chain contains the point.
    pub fn contains(&self, x: f64, y: f64) -> bool {
        (0..self.disks as usize).any(|i| self.disk_contains(i, x, y))
    }

    pub fn constants(&self) -> ChainConstants {
        ChainConstants {
            disk_area: self.disk_area(),
            adjacent_overlap: lens_area_unchecked(self.spacing, self.radius),
            skip_one_overlap: lens_area_unchecked(2.0 * self.spacing, self.radius),
            skip_two_overlap: lens_area_unchecked(3.0 * self.spacing, self.radius),
        }
    }
}

/// Axis-aligned rectangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundingBox {
    pub min_x: f64,
    pub max_x: f64,
    pub min_y: f64,
    pub max_y: f64,
}

impl BoundingBox {
    pub fn width(&self) -> f64 {
        self.max_x - self.min_x
    }

    pub fn height(&self) -> f64 {
        self.max_y - self.min_y
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }
}

/// Single-disk area and the pairwise overlaps at one, two, and three spacings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainConstants {
    pub disk_area: f64,
    pub adjacent_overlap: f64,
    pub skip_one_overlap: f64,
    pub skip_two_overlap: f64,
}

/// Area common to all disks in `indices` (zero-based, need not be sorted).
///
/// For equal disks on a line the common intersection is the lens of the two
/// extreme members: every interior center lies between the extremes, so its
/// disk covers any point the extremes share.
pub fn subset_intersection_area(
    chain: &DiskChain,
    indices: &[usize],
) -> Result<f64, GeometryError> {
    if indices.is_empty() {
        return Err(GeometryError::EmptySubset);
    }
    let mut lowest = usize::MAX;
    let mut highest = 0;
    for &index in indices {
        if index >= chain.disks as usize {
            return Err(GeometryError::DiskIndexOutOfRange { index, disks: chain.disks });
        }
        lowest = lowest.min(index);
        highest = highest.max(index);
    }
    let span = (highest - lowest) as f64;
    if span == 0.0 {
        Ok(chain.disk_area())
    } else {
        Ok(lens_area_unchecked(span * chain.spacing, chain.radius))
    }
}

/// Union area of the chain in closed form: `h pi R^2 - (h - 1) lens(d, R)`.
///
/// In the inclusion-exclusion expansion every subset term equals the lens of
/// its extreme pair, and for each extreme pair that is not adjacent the signed
/// counts over the intermediate members cancel, leaving only the `h` disks and
/// the `h - 1` adjacent overlaps.
pub fn chain_union_closed_form(chain: &DiskChain) -> f64 {
    let disks = chain.disks as f64;
    disks * chain.disk_area() - (disks - 1.0) * lens_area_unchecked(chain.spacing, chain.radius)
}

/// Union area by direct inclusion-exclusion over all `2^h - 1` subsets.
///
/// The signed subset counts are tallied per extreme-pair span in integer
/// arithmetic first, so the final sum is a short dot product free of the
/// cancellation noise a term-by-term float accumulation would carry.
pub fn chain_union_inclusion_exclusion(chain: &DiskChain) -> Result<f64, GeometryError> {
    if chain.disks > MAX_ENUMERATION_DISKS {
        return Err(GeometryError::EnumerationTooLarge { disks: chain.disks });
    }
    let mut signed_counts = vec![0i64; chain.disks as usize];
    for subset in 1u64..(1u64 << chain.disks) {
        let span = (63 - subset.leading_zeros()) - subset.trailing_zeros();
        if subset.count_ones() % 2 == 1 {
            signed_counts[span as usize] += 1;
        } else {
            signed_counts[span as usize] -= 1;
        }
    }
    let mut area = signed_counts[0] as f64 * chain.disk_area();
    for (span, &count) in signed_counts.iter().enumerate().skip(1) {
        if count != 0 {
            area += count as f64 * lens_area_unchecked(span as f64 * chain.spacing, chain.radius);
        }
    }
    Ok(area)
}

#[cfg(test)]
mod tests {
    use super::*;

    const ADJACENT_LENS: f64 = 2.152109225029709; // lens(0.5, 1)
    const SKIP_ONE_LENS: f64 = 1.2283696986087567; // lens(1, 1)
    const SKIP_TWO_LENS: f64 = 0.4533117539776098; // lens(1.5, 1)

    fn chain(disks: u32, spacing: f64) -> DiskChain {
        DiskChain::new(disks, spacing, 1.0).unwrap()
    }

    #[test]
    fn lens_area_matches_reference_values() {
        assert!((lens_area(0.5, 1.0).unwrap() - ADJACENT_LENS).abs() < 1e-15);
        assert!((lens_area(1.0, 1.0).unwrap() - SKIP_ONE_LENS).abs() < 1e-15);
        assert!((lens_area(1.5, 1.0).unwrap() - SKIP_TWO_LENS).abs() < 1e-15);
        assert!((lens_area(0.9, 1.0).unwrap() - 1.4043362760180718).abs() < 1e-15);
    }

    #[test]
    fn lens_area_of_coincident_circles_is_disk_area() {
        assert_eq!(lens_area(0.0, 1.0).unwrap(), PI);
        assert_eq!(lens_area(0.0, 3.0).unwrap(), 9.0 * PI);
    }

    #[test]
    fn lens_area_vanishes_from_tangency_on() {
        assert_eq!(lens_area(2.0, 1.0).unwrap(), 0.0);
        assert_eq!(lens_area(5.0, 1.0).unwrap(), 0.0);
        let just_touching = lens_area(2.0f64.next_down(), 1.0).unwrap();
        assert!((0.0..1e-12).contains(&just_touching));
    }

    #[test]
    fn lens_rejects_bad_parameters() {
        assert!(matches!(lens_area(-0.1, 1.0), Err(GeometryError::InvalidLens { .. })));
        assert!(lens_area(1.0, 0.0).is_err());
        assert!(lens_area(1.0, -2.0).is_err());
        assert!(lens_area(f64::NAN, 1.0).is_err());
        assert!(lens_area(1.0, f64::INFINITY).is_err());
    }

    #[test]
    fn chain_rejects_bad_parameters() {
        assert!(DiskChain::new(0, 0.5, 1.0).is_err());
        assert!(DiskChain::new(3, 0.0, 1.0).is_err());
        assert!(DiskChain::new(3, -0.5, 1.0).is_err());
        assert!(DiskChain::new(3, 0.5, 0.0).is_err());
        assert!(DiskChain::new(3, f64::NAN, 1.0).is_err());
    }

    #[test]
    fn chain_constants_use_multiples_of_the_spacing() {
        let constants = chain(6, 0.5).constants();
        assert_eq!(constants.disk_area, PI);
        assert!((constants.adjacent_overlap - ADJACENT_LENS).abs() < 1e-15);
        assert!((constants.skip_one_overlap - SKIP_ONE_LENS).abs() < 1e-15);
        assert!((constants.skip_two_overlap - SKIP_TWO_LENS).abs() < 1e-15);
        // Four spacings apart the disks no longer meet.
        assert_eq!(subset_intersection_area(&chain(6, 0.5), &[0, 4]).unwrap(), 0.0);
    }

    #[test]
    fn subset_intersection_depends_only_on_extremes() {
        let chain = chain(5, 0.5);
        let pair = subset_intersection_area(&chain, &[1, 3]).unwrap();
        let with_interior = subset_intersection_area(&chain, &[1, 2, 3]).unwrap();
        assert_eq!(pair, with_interior);
        assert!((pair - SKIP_ONE_LENS).abs() < 1e-15);
        let unsorted = subset_intersection_area(&chain, &[4, 0, 2]).unwrap();
        assert_eq!(unsorted, subset_intersection_area(&chain, &[0, 4]).unwrap());
    }

    #[test]
    fn subset_intersection_of_single_disk_is_disk_area() {
        assert_eq!(subset_intersection_area(&chain(3, 0.5), &[2]).unwrap(), PI);
    }

    #[test]
    fn subset_intersection_validates_indices() {
        let chain = chain(3, 0.5);
        assert!(matches!(subset_intersection_area(&chain, &[]), Err(GeometryError::EmptySubset)));
        assert!(matches!(
            subset_intersection_area(&chain, &[0, 3]),
            Err(GeometryError::DiskIndexOutOfRange { index: 3, .. })
        ));
    }

    #[test]
    fn closed_form_matches_hand_computed_unions() {
        // h pi - (h - 1) lens(1/2, 1) for the half-radius spacing chain.
        let expected = [
            (1, PI),
            (2, 4.131076082149877),
            (3, 5.1205595107099615),
            (5, 7.09952636783013),
            (6, 8.089009796390215),
        ];
        for (disks, union) in expected {
            assert!((chain_union_closed_form(&chain(disks, 0.5)) - union).abs() < 1e-12);
        }
    }

    #[test]
    fn single_disk_union_is_disk_area() {
        let single = chain(1, 0.5);
        assert_eq!(chain_union_closed_form(&single), PI);
        assert_eq!(chain_union_inclusion_exclusion(&single).unwrap(), PI);
    }

    #[test]
    fn disjoint_chain_union_is_sum_of_disk_areas() {
        let sparse = chain(4, 2.5);
        assert_eq!(chain_union_closed_form(&sparse), 4.0 * PI);
        assert_eq!(chain_union_inclusion_exclusion(&sparse).unwrap(), 4.0 * PI);
    }

    #[test]
    fn inclusion_exclusion_agrees_with_closed_form() {
        for disks in 1..=12 {
            for spacing in [0.3, 0.5, 0.9, 1.5] {
                let chain = chain(disks, spacing);
                let enumerated = chain_union_inclusion_exclusion(&chain).unwrap();
                let closed = chain_union_closed_form(&chain);
                assert!(
                    (enumerated - closed).abs() <= 1e-9 * closed,
                    "h={disks} d={spacing}: {enumerated} vs {closed}"
                );
            }
        }
    }

    #[test]
    fn inclusion_exclusion_span_tally_matches_subset_areas() {
        // Replays the bitmask walk and prices every subset individually.
        let chain = chain(8, 0.7);
        let mut direct = 0.0;
        for subset in 1u64..(1u64 << chain.disks()) {
            let indices: Vec<usize> =
                (0..chain.disks() as usize).filter(|i| subset & (1 << i) != 0).collect();
            let term = subset_intersection_area(&chain, &indices).unwrap();
            if indices.len() % 2 == 1 {
                direct += term;
            } else {
                direct -= term;
            }
        }
        let tallied = chain_union_inclusion_exclusion(&chain).unwrap();
        assert!((tallied - direct).abs() < 1e-9);
    }

    #[test]
    fn inclusion_exclusion_refuses_oversized_chains() {
        let oversized = chain(MAX_ENUMERATION_DISKS + 1, 0.5);
        assert!(matches!(
            chain_union_inclusion_exclusion(&oversized),
            Err(GeometryError::EnumerationTooLarge { .. })
        ));
    }

    #[test]
    fn bounding_box_covers_the_chain() {
        let bbox = chain(4, 0.5).bounding_box();
        assert_eq!(bbox.min_x, -1.0);
        assert_eq!(bbox.max_x, 2.5);
        assert_eq!(bbox.height(), 2.0);
        assert_eq!(bbox.area(), 7.0);
    }

    #[test]
    fn membership_checks_use_the_disk_boundary() {
        let chain = chain(3, 0.5);
        assert!(chain.disk_contains(0, 0.0, 1.0));
        assert!(!chain.disk_contains(0, 0.0, 1.0 + 1e-12));
        assert!(chain.contains(2.0, 0.0));
        assert!(!chain.contains(2.1, 0.0));
    }
}
