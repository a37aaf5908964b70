//! Weighted point-counting area estimation.
//!
//! A region's area fraction is estimated as the weight of the lattice
//! points it contains divided by the total lattice weight. Accumulation is
//! exactly rounded, so the estimate does not depend on point order.

use crate::geo::{point_in_cap, Cap, GeoPoint};
use crate::lattice::Lattice;
use crate::sum::{exact_sum, ExactSum};
use crate::{Error, Result};

/// Membership predicate over sphere points: the Boolean indicator of the
/// region being measured.
///
/// Implementations must be deterministic — the same point always yields the
/// same membership.
pub trait Region {
    fn contains(&self, point: GeoPoint) -> bool;
}

impl Region for Cap {
    fn contains(&self, point: GeoPoint) -> bool {
        point_in_cap(point, self)
    }
}

/// A slice of caps acts as their union.
impl Region for [Cap] {
    fn contains(&self, point: GeoPoint) -> bool {
        // Short-circuits on the first containing cap.
        self.iter().any(|cap| point_in_cap(point, cap))
    }
}

impl<F: Fn(GeoPoint) -> bool> Region for F {
    fn contains(&self, point: GeoPoint) -> bool {
        self(point)
    }
}

/// Result of one point-counting area measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AreaEstimate {
    /// Estimated fraction of the sphere area, `weight_inside / weight_total`.
    pub fraction: f64,
    /// Number of lattice points inside the region.
    pub points_inside: u64,
    /// Sum of the weights of the points inside.
    pub weight_inside: f64,
    /// Sum of all lattice weights.
    pub weight_total: f64,
}

/// Estimate the normalized area of `region` by weighted point counting.
///
/// Returns the fraction of sphere area, never an absolute area; callers
/// multiply by `4 pi R^2` themselves.
pub fn estimate_area<R: Region + ?Sized>(lattice: &Lattice, region: &R) -> Result<AreaEstimate> {
    if lattice.is_empty() {
        return Err(Error::EmptyLattice);
    }
    let mut inside = ExactSum::new();
    let mut total = ExactSum::new();
    let mut points_inside = 0u64;
    for wp in lattice.points() {
        total.add(wp.weight);
        if region.contains(wp.point) {
            inside.add(wp.weight);
            points_inside += 1;
        }
    }
    let weight_total = total.value();
    if weight_total <= 0.0 {
        return Err(Error::ZeroWeight);
    }
    let weight_inside = inside.value();
    Ok(AreaEstimate {
        fraction: (weight_inside / weight_total).clamp(0.0, 1.0),
        points_inside,
        weight_inside,
        weight_total,
    })
}

/// Estimate the area of a union of caps; overlaps are not double-counted.
///
/// An empty cap list is a valid empty region.
pub fn estimate_cap_union_area(lattice: &Lattice, caps: &[Cap]) -> Result<AreaEstimate> {
    estimate_area(lattice, caps)
}

/// Absolute measurement error `E = |estimate - true_fraction|`.
pub fn absolute_error(estimate: f64, true_fraction: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&estimate));
    debug_assert!((0.0..=1.0).contains(&true_fraction));
    (estimate - true_fraction).abs()
}

/// Sum of the lattice weights: the size of an unweighted homogeneous
/// lattice doing the same sampling work. Equals `P` exactly for Fibonacci
/// lattices.
pub fn effective_point_count(lattice: &Lattice) -> f64 {
    exact_sum(lattice.points().iter().map(|wp| wp.weight))
}
