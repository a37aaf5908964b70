//! Latitude–longitude and Fibonacci sampling lattices.
//!
//! Both constructions are deterministic and order-stable: the
//! latitude–longitude grid is emitted pole to pole, west to east, and the
//! Fibonacci lattice by spiral index `i = -N..=N`. Lattices are immutable
//! after construction.

use std::fmt;
use std::str::FromStr;

use crate::geo::GeoPoint;
use crate::{Error, Result};

/// Lattice construction family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LatticeFamily {
    /// Equal-angle grid of meridian/parallel intersections plus the poles.
    LatLon,
    /// Golden-angle spiral lattice with one point per latitude.
    Fibonacci,
}

impl fmt::Display for LatticeFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LatticeFamily::LatLon => "latlon",
            LatticeFamily::Fibonacci => "fibonacci",
        })
    }
}

impl FromStr for LatticeFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "latlon" => Ok(LatticeFamily::LatLon),
            "fibonacci" => Ok(LatticeFamily::Fibonacci),
            other => Err(Error::InvalidParam(format!("unknown lattice family `{other}`"))),
        }
    }
}

/// Handedness of the generative spiral.
///
/// Eastward turns by the complement of the golden angle
/// (`360 / phi ~ 222.5` degrees per point), westward by the golden angle
/// itself (`360 / phi^2 ~ 137.5` degrees). Both traversals place the same
/// set of points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Chirality {
    Eastward,
    Westward,
}

impl fmt::Display for Chirality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Chirality::Eastward => "eastward",
            Chirality::Westward => "westward",
        })
    }
}

impl FromStr for Chirality {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "eastward" => Ok(Chirality::Eastward),
            "westward" => Ok(Chirality::Westward),
            other => Err(Error::InvalidParam(format!("unknown chirality `{other}`"))),
        }
    }
}

/// A lattice point with its quadrature weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedPoint {
    /// Construction index: spiral index `i` for Fibonacci, sequential
    /// position for the latitude–longitude grid.
    pub index: i64,
    pub point: GeoPoint,
    /// Non-negative weight, proportional to the area the point represents.
    pub weight: f64,
}

/// An ordered, immutable set of weighted sample points.
#[derive(Debug, Clone, PartialEq)]
pub struct Lattice {
    family: LatticeFamily,
    param: u64,
    points: Vec<WeightedPoint>,
}

impl Lattice {
    /// Reassemble a lattice from its parts (for example after parsing a
    /// serialized lattice). The point count must match the family's count
    /// formula for `param`, and all weights must be finite and non-negative.
    pub fn from_parts(family: LatticeFamily, param: u64, points: Vec<WeightedPoint>) -> Result<Self> {
        let expected = match family {
            LatticeFamily::LatLon => latlon_point_count(param)?,
            LatticeFamily::Fibonacci => fibonacci_point_count(param)?,
        };
        if points.len() as u64 != expected {
            return Err(Error::InvalidParam(format!(
                "{family} lattice with param {param} must have {expected} points, got {}",
                points.len()
            )));
        }
        for wp in &points {
            if !(wp.weight.is_finite() && wp.weight >= 0.0) {
                return Err(Error::InvalidParam(format!(
                    "point {} has invalid weight {}",
                    wp.index, wp.weight
                )));
            }
        }
        Ok(Lattice { family, param, points })
    }

    pub fn family(&self) -> LatticeFamily {
        self.family
    }

    /// Size parameter: `k` for the latitude–longitude grid, `N` for Fibonacci.
    pub fn param(&self) -> u64 {
        self.param
    }

    pub fn points(&self) -> &[WeightedPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Point count `P = 2k(k-1) + 2` of the latitude–longitude grid: `2k`
/// meridians times `k-1` parallels, plus the two poles.
pub fn latlon_point_count(k: u64) -> Result<u64> {
    if k < 1 {
        return Err(Error::InvalidParam("latlon parameter k must be >= 1".into()));
    }
    (2 * k)
        .checked_mul(k - 1)
        .and_then(|v| v.checked_add(2))
        .ok_or_else(|| Error::InvalidParam(format!("latlon point count overflows for k = {k}")))
}

/// Point count `P = 2N + 1` of the Fibonacci lattice.
pub fn fibonacci_point_count(n: u64) -> Result<u64> {
    n.checked_mul(2)
        .and_then(|v| v.checked_add(1))
        .ok_or_else(|| Error::InvalidParam(format!("fibonacci point count overflows for N = {n}")))
}

/// Build the equal-angle latitude–longitude lattice with spacing
/// `delta = 180/k` degrees.
///
/// Meridians sit at `-180 + m*delta` for `m = 0..2k`, parallels at
/// `90 - j*delta` for `j = 1..k`. Every point is weighted by the cosine of
/// its latitude; the poles carry weight 0 and longitude 0 by convention.
pub fn generate_latlon(k: u64) -> Result<Lattice> {
    let count = latlon_point_count(k)?;
    let count_usize = usize::try_from(count)
        .map_err(|_| Error::InvalidParam(format!("latlon lattice with k = {k} is too large")))?;
    let delta = 180.0 / k as f64;

    let mut points = Vec::with_capacity(count_usize);
    let mut index = 0i64;
    let mut push = |points: &mut Vec<WeightedPoint>, point: GeoPoint, weight: f64| {
        points.push(WeightedPoint { index, point, weight });
        index += 1;
    };

    push(&mut points, GeoPoint::new(90.0, 0.0)?, 0.0);
    for j in 1..k {
        // Southern parallels are exact negations of their northern mirrors,
        // so antipodal parallels carry bitwise-equal weights and hemisphere
        // estimates come out exact even when delta itself rounds.
        let lat = if 2 * j < k {
            90.0 - j as f64 * delta
        } else if 2 * j == k {
            0.0
        } else {
            -(90.0 - (k - j) as f64 * delta)
        };
        let weight = lat.to_radians().cos();
        for m in 0..2 * k {
            let lon = -180.0 + m as f64 * delta;
            push(&mut points, GeoPoint::new(lat, lon)?, weight);
        }
    }
    push(&mut points, GeoPoint::new(-90.0, 0.0)?, 0.0);

    debug_assert_eq!(points.len() as u64, count);
    Ok(Lattice { family: LatticeFamily::LatLon, param: k, points })
}

/// Build the Fibonacci lattice with `P = 2N + 1` points indexed `-N..=N`.
///
/// Point `i` sits at latitude `arcsin(2i / (2N+1))` — every point on its own
/// latitude, strictly increasing with `i` — and at the longitude reached
/// after `i` golden-angle turns of the chosen chirality. All weights are 1.
/// Point `i = 0` is exactly `(0, 0)`; no point lies on a pole.
pub fn generate_fibonacci(n: u64, chirality: Chirality) -> Result<Lattice> {
    let count = fibonacci_point_count(n)?;
    let count_usize = usize::try_from(count)
        .map_err(|_| Error::InvalidParam(format!("fibonacci lattice with N = {n} is too large")))?;
    let n_i64 = i64::try_from(n)
        .map_err(|_| Error::InvalidParam(format!("fibonacci parameter N = {n} is too large")))?;

    let mut points = Vec::with_capacity(count_usize);
    for i in -n_i64..=n_i64 {
        let point = GeoPoint::new(
            fibonacci_lat_deg(i as f64, n),
            fibonacci_lon_deg(i as f64, chirality),
        )?;
        points.push(WeightedPoint { index: i, point, weight: 1.0 });
    }

    debug_assert_eq!(points.len() as u64, count);
    Ok(Lattice { family: LatticeFamily::Fibonacci, param: n, points })
}

/// Point of the continuous generative spiral at real parameter `t`.
///
/// Evaluates the lattice formulas with the index made continuous; at integer
/// `t` this coincides bit-exactly with the lattice point of that index. The
/// parameter ranges over `[-N - 1/2, N + 1/2]`; the half-step extensions
/// reach the poles.
pub fn spiral_point(t: f64, n: u64, chirality: Chirality) -> Result<GeoPoint> {
    let limit = n as f64 + 0.5;
    if !(t >= -limit && t <= limit) {
        return Err(Error::SpiralRange { t, limit });
    }
    GeoPoint::new(fibonacci_lat_deg(t, n), fibonacci_lon_deg(t, chirality))
}

fn golden_ratio() -> f64 {
    (1.0 + 5.0_f64.sqrt()) / 2.0
}

fn fibonacci_lat_deg(x: f64, n: u64) -> f64 {
    let denom = (2 * n + 1) as f64;
    // The clamp only ever trims sub-ulp rounding past the poles.
    (2.0 * x / denom).asin().to_degrees().clamp(-90.0, 90.0)
}

/// Longitude after `x` spiral steps, reduced to `[-180, +180)`.
///
/// The argument is reduced before scaling (`mod(x, phi) * 360 / phi` rather
/// than `mod(x * 360 / phi, 360)`), which keeps the rounding of the scale
/// factor out of the reduction. The `%` remainder takes the sign of the
/// dividend, so a single two-sided wrap finishes the normalization.
fn fibonacci_lon_deg(x: f64, chirality: Chirality) -> f64 {
    let phi = golden_ratio();
    let mut lon = match chirality {
        Chirality::Eastward => (x % phi) * 360.0 / phi,
        Chirality::Westward => {
            let phi_sq = phi * phi;
            -((x % phi_sq) * 360.0 / phi_sq)
        }
    };
    if lon < -180.0 {
        lon += 360.0;
    }
    if lon >= 180.0 {
        lon -= 360.0;
    }
    // Canonicalize the negative zero produced by westward x = 0.
    if lon == 0.0 {
        lon = 0.0;
    }
    lon
}
