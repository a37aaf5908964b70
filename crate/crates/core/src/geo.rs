//! Geometry on the unit sphere: points, caps, distances and cap areas.
//!
//! The sphere radius is normalized to 1 throughout, so every distance and
//! cap radius is an angle in radians and every area is a fraction of the
//! total sphere area. Public coordinates are geographic degrees.

use rand::Rng;

use crate::{Error, Result};

/// A location on the unit sphere.
///
/// Latitude is degrees in `[-90, +90]`; longitude is degrees in
/// `[-180, +180)`, normalized on construction (exactly `+180` maps to
/// `-180`). Pole longitudes are preserved as given. The Cartesian unit
/// vector is cached at construction for the distance kernel.
#[derive(Debug, Clone, Copy)]
pub struct GeoPoint {
    lat_deg: f64,
    lon_deg: f64,
    ux: f64,
    uy: f64,
    uz: f64,
}

impl PartialEq for GeoPoint {
    fn eq(&self, other: &Self) -> bool {
        self.lat_deg == other.lat_deg && self.lon_deg == other.lon_deg
    }
}

impl GeoPoint {
    pub fn new(lat_deg: f64, lon_deg: f64) -> Result<Self> {
        if !(-90.0..=90.0).contains(&lat_deg) {
            return Err(Error::InvalidLatitude(lat_deg));
        }
        // A longitude already in range is kept bit-exact so that serialized
        // coordinates round-trip; anything else is reduced mod 360.
        let lon_deg = if (-180.0..180.0).contains(&lon_deg) {
            lon_deg
        } else {
            normalize_longitude(lon_deg)?
        };
        let (sin_lat, cos_lat) = lat_deg.to_radians().sin_cos();
        let (sin_lon, cos_lon) = lon_deg.to_radians().sin_cos();
        Ok(GeoPoint {
            lat_deg,
            lon_deg,
            ux: cos_lat * cos_lon,
            uy: cos_lat * sin_lon,
            uz: sin_lat,
        })
    }

    pub fn lat_deg(&self) -> f64 {
        self.lat_deg
    }

    pub fn lon_deg(&self) -> f64 {
        self.lon_deg
    }

    /// The diametrically opposite point.
    pub fn antipode(&self) -> GeoPoint {
        GeoPoint::new(-self.lat_deg, self.lon_deg + 180.0)
            .expect("antipodal coordinates are always in range")
    }
}

/// A spherical cap: all points within `angular_radius` of `center`.
///
/// The angular radius is the great-circle radius r/R in radians, in
/// `[0, pi]`; a radius of `pi/2` is a hemisphere and `pi` the full sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cap {
    center: GeoPoint,
    angular_radius: f64,
}

impl Cap {
    pub fn new(center: GeoPoint, angular_radius: f64) -> Result<Self> {
        if !(0.0..=std::f64::consts::PI).contains(&angular_radius) {
            return Err(Error::InvalidRadius(angular_radius));
        }
        Ok(Cap { center, angular_radius })
    }

    /// Cap covering the given fraction of the sphere area.
    pub fn from_fraction(center: GeoPoint, fraction: f64) -> Result<Self> {
        Cap::new(center, cap_radius_from_fraction(fraction)?)
    }

    pub fn center(&self) -> GeoPoint {
        self.center
    }

    pub fn angular_radius(&self) -> f64 {
        self.angular_radius
    }

    /// Normalized area of this cap.
    pub fn area_fraction(&self) -> f64 {
        cap_area_fraction(self.angular_radius).expect("radius validated at construction")
    }
}

/// Reduce a longitude in degrees to the canonical range `[-180, +180)`.
///
/// Exactly `+180` maps to `-180`, so every meridian has one representative.
pub fn normalize_longitude(lon_deg: f64) -> Result<f64> {
    if !lon_deg.is_finite() {
        return Err(Error::InvalidLongitude(lon_deg));
    }
    let mut lon = (lon_deg + 180.0).rem_euclid(360.0) - 180.0;
    // rem_euclid can round up to exactly 360 for tiny negative arguments.
    if lon >= 180.0 {
        lon -= 360.0;
    }
    Ok(lon)
}

/// Great-circle distance between two points, as an angle in radians.
///
/// Computed as `atan2(|p x q|, p . q)` on the cached unit vectors: an
/// arctangent-of-quotient form that keeps full absolute accuracy for nearly
/// coincident and nearly antipodal pairs, where the arccos-of-dot-product
/// form loses half the significant digits. The result is in `[0, pi]` and
/// bitwise symmetric in its arguments.
pub fn great_circle_distance(p: GeoPoint, q: GeoPoint) -> f64 {
    let cx = p.uy * q.uz - p.uz * q.uy;
    let cy = p.uz * q.ux - p.ux * q.uz;
    let cz = p.ux * q.uy - p.uy * q.ux;
    let cross = (cx * cx + cy * cy + cz * cz).sqrt();
    let dot = p.ux * q.ux + p.uy * q.uy + p.uz * q.uz;
    cross.atan2(dot)
}

/// Normalized area `F = (1 - cos r) / 2` of a cap with angular radius `r`.
pub fn cap_area_fraction(angular_radius: f64) -> Result<f64> {
    if !(0.0..=std::f64::consts::PI).contains(&angular_radius) {
        return Err(Error::InvalidRadius(angular_radius));
    }
    Ok((1.0 - angular_radius.cos()) / 2.0)
}

/// Angular radius of the cap covering the given area fraction.
///
/// Inverse of [`cap_area_fraction`]: `r = arccos(1 - 2F)`.
pub fn cap_radius_from_fraction(fraction: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&fraction) {
        return Err(Error::InvalidFraction(fraction));
    }
    Ok((1.0 - 2.0 * fraction).acos())
}

/// Whether `p` lies in the cap; the boundary (`d = r` exactly) counts as inside.
pub fn point_in_cap(p: GeoPoint, cap: &Cap) -> bool {
    great_circle_distance(p, cap.center) <= cap.angular_radius
}

/// Draw a point uniformly distributed over the sphere area.
///
/// Consumes exactly two uniform deviates from the stream: one for the
/// latitude (through an arcsine, which makes the density uniform in area)
/// and one for the longitude.
pub fn random_cap_center<R: Rng + ?Sized>(rng: &mut R) -> GeoPoint {
    let x1: f64 = rng.random();
    let x2: f64 = rng.random();
    sphere_point_from_uniforms(x1, x2)
}

/// Map two unit-interval deviates to an area-uniform point on the sphere.
///
/// `lat = arcsin(2 x1 - 1)` degrees, `lon = 360 x2 - 180` degrees.
pub fn sphere_point_from_uniforms(x1: f64, x2: f64) -> GeoPoint {
    debug_assert!((0.0..=1.0).contains(&x1) && (0.0..=1.0).contains(&x2));
    let lat = (2.0 * x1 - 1.0).asin().to_degrees().clamp(-90.0, 90.0);
    let lon = 360.0 * x2 - 180.0;
    GeoPoint::new(lat, lon).expect("unit-interval deviates map into the valid ranges")
}
