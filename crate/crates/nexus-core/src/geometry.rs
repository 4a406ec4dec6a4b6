//! Plaintext fence geometry: fixed-point coordinate scaling, rectangle
//! fences, and the perpendicular-projection containment test used as ground
//! truth for the encrypted pipeline.
//!
//! All geometry is planar over raw latitude/longitude. A point `L` lies in
//! rectangle `ABCD` iff
//!
//! ```text
//! 0 <= AL.AB <= |AB|^2  and  0 <= AL.AD <= |AD|^2
//! ```
//!
//! with non-strict bounds, so boundary points count as inside. The test is
//! only a rectangle test when `AB` is exactly perpendicular to `AD` in
//! scaled integer arithmetic, which the fence constructor enforces.

use thiserror::Error;

/// Default fixed-point scale: 1e7 steps per degree, about 1.1 cm at the
/// equator. Exceeds consumer GPS precision while keeping every projection
/// magnitude far below `n/2` for production key sizes.
pub const DEFAULT_SCALE: u64 = 10_000_000;

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("latitude {0} outside [-90, 90]")]
    LatitudeOutOfRange(f64),
    #[error("longitude {0} outside [-180, 180]")]
    LongitudeOutOfRange(f64),
    #[error("coordinates must be finite")]
    NonFiniteCoordinate,
    #[error("scale {0} must be a positive power of ten")]
    InvalidScale(u64),
    #[error("fence sides must have positive length")]
    DegenerateFence,
    #[error("fence sides must be exactly perpendicular in scaled coordinates")]
    NonPerpendicularSides,
    #[error("box corners must satisfy sw < ne in both coordinates")]
    InvertedBox,
}

/// A WGS84-style coordinate in decimal degrees, validated on construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeoPoint {
    lat: f64,
    lon: f64,
}

impl GeoPoint {
    pub fn new(lat: f64, lon: f64) -> Result<Self, GeometryError> {
        if !lat.is_finite() || !lon.is_finite() {
            return Err(GeometryError::NonFiniteCoordinate);
        }
        if !(-90.0..=90.0).contains(&lat) {
            return Err(GeometryError::LatitudeOutOfRange(lat));
        }
        if !(-180.0..=180.0).contains(&lon) {
            return Err(GeometryError::LongitudeOutOfRange(lon));
        }
        Ok(GeoPoint { lat, lon })
    }

    pub fn lat(&self) -> f64 {
        self.lat
    }

    pub fn lon(&self) -> f64 {
        self.lon
    }
}

/// Integer image of a coordinate: degrees times the deployment scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ScaledPoint {
    pub lat: i64,
    pub lon: i64,
}

impl ScaledPoint {
    pub fn new(lat: i64, lon: i64) -> Self {
        ScaledPoint { lat, lon }
    }
}

/// Deployment-wide fixed-point scale; must be a positive power of ten and
/// identical across every party of a deployment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScaleConfig {
    scale: u64,
}

impl ScaleConfig {
    pub fn new(scale: u64) -> Result<Self, GeometryError> {
        let mut x = scale;
        while x >= 10 && x % 10 == 0 {
            x /= 10;
        }
        if x != 1 {
            return Err(GeometryError::InvalidScale(scale));
        }
        Ok(ScaleConfig { scale })
    }

    pub fn scale(&self) -> u64 {
        self.scale
    }
}

impl Default for ScaleConfig {
    fn default() -> Self {
        ScaleConfig {
            scale: DEFAULT_SCALE,
        }
    }
}

/// Multiplies both coordinates by the scale and rounds half away from zero.
pub fn scale_point(p: GeoPoint, cfg: ScaleConfig) -> ScaledPoint {
    let scale = cfg.scale as f64;
    ScaledPoint {
        lat: (p.lat * scale).round() as i64,
        lon: (p.lon * scale).round() as i64,
    }
}

/// A rectangle fence held as three corners in scaled integer coordinates.
/// The fourth corner `C` is derived as `B + D - A`. Construction enforces
/// exact perpendicularity of `AB` and `AD` and non-degeneracy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fence {
    a: ScaledPoint,
    b: ScaledPoint,
    d: ScaledPoint,
}

/// Side vectors and squared side lengths of a fence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FenceVectors {
    pub ab: (i64, i64),
    pub ad: (i64, i64),
    pub ab_sq: i128,
    pub ad_sq: i128,
}

impl Fence {
    pub fn new(a: ScaledPoint, b: ScaledPoint, d: ScaledPoint) -> Result<Self, GeometryError> {
        let ab = diff(b, a);
        let ad = diff(d, a);
        if dot(ab, ab) == 0 || dot(ad, ad) == 0 {
            return Err(GeometryError::DegenerateFence);
        }
        if dot(ab, ad) != 0 {
            return Err(GeometryError::NonPerpendicularSides);
        }
        Ok(Fence { a, b, d })
    }

    pub fn a(&self) -> ScaledPoint {
        self.a
    }

    pub fn b(&self) -> ScaledPoint {
        self.b
    }

    pub fn d(&self) -> ScaledPoint {
        self.d
    }

    /// The derived fourth corner.
    pub fn corner_c(&self) -> ScaledPoint {
        ScaledPoint {
            lat: self.b.lat + self.d.lat - self.a.lat,
            lon: self.b.lon + self.d.lon - self.a.lon,
        }
    }

    pub fn vectors(&self) -> FenceVectors {
        fence_vectors(self)
    }
}

/// Side vectors `AB = B - A`, `AD = D - A` and their squared lengths.
pub fn fence_vectors(f: &Fence) -> FenceVectors {
    let ab = diff(f.b, f.a);
    let ad = diff(f.d, f.a);
    FenceVectors {
        ab,
        ad,
        ab_sq: dot(ab, ab),
        ad_sq: dot(ad, ad),
    }
}

/// Ground-truth containment: perpendicular projection with inclusive bounds.
pub fn contains_plaintext(f: &Fence, p: ScaledPoint) -> bool {
    let v = fence_vectors(f);
    let al = diff(p, f.a);
    let proj_ab = dot(al, v.ab);
    let proj_ad = dot(al, v.ad);
    0 <= proj_ab && proj_ab <= v.ab_sq && 0 <= proj_ad && proj_ad <= v.ad_sq
}

/// Builds an axis-aligned fence from a south-west / north-east box.
///
/// `A` is the scaled south-west corner, `B` shares its latitude (the south
/// edge), `D` shares its longitude (the west edge). Boxes that would cross
/// the antimeridian cannot be expressed: `sw.lon < ne.lon` is required and
/// both longitudes must already lie in `[-180, 180]`.
pub fn make_axis_aligned_fence(
    sw: GeoPoint,
    ne: GeoPoint,
    cfg: ScaleConfig,
) -> Result<Fence, GeometryError> {
    if sw.lat >= ne.lat || sw.lon >= ne.lon {
        return Err(GeometryError::InvertedBox);
    }
    let a = scale_point(sw, cfg);
    let b = ScaledPoint {
        lat: a.lat,
        lon: scale_point(GeoPoint { lat: sw.lat, lon: ne.lon }, cfg).lon,
    };
    let d = ScaledPoint {
        lat: scale_point(GeoPoint { lat: ne.lat, lon: sw.lon }, cfg).lat,
        lon: a.lon,
    };
    Fence::new(a, b, d)
}

fn diff(p: ScaledPoint, q: ScaledPoint) -> (i64, i64) {
    (p.lat - q.lat, p.lon - q.lon)
}

fn dot(u: (i64, i64), v: (i64, i64)) -> i128 {
    u.0 as i128 * v.0 as i128 + u.1 as i128 * v.1 as i128
}
