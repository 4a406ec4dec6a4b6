//! Fence and point generators for correctness sweeps and benchmarks.
//!
//! Generated fences always have even side-vector components, so edge
//! midpoints land on exact integer coordinates and the directed probe set
//! of [`probe_points`] is well defined.

use rand::Rng;

use crate::geometry::{Fence, ScaledPoint};

/// Pythagorean triples used to build exactly-perpendicular rotated fences.
const TRIPLES: [(i64, i64); 4] = [(3, 4), (5, 12), (8, 15), (20, 21)];

/// Random axis-aligned fence with even side lengths, comfortably inside the
/// valid coordinate range at scale 1e7.
pub fn random_axis_fence(rng: &mut impl Rng) -> Fence {
    let lat = rng.gen_range(-800_000_000i64..800_000_000);
    let lon = rng.gen_range(-1_700_000_000i64..1_700_000_000);
    let height = 2 * rng.gen_range(1i64..=5_000_000);
    let width = 2 * rng.gen_range(1i64..=5_000_000);
    let a = ScaledPoint::new(lat, lon);
    let b = ScaledPoint::new(lat, lon + width);
    let d = ScaledPoint::new(lat + height, lon);
    Fence::new(a, b, d).expect("axis-aligned construction is valid")
}

/// Random rectangle rotated by an integer-preserving similarity: the sides
/// are multiples of a Pythagorean direction pair, so perpendicularity holds
/// exactly in integer arithmetic.
pub fn random_rotated_fence(rng: &mut impl Rng) -> Fence {
    let (p, q) = TRIPLES[rng.gen_range(0..TRIPLES.len())];
    let u = 2 * rng.gen_range(1i64..=200_000 / p.max(q));
    let v = 2 * rng.gen_range(1i64..=200_000 / p.max(q));
    let lat = rng.gen_range(-700_000_000i64..700_000_000);
    let lon = rng.gen_range(-1_600_000_000i64..1_600_000_000);
    let a = ScaledPoint::new(lat, lon);
    let b = ScaledPoint::new(lat + u * p, lon + u * q);
    let d = ScaledPoint::new(lat - v * q, lon + v * p);
    Fence::new(a, b, d).expect("rotated construction is valid")
}

/// Random point drawn from the fence's bounding box inflated by half its
/// extent on every side, giving a healthy inside/outside mix.
pub fn random_point_near(fence: &Fence, rng: &mut impl Rng) -> ScaledPoint {
    let corners = [fence.a(), fence.b(), fence.d(), fence.corner_c()];
    let min_lat = corners.iter().map(|c| c.lat).min().expect("four corners");
    let max_lat = corners.iter().map(|c| c.lat).max().expect("four corners");
    let min_lon = corners.iter().map(|c| c.lon).min().expect("four corners");
    let max_lon = corners.iter().map(|c| c.lon).max().expect("four corners");
    let lat_pad = ((max_lat - min_lat) / 2).max(1);
    let lon_pad = ((max_lon - min_lon) / 2).max(1);
    ScaledPoint::new(
        rng.gen_range(min_lat - lat_pad..=max_lat + lat_pad),
        rng.gen_range(min_lon - lon_pad..=max_lon + lon_pad),
    )
}

/// Directed probe set for one fence: all four corners and all four edge
/// midpoints (inside, by the inclusive bounds) plus eight points nudged just
/// past each edge and each corner (outside). Requires even side-vector
/// components.
pub fn probe_points(fence: &Fence) -> Vec<(ScaledPoint, bool)> {
    let v = fence.vectors();
    assert!(
        v.ab.0 % 2 == 0 && v.ab.1 % 2 == 0 && v.ad.0 % 2 == 0 && v.ad.1 % 2 == 0,
        "probe points need even side vectors for exact midpoints"
    );
    let a = fence.a();
    let b = fence.b();
    let d = fence.d();
    let c = fence.corner_c();

    let half_ab = (v.ab.0 / 2, v.ab.1 / 2);
    let half_ad = (v.ad.0 / 2, v.ad.1 / 2);
    let mid_ab = offset(a, half_ab);
    let mid_dc = offset(d, half_ab);
    let mid_ad = offset(a, half_ad);
    let mid_bc = offset(b, half_ad);

    let step = |x: i64, y: i64| (x.signum(), y.signum());
    let ab_step = step(v.ab.0, v.ab.1);
    let ad_step = step(v.ad.0, v.ad.1);
    let neg = |s: (i64, i64)| (-s.0, -s.1);

    let sum = (v.ab.0 + v.ad.0, v.ab.1 + v.ad.1);
    let diff = (v.ab.0 - v.ad.0, v.ab.1 - v.ad.1);

    vec![
        (a, true),
        (b, true),
        (c, true),
        (d, true),
        (mid_ab, true),
        (mid_dc, true),
        (mid_ad, true),
        (mid_bc, true),
        // one diagonal unit beyond each edge
        (offset(mid_ab, neg(ad_step)), false),
        (offset(mid_dc, ad_step), false),
        (offset(mid_ad, neg(ab_step)), false),
        (offset(mid_bc, ab_step), false),
        // one diagonal unit beyond each corner
        (offset(a, neg(step(sum.0, sum.1))), false),
        (offset(b, step(diff.0, diff.1)), false),
        (offset(c, step(sum.0, sum.1)), false),
        (offset(d, neg(step(diff.0, diff.1))), false),
    ]
}

fn offset(p: ScaledPoint, by: (i64, i64)) -> ScaledPoint {
    ScaledPoint::new(p.lat + by.0, p.lon + by.1)
}
