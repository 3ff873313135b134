//! Geometric kernels: axis-aligned boxes and point-to-segment distance.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::num::{Scalar, Vector3};

#[derive(Debug, Clone, Copy, PartialEq, Error)]
#[error("degenerate segment: both endpoints coincide")]
pub struct DegenerateSegment;

/// Axis-aligned box given by its minimum and maximum corners.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "S: Scalar + Serialize", deserialize = "S: Scalar + Deserialize<'de>"))]
pub struct Aabb<S: Scalar> {
    pub min: Vector3<S>,
    pub max: Vector3<S>,
}

impl<S: Scalar> Aabb<S> {
    pub fn new(min: Vector3<S>, max: Vector3<S>) -> Self {
        Self { min, max }
    }

    pub fn from_center_size(center: Vector3<S>, size: Vector3<S>) -> Self {
        let half = size * S::lit(0.5);
        Self::new(center - half, center + half)
    }

    pub fn size(&self) -> Vector3<S> {
        self.max - self.min
    }

    pub fn center(&self) -> Vector3<S> {
        (self.min + self.max) * S::lit(0.5)
    }

    /// Well-formed: every extent non-negative and all coordinates finite.
    pub fn is_valid(&self) -> bool {
        self.min.is_finite()
            && self.max.is_finite()
            && self.min.x <= self.max.x
            && self.min.y <= self.max.y
            && self.min.z <= self.max.z
    }

    /// Closed containment test.
    pub fn contains(&self, p: Vector3<S>) -> bool {
        p.x >= self.min.x
            && p.x <= self.max.x
            && p.y >= self.min.y
            && p.y <= self.max.y
            && p.z >= self.min.z
            && p.z <= self.max.z
    }

    pub fn contains_box(&self, other: &Self) -> bool {
        self.contains(other.min) && self.contains(other.max)
    }

    /// Point of the solid box nearest to `p` (`p` itself when inside).
    pub fn closest_point(&self, p: Vector3<S>) -> Vector3<S> {
        p.component_max(self.min).component_min(self.max)
    }

    /// Distance from `p` to the solid box; zero inside.
    pub fn distance(&self, p: Vector3<S>) -> S {
        p.distance(self.closest_point(p))
    }

    /// Horizontal (x/y) distance from `p` to the box footprint.
    pub fn footprint_distance(&self, p: Vector3<S>) -> S {
        let q = self.closest_point(p);
        (p - q).horizontal().norm()
    }
}

/// Distance from `pos` to the segment `a`–`b`.
///
/// The perpendicular distance to the carrier line when the foot of the
/// perpendicular falls inside the segment, the distance to the nearer
/// endpoint otherwise.
pub fn cross_track<S: Scalar>(
    pos: Vector3<S>,
    a: Vector3<S>,
    b: Vector3<S>,
) -> Result<S, DegenerateSegment> {
    let ab = b - a;
    let len2 = ab.norm_squared();
    if len2 == S::zero() {
        return Err(DegenerateSegment);
    }
    let s = ((pos - a).dot(ab) / len2).max(S::zero()).min(S::one());
    Ok(pos.distance(a + ab * s))
}
