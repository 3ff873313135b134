//! Steady wind plus raised-cosine gusts.

use super::rng::SplitMix64;
use crate::model::WindConfig;
use crate::num::Scalar;
use crate::Vec3;

/// Keys the gust stream apart from obstacle placement for the same seed.
const GUST_KEY: u64 = 0x6775_7374_7769_6e64;

/// Raised-cosine pulse of height `peak` over `[t0, t0 + d]`, zero outside.
pub fn gust_envelope<S: Scalar>(peak: S, t0: S, d: S, t: S) -> S {
    if t < t0 || t > t0 + d {
        return S::zero();
    }
    let phase = S::TAU() * (t - t0) / d;
    peak * S::lit(0.5) * (S::one() - phase.cos())
}

/// Horizontal azimuth (radians from +x) of gust `k`: within ±45° of the
/// steady wind when there is one, anywhere otherwise.
fn gust_azimuth(wind: &WindConfig, seed: u64, k: u64) -> f64 {
    let mut rng = SplitMix64::at(seed ^ GUST_KEY, k);
    let h = wind.base.horizontal();
    if h.norm() > 0.0 {
        h.y.atan2(h.x) + rng.uniform(-std::f64::consts::FRAC_PI_4, std::f64::consts::FRAC_PI_4)
    } else {
        rng.uniform(0.0, std::f64::consts::TAU)
    }
}

/// Wind velocity at time `t`: the steady component plus every gust active
/// at `t`. Gust `k` (k ≥ 1) starts at `k · gust_interval`; overlapping gusts
/// add up.
pub fn wind_at(wind: &WindConfig, seed: u64, t: f64) -> Vec3 {
    if wind.gust_peak == 0.0 || t < wind.gust_interval {
        return wind.base;
    }
    let d = wind.gust_duration;
    let iv = wind.gust_interval;
    let first = (((t - d) / iv).ceil()).max(1.0) as u64;
    let last = (t / iv).floor() as u64;
    let mut w = wind.base;
    for k in first..=last {
        let t0 = k as f64 * iv;
        let mag = gust_envelope(wind.gust_peak, t0, d, t);
        if mag != 0.0 {
            let az = gust_azimuth(wind, seed, k);
            w += Vec3::new(mag * az.cos(), mag * az.sin(), 0.0);
        }
    }
    w
}
