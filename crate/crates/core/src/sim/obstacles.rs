//! Procedural obstacle maps and obstacle avoidance.

use super::rng::SplitMix64;
use super::{SimConfig, SimError};
use crate::model::{EnvironmentConfig, Mission, Obstacle, ObstacleSpec};
use crate::{Aabb, Vec3};

/// Edge length of a placement cell, m.
pub const CELL: f64 = 10.0;
/// Lowest obstacle height, m.
pub const MIN_HEIGHT: f64 = 10.0;

const OBSTACLE_KEY: u64 = 0x6f62_7374_6163_6c65;

/// Horizontal placement grid over `area`. Partial cells at the max edges
/// are not used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub origin: Vec3,
    pub nx: usize,
    pub ny: usize,
}

impl Grid {
    pub fn over(area: &Aabb) -> Self {
        let s = area.size();
        Self {
            origin: area.min,
            nx: (s.x / CELL).floor().max(0.0) as usize,
            ny: (s.y / CELL).floor().max(0.0) as usize,
        }
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Footprint of cell `i` (row-major in x), spanning the full area height.
    pub fn cell(&self, i: usize, area: &Aabb) -> Aabb {
        let (ix, iy) = (i % self.nx, i / self.nx);
        let min = Vec3::new(
            self.origin.x + ix as f64 * CELL,
            self.origin.y + iy as f64 * CELL,
            area.min.z,
        );
        Aabb::new(min, Vec3::new(min.x + CELL, min.y + CELL, area.max.z))
    }
}

/// Number of occupied cells for density `d`: ⌊d·n⌋, with a 1e-9 guard so
/// that e.g. 0.29·100 (28.999999999999996 in binary) counts as 29.
pub fn occupied_cells(d: f64, n: usize) -> usize {
    ((d * n as f64) + 1e-9).floor() as usize
}

/// Cells whose footprint lies within `tolerance` (horizontally) of a
/// mission point; they are never occupied.
pub fn exempt_cells(grid: &Grid, area: &Aabb, mission: &Mission, tolerance: f64) -> Vec<bool> {
    let points = mission.route();
    (0..grid.len())
        .map(|i| {
            let c = grid.cell(i, area);
            points.iter().any(|p| c.footprint_distance(*p) <= tolerance)
        })
        .collect()
}

/// Realizes a density spec as one box per occupied cell. Cells are chosen
/// by a seeded Fisher-Yates shuffle of the eligible cells; heights are then
/// drawn, in ascending cell order, uniformly from [10 m, area height].
pub fn place_obstacles(
    env: &EnvironmentConfig,
    mission: &Mission,
    seed: u64,
    tolerance: f64,
) -> Result<Vec<Obstacle>, SimError> {
    let d = match &env.obstacles {
        ObstacleSpec::List(list) => return Ok(list.clone()),
        ObstacleSpec::Density(d) => *d,
    };
    if !(0.0..=1.0).contains(&d) {
        return Err(SimError::Config(format!("obstacle density {d} outside [0, 1]")));
    }
    let area = &env.area;
    let grid = Grid::over(area);
    let want = occupied_cells(d, grid.len());
    if want == 0 {
        return Ok(Vec::new());
    }
    let exempt = exempt_cells(&grid, area, mission, tolerance);
    let mut eligible: Vec<usize> = (0..grid.len()).filter(|i| !exempt[*i]).collect();
    if eligible.len() < want {
        return Err(SimError::Config(format!(
            "density {d} needs {want} of {} cells but only {} are free of mission points",
            grid.len(),
            eligible.len()
        )));
    }
    let mut rng = SplitMix64::new(seed ^ OBSTACLE_KEY);
    rng.shuffle(&mut eligible);
    let mut chosen = eligible[..want].to_vec();
    chosen.sort_unstable();
    let top = area.size().z;
    Ok(chosen
        .into_iter()
        .map(|i| {
            let h = if top > MIN_HEIGHT {
                rng.uniform(MIN_HEIGHT, top)
            } else {
                top
            };
            let c = grid.cell(i, area);
            let centre = Vec3::new(c.center().x, c.center().y, area.min.z + h / 2.0);
            Obstacle::boxed(centre, Vec3::new(CELL, CELL, h))
        })
        .collect())
}

/// Repulsive horizontal velocity away from every obstacle closer than
/// `config.avoid_range()`. Each contributes `avoid_gain · (1 − d/R)` away
/// from its nearest surface point (from its axis when inside).
pub fn avoidance_offset(pos: Vec3, obstacles: &[Obstacle], config: &SimConfig) -> Vec3 {
    let range = config.avoid_range();
    let mut out = Vec3::zero();
    for o in obstacles {
        let q = o.closest_point(pos);
        let d = pos.distance(q);
        if d >= range {
            continue;
        }
        let away = if d > 0.0 { pos - q } else { pos - o.center };
        if let Some(dir) = away.horizontal().normalized() {
            out += dir * (config.avoid_gain * (1.0 - d / range));
        }
    }
    out
}

/// Distance from `pos` to the nearest obstacle surface; infinite when
/// there are none.
pub fn min_distance(pos: Vec3, obstacles: &[Obstacle]) -> f64 {
    obstacles
        .iter()
        .map(|o| o.distance(pos))
        .fold(f64::INFINITY, f64::min)
}
