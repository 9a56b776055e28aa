//! Finite evaluation grids used by verification passes.
//!
//! Grid density is the explicit fidelity knob of every "holds everywhere"
//! check in this crate; reports record the grid size they were produced
//! with.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::Point;
use crate::rng::ball_points;

#[derive(Debug, Error)]
pub enum GridError {
    #[error("grid spec `{0}` is malformed; expected xmin,xmax,ymin,ymax,n")]
    Malformed(String),
    #[error("grid has empty extent or fewer than 2 points per axis")]
    Degenerate,
}

/// A finite sampling of a region: a planar rectangle lattice or a
/// low-discrepancy point set inside a Euclidean ball.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GridSpec {
    Rect {
        xmin: f64,
        xmax: f64,
        ymin: f64,
        ymax: f64,
        n: usize,
    },
    Ball {
        center: Vec<f64>,
        radius: f64,
        count: usize,
    },
}

impl GridSpec {
    /// Planar lattice with `n` points per axis, endpoints included.
    pub fn rect(xmin: f64, xmax: f64, ymin: f64, ymax: f64, n: usize) -> Self {
        GridSpec::Rect {
            xmin,
            xmax,
            ymin,
            ymax,
            n,
        }
    }

    pub fn ball(center: Vec<f64>, radius: f64, count: usize) -> Self {
        GridSpec::Ball {
            center,
            radius,
            count,
        }
    }

    /// Parse the CLI form `xmin,xmax,ymin,ymax,n`.
    pub fn parse_rect(s: &str) -> Result<Self, GridError> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 5 {
            return Err(GridError::Malformed(s.to_string()));
        }
        let nums: Result<Vec<f64>, _> = parts[..4].iter().map(|p| p.parse::<f64>()).collect();
        let nums = nums.map_err(|_| GridError::Malformed(s.to_string()))?;
        let n: usize = parts[4]
            .parse()
            .map_err(|_| GridError::Malformed(s.to_string()))?;
        if n < 2 || nums[0] >= nums[1] || nums[2] >= nums[3] {
            return Err(GridError::Degenerate);
        }
        Ok(GridSpec::rect(nums[0], nums[1], nums[2], nums[3], n))
    }

    pub fn len(&self) -> usize {
        match self {
            GridSpec::Rect { n, .. } => n * n,
            GridSpec::Ball { count, .. } => *count,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Lattice spacing for rectangle grids (max over the two axes).
    pub fn rect_spacing(&self) -> Option<f64> {
        match self {
            GridSpec::Rect {
                xmin,
                xmax,
                ymin,
                ymax,
                n,
            } => {
                let m = (*n - 1).max(1) as f64;
                Some(((xmax - xmin) / m).max((ymax - ymin) / m))
            }
            GridSpec::Ball { .. } => None,
        }
    }

    /// Materialize the grid points.
    pub fn points(&self) -> Vec<Point> {
        match self {
            GridSpec::Rect {
                xmin,
                xmax,
                ymin,
                ymax,
                n,
            } => {
                let m = (*n - 1).max(1) as f64;
                let mut pts = Vec::with_capacity(n * n);
                for i in 0..*n {
                    let x = xmin + (xmax - xmin) * i as f64 / m;
                    for j in 0..*n {
                        let y = ymin + (ymax - ymin) * j as f64 / m;
                        pts.push(Point::new(vec![x, y]));
                    }
                }
                pts
            }
            GridSpec::Ball {
                center,
                radius,
                count,
            } => ball_points(center, *radius, *count)
                .into_iter()
                .map(Point::new)
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rect_parse_roundtrip() {
        let g = GridSpec::parse_rect("-2, 2, -2, 2, 200").unwrap();
        assert_eq!(g.len(), 40_000);
        let pts = g.points();
        assert_eq!(pts.len(), 40_000);
        assert_eq!(pts[0].coords, vec![-2.0, -2.0]);
        assert_eq!(pts.last().unwrap().coords, vec![2.0, 2.0]);
    }

    #[test]
    fn rect_parse_rejects_garbage() {
        assert!(GridSpec::parse_rect("1,2,3").is_err());
        assert!(GridSpec::parse_rect("2,1,0,1,10").is_err());
    }

    #[test]
    fn ball_grid_stays_in_ball() {
        let g = GridSpec::ball(vec![0.0, 0.0, 0.0, 0.0], 0.5, 500);
        for p in g.points() {
            assert!(p.norm() <= 0.5 + 1e-15);
        }
    }
}
