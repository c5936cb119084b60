//! Radial grids, trapezoidal quadrature and sign-change counting.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Uniform,
    Logarithmic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialGrid {
    pub r_min: f64,
    pub r_max: f64,
    pub n_points: usize,
    pub spacing: Spacing,
}

impl RadialGrid {
    pub const MIN_POINTS: usize = 100;

    pub fn new(r_min: f64, r_max: f64, n_points: usize, spacing: Spacing) -> Result<Self> {
        if !(r_min > 0.0 && r_max > r_min && r_max.is_finite()) {
            return Err(Error::InvalidGrid(format!("need 0 < r_min < r_max, got [{r_min}, {r_max}]")));
        }
        if n_points < Self::MIN_POINTS {
            return Err(Error::InvalidGrid(format!("need at least {} points, got {n_points}", Self::MIN_POINTS)));
        }
        Ok(Self { r_min, r_max, n_points, spacing })
    }

    pub fn logarithmic(r_min: f64, r_max: f64, n_points: usize) -> Result<Self> {
        Self::new(r_min, r_max, n_points, Spacing::Logarithmic)
    }

    pub fn uniform(r_min: f64, r_max: f64, n_points: usize) -> Result<Self> {
        Self::new(r_min, r_max, n_points, Spacing::Uniform)
    }

    /// Step in r (uniform) or in ln r (logarithmic).
    pub fn step(&self) -> f64 {
        let span = match self.spacing {
            Spacing::Uniform => self.r_max - self.r_min,
            Spacing::Logarithmic => (self.r_max / self.r_min).ln(),
        };
        span / (self.n_points - 1) as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        if i + 1 == self.n_points {
            return self.r_max;
        }
        match self.spacing {
            Spacing::Uniform => self.r_min + i as f64 * self.step(),
            Spacing::Logarithmic => self.r_min * (i as f64 * self.step()).exp(),
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.point(i)).collect()
    }

    /// Same grid with both ends multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self { r_min: self.r_min * factor, r_max: self.r_max * factor, ..*self }
    }

    /// Same range with the step halved (2n − 1 points).
    pub fn refined(&self) -> Self {
        Self { n_points: 2 * self.n_points - 1, ..*self }
    }

    /// Trapezoidal ∫ f dr over the grid (in ln r for logarithmic spacing).
    pub fn integrate(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.n_points);
        let h = self.step();
        let weight = |i: usize| match self.spacing {
            Spacing::Uniform => 1.0,
            Spacing::Logarithmic => self.point(i),
        };
        let inner: f64 = (1..self.n_points - 1).map(|i| values[i] * weight(i)).sum();
        let ends = 0.5 * (values[0] * weight(0) + values[self.n_points - 1] * weight(self.n_points - 1));
        h * (inner + ends)
    }
}

/// Cells skipped at each end when counting nodes.
pub const NODE_BOUNDARY_CELLS: usize = 2;

/// Strict sign changes of `values`, skipping the boundary cells and entries
/// below 1e−12 of the peak magnitude.
pub fn count_sign_changes(values: &[f64]) -> usize {
    let peak = values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if peak == 0.0 || values.len() <= 2 * NODE_BOUNDARY_CELLS {
        return 0;
    }
    let floor = 1e-12 * peak;
    let interior = &values[NODE_BOUNDARY_CELLS..values.len() - NODE_BOUNDARY_CELLS];
    let mut last_sign = 0.0;
    let mut changes = 0;
    for &v in interior {
        if v.abs() <= floor {
            continue;
        }
        let sign = v.signum();
        if last_sign != 0.0 && sign != last_sign {
            changes += 1;
        }
        last_sign = sign;
    }
    changes
}
