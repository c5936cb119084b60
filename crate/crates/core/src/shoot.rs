//! Shooting solver for the original (untransformed) coupled radial equations.
//!
//! With u = r·g and w = r·f the system solved is
//!
//! ```text
//! u′ = −(K/r)·u + (E + m + (A₁ − A₂)/r)·w
//! w′ =  (K/r)·w − (E − m + (A₁ + A₂)/r)·u
//! ```
//!
//! which is the transformed operator matrix at θ = 0 (S = identity) rewritten
//! for u, w. It is integrated in t = ln r. The outward solution starts from
//! the regular series u, w ∝ r^γ; the inward solution starts from the
//! decaying asymptote e^(−κr), κ = √(m² − E²). Because the system has zero
//! trace its Wronskian u₁w₂ − w₁u₂ is independent of r, so the matching
//! determinant vanishes exactly at eigenvalues wherever the match is made.
//!
//! The closed-form spectrum is never consulted here.

use crate::error::{Error, Result};
use crate::grid::{count_sign_changes, RadialGrid};
use crate::model::{gamma, Channel, Couplings};
use crate::ode::{State, Stepper};
use crate::parallel::Execution;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootingConfig {
    /// Absolute energies (E_lo, E_hi), strictly inside (−m, m).
    pub energy_window: (f64, f64),
    /// Fixed matching radius; `None` matches at 1/κ.
    pub match_radius: Option<f64>,
    pub ode_tolerance: f64,
    /// Energy convergence, relative to m.
    pub root_tolerance: f64,
    pub max_bisections: usize,
    /// Pre-scan samples, uniform in φ with E = m·cos φ.
    pub scan_samples: usize,
    pub r_min: f64,
    /// Outer radius in units of the decay length: r_max = range/κ.
    pub asymptotic_range: f64,
    /// Points on the logarithmic grid carrying the returned components.
    pub grid_points: usize,
    pub execution: Execution,
}

impl ShootingConfig {
    /// Defaults for mass `m`: window ±m·cos(0.02), 400 scan samples,
    /// ODE tolerance 1e−10, energy tolerance 1e−9.
    pub fn for_mass(m: f64) -> Self {
        let edge = m * 0.02f64.cos();
        Self {
            energy_window: (-edge, edge),
            match_radius: None,
            ode_tolerance: 1e-10,
            root_tolerance: 1e-9,
            max_bisections: 100,
            scan_samples: 400,
            r_min: 1e-6,
            asymptotic_range: 40.0,
            grid_points: 4000,
            execution: Execution::default(),
        }
    }

    pub fn with_window(mut self, lo: f64, hi: f64) -> Self {
        self.energy_window = (lo, hi);
        self
    }

    fn validate(&self, m: f64) -> Result<()> {
        let (lo, hi) = self.energy_window;
        if !(lo < hi && lo > -m && hi < m) {
            return Err(Error::InvalidConfig(format!(
                "energy window [{lo}, {hi}] must be nonempty and inside (-{m}, {m})"
            )));
        }
        if !(self.ode_tolerance > 0.0 && self.root_tolerance > 0.0) {
            return Err(Error::InvalidConfig("tolerances must be positive".into()));
        }
        if self.scan_samples < 2 || self.max_bisections == 0 {
            return Err(Error::InvalidConfig("need at least 2 scan samples and 1 bisection".into()));
        }
        if !(self.r_min > 0.0 && self.asymptotic_range > 1.0) {
            return Err(Error::InvalidConfig("r_min must be positive and asymptotic_range > 1".into()));
        }
        Ok(())
    }
}

/// An eigenpair found by the shooting oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundState {
    pub energy: f64,
    pub upper_nodes: usize,
    pub lower_nodes: usize,
    pub grid: RadialGrid,
    /// u = r·g on `grid`, normalized with `f_values` to ∫(u² + w²)dr = 1.
    pub g_values: Vec<f64>,
    /// w = r·f on `grid`.
    pub f_values: Vec<f64>,
}

/// Coupled system for one (channel, couplings, energy), in t = ln r.
#[derive(Debug, Clone, Copy)]
struct RadialSystem {
    kappa: f64,
    gamma: f64,
    m: f64,
    a1: f64,
    a2: f64,
    energy: f64,
}

impl RadialSystem {
    fn rhs(&self, t: f64, y: &State) -> State {
        let r = t.exp();
        let [u, w] = *y;
        [
            -self.kappa * u + (r * (self.energy + self.m) + self.a1 - self.a2) * w,
            self.kappa * w - (r * (self.energy - self.m) + self.a1 + self.a2) * u,
        ]
    }

    fn decay(&self) -> f64 {
        (self.m * self.m - self.energy * self.energy).sqrt()
    }

    /// Leading series direction (u₀, w₀) of the regular solution.
    fn regular_start(&self) -> State {
        let row1 = [self.a1 - self.a2, self.gamma + self.kappa];
        let row2 = [self.gamma - self.kappa, -(self.a1 + self.a2)];
        let n1 = row1[0].hypot(row1[1]);
        let n2 = row2[0].hypot(row2[1]);
        let (v, n) = if n1 >= n2 { (row1, n1) } else { (row2, n2) };
        let flip = if v[0] < 0.0 || (v[0] == 0.0 && v[1] < 0.0) { -1.0 } else { 1.0 };
        [flip * v[0] / n, flip * v[1] / n]
    }

    /// Decaying asymptotic direction, ∝ (E + m, −κ).
    fn asymptotic_start(&self) -> State {
        let k = self.decay();
        let e = self.energy + self.m;
        let n = e.hypot(k);
        [e / n, -k / n]
    }
}

struct Shooter<'a> {
    c: &'a Couplings,
    kappa: f64,
    gamma: f64,
    cfg: &'a ShootingConfig,
}

impl Shooter<'_> {
    fn system(&self, energy: f64) -> RadialSystem {
        RadialSystem { kappa: self.kappa, gamma: self.gamma, m: self.c.m, a1: self.c.a1, a2: self.c.a2, energy }
    }

    fn stepper(&self) -> Stepper {
        Stepper { rtol: self.cfg.ode_tolerance, max_steps: 200_000 }
    }

    fn radii(&self, sys: &RadialSystem) -> (f64, f64) {
        let k = sys.decay();
        let r_inf = self.cfg.asymptotic_range / k;
        let lo = 10.0 * self.cfg.r_min;
        let r_match = self.cfg.match_radius.unwrap_or(1.0 / k).clamp(lo, 0.5 * r_inf);
        (r_match, r_inf)
    }

    /// Normalized matching determinant sin∠(outward, inward) at energy `E`.
    fn determinant(&self, energy: f64) -> Option<f64> {
        let sys = self.system(energy);
        let (r_match, r_inf) = self.radii(&sys);
        let f = |t: f64, y: &State| sys.rhs(t, y);
        let stepper = self.stepper();
        let t_match = r_match.ln();
        let (out, _) = stepper.integrate(&f, self.cfg.r_min.ln(), t_match, sys.regular_start(), 0.05)?;
        let (inw, _) = stepper.integrate(&f, r_inf.ln(), t_match, sys.asymptotic_start(), 0.01)?;
        let det = out[0] * inw[1] - out[1] * inw[0];
        let norms = out[0].hypot(out[1]) * inw[0].hypot(inw[1]);
        (norms.is_finite() && norms > 0.0).then(|| det / norms)
    }

    fn refine(&self, mut phi_a: f64, mut phi_b: f64, mut d_a: f64) -> Result<f64> {
        let m = self.c.m;
        for _ in 0..self.cfg.max_bisections {
            let mid = 0.5 * (phi_a + phi_b);
            if (m * phi_a.cos() - m * phi_b.cos()).abs() <= self.cfg.root_tolerance * m {
                return Ok(m * mid.cos());
            }
            let d_mid = self
                .determinant(m * mid.cos())
                .ok_or_else(|| Error::NonConvergent(format!("integration failed at E = {}", m * mid.cos())))?;
            if d_mid == 0.0 {
                return Ok(m * mid.cos());
            }
            if d_mid.signum() == d_a.signum() {
                phi_a = mid;
                d_a = d_mid;
            } else {
                phi_b = mid;
            }
        }
        Err(Error::NonConvergent(format!(
            "bisection budget of {} exhausted near E = {}",
            self.cfg.max_bisections,
            m * (0.5 * (phi_a + phi_b)).cos()
        )))
    }

    /// Integrate at a converged energy and assemble the normalized state.
    fn assemble(&self, energy: f64) -> Result<BoundState> {
        let sys = self.system(energy);
        let (r_match, r_inf) = self.radii(&sys);
        let grid = RadialGrid::logarithmic(self.cfg.r_min, r_inf, self.cfg.grid_points)?;
        let radii = grid.points();
        let n = radii.len();
        let i_match = radii.partition_point(|&r| r < r_match).clamp(1, n - 2);
        let f = |t: f64, y: &State| sys.rhs(t, y);
        let stepper = self.stepper();
        let fail = || Error::NonConvergent(format!("integration failed at E = {energy}"));

        let mut u = vec![0.0; n];
        let mut w = vec![0.0; n];
        let mut y = sys.regular_start();
        let mut h = 0.05;
        u[0] = y[0];
        w[0] = y[1];
        for i in 1..=i_match {
            let (next, h_next) = stepper.integrate(&f, radii[i - 1].ln(), radii[i].ln(), y, h).ok_or_else(fail)?;
            y = next;
            h = h_next;
            u[i] = y[0];
            w[i] = y[1];
        }
        let out_match = y;

        let mut y = sys.asymptotic_start();
        let mut h = 0.01;
        let mut inward = vec![[0.0; 2]; n];
        inward[n - 1] = y;
        for i in (i_match..n - 1).rev() {
            let (next, h_next) = stepper.integrate(&f, radii[i + 1].ln(), radii[i].ln(), y, h).ok_or_else(fail)?;
            y = next;
            h = h_next;
            inward[i] = y;
        }
        let pivot = if out_match[0].abs() >= out_match[1].abs() { 0 } else { 1 };
        let scale = out_match[pivot] / inward[i_match][pivot];
        for i in i_match + 1..n {
            u[i] = scale * inward[i][0];
            w[i] = scale * inward[i][1];
        }

        let density: Vec<f64> = u.iter().zip(&w).map(|(a, b)| a * a + b * b).collect();
        let norm = grid.integrate(&density).sqrt();
        let peak = u.iter().fold(0.0_f64, |p, v| p.max(v.abs()));
        let phase = u.iter().find(|v| v.abs() > 1e-6 * peak).map_or(1.0, |v| v.signum());
        let s = phase / norm;
        u.iter_mut().for_each(|v| *v *= s);
        w.iter_mut().for_each(|v| *v *= s);

        Ok(BoundState {
            energy,
            upper_nodes: count_sign_changes(&u),
            lower_nodes: count_sign_changes(&w),
            grid,
            g_values: u,
            f_values: w,
        })
    }
}

/// All bound states of `channel` inside `cfg.energy_window`, by energy.
pub fn dirac_shoot(c: &Couplings, channel: Channel, cfg: &ShootingConfig) -> Result<Vec<BoundState>> {
    cfg.validate(c.m)?;
    let g = gamma(channel, c)?;
    let shooter = Shooter { c, kappa: channel.kappa() as f64, gamma: g, cfg };
    let energies = scan_roots(&shooter)?;
    if energies.is_empty() {
        let (lo, hi) = cfg.energy_window;
        return Err(Error::NoStateInWindow { lo, hi });
    }
    let mut states = cfg.execution.map(&energies, |&e| shooter.assemble(e)).into_iter().collect::<Result<Vec<_>>>()?;
    states.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    Ok(states)
}

/// Matching determinant at a single energy (normalized to [−1, 1]); exposed
/// for diagnostics and benchmarks.
pub fn matching_determinant(c: &Couplings, channel: Channel, cfg: &ShootingConfig, energy: f64) -> Result<f64> {
    let g = gamma(channel, c)?;
    let shooter = Shooter { c, kappa: channel.kappa() as f64, gamma: g, cfg };
    shooter.determinant(energy).ok_or_else(|| Error::NonConvergent(format!("integration failed at E = {energy}")))
}

fn scan_roots(shooter: &Shooter<'_>) -> Result<Vec<f64>> {
    let cfg = shooter.cfg;
    let m = shooter.c.m;
    let (lo, hi) = cfg.energy_window;
    let phi_lo = (hi / m).acos();
    let phi_hi = (lo / m).acos();
    let n = cfg.scan_samples;
    let phis: Vec<f64> = (0..n).map(|i| phi_lo + (phi_hi - phi_lo) * i as f64 / (n - 1) as f64).collect();
    let dets = cfg.execution.map(&phis, |&phi| shooter.determinant(m * phi.cos()));

    let mut brackets = Vec::new();
    let mut exact = Vec::new();
    for i in 0..n - 1 {
        let (Some(da), Some(db)) = (dets[i], dets[i + 1]) else { continue };
        if da == 0.0 {
            exact.push(m * phis[i].cos());
        } else if db != 0.0 && da.signum() != db.signum() {
            brackets.push((phis[i], phis[i + 1], da));
        }
    }
    let refined =
        cfg.execution.map(&brackets, |&(a, b, da)| shooter.refine(a, b, da)).into_iter().collect::<Result<Vec<_>>>()?;
    exact.extend(refined);
    Ok(exact)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn ch(k: i32) -> Channel {
        Channel::from_kappa(k).unwrap()
    }

    #[test]
    fn free_field_has_no_states() {
        let c = Couplings::unit_mass(0.0, 0.0).unwrap();
        let cfg = ShootingConfig::for_mass(1.0);
        for k in [-1, 1, 2] {
            assert!(matches!(dirac_shoot(&c, ch(k), &cfg), Err(Error::NoStateInWindow { .. })));
        }
    }

    #[test]
    fn sommerfeld_ground_state() {
        let c = Couplings::unit_mass(0.5, 0.0).unwrap();
        let cfg = ShootingConfig::for_mass(1.0).with_window(0.5, 0.9);
        let states = dirac_shoot(&c, ch(-1), &cfg).unwrap();
        assert_eq!(states.len(), 1);
        assert_relative_eq!(states[0].energy, 0.75f64.sqrt(), epsilon = 1e-8);
        assert_eq!(states[0].upper_nodes, 0);
        assert_eq!(states[0].lower_nodes, 0);
        let density: Vec<f64> =
            states[0].g_values.iter().zip(&states[0].f_values).map(|(u, w)| u * u + w * w).collect();
        assert_relative_eq!(states[0].grid.integrate(&density), 1.0, epsilon = 1e-10);
    }

    #[test]
    fn scalar_nodeless_state_has_no_negative_partner() {
        let c = Couplings::unit_mass(0.0, 0.5).unwrap();
        let cfg = ShootingConfig::for_mass(1.0).with_window(-0.93, 0.93);
        let states = dirac_shoot(&c, ch(-1), &cfg).unwrap();
        let lowest_positive = states.iter().find(|s| s.energy > 0.0).unwrap();
        assert_relative_eq!(lowest_positive.energy, 1.0 / 1.25f64.sqrt(), epsilon = 1e-8);
        assert!(states.iter().all(|s| (s.energy + 1.0 / 1.25f64.sqrt()).abs() > 1e-3));
    }

    #[test]
    fn imaginary_gamma_is_reported() {
        let c = Couplings::unit_mass(1.2, 0.0).unwrap();
        let cfg = ShootingConfig::for_mass(1.0);
        assert!(matches!(dirac_shoot(&c, ch(-1), &cfg), Err(Error::ImaginaryGamma { .. })));
    }

    #[test]
    fn bad_window_is_rejected() {
        let c = Couplings::unit_mass(0.5, 0.0).unwrap();
        let cfg = ShootingConfig::for_mass(1.0).with_window(0.9, 0.5);
        assert!(matches!(dirac_shoot(&c, ch(-1), &cfg), Err(Error::InvalidConfig(_))));
        let cfg = ShootingConfig::for_mass(1.0).with_window(0.5, 1.0);
        assert!(dirac_shoot(&c, ch(-1), &cfg).is_err());
    }

    #[test]
    fn determinant_is_independent_of_match_radius_sign_pattern() {
        let c = Couplings::unit_mass(0.3, 0.1).unwrap();
        let base = ShootingConfig::for_mass(1.0);
        let fixed = ShootingConfig { match_radius: Some(3.0), ..base };
        let e1 = dirac_shoot(&c, ch(-1), &base.with_window(0.5, 0.99)).unwrap();
        let e2 = dirac_shoot(&c, ch(-1), &fixed.with_window(0.5, 0.99)).unwrap();
        assert_eq!(e1.len(), e2.len());
        for (a, b) in e1.iter().zip(&e2) {
            assert_relative_eq!(a.energy, b.energy, epsilon = 1e-8);
        }
    }
}
