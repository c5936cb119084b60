//! Finite-difference eigensolver for the reduced Coulomb-like equation
//!
//! ```text
//! −u″ + γ(γ+1)/r²·u − 2z/r·u = μ·u
//! ```
//!
//! and the self-consistent energy search E² − m² = μ_k(z(E)) built on it.
//! Only γ and the effective charge z are used; the closed-form ñ is not.
//!
//! On a logarithmic grid the equation is first put in Liouville form
//! (r = eˣ, u = e^(x/2)·y), giving the symmetric pencil
//!
//! ```text
//! −y″ + [(γ+½)² − 2z·eˣ]·y = μ·e^(2x)·y
//! ```
//!
//! which a three-point stencil turns into a tridiagonal A·y = μ·B·y with B
//! diagonal and positive. Eigenvalues are isolated by Sturm counting (the
//! number of negative pivots of A − σB) and bisection, and every reported
//! value is Richardson-extrapolated from the grid and its refinement.

use crate::error::{Error, Result};
use crate::grid::{RadialGrid, Spacing};
use crate::model::{gamma, Branch, Channel, Couplings};

/// Tridiagonal pencil A − σB with constant off-diagonal.
struct Pencil {
    diag: Vec<f64>,
    weight: Vec<f64>,
    off: f64,
}

impl Pencil {
    fn build(gamma: f64, z: f64, grid: &RadialGrid) -> Self {
        let h = grid.step();
        let inner = 1..grid.n_points - 1;
        let ell = gamma * (gamma + 1.0);
        let (diag, weight) = match grid.spacing {
            Spacing::Logarithmic => {
                let shift = (gamma + 0.5).powi(2);
                inner
                    .map(|i| {
                        let r = grid.point(i);
                        (2.0 / (h * h) + shift - 2.0 * z * r, r * r)
                    })
                    .unzip()
            }
            Spacing::Uniform => inner
                .map(|i| {
                    let r = grid.point(i);
                    (2.0 / (h * h) + ell / (r * r) - 2.0 * z / r, 1.0)
                })
                .unzip(),
        };
        Self { diag, weight, off: -1.0 / (h * h) }
    }

    /// Number of eigenvalues strictly below `sigma`.
    fn count_below(&self, sigma: f64) -> usize {
        let off2 = self.off * self.off;
        let mut count = 0;
        let mut d = 1.0;
        for (i, (&a, &b)) in self.diag.iter().zip(&self.weight).enumerate() {
            d = a - sigma * b - if i == 0 { 0.0 } else { off2 / d };
            if d == 0.0 {
                d = -f64::EPSILON * (a.abs() + off2.sqrt());
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Gershgorin-type lower bound on the pencil spectrum.
    fn lower_bound(&self) -> f64 {
        let spread = 2.0 * self.off.abs();
        self.diag.iter().zip(&self.weight).map(|(a, b)| (a - spread) / b).fold(f64::INFINITY, f64::min)
    }

    /// The k-th (0-based) eigenvalue, if it is negative.
    fn eigenvalue(&self, k: usize) -> Option<f64> {
        if self.count_below(0.0) <= k {
            return None;
        }
        let mut lo = self.lower_bound().min(-f64::MIN_POSITIVE);
        let mut hi = 0.0;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Some(0.5 * (lo + hi))
    }
}

fn raw_levels(gamma: f64, z: f64, n_levels: usize, grid: &RadialGrid) -> Result<Vec<f64>> {
    let pencil = Pencil::build(gamma, z, grid);
    (0..n_levels)
        .map(|k| {
            pencil
                .eigenvalue(k)
                .ok_or_else(|| Error::TooFewLevels { found: pencil.count_below(0.0), requested: n_levels })
        })
        .collect()
}

/// Lowest `n_levels` eigenvalues μ of the reduced equation on `grid`,
/// Richardson-extrapolated against the grid with the step halved.
pub fn schrodinger_fd_eigen(gamma: f64, z_eff: f64, n_levels: usize, grid: &RadialGrid) -> Result<Vec<f64>> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidConfig(format!("gamma must be positive, got {gamma}")));
    }
    if !(z_eff > 0.0) {
        return Err(Error::NoBoundLevel(z_eff));
    }
    if n_levels == 0 {
        return Err(Error::InvalidConfig("at least one level must be requested".into()));
    }
    let coarse = raw_levels(gamma, z_eff, n_levels, grid)?;
    let fine = raw_levels(gamma, z_eff, n_levels, &grid.refined())?;
    Ok(coarse.iter().zip(&fine).map(|(c, f)| (4.0 * f - c) / 3.0).collect())
}

/// A logarithmic grid wide enough for the lowest `n_levels` states at
/// effective charge `z_eff`.
///
/// The outer edge uses a generous guess for the effective principal number,
/// n_levels + γ, so that even the highest requested state has decayed by many
/// e-folds; the grid scales as 1/z.
pub fn default_grid(gamma: f64, z_eff: f64, n_levels: usize, n_points: usize) -> Result<RadialGrid> {
    if !(z_eff > 0.0) {
        return Err(Error::NoBoundLevel(z_eff));
    }
    let nu = n_levels as f64 + gamma;
    RadialGrid::logarithmic(1e-6, nu * (2.0 * nu + 40.0), n_points).map(|g| g.scaled(1.0 / z_eff))
}

/// Root-finder settings for [`selfconsistent_energy`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootConfig {
    /// Sign-change scan samples over the admissible energy interval.
    pub scan_samples: usize,
    /// Energy convergence, relative to m.
    pub tolerance: f64,
    pub max_iterations: usize,
    pub grid_points: usize,
}

impl Default for RootConfig {
    fn default() -> Self {
        Self { scan_samples: 64, tolerance: 1e-13, max_iterations: 200, grid_points: 6000 }
    }
}

/// Solve E² − m² = μ_k(γ, mA₂ + A₁E) for the root on `branch`.
///
/// μ_k is the k-th eigenvalue of [`schrodinger_fd_eigen`] on
/// `default_grid(γ, z, k + 1, ·)`. Because that grid scales as 1/z, the
/// discrete operator scales exactly, μ_k(z) = z²·μ_k(1), so the eigenvalue is
/// computed once and the residual is cheap to bracket.
///
/// The residual f(E) = E² − m² − μ_k(z(E)) generically has two roots in the
/// admissible interval (z(E) > 0, |E| < m): `Plus` is the one where f
/// increases with E, `Minus` where it decreases.
pub fn selfconsistent_energy(c: &Couplings, channel: Channel, k: u32, branch: Branch, cfg: &RootConfig) -> Result<f64> {
    let g = gamma(channel, c)?;
    let Couplings { m, a1, a2 } = *c;
    let lo = if a1 > 0.0 { (-m * a2 / a1).max(-m) } else { -m };
    if !(c.effective_charge(0.5 * (lo + m)) > 0.0) {
        return Err(Error::NoRoot(format!("effective charge m*a2 + a1*E is never positive for a1={a1}, a2={a2}")));
    }
    let levels = k as usize + 1;
    let grid = default_grid(g, 1.0, levels, cfg.grid_points)?;
    let nu = schrodinger_fd_eigen(g, 1.0, levels, &grid)?[k as usize];
    let residual = |e: f64| e * e - m * m - c.effective_charge(e).powi(2) * nu;

    // E = m·cos φ resolves both ends of the interval evenly.
    let phi_hi = (lo / m).clamp(-1.0, 1.0).acos();
    let n = cfg.scan_samples.max(2);
    let energies: Vec<f64> = (0..n).map(|i| m * (phi_hi * (1.0 - i as f64 / (n - 1) as f64)).cos()).collect();
    let values: Vec<f64> = energies.iter().map(|&e| residual(e)).collect();
    let bracket = (0..n - 1).find(|&i| {
        let (fa, fb) = (values[i], values[i + 1]);
        let crosses = fa.signum() != fb.signum() && fa != 0.0 && fb != 0.0;
        crosses
            && match branch {
                Branch::Plus => fb > fa,
                Branch::Minus => fb < fa,
            }
    });
    let Some(i) = bracket else {
        return Err(Error::NoRoot(format!(
            "no {branch} root of E^2 - m^2 = mu_{k}(z(E)) for channel K={}",
            channel.kappa()
        )));
    };
    let (mut a, mut b, mut fa) = (energies[i], energies[i + 1], values[i]);
    for _ in 0..cfg.max_iterations {
        let mid = 0.5 * (a + b);
        if (b - a).abs() <= cfg.tolerance * m {
            return Ok(mid);
        }
        let fm = residual(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    Err(Error::NonConvergent(format!(
        "self-consistent bisection did not reach {} within {} iterations",
        cfg.tolerance, cfg.max_iterations
    )))
}
