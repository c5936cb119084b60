//! Closed form against both oracles, per channel and over parameter grids.

use crate::compare::{compare_energies, relative_deviation, ComparisonReport};
use crate::error::{Error, Result};
use crate::fd::{selfconsistent_energy, RootConfig};
use crate::model::gamma;
use crate::model::{
    energy_roots, ntilde_with, spectrum_with, Channel, Couplings, LevelIndex, NtildeConvention, SpectrumLine,
};
use crate::parallel::Execution;
use crate::shoot::{dirac_shoot, ShootingConfig};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    pub n_max: u32,
    /// Acceptance bound on every relative deviation.
    pub tolerance: f64,
    /// Largest relative distance at which an oracle state is paired.
    pub pairing_window: f64,
    pub convention: NtildeConvention,
    pub shooting: ShootingConfig,
    pub root: RootConfig,
    pub run_fd: bool,
    pub execution: Execution,
}

impl VerifyConfig {
    pub fn new(m: f64, n_max: u32, tolerance: f64) -> Self {
        Self {
            n_max,
            tolerance,
            pairing_window: 1e-4,
            convention: NtildeConvention::Standard,
            shooting: ShootingConfig::for_mass(m),
            root: RootConfig::default(),
            run_fd: true,
            execution: Execution::default(),
        }
    }
}

/// One finite-difference check of a level with ñ ≥ γ + 1.
#[derive(Debug, Clone, PartialEq)]
pub struct FdCheck {
    pub line: SpectrumLine,
    pub k: u32,
    pub energy: Result<f64>,
}

impl FdCheck {
    pub fn relative_deviation(&self) -> Option<f64> {
        self.energy.as_ref().ok().map(|&e| relative_deviation(self.line.energy, e))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelVerification {
    pub couplings: Couplings,
    pub channel: Channel,
    /// Energy window scanned by the shooting oracle.
    pub window: (f64, f64),
    /// Closed-form lines (all branches) inside the window.
    pub closed: Vec<SpectrumLine>,
    pub shooting: ComparisonReport,
    pub fd: Vec<FdCheck>,
}

impl ChannelVerification {
    /// Every physical line has a shooting partner, every shooting state has
    /// a physical line, and all deviations are below `tol`.
    pub fn shooting_ok(&self, tol: f64) -> bool {
        self.shooting.missing_physical().next().is_none()
            && self.shooting.unmatched_oracle.is_empty()
            && self.shooting.matched_unphysical().next().is_none()
            && self.shooting.max_relative_deviation < tol
    }

    pub fn fd_ok(&self, tol: f64) -> bool {
        self.fd.iter().all(|c| c.relative_deviation().is_some_and(|d| d < tol))
    }

    pub fn passed(&self, tol: f64) -> bool {
        self.shooting_ok(tol) && self.fd_ok(tol)
    }
}

/// Shooting window for the levels n ≤ `n_max`.
///
/// Where levels accumulate (+m always; −m when A₂ > A₁, the only case with
/// physical negative-energy levels near −m) the edge is cut midway between
/// levels n_max and n_max + 1, so every requested level is inside and the
/// next one is not. Elsewhere the edge is ±m·cos(0.02).
pub fn shooting_window(
    c: &Couplings,
    channel: Channel,
    n_max: u32,
    convention: NtildeConvention,
) -> Result<(f64, f64)> {
    let g = gamma(channel, c)?;
    let roots = |n: u32| -> Result<(f64, f64)> {
        let level = LevelIndex::new(n, channel, convention)?;
        energy_roots(ntilde_with(level, channel, g, convention), c)
    };
    let (plus_a, minus_a) = roots(n_max)?;
    let (plus_b, minus_b) = roots(n_max + 1)?;
    let edge = c.m * 0.02f64.cos();
    let hi = (0.5 * (plus_a + plus_b)).min(edge);
    let lo = if c.a2 > c.a1 { (0.5 * (minus_a + minus_b)).max(-edge) } else { -edge };
    if !(lo < hi) {
        return Err(Error::InvalidConfig(format!("empty verification window [{lo}, {hi}]")));
    }
    Ok((lo, hi))
}

pub fn verify_channel(c: &Couplings, channel: Channel, cfg: &VerifyConfig) -> Result<ChannelVerification> {
    let window = shooting_window(c, channel, cfg.n_max, cfg.convention)?;
    let closed: Vec<SpectrumLine> = spectrum_with(c, channel, cfg.n_max, cfg.convention)?
        .into_iter()
        .filter(|l| l.energy > window.0 && l.energy < window.1)
        .collect();

    let shoot_cfg = ShootingConfig { energy_window: window, execution: cfg.execution, ..cfg.shooting };
    let oracle: Vec<f64> = match dirac_shoot(c, channel, &shoot_cfg) {
        Ok(states) => states.iter().map(|s| s.energy).collect(),
        Err(Error::NoStateInWindow { .. }) => Vec::new(),
        Err(e) => return Err(e),
    };
    let shooting = compare_energies(&closed, &oracle, cfg.pairing_window);

    let fd_lines: Vec<(SpectrumLine, u32)> = if cfg.run_fd {
        closed
            .iter()
            .filter(|l| l.physical && !l.nodeless)
            .filter_map(|l| l.laguerre_degree().map(|k| (l.clone(), k)))
            .collect()
    } else {
        Vec::new()
    };
    let fd = cfg.execution.map(&fd_lines, |(line, k)| FdCheck {
        line: line.clone(),
        k: *k,
        energy: selfconsistent_energy(c, channel, *k, line.branch, &cfg.root),
    });

    Ok(ChannelVerification { couplings: *c, channel, window, closed, shooting, fd })
}

/// [`verify_channel`] over many (couplings, channel) points, results in
/// input order.
pub fn verify_all(points: &[(Couplings, Channel)], cfg: &VerifyConfig) -> Vec<Result<ChannelVerification>> {
    cfg.execution.map(points, |(c, ch)| verify_channel(c, *ch, cfg))
}

/// A₁, A₂ ∈ {0, 0.2, 0.5}², K ∈ {−2, −1, +1, +2} at mass `m`.
pub fn default_grid(m: f64) -> Vec<(Couplings, Channel)> {
    let strengths = [0.0, 0.2, 0.5];
    let mut out = Vec::new();
    for &a1 in &strengths {
        for &a2 in &strengths {
            for k in [-2, -1, 1, 2] {
                let c = Couplings::new(m, a1, a2).expect("grid couplings are valid");
                let ch = Channel::from_kappa(k).expect("grid channels are valid");
                if gamma(ch, &c).is_ok() {
                    out.push((c, ch));
                }
            }
        }
    }
    out
}
