//! Closed-form spectrum of the vector + scalar Coulomb Dirac problem.
//!
//! For a channel with relativistic angular quantum number `K` the effective
//! (noninteger) angular momentum is
//!
//! ```text
//! γ = √(K² − A₁² + A₂²)
//! ```
//!
//! and every level with effective principal quantum number `ñ` satisfies
//!
//! ```text
//! (ñ² + A₁²)E² + 2mA₁A₂E − m²(ñ² − A₂²) = 0
//! ```
//!
//! whose two roots are the `Plus`/`Minus` branches. Which roots are bound
//! states is decided by [`physical_filter`], and the lowest (`ñ = γ`) level
//! of each channel is a first-order "nodeless" state that carries a single
//! root only (see [`nodeless_energy`]).

use std::fmt;

use crate::error::{Error, Result};
use crate::within_ulps;

/// Mass and the two Coulomb coupling strengths (dimensionless, ħ = c = 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Couplings {
    pub m: f64,
    /// Lorentz-vector strength, V_v(r) = −a1/r.
    pub a1: f64,
    /// Lorentz-scalar strength, V_s(r) = −a2/r.
    pub a2: f64,
}

impl Couplings {
    pub fn new(m: f64, a1: f64, a2: f64) -> Result<Self> {
        if !(m.is_finite() && m > 0.0) {
            return Err(Error::InvalidCouplings(format!("mass must be positive, got {m}")));
        }
        if !(a1.is_finite() && a2.is_finite()) {
            return Err(Error::InvalidCouplings("coupling strengths must be finite".into()));
        }
        if a1 < 0.0 || a2 < 0.0 {
            return Err(Error::InvalidCouplings(format!(
                "coupling strengths must be non-negative, got a1={a1}, a2={a2}"
            )));
        }
        Ok(Self { m, a1, a2 })
    }

    /// Couplings with m = 1.
    pub fn unit_mass(a1: f64, a2: f64) -> Result<Self> {
        Self::new(1.0, a1, a2)
    }

    /// Effective Coulomb charge m·A₂ + A₁·E of the reduced equation.
    pub fn effective_charge(&self, energy: f64) -> f64 {
        self.m * self.a2 + self.a1 * energy
    }
}

/// One radial sector, identified by K = ω̃(j + 1/2).
///
/// Stored as `K` itself; `j`, `ω̃` and `l` are derived.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Channel {
    kappa: i32,
}

impl Channel {
    pub fn from_kappa(kappa: i32) -> Result<Self> {
        if kappa == 0 {
            return Err(Error::InvalidChannel("K must be a nonzero integer".into()));
        }
        Ok(Self { kappa })
    }

    /// Build from `2j` (odd, ≥ 1) and the sign ω̃ ∈ {+1, −1}.
    pub fn new(two_j: u32, omega_tilde: i32) -> Result<Self> {
        if two_j.is_multiple_of(2) {
            return Err(Error::InvalidChannel(format!("2j = {two_j} is not odd")));
        }
        if omega_tilde != 1 && omega_tilde != -1 {
            return Err(Error::InvalidChannel(format!("omega_tilde = {omega_tilde} is not ±1")));
        }
        let k = (two_j as i32 + 1) / 2;
        Self::from_kappa(omega_tilde * k)
    }

    pub fn kappa(&self) -> i32 {
        self.kappa
    }

    pub fn abs_kappa(&self) -> u32 {
        self.kappa.unsigned_abs()
    }

    pub fn omega_tilde(&self) -> i32 {
        self.kappa.signum()
    }

    pub fn j(&self) -> f64 {
        self.abs_kappa() as f64 - 0.5
    }

    /// Orbital label l = j − ω̃/2.
    pub fn l(&self) -> u32 {
        if self.kappa > 0 {
            self.abs_kappa()
        } else {
            self.abs_kappa() - 1
        }
    }
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "K={:+}", self.kappa)
    }
}

/// How the principal quantum number `n` maps onto ñ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NtildeConvention {
    /// ñ = n − |K| + γ for both signs of K. Reproduces the Sommerfeld
    /// spectrum and the (K, −K) degeneracy.
    #[default]
    Standard,
    /// ñ = n_r + γ + 1 with n = n_r + |K| + 1 (K > 0) or n = n_r + |K|
    /// (K < 0) taken literally. Misplaces the K < 0 ground state; kept for
    /// demonstrating that.
    PaperLiteral,
}

/// Principal and radial quantum numbers of one level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LevelIndex {
    pub n: u32,
    pub n_r: u32,
}

impl LevelIndex {
    /// Level `n` of `channel`; fails when `n` is below the channel minimum.
    pub fn new(n: u32, channel: Channel, convention: NtildeConvention) -> Result<Self> {
        let k = channel.abs_kappa();
        let min = min_principal(channel, convention);
        if n < min {
            return Err(Error::InvalidLevel(format!("n = {n} is below the minimum {min} for channel {channel}")));
        }
        let n_r = if channel.kappa() < 0 {
            n - k
        } else {
            // The K > 0 nodeless level (n = |K|) has no n_r − 1 to step down to.
            n.saturating_sub(k + 1)
        };
        Ok(Self { n, n_r })
    }

    /// `true` for the first-order level with ñ = γ.
    pub fn is_nodeless(&self, channel: Channel) -> bool {
        self.n == channel.abs_kappa()
    }
}

/// Smallest principal quantum number the channel carries under `convention`.
pub fn min_principal(channel: Channel, convention: NtildeConvention) -> u32 {
    let k = channel.abs_kappa();
    match (convention, channel.kappa() > 0) {
        (NtildeConvention::PaperLiteral, true) => k + 1,
        _ => k,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Branch {
    Plus,
    Minus,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::Plus => "plus",
            Branch::Minus => "minus",
        })
    }
}

/// One closed-form level on one root branch.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumLine {
    pub channel: Channel,
    pub level: LevelIndex,
    pub gamma: f64,
    pub ntilde: f64,
    pub energy: f64,
    pub branch: Branch,
    pub physical: bool,
    pub rejection_reason: Option<String>,
    /// First-order level (ñ = γ) whose partner transformed component vanishes.
    pub nodeless: bool,
}

impl SpectrumLine {
    /// Degree of the Laguerre polynomial in the reduced radial function,
    /// ñ − γ − 1; `None` for nodeless levels.
    pub fn laguerre_degree(&self) -> Option<u32> {
        if self.nodeless {
            return None;
        }
        let d = (self.ntilde - self.gamma - 1.0).round();
        (d >= 0.0).then_some(d as u32)
    }
}

/// γ = √(K² − A₁² + A₂²); errors when the radicand is not strictly positive.
pub fn gamma(channel: Channel, c: &Couplings) -> Result<f64> {
    let k2 = (channel.kappa() as f64).powi(2);
    let critical = c.a1 * c.a1 - c.a2 * c.a2;
    let radicand = k2 - critical;
    if radicand <= 0.0 {
        return Err(Error::ImaginaryGamma { k_squared: k2, critical });
    }
    Ok(radicand.sqrt())
}

/// ñ for principal quantum number `n` under the standard convention.
pub fn ntilde(level: LevelIndex, channel: Channel, gamma: f64) -> f64 {
    ntilde_with(level, channel, gamma, NtildeConvention::Standard)
}

pub fn ntilde_with(level: LevelIndex, channel: Channel, gamma: f64, convention: NtildeConvention) -> f64 {
    let k = channel.abs_kappa() as f64;
    match convention {
        NtildeConvention::Standard => level.n as f64 - k + gamma,
        NtildeConvention::PaperLiteral => level.n_r as f64 + gamma + 1.0,
    }
}

/// Both roots `(E_plus, E_minus)` of
/// (ñ² + A₁²)E² + 2mA₁A₂E − m²(ñ² − A₂²) = 0.
///
/// The discriminant factors as m²ñ²(ñ² + A₁² − A₂²); the root that would
/// suffer cancellation is obtained from the product of the roots.
pub fn energy_roots(ntilde: f64, c: &Couplings) -> Result<(f64, f64)> {
    if !(ntilde > 0.0) {
        return Err(Error::InvalidLevel(format!("ntilde must be positive, got {ntilde}")));
    }
    let Couplings { m, a1, a2 } = *c;
    let n2 = ntilde * ntilde;
    let inner = sum_of_signed_squares(ntilde, a1, a2);
    if inner < 0.0 {
        return Err(Error::NoRealRoot { discriminant: n2 * inner });
    }
    let s = ntilde * inner.sqrt();
    let cross = a1 * a2;
    let lead = n2 + a1 * a1;
    let e_minus = -m * (cross + s) / lead;
    let denom = cross + s;
    let e_plus = if denom > 0.0 { m * (ntilde - a2) * (ntilde + a2) / denom } else { m * (s - cross) / lead };
    Ok((e_plus, e_minus))
}

/// x² + y² − z², with error-free products and a compensated sum. The plain
/// expression loses every digit when the levels nearly merge.
fn sum_of_signed_squares(x: f64, y: f64, z: f64) -> f64 {
    fn two_sum(a: f64, b: f64) -> (f64, f64) {
        let s = a + b;
        let bb = s - a;
        (s, (a - (s - bb)) + (b - bb))
    }
    let square = |v: f64| {
        let p = v * v;
        (p, v.mul_add(v, -p))
    };
    let (px, ex) = square(x);
    let (py, ey) = square(y);
    let (pz, ez) = square(z);
    let (s1, e1) = two_sum(px, py);
    let (s2, e2) = two_sum(s1, -pz);
    s2 + (e1 + e2 + ex + ey - ez)
}

/// Residual of the quadratic at `energy`, together with the magnitude of its
/// largest term (for ulp-scaled comparisons).
pub fn root_residual(energy: f64, ntilde: f64, c: &Couplings) -> (f64, f64) {
    let Couplings { m, a1, a2 } = *c;
    let n2 = ntilde * ntilde;
    let t2 = (n2 + a1 * a1) * energy * energy;
    let t1 = 2.0 * m * a1 * a2 * energy;
    // factored so that ñ ≈ A₂ does not cancel
    let t0 = m * m * (ntilde - a2) * (ntilde + a2);
    (t2 + t1 - t0, t2.abs().max(t1.abs()).max(t0.abs()))
}

/// Bound-state test: |E| < m and m·A₂ + A₁·E > 0.
pub fn physical_filter(energy: f64, c: &Couplings) -> (bool, Option<String>) {
    if !(energy.abs() < c.m) {
        return (false, Some("|E| ≥ m".to_string()));
    }
    if !(c.effective_charge(energy) > 0.0) {
        return (false, Some("mA₂+A₁E ≤ 0".to_string()));
    }
    (true, None)
}

/// Energy of the nodeless (ñ = γ) level fixed by its first-order constraint,
/// E·coshθ = −ω̃·m, written without θ:
///
/// ```text
/// E = −ω̃ m (K² − A₁²) / (|K|γ − ω̃A₁A₂)
/// ```
pub fn nodeless_energy(channel: Channel, c: &Couplings) -> Result<f64> {
    let g = gamma(channel, c)?;
    let k = channel.abs_kappa() as f64;
    let w = channel.omega_tilde() as f64;
    let den = k * g - w * c.a1 * c.a2;
    if den.abs() < 1e-12 {
        return Err(Error::DegenerateDenominator(den.abs()));
    }
    Ok(-w * c.m * (k * k - c.a1 * c.a1) / den)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpecialCase {
    ScalarOnly,
    VectorOnly,
    Equal,
}

impl SpecialCase {
    fn name(&self) -> &'static str {
        match self {
            SpecialCase::ScalarOnly => "scalar-only",
            SpecialCase::VectorOnly => "vector-only",
            SpecialCase::Equal => "equal-coupling",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpecialEnergy {
    Single(f64),
    /// (+E, −E)
    Pair(f64, f64),
}

/// The simplified energy formulas of the three special coupling cases.
pub fn special_case_energy(case: SpecialCase, ntilde: f64, c: &Couplings) -> Result<SpecialEnergy> {
    let Couplings { m, a1, a2 } = *c;
    let n2 = ntilde * ntilde;
    match case {
        SpecialCase::ScalarOnly => {
            if a1 != 0.0 {
                return Err(Error::CaseMismatch(case.name()));
            }
            let radicand = 1.0 - a2 * a2 / n2;
            if radicand < 0.0 {
                return Err(Error::NoRealRoot { discriminant: radicand });
            }
            let e = m * radicand.sqrt();
            Ok(SpecialEnergy::Pair(e, -e))
        }
        SpecialCase::VectorOnly => {
            if a2 != 0.0 {
                return Err(Error::CaseMismatch(case.name()));
            }
            Ok(SpecialEnergy::Single(m / (1.0 + a1 * a1 / n2).sqrt()))
        }
        SpecialCase::Equal => {
            if a1 != a2 {
                return Err(Error::CaseMismatch(case.name()));
            }
            let a = a1;
            Ok(SpecialEnergy::Single(m * (1.0 - 2.0 * a * a / (n2 + a * a))))
        }
    }
}

/// Closed-form lines of `channel` for n up to `n_max` (standard ñ convention).
pub fn spectrum(c: &Couplings, channel: Channel, n_max: u32) -> Result<Vec<SpectrumLine>> {
    spectrum_with(c, channel, n_max, NtildeConvention::Standard)
}

/// Closed-form lines of `channel`, sorted by energy.
///
/// Under the standard convention the n = |K| level is the nodeless one and
/// contributes only the root equal to [`nodeless_energy`]; every other level
/// contributes both roots.
pub fn spectrum_with(
    c: &Couplings,
    channel: Channel,
    n_max: u32,
    convention: NtildeConvention,
) -> Result<Vec<SpectrumLine>> {
    let g = gamma(channel, c)?;
    let n_min = min_principal(channel, convention);
    if n_max < n_min {
        return Err(Error::InvalidLevel(format!("n_max = {n_max} is below the minimum {n_min} for channel {channel}")));
    }
    let mut lines = Vec::new();
    for n in n_min..=n_max {
        let level = LevelIndex::new(n, channel, convention)?;
        let nt = ntilde_with(level, channel, g, convention);
        let (e_plus, e_minus) = energy_roots(nt, c)?;
        let nodeless = convention == NtildeConvention::Standard && level.is_nodeless(channel);
        let mut push = |energy: f64, branch: Branch| {
            let (physical, rejection_reason) = physical_filter(energy, c);
            lines.push(SpectrumLine {
                channel,
                level,
                gamma: g,
                ntilde: nt,
                energy,
                branch,
                physical,
                rejection_reason,
                nodeless,
            });
        };
        if nodeless {
            let target = nodeless_energy(channel, c)?;
            if (e_plus - target).abs() <= (e_minus - target).abs() {
                push(e_plus, Branch::Plus);
            } else {
                push(e_minus, Branch::Minus);
            }
        } else {
            push(e_plus, Branch::Plus);
            push(e_minus, Branch::Minus);
        }
    }
    lines.sort_by(|x, y| x.energy.total_cmp(&y.energy).then(x.level.n.cmp(&y.level.n)).then(x.branch.cmp(&y.branch)));
    Ok(lines)
}

/// `true` if the two energies agree to 4 ulps at the resolution of `m`.
pub fn energies_agree(x: f64, y: f64, c: &Couplings) -> bool {
    within_ulps(x, y, 4.0, c.m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn ch(k: i32) -> Channel {
        Channel::from_kappa(k).unwrap()
    }

    #[test]
    fn channel_derived_numbers() {
        let s = Channel::new(1, -1).unwrap();
        assert_eq!((s.kappa(), s.l()), (-1, 0));
        let p = Channel::new(1, 1).unwrap();
        assert_eq!((p.kappa(), p.l()), (1, 1));
        let d = Channel::new(5, 1).unwrap();
        assert_eq!((d.kappa(), d.l(), d.j()), (3, 3, 2.5));
        assert!(Channel::from_kappa(0).is_err());
        assert!(Channel::new(2, 1).is_err());
        assert!(Channel::new(3, 0).is_err());
    }

    #[test]
    fn couplings_validation() {
        assert!(Couplings::new(0.0, 0.1, 0.1).is_err());
        assert!(Couplings::new(1.0, f64::NAN, 0.1).is_err());
        assert!(Couplings::new(1.0, -0.1, 0.0).is_err());
        assert!(Couplings::new(2.0, 0.1, 0.3).is_ok());
    }

    #[test]
    fn gamma_examples() {
        let free = Couplings::unit_mass(0.0, 0.0).unwrap();
        assert_eq!(gamma(ch(-1), &free).unwrap(), 1.0);
        let equal = Couplings::unit_mass(0.6, 0.6).unwrap();
        assert_abs_diff_eq!(gamma(ch(1), &equal).unwrap(), 1.0, epsilon = 1e-15);
        let strong = Couplings::unit_mass(1.2, 0.0).unwrap();
        assert!(matches!(gamma(ch(1), &strong), Err(Error::ImaginaryGamma { .. })));
    }

    #[test]
    fn gamma_zero_is_rejected() {
        let c = Couplings::unit_mass(1.0, 0.0).unwrap();
        assert!(matches!(gamma(ch(-1), &c), Err(Error::ImaginaryGamma { .. })));
    }

    #[test]
    fn ntilde_examples() {
        let free = Couplings::unit_mass(0.0, 0.0).unwrap();
        let k = ch(-1);
        let g = gamma(k, &free).unwrap();
        assert_eq!(ntilde(LevelIndex::new(2, k, NtildeConvention::Standard).unwrap(), k, g), 2.0);

        let c = Couplings::unit_mass(0.5, 0.0).unwrap();
        let g = gamma(k, &c).unwrap();
        let ground = LevelIndex::new(1, k, NtildeConvention::Standard).unwrap();
        assert_abs_diff_eq!(ntilde(ground, k, g), 0.8660254038, epsilon = 1e-10);

        let kp = ch(1);
        let g = gamma(kp, &c).unwrap();
        let lvl = LevelIndex::new(2, kp, NtildeConvention::Standard).unwrap();
        assert_eq!(lvl.n_r, 0);
        assert_abs_diff_eq!(ntilde(lvl, kp, g), 1.8660254038, epsilon = 1e-10);
    }

    #[test]
    fn paper_literal_shifts_negative_kappa_ground_state() {
        let c = Couplings::unit_mass(0.5, 0.0).unwrap();
        let k = ch(-1);
        let g = gamma(k, &c).unwrap();
        let ground = LevelIndex::new(1, k, NtildeConvention::PaperLiteral).unwrap();
        assert_abs_diff_eq!(ntilde_with(ground, k, g, NtildeConvention::PaperLiteral), 1.0 + g);
    }

    #[test]
    fn energy_roots_examples() {
        let free = Couplings::unit_mass(0.0, 0.0).unwrap();
        assert_eq!(energy_roots(1.0, &free).unwrap(), (1.0, -1.0));

        let scalar = Couplings::unit_mass(0.0, 1.0).unwrap();
        let (p, m) = energy_roots(2.0, &scalar).unwrap();
        assert_abs_diff_eq!(p, 0.8660254038, epsilon = 1e-10);
        assert!(within_ulps(p, -m, 4.0, 1.0));

        let equal = Couplings::unit_mass(0.5, 0.5).unwrap();
        let (p, _) = energy_roots(1.0, &equal).unwrap();
        assert!(within_ulps(p, 0.6, 4.0, 1.0));
    }

    #[test]
    fn energy_roots_errors() {
        let scalar = Couplings::unit_mass(0.0, 3.0).unwrap();
        assert!(matches!(energy_roots(1.0, &scalar), Err(Error::NoRealRoot { .. })));
        assert!(energy_roots(0.0, &scalar).is_err());
    }

    #[test]
    fn physical_filter_examples() {
        let vector = Couplings::unit_mass(0.5, 0.0).unwrap();
        assert_eq!(physical_filter(-0.9, &vector), (false, Some("mA₂+A₁E ≤ 0".into())));
        let scalar = Couplings::unit_mass(0.0, 1.0).unwrap();
        assert_eq!(physical_filter(-0.8660254038, &scalar), (true, None));
        let both = Couplings::unit_mass(0.1, 0.1).unwrap();
        assert_eq!(physical_filter(1.2, &both), (false, Some("|E| ≥ m".into())));
    }

    #[test]
    fn special_case_examples() {
        let vector = Couplings::unit_mass(0.5, 0.0).unwrap();
        match special_case_energy(SpecialCase::VectorOnly, 0.8660254037844386, &vector).unwrap() {
            SpecialEnergy::Single(e) => assert_abs_diff_eq!(e, 0.8660254038, epsilon = 1e-10),
            other => panic!("{other:?}"),
        }
        let scalar = Couplings::unit_mass(0.0, 1.0).unwrap();
        match special_case_energy(SpecialCase::ScalarOnly, 2.0, &scalar).unwrap() {
            SpecialEnergy::Pair(p, m) => {
                assert_abs_diff_eq!(p, 0.8660254038, epsilon = 1e-10);
                assert_eq!(p, -m);
            }
            other => panic!("{other:?}"),
        }
        let equal = Couplings::unit_mass(0.5, 0.5).unwrap();
        assert_eq!(special_case_energy(SpecialCase::Equal, 1.0, &equal).unwrap(), SpecialEnergy::Single(0.6));
        assert!(matches!(special_case_energy(SpecialCase::Equal, 1.0, &vector), Err(Error::CaseMismatch(_))));
        assert!(matches!(special_case_energy(SpecialCase::ScalarOnly, 1.0, &vector), Err(Error::CaseMismatch(_))));
    }

    #[test]
    fn spectrum_free_field_is_unbound() {
        let free = Couplings::unit_mass(0.0, 0.0).unwrap();
        let lines = spectrum(&free, ch(-1), 2).unwrap();
        assert_eq!(lines.len(), 3);
        for line in &lines {
            assert_eq!(line.energy.abs(), 1.0);
            assert!(!line.physical);
        }
    }

    #[test]
    fn spectrum_pure_vector() {
        let c = Couplings::unit_mass(0.5, 0.0).unwrap();
        let lines = spectrum(&c, ch(-1), 2).unwrap();
        let physical: Vec<f64> = lines.iter().filter(|l| l.physical).map(|l| l.energy).collect();
        assert_eq!(physical.len(), 2);
        assert_abs_diff_eq!(physical[0], 0.8660254038, epsilon = 1e-10);
        // (1 + A₁²/(1+γ)²)^(−1/2)
        assert_abs_diff_eq!(physical[1], 0.9659258263, epsilon = 1e-10);
    }

    #[test]
    fn spectrum_scalar_nodeless_is_plus_only() {
        let c = Couplings::unit_mass(0.0, 0.5).unwrap();
        let lines = spectrum(&c, ch(-1), 1).unwrap();
        assert_eq!(lines.len(), 1);
        assert_eq!(lines[0].branch, Branch::Plus);
        assert!(lines[0].physical);
        assert_abs_diff_eq!(lines[0].energy, 1.0 / 1.25f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn positive_kappa_nodeless_level_is_minus_only() {
        let c = Couplings::unit_mass(0.0, 0.5).unwrap();
        let lines = spectrum(&c, ch(1), 1).unwrap();
        assert_eq!(lines.len(), 1);
        assert_eq!(lines[0].branch, Branch::Minus);
        assert!(lines[0].physical);
        assert_abs_diff_eq!(lines[0].energy, -1.0 / 1.25f64.sqrt(), epsilon = 1e-12);

        // Vector-dominated: the same level is not normalizable.
        let c = Couplings::unit_mass(0.5, 0.2).unwrap();
        let lines = spectrum(&c, ch(1), 1).unwrap();
        assert!(!lines[0].physical);
    }

    #[test]
    fn nodeless_energy_is_a_root() {
        for &(a1, a2) in &[(0.5, 0.0), (0.0, 0.5), (0.2, 0.5), (0.5, 0.2), (0.3, 0.3)] {
            let c = Couplings::unit_mass(a1, a2).unwrap();
            for k in [-2, -1, 1, 2] {
                let channel = ch(k);
                let g = gamma(channel, &c).unwrap();
                let e = nodeless_energy(channel, &c).unwrap();
                let (res, scale) = root_residual(e, g, &c);
                assert!(res.abs() <= 16.0 * f64::EPSILON * scale, "K={k} a=({a1},{a2})");
            }
        }
    }

    #[test]
    fn spectrum_requires_reachable_nmax() {
        let c = Couplings::unit_mass(0.1, 0.0).unwrap();
        assert!(spectrum(&c, ch(-3), 2).is_err());
        assert!(spectrum_with(&c, ch(2), 2, NtildeConvention::PaperLiteral).is_err());
        assert!(matches!(
            spectrum(&Couplings::unit_mass(1.2, 0.0).unwrap(), ch(-1), 1),
            Err(Error::ImaginaryGamma { .. })
        ));
    }

    #[test]
    fn spectrum_scales_with_mass() {
        let c1 = Couplings::new(1.0, 0.3, 0.2).unwrap();
        let c2 = Couplings::new(2.0, 0.3, 0.2).unwrap();
        let s1 = spectrum(&c1, ch(-2), 4).unwrap();
        let s2 = spectrum(&c2, ch(-2), 4).unwrap();
        for (x, y) in s1.iter().zip(&s2) {
            assert!(within_ulps(2.0 * x.energy, y.energy, 4.0, 2.0));
            assert_eq!(x.physical, y.physical);
        }
    }
}
