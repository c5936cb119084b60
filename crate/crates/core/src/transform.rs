//! Similarity transformation S = a + ibβα·r̂ of the radial Dirac system.
//!
//! With coshθ = (a² + b²)/(a² − b²) and sinhθ = 2ab/(a² − b²) the transformed
//! radial pair (R, Q) obeys `M·(R, Q)ᵀ = E·(R, Q)ᵀ` with first-order operator
//! entries. Choosing
//!
//! ```text
//! sinhθ = (|K|A₂ − ω̃A₁γ)/(K² − A₁²),   coshθ = (|K|γ − ω̃A₁A₂)/(K² − A₁²)
//! ```
//!
//! makes one of the two ξ factors r-independent, and eliminating the partner
//! component leaves a Coulomb-like equation with centrifugal term γ(γ+1)/r².
//!
//! The elimination here is carried out symbolically on operators of the form
//! `Σ c·r^p·∂^d`, so a sign error anywhere in the chain shows up as a wrong
//! coefficient rather than being absorbed into a hand-simplified formula.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::model::{gamma, Channel, Couplings};

/// Guard on |K² − A₁²| below which the transformation is reported degenerate.
pub const DENOMINATOR_GUARD: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperbolicPair {
    pub sinh_theta: f64,
    pub cosh_theta: f64,
}

/// Half-angle parameters of S, normalized to a² − b² = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixerPair {
    pub a: f64,
    pub b: f64,
}

impl MixerPair {
    pub const IDENTITY: MixerPair = MixerPair { a: 1.0, b: 0.0 };

    /// (coshθ, sinhθ) recovered through the quotient formulas.
    pub fn hyperbolics(&self) -> HyperbolicPair {
        let den = self.a * self.a - self.b * self.b;
        HyperbolicPair {
            sinh_theta: 2.0 * self.a * self.b / den,
            cosh_theta: (self.a * self.a + self.b * self.b) / den,
        }
    }
}

/// d_coeff·∂ + inv_r_coeff/r + const_coeff
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FirstOrderOp {
    pub d_coeff: f64,
    pub inv_r_coeff: f64,
    pub const_coeff: f64,
}

impl FirstOrderOp {
    pub fn new(d_coeff: f64, inv_r_coeff: f64, const_coeff: f64) -> Self {
        Self { d_coeff, inv_r_coeff, const_coeff }
    }

    pub fn to_operator(&self) -> RadialOperator {
        let mut op = RadialOperator::zero();
        op.add_term(1, 0, self.d_coeff);
        op.add_term(0, -1, self.inv_r_coeff);
        op.add_term(0, 0, self.const_coeff);
        op
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(s * self.d_coeff, s * self.inv_r_coeff, s * self.const_coeff)
    }

    /// Value at `r` of the multiplicative part (ignores the derivative).
    pub fn multiplier_at(&self, r: f64) -> f64 {
        self.inv_r_coeff / r + self.const_coeff
    }
}

impl Add for FirstOrderOp {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.d_coeff + o.d_coeff, self.inv_r_coeff + o.inv_r_coeff, self.const_coeff + o.const_coeff)
    }
}

impl Sub for FirstOrderOp {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + o.scale(-1.0)
    }
}

/// d2·∂² + d1_over_r·(1/r)∂ + d1·∂ + inv_r2/r² + inv_r/r + const
///
/// `d1` is absent from a correct reduction; it is kept so a wrong
/// composition is visible.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SecondOrderForm {
    pub d2_coeff: f64,
    pub d1_over_r_coeff: f64,
    pub d1_coeff: f64,
    pub inv_r2_coeff: f64,
    pub inv_r_coeff: f64,
    pub const_coeff: f64,
}

impl SecondOrderForm {
    /// −∂² + γ(γ+1)/r² − 2z/r − (E² − m²): the reduced Coulomb-like operator.
    pub fn coulomb(gamma: f64, z_eff: f64, energy: f64, m: f64) -> Self {
        Self {
            d2_coeff: -1.0,
            inv_r2_coeff: gamma * (gamma + 1.0),
            inv_r_coeff: -2.0 * z_eff,
            const_coeff: -(energy * energy - m * m),
            ..Default::default()
        }
    }

    /// Largest coefficient-wise absolute difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        [
            self.d2_coeff - other.d2_coeff,
            self.d1_over_r_coeff - other.d1_over_r_coeff,
            self.d1_coeff - other.d1_coeff,
            self.inv_r2_coeff - other.inv_r2_coeff,
            self.inv_r_coeff - other.inv_r_coeff,
            self.const_coeff - other.const_coeff,
        ]
        .iter()
        .fold(0.0_f64, |acc, d| acc.max(d.abs()))
    }

    /// Apply to a function given its value and first two derivatives at `r`.
    pub fn apply(&self, r: f64, u: f64, du: f64, d2u: f64) -> f64 {
        self.d2_coeff * d2u
            + (self.d1_over_r_coeff / r + self.d1_coeff) * du
            + (self.inv_r2_coeff / (r * r) + self.inv_r_coeff / r + self.const_coeff) * u
    }
}

/// Linear differential operator Σ c·r^p·∂^d with the multiplication on the
/// left (`r^p` acts after `∂^d`).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RadialOperator {
    terms: BTreeMap<(u8, i32), f64>,
}

impl RadialOperator {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        Self::power(0, 1.0)
    }

    /// c·r^p as a multiplication operator.
    pub fn power(p: i32, c: f64) -> Self {
        let mut op = Self::zero();
        op.add_term(0, p, c);
        op
    }

    pub fn derivative() -> Self {
        let mut op = Self::zero();
        op.add_term(1, 0, 1.0);
        op
    }

    pub fn add_term(&mut self, d: u8, p: i32, c: f64) {
        if c != 0.0 {
            *self.terms.entry((d, p)).or_insert(0.0) += c;
        }
    }

    pub fn coeff(&self, d: u8, p: i32) -> f64 {
        self.terms.get(&(d, p)).copied().unwrap_or(0.0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u8, i32, f64)> + '_ {
        self.terms.iter().map(|(&(d, p), &c)| (d, p, c))
    }

    /// self ∘ other
    pub fn compose(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (&(d1, p1), &c1) in &self.terms {
            for (&(d2, p2), &c2) in &other.terms {
                // ∂^d1 ∘ r^p2 = Σ_k C(d1,k)·p2(p2−1)…(p2−k+1)·r^(p2−k)·∂^(d1−k)
                let mut binom = 1.0;
                let mut falling = 1.0;
                for k in 0..=d1 {
                    if k > 0 {
                        binom = binom * f64::from(d1 - k + 1) / f64::from(k);
                        falling *= f64::from(p2 - i32::from(k) + 1);
                    }
                    let coeff = c1 * c2 * binom * falling;
                    out.add_term(d1 - k + d2, p1 + p2 - i32::from(k), coeff);
                }
            }
        }
        out
    }

    /// r^p ∘ self ∘ r^(−p)
    pub fn conjugate_by_power(&self, p: i32) -> Self {
        Self::power(p, 1.0).compose(self).compose(&Self::power(-p, 1.0))
    }

    /// Project onto the second-order shape; returns the form and the largest
    /// coefficient of any term the shape cannot hold.
    pub fn to_second_order(&self) -> (SecondOrderForm, f64) {
        let mut form = SecondOrderForm::default();
        let mut leftover = 0.0_f64;
        for (d, p, c) in self.terms() {
            match (d, p) {
                (2, 0) => form.d2_coeff += c,
                (1, -1) => form.d1_over_r_coeff += c,
                (1, 0) => form.d1_coeff += c,
                (0, -2) => form.inv_r2_coeff += c,
                (0, -1) => form.inv_r_coeff += c,
                (0, 0) => form.const_coeff += c,
                _ => leftover = leftover.max(c.abs()),
            }
        }
        (form, leftover)
    }
}

impl Add for &RadialOperator {
    type Output = RadialOperator;
    fn add(self, o: &RadialOperator) -> RadialOperator {
        let mut out = self.clone();
        for (d, p, c) in o.terms() {
            out.add_term(d, p, c);
        }
        out
    }
}

impl Neg for &RadialOperator {
    type Output = RadialOperator;
    fn neg(self) -> RadialOperator {
        self * -1.0
    }
}

impl Sub for &RadialOperator {
    type Output = RadialOperator;
    fn sub(self, o: &RadialOperator) -> RadialOperator {
        self + &(-o)
    }
}

impl Mul<f64> for &RadialOperator {
    type Output = RadialOperator;
    fn mul(self, s: f64) -> RadialOperator {
        let mut out = RadialOperator::zero();
        for (d, p, c) in self.terms() {
            out.add_term(d, p, c * s);
        }
        out
    }
}

/// sinhθ and coshθ that collapse the ξ factors for this channel.
pub fn hyperbolics(channel: Channel, c: &Couplings, gamma: f64) -> Result<HyperbolicPair> {
    let k = channel.abs_kappa() as f64;
    let w = channel.omega_tilde() as f64;
    let den = k * k - c.a1 * c.a1;
    if den.abs() < DENOMINATOR_GUARD {
        return Err(Error::DegenerateDenominator(den.abs()));
    }
    Ok(HyperbolicPair {
        sinh_theta: (k * c.a2 - w * c.a1 * gamma) / den,
        cosh_theta: (k * gamma - w * c.a1 * c.a2) / den,
    })
}

/// [`hyperbolics`] with the sign of the A₁A₂ cross term in coshθ flipped.
/// Mutation fixture for the identity checks; never physically meaningful.
#[doc(hidden)]
pub fn hyperbolics_flipped_cross_term(channel: Channel, c: &Couplings, gamma: f64) -> Result<HyperbolicPair> {
    let mut h = hyperbolics(channel, c, gamma)?;
    let k = channel.abs_kappa() as f64;
    let w = channel.omega_tilde() as f64;
    h.cosh_theta = (k * gamma + w * c.a1 * c.a2) / (k * k - c.a1 * c.a1);
    Ok(h)
}

/// Half-angle mixer a = √((coshθ+1)/2), b = sign(sinhθ)·√((coshθ−1)/2).
pub fn mixer(h: HyperbolicPair) -> Result<MixerPair> {
    if !(h.cosh_theta >= 1.0 - 1e-12) {
        return Err(Error::InvalidCosh(h.cosh_theta));
    }
    let a = ((h.cosh_theta + 1.0) / 2.0).sqrt();
    let b = ((h.cosh_theta - 1.0).max(0.0) / 2.0).sqrt();
    Ok(MixerPair { a, b: if h.sinh_theta < 0.0 { -b } else { b } })
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct IdentityResiduals {
    /// |cosh²θ − sinh²θ − 1|
    pub hyperbolic: f64,
    /// |A₁coshθ + K sinhθ − ω̃A₂|
    pub xi_scalar: f64,
    /// |K coshθ + A₁sinhθ − ω̃γ|
    pub xi_gamma: f64,
}

impl IdentityResiduals {
    pub fn max(&self) -> f64 {
        self.hyperbolic.max(self.xi_scalar).max(self.xi_gamma)
    }
}

/// Residuals of the three identities the transformation relies on.
pub fn identity_residuals(channel: Channel, c: &Couplings) -> Result<IdentityResiduals> {
    let g = gamma(channel, c)?;
    let h = hyperbolics(channel, c, g)?;
    Ok(residuals_for_pair(channel, c, g, h))
}

/// Identity residuals for an arbitrary (sinhθ, coshθ).
pub fn residuals_for_pair(channel: Channel, c: &Couplings, gamma: f64, h: HyperbolicPair) -> IdentityResiduals {
    let k = channel.kappa() as f64;
    let w = channel.omega_tilde() as f64;
    let HyperbolicPair { sinh_theta: s, cosh_theta: ch } = h;
    IdentityResiduals {
        hyperbolic: ((ch - s) * (ch + s) - 1.0).abs(),
        xi_scalar: (c.a1 * ch + k * s - w * c.a2).abs(),
        xi_gamma: (k * ch + c.a1 * s - w * gamma).abs(),
    }
}

/// Entries of the transformed 2×2 operator matrix acting on (R, Q).
pub fn transformed_matrix(channel: Channel, c: &Couplings, h: HyperbolicPair) -> [[FirstOrderOp; 2]; 2] {
    let k = channel.kappa() as f64;
    let HyperbolicPair { sinh_theta: s, cosh_theta: ch } = h;
    let Couplings { m, a1, a2 } = *c;
    // (m − A₂/r)·x + (∂ + 1/r)·y + z/r
    let entry = |x: f64, y: f64, z: f64| FirstOrderOp::new(y, -a2 * x + y + z, m * x);
    [[entry(ch, s, -a1), entry(s, ch, -k).scale(-1.0)], [entry(s, ch, k), entry(ch, s, a1).scale(-1.0)]]
}

/// Output of the elimination: both ξ factors (as derived from the matrix)
/// and the composed second-order operator in the u = r·(component) form.
#[derive(Debug, Clone, PartialEq)]
pub struct EliminationTrace {
    pub xi1: FirstOrderOp,
    pub xi2: FirstOrderOp,
    /// The first-order operators L₁ (Q = L₁R/ξ₁) and L₂ (R = L₂Q/ξ₂).
    pub lower_op: FirstOrderOp,
    pub upper_op: FirstOrderOp,
    pub composed: SecondOrderForm,
    /// Coefficient of any term outside the SecondOrderForm shape.
    pub leftover: f64,
    /// Size of the r-dependent (and derivative) part of the ξ factor that
    /// was treated as a constant.
    pub xi_constancy: f64,
    pub expected: SecondOrderForm,
}

impl EliminationTrace {
    pub fn coefficient_residual(&self) -> f64 {
        self.composed.max_abs_diff(&self.expected).max(self.leftover).max(self.xi_constancy)
    }
}

/// The ξ factors and the L operators read off the matrix rows:
/// sinhθ·(row 1) − coshθ·(row 2) gives ξ₁Q = L₁R, and
/// coshθ·(row 1) − sinhθ·(row 2) gives ξ₂R = L₂Q.
fn split_rows(
    channel: Channel,
    c: &Couplings,
    h: HyperbolicPair,
    energy: f64,
) -> (FirstOrderOp, FirstOrderOp, FirstOrderOp, FirstOrderOp) {
    let [[m11, m12], [m21, m22]] = transformed_matrix(channel, c, h);
    let HyperbolicPair { sinh_theta: s, cosh_theta: ch } = h;
    let e = |x: f64| FirstOrderOp::new(0.0, 0.0, x);
    // s(M11 − E)R + s M12 Q − c M21 R − c(M22 − E)Q = 0
    let xi1 = m12.scale(s) - m22.scale(ch) + e(energy * ch);
    let l1 = (m11.scale(s) - m21.scale(ch) - e(energy * s)).scale(-1.0);
    // c(M11 − E)R + c M12 Q − s M21 R − s(M22 − E)Q = 0
    let xi2 = m11.scale(ch) - m21.scale(s) - e(energy * ch);
    let l2 = (m12.scale(ch) - m22.scale(s) + e(energy * s)).scale(-1.0);
    (xi1, xi2, l1, l2)
}

/// The first-order relations ξ₁·Q = L₁·R and ξ₂·R = L₂·Q at energy `E`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingOps {
    pub xi1: FirstOrderOp,
    pub xi2: FirstOrderOp,
    pub lower_op: FirstOrderOp,
    pub upper_op: FirstOrderOp,
}

pub fn coupling_operators(channel: Channel, c: &Couplings, energy: f64) -> Result<CouplingOps> {
    let g = gamma(channel, c)?;
    let h = hyperbolics(channel, c, g)?;
    let (xi1, xi2, lower_op, upper_op) = split_rows(channel, c, h, energy);
    Ok(CouplingOps { xi1, xi2, lower_op, upper_op })
}

/// Eliminate the partner component and return the reduced operator acting on
/// u = r·R (ω̃ = +1) or u = r·Q (ω̃ = −1), normalized to −∂² leading term.
pub fn eliminate_to_second_order(channel: Channel, c: &Couplings, energy: f64) -> Result<EliminationTrace> {
    eliminate_with_xi_override(channel, c, energy, None)
}

/// As [`eliminate_to_second_order`], optionally replacing the non-constant ξ
/// factor (ξ₂ for ω̃ = +1, ξ₁ for ω̃ = −1) by a supplied expression.
pub fn eliminate_with_xi_override(
    channel: Channel,
    c: &Couplings,
    energy: f64,
    xi_override: Option<FirstOrderOp>,
) -> Result<EliminationTrace> {
    let g = gamma(channel, c)?;
    let h = hyperbolics(channel, c, g)?;
    let (mut xi1, mut xi2, l1, l2) = split_rows(channel, c, h, energy);
    let (l1_op, l2_op) = (l1.to_operator(), l2.to_operator());
    let xi_constancy;

    let reduced = if channel.omega_tilde() > 0 {
        // ξ₁ is constant: ξ₂R = L₂L₁R/ξ₁  ⇒  (L₂L₁ − ξ₁ξ₂)R = 0
        if let Some(x) = xi_override {
            xi2 = x;
        }
        let constant = xi1.const_coeff;
        if constant.abs() < 1e-12 * c.m {
            return Err(Error::SingularElimination(constant));
        }
        xi_constancy = xi1.inv_r_coeff.abs().max(xi1.d_coeff.abs());
        &l2_op.compose(&l1_op) - &(&xi2.to_operator() * constant)
    } else {
        // ξ₂ is constant: ξ₁Q = L₁L₂Q/ξ₂  ⇒  (L₁L₂ − ξ₁ξ₂)Q = 0
        if let Some(x) = xi_override {
            xi1 = x;
        }
        let constant = xi2.const_coeff;
        if constant.abs() < 1e-12 * c.m {
            return Err(Error::SingularElimination(constant));
        }
        xi_constancy = xi2.inv_r_coeff.abs().max(xi2.d_coeff.abs());
        &l1_op.compose(&l2_op) - &(&xi1.to_operator() * constant)
    };

    let in_u = -&reduced.conjugate_by_power(1);
    let (composed, leftover) = in_u.to_second_order();
    Ok(EliminationTrace {
        xi1,
        xi2,
        lower_op: l1,
        upper_op: l2,
        composed,
        leftover,
        xi_constancy,
        expected: SecondOrderForm::coulomb(g, c.effective_charge(energy), energy, c.m),
    })
}

/// (R, Q) = (a·g + b·f, b·g + a·f)
pub fn transform_components(g: f64, f: f64, mix: MixerPair) -> (f64, f64) {
    (mix.a * g + mix.b * f, mix.b * g + mix.a * f)
}

/// Inverse of [`transform_components`] for a² − b² = 1.
pub fn untransform_components(r: f64, q: f64, mix: MixerPair) -> (f64, f64) {
    (mix.a * r - mix.b * q, -mix.b * r + mix.a * q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::within_ulps;
    use approx::assert_abs_diff_eq;

    fn ch(k: i32) -> Channel {
        Channel::from_kappa(k).unwrap()
    }

    fn pair(k: i32, a1: f64, a2: f64) -> HyperbolicPair {
        let c = Couplings::unit_mass(a1, a2).unwrap();
        hyperbolics(ch(k), &c, gamma(ch(k), &c).unwrap()).unwrap()
    }

    #[test]
    fn hyperbolics_examples() {
        let h = pair(-1, 0.0, 0.0);
        assert_eq!((h.sinh_theta, h.cosh_theta), (0.0, 1.0));
        let h = pair(-1, 0.0, 0.5);
        assert_abs_diff_eq!(h.sinh_theta, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(h.cosh_theta, 1.1180339887, epsilon = 1e-10);
        let h = pair(1, 0.5, 0.0);
        assert_abs_diff_eq!(h.sinh_theta, -0.5773502692, epsilon = 1e-10);
        assert_abs_diff_eq!(h.cosh_theta, 1.1547005384, epsilon = 1e-10);
    }

    #[test]
    fn degenerate_denominator() {
        let c = Couplings::unit_mass(1.0, 0.5).unwrap();
        let g = gamma(ch(1), &c).unwrap();
        assert!(matches!(hyperbolics(ch(1), &c, g), Err(Error::DegenerateDenominator(_))));
    }

    #[test]
    fn mixer_examples() {
        assert_eq!(mixer(pair(-1, 0.0, 0.0)).unwrap(), MixerPair::IDENTITY);

        let h = pair(-1, 0.0, 0.5);
        let mix = mixer(h).unwrap();
        assert_abs_diff_eq!(mix.a, 1.0290855136, epsilon = 1e-10);
        // b = √((coshθ − 1)/2)
        assert_abs_diff_eq!(mix.b, 0.2429341359, epsilon = 1e-10);
        let back = mix.hyperbolics();
        assert!(within_ulps(back.cosh_theta, h.cosh_theta, 4.0, 1.0));
        assert!(within_ulps(back.sinh_theta, h.sinh_theta, 4.0, 1.0));

        let h = pair(1, 0.5, 0.0);
        let mix = mixer(h).unwrap();
        assert_abs_diff_eq!(mix.a, 1.0379548493, epsilon = 1e-10);
        assert_abs_diff_eq!(mix.b, -0.2781191637, epsilon = 1e-10);
        assert!(within_ulps(mix.a * mix.a - mix.b * mix.b, 1.0, 4.0, 1.0));
        let back = mix.hyperbolics();
        assert!(within_ulps(back.sinh_theta, h.sinh_theta, 4.0, 1.0));
    }

    #[test]
    fn mixer_rejects_small_cosh() {
        let h = HyperbolicPair { sinh_theta: 0.1, cosh_theta: 0.5 };
        assert!(matches!(mixer(h), Err(Error::InvalidCosh(_))));
    }

    #[test]
    fn identity_residual_examples() {
        let free = Couplings::unit_mass(0.0, 0.0).unwrap();
        assert_eq!(identity_residuals(ch(-1), &free).unwrap(), IdentityResiduals::default());
        let c = Couplings::unit_mass(0.3, 0.7).unwrap();
        assert!(identity_residuals(ch(2), &c).unwrap().max() < 1e-12);
    }

    #[test]
    fn flipped_cross_term_breaks_identities() {
        let c = Couplings::unit_mass(0.3, 0.7).unwrap();
        let g = gamma(ch(2), &c).unwrap();
        let bad = hyperbolics_flipped_cross_term(ch(2), &c, g).unwrap();
        assert!(residuals_for_pair(ch(2), &c, g, bad).max() > 1e-3);
    }

    #[test]
    fn operator_composition_basics() {
        // ∂ ∘ (1/r) = (1/r)∂ − 1/r²
        let op = RadialOperator::derivative().compose(&RadialOperator::power(-1, 1.0));
        assert_eq!(op.coeff(1, -1), 1.0);
        assert_eq!(op.coeff(0, -2), -1.0);
        // ∂² ∘ r = r∂² + 2∂
        let d2 = RadialOperator::derivative().compose(&RadialOperator::derivative());
        let op = d2.compose(&RadialOperator::power(1, 1.0));
        assert_eq!(op.coeff(2, 1), 1.0);
        assert_eq!(op.coeff(1, 0), 2.0);
        // r∘(∂² + (2/r)∂)∘r⁻¹ = ∂²
        let radial = &d2
            + &{
                let mut t = RadialOperator::zero();
                t.add_term(1, -1, 2.0);
                t
            };
        let (form, leftover) = radial.conjugate_by_power(1).to_second_order();
        assert_eq!(leftover, 0.0);
        assert_eq!(form.d2_coeff, 1.0);
        assert_abs_diff_eq!(form.d1_over_r_coeff, 0.0);
        assert_abs_diff_eq!(form.inv_r2_coeff, 0.0);
    }

    #[test]
    fn elimination_examples() {
        let c = Couplings::unit_mass(0.5, 0.0).unwrap();
        let t = eliminate_to_second_order(ch(1), &c, 0.9).unwrap();
        assert_abs_diff_eq!(t.composed.inv_r2_coeff, 1.6160254038, epsilon = 1e-10);
        assert_abs_diff_eq!(t.composed.inv_r_coeff, -0.9, epsilon = 1e-12);
        assert!(t.coefficient_residual() < 1e-12);

        let c = Couplings::unit_mass(0.0, 0.5).unwrap();
        let t = eliminate_to_second_order(ch(-1), &c, 0.8).unwrap();
        assert_abs_diff_eq!(t.composed.inv_r_coeff, -1.0, epsilon = 1e-12);
        assert!(t.coefficient_residual() < 1e-12);

        let free = Couplings::unit_mass(0.0, 0.0).unwrap();
        let t = eliminate_to_second_order(ch(-1), &free, 0.5).unwrap();
        assert_abs_diff_eq!(t.composed.inv_r2_coeff, 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(t.composed.inv_r_coeff, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn elimination_matches_direct_expansion() {
        // Apply the composed form and the hand-expanded operator to a test
        // function at scattered radii.
        let c = Couplings::unit_mass(0.5, 0.0).unwrap();
        let t = eliminate_to_second_order(ch(1), &c, 0.9).unwrap();
        let g = gamma(ch(1), &c).unwrap();
        let z = c.effective_charge(0.9);
        for i in 0..20 {
            let r = 0.3 + 0.37 * i as f64;
            let (u, du, d2u) = (r.sin() + 2.0, r.cos(), -r.sin());
            let direct = -d2u + g * (g + 1.0) / (r * r) * u - 2.0 * z / r * u - (0.81 - 1.0) * u;
            assert_abs_diff_eq!(t.composed.apply(r, u, du, d2u), direct, epsilon = 1e-12);
        }
    }

    #[test]
    fn constant_xi_vanishing_is_singular() {
        // ω̃ = −1 channel: ξ₂ = m − E coshθ vanishes at the nodeless energy.
        let c = Couplings::unit_mass(0.5, 0.0).unwrap();
        let e = crate::model::nodeless_energy(ch(-1), &c).unwrap();
        assert!(matches!(eliminate_to_second_order(ch(-1), &c, e), Err(Error::SingularElimination(_))));
    }

    #[test]
    fn round_trip_components() {
        let mix = MixerPair { a: 1.0290855136, b: 0.2429452997 };
        let (r, q) = transform_components(1.0, 0.0, mix);
        assert_eq!((r, q), (mix.a, mix.b));
        assert_eq!(transform_components(0.3, -0.7, MixerPair::IDENTITY), (0.3, -0.7));
    }
}
