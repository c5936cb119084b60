//! Closed-form radial functions of the transformed problem and the spinor
//! components rebuilt from them.
//!
//! The reduced equation is the hydrogen radial equation with the orbital
//! number replaced by γ, so the primary transformed component is
//!
//! ```text
//! u(r) = N·(2λr)^(γ+1)·e^(−λr)·L_d^(2γ+1)(2λr),   λ = z/(d + γ + 1)
//! ```
//!
//! and its partner follows from one of the first-order relations
//! ξ₁Q = L₁R, ξ₂R = L₂Q. For ω̃ = +1 the primary is φ = r·R; for ω̃ = −1 it
//! is q = r·Q. Nodeless levels (ñ = γ) instead satisfy a first-order equation
//! whose solution is a pure power times an exponential.

use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::grid::{count_sign_changes, RadialGrid};
use crate::model::{gamma, nodeless_energy, Channel, Couplings, SpectrumLine};
use crate::transform::{
    coupling_operators, hyperbolics, mixer, untransform_components, FirstOrderOp, MixerPair, SecondOrderForm,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaguerreParams {
    pub n: u32,
    pub alpha: f64,
}

/// Generalized Laguerre polynomial L_n^(α)(x) by upward recurrence.
pub fn laguerre(p: LaguerreParams, x: f64) -> f64 {
    let LaguerreParams { n, alpha } = p;
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 1.0 + alpha - x;
    for k in 1..n {
        let k = k as f64;
        let next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// d/dx L_n^(α)(x) = −L_(n−1)^(α+1)(x).
pub fn laguerre_derivative(p: LaguerreParams, x: f64) -> f64 {
    if p.n == 0 {
        return 0.0;
    }
    -laguerre(LaguerreParams { n: p.n - 1, alpha: p.alpha + 1.0 }, x)
}

/// u(r) = C·r^p·e^(−λr)·L_d^(α)(2λr), normalized to ∫u²dr = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoulombOrbital {
    pub power: f64,
    pub lambda: f64,
    pub laguerre: LaguerreParams,
    ln_prefactor: f64,
}

impl CoulombOrbital {
    /// The degree-`d` solution of the reduced equation with orbital number γ.
    pub fn coulomb(d: u32, gamma: f64, lambda: f64) -> Self {
        let alpha = 2.0 * gamma + 1.0;
        let df = d as f64;
        // N²·(2d + α + 1)·Γ(d + α + 1)/(d!·2λ) = 1
        let ln_norm = 0.5
            * ((2.0 * lambda).ln() + ln_gamma(df + 1.0) - ln_gamma(df + alpha + 1.0) - (2.0 * df + alpha + 1.0).ln());
        Self {
            power: gamma + 1.0,
            lambda,
            laguerre: LaguerreParams { n: d, alpha },
            ln_prefactor: ln_norm + (gamma + 1.0) * (2.0 * lambda).ln(),
        }
    }

    /// r^s·e^(−λr), the solution of u′ = (s/r − λ)·u.
    pub fn power_law(s: f64, lambda: f64) -> Self {
        let ln_norm = 0.5 * ((2.0 * s + 1.0) * (2.0 * lambda).ln() - ln_gamma(2.0 * s + 1.0));
        Self { power: s, lambda, laguerre: LaguerreParams { n: 0, alpha: 0.0 }, ln_prefactor: ln_norm }
    }

    fn envelope(&self, r: f64) -> f64 {
        (self.ln_prefactor + self.power * r.ln() - self.lambda * r).exp()
    }

    /// v(r) = u(r)/r^p, smooth through the origin.
    pub fn regular_part(&self, r: f64) -> f64 {
        (self.ln_prefactor - self.lambda * r).exp() * laguerre(self.laguerre, 2.0 * self.lambda * r)
    }

    pub fn value(&self, r: f64) -> f64 {
        self.envelope(r) * laguerre(self.laguerre, 2.0 * self.lambda * r)
    }

    pub fn derivative(&self, r: f64) -> f64 {
        let x = 2.0 * self.lambda * r;
        let l = laguerre(self.laguerre, x);
        let dl = laguerre_derivative(self.laguerre, x);
        self.envelope(r) * ((self.power / r - self.lambda) * l + 2.0 * self.lambda * dl)
    }

    /// ln|u(r)| without forming u (usable far beyond underflow).
    pub fn ln_abs_value(&self, r: f64) -> f64 {
        let l = laguerre(self.laguerre, 2.0 * self.lambda * r);
        self.ln_prefactor + self.power * r.ln() - self.lambda * r + l.abs().ln()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Component {
    /// φ = r·R (transformed upper)
    Phi,
    /// q = r·Q (transformed lower)
    Q,
    /// r·g (original upper)
    G,
    /// r·f (original lower)
    F,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadialSolution {
    pub grid: RadialGrid,
    pub values: Vec<f64>,
    /// Analytic derivative, when the solution came from a closed form.
    pub derivatives: Option<Vec<f64>>,
    pub component: Component,
    pub n_r: u32,
    /// Exponential decay rate.
    pub lambda: f64,
}

impl RadialSolution {
    fn from_orbital(orbital: &CoulombOrbital, grid: &RadialGrid, component: Component, n_r: u32) -> Self {
        let radii = grid.points();
        Self {
            grid: *grid,
            values: radii.iter().map(|&r| orbital.value(r)).collect(),
            derivatives: Some(radii.iter().map(|&r| orbital.derivative(r)).collect()),
            component,
            n_r,
            lambda: orbital.lambda,
        }
    }

    pub fn peak(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |p, v| p.max(v.abs()))
    }
}

/// The degree-`n_r` reduced-equation solution for orbital number γ and
/// effective charge `z_eff`, as the φ component.
pub fn phi_solution(n_r: u32, gamma: f64, z_eff: f64, grid: &RadialGrid) -> Result<RadialSolution> {
    if !(gamma > 0.0) {
        return Err(Error::InvalidConfig(format!("gamma must be positive, got {gamma}")));
    }
    if !(z_eff > 0.0) {
        return Err(Error::NoBoundLevel(z_eff));
    }
    let orbital = CoulombOrbital::coulomb(n_r, gamma, z_eff / (n_r as f64 + gamma + 1.0));
    Ok(RadialSolution::from_orbital(&orbital, grid, Component::Phi, n_r))
}

/// Strict sign changes in the grid interior.
pub fn count_nodes(s: &RadialSolution) -> usize {
    count_sign_changes(&s.values)
}

/// Partner relation for one component: (L, ξ) with ξ·partner = L·primary.
#[derive(Debug, Clone, Copy, PartialEq)]
struct PartnerRelation {
    op: FirstOrderOp,
    xi: FirstOrderOp,
}

impl PartnerRelation {
    fn for_component(channel: Channel, c: &Couplings, energy: f64, from: Component) -> Result<(Self, Component)> {
        let ops = coupling_operators(channel, c, energy)?;
        match from {
            Component::Phi => Ok((Self { op: ops.lower_op, xi: ops.xi1 }, Component::Q)),
            Component::Q => Ok((Self { op: ops.upper_op, xi: ops.xi2 }, Component::Phi)),
            _ => Err(Error::InvalidConfig("partner is defined for the transformed components only".into())),
        }
    }

    /// L acting on R = u/r, times r: d·u′ + (p − d)/r·u + c·u.
    fn numerator(&self, r: f64, u: f64, du: f64) -> f64 {
        let FirstOrderOp { d_coeff: d, inv_r_coeff: p, const_coeff: k } = self.op;
        d * du + ((p - d) / r + k) * u
    }

    fn check_constant_xi(&self, scale: f64) -> Result<()> {
        if self.xi.inv_r_coeff == 0.0 && self.xi.const_coeff.abs() < 1e-12 * scale {
            return Err(Error::SingularXi(self.xi.const_coeff));
        }
        Ok(())
    }

    /// Partner value; `tiny` is the numerator size treated as exactly zero
    /// where ξ(r) itself vanishes.
    fn partner(&self, r: f64, u: f64, du: f64, tiny: f64) -> Result<f64> {
        let num = self.numerator(r, u, du);
        let xi = self.xi.multiplier_at(r);
        let xi_scale = self.xi.const_coeff.abs() + (self.xi.inv_r_coeff / r).abs();
        if xi.abs() <= 1e-12 * xi_scale {
            return if num.abs() <= tiny { Ok(0.0) } else { Err(Error::SingularXi(xi)) };
        }
        Ok(num / xi)
    }
}

/// The other transformed component from the first-order relation of the
/// channel, using the analytic derivative of `u`.
pub fn partner_component(u: &RadialSolution, channel: Channel, c: &Couplings, energy: f64) -> Result<RadialSolution> {
    let (rel, target) = PartnerRelation::for_component(channel, c, energy, u.component)?;
    rel.check_constant_xi(c.m)?;
    let du = u
        .derivatives
        .as_ref()
        .ok_or_else(|| Error::InvalidConfig("partner needs the analytic derivative of the primary".into()))?;
    let tiny = 1e-12 * u.peak() * c.m;
    let values = u
        .grid
        .points()
        .iter()
        .zip(u.values.iter().zip(du))
        .map(|(&r, (&v, &d))| rel.partner(r, v, d, tiny))
        .collect::<Result<Vec<_>>>()?;
    Ok(RadialSolution { grid: u.grid, values, derivatives: None, component: target, n_r: u.n_r, lambda: u.lambda })
}

/// The nodeless level of `channel` from its first-order equation, as φ for
/// K < 0 and as q for K > 0.
pub fn nodeless_solution(channel: Channel, c: &Couplings, grid: &RadialGrid) -> Result<RadialSolution> {
    let (orbital, component, _) = nodeless_orbital(channel, c)?;
    Ok(RadialSolution::from_orbital(&orbital, grid, component, 0))
}

fn nodeless_orbital(channel: Channel, c: &Couplings) -> Result<(CoulombOrbital, Component, f64)> {
    let energy = nodeless_energy(channel, c)?;
    let ops = coupling_operators(channel, c, energy)?;
    let (op, component) =
        if channel.kappa() < 0 { (ops.lower_op, Component::Phi) } else { (ops.upper_op, Component::Q) };
    // d·u′ + (p − d)/r·u + k·u = 0  ⇒  u = r^s·e^(−λr)
    let s = -(op.inv_r_coeff - op.d_coeff) / op.d_coeff;
    let lambda = op.const_coeff / op.d_coeff;
    if !(lambda > 0.0 && s > -0.5) {
        return Err(Error::Unphysical(format!(
            "nodeless level of {channel} is not normalizable (power {s}, decay {lambda})"
        )));
    }
    Ok((CoulombOrbital::power_law(s, lambda), component, energy))
}

/// Pointwise closed-form spinor: the primary orbital, its partner relation and
/// the mixer, with a common scale fixing ∫(u_g² + u_f²)dr = 1 on the grid
/// the spinor was built on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinorModel {
    pub energy: f64,
    pub orbital: CoulombOrbital,
    pub primary: Component,
    pub mixer: MixerPair,
    relation: PartnerRelation,
    scale: f64,
}

impl SpinorModel {
    /// (φ, q) at `r`.
    pub fn transformed_at(&self, r: f64) -> Result<(f64, f64)> {
        let u = self.orbital.value(r);
        let du = self.orbital.derivative(r);
        let tiny = 1e-12 * u.abs().max(du.abs() * r).max(f64::MIN_POSITIVE);
        let partner = self.relation.partner(r, u, du, tiny)?;
        let (phi, q) = match self.primary {
            Component::Phi => (u, partner),
            _ => (partner, u),
        };
        Ok((self.scale * phi, self.scale * q))
    }

    /// (u_g, u_f) = (r·g, r·f) at `r`.
    pub fn components_at(&self, r: f64) -> Result<(f64, f64)> {
        let (phi, q) = self.transformed_at(r)?;
        Ok(untransform_components(phi, q, self.mixer))
    }
}

/// Original and transformed components of one level on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Spinor {
    pub g: RadialSolution,
    pub f: RadialSolution,
    pub phi: RadialSolution,
    pub q: RadialSolution,
    pub model: SpinorModel,
}

/// Build (u_g, u_f) for a physical level by undoing the transformation on the
/// closed-form (φ, q), normalized jointly on `grid`.
pub fn build_spinor(level: &SpectrumLine, c: &Couplings, grid: &RadialGrid) -> Result<Spinor> {
    if !level.physical {
        return Err(Error::Unphysical(
            level.rejection_reason.clone().unwrap_or_else(|| "level is not physical".into()),
        ));
    }
    let channel = level.channel;
    let energy = level.energy;
    let (orbital, primary, n_r) = if level.nodeless {
        let (orbital, component, _) = nodeless_orbital(channel, c)?;
        (orbital, component, 0)
    } else {
        let d = level
            .laguerre_degree()
            .ok_or_else(|| Error::InvalidLevel(format!("no Laguerre degree for ñ = {}", level.ntilde)))?;
        let z = c.effective_charge(energy);
        let orbital = CoulombOrbital::coulomb(d, level.gamma, z / (d as f64 + level.gamma + 1.0));
        let primary = if channel.omega_tilde() > 0 { Component::Phi } else { Component::Q };
        (orbital, primary, d)
    };
    let (relation, _) = PartnerRelation::for_component(channel, c, energy, primary)?;
    if !level.nodeless {
        relation.check_constant_xi(c.m)?;
    }
    let g_val = gamma(channel, c)?;
    let mix = mixer(hyperbolics(channel, c, g_val)?)?;
    let mut model = SpinorModel { energy, orbital, primary, mixer: mix, relation, scale: 1.0 };

    let radii = grid.points();
    let pairs = radii.iter().map(|&r| model.transformed_at(r)).collect::<Result<Vec<_>>>()?;
    let spinor: Vec<(f64, f64)> = pairs.iter().map(|&(p, q)| untransform_components(p, q, mix)).collect();
    let density: Vec<f64> = spinor.iter().map(|(a, b)| a * a + b * b).collect();
    let scale = 1.0 / grid.integrate(&density).sqrt();
    model.scale = scale;

    let solution = |values: Vec<f64>, component| RadialSolution {
        grid: *grid,
        values,
        derivatives: None,
        component,
        n_r,
        lambda: orbital.lambda,
    };
    Ok(Spinor {
        g: solution(spinor.iter().map(|s| scale * s.0).collect(), Component::G),
        f: solution(spinor.iter().map(|s| scale * s.1).collect(), Component::F),
        phi: solution(pairs.iter().map(|p| scale * p.0).collect(), Component::Phi),
        q: solution(pairs.iter().map(|p| scale * p.1).collect(), Component::Q),
        model,
    })
}

/// Five-point first derivative of `f` at `r` with step `h`.
pub fn first_derivative<F: Fn(f64) -> f64>(f: F, r: f64, h: f64) -> f64 {
    (f(r - 2.0 * h) - 8.0 * f(r - h) + 8.0 * f(r + h) - f(r + 2.0 * h)) / (12.0 * h)
}

/// Five-point second derivative of `f` at `r` with step `h`.
pub fn second_derivative<F: Fn(f64) -> f64>(f: F, r: f64, h: f64) -> f64 {
    (-f(r + 2.0 * h) + 16.0 * f(r + h) - 30.0 * f(r) + 16.0 * f(r - h) - f(r - 2.0 * h)) / (12.0 * h * h)
}

/// Largest |form·u| over the interior of `grid` relative to the peak of |u|.
///
/// u = r^p·v is differentiated as a product: the power exactly, v by
/// five-point stencils. Differencing u itself near the origin leaves ε/h²
/// rounding on terms of size u/r², which swamps the residual when p is small.
pub fn max_operator_residual(orbital: &CoulombOrbital, form: &SecondOrderForm, grid: &RadialGrid) -> f64 {
    let radii = grid.points();
    let n = radii.len();
    let p = orbital.power;
    let v = |x: f64| orbital.regular_part(x);
    // v is entire and varies on the scale of its Laguerre oscillations; this
    // step balances h⁴ truncation against ε/h² rounding there
    let h = 1e-2 / (orbital.lambda * (1.0 + orbital.laguerre.n as f64));
    let peak = radii.iter().fold(0.0_f64, |m, &r| m.max(orbital.value(r).abs()));
    radii[2..n - 2]
        .iter()
        .map(|&r| {
            let (v0, v1, v2) = (v(r), first_derivative(v, r, h), second_derivative(v, r, h));
            let rp = r.powf(p);
            let u = rp * v0;
            let du = rp * (v1 + p / r * v0);
            let d2u = rp * (v2 + 2.0 * p / r * v1 + p * (p - 1.0) / (r * r) * v0);
            form.apply(r, u, du, d2u).abs()
        })
        .fold(0.0, f64::max)
        / peak
}
