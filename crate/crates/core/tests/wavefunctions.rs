use dirac_coulomb::model::{gamma, spectrum};
use dirac_coulomb::shoot::{dirac_shoot, ShootingConfig};
use dirac_coulomb::transform::{transform_components, SecondOrderForm};
use dirac_coulomb::verify::shooting_window;
use dirac_coulomb::wavefunction::{
    build_spinor, count_nodes, max_operator_residual, partner_component, phi_solution, Component, CoulombOrbital,
    Spinor,
};
use dirac_coulomb::{within_ulps, Branch, Channel, Couplings, NtildeConvention, RadialGrid, SpectrumLine};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn ch(k: i32) -> Channel {
    Channel::from_kappa(k).unwrap()
}

/// Grid out to ~60 decay lengths of the most extended state considered.
fn grid_for(lambda: f64, points: usize) -> RadialGrid {
    RadialGrid::logarithmic(1e-6, 60.0 / lambda, points).unwrap()
}

fn physical_lines(c: &Couplings, k: i32, n_max: u32) -> Vec<SpectrumLine> {
    spectrum(c, ch(k), n_max).unwrap().into_iter().filter(|l| l.physical).collect()
}

#[test]
fn node_law_for_random_orbitals() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..60 {
        let g = rng.gen_range(0.1..4.0);
        let z = rng.gen_range(0.05..2.0);
        for n_r in 0..=10u32 {
            let lambda = z / (n_r as f64 + g + 1.0);
            let u = phi_solution(n_r, g, z, &grid_for(lambda, 4000)).unwrap();
            assert_eq!(count_nodes(&u), n_r as usize, "γ={g} z={z}");
        }
    }
}

#[test]
fn gamma_norm_matches_quadrature() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..40 {
        let g = rng.gen_range(0.1..3.0);
        let z = rng.gen_range(0.1..1.0);
        let n_r = rng.gen_range(0..=6u32);
        let lambda = z / (n_r as f64 + g + 1.0);
        let u = phi_solution(n_r, g, z, &grid_for(lambda, 8000)).unwrap();
        let sq: Vec<f64> = u.values.iter().map(|v| v * v).collect();
        assert!((u.grid.integrate(&sq) - 1.0).abs() < 1e-8);
    }
}

#[test]
fn orbitals_solve_the_reduced_equation() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..40 {
        let g = rng.gen_range(0.2..3.0);
        let z = rng.gen_range(0.1..1.0);
        let n_r = rng.gen_range(0..=5u32);
        let lambda = z / (n_r as f64 + g + 1.0);
        let orbital = CoulombOrbital::coulomb(n_r, g, lambda);
        // unit mass with E² − m² = −λ²
        let energy = (1.0 - lambda * lambda).sqrt();
        let form = SecondOrderForm::coulomb(g, z, energy, 1.0);
        let grid = RadialGrid::logarithmic(1e-3, 40.0 / lambda, 400).unwrap();
        let res = max_operator_residual(&orbital, &form, &grid);
        assert!(res < 1e-8, "γ={g} z={z} n_r={n_r}: {res}");
    }
}

/// Shooting states of a channel next to the closed-form spinors built on the
/// same grids, with the overall sign aligned.
fn paired_with_oracle(c: &Couplings, k: i32, n_max: u32) -> Vec<(Spinor, dirac_coulomb::shoot::BoundState)> {
    let (lo, hi) = shooting_window(c, ch(k), n_max, NtildeConvention::Standard).unwrap();
    let states = dirac_shoot(c, ch(k), &ShootingConfig::for_mass(c.m).with_window(lo, hi)).unwrap();
    physical_lines(c, k, n_max)
        .iter()
        .filter(|l| l.energy > lo && l.energy < hi)
        .map(|line| {
            let state = states
                .iter()
                .find(|s| (s.energy - line.energy).abs() < 1e-6)
                .unwrap_or_else(|| panic!("no oracle state near {}", line.energy))
                .clone();
            (build_spinor(line, c, &state.grid).unwrap(), state)
        })
        .collect()
}

fn l2_distance(s: &Spinor, state: &dirac_coulomb::shoot::BoundState) -> f64 {
    let diff = |sign: f64| {
        let d: Vec<f64> = (0..state.grid.n_points)
            .map(|i| {
                let dg = sign * s.g.values[i] - state.g_values[i];
                let df = sign * s.f.values[i] - state.f_values[i];
                dg * dg + df * df
            })
            .collect();
        state.grid.integrate(&d).sqrt()
    };
    diff(1.0).min(diff(-1.0))
}

#[test]
fn spinors_match_the_shooting_oracle() {
    for (a1, a2) in [(0.5, 0.0), (0.5, 0.2), (0.2, 0.5), (0.0, 0.5)] {
        let c = Couplings::unit_mass(a1, a2).unwrap();
        for k in [-2, -1, 1, 2] {
            for (spinor, state) in paired_with_oracle(&c, k, 4) {
                let d = l2_distance(&spinor, &state);
                assert!(d < 1e-5, "a1={a1} a2={a2} K={k} E={}: L2 {d}", state.energy);
                assert_eq!(count_nodes(&spinor.g), state.upper_nodes, "E={}", state.energy);
                assert_eq!(count_nodes(&spinor.f), state.lower_nodes, "E={}", state.energy);
            }
        }
    }
}

#[test]
fn spinors_solve_the_original_system() {
    for (a1, a2) in [(0.5, 0.2), (0.2, 0.5), (0.3, 0.3)] {
        let c = Couplings::unit_mass(a1, a2).unwrap();
        for k in [-2, -1, 1, 2] {
            for line in physical_lines(&c, k, 4) {
                let lambda = (1.0 - line.energy * line.energy).sqrt();
                let spinor = build_spinor(&line, &c, &grid_for(lambda, 2000)).unwrap();
                let model = spinor.model;
                let at = |r: f64| model.components_at(r).unwrap();
                let kk = k as f64;
                let e = line.energy;
                let peak = spinor.g.peak().max(spinor.f.peak());
                let mut worst = 0.0_f64;
                for r in spinor.g.grid.points().into_iter().step_by(10).filter(|&r| r > 1e-3) {
                    let h = 1e-3 * r.min(1.0 / lambda);
                    let d1 = |i: usize| {
                        let v = |x: f64| if i == 0 { at(x).0 } else { at(x).1 };
                        (v(r - 2.0 * h) - 8.0 * v(r - h) + 8.0 * v(r + h) - v(r + 2.0 * h)) / (12.0 * h)
                    };
                    let (u, w) = at(r);
                    let ru = d1(0) + kk / r * u - (e + 1.0 + (a1 - a2) / r) * w;
                    let rw = d1(1) - kk / r * w + (e - 1.0 + (a1 + a2) / r) * u;
                    worst = worst.max(ru.abs().max(rw.abs()) / peak);
                }
                assert!(worst < 1e-6, "a1={a1} a2={a2} K={k} E={e}: {worst}");
            }
        }
    }
}

#[test]
fn spinor_round_trip_is_exact_to_ulps() {
    let c = Couplings::unit_mass(0.5, 0.2).unwrap();
    for k in [-2, -1, 1, 2] {
        for line in physical_lines(&c, k, 4) {
            let lambda = (1.0 - line.energy * line.energy).sqrt();
            let s = build_spinor(&line, &c, &grid_for(lambda, 1000)).unwrap();
            let mix = s.model.mixer;
            let cosh = mix.a * mix.a + mix.b * mix.b;
            for i in 0..s.g.values.len() {
                let (phi, q) = transform_components(s.g.values[i], s.f.values[i], mix);
                let scale = cosh * s.g.values[i].abs().max(s.f.values[i].abs());
                assert!(within_ulps(phi, s.phi.values[i], 4.0, scale));
                assert!(within_ulps(q, s.q.values[i], 4.0, scale));
            }
        }
    }
}

#[test]
fn spinors_are_jointly_normalized() {
    let c = Couplings::unit_mass(0.2, 0.5).unwrap();
    for k in [-1, 1] {
        for line in physical_lines(&c, k, 3) {
            let lambda = (1.0 - line.energy * line.energy).sqrt();
            let s = build_spinor(&line, &c, &grid_for(lambda, 4000)).unwrap();
            let density: Vec<f64> = s.g.values.iter().zip(&s.f.values).map(|(g, f)| g * g + f * f).collect();
            assert!((s.g.grid.integrate(&density) - 1.0).abs() < 1e-8);
        }
    }
}

#[test]
fn decay_rate_over_the_last_decade() {
    let c = Couplings::unit_mass(0.5, 0.2).unwrap();
    for line in physical_lines(&c, -1, 4) {
        let lambda = (1.0 - line.energy * line.energy).sqrt();
        let s = build_spinor(&line, &c, &grid_for(lambda, 200)).unwrap();
        let orbital = s.model.orbital;
        assert!((orbital.lambda - lambda).abs() < 1e-12 * lambda.max(1.0));
        // far tail in log form, beyond where the values underflow
        let r_max = 1e4 / lambda;
        let slope = (orbital.ln_abs_value(r_max) - orbital.ln_abs_value(0.1 * r_max)) / (0.9 * r_max);
        assert!((slope + lambda).abs() < 0.01 * lambda, "slope {slope} vs −{lambda}");
    }
}

#[test]
fn nodeless_partner_vanishes_and_excited_partner_nodes() {
    let c = Couplings::unit_mass(0.5, 0.0).unwrap();
    let g = gamma(ch(-1), &c).unwrap();
    let grid = grid_for(0.5, 4000);
    let lines = physical_lines(&c, -1, 3);

    let ground = &lines[0];
    assert!(ground.nodeless);
    let s = build_spinor(ground, &c, &grid).unwrap();
    assert!(s.q.peak() < 1e-10 * s.phi.peak());

    // first excited level: for K < 0 the Laguerre orbital is q (degree 0)
    // and φ is its partner
    let excited = &lines[1];
    assert_eq!(excited.branch, Branch::Plus);
    let s = build_spinor(excited, &c, &grid).unwrap();
    assert_eq!((count_nodes(&s.q), count_nodes(&s.phi)), (0, 1));
    let z = c.effective_charge(excited.energy);
    let mut u = phi_solution(0, g, z, &grid).unwrap();
    u.component = Component::Q;
    let phi = partner_component(&u, ch(-1), &c, excited.energy).unwrap();
    assert_eq!(count_nodes(&u), 0);
    assert_eq!(count_nodes(&phi), 1);
}
