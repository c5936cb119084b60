use std::io::Write;

use dirac_coulomb::model::gamma;
use dirac_coulomb::transform::{
    eliminate_to_second_order, hyperbolics, hyperbolics_flipped_cross_term, residuals_for_pair, IdentityResiduals,
};
use dirac_coulomb::{Channel, Couplings, Error, Execution};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::args::{IdentitiesArgs, Mutation};
use crate::error::CliError;
use crate::output::{num, Table};

/// Points with |K² − A₁²| at or below this are outside the admissible region
/// of the transformation and are skipped, not checked.
const DEGENERACY_GUARD: f64 = 0.01;

const COLUMNS: &[&str] = &["class", "checked", "skipped_degenerate", "max_residual", "status"];

#[derive(Debug, Clone, Copy)]
struct Point {
    channel: Channel,
    couplings: Couplings,
    energy: f64,
}

impl Point {
    fn describe(&self) -> String {
        let c = self.couplings;
        format!("K={},a1={},a2={},E={}", self.channel.kappa(), c.a1, c.a2, self.energy)
    }
}

enum Outcome {
    Degenerate(f64),
    Checked { identities: IdentityResiduals, reduction: Option<f64> },
}

fn parse_point(spec: &str, m: f64) -> Result<Point, CliError> {
    let (mut k, mut a1, mut a2, mut e) = (None, 0.0, 0.0, 0.5 * m);
    for part in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("--force-point: expected key=value, got {part}")))?;
        let bad = || CliError::Usage(format!("--force-point: bad value for {key}: {value}"));
        match key {
            "K" | "k" | "kappa" => k = Some(value.parse::<i32>().map_err(|_| bad())?),
            "a1" => a1 = value.parse().map_err(|_| bad())?,
            "a2" => a2 = value.parse().map_err(|_| bad())?,
            "E" | "e" => e = value.parse::<f64>().map_err(|_| bad())? * m,
            _ => return Err(CliError::Usage(format!("--force-point: unknown key {key}"))),
        }
    }
    let k = k.ok_or_else(|| CliError::Usage("--force-point needs K".into()))?;
    Ok(Point { channel: Channel::from_kappa(k)?, couplings: Couplings::new(m, a1, a2)?, energy: e })
}

/// Admissible random point: |K| ≤ 4, A₁, A₂ < 0.9|K|, γ² > 0.01, |E| < 0.99m.
fn random_point(rng: &mut ChaCha8Rng, m: f64) -> Point {
    loop {
        let k: i32 = rng.gen_range(1..=4) * if rng.gen_bool(0.5) { 1 } else { -1 };
        let kk = k.abs() as f64;
        let a1 = rng.gen_range(0.0..0.9 * kk);
        let a2 = rng.gen_range(0.0..0.9 * kk);
        let energy = m * rng.gen_range(-0.99..0.99);
        if kk * kk - a1 * a1 + a2 * a2 > 0.01 {
            let couplings = Couplings::new(m, a1, a2).expect("sampled couplings are valid");
            return Point { channel: Channel::from_kappa(k).expect("sampled K is nonzero"), couplings, energy };
        }
    }
}

fn check(p: &Point, mutation: Option<Mutation>) -> Result<Outcome, Error> {
    let (ch, c) = (p.channel, &p.couplings);
    let k = ch.abs_kappa() as f64;
    let den = (k * k - c.a1 * c.a1).abs();
    if den <= DEGENERACY_GUARD {
        return Ok(Outcome::Degenerate(den));
    }
    let g = gamma(ch, c)?;
    let h = match mutation {
        Some(Mutation::FlipCoshCrossTerm) => hyperbolics_flipped_cross_term(ch, c, g)?,
        None => hyperbolics(ch, c, g)?,
    };
    let identities = residuals_for_pair(ch, c, g, h);
    let reduction = match eliminate_to_second_order(ch, c, p.energy) {
        Ok(trace) => Some(trace.coefficient_residual() / c.m.max(1.0).powi(2)),
        // the constant ξ vanishes at this energy: a first-order level, nothing to reduce
        Err(Error::SingularElimination(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(Outcome::Checked { identities, reduction })
}

pub fn run(args: &IdentitiesArgs, out: &mut impl Write) -> Result<(), CliError> {
    if !(args.tol > 0.0) {
        return Err(CliError::Usage(format!("--tol must be positive, got {}", args.tol)));
    }
    let mut points = args.force_point.iter().map(|s| parse_point(s, args.mass)).collect::<Result<Vec<_>, _>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    points.extend((0..args.samples).map(|_| random_point(&mut rng, args.mass)));
    let outcomes = Execution::default().map(&points, |p| check(p, args.mutate));

    // hyperbolic, xi_scalar, xi_gamma, reduction
    let mut worst = [0.0_f64; 4];
    let mut worst_at: [Option<usize>; 4] = [None; 4];
    let mut checked = [0usize; 4];
    let mut skipped = 0usize;
    for (i, outcome) in outcomes.into_iter().enumerate() {
        let values = match outcome {
            Ok(Outcome::Degenerate(den)) => {
                eprintln!("skipped-degenerate: {} (|K^2 - a1^2| = {den})", points[i].describe());
                skipped += 1;
                continue;
            }
            Ok(Outcome::Checked { identities: r, reduction }) => {
                [Some(r.hyperbolic), Some(r.xi_scalar), Some(r.xi_gamma), reduction]
            }
            Err(e) => return Err(CliError::Failure(format!("{}: {e}", points[i].describe()))),
        };
        for (slot, v) in values.into_iter().enumerate() {
            let Some(v) = v else { continue };
            checked[slot] += 1;
            if !(v <= worst[slot]) {
                worst[slot] = v;
                worst_at[slot] = Some(i);
            }
        }
    }

    let mut table = Table::new(COLUMNS);
    table.meta("seed", args.seed.to_string());
    table.meta("samples", args.samples.to_string());
    table.meta("tolerance", num(args.tol));
    let mut violations = Vec::new();
    for (slot, class) in ["hyperbolic", "xi_scalar", "xi_gamma", "reduction"].into_iter().enumerate() {
        let ok = worst[slot] < args.tol;
        if !ok {
            let at = worst_at[slot].map(|i| points[i].describe()).unwrap_or_default();
            violations.push(format!("{class} residual {} at {at}", num(worst[slot])));
        }
        table.push(vec![
            class.to_string(),
            checked[slot].to_string(),
            skipped.to_string(),
            num(worst[slot]),
            if ok { "ok" } else { "violated" }.to_string(),
        ]);
    }
    table.write(args.format, out)?;
    if violations.is_empty() {
        Ok(())
    } else {
        Err(CliError::Failure(violations.join("; ")))
    }
}
