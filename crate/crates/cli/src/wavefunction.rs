use std::io::Write;

use dirac_coulomb::model::spectrum_with;
use dirac_coulomb::wavefunction::{build_spinor, count_nodes};
use dirac_coulomb::{Branch, NtildeConvention, RadialGrid};

use crate::args::{BranchArg, WavefunctionArgs};
use crate::error::CliError;
use crate::output::{num, Table};

const COLUMNS: &[&str] = &["r", "u_g", "u_f"];

pub fn run(args: &WavefunctionArgs, out: &mut impl Write) -> Result<(), CliError> {
    let c = args.couplings.couplings()?;
    let channels = args.channels.channels(&[-1])?;
    let [channel] = channels[..] else {
        return Err(CliError::Usage("wavefunction takes exactly one --kappa".into()));
    };
    if args.points < RadialGrid::MIN_POINTS {
        return Err(CliError::Usage(format!("--points must be at least {}", RadialGrid::MIN_POINTS)));
    }
    let convention = NtildeConvention::from(args.output.convention);
    let n = args.n.unwrap_or(channel.abs_kappa());
    let lines = spectrum_with(&c, channel, n, convention)?;
    let at_n: Vec<_> = lines.iter().filter(|l| l.level.n == n).collect();
    let wanted = match args.branch {
        Some(BranchArg::Plus) => Some(Branch::Plus),
        Some(BranchArg::Minus) => Some(Branch::Minus),
        None => None,
    };
    let line = match wanted {
        Some(b) => at_n.iter().find(|l| l.branch == b),
        None => at_n.iter().find(|l| l.branch == Branch::Plus).or(at_n.first()),
    }
    .ok_or_else(|| CliError::Failure(format!("no level n={n} on the requested branch of K={}", channel.kappa())))?;
    if !line.physical {
        return Err(CliError::Failure(format!(
            "level n={n} ({}) is not physical: {}",
            line.branch,
            line.rejection_reason.clone().unwrap_or_default()
        )));
    }

    // normalized and node-counted on a wide log grid, then sampled on the
    // requested uniform one
    let lambda = (c.m * c.m - line.energy * line.energy).sqrt();
    let reference = RadialGrid::logarithmic(1e-6 / c.m, 60.0 / lambda, 4000)?;
    let spinor = build_spinor(line, &c, &reference)?;
    let r_max = args.rmax.unwrap_or(40.0 / lambda);
    if !(r_max > 0.0 && r_max.is_finite()) {
        return Err(CliError::Usage(format!("--rmax must be positive, got {r_max}")));
    }
    let step = r_max / args.points as f64;

    let mut table = Table::new(COLUMNS);
    table.meta("K", channel.kappa().to_string());
    table.meta("n", n.to_string());
    table.meta("n_r", line.level.n_r.to_string());
    table.meta("branch", line.branch.to_string());
    table.meta("energy_over_m", num(line.energy / c.m));
    table.meta("gamma", num(line.gamma));
    table.meta("ntilde", num(line.ntilde));
    table.meta("lambda", num(lambda));
    table.meta("upper_nodes", count_nodes(&spinor.g).to_string());
    table.meta("lower_nodes", count_nodes(&spinor.f).to_string());
    for i in 1..=args.points {
        let r = step * i as f64;
        let (g, f) = spinor.model.components_at(r)?;
        table.push(vec![num(r), num(g), num(f)]);
    }
    debug_assert_eq!(table.len(), args.points);
    table.write(args.output.format, out)
}
