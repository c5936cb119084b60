use std::io::Write;

use dirac_coulomb::model::gamma;
use dirac_coulomb::verify::{verify_all, ChannelVerification, VerifyConfig};
use dirac_coulomb::{Couplings, NtildeConvention};

use crate::args::VerifyArgs;
use crate::error::CliError;
use crate::output::{num, opt_num, Table};

const GRID: [f64; 3] = [0.0, 0.2, 0.5];

const COLUMNS: &[&str] = &[
    "a1",
    "a2",
    "K",
    "n",
    "branch",
    "physical",
    "closed_energy_over_m",
    "shooting_energy_over_m",
    "shooting_deviation",
    "fd_energy_over_m",
    "fd_deviation",
    "status",
];

pub fn run(args: &VerifyArgs, out: &mut impl Write) -> Result<(), CliError> {
    if !(args.tol > 0.0) {
        return Err(CliError::Usage(format!("--tol must be positive, got {}", args.tol)));
    }
    let channels = args.channels.channels(&[-2, -1, 1, 2])?;
    let a1s = args.a1.map_or(GRID.to_vec(), |a| vec![a]);
    let a2s = args.a2.map_or(GRID.to_vec(), |a| vec![a]);
    let explicit = args.a1.is_some() && args.a2.is_some();

    let mut points = Vec::new();
    for &a1 in &a1s {
        for &a2 in &a2s {
            let c = Couplings::new(args.mass, a1, a2)?;
            for &ch in &channels {
                // grid points past the breakdown carry no bound states
                if explicit || gamma(ch, &c).is_ok() {
                    points.push((c, ch));
                }
            }
        }
    }

    let cfg = VerifyConfig {
        convention: NtildeConvention::from(args.output.convention),
        ..VerifyConfig::new(args.mass, args.nmax, args.tol)
    };
    let results = verify_all(&points, &cfg);

    let mut table = Table::new(COLUMNS);
    let mut failed = Vec::new();
    let (mut worst_shoot, mut worst_fd) = (0.0_f64, 0.0_f64);
    for ((c, ch), result) in points.iter().zip(results) {
        match result {
            Ok(v) => {
                worst_shoot = worst_shoot.max(v.shooting.max_relative_deviation);
                worst_fd = v.fd.iter().filter_map(|f| f.relative_deviation()).fold(worst_fd, f64::max);
                emit(&v, args.tol, &mut table);
                if !v.passed(args.tol) {
                    failed.push(format!("a1={} a2={} K={}", c.a1, c.a2, ch.kappa()));
                }
            }
            Err(e) => {
                eprintln!("a1={} a2={} K={}: {e}", c.a1, c.a2, ch.kappa());
                failed.push(format!("a1={} a2={} K={}", c.a1, c.a2, ch.kappa()));
            }
        }
    }
    table.write(args.output.format, out)?;
    eprintln!(
        "verify: {} channel points, max shooting deviation {}, max fd deviation {}",
        points.len(),
        num(worst_shoot),
        num(worst_fd)
    );
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Failure(format!("{} channel points failed: {}", failed.len(), failed.join("; "))))
    }
}

fn emit(v: &ChannelVerification, tol: f64, table: &mut Table) {
    let m = v.couplings.m;
    let head = || vec![num(v.couplings.a1), num(v.couplings.a2), v.channel.kappa().to_string()];
    let fd_for = |line| v.fd.iter().find(|f| &f.line == line);

    let mut rows: Vec<(f64, Vec<String>)> = Vec::new();
    for line in &v.closed {
        let pair = v.shooting.pairs.iter().find(|p| &p.line == line);
        let fd = fd_for(line);
        let fd_dev = fd.and_then(|f| f.relative_deviation());
        let status = match (pair, line.physical) {
            (Some(_), false) => "matched-unphysical",
            (None, false) => "rejected",
            (None, true) => "missing",
            (Some(p), true) if p.relative_deviation >= tol => "deviation",
            (Some(_), true) if fd.is_some_and(|_| fd_dev.is_none_or(|d| d >= tol)) => "fd-deviation",
            (Some(_), true) => "ok",
        };
        let mut row = head();
        row.extend([
            line.level.n.to_string(),
            line.branch.to_string(),
            line.physical.to_string(),
            num(line.energy / m),
            opt_num(pair.map(|p| p.oracle_energy / m)),
            opt_num(pair.map(|p| p.relative_deviation)),
            opt_num(fd.and_then(|f| f.energy.as_ref().ok()).map(|e| e / m)),
            opt_num(fd_dev),
            status.to_string(),
        ]);
        rows.push((line.energy, row));
    }
    for &e in &v.shooting.unmatched_oracle {
        let mut row = head();
        row.extend([String::new(), String::new(), String::new(), String::new(), num(e / m)]);
        row.extend([String::new(), String::new(), String::new(), "unmatched-oracle".to_string()]);
        rows.push((e, row));
    }
    rows.sort_by(|a, b| a.0.total_cmp(&b.0));
    rows.into_iter().for_each(|(_, r)| table.push(r));
}
