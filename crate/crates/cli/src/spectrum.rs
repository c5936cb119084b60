use std::io::Write;

use dirac_coulomb::model::spectrum_with;
use dirac_coulomb::{Error, NtildeConvention, SpectrumLine};

use crate::args::SpectrumArgs;
use crate::error::CliError;
use crate::output::{num, Table};

pub const COLUMNS: &[&str] = &[
    "j",
    "omega_tilde",
    "K",
    "n",
    "n_r",
    "gamma",
    "ntilde",
    "branch",
    "energy_over_m",
    "physical",
    "rejection_reason",
];

pub fn row(line: &SpectrumLine, m: f64) -> Vec<String> {
    let ch = line.channel;
    vec![
        format!("{}/2", 2 * ch.abs_kappa() - 1),
        ch.omega_tilde().to_string(),
        ch.kappa().to_string(),
        line.level.n.to_string(),
        line.level.n_r.to_string(),
        num(line.gamma),
        num(line.ntilde),
        line.branch.to_string(),
        num(line.energy / m),
        line.physical.to_string(),
        line.rejection_reason.clone().unwrap_or_default(),
    ]
}

pub fn run(args: &SpectrumArgs, out: &mut impl Write) -> Result<(), CliError> {
    let c = args.couplings.couplings()?;
    let channels = args.channels.channels(&[-1])?;
    let convention = NtildeConvention::from(args.output.convention);
    let mut table = Table::new(COLUMNS);
    let mut failures = Vec::new();
    for &ch in &channels {
        match spectrum_with(&c, ch, args.nmax, convention) {
            Ok(lines) => lines.iter().for_each(|l| table.push(row(l, c.m))),
            // nothing at or below --nmax in this channel
            Err(Error::InvalidLevel(msg)) => eprintln!("note: K={}: {msg}", ch.kappa()),
            Err(e) => {
                eprintln!("K={}: {e}", ch.kappa());
                failures.push(e);
            }
        }
    }
    table.write(args.output.format, out)?;
    if failures.len() == channels.len() {
        return Err(CliError::Failure(format!("no requested channel has a real gamma: {}", failures[0])));
    }
    Ok(())
}
