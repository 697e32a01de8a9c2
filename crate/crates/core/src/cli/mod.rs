//! The `xxchain` command line.
//!
//! ```text
//! xxchain pst check --chain chain.json --tau 3.14159
//! xxchain pst synthesize --spectrum spectrum.json
//! xxchain transport current --chain chain.json --T0 2 --TN 1 --shift auto
//! xxchain transport scan --family krawtchouk --p 0.5 --T 100 --dT 0.5 --N 20:200:20
//! xxchain ent entropy --family krawtchouk --N 64 --p 0.5 --K half --ell 31 --route heun
//! xxchain ent scan --ratio-l 0.5 --ratio-k 0.5 --N 16:256:16
//! xxchain ent fit-affine --family krawtchouk --N 60 --ell 29
//! xxchain neg pair --chain chain.json --K auto --m 100 --n 140
//! xxchain neg adjacent --family krawtchouk --N 512 --ell1 16 --ell2 16 --center bulk
//! xxchain neg sweep --family krawtchouk --N 4000 --mode skeletal --d 5:41:2 --leftmost 0
//! ```
//!
//! Exit status is 0 on success, 1 when a computation fails and 2 for usage
//! errors.

pub mod args;
pub mod emit;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::Parser;
use rayon::prelude::*;

use crate::chain::{build_chain, diagonalize, Chain, ChainSpec, SpectralData};
use crate::entanglement::{
    auto_filling, correlation_matrix, fit_affine_approximation, heun_operator, interval,
    interval_entropy, EntropyRoute,
};
use crate::error::Error;
use crate::negativity::{
    adjacent_intervals, correlation_asymptotic, filling_fraction, logarithmic_negativity,
    skeletal_negativity, skeletal_sweep, AsymptoticKind, NegativitySetup, PairPlacement,
};
use crate::pst::{pst_verdict, synthesize_with, PstTolerances, SynthesisMethod};
use crate::record;
use crate::transport::{
    conductivity_from_spectrum, fit_power_law, heat_current_general, heat_current_mirror,
    positive_shift, BathConfig, AUTO_SHIFT_MIN_ENERGY,
};
use args::*;
use emit::{emit, Record};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Compute(#[from] Error),
    #[error("i/o failure: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Compute(_) | CliError::Io(_) => 1,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parses `argv`, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if let CliError::Usage(_) = e {
                eprintln!("\nFor more information, try '--help'.");
            }
            e.exit_code()
        }
    }
}

pub fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Pst(cmd) => pst(cmd),
        Command::Transport(cmd) => transport(cmd),
        Command::Ent(cmd) => ent(cmd),
        Command::Neg(cmd) => neg(cmd),
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("cannot parse {}: {e}", path.display())))
}

fn resolve_spec(src: &ChainSource) -> CliResult<ChainSpec> {
    if let Some(path) = &src.chain {
        return read_json(path);
    }
    if let Some(text) = &src.chain_json {
        return serde_json::from_str(text)
            .map_err(|e| CliError::Usage(format!("cannot parse --chain-json: {e}")));
    }
    let kind = src.family.ok_or_else(|| {
        CliError::Usage("no chain given: use --chain, --chain-json or --family".into())
    })?;
    let n = src
        .n
        .ok_or_else(|| CliError::Usage("--family needs --N".into()))?;
    let fam = Family {
        family: kind,
        p: src.p.unwrap_or(0.5),
        coupling: src.coupling.unwrap_or(1.0),
        field: src.field.unwrap_or(0.0),
    };
    Ok(family_spec(&fam, n))
}

fn family_spec(fam: &Family, n: usize) -> ChainSpec {
    match fam.family {
        FamilyKind::Krawtchouk => ChainSpec::Krawtchouk { n, p: fam.p },
        FamilyKind::Homogeneous => ChainSpec::Homogeneous {
            n,
            coupling: fam.coupling,
            field: fam.field,
        },
    }
}

fn load(src: &ChainSource) -> CliResult<(ChainSpec, Chain)> {
    let spec = resolve_spec(src)?;
    let chain = build_chain(&spec)?;
    Ok((spec, chain))
}

fn resolve_filling(k: Filling, sd: &SpectralData) -> CliResult<usize> {
    let max = sd.len() - 1;
    match k {
        Filling::Auto => Ok(auto_filling(sd)?),
        Filling::Half => Ok(sd.len().div_ceil(2) - 1),
        Filling::Index(i) if i <= max => Ok(i),
        Filling::Index(i) => Err(Error::IndexOutOfRange { index: i, max }.into()),
    }
}

fn writer(path: &Option<PathBuf>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn output(out: &Output, default: Format, columns: &[&str], records: &[Record]) -> CliResult<()> {
    let mut w = writer(&out.output)?;
    emit(columns, records, out.format.unwrap_or(default), &mut w)?;
    w.flush()?;
    Ok(())
}

/// Single-result commands print one JSON object unless CSV is requested.
fn output_one(out: &Output, columns: &[&str], rec: Record) -> CliResult<()> {
    if out.format == Some(Format::Csv) {
        return output(out, Format::Csv, columns, &[rec]);
    }
    let mut w = writer(&out.output)?;
    serde_json::to_writer_pretty(&mut w, &rec).map_err(io::Error::from)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn pst(cmd: PstCommand) -> CliResult<()> {
    match cmd {
        PstCommand::Check { chain, tau, out } => {
            let (_, chain) = load(&chain)?;
            let tau = tau.unwrap_or(std::f64::consts::PI);
            let v = pst_verdict(&chain, tau, &PstTolerances::default())?;
            let rec = record! {
                "tau" => v.tau,
                "mirror_residual" => v.mirror_residual,
                "gap_condition" => v.gap_condition,
                "multiples" => v.multiples,
                "fidelity" => v.fidelity_at_tau,
                "phase" => v.phase,
                "verdict" => v.verdict,
            };
            output_one(
                &out,
                &[
                    "tau",
                    "mirror_residual",
                    "gap_condition",
                    "multiples",
                    "fidelity",
                    "phase",
                    "verdict",
                ],
                rec,
            )
        }
        PstCommand::Synthesize {
            spectrum,
            method,
            output,
        } => {
            let omegas: Vec<f64> = read_json(&spectrum)?;
            let method = match method {
                Method::Auto => SynthesisMethod::Auto,
                Method::Euclid => SynthesisMethod::Euclid,
                Method::Lanczos => SynthesisMethod::Lanczos,
            };
            let chain = synthesize_with(&omegas, method)?;
            let mut w = writer(&output)?;
            serde_json::to_writer_pretty(&mut w, &chain.to_spec()).map_err(io::Error::from)?;
            writeln!(w)?;
            w.flush()?;
            Ok(())
        }
    }
}

fn apply_shift(chain: Chain, sd: SpectralData, shift: Shift) -> (Chain, SpectralData, f64) {
    let c = match shift {
        Shift::None => 0.0,
        Shift::Auto => positive_shift(&sd, AUTO_SHIFT_MIN_ENERGY),
        Shift::By(c) => c,
    };
    if c == 0.0 {
        (chain, sd, 0.0)
    } else {
        (chain.shifted(c), sd.shifted(c), c)
    }
}

fn transport(cmd: TransportCommand) -> CliResult<()> {
    match cmd {
        TransportCommand::Current {
            chain,
            t0,
            tn,
            bath,
            shift,
            out,
        } => {
            let (_, chain) = load(&chain)?;
            let sd = diagonalize(&chain)?;
            let (chain, sd, c) = apply_shift(chain, sd, shift);
            let cfg = BathConfig::new(t0, tn, bath.lambda, bath.h)?;
            let general = heat_current_general(&sd, &cfg)?;
            let mirror = match heat_current_mirror(&chain, &sd, &cfg) {
                Ok(m) => Some(m),
                Err(Error::NotMirrorSymmetric { .. }) => None,
                Err(e) => return Err(e.into()),
            };
            let rec = record! {
                "T0" => t0,
                "TN" => tn,
                "shift" => c,
                "hL" => general,
                "hL_mirror" => mirror,
            };
            output_one(&out, &["T0", "TN", "shift", "hL", "hL_mirror"], rec)
        }
        TransportCommand::Scan {
            family,
            t,
            dt,
            n,
            bath,
            shift,
            out,
        } => {
            let ns = n.values();
            let rows = ns
                .par_iter()
                .map(|&n| {
                    let chain = build_chain(&family_spec(&family, n))?;
                    let sd = diagonalize(&chain)?;
                    let (_, sd, _) = apply_shift(chain, sd, shift);
                    let kappa = conductivity_from_spectrum(&sd, t, dt, bath.lambda, bath.h)?;
                    Ok((n, kappa, kappa * dt / n as f64))
                })
                .collect::<Result<Vec<_>, Error>>()?;
            if rows.len() >= 4 {
                let kappas: Vec<f64> = rows.iter().map(|r| r.1).collect();
                if let Ok(fit) = fit_power_law(&ns, &kappas) {
                    eprintln!("exponent {:.6} (r^2 {:.6})", fit.slope, fit.r_squared);
                }
            }
            let records: Vec<Record> = rows
                .into_iter()
                .map(|(n, kappa, hl)| record! { "N" => n, "kappa" => kappa, "hL" => hl })
                .collect();
            output(&out, Format::Csv, &["N", "kappa", "hL"], &records)
        }
    }
}

fn route_of(r: Route) -> EntropyRoute {
    match r {
        Route::Direct => EntropyRoute::Direct,
        Route::Heun => EntropyRoute::Heun,
    }
}

fn ent(cmd: EntCommand) -> CliResult<()> {
    match cmd {
        EntCommand::Entropy {
            chain,
            k,
            ell,
            route,
            out,
        } => {
            let (_, chain) = load(&chain)?;
            let sd = diagonalize(&chain)?;
            let k = resolve_filling(k, &sd)?;
            let e = interval_entropy(&chain, &sd, k, ell, route_of(route))?;
            let rec = record! {
                "N" => chain.n(),
                "K" => k,
                "ell" => ell,
                "S" => e.entropy,
                "route" => e.route.to_string(),
                "commutator_residual" => e.commutator_residual,
            };
            output_one(
                &out,
                &["N", "K", "ell", "S", "route", "commutator_residual"],
                rec,
            )
        }
        EntCommand::Scan {
            family,
            ratio_l,
            ratio_k,
            n,
            route,
            out,
        } => {
            for (name, r) in [("--ratio-l", ratio_l), ("--ratio-k", ratio_k)] {
                if !(r > 0.0 && r <= 1.0) {
                    return Err(CliError::Usage(format!("{name} must lie in (0, 1]")));
                }
            }
            let index =
                |ratio: f64, n: usize| ((ratio * (n + 1) as f64).round() as usize).clamp(1, n) - 1;
            let records = n
                .values()
                .par_iter()
                .map(|&n| {
                    let chain = build_chain(&family_spec(&family, n))?;
                    let sd = diagonalize(&chain)?;
                    let (k, ell) = (index(ratio_k, n), index(ratio_l, n));
                    let e = interval_entropy(&chain, &sd, k, ell, route_of(route))?;
                    Ok(record! {
                        "N" => n,
                        "ell" => ell,
                        "S" => e.entropy,
                        "route" => e.route.to_string(),
                        "commutator_residual" => e.commutator_residual,
                    })
                })
                .collect::<Result<Vec<_>, Error>>()?;
            output(
                &out,
                Format::Csv,
                &["N", "ell", "S", "route", "commutator_residual"],
                &records,
            )
        }
        EntCommand::FitAffine { chain, k, ell, out } => {
            let (_, chain) = load(&chain)?;
            let sd = diagonalize(&chain)?;
            let k = resolve_filling(k, &sd)?;
            let t = heun_operator(&chain, &sd, k, ell)?;
            let c = correlation_matrix(&sd, k, &interval(ell))?;
            let fit = fit_affine_approximation(&c, &t)?;
            let rec = record! {
                "alpha0" => fit.alpha0,
                "alpha1" => fit.alpha1,
                "residuals" => fit.residuals,
                "pearson" => fit.pearson,
                "rms" => fit.rms,
            };
            output_one(
                &out,
                &["alpha0", "alpha1", "residuals", "pearson", "rms"],
                rec,
            )
        }
    }
}

fn bulk_site(spec: &ChainSpec, chain: &Chain) -> usize {
    match *spec {
        ChainSpec::Krawtchouk { n, p } => (p * n as f64).round() as usize,
        _ => chain.sites() / 2,
    }
}

fn neg(cmd: NegCommand) -> CliResult<()> {
    match cmd {
        NegCommand::Pair {
            chain,
            k,
            m,
            n,
            out,
        } => {
            let (_, chain) = load(&chain)?;
            let sd = diagonalize(&chain)?;
            let k = resolve_filling(k, &sd)?;
            let (a, b) = (m.min(n), m.max(n));
            let setup = NegativitySetup::from_spectrum(&sd, k, &[a], &[b])?;
            let c_mn = setup.correlation.entries[(0, 1)];
            let rec = record! {
                "m" => m,
                "n" => n,
                "d" => setup.separation(),
                "C_mn" => c_mn,
                "Ef" => logarithmic_negativity(&setup)?,
                "Ef_skeletal" => skeletal_negativity(c_mn, filling_fraction(k, sd.len())),
            };
            output_one(&out, &["m", "n", "d", "C_mn", "Ef", "Ef_skeletal"], rec)
        }
        NegCommand::Adjacent {
            chain,
            k,
            ell1,
            ell2,
            center,
            out,
        } => {
            let (spec, chain) = load(&chain)?;
            let sd = diagonalize(&chain)?;
            let k = resolve_filling(k, &sd)?;
            let c = match center {
                Placement::Bulk => bulk_site(&spec, &chain),
                Placement::Site(s) => s,
            };
            let (a1, a2) = adjacent_intervals(c, ell1, ell2)?;
            let setup = NegativitySetup::from_spectrum(&sd, k, &a1, &a2)?;
            let (l1, l2) = (ell1 as f64, ell2 as f64);
            let rec = record! {
                "ell1" => ell1,
                "ell2" => ell2,
                "center" => c,
                "x" => (l1 * l2 / (l1 + l2)).ln(),
                "Ef" => logarithmic_negativity(&setup)?,
            };
            output_one(&out, &["ell1", "ell2", "center", "x", "Ef"], rec)
        }
        NegCommand::Sweep {
            chain,
            k,
            mode: SweepMode::Skeletal,
            d,
            leftmost,
            out,
        } => {
            let (spec, chain) = load(&chain)?;
            let k = match k {
                Filling::Half => chain.sites().div_ceil(2) - 1,
                Filling::Index(i) => i,
                Filling::Auto => resolve_filling(k, &diagonalize(&chain)?)?,
            };
            let (placement, kind) = match leftmost {
                Placement::Bulk => (
                    PairPlacement::Bulk {
                        site: bulk_site(&spec, &chain),
                    },
                    AsymptoticKind::Bulk,
                ),
                Placement::Site(0) => (PairPlacement::Leftmost(0), AsymptoticKind::Boundary0),
                Placement::Site(1) => (PairPlacement::Leftmost(1), AsymptoticKind::Boundary1),
                Placement::Site(s) => (PairPlacement::Leftmost(s), AsymptoticKind::Bulk),
            };
            let p = match spec {
                ChainSpec::Krawtchouk { p, .. } => Some(p),
                _ => None,
            };
            let rho = filling_fraction(k, chain.sites());
            let known = matches!(
                (placement, kind),
                (PairPlacement::Bulk { .. }, _) | (PairPlacement::Leftmost(0 | 1), _)
            );
            let points = skeletal_sweep(&chain, k, placement, &d.values())?;
            let records: Vec<Record> = points
                .iter()
                .map(|pt| {
                    let asym = p
                        .filter(|_| known)
                        .map(|p| correlation_asymptotic(kind, pt.d, p, rho));
                    record! {
                        "d" => pt.d,
                        "Ef" => pt.ef,
                        "Ef_skeletal" => pt.ef_skeletal,
                        "C_mn" => pt.c_mn,
                        "C_asymptotic" => asym,
                    }
                })
                .collect();
            output(
                &out,
                Format::Csv,
                &["d", "Ef", "Ef_skeletal", "C_mn", "C_asymptotic"],
                &records,
            )
        }
    }
}
