use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rvb_core::dynamics::{rdm_robustness, uniform_grid, BathSpec};
use rvb_core::entanglement::{
    e2v_average, iconcurrence, pair_iconcurrence, ppt_separability, werner_fit, TwoQubitRdm,
};
use rvb_core::irhm::{
    build_named_state, default_coupling, homogenize, spectrum_check, HomogenizeConfig, NamedState,
};
use rvb_core::phonon::{
    lang_firsov_verify, verify_all_identities, verify_identity, EffectiveCouplings, Identity, IdentityReport,
};
use rvb_core::report::{fig1_rows, quote_table, verify_all, RunConfig};
use rvb_core::valence_bond::{all_coverings, non_crossing_coverings, DimerCovering};
use rvb_core::PureState;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// Valence-bond entanglement toolkit.
#[derive(Parser)]
#[command(name = "rvb", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Normalized entanglement curves as CSV (N, E2v_half, Ic_ratio).
    Fig1 {
        /// Largest even site count.
        #[arg(long, default_value_t = 40)]
        n_max: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every invariant suite and print a JSON report; exits nonzero on failure.
    Verify {
        /// Site counts, comma separated (4..=10; odd counts run the identity suite only).
        #[arg(long, value_delimiter = ',', default_value = "4,6,8")]
        n: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-6)]
        tolerance: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Quoted figures next to computed values.
    Quotes {
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Infinite-range Heisenberg model.
    #[command(subcommand)]
    Irhm(IrhmCommand),
    /// Pair entanglement report for a state.
    Entangle {
        /// `hs`, `psi6a`, `psi6b` or a path to a state JSON file.
        #[arg(long)]
        state: String,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        report: Format,
    },
    /// Phonon-dressed effective Hamiltonians.
    #[command(subcommand)]
    Phonon(PhononCommand),
    /// Collective dephasing.
    #[command(subcommand)]
    Dynamics(DynamicsCommand),
    /// Valence-bond coverings.
    #[command(subcommand)]
    Vb(VbCommand),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum IrhmCommand {
    /// Levels and degeneracies, checked against (J/2)[S(S+1) − 3N/4].
    Spectrum {
        #[arg(long)]
        n: usize,
        /// Exchange; defaults to 1/(N−1).
        #[arg(long)]
        j: Option<f64>,
    },
    /// Numerically homogenize a Rumer-basis superposition; writes the state as JSON.
    Homogenize(HomogenizeArgs),
    /// Build one of the explicit homogeneous states as JSON.
    Named {
        /// `hs`, `psi6a` or `psi6b`.
        #[arg(long)]
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct HomogenizeArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 20)]
    restarts: usize,
    #[arg(long, default_value_t = 1e-6)]
    tolerance: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum PhononCommand {
    /// Check the third-order hard-core-boson identities.
    VerifyIdentities {
        #[arg(long)]
        n: usize,
        /// Check all twelve identities.
        #[arg(long, conflicts_with = "identity")]
        all: bool,
        /// A single identity such as T1, V2 or TC3.
        #[arg(long)]
        identity: Option<String>,
    },
    /// Second-order effective couplings as JSON.
    Couplings {
        #[arg(long)]
        g: f64,
        #[arg(long)]
        omega0: f64,
        #[arg(long)]
        j: f64,
        #[arg(long)]
        n: usize,
    },
    /// Lang-Firsov transform residual on a truncated phonon space.
    LangFirsov {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long)]
        g: f64,
        #[arg(long, default_value_t = 1.0)]
        omega0: f64,
        #[arg(long, default_value_t = 0.5)]
        j: f64,
        #[arg(long, default_value_t = 8)]
        cutoff: usize,
    },
}

#[derive(Subcommand)]
enum DynamicsCommand {
    /// Evolve a state and write t, X, Y, E2v, max_rdm_deviation as CSV.
    Run {
        /// `hs`, `psi6a`, `psi6b` or a path to a state JSON file.
        #[arg(long)]
        state: String,
        /// Bath JSON: {"temperature": T, "modes": [{"g": .., "omega": ..}]}.
        #[arg(long)]
        bath: PathBuf,
        #[arg(long, default_value_t = 50.0)]
        tmax: f64,
        #[arg(long, default_value_t = 0.05)]
        dt: f64,
        /// Exchange; defaults to 1/(N−1).
        #[arg(long)]
        j: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum VbCommand {
    /// List dimer coverings, one per line as `a-b c-d …`.
    Enumerate {
        #[arg(long)]
        n: usize,
        /// Only the non-crossing (Rumer) coverings.
        #[arg(long)]
        rumer: bool,
    },
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(fs::File::create(p).with_context(|| format!("cannot create {}", p.display()))?),
        None => Box::new(io::stdout().lock()),
    })
}

fn load_state(spec: &str) -> Result<PureState> {
    if let Ok(name) = spec.parse::<NamedState>() {
        return Ok(build_named_state(name)?);
    }
    let text = fs::read_to_string(spec).with_context(|| format!("`{spec}` is neither a state name nor a readable file"))?;
    Ok(PureState::from_json(&text)?)
}

fn write_json(path: Option<&Path>, value: &impl serde::Serialize) -> Result<()> {
    let mut w = output(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    Ok(())
}

fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var("RVB_THREADS") {
        let n: usize = v.parse().with_context(|| format!("RVB_THREADS must be a positive integer (got `{v}`)"))?;
        if n == 0 {
            bail!("RVB_THREADS must be positive");
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn fig1(n_max: usize, out: Option<&Path>) -> Result<()> {
    let mut w = csv::Writer::from_writer(output(out)?);
    w.write_record(["N", "E2v_half", "Ic_ratio"])?;
    for r in fig1_rows(n_max)? {
        w.write_record([r.n_sites.to_string(), format!("{:.10}", r.e2v_ratio), format!("{:.10}", r.ic_ratio)])?;
    }
    w.flush()?;
    Ok(())
}

fn quotes(format: Format) -> Result<()> {
    let rows = quote_table()?;
    match format {
        Format::Json => write_json(None, &rows),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(io::stdout().lock());
            for r in rows {
                w.serialize(r)?;
            }
            w.flush()?;
            Ok(())
        }
    }
}

fn entangle(spec: &str, format: Format) -> Result<()> {
    let state = load_state(spec)?.normalized()?;
    let n = state.n_sites();
    let mut rows = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let rdm = TwoQubitRdm::from_state(&state, i, j)?;
            let fit = werner_fit(&rdm);
            let ppt = ppt_separability(&rdm.matrix);
            rows.push(serde_json::json!({
                "i": i,
                "j": j,
                "czz": rdm.czz,
                "entropy": rdm.entropy()?,
                "iconcurrence": pair_iconcurrence(&rdm.matrix),
                "werner_p": fit.p,
                "werner_residual": fit.residual,
                "ppt_min_eigenvalue": ppt.min_eigenvalue,
                "separable": ppt.separable,
            }));
        }
    }
    match format {
        Format::Json => write_json(
            None,
            &serde_json::json!({
                "n_sites": n,
                "e2v": e2v_average(&state)?,
                "iconcurrence": iconcurrence(&state)?,
                "pairs": rows,
            }),
        ),
        Format::Csv => {
            let keys = ["i", "j", "czz", "entropy", "iconcurrence", "werner_p", "werner_residual", "ppt_min_eigenvalue", "separable"];
            let mut w = csv::Writer::from_writer(io::stdout().lock());
            w.write_record(keys)?;
            for r in rows {
                w.write_record(keys.iter().map(|k| r[k].to_string()))?;
            }
            w.flush()?;
            Ok(())
        }
    }
}

fn format_covering(c: &DimerCovering) -> String {
    c.pairs().iter().map(|(a, b)| format!("{a}-{b}")).collect::<Vec<_>>().join(" ")
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Fig1 { n_max, out } => fig1(n_max, out.as_deref())?,
        Command::Verify { n, seed, tolerance, out } => {
            let report = verify_all(&n, &RunConfig { seed, tolerance })?;
            write_json(out.as_deref(), &report)?;
            if !report.all_passed {
                eprintln!("verification failed");
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::Quotes { format } => quotes(format)?,
        Command::Irhm(IrhmCommand::Spectrum { n, j }) => {
            write_json(None, &spectrum_check(n, j.unwrap_or_else(|| default_coupling(n)))?)?;
        }
        Command::Irhm(IrhmCommand::Homogenize(a)) => {
            let cfg = HomogenizeConfig { tolerance: a.tolerance, restarts: a.restarts, seed: a.seed, ..HomogenizeConfig::default() };
            let basis = rvb_core::valence_bond::rumer_basis(a.n)?;
            let h = homogenize(a.n, &basis, &cfg)?;
            eprintln!("residual {:.3e} (restart {}), E2v {:.10}", h.residual, h.restart, e2v_average(&h.state)?);
            let mut w = output(a.out.as_deref())?;
            writeln!(w, "{}", h.state.to_json()?)?;
        }
        Command::Irhm(IrhmCommand::Named { name, out }) => {
            let state = build_named_state(name.parse()?)?;
            let mut w = output(out.as_deref())?;
            writeln!(w, "{}", state.to_json()?)?;
        }
        Command::Entangle { state, report } => entangle(&state, report)?,
        Command::Phonon(PhononCommand::VerifyIdentities { n, all, identity }) => {
            let reports = match identity {
                Some(name) => {
                    let id: Identity = name.parse()?;
                    vec![IdentityReport { identity: id, n_sites: n, residual: verify_identity(id, n)? }]
                }
                None if all => verify_all_identities(n)?,
                None => bail!("pass --all or --identity NAME"),
            };
            write_json(None, &reports)?;
            if reports.iter().any(|r| !(r.residual < 1e-12)) {
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::Phonon(PhononCommand::Couplings { g, omega0, j, n }) => {
            let c = EffectiveCouplings::new(n, g, omega0, j)?;
            if !c.in_regime {
                eprintln!("warning: outside g > 1, J/ω₀ ≤ 1; values computed anyway");
            }
            write_json(None, &serde_json::json!({ "couplings": c, "third_order_scales": c.third_order_scales() }))?;
        }
        Command::Phonon(PhononCommand::LangFirsov { n, g, omega0, j, cutoff }) => {
            write_json(None, &lang_firsov_verify(n, g, omega0, j, cutoff)?)?;
        }
        Command::Dynamics(DynamicsCommand::Run { state, bath, tmax, dt, j, out }) => {
            let state = load_state(&state)?;
            let text = fs::read_to_string(&bath).with_context(|| format!("cannot read {}", bath.display()))?;
            let spec = BathSpec::from_json(&text)?;
            let j = j.unwrap_or_else(|| default_coupling(state.n_sites()));
            let report = rdm_robustness(&state, &spec, &uniform_grid(tmax, dt)?, j)?;
            let mut w = csv::Writer::from_writer(output(out.as_deref())?);
            w.write_record(["t", "X", "Y", "E2v", "max_rdm_deviation"])?;
            for p in &report.trajectory {
                w.write_record([p.t, p.x, p.y, p.e2v, p.max_rdm_deviation].map(|v| format!("{v:.12e}")))?;
            }
            w.flush()?;
            eprintln!("max pair-RDM deviation {:.3e}, E2v drift {:.3e}", report.max_deviation, report.max_e2v_drift);
        }
        Command::Vb(VbCommand::Enumerate { n, rumer }) => {
            let coverings = if rumer { non_crossing_coverings(n)? } else { all_coverings(n)? };
            let mut w = io::stdout().lock();
            for c in &coverings {
                writeln!(w, "{}", format_covering(c))?;
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = configure_threads().and_then(|()| run(cli));
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
