//! Command-line front end: run, compile, verify, spectrum and walsh subcommands.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use nmrdj::compiler::{
    compile_diagonal, compile_factorization, sequence_stats, simplify, CouplingTopology,
    PulseSequence,
};
use nmrdj::oracle::{
    classify, collins_family, eq3_factorization, function_of, phase_oracle, table1_operator_in,
    BooleanFunction, Table1Id,
};
use nmrdj::qop::{global_phase_fidelity, walsh_transform, DiagonalSignOperator};
use nmrdj::simulator::{
    dj_nmr_run, pure_dj_run, ImperfectionModel, NmrRunOptions, NmrRunReport, SpectrumLine,
};
use nmrdj::spin_system::{topology_of, SpinSystem};
use serde::Serialize;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Fidelity a compiled operator must reach in `verify`.
const FIDELITY_FLOOR: f64 = 1.0 - 1e-10;

#[derive(Debug, Parser)]
#[command(
    name = "nmrdj",
    version,
    about = "Deutsch-Jozsa phase oracles on a J-coupled NMR spin chain"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the algorithm on pure and thermal states and report the verdicts.
    Run(RunArgs),
    /// Compile an oracle into a pulse sequence.
    Compile(CompileArgs),
    /// Check every reference oracle f1..f9 and the four-factor product forms.
    Verify(SystemArg),
    /// Write per-spin spectra as CSV.
    Spectrum(SpectrumArgs),
    /// List the parity terms of an oracle.
    Walsh(OracleArgs),
}

#[derive(Debug, Args)]
struct SystemArg {
    /// Spin-system JSON file (defaults to the bundled crotonic acid chain).
    #[arg(long)]
    system: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct OracleArgs {
    #[command(flatten)]
    system: SystemArg,
    /// table1:f1..f9 | tt:<hex truth table> | collins:<n>
    #[arg(long)]
    oracle: OracleSelector,
}

#[derive(Debug, Args)]
struct RunArgs {
    #[command(flatten)]
    oracle: OracleArgs,
    /// Directory for sequence.txt, spectrum_<spin>.csv and report.json.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    methyl_expand: bool,
    /// Relative RF pulse-angle error.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    epsilon: f64,
}

#[derive(Debug, Args)]
struct CompileArgs {
    #[command(flatten)]
    oracle: OracleArgs,
    /// Directory for sequence.txt; without it the sequence goes to stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Merge and cancel adjacent rotations after compiling.
    #[arg(long)]
    simplify: bool,
}

#[derive(Debug, Args)]
struct SpectrumArgs {
    #[command(flatten)]
    oracle: OracleArgs,
    /// Directory for spectrum_<spin>.csv; without it all spectra go to stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Only this spin.
    #[arg(long)]
    spin: Option<String>,
    #[arg(long)]
    methyl_expand: bool,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    epsilon: f64,
}

#[derive(Clone, Debug, PartialEq)]
enum OracleSelector {
    Table1(Table1Id),
    TruthTable(BooleanFunction),
    Collins(usize),
}

impl FromStr for OracleSelector {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (kind, value) = s
            .split_once(':')
            .ok_or_else(|| format!("`{s}`: expected table1:fN, tt:<hex> or collins:N"))?;
        match kind {
            "table1" => value
                .parse()
                .map(OracleSelector::Table1)
                .map_err(|e: nmrdj::Error| e.to_string()),
            "tt" => BooleanFunction::from_hex(value)
                .map(OracleSelector::TruthTable)
                .map_err(|e| e.to_string()),
            "collins" => value
                .parse()
                .map(OracleSelector::Collins)
                .map_err(|_| format!("`{value}` is not a qubit count")),
            _ => Err(format!("unknown oracle kind `{kind}`")),
        }
    }
}

impl fmt::Display for OracleSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleSelector::Table1(id) => write!(f, "table1:{id}"),
            OracleSelector::TruthTable(t) => match t.to_hex() {
                Ok(h) => write!(f, "tt:{h}"),
                Err(_) => write!(f, "tt"),
            },
            OracleSelector::Collins(n) => write!(f, "collins:{n}"),
        }
    }
}

impl OracleSelector {
    fn operator(&self, system: &SpinSystem) -> anyhow::Result<DiagonalSignOperator> {
        let d = match self {
            OracleSelector::Table1(id) => table1_operator_in(*id, &system.labels())?,
            OracleSelector::TruthTable(f) => phase_oracle(f),
            OracleSelector::Collins(n) => phase_oracle(&collins_family(*n)?),
        };
        if d.num_qubits() != system.len() {
            bail!(
                "oracle acts on {} qubits but the spin system has {} spins",
                d.num_qubits(),
                system.len()
            );
        }
        Ok(d)
    }
}

fn load_system(arg: &SystemArg) -> anyhow::Result<SpinSystem> {
    match &arg.system {
        Some(path) => SpinSystem::load(path).with_context(|| format!("loading {}", path.display())),
        None => Ok(SpinSystem::crotonic_acid()),
    }
}

fn model(epsilon: f64) -> anyhow::Result<ImperfectionModel> {
    Ok(ImperfectionModel::new(epsilon)?)
}

/// Parses `args` (program name first) and runs the command, returning the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            EXIT_DOMAIN
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> anyhow::Result<()> {
    match command {
        Command::Run(a) => cmd_run(a, out),
        Command::Compile(a) => cmd_compile(a, out),
        Command::Verify(a) => cmd_verify(a, out),
        Command::Spectrum(a) => cmd_spectrum(a, out),
        Command::Walsh(a) => cmd_walsh(a, out),
    }
}

#[derive(Serialize)]
struct CsvRow<'a> {
    spin: &'a str,
    frequency_hz: f64,
    re: f64,
    im: f64,
    phase_class: String,
}

fn write_csv(lines: &[SpectrumLine], out: &mut dyn Write) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for l in lines {
        w.serialize(CsvRow {
            spin: &l.spin,
            frequency_hz: l.frequency_hz,
            re: l.amplitude.re,
            im: l.amplitude.im,
            phase_class: l.phase_class.to_string(),
        })?;
    }
    w.flush()?;
    Ok(())
}

fn write_spectra(report: &NmrRunReport, dir: &Path) -> anyhow::Result<()> {
    for lines in &report.spectra {
        let path = dir.join(format!("spectrum_{}.csv", lines[0].spin));
        let mut f =
            fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
        write_csv(lines, &mut f)?;
    }
    Ok(())
}

fn write_file(dir: &Path, name: &str, contents: &str) -> anyhow::Result<()> {
    let path = dir.join(name);
    fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))
}

fn cmd_run(a: RunArgs, out: &mut dyn Write) -> anyhow::Result<()> {
    let system = load_system(&a.oracle.system)?;
    let d = a.oracle.oracle.operator(&system)?;
    let f = function_of(&d);
    let options = NmrRunOptions {
        model: model(a.epsilon)?,
        phase_tol: None,
        methyl_expand: a.methyl_expand,
    };
    let pure = pure_dj_run(&f)?;
    let nmr = dj_nmr_run(d, &system, &options)?;

    writeln!(out, "oracle        {}", a.oracle.oracle)?;
    writeln!(out, "class         {}", classify(&f))?;
    writeln!(
        out,
        "pure          verdict={} outcome={} probability={:.12} oracle_calls={}",
        pure.verdict, pure.outcome, pure.probability, pure.oracle_calls
    )?;
    writeln!(
        out,
        "nmr           verdict={} oracle_calls={} lines={} emissive={}",
        nmr.verdict,
        nmr.oracle_calls,
        nmr.lines().count(),
        nmr.emissive_lines().len()
    )?;
    let spins = nmr.emissive_spins();
    writeln!(
        out,
        "emissive_spins {}",
        if spins.is_empty() {
            "-".to_string()
        } else {
            spins.join(",")
        }
    )?;

    if let Some(dir) = &a.output {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        write_file(dir, "sequence.txt", &nmr.sequence.to_text())?;
        write_spectra(&nmr, dir)?;
        write_file(
            dir,
            "report.json",
            &(serde_json::to_string_pretty(&nmr.summary())? + "\n"),
        )?;
    }
    Ok(())
}

fn cmd_compile(a: CompileArgs, out: &mut dyn Write) -> anyhow::Result<()> {
    let system = load_system(&a.oracle.system)?;
    let d = a.oracle.oracle.operator(&system)?;
    let mut seq: PulseSequence = compile_diagonal(&d, &topology_of(&system))?;
    if a.simplify {
        seq = simplify(&seq);
    }
    let stats = sequence_stats(&seq, &system)?;
    match &a.output {
        Some(dir) => {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            write_file(dir, "sequence.txt", &seq.to_text())?;
        }
        None => out.write_all(seq.to_text().as_bytes())?,
    }
    writeln!(out, "# oracle {}", a.oracle.oracle)?;
    writeln!(
        out,
        "# rf_gates {} (z rotations {})",
        stats.rf_gates, stats.z_rotations
    )?;
    writeln!(out, "# zz_gates {}", stats.zz_gates)?;
    writeln!(
        out,
        "# cnot_expansions {} swap_expansions {}",
        stats.cnot_expansions, stats.swap_expansions
    )?;
    writeln!(out, "# j_evolution_s {:.9}", stats.j_evolution_s)?;
    writeln!(out, "# phase_inverted_zz {}", stats.phase_inverted_zz.len())?;
    Ok(())
}

fn cmd_verify(a: SystemArg, out: &mut dyn Write) -> anyhow::Result<()> {
    let system = load_system(&a)?;
    let topo = topology_of(&system);
    let mut failures = Vec::new();

    writeln!(out, "operator  fidelity        zz_gates  chain")?;
    for id in Table1Id::ALL {
        let d = table1_operator_in(id, &system.labels())?;
        let seq = compile_diagonal(&d, &topo)?;
        let on_chain = seq.check_topology(&topo).is_ok();
        let fidelity = global_phase_fidelity(&seq.unitary()?, &d.to_matrix())?;
        writeln!(
            out,
            "{:<9} {:.12}  {:<8}  {}",
            id.to_string(),
            fidelity,
            seq.zz_count(),
            if on_chain { "ok" } else { "off-chain" }
        )?;
        if fidelity < FIDELITY_FLOOR || !on_chain {
            failures.push(id.to_string());
        }
    }

    writeln!(out)?;
    writeln!(out, "n  product         compiled")?;
    for n in 2..=7 {
        let target = phase_oracle(&collins_family(n)?).to_matrix();
        let f = eq3_factorization(n)?;
        let product = global_phase_fidelity(&f.unitary()?, &target)?;
        let compiled = global_phase_fidelity(
            &compile_factorization(&f, &CouplingTopology::path(n))?.unitary()?,
            &target,
        )?;
        writeln!(out, "{n}  {product:.12}  {compiled:.12}")?;
        if product < 1.0 - 1e-12 || compiled < FIDELITY_FLOOR {
            failures.push(format!("product form n={n}"));
        }
    }

    if !failures.is_empty() {
        bail!("verification failed for {}", failures.join(", "));
    }
    Ok(())
}

fn cmd_spectrum(a: SpectrumArgs, out: &mut dyn Write) -> anyhow::Result<()> {
    let system = load_system(&a.oracle.system)?;
    let d = a.oracle.oracle.operator(&system)?;
    let options = NmrRunOptions {
        model: model(a.epsilon)?,
        phase_tol: None,
        methyl_expand: a.methyl_expand,
    };
    let mut report = dj_nmr_run(d, &system, &options)?;
    if let Some(label) = &a.spin {
        let k = system.index_of(label)?;
        report.spectra = vec![report.spectra.swap_remove(k - 1)];
    }
    match &a.output {
        Some(dir) => {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            write_spectra(&report, dir)?;
        }
        None => {
            let lines: Vec<SpectrumLine> = report.lines().cloned().collect();
            write_csv(&lines, out)?;
        }
    }
    Ok(())
}

fn cmd_walsh(a: OracleArgs, out: &mut dyn Write) -> anyhow::Result<()> {
    let system = load_system(&a.system)?;
    let d = a.oracle.operator(&system)?;
    let labels = system.labels();
    writeln!(out, "coefficient  support  spins")?;
    for term in walsh_transform(&d) {
        let spins: Vec<&str> = term
            .support
            .qubits()
            .iter()
            .map(|&q| labels[q - 1])
            .collect();
        let spins = if spins.is_empty() {
            "E".to_string()
        } else {
            spins.join(" ")
        };
        writeln!(
            out,
            "{:>+11}  {}  {}",
            term.coefficient, term.support, spins
        )?;
    }
    Ok(())
}
