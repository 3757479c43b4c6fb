//! The `qss` command line front end. [`run`] takes the full argument list
//! (program name first) and returns the exit code and the text written.
//!
//! Exit codes: 0 success, 1 a verification failed, 2 usage or other errors.

use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand};

use qss_core::access::PartySet;
use qss_core::classical::RandomTape;
use qss_core::compiler::{
    copies_required, qss_reconstruct, qss_share, size_report, tomographic_family, verify_correctness, verify_privacy,
    PrivacyMode, QssScheme,
};
use qss_core::qecc::{lemma3_params, m_min, M_MIN_HORIZON};

use crate::deal::{deal_from_json, deal_to_json, parse_secret, tensor_power};
use crate::preset::{load_structure, preset};
use crate::{acceptance, Error};

pub const DEFAULT_FIDELITY_TOLERANCE: f64 = 1e-8;
pub const DEFAULT_PRIVACY_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Parser, Debug)]
#[command(name = "qss", version, about = "Quantum secret sharing: build, share, reconstruct and verify schemes")]
struct Cli {
    /// Seed of every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Access structure tools.
    #[command(subcommand)]
    Structure(StructureCmd),
    /// Share a secret and write the deal.
    Share(ShareArgs),
    /// Reconstruct from a deal file.
    Reconstruct(ReconstructArgs),
    /// Check correctness or privacy of a preset.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Parameter calculators.
    #[command(subcommand)]
    Params(ParamsCmd),
    /// Share-size report of a preset.
    Report(ReportArgs),
    /// Run the acceptance suite.
    Selftest(SelftestArgs),
}

#[derive(Subcommand, Debug)]
enum StructureCmd {
    /// Monotonicity, no-cloning, heaviness and minimal sets.
    Analyze(AnalyzeArgs),
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    /// Structure file or inline expression.
    input: Option<String>,
    #[arg(long, conflicts_with = "input")]
    structure: Option<String>,
    /// Weights `w1,w2,..` for the weighted report.
    #[arg(long)]
    weights: Option<String>,
    /// Party count of an inline expression.
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Args, Debug)]
struct ShareArgs {
    #[arg(long)]
    preset: String,
    /// `basis:<i>` or comma separated amplitudes.
    #[arg(long)]
    secret: String,
    /// Copies of the secret; must match the scheme.
    #[arg(long)]
    copies: Option<usize>,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args, Debug)]
struct ReconstructArgs {
    #[arg(long)]
    deal: String,
    /// Comma separated parties, numbered from 1.
    #[arg(long)]
    parties: String,
    /// Expected secret; prints its fidelity with the output.
    #[arg(long)]
    secret: Option<String>,
    #[arg(long, default_value_t = DEFAULT_FIDELITY_TOLERANCE)]
    tolerance: f64,
}

#[derive(Subcommand, Debug)]
enum VerifyCmd {
    /// Entanglement fidelity on authorized sets.
    Correctness(VerifyArgs),
    /// Trace distance of unauthorized views.
    Privacy(VerifyArgs),
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    preset: String,
    /// Comma separated parties; default every relevant set.
    #[arg(long)]
    parties: Option<String>,
    /// Exhaustive tape enumeration (the default).
    #[arg(long, conflicts_with = "samples")]
    exact: bool,
    /// Sample this many tapes per key component value.
    #[arg(long)]
    samples: Option<u64>,
    /// Substitute uniform keys for PRG output (Yao presets).
    #[arg(long)]
    hybrid: bool,
    #[arg(long)]
    tolerance: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum ParamsCmd {
    /// Long-message code parameters.
    Lemma3 {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        m: u64,
    },
    /// Smallest message length from which the parameters always work.
    Mmin {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: usize,
    },
    /// Copies needed for a threshold scheme.
    Copies {
        #[arg(long)]
        t: usize,
        #[arg(long)]
        n: usize,
    },
}

#[derive(Args, Debug)]
struct ReportArgs {
    #[arg(long)]
    preset: String,
    /// Message length for long-message accounting.
    #[arg(long)]
    m: Option<u64>,
}

#[derive(Args, Debug)]
struct SelftestArgs {
    /// Comma separated criterion numbers; default all.
    #[arg(long)]
    only: Option<String>,
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn verdict(b: bool) -> &'static str {
    if b {
        "PASS"
    } else {
        "FAIL"
    }
}

fn parse_parties(s: &str, n: usize) -> Result<PartySet, Error> {
    let mut p = PartySet::empty();
    for tok in s.trim_matches(|c| c == '{' || c == '}').split(',') {
        let i: usize = tok.trim().parse().map_err(|_| Error::Usage(format!("bad party '{tok}'")))?;
        if i == 0 || i > n {
            return Err(Error::Usage(format!("party {i} out of range 1..={n}")));
        }
        p = p.with(i - 1);
    }
    Ok(p)
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, Error> {
    s.split(',').map(|x| x.trim().parse().map_err(|_| Error::Usage(format!("bad {what} '{x}'")))).collect()
}

/// Runs one command; `args[0]` is the program name.
pub fn run<I, S>(args: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Output { code, stdout: text, stderr: String::new() }
            } else {
                Output { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let mut out = String::new();
    match dispatch(cli, &mut out) {
        Ok(true) => Output { code: 0, stdout: out, stderr: String::new() },
        Ok(false) => Output { code: 1, stdout: out, stderr: String::new() },
        Err(e) => Output { code: 2, stdout: out, stderr: format!("error: {e}\n") },
    }
}

/// `Ok(false)` when a verification failed.
fn dispatch(cli: Cli, out: &mut String) -> Result<bool, Error> {
    let seed = cli.seed;
    match cli.cmd {
        Cmd::Structure(StructureCmd::Analyze(a)) => analyze(a, out),
        Cmd::Share(a) => share(a, seed, out),
        Cmd::Reconstruct(a) => reconstruct(a, out),
        Cmd::Verify(VerifyCmd::Correctness(a)) => correctness(a, seed, out),
        Cmd::Verify(VerifyCmd::Privacy(a)) => privacy(a, seed, out),
        Cmd::Params(p) => params(p, out),
        Cmd::Report(a) => report(a, out),
        Cmd::Selftest(a) => selftest(a, out),
    }
}

fn analyze(a: AnalyzeArgs, out: &mut String) -> Result<bool, Error> {
    let input = a.input.or(a.structure).ok_or_else(|| Error::Usage(String::from("structure file or expression required")))?;
    let parsed = load_structure(&input, a.n)?;
    let f = &parsed.structure;
    let w = match a.weights {
        Some(s) => Some(qss_core::access::WeightFunction::new(parse_list(&s, "weight")?)?),
        None => parsed.weights.clone(),
    };
    let r = f.analyze(w.as_ref())?;
    if let Some(name) = &parsed.name {
        writeln!(out, "name: {name}").unwrap();
    }
    writeln!(out, "parties: {}", r.parties).unwrap();
    writeln!(out, "monotone: {}", yes(r.monotone)).unwrap();
    writeln!(out, "no-cloning: {}", yes(r.no_cloning)).unwrap();
    match r.heaviness {
        Some(t) => writeln!(out, "heavy: {} (t={t})", yes(r.heavy)).unwrap(),
        None => writeln!(out, "heavy: yes (nothing authorized)").unwrap(),
    }
    let sets: Vec<String> = r.min_sets.iter().map(|s| s.to_string()).collect();
    writeln!(out, "min_sets: {}", sets.join(" ")).unwrap();
    if let (Some(w), Some(rep)) = (&w, &r.weighted) {
        let ws: Vec<String> = w.weights().iter().map(|x| x.to_string()).collect();
        writeln!(out, "weights: {}", ws.join(" ")).unwrap();
        writeln!(out, "total_weight: {}", rep.total).unwrap();
        writeln!(out, "majority: {}", rep.threshold).unwrap();
        match rep.min_authorized_weight {
            Some(m) => writeln!(out, "min_authorized_weight: {m}").unwrap(),
            None => writeln!(out, "min_authorized_weight: none").unwrap(),
        }
        writeln!(out, "weighted-heavy: {}", yes(rep.weighted_heavy)).unwrap();
    }
    Ok(true)
}

fn share(a: ShareArgs, seed: u64, out: &mut String) -> Result<bool, Error> {
    let s = preset(&a.preset)?;
    let c = s.copies();
    if let Some(k) = a.copies {
        if k != c {
            return Err(Error::Usage(format!("--copies {k}: {} shares {c} copies of the secret", a.preset)));
        }
    }
    let secret = parse_secret(&a.secret, s.secret_dim())?;
    let input = tensor_power(&secret, c)?;
    let deal = qss_share(&s, &input, &(0..c).collect::<Vec<_>>(), &RandomTape::Seed(seed))?;
    let json = deal_to_json(&deal);
    match a.out {
        Some(path) => {
            std::fs::write(&path, &json).map_err(|e| Error::Io { path: path.clone(), source: e })?;
            writeln!(out, "scheme: {}", deal.scheme).unwrap();
            writeln!(out, "registers: {}", deal.state.system().len()).unwrap();
            for (i, regs) in deal.party_map.iter().enumerate() {
                writeln!(out, "party {}: registers {:?}, classical {} bytes", i + 1, regs, deal.classical[i].len()).unwrap();
            }
            writeln!(out, "wrote: {path}").unwrap();
        }
        None => out.push_str(&json),
    }
    Ok(true)
}

fn load_deal(path: &str) -> Result<qss_core::compiler::Deal, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io { path: path.to_string(), source: e })?;
    deal_from_json(&text).map_err(|e| match e {
        Error::DealFormat(m) => Error::DealFormat(format!("{path}: {m}")),
        other => other,
    })
}

fn reconstruct(a: ReconstructArgs, out: &mut String) -> Result<bool, Error> {
    let deal = load_deal(&a.deal)?;
    let s = preset(&deal.scheme)?;
    let p = parse_parties(&a.parties, s.parties())?;
    let r = qss_reconstruct(&s, &deal, p, None)?;
    let rho = r.state.partial_trace(&[r.output])?;
    writeln!(out, "parties: {p}").unwrap();
    writeln!(out, "copy: {}", r.copy).unwrap();
    writeln!(out, "output_register: {}", r.output).unwrap();
    writeln!(out, "output_state:").unwrap();
    let d = rho.dim();
    for i in 0..d {
        let row: Vec<String> = (0..d)
            .map(|j| {
                let z = rho.matrix().data()[i * d + j];
                format!("{:+.6}{:+.6}i", z.re, z.im)
            })
            .collect();
        writeln!(out, "  {}", row.join(" ")).unwrap();
    }
    match a.secret {
        Some(sec) => {
            let want = parse_secret(&sec, s.secret_dim())?;
            let f = rho.fidelity_with_pure(&want)?;
            let ok = (f - 1.0).abs() <= a.tolerance;
            writeln!(out, "tolerance={:.1e}", a.tolerance).unwrap();
            writeln!(out, "fidelity={f:.12} {}", verdict(ok)).unwrap();
            Ok(ok)
        }
        None => Ok(true),
    }
}

fn target_sets(s: &QssScheme, parties: Option<&str>, authorized: bool) -> Result<Vec<PartySet>, Error> {
    let n = s.parties();
    match parties {
        Some(ps) => {
            let p = parse_parties(ps, n)?;
            if s.structure().eval(p) != authorized {
                let what = if authorized { "unauthorized" } else { "authorized" };
                return Err(Error::Usage(format!("{p} is {what}")));
            }
            Ok(vec![p])
        }
        None => Ok(PartySet::all(n).filter(|p| !p.is_empty() && s.structure().eval(*p) == authorized).collect()),
    }
}

fn correctness(a: VerifyArgs, seed: u64, out: &mut String) -> Result<bool, Error> {
    let s = preset(&a.preset)?;
    let tol = a.tolerance.unwrap_or(DEFAULT_FIDELITY_TOLERANCE);
    let mut worst = 0.0f64;
    writeln!(out, "tolerance={tol:.1e}").unwrap();
    for p in target_sets(&s, a.parties.as_deref(), true)? {
        let f = verify_correctness(&s, p, &RandomTape::Seed(seed))?;
        worst = worst.max((f - 1.0).abs());
        writeln!(out, "parties={p} fidelity={f:.12}").unwrap();
    }
    let ok = worst <= tol;
    writeln!(out, "max_fidelity_error={worst:.1e} {}", verdict(ok)).unwrap();
    Ok(ok)
}

fn privacy(a: VerifyArgs, seed: u64, out: &mut String) -> Result<bool, Error> {
    let s = preset(&a.preset)?;
    let tol = a.tolerance.unwrap_or(DEFAULT_PRIVACY_TOLERANCE);
    let mode = match a.samples {
        Some(samples) => PrivacyMode::Sampled { samples, seed },
        None => PrivacyMode::Exact,
    };
    let fam = tomographic_family(s.secret_dim())?;
    let mut worst = 0.0f64;
    writeln!(out, "tolerance={tol:.1e}").unwrap();
    for p in target_sets(&s, a.parties.as_deref(), false)? {
        let r = verify_privacy(&s, p, &fam, mode, a.hybrid)?;
        worst = worst.max(r.max_distance);
        write!(out, "parties={p} distance={:.3e} exact={} pairs={}", r.max_distance, r.exact, r.pairs).unwrap();
        if let (Some(n), Some(rad)) = (r.samples, r.radius) {
            write!(out, " samples={n} radius={rad:.3e}").unwrap();
        }
        out.push('\n');
    }
    let ok = worst <= tol;
    writeln!(out, "max_trace_distance={worst:.1e} {}", verdict(ok)).unwrap();
    Ok(ok)
}

fn params(p: ParamsCmd, out: &mut String) -> Result<bool, Error> {
    match p {
        ParamsCmd::Lemma3 { n, t, m } => {
            let r = lemma3_params(n, t, m)?;
            writeln!(out, "N={} r={} K={} ok={} ratio={:.4}", r.big_n, r.r, r.k, r.ok(), r.ratio()).unwrap();
        }
        ParamsCmd::Mmin { n, t } => {
            writeln!(out, "m_min={} horizon={M_MIN_HORIZON}", m_min(n, t)?).unwrap();
        }
        ParamsCmd::Copies { t, n } => {
            if t == 0 || t > n {
                return Err(Error::Usage(String::from("need 1 <= t <= n")));
            }
            writeln!(out, "copies={}", copies_required(t, n)).unwrap();
        }
    }
    Ok(true)
}

fn report(a: ReportArgs, out: &mut String) -> Result<bool, Error> {
    let s = preset(&a.preset)?;
    let r = size_report(&s, a.m)?;
    writeln!(out, "scheme={}", s.name()).unwrap();
    writeln!(out, "secret_dim={} copies={}", r.secret_dim, r.copies).unwrap();
    for i in 0..r.qudits.len() {
        writeln!(out, "party={} qudits={} qubits={} classical_bits={}", i + 1, r.qudits[i], r.qubits[i], r.classical_bits[i]).unwrap();
    }
    writeln!(out, "public_bits={}", r.public_bits).unwrap();
    writeln!(out, "total_bits={}", r.total).unwrap();
    writeln!(out, "key_bits={}", r.key_bits).unwrap();
    writeln!(out, "formula_total_bits={}", r.formula_total).unwrap();
    writeln!(out, "diverges={}", r.diverges).unwrap();
    writeln!(out, "info_ratio={:.4}", r.info_ratio).unwrap();
    if let Some(lm) = r.long_message {
        let p = lm.params;
        writeln!(out, "longmsg n={} t={} m={} N={} r={} K={} ok={}", p.n, p.t, p.m, p.big_n, p.r, p.k, p.ok()).unwrap();
        writeln!(out, "quantum_ratio={:.4} bound={:.4} classical_ratio={:.6}", lm.quantum_ratio, lm.bound, lm.classical_ratio).unwrap();
    }
    Ok(true)
}

fn selftest(a: SelftestArgs, out: &mut String) -> Result<bool, Error> {
    let ids: Vec<u32> = match a.only {
        Some(s) => parse_list(&s, "criterion")?,
        None => Vec::new(),
    };
    if let Some(bad) = ids.iter().find(|&&i| !(1..=12).contains(&i)) {
        return Err(Error::Usage(format!("no criterion {bad}")));
    }
    let results = acceptance::run(&ids);
    for r in &results {
        writeln!(out, "{r}").unwrap();
    }
    let passed = results.iter().filter(|r| r.pass).count();
    writeln!(out, "summary: {passed}/{} PASS", results.len()).unwrap();
    Ok(passed == results.len())
}
