//! `trig-rational` command line.
//!
//! [`run`] does all the work and returns the exit code with the captured
//! output, so the binary is a thin shim and tests need no subprocesses.
//!
//! Exit codes: 0 success, 1 verification or cross-check failure, 2 usage
//! error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Read;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::json;
use trig_rational::certifier::certify_with;
use trig_rational::exact::gcd;
use trig_rational::highprec::{crosscheck, MAX_BITS};
use trig_rational::polynomial::build_q;
use trig_rational::{verify_certificate, Certificate, CertifyOptions, ExactInteger, ExactRational, TrigFunction, TrigVerdict};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Output { code: EXIT_OK, stdout, stderr: String::new() }
    }

    fn usage(message: impl Into<String>) -> Self {
        Output {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr: format!("error: {}\n", message.into()),
        }
    }

    fn failed(stdout: String, message: impl Into<String>) -> Self {
        Output {
            code: EXIT_FAILED,
            stdout,
            stderr: format!("error: {}\n", message.into()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "trig-rational", version, about = "Rational values of tan², tan, cos² and cos at rational multiples of π")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the verdict for f(rπ): exact value, pole, or irrational.
    Classify {
        /// Angle as a multiple of π, e.g. `1/6`, `-5/12` or `2`.
        #[arg(allow_hyphen_values = true, value_parser = parse_angle)]
        angle: ExactRational,
        #[command(flatten)]
        function: FunctionArg,
        #[arg(long)]
        json: bool,
        /// Confirm the verdict numerically.
        #[arg(long)]
        crosscheck: bool,
        #[command(flatten)]
        bits: BitsArg,
    },
    /// Print a JSON certificate for the verdict.
    Certify {
        #[arg(allow_hyphen_values = true, value_parser = parse_angle)]
        angle: ExactRational,
        #[command(flatten)]
        function: FunctionArg,
        /// Re-check the certificate before printing it.
        #[arg(long)]
        verify: bool,
        /// Accepted for uniformity; certificates are always JSON.
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        bits: BitsArg,
    },
    /// Check a certificate read from FILE, or from standard input.
    Verify {
        file: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Classify, certify and verify every reduced d/n with 0 <= d <= n <= max-den.
    Scan {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        max_den: u64,
        /// Restrict to one function (default: all four).
        #[arg(long, value_parser = parse_function)]
        function: Option<TrigFunction>,
        /// Worker threads; the output does not depend on it.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..1025))]
        jobs: Option<u64>,
        #[arg(long)]
        crosscheck: bool,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        bits: BitsArg,
    },
    /// Print the coefficients of Q_n, constant term first.
    Poly {
        #[arg(value_parser = clap::value_parser!(u64))]
        n: u64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Args)]
struct FunctionArg {
    #[arg(long, default_value = "tan2", value_parser = parse_function)]
    function: TrigFunction,
}

#[derive(Debug, Args)]
struct BitsArg {
    /// Working precision for enclosures and separation.
    #[arg(long, default_value_t = 128, value_parser = clap::value_parser!(u32).range(8..=MAX_BITS as i64))]
    bits: u32,
}

fn parse_angle(text: &str) -> Result<ExactRational, String> {
    text.parse().map_err(|e: trig_rational::Error| e.to_string())
}

fn parse_function(text: &str) -> Result<TrigFunction, String> {
    text.parse()
}

/// Runs the command line `argv` (program name first) and returns what the
/// process would print and exit with. `verify` without a file reads stdin.
pub fn run<I, T>(argv: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with_stdin(argv, &mut std::io::stdin())
}

pub fn run_with_stdin<I, T>(argv: I, stdin: &mut dyn Read) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            let text = err.render().to_string();
            return if err.use_stderr() {
                Output { code: EXIT_USAGE, stdout: String::new(), stderr: text }
            } else {
                Output::ok(text)
            };
        }
    };
    match cli.command {
        Command::Classify { angle, function, json, crosscheck, bits } => {
            classify(&angle, function.function, json, crosscheck.then_some(bits.bits))
        }
        Command::Certify { angle, function, verify, json: _, bits } => {
            certify(&angle, function.function, verify, bits.bits)
        }
        Command::Verify { file, json } => verify(file, json, stdin),
        Command::Scan { max_den, function, jobs, crosscheck, json, bits } => {
            let functions = function.map_or(TrigFunction::ALL.to_vec(), |f| vec![f]);
            let config = ScanConfig {
                max_den,
                functions,
                crosscheck_bits: crosscheck.then_some(bits.bits),
                separation_bits: bits.bits,
            };
            scan(&config, jobs, json)
        }
        Command::Poly { n, json } => poly(n, json),
    }
}

fn verdict_line(r: &ExactRational, function: TrigFunction, verdict: &TrigVerdict) -> String {
    format!("{function}({r}·π): {verdict}")
}

fn classify(r: &ExactRational, function: TrigFunction, json: bool, crosscheck_bits: Option<u32>) -> Output {
    let verdict = function.classify(r);
    let stdout = if json {
        let value = json!({ "angle": r, "function": function, "verdict": verdict });
        format!("{value}\n")
    } else {
        format!("{}\n", verdict_line(r, function, &verdict))
    };
    if let Some(bits) = crosscheck_bits {
        if let Err(e) = crosscheck(r, function, &verdict, bits) {
            return Output::failed(stdout, format!("cross-check failed: {e}"));
        }
    }
    Output::ok(stdout)
}

fn certify(r: &ExactRational, function: TrigFunction, verify: bool, bits: u32) -> Output {
    let options = CertifyOptions { separation_bits: bits };
    let cert = match certify_with(r, function, &options) {
        Ok(cert) => cert,
        Err(e) => return Output::failed(String::new(), format!("cannot certify {function}({r}·π): {e}")),
    };
    if verify {
        if let Err(e) = verify_certificate(&cert) {
            return Output::failed(String::new(), format!("certificate failed verification: {e}"));
        }
    }
    Output::ok(format!("{}\n", cert.to_json()))
}

fn verify(file: Option<PathBuf>, json: bool, stdin: &mut dyn Read) -> Output {
    let mut text = String::new();
    let read = match &file {
        Some(path) if path.as_os_str() != "-" => std::fs::read_to_string(path).map(|t| text = t),
        _ => stdin.read_to_string(&mut text).map(|_| ()),
    };
    if let Err(e) = read {
        let source = file.map_or("standard input".into(), |p| p.display().to_string());
        return Output::usage(format!("cannot read {source}: {e}"));
    }
    let result = Certificate::from_json(&text)
        .map_err(|e| format!("malformed certificate: {e}"))
        .and_then(|cert| verify_certificate(&cert).map(|()| cert).map_err(|e| e.to_string()));
    match (result, json) {
        (Ok(cert), false) => Output::ok(format!("ok: {}\n", verdict_line(&cert.input, cert.function, &cert.verdict))),
        (Ok(cert), true) => {
            let value = json!({
                "valid": true,
                "angle": cert.input,
                "function": cert.function,
                "verdict": cert.verdict,
            });
            Output::ok(format!("{value}\n"))
        }
        (Err(e), false) => Output::failed(format!("FAIL: {e}\n"), "certificate rejected"),
        (Err(e), true) => Output::failed(format!("{}\n", json!({ "valid": false, "error": e })), "certificate rejected"),
    }
}

fn poly(n: u64, json: bool) -> Output {
    if n < 3 || n.is_multiple_of(2) {
        return Output::usage(format!("poly needs an odd n >= 3, got {n}"));
    }
    let q = match build_q(&ExactInteger::from(n)) {
        Ok(q) => q,
        Err(e) => return Output::usage(e.to_string()),
    };
    let coeffs: Vec<String> = q.coeffs().iter().map(|c| c.to_string()).collect();
    if json {
        Output::ok(format!("{}\n", json!(coeffs)))
    } else {
        Output::ok(format!("[{}]\n", coeffs.join(", ")))
    }
}

#[derive(Debug, Clone)]
pub struct ScanConfig {
    pub max_den: u64,
    pub functions: Vec<TrigFunction>,
    pub crosscheck_bits: Option<u32>,
    pub separation_bits: u32,
}

#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct Tally {
    pub exact: u64,
    pub pole: u64,
    pub irrational: u64,
}

/// Per-denominator results, merged in ascending `n`.
#[derive(Debug, Default)]
struct Partial {
    angles: u64,
    tallies: Vec<Tally>,
    failures: Vec<String>,
}

fn check_one(r: &ExactRational, function: TrigFunction, config: &ScanConfig) -> Result<TrigVerdict, String> {
    let verdict = function.classify(r);
    let options = CertifyOptions { separation_bits: config.separation_bits };
    let cert = certify_with(r, function, &options).map_err(|e| format!("certify: {e}"))?;
    if cert.verdict != verdict {
        return Err(format!("certificate says {}, classifier says {verdict}", cert.verdict));
    }
    verify_certificate(&cert).map_err(|e| format!("verify: {e}"))?;
    if let Some(bits) = config.crosscheck_bits {
        crosscheck(r, function, &verdict, bits).map_err(|e| format!("cross-check: {e}"))?;
    }
    Ok(verdict)
}

fn scan_denominator(n: u64, config: &ScanConfig) -> Partial {
    let mut part = Partial {
        tallies: vec![Tally::default(); config.functions.len()],
        ..Default::default()
    };
    let big_n = ExactInteger::from(n);
    for d in 0..=n {
        let big_d = ExactInteger::from(d);
        if gcd(&big_d, &big_n) != ExactInteger::from(1) {
            continue;
        }
        part.angles += 1;
        let r = ExactRational::new(big_d, big_n.clone()).expect("n >= 1");
        for (tally, &function) in part.tallies.iter_mut().zip(&config.functions) {
            match check_one(&r, function, config) {
                Ok(TrigVerdict::Exact(_)) => tally.exact += 1,
                Ok(TrigVerdict::Pole) => tally.pole += 1,
                Ok(TrigVerdict::Irrational) => tally.irrational += 1,
                Err(e) => part.failures.push(format!("{function}({r}·π): {e}")),
            }
        }
    }
    part
}

/// Summary of a sweep; identical for any number of worker threads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanReport {
    pub angles: u64,
    pub tallies: Vec<(TrigFunction, Tally)>,
    pub failures: Vec<String>,
}

pub fn scan_report(config: &ScanConfig) -> ScanReport {
    // Work is split by denominator; `collect` keeps ascending n.
    let parts: Vec<Partial> = (1..=config.max_den)
        .into_par_iter()
        .map(|n| scan_denominator(n, config))
        .collect();
    let mut report = ScanReport {
        angles: 0,
        tallies: config.functions.iter().map(|&f| (f, Tally::default())).collect(),
        failures: Vec::new(),
    };
    for part in parts {
        report.angles += part.angles;
        for ((_, total), t) in report.tallies.iter_mut().zip(&part.tallies) {
            total.exact += t.exact;
            total.pole += t.pole;
            total.irrational += t.irrational;
        }
        report.failures.extend(part.failures);
    }
    report
}

fn scan(config: &ScanConfig, jobs: Option<u64>, json: bool) -> Output {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = jobs {
        builder = builder.num_threads(jobs as usize);
    }
    let pool = match builder.build() {
        Ok(pool) => pool,
        Err(e) => return Output::usage(format!("cannot start {jobs:?} workers: {e}")),
    };
    let report = pool.install(|| scan_report(config));
    let mut out = String::new();
    if json {
        let functions: serde_json::Map<String, serde_json::Value> = report
            .tallies
            .iter()
            .map(|(f, t)| {
                let counts = json!({ "exact": t.exact, "pole": t.pole, "irrational": t.irrational });
                (f.name().to_string(), counts)
            })
            .collect();
        let value = json!({
            "max_den": config.max_den,
            "angles": report.angles,
            "crosscheck": config.crosscheck_bits.is_some(),
            "functions": functions,
            "failures": report.failures,
        });
        writeln!(out, "{value}").unwrap();
    } else {
        let checks = report.angles * config.functions.len() as u64;
        writeln!(out, "scanned {} reduced angles d/n with n <= {} ({checks} checks)", report.angles, config.max_den).unwrap();
        for (f, t) in &report.tallies {
            writeln!(out, "{:<5} exact {:>6}  pole {:>6}  irrational {:>8}", f.name(), t.exact, t.pole, t.irrational).unwrap();
        }
        for failure in &report.failures {
            writeln!(out, "FAIL {failure}").unwrap();
        }
        writeln!(out, "failures: {}", report.failures.len()).unwrap();
    }
    if report.failures.is_empty() {
        Output::ok(out)
    } else {
        Output::failed(out, format!("{} checks failed", report.failures.len()))
    }
}
