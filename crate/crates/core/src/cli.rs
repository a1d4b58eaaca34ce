//! The `nodesim` command line.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 infeasible plan,
//! 3 verification failure. Diagnostics go to stderr; reports go to `--out`
//! or stdout.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::aes::{self, AesKey, CryptoError, XtsContext};
use crate::conv::{hwce_convolve, write_map, ConvError, GoldenCase};
use crate::perf::{Calibration, PerfError};
use crate::sim::{PhaseSource, Scenario, SimError, SimReport};
use crate::sponge::{self, AuthCiphertext, SpongeConfig, SpongeError};
use crate::workloads::fit::{calibrate, FitTargets};
use crate::workloads::{self, OptLevel, TargetFile, UseCaseId, UseCaseSpecs, WorkloadError};

/// Environment variable naming the default calibration file.
pub const CALIBRATION_ENV: &str = "NODESIM_CALIBRATION";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Crypto(#[from] CryptoError),
    #[error(transparent)]
    Sponge(#[from] SpongeError),
    #[error(transparent)]
    Conv(#[from] ConvError),
    #[error(transparent)]
    Perf(#[from] PerfError),
    #[error(transparent)]
    Sim(SimError),
    #[error(transparent)]
    Workload(WorkloadError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        if e.is_infeasible() {
            CliError::Infeasible(e.to_string())
        } else {
            CliError::Sim(e)
        }
    }
}

impl From<WorkloadError> for CliError {
    fn from(e: WorkloadError) -> Self {
        match e {
            WorkloadError::Sim(s) => s.into(),
            e => CliError::Workload(e),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Infeasible(_) => 2,
            CliError::Verification(_) | CliError::Sponge(SpongeError::AuthenticationFailure) => 3,
            _ => 1,
        }
    }
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, bytes).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

#[derive(Debug, Parser)]
#[command(name = "nodesim", version, about = "Functional and energy simulator of a secure-analytics end-node")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Calibration file; falls back to $NODESIM_CALIBRATION, then the
    /// built-in default.
    #[arg(long, global = true)]
    pub calibration: Option<PathBuf>,
    /// Output file (a directory for several scenarios); stdout if absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    fn ext(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Encrypt or decrypt a file with AES-128 or the Keccak sponge.
    Crypt(CryptArgs),
    /// Run one convolution-engine job described by a manifest.
    Conv(ConvArgs),
    /// Simulate scenario files.
    Simulate(SimulateArgs),
    /// Simulate a built-in use case.
    Usecase(UsecaseArgs),
    /// Check a report against target bounds.
    Verify(VerifyArgs),
    /// Refit the fitted calibration entries against use-case energy targets.
    Calibrate(CalibrateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CryptMode {
    Ecb,
    Xts,
    /// plain sponge duplex encryption
    Sponge,
    /// sponge encryption with a trailing authentication tag
    SpongeAe,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Op {
    Encrypt,
    Decrypt,
}

#[derive(Debug, Args)]
pub struct CryptArgs {
    #[arg(long, value_enum)]
    pub mode: CryptMode,
    #[arg(long, value_enum, default_value_t = Op::Encrypt)]
    pub op: Op,
    /// 128-bit key in hex; for XTS the tweak key
    #[arg(long)]
    pub key: String,
    /// XTS data key in hex; defaults to `--key` (XEX)
    #[arg(long)]
    pub key2: Option<String>,
    /// XTS sector number
    #[arg(long, default_value_t = 0)]
    pub sector: u128,
    /// sponge rate in bits
    #[arg(long, default_value_t = 128)]
    pub rate: u32,
    /// sponge rounds per permutation call
    #[arg(long, default_value_t = 20)]
    pub rounds: u32,
    /// sponge IV in hex
    #[arg(long, default_value = "")]
    pub iv: String,
    /// authentication tag length in bits
    #[arg(long)]
    pub tag_bits: Option<u32>,
    pub input: PathBuf,
}

#[derive(Debug, Args)]
pub struct ConvArgs {
    /// manifest.json naming the input, weight and optional partial-sum blobs
    pub manifest: PathBuf,
    /// compare against the expected outputs listed in the manifest
    #[arg(long)]
    pub check: bool,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(required = true)]
    pub scenarios: Vec<PathBuf>,
    /// scenarios run concurrently
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// omit the per-phase table
    #[arg(long)]
    pub summary_only: bool,
}

#[derive(Debug, Args)]
pub struct UsecaseArgs {
    /// UAV_RESNET20, FACE_DETECT or EEG_SEIZURE
    pub id: String,
    /// optimization level, or `all` for the whole progression
    #[arg(long, default_value = "plus_hwcrypt")]
    pub level: String,
    #[arg(long, default_value_t = 0.8)]
    pub vdd: f64,
    /// use-case parameter file replacing the built-in one
    #[arg(long)]
    pub specs: Option<PathBuf>,
    #[arg(long)]
    pub summary_only: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub report: PathBuf,
    pub targets: PathBuf,
}

#[derive(Debug, Args)]
pub struct CalibrateArgs {
    /// energy targets; defaults to the built-in ones
    #[arg(long)]
    pub targets: Option<PathBuf>,
    #[arg(long)]
    pub specs: Option<PathBuf>,
}

/// Calibration from an explicit path, the scenario, the environment, or the
/// built-in default, in that order.
fn load_calibration(explicit: Option<&Path>, scenario_ref: Option<PathBuf>) -> Result<Calibration, CliError> {
    let env = std::env::var_os(CALIBRATION_ENV).map(PathBuf::from);
    match explicit.map(Path::to_path_buf).or(scenario_ref).or(env) {
        Some(p) => Ok(Calibration::from_json(&read_text(&p)?)?),
        None => Ok(Calibration::default()),
    }
}

fn load_specs(path: Option<&Path>) -> Result<UseCaseSpecs, CliError> {
    match path {
        Some(p) => Ok(serde_json::from_str(&read_text(p)?)?),
        None => Ok(UseCaseSpecs::default()),
    }
}

fn emit(out: Option<&Path>, text: &[u8]) -> Result<(), CliError> {
    match out {
        Some(p) => write(p, text),
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text).map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            })
        }
    }
}

fn render(r: &SimReport, format: Format) -> String {
    match format {
        Format::Json => r.to_json(),
        Format::Csv => r.to_csv(),
    }
}

fn key(field: &str, hex: &str) -> Result<AesKey, CliError> {
    AesKey::from_hex(hex).map_err(|e| CliError::Usage(format!("--{field}: {e}")))
}

fn crypt(g: &Global, a: &CryptArgs) -> Result<(), CliError> {
    let data = read(&a.input)?;
    let dir = match a.op {
        Op::Encrypt => aes::Direction::Encrypt,
        Op::Decrypt => aes::Direction::Decrypt,
    };
    let out = match a.mode {
        CryptMode::Ecb => aes::ecb(&key("key", &a.key)?, &data, dir)?,
        CryptMode::Xts => {
            let k1 = key("key", &a.key)?;
            let k2 = match &a.key2 {
                Some(h) => key("key2", h)?,
                None => k1,
            };
            aes::xts(&XtsContext::new(k1, k2, a.sector.to_le_bytes()), &data, dir)?
        }
        CryptMode::Sponge | CryptMode::SpongeAe => {
            let mut cfg = SpongeConfig::from_hex(a.rate, a.rounds, &a.key, &a.iv)?;
            if let Some(t) = a.tag_bits {
                cfg = cfg.with_tag_bits(t)?;
            }
            match (a.mode, a.op) {
                (CryptMode::Sponge, Op::Encrypt) => sponge::sponge_encrypt(&cfg, &data),
                (CryptMode::Sponge, Op::Decrypt) => sponge::sponge_decrypt(&cfg, &data),
                (_, Op::Encrypt) => {
                    let ae = sponge::auth_encrypt(&cfg, &data)?;
                    [ae.ciphertext, ae.tag].concat()
                }
                (_, Op::Decrypt) => {
                    let tag_len = cfg.tag_bits() as usize / 8;
                    if data.len() < tag_len {
                        return Err(SpongeError::AuthenticationFailure.into());
                    }
                    let (ct, tag) = data.split_at(data.len() - tag_len);
                    sponge::auth_decrypt(
                        &cfg,
                        &AuthCiphertext {
                            ciphertext: ct.to_vec(),
                            tag: tag.to_vec(),
                        },
                    )?
                }
            }
        }
    };
    emit(g.out.as_deref(), &out)
}

fn conv(g: &Global, a: &ConvArgs) -> Result<(), CliError> {
    let case = GoldenCase::from_file(&a.manifest)?;
    let dir = a.manifest.parent().unwrap_or(Path::new("."));
    let outputs = hwce_convolve(&case.job(dir)?)?;
    if let Some(out) = &g.out {
        std::fs::create_dir_all(out).map_err(|source| CliError::Io {
            path: out.clone(),
            source,
        })?;
        for (k, fm) in outputs.iter().enumerate() {
            let mut buf = Vec::new();
            write_map(&mut buf, fm)?;
            write(&out.join(format!("out_{k}.bin")), &buf)?;
        }
    }
    eprintln!("{}: {} output map(s)", case.name, outputs.len());
    if a.check {
        if outputs != case.expected(dir)? {
            return Err(CliError::Verification(format!("{} differs from its expected outputs", case.name)));
        }
        eprintln!("{}: matches expected outputs", case.name);
    }
    Ok(())
}

fn run_scenario(path: &Path, g: &Global, summary_only: bool) -> Result<String, CliError> {
    let sc = Scenario::from_path(path).map_err(|e| match e {
        SimError::Io(source) => CliError::Io {
            path: path.to_owned(),
            source,
        },
        e => CliError::Sim(e),
    })?;
    let dir = path.parent().unwrap_or(Path::new("."));
    let cal = load_calibration(g.calibration.as_deref(), sc.calibration_path(dir))?;
    let report = match &sc.source {
        PhaseSource::Phases(_) => sc.run_phases(&cal)?,
        PhaseSource::UsecaseRef(r) => {
            let (id, level) = workloads::resolve(r)?;
            let platform = sc.platform_for(&cal);
            let rep = workloads::simulate_on(id, level, sc.vdd, &cal, &UseCaseSpecs::default(), &platform, sc.mode_policy.as_ref())?;
            match &sc.label {
                Some(l) => rep.with_label(l.clone()),
                None => rep,
            }
        }
    };
    let report = if summary_only { report.without_phases() } else { report };
    Ok(render(&report, g.format))
}

fn simulate(g: &Global, a: &SimulateArgs) -> Result<(), CliError> {
    let n = a.scenarios.len();
    let jobs = a.jobs.clamp(1, n);
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<Result<String, CliError>>>> = Mutex::new((0..n).map(|_| None).collect());
    std::thread::scope(|s| {
        for _ in 0..jobs {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= n {
                    break;
                }
                let r = run_scenario(&a.scenarios[i], g, a.summary_only);
                results.lock().expect("no panics while holding the lock")[i] = Some(r);
            });
        }
    });
    let results = results.into_inner().expect("workers finished");
    let mut first_err = None;
    for (path, r) in a.scenarios.iter().zip(results) {
        match r.expect("every scenario ran") {
            Ok(text) => {
                let out = match (&g.out, n) {
                    (Some(o), 1) => Some(o.clone()),
                    (Some(o), _) => {
                        std::fs::create_dir_all(o).map_err(|source| CliError::Io {
                            path: o.clone(),
                            source,
                        })?;
                        let stem = path.file_stem().unwrap_or_default().to_string_lossy().into_owned();
                        Some(o.join(format!("{stem}.{}", g.format.ext())))
                    }
                    (None, _) => None,
                };
                emit(out.as_deref(), text.as_bytes())?;
            }
            Err(e) => {
                if n > 1 {
                    eprintln!("{}: {e}", path.display());
                }
                first_err.get_or_insert(e);
            }
        }
    }
    first_err.map_or(Ok(()), Err)
}

fn usecase(g: &Global, a: &UsecaseArgs) -> Result<(), CliError> {
    let id: UseCaseId = a.id.parse()?;
    let cal = load_calibration(g.calibration.as_deref(), None)?;
    let specs = load_specs(a.specs.as_deref())?;
    let text = if a.level.eq_ignore_ascii_case("all") {
        let s = workloads::summarize(id, a.vdd, &cal, &specs)?;
        match g.format {
            Format::Json => s.to_json(),
            Format::Csv => s.to_csv(),
        }
    } else {
        let level: OptLevel = a.level.parse()?;
        let r = workloads::simulate(id, level, a.vdd, &cal, &specs)?;
        render(&if a.summary_only { r.without_phases() } else { r }, g.format)
    };
    emit(g.out.as_deref(), text.as_bytes())
}

fn verify(g: &Global, a: &VerifyArgs) -> Result<(), CliError> {
    let report: serde_json::Value = serde_json::from_str(&read_text(&a.report)?)?;
    let targets = TargetFile::from_json(&read_text(&a.targets)?)?;
    let checks = workloads::verify(&report, &targets)?;
    let mut text = String::new();
    for c in &checks {
        text += &format!("{c}\n");
    }
    emit(g.out.as_deref(), text.as_bytes())?;
    let failed = checks.iter().filter(|c| !c.pass).count();
    if failed > 0 {
        return Err(CliError::Verification(format!("{failed} of {} targets out of bounds", checks.len())));
    }
    Ok(())
}

fn recalibrate(g: &Global, a: &CalibrateArgs) -> Result<(), CliError> {
    let cal = load_calibration(g.calibration.as_deref(), None)?;
    let specs = load_specs(a.specs.as_deref())?;
    let targets = match &a.targets {
        Some(p) => serde_json::from_str(&read_text(p)?)?,
        None => FitTargets::default(),
    };
    let (fitted, results) = calibrate(&cal, &specs, &targets)?;
    for r in &results {
        eprintln!(
            "{:?}: x{:.6} -> {:.6e} J (target {:.6e} J)",
            r.knob, r.factor, r.achieved_joules, r.target_joules
        );
    }
    emit(g.out.as_deref(), fitted.to_json().as_bytes())
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let g = &cli.global;
    match &cli.command {
        Command::Crypt(a) => crypt(g, a),
        Command::Conv(a) => conv(g, a),
        Command::Simulate(a) => simulate(g, a),
        Command::Usecase(a) => usecase(g, a),
        Command::Verify(a) => verify(g, a),
        Command::Calibrate(a) => recalibrate(g, a),
    }
}

/// Parse `std::env::args`, run, and map the outcome to an exit code.
pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("nodesim: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
