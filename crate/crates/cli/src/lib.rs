//! Argument handling and command execution for the `gwright` binary.

use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use gwright_core::donsker::{
    donsker_at_a, donsker_expectation, donsker_t_transform, integrability_bound, PairingData,
};
use gwright_core::fhdam::FHDensity;
use gwright_core::gwm::GWMeasure;
use gwright_core::oracles::{all_pass, family_suite, CheckRecord, SuiteOptions};
use gwright_core::polys::{fox_hermite, gram_schmidt_orthopoly};
use gwright_core::specfun::RngState;
use gwright_core::wright::{family_psi_real, validate};
use gwright_core::{Error, Family, Params};
use serde_json::json;

/// Families shipped with the binary, usable as `--params builtin:<name>`.
pub const BUILTIN_FAMILIES: [(&str, &str); 3] = [
    ("gaussian", include_str!("../families/gaussian.json")),
    ("ml05", include_str!("../families/ml05.json")),
    ("ml09", include_str!("../families/ml09.json")),
];

pub const EXIT_OK: i32 = 0;
pub const EXIT_COMPUTE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "gwright", version, about = "Generalized Wright functions, measures and Donsker's delta")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args, Debug, Default)]
struct Common {
    /// Parameter file (JSON), or `builtin:gaussian|ml05|ml09`.
    #[arg(long)]
    params: Option<String>,
    /// Relative tolerance.
    #[arg(long)]
    rtol: Option<f64>,
    /// Write CSV output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Evaluate Psi(x)/K at a point or on a grid.
    Eval {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        arg: Option<f64>,
        /// `start,stop,count`
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<String>,
    },
    /// Density of the measure (or of the mixing law with --mixing).
    Density {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1)]
        d: usize,
        #[arg(long, allow_hyphen_values = true)]
        x: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<String>,
        #[arg(long, value_enum, default_value_t = Route::Mixture)]
        route: Route,
        #[arg(long)]
        mixing: bool,
    },
    /// Mixing moments and mixed moments up to a total order.
    Moments {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1)]
        d: usize,
        #[arg(long, default_value_t = 4)]
        order: u32,
    },
    /// Draw samples as CSV.
    Sample {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Mass left outside the sampling table on each side.
        #[arg(long, default_value_t = 1e-8)]
        tail: f64,
    },
    /// Polynomial coefficients (ascending degree) as a JSON array.
    Hermite {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_enum, default_value_t = PolyKind::Fox)]
        kind: PolyKind,
    },
    /// Donsker's delta: T-transform, expectation and integrability bound.
    Donsker {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1.0)]
        eta_eta: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        phi_phi: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        eta_phi: f64,
        /// Also report E[delta_a] at this point.
        #[arg(long, allow_hyphen_values = true)]
        a: Option<f64>,
        /// Radius for the integrability bound.
        #[arg(long, default_value_t = 1.0)]
        m: f64,
    },
    /// Run the oracle suite (on the shipped families unless --params is given).
    Check {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 20240521)]
        seed: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Route {
    Mixture,
    Foxh,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PolyKind {
    Fox,
    Orthogonal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    /// Everything, with 10^6 samples per family and dimension.
    All,
    /// Deterministic checks and 10^4 samples.
    Quick,
}

/// Points to evaluate: one value or an inclusive linear grid.
#[derive(Debug, Clone, PartialEq)]
pub enum Points {
    One(f64),
    Grid(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Eval { at: Points },
    Density { d: usize, at: Points, route: Route, mixing: bool },
    Moments { d: usize, order: u32 },
    Sample { d: usize, n: usize, seed: u64, tail: f64 },
    Hermite { n: usize, kind: PolyKind },
    Donsker { eta_eta: f64, phi_phi: f64, eta_phi: f64, a: Option<f64>, m: f64 },
    Check { suite: Suite, n: Option<usize>, seed: u64 },
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    /// Label and parsed parameters; `None` only for `check` on the shipped families.
    pub params: Option<(String, Params)>,
    pub rtol: f64,
    pub out: Option<PathBuf>,
}

/// Every problem found while reading the command line. Help and version
/// requests also arrive here, with `informational` set.
#[derive(Debug, Clone, PartialEq)]
pub struct UsageError {
    pub problems: Vec<String>,
    pub informational: bool,
}

impl UsageError {
    fn new(problems: Vec<String>) -> Self {
        Self {
            problems,
            informational: false,
        }
    }
}

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.informational {
            return write!(f, "{}", self.problems.join("\n"));
        }
        for (i, p) in self.problems.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "usage error: {p}")?;
        }
        Ok(())
    }
}

fn parse_grid(s: &str, problems: &mut Vec<String>) -> Option<Vec<f64>> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let bad = || format!("--grid expects start,stop,count with count >= 2, got '{s}'");
    if parts.len() != 3 {
        problems.push(bad());
        return None;
    }
    let (Ok(a), Ok(b), Ok(n)) = (parts[0].parse::<f64>(), parts[1].parse::<f64>(), parts[2].parse::<usize>()) else {
        problems.push(bad());
        return None;
    };
    if n < 2 || !a.is_finite() || !b.is_finite() {
        problems.push(bad());
        return None;
    }
    Some((0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect())
}

fn points(x: Option<f64>, grid: Option<String>, flag: &str, problems: &mut Vec<String>) -> Points {
    match (x, grid) {
        (Some(_), Some(_)) => {
            problems.push(format!("give either --{flag} or --grid, not both"));
            Points::One(0.0)
        }
        (Some(v), None) => Points::One(v),
        (None, Some(g)) => Points::Grid(parse_grid(&g, problems).unwrap_or_default()),
        (None, None) => {
            problems.push(format!("missing required flag --{flag} (or --grid)"));
            Points::One(0.0)
        }
    }
}

fn required<T>(v: Option<T>, flag: &str, problems: &mut Vec<String>) -> Option<T> {
    if v.is_none() {
        problems.push(format!("missing required flag --{flag}"));
    }
    v
}

/// Read parameters from a file path or a `builtin:` name.
pub fn load_params(source: &str) -> Result<(String, Params), String> {
    if let Some(name) = source.strip_prefix("builtin:") {
        let text = BUILTIN_FAMILIES
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, t)| *t)
            .ok_or_else(|| format!("unknown builtin family '{name}'"))?;
        let p = Params::from_json(text).map_err(|e| format!("builtin {name}: {e}"))?;
        return Ok((name.to_string(), p));
    }
    let path = Path::new(source);
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read parameter file {source}: {e}"))?;
    let p = Params::from_json(&text).map_err(|e| format!("{source}: {e}"))?;
    let label = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| source.to_string());
    Ok((label, p))
}

/// Parse and validate `argv` (including the program name).
pub fn parse_config<I, S>(argv: I) -> Result<RunConfig, UsageError>
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| {
        use clap::error::ErrorKind;
        let informational = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
        UsageError {
            problems: vec![e.to_string().trim_end().to_string()],
            informational,
        }
    })?;
    let mut problems = Vec::new();
    let (common, default_rtol, needs_params) = match &cli.command {
        Cmd::Eval { common, .. } => (common, 1e-8, true),
        Cmd::Density { common, .. } | Cmd::Moments { common, .. } => (common, 1e-6, true),
        Cmd::Sample { common, .. } | Cmd::Hermite { common, .. } => (common, 1e-8, true),
        Cmd::Donsker { common, .. } => (common, 1e-6, true),
        Cmd::Check { common, .. } => (common, 1e-6, false),
    };
    let rtol = common.rtol.unwrap_or(default_rtol);
    if !(rtol > 0.0 && rtol <= 1e-2) {
        problems.push(format!("--rtol must lie in (0, 1e-2], got {rtol}"));
    }
    let params = match &common.params {
        Some(p) => match load_params(p) {
            Ok(v) => Some(v),
            Err(e) => {
                problems.push(e);
                None
            }
        },
        None => {
            if needs_params {
                problems.push("missing required flag --params".into());
            }
            None
        }
    };
    let out = common.out.clone();
    let command = match cli.command {
        Cmd::Eval { arg, grid, .. } => Command::Eval {
            at: points(arg, grid, "arg", &mut problems),
        },
        Cmd::Density {
            d, x, grid, route, mixing, ..
        } => {
            if d == 0 {
                problems.push("--d must be >= 1".into());
            }
            Command::Density {
                d,
                at: points(x, grid, "x", &mut problems),
                route,
                mixing,
            }
        }
        Cmd::Moments { d, order, .. } => {
            if d == 0 {
                problems.push("--d must be >= 1".into());
            }
            Command::Moments { d, order }
        }
        Cmd::Sample { d, n, seed, tail, .. } => {
            let d = required(d, "d", &mut problems).unwrap_or(1);
            let n = required(n, "n", &mut problems).unwrap_or(1);
            let seed = required(seed, "seed", &mut problems).unwrap_or(0);
            if d == 0 {
                problems.push("--d must be >= 1".into());
            }
            if n == 0 {
                problems.push("--n must be >= 1".into());
            }
            if !(tail > 0.0 && tail < 1e-2) {
                problems.push(format!("--tail must lie in (0, 1e-2), got {tail}"));
            }
            Command::Sample { d, n, seed, tail }
        }
        Cmd::Hermite { n, kind, .. } => Command::Hermite {
            n: required(n, "n", &mut problems).unwrap_or(0),
            kind,
        },
        Cmd::Donsker {
            eta_eta,
            phi_phi,
            eta_phi,
            a,
            m,
            ..
        } => {
            if !(eta_eta > 0.0) {
                problems.push(format!("--eta-eta must be positive, got {eta_eta}"));
            }
            if !(m > 0.0) {
                problems.push(format!("--m must be positive, got {m}"));
            }
            Command::Donsker {
                eta_eta,
                phi_phi,
                eta_phi,
                a,
                m,
            }
        }
        Cmd::Check { suite, n, seed, .. } => Command::Check { suite, n, seed },
    };
    if !problems.is_empty() {
        return Err(UsageError::new(problems));
    }
    Ok(RunConfig {
        command,
        params,
        rtol,
        out,
    })
}

/// A failed command: the module it came from and the library error.
#[derive(Debug)]
pub struct RunError {
    pub module: &'static str,
    pub error: Error,
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.module, self.error)
    }
}

trait InModule<T> {
    fn within(self, module: &'static str) -> Result<T, RunError>;
}

impl<T> InModule<T> for gwright_core::Result<T> {
    fn within(self, module: &'static str) -> Result<T, RunError> {
        self.map_err(|error| RunError { module, error })
    }
}

/// Output of a successful run: text for stdout, and whether the check suite passed.
#[derive(Debug)]
pub struct RunOutput {
    pub stdout: String,
    pub success: bool,
}

fn csv_or_stdout(cfg: &RunConfig, csv: String) -> Result<String, RunError> {
    match &cfg.out {
        Some(path) => {
            std::fs::write(path, csv).map_err(Error::from).within("io")?;
            Ok(json!({ "written": path.display().to_string() }).to_string())
        }
        None => Ok(csv),
    }
}

fn grid_csv(header: &str, rows: &[(f64, f64)]) -> String {
    let mut s = format!("{header}\n");
    for (x, v) in rows {
        s.push_str(&format!("{:.16e},{:.16e}\n", x, v));
    }
    s
}

fn family(params: &Params, require_entire: bool) -> Result<Family, RunError> {
    validate(params, require_entire).within("wright")
}

fn shipped() -> Vec<(String, Params)> {
    BUILTIN_FAMILIES
        .iter()
        .map(|(n, t)| (n.to_string(), Params::from_json(t).expect("shipped families parse")))
        .collect()
}

/// Execute a parsed configuration.
pub fn run(cfg: &RunConfig) -> Result<RunOutput, RunError> {
    let ok = |stdout: String| Ok(RunOutput { stdout, success: true });
    let params = cfg.params.as_ref().map(|(_, p)| p);
    match &cfg.command {
        Command::Eval { at } => {
            let fam = family(params.expect("validated"), false)?;
            let eval = |x: f64| family_psi_real(&fam, x, cfg.rtol).map(|v| v / fam.k()).within("wright");
            match at {
                Points::One(x) => ok(json!({ "arg": x, "value": eval(*x)? }).to_string()),
                Points::Grid(xs) => {
                    let rows = xs.iter().map(|&x| Ok((x, eval(x)?))).collect::<Result<Vec<_>, RunError>>()?;
                    ok(csv_or_stdout(cfg, grid_csv("arg,value", &rows))?)
                }
            }
        }
        Command::Density { d, at, route, mixing } => {
            let fam = family(params.expect("validated"), true)?;
            let mix = FHDensity::new(fam).within("fhdam")?;
            let mu = GWMeasure::new(mix.clone(), *d).within("gwm")?;
            let eval = |x: f64| -> Result<f64, RunError> {
                if *mixing {
                    return mix.density(x).within("fhdam");
                }
                let mut pt = vec![0.0; *d];
                pt[0] = x;
                match route {
                    Route::Mixture => mu.density_radial(x * x, cfg.rtol).within("gwm"),
                    Route::Foxh => mu.density_foxh(&pt).within("gwm"),
                }
            };
            let header = if *mixing { "tau,density" } else { "x,density" };
            match at {
                Points::One(x) => ok(json!({ "x": x, "density": eval(*x)? }).to_string()),
                Points::Grid(xs) => {
                    let rows = xs.iter().map(|&x| Ok((x, eval(x)?))).collect::<Result<Vec<_>, RunError>>()?;
                    ok(csv_or_stdout(cfg, grid_csv(header, &rows))?)
                }
            }
        }
        Command::Moments { d, order } => {
            let fam = family(params.expect("validated"), true)?;
            let mix = FHDensity::new(fam).within("fhdam")?;
            let mixing = (0..=*order / 2).map(|l| mix.moment(l)).collect::<gwright_core::Result<Vec<_>>>().within("fhdam")?;
            let mu = GWMeasure::new(mix, *d).within("gwm")?;
            let mut mixed = Vec::new();
            for k in gwright_core::oracles::multi_indices(*d, *order) {
                let v = mu.mixed_moment(&k).within("gwm")?;
                mixed.push(json!({ "index": k, "value": v }));
            }
            ok(json!({ "mixing": mixing, "mixed": mixed }).to_string())
        }
        Command::Sample { d, n, seed, tail } => {
            let fam = family(params.expect("validated"), true)?;
            let mix = FHDensity::new(fam).within("fhdam")?.build_sampler(*tail).within("fhdam")?;
            let mu = GWMeasure::new(mix, *d).within("gwm")?;
            let xs = mu.sample_batch(&mut RngState::from_seed(*seed), *n).within("gwm")?;
            ok(csv_or_stdout(cfg, xs.to_csv())?)
        }
        Command::Hermite { n, kind } => {
            let fam = family(params.expect("validated"), false)?;
            let p = match kind {
                PolyKind::Fox => fox_hermite(&fam, *n).within("polys")?,
                PolyKind::Orthogonal => {
                    let mu = GWMeasure::new(FHDensity::new(fam).within("fhdam")?, 1).within("gwm")?;
                    gram_schmidt_orthopoly(&mu, *n).within("polys")?
                }
            };
            ok(p.to_json())
        }
        Command::Donsker {
            eta_eta,
            phi_phi,
            eta_phi,
            a,
            m,
        } => {
            let fam = family(params.expect("validated"), true)?;
            let pd = PairingData::new(*eta_eta, (*phi_phi).into(), (*eta_phi).into()).within("donsker")?;
            let t = donsker_t_transform(&fam, &pd).within("donsker")?;
            let e = donsker_expectation(&fam, *eta_eta).within("donsker")?;
            let mix = FHDensity::new(fam).within("fhdam")?;
            let bound = integrability_bound(&mix, *m, *eta_eta).within("donsker")?;
            let mut report = json!({
                "t_transform_re": t.re,
                "t_transform_im": t.im,
                "expectation": e,
                "bound": bound,
            });
            if let Some(a) = a {
                report["at_a"] = json!(donsker_at_a(&mix, *eta_eta, *a).within("donsker")?);
            }
            ok(report.to_string())
        }
        Command::Check { suite, n, seed } => {
            let families = match &cfg.params {
                Some(p) => vec![p.clone()],
                None => shipped(),
            };
            let opts = SuiteOptions {
                n_samples: n.unwrap_or(match suite {
                    Suite::All => 1_000_000,
                    Suite::Quick => 10_000,
                }),
                seed: *seed,
                ..SuiteOptions::default()
            };
            let mut records: Vec<CheckRecord> = Vec::new();
            for (label, p) in &families {
                let fam = family(p, false)?;
                records.extend(family_suite(label, &fam, &opts).within("oracles")?);
            }
            let success = all_pass(&records);
            let report = json!({ "all_pass": success, "checks": records });
            let stdout = serde_json::to_string_pretty(&report).expect("records serialize");
            Ok(RunOutput { stdout, success })
        }
    }
}

/// Cap the global thread pool from `GWRIGHT_THREADS`.
pub fn configure_threads(var: Option<String>) -> Result<(), UsageError> {
    let Some(v) = var else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| UsageError::new(vec![format!("GWRIGHT_THREADS must be a positive integer, got '{v}'")]))?;
    // A pool that is already initialized keeps its size.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}
