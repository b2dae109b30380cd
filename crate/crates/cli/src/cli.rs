use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use besov_core::besov::{bnorm, seminorm, BesovOptions, Method, SeminormEntry};
use besov_core::decomp::{elementary_decompose, sample_points};
use besov_core::estimates::{EstimateGrid, SuiteOptions};
use besov_core::opcalc::{calc, diag_oracle, gsf_constant, CalcOptions, GsfOptions, OperatorTuple};
use besov_core::quad::{DomainMode, QuadSpec};
use besov_core::repro::reproduce_shifted;
use besov_core::varset::MAX_DIM;
use besov_core::{CalcError, FnExpr, VarSet};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::error::CliError;
use crate::io::read_tuple;
use crate::report::{complex, complex_vec, matrix, omega_value, Format, Report};
use crate::suite::{
    self, check_report, default_fns, estimate_rows, homomorphism_rows, merge_rows, operator_estimate_rows, oracle_rows, qt_rows, row,
    shift_rows, spectral_rows, sum_rows, NamedFn, DEFAULT_SEED,
};

#[derive(Parser, Debug)]
#[command(name = "besov", version, about = "Besov norms, reproducing formulas and the functional calculus for commuting matrix tuples")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DomainArg {
    Mapped,
    Truncated,
}

#[derive(Args, Debug)]
struct Common {
    /// Relative quadrature tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Real-part cutoff of the truncated domain (implies --domain truncated).
    #[arg(long)]
    alpha_max: Option<f64>,
    /// Imaginary-part cutoff of the truncated domain (implies --domain truncated).
    #[arg(long)]
    beta_max: Option<f64>,
    #[arg(long, value_enum)]
    domain: Option<DomainArg>,
    /// Further quadrature settings as `key=value` pairs separated by `;`.
    #[arg(long)]
    quad: Option<String>,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Besov seminorms and the full norm of a function.
    Norm {
        #[arg(long = "fn")]
        func: String,
        #[arg(long)]
        n: usize,
        /// Only this seminorm, as 1-based indices (`1,2`; empty for the sup norm).
        #[arg(long)]
        omega: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Elementary parts `f_Ω` of a function.
    Decompose {
        #[arg(long = "fn")]
        func: String,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Shifted reproducing formula at seeded points.
    Reproduce {
        #[arg(long = "fn")]
        func: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 1e-4)]
        check_tol: f64,
        #[command(flatten)]
        common: Common,
    },
    /// `f(A)` for a commuting tuple.
    Calc {
        #[arg(long = "fn")]
        func: String,
        #[arg(long)]
        matrices: PathBuf,
        #[arg(long)]
        n: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Square-function constants of a tuple.
    Gsf {
        #[arg(long)]
        matrices: PathBuf,
        /// One subset as 1-based indices; all nonempty subsets when absent.
        #[arg(long)]
        omega: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Consistency checks; exit 1 when any row fails.
    Verify {
        #[arg(long, value_enum)]
        suite: SuiteArg,
        #[arg(long)]
        matrices: Option<PathBuf>,
        /// `default` or functions separated by `;`.
        #[arg(long, default_value = "default")]
        fns: String,
        /// Dimension of the functions (merge only; defaults to the tuple size).
        #[arg(long)]
        n: Option<usize>,
        /// Check tolerance; each suite has its own default.
        #[arg(long)]
        check_tol: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Bound-versus-norm comparisons over the parameter grid.
    Estimate {
        /// Adds the operator-norm versions for this tuple.
        #[arg(long)]
        matrices: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-2)]
        check_tol: f64,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Homomorphism,
    Shift,
    Merge,
    Sum,
    Spectral,
    Qt,
    Oracle,
    Estimates,
    Acceptance,
}

impl Common {
    /// `base`, then `--quad`, then the dedicated flags.
    fn quad(&self, base: &QuadSpec) -> Result<QuadSpec, CliError> {
        let mut q = match &self.quad {
            Some(extra) => QuadSpec::from_text(&format!("{}\n{}", base.to_text(), extra))?,
            None => base.clone(),
        };
        if let Some(t) = self.tol {
            q.rel_tol = t;
        }
        if let Some(a) = self.alpha_max {
            q.alpha_max = a;
            q.domain = DomainMode::Truncated;
        }
        if let Some(b) = self.beta_max {
            q.beta_max = b;
            q.domain = DomainMode::Truncated;
        }
        match self.domain {
            Some(DomainArg::Mapped) => q.domain = DomainMode::Mapped,
            Some(DomainArg::Truncated) => q.domain = DomainMode::Truncated,
            None => {}
        }
        q.validate()?;
        Ok(q)
    }

    fn format(&self) -> Format {
        match self.format {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
        }
    }
}

fn check_n(n: usize) -> Result<usize, CliError> {
    if n == 0 || n > MAX_DIM {
        return Err(CliError::Usage(format!("--n must lie in 1..={MAX_DIM}, got {n}")));
    }
    Ok(n)
}

/// `1,3` / `{1,3}` / `[1,3]` with 1-based indices; empty for `∅`.
pub fn parse_omega(text: &str, n: usize) -> Result<VarSet, CliError> {
    let inner = text.trim().trim_start_matches(['{', '[']).trim_end_matches(['}', ']']);
    let mut o = VarSet::EMPTY;
    for part in inner.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let j: usize = part.parse().map_err(|_| CliError::Usage(format!("--omega: '{part}' is not an index")))?;
        if j == 0 || j > n {
            return Err(CliError::Usage(format!("--omega: index {j} outside 1..={n}")));
        }
        o = o.with(j - 1);
    }
    Ok(o)
}

fn parse_fn(text: &str, n: usize) -> Result<FnExpr, CliError> {
    Ok(FnExpr::parse(text, Some(n))?)
}

fn parse_fns(text: &str, n: usize) -> Result<Vec<NamedFn>, CliError> {
    if text.trim() == "default" {
        return Ok(default_fns(n));
    }
    let fns: Vec<NamedFn> = text
        .split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|s| NamedFn::parse(s, n).map_err(CliError::from))
        .collect::<Result<_, _>>()?;
    if fns.is_empty() {
        return Err(CliError::Usage("--fns is empty".into()));
    }
    Ok(fns)
}

fn tuple_for(path: &std::path::Path, n: Option<usize>) -> Result<OperatorTuple, CliError> {
    let t = read_tuple(path)?;
    if let Some(n) = n {
        if n != t.n() {
            return Err(CliError::Usage(format!("--n {n} but {} holds {} matrices", path.display(), t.n())));
        }
    }
    Ok(t)
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Sup => "sup",
        Method::Zero => "zero",
        Method::Factorized => "factorized",
        Method::Generic => "generic",
    }
}

fn seminorm_row(e: &SeminormEntry) -> Vec<serde_json::Value> {
    vec![omega_value(e.omega), json!(e.value), json!(e.err_est), json!(e.converged), json!(e.diverging), json!(method_name(e.method))]
}

/// A computed report and its exit code.
type Outcome = (Report, i32);

fn cmd_norm(func: &str, n: usize, omega: Option<&str>, c: &Common) -> Result<Outcome, CliError> {
    let n = check_n(n)?;
    let f = parse_fn(func, n)?;
    let opts = BesovOptions::with_quad(c.quad(&BesovOptions::default().quad)?);
    let mut rep = Report::new("norm", c.seed, &opts.quad, &["omega", "value", "err_est", "converged", "diverging", "method"]);
    rep.set("fn", f.to_string());
    rep.set("n", n);
    let converged = match omega {
        Some(text) => {
            let o = parse_omega(text, n)?;
            let e = seminorm(&f, o, &opts)?;
            rep.push(seminorm_row(&e));
            e.converged
        }
        None => {
            let r = bnorm(&f, &opts)?;
            for e in &r.entries {
                rep.push(seminorm_row(e));
            }
            let b0_err = r.entry(VarSet::full(n)).map_or(0.0, |e| e.err_est);
            rep.set("b0", r.b0);
            rep.set("b0_err_est", b0_err);
            rep.set("hinfty", r.hinfty);
            rep.set("total", r.total);
            rep.set("total_err_est", r.err_est);
            rep.set("diverging", r.diverging());
            r.converged()
        }
    };
    rep.set("converged", converged);
    Ok((rep, if converged { 0 } else { 1 }))
}

const RECONSTRUCTION_TOL: f64 = 1e-9;

fn cmd_decompose(func: &str, n: usize, c: &Common) -> Result<Outcome, CliError> {
    let n = check_n(n)?;
    let f = parse_fn(func, n)?;
    let quad = c.quad(&QuadSpec::default())?;
    let dec = elementary_decompose(&f);
    let mut rep = Report::new("decompose", c.seed, &quad, &["omega", "expr"]);
    for (o, part) in &dec.parts {
        rep.push(vec![omega_value(*o), json!(part.to_string())]);
    }
    let worst = sample_points(n, 50, c.seed).iter().map(|z| (dec.eval(z) - f.eval_closed(z)).norm()).fold(0.0, f64::max);
    rep.set("fn", f.to_string());
    rep.set("n", n);
    rep.set("parts", dec.parts.len());
    rep.set("reconstruction_max_error", worst);
    rep.set("reconstruction_points", 50);
    rep.check(worst <= RECONSTRUCTION_TOL);
    let code = rep.exit_code();
    Ok((rep, code))
}

fn cmd_reproduce(func: &str, n: usize, samples: usize, check_tol: f64, c: &Common) -> Result<Outcome, CliError> {
    let n = check_n(n)?;
    let f = parse_fn(func, n)?;
    let quad = c.quad(&QuadSpec::default())?;
    let mut rep = Report::new("reproduce", c.seed, &quad, &["z", "t", "lhs", "rhs", "gap", "err_est", "pass"]);
    rep.pass = Some(true);
    rep.set("fn", f.to_string());
    rep.set("check_tol", check_tol);
    let zs = sample_points(n, samples, c.seed);
    let ts = sample_points(n, samples, c.seed.wrapping_add(1));
    for (z, tp) in zs.iter().zip(&ts) {
        let t: Vec<f64> = tp.iter().map(|x| x.re / 2.5).collect();
        let r = reproduce_shifted(&f, z, &t, &quad)?;
        let ok = r.gap <= check_tol;
        rep.push(vec![complex_vec(z), json!(t), complex(r.lhs), complex(r.rhs), json!(r.gap), json!(r.err_est), json!(ok)]);
        rep.check(ok);
    }
    let code = rep.exit_code();
    Ok((rep, code))
}

fn cmd_calc(func: &str, path: &std::path::Path, n: Option<usize>, c: &Common) -> Result<Outcome, CliError> {
    let t = tuple_for(path, n)?;
    let f = parse_fn(func, t.n())?;
    let opts = CalcOptions { quad: c.quad(&CalcOptions::default().quad)?, ..CalcOptions::default() };
    let r = calc(&f, &t, &opts)?;
    let mut rep = Report::new("calc", c.seed, &opts.quad, &["omega", "err_est", "converged", "n_evals"]);
    for p in &r.parts {
        rep.push(vec![omega_value(p.omega), json!(p.err_est), json!(p.converged), json!(p.n_evals)]);
    }
    rep.set("fn", f.to_string());
    rep.set("n", 1);
    rep.set("dim", t.dim());
    rep.set("matrices", json!([matrix(&r.value)]));
    rep.set("err_est", r.err_est);
    rep.set("norm_err_est", r.norm_err());
    rep.set("converged", r.converged);
    match diag_oracle(&f, &t) {
        Ok(o) => {
            rep.set("oracle_gap", besov_core::linalg::norm_2(&(&r.value - &o)));
        }
        Err(CalcError::NotDiagonalizable(_)) => {}
        Err(e) => return Err(e.into()),
    }
    Ok((rep, if r.converged { 0 } else { 1 }))
}

fn cmd_gsf(path: &std::path::Path, omega: Option<&str>, c: &Common) -> Result<Outcome, CliError> {
    let t = read_tuple(path)?;
    let opts = GsfOptions { quad: c.quad(&GsfOptions::default().quad)?, seed: c.seed, ..GsfOptions::default() };
    let sets = match omega {
        Some(text) => {
            let o = parse_omega(text, t.n())?;
            if o.is_empty() {
                return Err(CliError::Usage("--omega must be nonempty for gsf".into()));
            }
            vec![o]
        }
        None => VarSet::all(t.n()).into_iter().filter(|o| !o.is_empty()).collect(),
    };
    let mut rep = Report::new("gsf", c.seed, &opts.quad, &["omega", "gamma_upper", "gamma_lower", "alpha_at", "err_est", "converged", "n_alpha"]);
    rep.set("n", t.n());
    rep.set("dim", t.dim());
    rep.set("alpha_points", opts.alpha_points);
    rep.set("alpha_lo", opts.alpha_lo);
    rep.set("alpha_hi", opts.alpha_hi);
    rep.set("pairs", opts.pairs);
    let mut converged = true;
    for o in sets {
        let g = gsf_constant(&t, o, &opts)?;
        converged &= g.converged;
        rep.push(vec![
            omega_value(o),
            json!(g.gamma_upper),
            json!(g.gamma_lower),
            json!(g.alpha_at),
            json!(g.err_est),
            json!(g.converged),
            json!(g.n_alpha),
        ]);
    }
    rep.set("converged", converged);
    Ok((rep, if converged { 0 } else { 1 }))
}

fn need_tuple(path: Option<&PathBuf>, suite: SuiteArg) -> Result<OperatorTuple, CliError> {
    let p = path.ok_or_else(|| CliError::Usage(format!("--suite {suite:?} needs --matrices").to_lowercase()))?;
    read_tuple(p)
}

fn cmd_verify(suite: SuiteArg, matrices: Option<&PathBuf>, fns: &str, n: Option<usize>, check_tol: Option<f64>, c: &Common) -> Result<Outcome, CliError> {
    let opts = CalcOptions { quad: c.quad(&CalcOptions::default().quad)?, ..CalcOptions::default() };
    let name = format!("verify-{suite:?}").to_lowercase();
    let mut rep = check_report(&name, c.seed, &opts);
    if let Some(p) = matrices {
        rep.set("matrices", p.display().to_string());
    }
    let label = "input";
    match suite {
        SuiteArg::Acceptance => {
            for o in suite::run_all(c.seed) {
                let failed = o.report.rows.iter().filter(|r| r[5] == json!(false)).count();
                row(&mut rep, &format!("criterion {}", o.id), o.title, failed as f64, 0.0, 0.0);
                if o.report.summary.contains_key("error") {
                    rep.check(false);
                }
            }
        }
        SuiteArg::Estimates => {
            let tol = check_tol.unwrap_or(1e-2);
            let besov = BesovOptions::with_quad(c.quad(&BesovOptions::default().quad)?);
            estimate_rows(&mut rep, &EstimateGrid::default(), &besov, tol)?;
            if let Some(p) = matrices {
                let t = read_tuple(p)?;
                let sopts = SuiteOptions { besov, gsf: GsfOptions { seed: c.seed, ..GsfOptions::default() }, calc: opts.clone() };
                operator_estimate_rows(&mut rep, label, &t, &sopts, tol)?;
            }
        }
        SuiteArg::Sum => {
            let t = need_tuple(matrices, suite)?;
            sum_rows(&mut rep, label, &t, &parse_fns(fns, 1)?, &opts, check_tol.unwrap_or(1e-3))?;
        }
        SuiteArg::Merge => {
            let t = need_tuple(matrices, suite)?;
            let fn_n = check_n(n.unwrap_or(t.n()))?;
            if fn_n < t.n() {
                return Err(CliError::Usage(format!("merge needs --n >= {} so that the variable map is onto", t.n())));
            }
            merge_rows(&mut rep, label, &t, &parse_fns(fns, fn_n)?, &opts, check_tol.unwrap_or(1e-3))?;
        }
        _ => {
            let t = need_tuple(matrices, suite)?;
            if let Some(n) = n {
                if n != t.n() {
                    return Err(CliError::Usage(format!("--n {n} but the tuple has {} matrices", t.n())));
                }
            }
            let fam = parse_fns(fns, t.n())?;
            match suite {
                SuiteArg::Homomorphism => homomorphism_rows(&mut rep, label, &t, &fam, &opts, check_tol.unwrap_or(1e-3))?,
                SuiteArg::Shift => shift_rows(&mut rep, label, &t, &fam, &opts, check_tol.unwrap_or(1e-3))?,
                SuiteArg::Spectral => spectral_rows(&mut rep, label, &t, &fam, &opts, check_tol.unwrap_or(1e-3))?,
                SuiteArg::Oracle => oracle_rows(&mut rep, label, &t, &fam, &opts, check_tol.unwrap_or(1e-3))?,
                SuiteArg::Qt => {
                    for nf in &fam {
                        qt_rows(&mut rep, label, &t, nf, &opts, check_tol.unwrap_or(2e-3))?;
                    }
                }
                _ => unreachable!("handled above"),
            }
        }
    }
    let code = rep.exit_code();
    Ok((rep, code))
}

fn cmd_estimate(matrices: Option<&PathBuf>, check_tol: f64, c: &Common) -> Result<Outcome, CliError> {
    let besov = BesovOptions::with_quad(c.quad(&BesovOptions::default().quad)?);
    let mut rep = Report::new("estimate", c.seed, &besov.quad, &["lemma", "params", "bound", "empirical", "err_est", "ratio", "pass"]);
    rep.pass = Some(true);
    rep.set("check_tol", check_tol);
    let push = |rep: &mut Report, b: &besov_core::estimates::BoundReport| {
        let ok = b.holds(check_tol);
        rep.push(vec![json!(b.family), json!(b.params_text()), json!(b.bound), json!(b.empirical), json!(b.err_est), json!(b.ratio), json!(ok)]);
        rep.check(ok);
    };
    for b in besov_core::estimates::estimate_matrix(&EstimateGrid::default(), &besov)? {
        push(&mut rep, &b);
    }
    if let Some(p) = matrices {
        let t = read_tuple(p)?;
        let calc_quad = c.quad(&CalcOptions::default().quad)?;
        let sopts = SuiteOptions {
            besov,
            gsf: GsfOptions { seed: c.seed, ..GsfOptions::default() },
            calc: CalcOptions { quad: calc_quad, ..CalcOptions::default() },
        };
        for b in besov_core::estimates::operator_estimate_suite(&t, &besov_core::estimates::SuiteParams::default(), &sopts)? {
            push(&mut rep, &b);
        }
    }
    let code = rep.exit_code();
    Ok((rep, code))
}

fn dispatch(cmd: &Command) -> Result<(Outcome, Format), CliError> {
    Ok(match cmd {
        Command::Norm { func, n, omega, common } => (cmd_norm(func, *n, omega.as_deref(), common)?, common.format()),
        Command::Decompose { func, n, common } => (cmd_decompose(func, *n, common)?, common.format()),
        Command::Reproduce { func, n, samples, check_tol, common } => (cmd_reproduce(func, *n, *samples, *check_tol, common)?, common.format()),
        Command::Calc { func, matrices, n, common } => (cmd_calc(func, matrices, *n, common)?, common.format()),
        Command::Gsf { matrices, omega, common } => (cmd_gsf(matrices, omega.as_deref(), common)?, common.format()),
        Command::Verify { suite, matrices, fns, n, check_tol, common } => {
            (cmd_verify(*suite, matrices.as_ref(), fns, *n, *check_tol, common)?, common.format())
        }
        Command::Estimate { matrices, check_tol, common } => (cmd_estimate(matrices.as_ref(), *check_tol, common)?, common.format()),
    })
}

/// Parses `argv` (program name first), writes the report to `out` and
/// diagnostics to `err`, and returns the exit code.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            let code = e.exit_code();
            let sink: &mut dyn Write = if code == 0 { out } else { err };
            let _ = write!(sink, "{text}");
            return code;
        }
    };
    let result = dispatch(&cli.command).and_then(|((rep, code), fmt)| Ok((rep.render(fmt)?, code)));
    match result {
        Ok((text, code)) => {
            if out.write_all(text.as_bytes()).is_err() {
                return 1;
            }
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}
