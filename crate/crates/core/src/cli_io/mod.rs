//! Command-line front end.
//!
//! Inputs are gluing tables (`[gluings]`, `[curves]`, `[labels]`) or NZ
//! fixtures (`[nz]`, `[c]`, `[labels]`), told apart by their first section.
//! Polynomial lists for `eliminate` use the `gammas`/`normalize`/`identify`/`poly`
//! line format.

use crate::eliminate::{eliminate_gammas, to_ell_m, EliminateError, EliminationOptions, PolySystem};
use crate::farey_dehn::{farey_walk, fill, FillError, Filling, Slope, SlopeError, WalkError};
use crate::numeric_verify::{
    check_change_of_vars, gamma_from_shapes, shape_report, solve_complete, NumericError, ReducedPtolemy,
};
use crate::nz_core::{
    adjust_sign_vector_zero_at, check_nz_properties, parse_nz_fixture, solve_system, NzError, NzSystem, SignVector,
};
use crate::ptolemy_gen::{equations_for, normalize_gamma, PtolemyError, PtolemySystem};
use crate::triangulation::{parse_gluing_table, Triangulation, TriangulationError};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::fmt::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

#[derive(Parser, Debug, Clone)]
#[command(name = "ptolemy", version, about = "Ptolemy equations, NZ matrices and Dehn filling")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Print the NZ matrix and C vector of a triangulation.
    Nz { input: PathBuf },
    /// Check the symplectic properties of an NZ system.
    Check { input: PathBuf },
    /// Solve NZ♭·B = C♭ for the sign vector.
    Sign {
        input: PathBuf,
        /// Make B vanish on the two tetrahedra `t1,t2`.
        #[arg(long, value_parser = parse_pair)]
        zero_at: Option<(usize, usize)>,
    },
    /// Ptolemy equations of every tetrahedron.
    Ptolemy {
        input: PathBuf,
        /// Cusp whose ℓ, m appear in the equations.
        #[arg(long, default_value_t = 0)]
        cusp: usize,
        #[arg(long)]
        normalize: Option<String>,
        /// Emit the polynomial list instead of rendered equations.
        #[arg(long)]
        polys: bool,
    },
    /// Farey walk from an initial triangle to a slope.
    Walk {
        #[arg(long, value_parser = parse_triangle)]
        triangle: [Slope; 3],
        #[arg(long, allow_hyphen_values = true)]
        slope: Slope,
    },
    /// Dehn fill one cusp along a slope or a twist-knot family.
    Fill(FillArgs),
    /// Eliminate the γ variables from a polynomial list.
    Eliminate {
        #[arg(long)]
        input: PathBuf,
        /// Skip the linear substitution pass.
        #[arg(long)]
        no_linear_first: bool,
        /// Print the square-free part.
        #[arg(long)]
        square_free: bool,
        /// Also print the eliminant in ℓ = L², m = M² when possible.
        #[arg(long)]
        ell_m: bool,
    },
    /// Numeric check: complete structure, change of variables, Ptolemy residual.
    Verify {
        input: PathBuf,
        #[arg(long, requires = "slope")]
        cusp: Option<usize>,
        #[arg(long, allow_hyphen_values = true, requires = "cusp")]
        slope: Option<Slope>,
    },
}

#[derive(Args, Debug, Clone)]
pub struct FillArgs {
    pub input: PathBuf,
    #[arg(long)]
    pub cusp: usize,
    #[arg(long, allow_hyphen_values = true, conflicts_with = "twist_knots", required_unless_present = "twist_knots")]
    pub slope: Option<Slope>,
    /// Range `K..K'` of N; fills along 1/N, the twist knots with 2N+1 crossings.
    #[arg(long, value_parser = parse_range)]
    pub twist_knots: Option<(u32, u32)>,
    /// Print Ptolemy equations instead of the filled NZ system.
    #[arg(long)]
    pub ptolemy: bool,
    /// Emit the polynomial list of the filled system.
    #[arg(long, conflicts_with = "ptolemy")]
    pub polys: bool,
    /// γ label to set to 1.
    #[arg(long)]
    pub normalize: Option<String>,
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or("expected t1,t2")?;
    Ok((
        a.trim().parse().map_err(|_| format!("bad index `{a}`"))?,
        b.trim().parse().map_err(|_| format!("bad index `{b}`"))?,
    ))
}

fn parse_triangle(s: &str) -> Result<[Slope; 3], String> {
    let v: Vec<Slope> = s
        .split(',')
        .map(|x| x.parse::<Slope>().map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    v.try_into().map_err(|_| "expected three slopes a,b,c".to_string())
}

fn parse_range(s: &str) -> Result<(u32, u32), String> {
    let (a, b) = s.split_once("..").ok_or("expected K..K'")?;
    let a: u32 = a.trim().parse().map_err(|_| format!("bad bound `{a}`"))?;
    let b: u32 = b.trim().parse().map_err(|_| format!("bad bound `{b}`"))?;
    if a == 0 || a > b {
        return Err(format!("empty or invalid range {a}..{b}"));
    }
    Ok((a, b))
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("io: {path}: {message}")]
    Io { path: String, message: String },
    #[error("triangulation: {0}")]
    Triangulation(#[from] TriangulationError),
    #[error("nz: {0}")]
    Nz(#[from] NzError),
    #[error("ptolemy: {0}")]
    Ptolemy(#[from] PtolemyError),
    #[error("walk: {0}")]
    Walk(#[from] WalkError),
    #[error("slope: {0}")]
    Slope(#[from] SlopeError),
    #[error("fill: {0}")]
    Fill(#[from] FillError),
    #[error("eliminate: {0}")]
    Eliminate(#[from] EliminateError),
    #[error("numeric: {0}")]
    Numeric(#[from] NumericError),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

/// What a command printed and whether its checks held.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub success: bool,
}

impl Outcome {
    fn ok(stdout: String) -> Outcome {
        Outcome { stdout, success: true }
    }

    pub fn exit_code(&self) -> i32 {
        if self.success {
            0
        } else {
            1
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

/// An input file: a gluing table or a bare NZ fixture.
pub enum Input {
    Triangulation(Box<Triangulation>),
    Nz(Box<NzSystem>),
}

impl Input {
    pub fn parse(text: &str) -> Result<Input, CliError> {
        let first = text
            .lines()
            .map(str::trim)
            .find(|l| !l.is_empty() && !l.starts_with('#'));
        if first == Some("[nz]") {
            Ok(Input::Nz(Box::new(parse_nz_fixture(text)?)))
        } else {
            Ok(Input::Triangulation(Box::new(parse_gluing_table(text)?)))
        }
    }

    pub fn system(&self) -> Result<NzSystem, CliError> {
        match self {
            Input::Triangulation(t) => Ok(NzSystem::from_triangulation(t)?),
            Input::Nz(s) => Ok((**s).clone()),
        }
    }

    fn triangulation(&self, what: &str) -> Result<&Triangulation, CliError> {
        match self {
            Input::Triangulation(t) => Ok(t),
            Input::Nz(_) => Err(CliError::Usage(format!("{what} needs a gluing table, not an NZ fixture"))),
        }
    }
}

fn load(path: &Path) -> Result<Input, CliError> {
    Input::parse(&read(path)?)
}

fn json_text(v: Value) -> String {
    let mut s = serde_json::to_string_pretty(&v).expect("json");
    s.push('\n');
    s
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let fmt = cli.format;
    match &cli.command {
        Command::Nz { input } => cmd_nz(&load(input)?, fmt),
        Command::Check { input } => cmd_check(&load(input)?, fmt),
        Command::Sign { input, zero_at } => cmd_sign(&load(input)?, *zero_at, fmt),
        Command::Ptolemy {
            input,
            cusp,
            normalize,
            polys,
        } => cmd_ptolemy(&load(input)?, *cusp, normalize.as_deref(), *polys, fmt),
        Command::Walk { triangle, slope } => cmd_walk(*triangle, *slope, fmt),
        Command::Fill(args) => cmd_fill(&load(&args.input)?, args, fmt),
        Command::Eliminate {
            input,
            no_linear_first,
            square_free,
            ell_m,
        } => {
            let opts = EliminationOptions {
                linear_first: !no_linear_first,
                square_free: *square_free,
                ..Default::default()
            };
            cmd_eliminate(&read(input)?, &opts, *ell_m, fmt)
        }
        Command::Verify { input, cusp, slope } => {
            let target = cusp.zip(*slope);
            cmd_verify(&load(input)?, target, fmt)
        }
    }
}

pub fn cmd_nz(input: &Input, fmt: Format) -> Result<Outcome, CliError> {
    let s = input.system()?;
    Ok(Outcome::ok(match fmt {
        Format::Text => s.to_text(),
        Format::Json => json_text(system_json(&s)),
    }))
}

fn system_json(s: &NzSystem) -> Value {
    let rows: Vec<Value> = s
        .rows()
        .map(|r| json!({ "kind": format!("{:?}", r.kind), "label": r.label, "coeffs": r.coeffs, "c": r.c }))
        .collect();
    let dropped: Vec<&str> = s.dropped.iter().map(|&k| s.edge_rows[k].label.as_str()).collect();
    json!({ "n": s.n, "cusps": s.cusp_count, "rows": rows, "dropped": dropped })
}

pub fn cmd_check(input: &Input, fmt: Format) -> Result<Outcome, CliError> {
    let s = input.system()?;
    let report = check_nz_properties(&s);
    let stdout = match fmt {
        Format::Text => report.to_string(),
        Format::Json => json_text(json!({
            "passed": report.all_passed(),
            "clauses": report.clauses.iter().map(|c| json!({
                "name": c.name, "passed": c.passed, "witness": c.witness,
            })).collect::<Vec<_>>(),
        })),
    };
    Ok(Outcome {
        stdout,
        success: report.all_passed(),
    })
}

pub fn cmd_sign(input: &Input, zero_at: Option<(usize, usize)>, fmt: Format) -> Result<Outcome, CliError> {
    let s = input.system()?;
    let mut b = solve_system(&s)?;
    if let Some((t1, t2)) = zero_at {
        b = adjust_sign_vector_zero_at(&b, &s, t1, t2)?;
    }
    let verified = s.satisfied_by(&b);
    let stdout = match fmt {
        Format::Text => format!("B = {b}\nNZ♭·B = C♭: {}\n", if verified { "ok" } else { "FAIL" }),
        Format::Json => json_text(json!({ "b": b.0, "verified": verified })),
    };
    Ok(Outcome {
        stdout,
        success: verified,
    })
}

fn render_ptolemy(p: &PtolemySystem, polys: bool, fmt: Format) -> String {
    let text = if polys {
        PolySystem::from_ptolemy(p).to_text()
    } else {
        p.render()
    };
    match fmt {
        Format::Text => text,
        Format::Json => json_text(json!({
            "gammas": p.gamma_labels,
            "normalized": p.normalized.iter().map(|&k| &p.gamma_labels[k]).collect::<Vec<_>>(),
            "lines": text.lines().collect::<Vec<_>>(),
        })),
    }
}

pub fn cmd_ptolemy(
    input: &Input,
    cusp: usize,
    normalize: Option<&str>,
    polys: bool,
    fmt: Format,
) -> Result<Outcome, CliError> {
    let s = input.system()?;
    if cusp >= s.cusp_count {
        return Err(CliError::Usage(format!("cusp {cusp} out of range (0..{})", s.cusp_count)));
    }
    let b = solve_system(&s)?;
    let tets: Vec<usize> = (0..s.n).collect();
    let mut p = equations_for(&s, &b, cusp, &tets)?;
    if let Some(label) = normalize {
        normalize_gamma(&mut p, label)?;
    }
    Ok(Outcome::ok(render_ptolemy(&p, polys, fmt)))
}

pub fn cmd_walk(triangle: [Slope; 3], slope: Slope, fmt: Format) -> Result<Outcome, CliError> {
    let w = farey_walk(triangle, slope)?;
    Ok(Outcome::ok(match fmt {
        Format::Text => w.table(),
        Format::Json => {
            let steps: Vec<Value> = w.steps[..w.n()]
                .iter()
                .enumerate()
                .map(|(k, st)| {
                    json!({
                        "k": k, "o": st.o.to_string(), "p": st.p.to_string(),
                        "s": st.s.to_string(), "h": st.h.to_string(),
                        "letter": if k == 0 { None } else { Some(w.word[k - 1].to_string()) },
                    })
                })
                .collect();
            let (p, s) = w.identified();
            json_text(json!({
                "steps": steps,
                "word": w.word_string(),
                "fold": w.fold_edge().to_string(),
                "identify": [p.to_string(), s.to_string()],
            }))
        }
    }))
}

fn fill_one(t: &Triangulation, args: &FillArgs, r: Slope, fmt: Format) -> Result<String, CliError> {
    let f = fill(t, args.cusp, r)?;
    let report = f.check_filled();
    if !report.all_passed() {
        return Err(CliError::Failed(format!("filled system for {r} fails:\n{report}")));
    }
    if args.ptolemy || args.polys {
        let mut p = if args.polys {
            f.filled_ptolemy()?
        } else {
            f.combined_ptolemy()?
        };
        if let Some(label) = &args.normalize {
            normalize_gamma(&mut p, label)?;
        }
        return Ok(render_ptolemy(&p, args.polys, fmt));
    }
    Ok(match fmt {
        Format::Text => {
            let mut out = String::new();
            writeln!(out, "slope {r}  word {}  tetrahedra {}", f.walk.word_string(), f.filled.nz.n).unwrap();
            out.push_str(&f.filled.nz.to_text());
            writeln!(out, "B = {}", f.filled.b).unwrap();
            out
        }
        Format::Json => json_text(json!({
            "slope": r.to_string(),
            "word": f.walk.word_string(),
            "system": system_json(&f.filled.nz),
            "b": f.filled.b.0,
            "tetrahedra": f.filled.tet_names,
        })),
    })
}

/// Runs `jobs` on a worker pool, returning results in input order.
pub fn fan_out<T: Sync, R: Send>(jobs: &[T], work: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let workers = std::thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(jobs.len().max(1));
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<R>>> = Mutex::new((0..jobs.len()).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= jobs.len() {
                    break;
                }
                let r = work(&jobs[i]);
                slots.lock().unwrap()[i] = Some(r);
            });
        }
    });
    slots.into_inner().unwrap().into_iter().map(|r| r.unwrap()).collect()
}

pub fn cmd_fill(input: &Input, args: &FillArgs, fmt: Format) -> Result<Outcome, CliError> {
    let t = input.triangulation("fill")?;
    match (args.slope, args.twist_knots) {
        (Some(r), None) => Ok(Outcome::ok(fill_one(t, args, r, fmt)?)),
        (None, Some((lo, hi))) => {
            let slopes: Vec<Slope> = (lo..=hi).map(|n| Slope::new(1, n as i64).expect("n ≥ 1")).collect();
            let results = fan_out(&slopes, |&r| fill_one(t, args, r, fmt));
            let mut out = String::new();
            let mut success = true;
            for (r, res) in slopes.iter().zip(results) {
                let n = r.q();
                match res {
                    Ok(text) => {
                        if fmt == Format::Text {
                            writeln!(out, "== N = {n}, slope {r}, {} crossings ==", 2 * n + 1).unwrap();
                        }
                        out.push_str(&text);
                    }
                    Err(e) => {
                        success = false;
                        writeln!(out, "== N = {n}, slope {r}: error: {e}").unwrap();
                    }
                }
            }
            Ok(Outcome { stdout: out, success })
        }
        _ => Err(CliError::Usage("give exactly one of --slope and --twist-knots".into())),
    }
}

pub fn cmd_eliminate(text: &str, opts: &EliminationOptions, ell_m: bool, fmt: Format) -> Result<Outcome, CliError> {
    let sys = PolySystem::parse(text)?;
    if sys.polys.is_empty() {
        return Err(CliError::Usage("input has no `poly` lines".into()));
    }
    let e = eliminate_gammas(&sys, opts)?;
    let em = to_ell_m(&e.normalized);
    Ok(Outcome::ok(match fmt {
        Format::Text => {
            let mut out = String::new();
            for line in &e.log {
                writeln!(out, "# {line}").unwrap();
            }
            writeln!(out, "{}", e.normalized.to_text()).unwrap();
            if ell_m {
                if em.halved {
                    writeln!(out, "in ell, m: {}", em.poly.to_text_with(&ell_m_name)).unwrap();
                } else {
                    writeln!(out, "in ell, m: odd exponents present").unwrap();
                }
            }
            out
        }
        Format::Json => json_text(json!({
            "eliminant": e.normalized.to_text(),
            "raw": e.raw.to_text(),
            "extra": e.extra.iter().map(|p| p.to_text()).collect::<Vec<_>>(),
            "ell_m": em.halved.then(|| em.poly.to_text_with(&ell_m_name)),
            "log": e.log,
        })),
    }))
}

fn ell_m_name(i: usize) -> String {
    match i {
        0 => "ell".into(),
        1 => "m".into(),
        k => format!("g{}", k - 2),
    }
}

const CHANGE_OF_VARS_TOL: f64 = 1e-9;

/// Complete structure, then for one-cusped systems the γ reconstruction and
/// the Ptolemy residual at those γ.
pub fn cmd_verify(input: &Input, target: Option<(usize, Slope)>, fmt: Format) -> Result<Outcome, CliError> {
    let (s, b): (NzSystem, Option<SignVector>) = match target {
        Some((cusp, r)) => {
            let f: Filling = fill(input.triangulation("verify --slope")?, cusp, r)?;
            (f.filled.nz.clone(), Some(f.filled.b.clone()))
        }
        None => {
            let s = input.system()?;
            let b = solve_system(&s).ok();
            (s, b)
        }
    };
    let report = shape_report(&s);
    let mut extra = json!(null);
    let mut success = report.converged;
    if let (Ok(sol), Some(b), 1) = (solve_complete(&s), &b, s.cusp_count) {
        let g = gamma_from_shapes(&s, b, &sol.shapes)?;
        let cov = check_change_of_vars(&sol.shapes, &s, b, &g.gamma, g.L, g.M)?;
        let p = crate::ptolemy_gen::ptolemy_equations(&s, b)?;
        let red = ReducedPtolemy::new(&p);
        let x: Vec<_> = red.unknowns.iter().map(|&u| g.gamma[u]).collect();
        let pres = red.relative_residual(&x, g.L, g.M);
        success &= cov.passed(CHANGE_OF_VARS_TOL) && pres < 1e-9;
        extra = json!({
            "change_of_vars": cov,
            "least_squares_residual": g.residual,
            "ptolemy_relative_residual": pres,
            "L": [g.L.re, g.L.im],
            "M": [g.M.re, g.M.im],
        });
    }
    let stdout = match fmt {
        Format::Json => json_text(json!({ "complete": report, "gamma": extra })),
        Format::Text => {
            let mut out = String::new();
            match &report.error {
                Some(e) => writeln!(out, "complete structure: not found ({e})").unwrap(),
                None => {
                    writeln!(
                        out,
                        "complete structure: residual {:.3e}, {} (seed {}, {} iterations)",
                        report.full_residual,
                        if report.geometric { "geometric" } else { "not geometric" },
                        report.seed,
                        report.iterations
                    )
                    .unwrap();
                    for (j, z) in report.shapes.iter().enumerate() {
                        writeln!(out, "z{j} = {:+.12} {:+.12}i", z[0], z[1]).unwrap();
                    }
                }
            }
            if !extra.is_null() {
                writeln!(out, "change of variables: max deviation {:.3e}", extra["change_of_vars"]["max_deviation"].as_f64().unwrap_or(f64::NAN)).unwrap();
                writeln!(out, "ptolemy residual at reconstructed γ: {:.3e}", extra["ptolemy_relative_residual"].as_f64().unwrap_or(f64::NAN)).unwrap();
            }
            writeln!(out, "{}", if success { "ok" } else { "FAIL" }).unwrap();
            out
        }
    };
    Ok(Outcome { stdout, success })
}

/// Parses arguments, runs, prints, and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(out) => {
            print!("{}", out.stdout);
            out.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
