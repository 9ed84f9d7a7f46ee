//! The `ptorus` command line: normalize, eg, complexes, verify, solve and
//! render.  Options may also come from a flat TOML file given with
//! `--config`; flags win over the file.  Every failure ends with one JSON
//! line on stdout and a nonzero exit code.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::complexes::{build_cw_prime, build_delta_direct, ColoredComplex, LayeredComplex, Window};
use crate::geometry::{build_triangulation, develop_cusp, solve_shapes, SOLVER_MAX_ITER, SOLVER_TOL};
use crate::monodromy::Monodromy;
use crate::ogroup::EgSystem;
use crate::render::{build_scene, emit_scene_document, emit_svg, Style};
use crate::verify::{complex_window, lemma_window, run_suite, Suite};

/// Exit code of a violated invariant or failed check.
pub const EXIT_FAILURE: i32 = 1;
/// Exit code of unusable input (flags, word, window, config).
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "ptorus", version, about = "Cusp triangulations and tessellations of punctured-torus bundles")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Canonical rotation, period and trace of a monodromy word
    Normalize(Common),
    /// One elliptic generator P(m,n) or Q(m,n), or both slopes
    Eg(EgArgs),
    /// Build Δ* and CW* on a window and report their sizes
    Complexes(Common),
    /// Run the verification suites
    Verify(VerifyArgs),
    /// Solve the gluing equations and develop the cusp
    Solve(SolveArgs),
    /// Write the Δ/CW picture of a window as SVG or a JSON scene
    Render(RenderArgs),
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// monodromy word, e.g. RLLRRRLLLL or R^2L^3
    #[arg(long)]
    pub word: Option<String>,
    /// row window A:B
    #[arg(long, allow_hyphen_values = true)]
    pub nwin: Option<String>,
    /// block window C:D
    #[arg(long, allow_hyphen_values = true)]
    pub mwin: Option<String>,
    /// flat TOML file with the same keys
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// machine-readable output
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
pub enum EgOp {
    P,
    Q,
    Slope,
}

#[derive(Debug, Clone, Args)]
pub struct EgArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_enum, ignore_case = true)]
    pub op: EgOp,
    #[arg(long, allow_hyphen_values = true)]
    pub m: i64,
    #[arg(long, allow_hyphen_values = true)]
    pub n: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SuiteArg {
    Lemmas,
    Roundtrip,
    All,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_enum)]
    pub suite: Option<SuiteArg>,
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub max_iter: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct RenderArgs {
    #[command(flatten)]
    pub common: Common,
    /// output file; `.json` writes the scene document, anything else SVG
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub max_iter: Option<usize>,
}

/// The config file: flat keys, style colours included.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub word: Option<String>,
    pub nwin: Option<String>,
    pub mwin: Option<String>,
    pub tol: Option<f64>,
    pub max_iter: Option<usize>,
    pub suite: Option<SuiteArg>,
    pub out: Option<PathBuf>,
    pub json: Option<bool>,
    pub white_fill: Option<String>,
    pub gray_fill: Option<String>,
    pub delta_stroke: Option<String>,
    pub cw_stroke: Option<String>,
}

/// A failure with its JSON record.
#[derive(Debug)]
struct Failure {
    code: i32,
    record: Value,
}

fn usage(kind: &str, message: impl ToString) -> Failure {
    Failure { code: EXIT_USAGE, record: json!({ "status": "error", "kind": kind, "message": message.to_string() }) }
}

fn failed(kind: &str, message: impl ToString, extra: Value) -> Failure {
    let mut record = json!({ "status": "fail", "kind": kind, "message": message.to_string() });
    if let (Value::Object(r), Value::Object(e)) = (&mut record, extra) {
        r.extend(e);
    }
    Failure { code: EXIT_FAILURE, record }
}

fn parse_range(text: &str, what: &str) -> Result<(i64, i64), Failure> {
    let bad = || usage("window", format!("{what} must look like A:B with A ≤ B, got {text:?}"));
    let (a, b) = text.split_once(':').ok_or_else(bad)?;
    let (a, b): (i64, i64) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
    if a > b {
        return Err(bad());
    }
    Ok((a, b))
}

/// Flags merged over the config file.
struct Settings {
    mon: Monodromy,
    nwin: Option<(i64, i64)>,
    mwin: Option<(i64, i64)>,
    json: bool,
    file: Config,
}

impl Settings {
    fn load(c: &Common) -> Result<Settings, Failure> {
        let file = match &c.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| usage("config", format!("{}: {e}", path.display())))?;
                toml::from_str::<Config>(&text).map_err(|e| usage("config", e.to_string().trim_end()))?
            }
            None => Config::default(),
        };
        let word = c.word.clone().or(file.word.clone()).ok_or_else(|| usage("word", "no --word given"))?;
        let mon = Monodromy::from_text(&word).map_err(|e| usage("word", e))?;
        let nwin = c.nwin.clone().or(file.nwin.clone()).map(|t| parse_range(&t, "--nwin")).transpose()?;
        let mwin = c.mwin.clone().or(file.mwin.clone()).map(|t| parse_range(&t, "--mwin")).transpose()?;
        let json = c.json || file.json.unwrap_or(false);
        Ok(Settings { mon, nwin, mwin, json, file })
    }

    /// The requested window, completed from `default`.
    fn window(&self, default: Window) -> Window {
        let (m_lo, m_hi) = self.mwin.unwrap_or((default.m_lo, default.m_hi));
        let (n_lo, n_hi) = self.nwin.unwrap_or((default.n_lo, default.n_hi));
        Window { m_lo, m_hi, n_lo, n_hi }
    }

    fn explicit_window(&self) -> bool {
        self.nwin.is_some() || self.mwin.is_some()
    }

    fn solver(&self, tol: Option<f64>, max_iter: Option<usize>) -> Result<(f64, usize), Failure> {
        let tol = tol.or(self.file.tol).unwrap_or(SOLVER_TOL);
        if !(tol > 0.0) {
            return Err(usage("tol", format!("tolerance must be positive, got {tol}")));
        }
        Ok((tol, max_iter.or(self.file.max_iter).unwrap_or(SOLVER_MAX_ITER)))
    }
}

/// Parses `args` (program name first), runs the command and returns the exit
/// code.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let f = usage("arguments", e.to_string().lines().next().unwrap_or("invalid arguments"));
            let _ = writeln!(out, "{}", f.record);
            return f.code;
        }
    };
    match dispatch(&cli.command, out) {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(out, "{}", f.record);
            f.code
        }
    }
}

fn dispatch(cmd: &Command, out: &mut dyn Write) -> Result<(), Failure> {
    match cmd {
        Command::Normalize(c) => normalize(c, out),
        Command::Eg(a) => eg(a, out),
        Command::Complexes(c) => complexes(c, out),
        Command::Verify(a) => verify(a, out),
        Command::Solve(a) => solve(a, out),
        Command::Render(a) => render(a, out),
    }
}

fn io(e: std::io::Error) -> Failure {
    usage("io", e)
}

fn normalize(c: &Common, out: &mut dyn Write) -> Result<(), Failure> {
    let s = Settings::load(c)?;
    let m = &s.mon;
    if s.json {
        let doc = json!({
            "word": m.word.to_string(),
            "p": m.p(),
            "trace": m.trace.to_string(),
            "matrix": m.matrix.to_string(),
            "sign": m.sign,
            "max_gap": m.max_gap(),
        });
        writeln!(out, "{doc}").map_err(io)
    } else {
        writeln!(out, "word {}\np {}\ntrace {}\nmatrix {}", m.word, m.p(), m.trace, m.matrix).map_err(io)
    }
}

fn eg(a: &EgArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let s = Settings::load(&a.common)?;
    let sys = EgSystem::new(s.mon.clone());
    let (m, n) = (a.m, a.n);
    let doc = match a.op {
        EgOp::P => json!({ "op": "P", "m": m, "n": n, "word": sys.p(m, n).to_string(), "slope": sys.slope_p(m, n) }),
        EgOp::Q => json!({ "op": "Q", "m": m, "n": n, "word": sys.q(m, n).to_string(), "slope": sys.slope_q(m, n) }),
        EgOp::Slope => json!({ "op": "slope", "m": m, "n": n, "slope_p": sys.slope_p(m, n), "slope_q": sys.slope_q(m, n) }),
    };
    if s.json {
        return writeln!(out, "{doc}").map_err(io);
    }
    match a.op {
        EgOp::P | EgOp::Q => {
            let w = doc["word"].as_str().unwrap();
            let shown = if w.is_empty() { "1" } else { w };
            writeln!(out, "{shown}\nslope {}", doc["slope"].as_str().unwrap()).map_err(io)
        }
        EgOp::Slope => writeln!(
            out,
            "slope P {}\nslope Q {}",
            doc["slope_p"].as_str().unwrap(),
            doc["slope_q"].as_str().unwrap()
        )
        .map_err(io),
    }
}

fn check_window(w: Window, mon: &Monodromy, needs_interior: bool) -> Result<(), Failure> {
    if needs_interior && (w.interior_rows(mon).is_none() || w.m_hi - w.m_lo < 2) {
        return Err(usage(
            "window",
            format!(
                "window {w} too small: needs at least 3 blocks and {} rows of margin above and below",
                Window::row_margin(mon)
            ),
        ));
    }
    Ok(())
}

fn summary_layered(lc: &LayeredComplex) -> Value {
    json!({
        "vertices": lc.vertices.len(),
        "core_vertices": lc.vertices.iter().filter(|v| v.core).count(),
        "edges": lc.edges.len(),
        "faces": lc.faces.len(),
        "layers": lc.layers.len(),
    })
}

fn summary_colored(cc: &ColoredComplex) -> Value {
    json!({
        "vertices": cc.vertices.len(),
        "core_vertices": cc.vertices.iter().filter(|v| v.core).count(),
        "edges": cc.edges.len(),
        "faces": cc.faces.len(),
        "lines": cc.lines.len(),
    })
}

fn complexes(c: &Common, out: &mut dyn Write) -> Result<(), Failure> {
    let s = Settings::load(c)?;
    let sys = EgSystem::new(s.mon.clone());
    let w = s.window(complex_window(&s.mon));
    let delta = build_delta_direct(&sys, w);
    let cw = build_cw_prime(&s.mon, w).collapse(&sys).map_err(|e| failed("complex", e, json!({})))?;
    let doc = json!({
        "word": s.mon.word.to_string(),
        "window": w,
        "delta": summary_layered(&delta),
        "cw": summary_colored(&cw),
    });
    if s.json {
        return writeln!(out, "{doc}").map_err(io);
    }
    writeln!(out, "window {w}").map_err(io)?;
    for key in ["delta", "cw"] {
        let parts: Vec<String> =
            doc[key].as_object().unwrap().iter().map(|(k, v)| format!("{k} {v}")).collect();
        writeln!(out, "{key}: {}", parts.join(", ")).map_err(io)?;
    }
    Ok(())
}

fn verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let s = Settings::load(&a.common)?;
    let suite = match a.suite.or(s.file.suite).unwrap_or(SuiteArg::All) {
        SuiteArg::Lemmas => Suite::Lemmas,
        SuiteArg::Roundtrip => Suite::Roundtrip,
        SuiteArg::All => Suite::All,
    };
    let sys = EgSystem::new(s.mon.clone());
    let w = if s.explicit_window() {
        let base = if suite == Suite::Lemmas { lemma_window(&sys) } else { complex_window(&s.mon) };
        let w = s.window(base);
        check_window(w, &s.mon, suite != Suite::Lemmas)?;
        Some(w)
    } else {
        None
    };
    let results = run_suite(&sys, suite, w);
    let failures: Vec<_> = results.iter().filter(|r| !r.passed()).collect();
    if s.json {
        writeln!(out, "{}", json!({ "word": s.mon.word.to_string(), "results": results })).map_err(io)?;
    } else {
        let width = results.iter().map(|r| r.name.chars().count()).max().unwrap_or(0);
        for r in &results {
            let pad = width - r.name.chars().count();
            writeln!(
                out,
                "{}  {}{}  {} checked, {} failed",
                if r.passed() { "PASS" } else { "FAIL" },
                r.name,
                " ".repeat(pad),
                r.checked,
                r.failures
            )
            .map_err(io)?;
        }
    }
    if let Some(first) = failures.first() {
        let names: Vec<&str> = failures.iter().map(|r| r.name.as_str()).collect();
        return Err(failed(
            "verify",
            format!("{} check(s) failed", failures.len()),
            json!({ "word": s.mon.word.to_string(), "failed": names, "first": first }),
        ));
    }
    Ok(())
}

/// `re±imi` with at most 9 decimals and no trailing zeros.
pub fn format_complex(z: Complex64) -> String {
    let im = trim(z.im.abs());
    format!("{}{}{}i", trim(z.re), if z.im < 0.0 && im != "0" { '-' } else { '+' }, im)
}

/// At most 9 decimals, trailing zeros dropped, −0 printed as 0.
pub fn trim(x: f64) -> String {
    let s = format!("{x:.9}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

fn solve(a: &SolveArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let s = Settings::load(&a.common)?;
    let (tol, max_iter) = s.solver(a.tol, a.max_iter)?;
    let sys = EgSystem::new(s.mon.clone());
    let tri = build_triangulation(&s.mon);
    let sol = solve_shapes(&tri, tol, max_iter).map_err(|e| failed("solve", e, json!({})))?;
    let w = s.window(complex_window(&s.mon));
    let dev = develop_cusp(&sys, &sol, w).map_err(|e| failed("develop", e, json!({ "window": w })))?;
    if s.json {
        let doc = json!({
            "word": s.mon.word.to_string(),
            "shapes": sol.shapes.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
            "residual": sol.residual,
            "iterations": sol.iterations,
            "lambda": [dev.lambda.re, dev.lambda.im],
            "lambda_raw": [dev.lambda_raw.re, dev.lambda_raw.im],
            "conjugated": dev.conjugated,
            "max_defect": dev.max_defect,
            "window": w,
            "positions": dev.positions.iter().map(|(&(m, n), z)| json!({ "m": m, "n": n, "z": [z.re, z.im] })).collect::<Vec<_>>(),
        });
        return writeln!(out, "{doc}").map_err(io);
    }
    let shapes: Vec<String> = sol.shapes.iter().map(|z| format_complex(*z)).collect();
    let all_same = shapes.windows(2).all(|w| w[0] == w[1]);
    if all_same && shapes.len() > 1 {
        writeln!(out, "shapes {} ×{}", shapes[0], shapes.len()).map_err(io)?;
    } else {
        writeln!(out, "shapes {}", shapes.join(" ")).map_err(io)?;
    }
    writeln!(out, "residual {:.3e}\niterations {}", sol.residual, sol.iterations).map_err(io)?;
    writeln!(out, "lambda {}\nIm lambda {}", format_complex(dev.lambda), trim(dev.lambda.im)).map_err(io)
}

fn render(a: &RenderArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let s = Settings::load(&a.common)?;
    let (tol, max_iter) = s.solver(a.tol, a.max_iter)?;
    let sys = EgSystem::new(s.mon.clone());
    let w = s.window(Window::standard(&s.mon, 1, 3));
    let sol = solve_shapes(&build_triangulation(&s.mon), tol, max_iter).map_err(|e| failed("solve", e, json!({})))?;
    let dev = develop_cusp(&sys, &sol, w).map_err(|e| failed("develop", e, json!({ "window": w })))?;
    let cw = build_cw_prime(&s.mon, w).collapse(&sys).map_err(|e| failed("complex", e, json!({})))?;
    let scene = build_scene(&s.mon.word.to_string(), &dev, &dev.delta, &cw, w)
        .map_err(|e| failed("render", e, json!({ "window": w })))?;
    let f = &s.file;
    let d = Style::default();
    let style = Style {
        white_fill: f.white_fill.clone().unwrap_or(d.white_fill),
        gray_fill: f.gray_fill.clone().unwrap_or(d.gray_fill),
        delta_stroke: f.delta_stroke.clone().unwrap_or(d.delta_stroke),
        cw_stroke: f.cw_stroke.clone().unwrap_or(d.cw_stroke),
        ..d
    };
    let target = a.out.clone().or(f.out.clone());
    match target {
        Some(path) => {
            let is_json = path.extension().is_some_and(|e| e == "json");
            let bytes = if is_json { emit_scene_document(&scene) } else { emit_svg(&scene, &style) };
            std::fs::write(&path, bytes).map_err(|e| usage("io", format!("{}: {e}", path.display())))?;
            if s.json {
                writeln!(out, "{}", json!({ "written": path, "vertices": scene.vertices.len(), "faces": scene.faces.len() }))
                    .map_err(io)
            } else {
                writeln!(out, "wrote {} ({} vertices, {} cells)", path.display(), scene.vertices.len(), scene.faces.len())
                    .map_err(io)
            }
        }
        None if s.json => out.write_all(&emit_scene_document(&scene)).map_err(io),
        None => out.write_all(&emit_svg(&scene, &style)).map_err(io),
    }
}
