//! The `mixvol` command-line front end.
//!
//! Exit codes: 0 on success, 1 when a check-style command reports that its
//! condition is not met, 2 on input or usage errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::Path;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::bezout::{b2_lower_bound, bezout_form, is_negative, ratio_exceeds_one};
use crate::error::{Error, Result};
use crate::io::{int_vector_to_json, polytope_from_json, read_json_file, scalar_to_json};
use crate::isoperimetric::{classify, excluding_check, facet_ratios, isop, Verdict, EXCLUDING_TOL};
use crate::mixed::{self, Method, MixedValue};
use crate::polytope::VPolytope;
use crate::scalar::{format_scalar, parse_scalar, to_f64, Scalar};
use crate::search::{affine_search, question1_probe, Generator, DEFAULT_RESTARTS};
use crate::special::{
    corner_simplex, cross_polytope, cube, half_ellipsoid_isop, make_body, golden_examples_report, regular_simplex,
    BodyKind, DEFAULT_QUAD_TOL,
};
use crate::wulff::{alexandrov_check, counterexample_construct, pointwise_check, SphereFunction, WulffFamily};

#[derive(Parser, Debug)]
#[command(name = "mixvol", version, about = "Mixed volumes, isoperimetric facet ratios and Bezout forms of polytopes")]
pub struct Cli {
    /// Tolerance for verdicts and floating comparisons.
    #[arg(long, global = true, env = "MIXVOL_TOL")]
    pub tol: Option<f64>,
    /// Maximum number of worker threads.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Shorthand for `--format csv`.
    #[arg(long, global = true)]
    pub csv: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Markdown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Ie,
    Sam,
    Proj,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GeneratorArg {
    Hull,
    Simplex,
    Zonotope,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CheckArg {
    Alexandrov,
    Pointwise,
}

/// Bodies are JSON files (`{"dim", "vertices"}` or `{"kind": ...}`) or the
/// shorthands `C_n`, `O_n`, `Delta_n` and `T_n`.
#[derive(Subcommand, Debug)]
pub enum Command {
    /// Mixed volume of n bodies in R^n.
    Compute {
        #[arg(long, num_args = 1.., required = true)]
        bodies: Vec<String>,
        #[arg(long, value_enum, default_value_t = MethodArg::All)]
        method: MethodArg,
    },
    /// Isop of a body and of its facets.
    Isop {
        body: String,
        /// Include every facet in the output.
        #[arg(long)]
        facets: bool,
    },
    /// Facet-ratio excluding condition, optionally over affine positions.
    Exclude {
        body: String,
        #[arg(long)]
        search_affine: bool,
        #[arg(long, default_value_t = 500)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_RESTARTS)]
        restarts: usize,
    },
    /// Affine search over random polytopes, flagging bodies where it fails.
    Probe {
        #[arg(long, value_enum, default_value_t = GeneratorArg::Hull)]
        generator: GeneratorArg,
        #[arg(long, default_value_t = 3)]
        dim: usize,
        #[arg(long, default_value_t = 8)]
        points: usize,
        #[arg(long, default_value_t = 4)]
        segments: usize,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 200)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Lower bound for the Bezout constant b_2 from segment pairs.
    Bezout {
        body: String,
        #[arg(long, default_value_t = 3)]
        grid: i64,
        #[arg(long, default_value_t = 0)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// F_K(A, B) for explicit bodies.
    BezoutForm { body: String, a: String, b: String },
    /// Wulff perturbation family W(Ω, h_K + t f).
    Wulff {
        body: String,
        #[arg(long)]
        f: String,
        #[arg(long, value_delimiter = ',', default_value = "1/64,1/128,-1/64,-1/128")]
        t_values: Vec<String>,
        #[arg(long, value_enum)]
        check: Option<CheckArg>,
        /// Restrict the pointwise check to one facet normal.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        normal: Option<Vec<i64>>,
    },
    /// Negative Bezout form from a Wulff perturbation against a half-ball.
    Counterexample {
        body: String,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "1,0,0")]
        normal: Vec<i64>,
        #[arg(long, default_value = "1/20")]
        t: String,
        #[arg(long, default_value_t = 200)]
        sphere_res: usize,
    },
    /// Isop of the half-ellipsoid with semi-axes (1, ..., 1, a).
    Ellipsoid {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long)]
        a: f64,
        /// Quadrature tolerance; defaults to `--tol`, then 1e-10.
        #[arg(long = "quad-tol")]
        quad_tol: Option<f64>,
    },
    /// Golden table of closed-form examples.
    Examples {
        #[arg(long, hide = true)]
        paper: bool,
    },
}

/// A tabular view of a command's result, rendered for `csv`/`markdown`.
struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn csv(&self) -> String {
        let mut s = self.header.join(",") + "\n";
        for r in &self.rows {
            s.push_str(&r.iter().map(|c| csv_cell(c)).collect::<Vec<_>>().join(","));
            s.push('\n');
        }
        s
    }

    fn markdown(&self) -> String {
        let mut s = format!("| {} |\n|{}\n", self.header.join(" | "), "---|".repeat(self.header.len()));
        for r in &self.rows {
            s.push_str(&format!("| {} |\n", r.join(" | ")));
        }
        s
    }
}

fn csv_cell(c: &str) -> String {
    if c.contains([',', '"', '\n']) {
        format!("\"{}\"", c.replace('"', "\"\""))
    } else {
        c.to_string()
    }
}

struct Outcome {
    json: Value,
    table: Table,
    /// False when a check did not succeed (exit code 1).
    ok: bool,
}

fn normal_str(a: &[BigInt]) -> String {
    a.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn exact_json(x: &Scalar) -> Value {
    json!({ "exact": format_scalar(x), "approx": to_f64(x) })
}

/// Resolves a body argument: a shorthand or a JSON file.
pub fn load_body(spec: &str) -> Result<VPolytope> {
    if let Some((name, n)) = spec.split_once('_') {
        if let Ok(n) = n.parse::<usize>() {
            match name {
                "C" => return cube(n),
                "O" => return cross_polytope(n),
                "Delta" | "Δ" => return corner_simplex(n),
                "T" => return regular_simplex(n),
                _ => {}
            }
        }
    }
    let v = read_json_file(Path::new(spec))?;
    if v.get("kind").is_some() {
        let kind: BodyKind = serde_json::from_value(v).map_err(|e| Error::Parse(format!("{spec}: {e}")))?;
        make_body(&kind)
    } else {
        polytope_from_json(&v)
    }
}

fn to_json<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

fn compute(bodies: &[String], method: MethodArg) -> Result<Outcome> {
    let loaded: Vec<VPolytope> = bodies.iter().map(|b| load_body(b)).collect::<Result<_>>()?;
    let refs: Vec<&VPolytope> = loaded.iter().collect();
    let (results, discrepancy) = match method {
        MethodArg::All => {
            let cv = mixed::cross_validate(&refs)?;
            (cv.results, cv.max_discrepancy)
        }
        m => {
            let m = match m {
                MethodArg::Ie => Method::InclusionExclusion,
                MethodArg::Sam => Method::SurfaceMeasure,
                _ => Method::SegmentProjection,
            };
            (vec![mixed::compute(&refs, m)?], 0.0)
        }
    };
    let value_json = |v: &MixedValue| match v {
        MixedValue::Exact(x) => exact_json(x),
        MixedValue::Approx(a) => to_json(a),
    };
    let json = json!({
        "anchor": "mixed_volume",
        "value": value_json(&results[0].value),
        "method": results[0].method.to_string(),
        "discrepancy": discrepancy,
        "results": results.iter().map(|r| json!({
            "method": r.method.to_string(),
            "value": value_json(&r.value),
        })).collect::<Vec<_>>(),
        "bodies": results[0].bodies,
    });
    let rows = results.iter().map(|r| vec![r.method.to_string(), format!("{:e}", r.value.to_f64())]).collect();
    Ok(Outcome { json, table: Table { header: vec!["method", "value"], rows }, ok: true })
}

fn facet_table(report: &crate::isoperimetric::IsopReport) -> Table {
    Table {
        header: vec!["facet", "normal", "isop", "ratio"],
        rows: report
            .per_facet
            .iter()
            .map(|f| {
                vec![f.facet.to_string(), normal_str(&f.normal), format!("{:e}", f.isop.value), format!("{:e}", f.ratio.value)]
            })
            .collect(),
    }
}

fn isop_cmd(body: &str, facets: bool) -> Result<Outcome> {
    let k = load_body(body)?;
    let value = isop(&k)?;
    let report = facet_ratios(&k)?;
    let mut json = json!({
        "anchor": "isoperimetric_quotient",
        "isop": value.value,
        "isop_tol": value.tol,
        "max_facet_ratio": report.max_ratio.value,
        "witness_normal": int_vector_to_json(report.witness_normal()),
        "method": "exact_hull_then_float_sqrt",
    });
    if facets {
        json["facets"] = to_json(&report.per_facet);
    }
    Ok(Outcome { json, table: facet_table(&report), ok: true })
}

fn exclude_cmd(body: &str, search: bool, budget: usize, seed: u64, restarts: usize, tol: f64) -> Result<Outcome> {
    let k = load_body(body)?;
    if !search {
        let c = excluding_check(&k, tol)?;
        let report = facet_ratios(&k)?;
        let ok = c.verdict == Verdict::Excluded;
        let mut json = to_json(&c);
        json["anchor"] = json!("facet_isop_excluding_condition");
        return Ok(Outcome { json, table: facet_table(&report), ok });
    }
    let r = affine_search(&k, budget, seed, restarts)?;
    let verdict = classify(r.best_ratio.value, tol);
    let table = Table {
        header: vec!["restart", "evaluation", "ratio", "best_so_far"],
        rows: r
            .trace
            .iter()
            .map(|e| vec![e.restart.to_string(), e.evaluation.to_string(), format!("{:e}", e.ratio), format!("{:e}", e.best_so_far)])
            .collect(),
    };
    let mut json = to_json(&r);
    json["anchor"] = json!("affine_facet_ratio_search");
    json["verdict"] = to_json(&verdict);
    json["tol"] = json!(tol);
    json["method"] = json!("nelder_mead_log_cholesky");
    if let Value::Object(m) = &mut json {
        m.remove("trace");
    }
    Ok(Outcome { json, table, ok: verdict == Verdict::Excluded })
}

#[allow(clippy::too_many_arguments)]
fn probe_cmd(
    g: GeneratorArg,
    dim: usize,
    points: usize,
    segments: usize,
    trials: usize,
    budget: usize,
    seed: u64,
    tol: f64,
) -> Result<Outcome> {
    let generator = match g {
        GeneratorArg::Hull => Generator::Hull { points },
        GeneratorArg::Simplex => Generator::Simplex,
        GeneratorArg::Zonotope => Generator::Zonotope { segments },
    };
    let rep = question1_probe(generator, dim, trials, budget, seed, tol)?;
    let opt = |x: Option<f64>| x.map_or_else(String::new, |v| format!("{v:e}"));
    let table = Table {
        header: vec!["index", "vertices", "facets", "is_simplex", "skipped", "identity_ratio", "best_ratio"],
        rows: rep
            .trials
            .iter()
            .map(|t| {
                vec![
                    t.index.to_string(),
                    t.vertices.to_string(),
                    t.facets.to_string(),
                    t.is_simplex.to_string(),
                    t.skipped.to_string(),
                    opt(t.identity_ratio),
                    opt(t.best_ratio),
                ]
            })
            .collect(),
    };
    let ok = !rep.candidates.is_empty();
    let mut json = to_json(&rep);
    json["anchor"] = json!("non_simplex_affine_ratio_probe");
    Ok(Outcome { json, table, ok })
}

fn witness_row(w: &crate::bezout::BezoutWitness) -> Vec<String> {
    vec![
        format_scalar(&w.f_value),
        w.ratio.as_ref().map_or_else(String::new, format_scalar),
        format!("{:e}", to_f64(&w.f_value)),
    ]
}

fn bezout_cmd(body: &str, grid: i64, budget: usize, seed: u64) -> Result<Outcome> {
    let k = load_body(body)?;
    let b = b2_lower_bound(&k, grid, budget, seed)?;
    let mut row = vec![normal_str(&b.u), normal_str(&b.v)];
    row.extend(witness_row(&b.witness));
    let ok = is_negative(&b.witness);
    let mut json = to_json(&b);
    json["anchor"] = json!("bezout_constant_lower_bound");
    json["method"] = json!("segment_pairs_exact");
    json["negative_form_found"] = json!(ok);
    Ok(Outcome { json, table: Table { header: vec!["u", "v", "f_value", "ratio", "f_value_approx"], rows: vec![row] }, ok })
}

fn bezout_form_cmd(body: &str, a: &str, b: &str) -> Result<Outcome> {
    let (k, a, b) = (load_body(body)?, load_body(a)?, load_body(b)?);
    let w = bezout_form(&a, &b, &k)?;
    let mut json = to_json(&w);
    json["anchor"] = json!("bezout_form");
    json["method"] = json!("inclusion_exclusion");
    json["negative"] = json!(is_negative(&w));
    json["ratio_exceeds_one"] = json!(ratio_exceeds_one(&w));
    Ok(Outcome { json, table: Table { header: vec!["f_value", "ratio", "f_value_approx"], rows: vec![witness_row(&w)] }, ok: true })
}

fn parse_t_values(ts: &[String]) -> Result<Vec<Scalar>> {
    ts.iter().map(|t| parse_scalar(t)).collect()
}

fn wulff_cmd(body: &str, f: &str, t_values: &[String], check: Option<CheckArg>, normal: Option<&[i64]>) -> Result<Outcome> {
    let k = load_body(body)?;
    let f = SphereFunction::from_json(&read_json_file(Path::new(f))?)?;
    let fam = WulffFamily::new(k.clone(), f)?;
    let ts = parse_t_values(t_values)?;
    let n = k.dim();
    let mut sweep = Vec::new();
    let mut rows = Vec::new();
    for t in &ts {
        let w = fam.family_at(t)?;
        let volume = w.volume()?;
        let mut args: Vec<&VPolytope> = vec![&w];
        args.extend(std::iter::repeat_n(&k, n - 1));
        let v1 = mixed::mixed_volume(&args)?;
        rows.push(vec![format_scalar(t), format_scalar(&volume), format_scalar(&v1)]);
        sweep.push(json!({ "t": scalar_to_json(t), "volume": exact_json(&volume), "mixed_volume": exact_json(&v1) }));
    }
    let mut json = json!({
        "anchor": "wulff_family",
        "t_values": sweep,
        "t_min_estimate": fam.t_min_estimate.as_ref().map(scalar_to_json),
        "surface_integral": to_json(&fam.surface_integral()),
    });
    let mut ok = true;
    match check {
        Some(CheckArg::Alexandrov) => {
            let r = alexandrov_check(&fam)?;
            let tol = 1e-8;
            ok = r.volume_rel_error <= tol && r.mixed_rel_error <= tol;
            json["alexandrov"] = to_json(&r);
            json["method"] = json!("lagrange_interpolation_exact");
            json["tol"] = json!(tol);
        }
        Some(CheckArg::Pointwise) => {
            let normals: Vec<Vec<BigInt>> = match normal {
                Some(u) => vec![u.iter().map(|&x| BigInt::from(x)).collect()],
                None => k.facet_normals(),
            };
            let reports = normals.iter().map(|u| pointwise_check(&fam, u, &ts)).collect::<Result<Vec<_>>>()?;
            ok = reports.iter().all(|r| r.all_match);
            json["pointwise"] = to_json(&reports);
            json["method"] = json!("exact_support_quotient");
        }
        None => {}
    }
    Ok(Outcome { json, table: Table { header: vec!["t", "volume", "mixed_volume"], rows }, ok })
}

fn counterexample_cmd(body: &str, normal: &[i64], t: &str, sphere_res: usize) -> Result<Outcome> {
    let k = load_body(body)?;
    let u0: Vec<BigInt> = normal.iter().map(|&x| BigInt::from(x)).collect();
    let t = parse_scalar(t)?;
    let c = counterexample_construct(&k, &u0, &t, sphere_res)?;
    let ok = is_negative(&c.witness);
    let d = &c.diagnostics;
    let table = Table {
        header: vec!["quantity", "value"],
        rows: vec![
            vec!["f_value".into(), format!("{:e}", to_f64(&c.witness.f_value))],
            vec!["facet_isop_ratio".into(), format!("{:e}", d.facet_isop_ratio.value)],
            vec!["c0".into(), format!("{:e}", d.c0.value)],
            vec!["c".into(), format!("{:e}", d.c.value)],
            vec!["sigma_u0".into(), format!("{:e}", d.sigma_u0.value)],
            vec!["sigma_target".into(), format!("{:e}", d.sigma_target)],
        ],
    };
    let mut json = to_json(&c);
    json["anchor"] = json!("wulff_half_ball_counterexample");
    json["method"] = json!("inclusion_exclusion");
    json["negative"] = json!(ok);
    Ok(Outcome { json, table, ok })
}

fn ellipsoid_cmd(n: usize, a: f64, tol: f64) -> Result<Outcome> {
    if n < 2 || a.is_nan() || a < 1.0 {
        return Err(Error::InvalidParameter("ellipsoid needs n ≥ 2 and a ≥ 1".into()));
    }
    let e = half_ellipsoid_isop(n, a, tol)?;
    let mut json = to_json(&e);
    json["anchor"] = json!("half_ellipsoid_isop");
    json["method"] = json!("adaptive_simpson");
    json["n"] = json!(n);
    json["a"] = json!(a);
    json["tol"] = json!(tol);
    let row = vec![
        n.to_string(),
        format!("{a:e}"),
        format!("{:e}", e.lambda.value.value),
        format!("{:e}", e.isop.value),
        format!("{:e}", e.isop_direct.value),
    ];
    Ok(Outcome {
        json,
        table: Table { header: vec!["n", "a", "lambda", "isop", "isop_direct"], rows: vec![row] },
        ok: true,
    })
}

fn examples_cmd() -> Outcome {
    let rows = golden_examples_report();
    let ok = rows.iter().all(|r| r.pass);
    let table = Table {
        header: vec!["example", "pipeline", "closed_form", "abs_error", "tol", "pass"],
        rows: rows
            .iter()
            .map(|r| {
                vec![
                    r.name.clone(),
                    format!("{:.12}", r.pipeline),
                    format!("{:.12}", r.closed_form),
                    format!("{:.3e}", r.abs_error),
                    format!("{:.1e}", r.tol),
                    r.pass.to_string(),
                ]
            })
            .collect(),
    };
    Outcome { json: json!({ "anchor": "closed_form_examples", "rows": to_json(&rows), "all_pass": ok }), table, ok }
}

fn dispatch(cli: &Cli) -> Result<Outcome> {
    let tol = cli.tol.unwrap_or(EXCLUDING_TOL);
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    let mut out = match &cli.command {
        Command::Compute { bodies, method } => compute(bodies, *method)?,
        Command::Isop { body, facets } => isop_cmd(body, *facets)?,
        Command::Exclude { body, search_affine, budget, seed, restarts } => {
            exclude_cmd(body, *search_affine, *budget, *seed, *restarts, tol)?
        }
        Command::Probe { generator, dim, points, segments, trials, budget, seed } => {
            probe_cmd(*generator, *dim, *points, *segments, *trials, *budget, *seed, tol)?
        }
        Command::Bezout { body, grid, budget, seed } => bezout_cmd(body, *grid, *budget, *seed)?,
        Command::BezoutForm { body, a, b } => bezout_form_cmd(body, a, b)?,
        Command::Wulff { body, f, t_values, check, normal } => wulff_cmd(body, f, t_values, *check, normal.as_deref())?,
        Command::Counterexample { body, normal, t, sphere_res } => counterexample_cmd(body, normal, t, *sphere_res)?,
        Command::Ellipsoid { n, a, quad_tol } => ellipsoid_cmd(*n, *a, quad_tol.or(cli.tol).unwrap_or(DEFAULT_QUAD_TOL))?,
        Command::Examples { .. } => examples_cmd(),
    };
    if out.json.get("tol").is_none() {
        out.json["tol"] = json!(tol);
    }
    Ok(out)
}

/// Parses `argv`, runs the command and writes the report; returns the exit
/// code.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 { write!(stdout, "{e}") } else { write!(stderr, "{e}") };
            return code;
        }
    };
    if let Some(j) = cli.jobs {
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global();
    }
    let out = match dispatch(&cli) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return 2;
        }
    };
    let format = if cli.csv { Format::Csv } else { cli.format };
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&out.json).expect("json") + "\n",
        Format::Csv => out.table.csv(),
        Format::Markdown => out.table.markdown(),
    };
    if stdout.write_all(text.as_bytes()).is_err() {
        return 2;
    }
    if out.ok {
        0
    } else {
        1
    }
}
