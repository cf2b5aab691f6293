use serde::Serialize;

use super::bodies::{box_body, corner_simplex, cross_polytope, cube, cylinder, half_ball, regular_simplex};
use super::quadrature::{half_ellipsoid_isop, DEFAULT_QUAD_TOL};
use super::wallis::wallis;
use crate::error::Result;
use crate::isoperimetric::{facet_ratios, isop};
use crate::polytope::VPolytope;
use crate::scalar::{int, ratio};

/// One golden comparison: a value computed by the generic pipeline next to
/// its closed form.
#[derive(Clone, Debug, Serialize)]
pub struct ExampleRow {
    pub name: String,
    pub pipeline: f64,
    pub closed_form: f64,
    pub abs_error: f64,
    pub tol: f64,
    pub pass: bool,
}

impl ExampleRow {
    fn new(name: impl Into<String>, pipeline: f64, closed_form: f64, tol: f64) -> Self {
        let abs_error = (pipeline - closed_form).abs();
        ExampleRow { name: name.into(), pipeline, closed_form, abs_error, tol, pass: abs_error <= tol }
    }
}

fn row(name: String, value: Result<f64>, closed_form: f64, tol: f64) -> ExampleRow {
    ExampleRow::new(name, value.unwrap_or(f64::NAN), closed_form, tol)
}

fn max_ratio(p: Result<VPolytope>) -> Result<f64> {
    Ok(facet_ratios(&p?)?.max_ratio.value)
}

fn top_facet_ratio(p: Result<VPolytope>) -> Result<f64> {
    let r = facet_ratios(&p?)?;
    let top = r.per_facet.iter().find(|f| f.normal.iter().rev().skip(1).all(|x| x.sign() == num_bigint::Sign::NoSign));
    Ok(top.map_or(f64::NAN, |f| f.ratio.value))
}

fn body_isop(p: Result<VPolytope>) -> Result<f64> {
    Ok(isop(&p?)?.value)
}

fn long_box(n: usize) -> Result<VPolytope> {
    let mut sides = vec![int(1); n];
    sides[0] = int(2);
    box_body(&sides)
}

/// Every closed-form isoperimetric value of the polytope examples, pushed
/// through constructors and the isoperimetric pipeline.
pub fn golden_examples_report() -> Vec<ExampleRow> {
    let mut rows = Vec::new();
    for n in 3..=5 {
        rows.push(row(format!("cube n={n} isop"), body_isop(cube(n)), 2.0, 1e-9));
        rows.push(row(format!("cube n={n} max facet ratio"), max_ratio(cube(n)), 1.0, 1e-9));
    }
    for n in 3..=5 {
        let nf = n as f64;
        rows.push(row(format!("box diag(2,1,..) n={n} isop"), body_isop(long_box(n)), 2.0 - 1.0 / nf, 1e-9));
        rows.push(row(
            format!("box diag(2,1,..) n={n} max facet ratio"),
            max_ratio(long_box(n)),
            2.0 / (2.0 - 1.0 / nf),
            1e-9,
        ));
    }
    for n in 3..=4 {
        let nf = n as f64;
        rows.push(row(format!("octahedron n={n} max facet ratio"), max_ratio(cross_polytope(n)), (nf - 1.0).sqrt(), 1e-9));
    }
    for n in 3..=4 {
        let nf = n as f64;
        rows.push(row(format!("corner simplex n={n} isop"), body_isop(corner_simplex(n)), nf + nf.sqrt(), 1e-9));
        rows.push(row(
            format!("corner simplex n={n} max facet ratio"),
            max_ratio(corner_simplex(n)),
            (nf - 1.0 + (nf - 1.0).sqrt()) / (nf + nf.sqrt()),
            1e-9,
        ));
        rows.push(row(format!("regular simplex n={n} isop"), body_isop(regular_simplex(n)), (nf * (nf + 1.0)).sqrt(), 1e-9));
        rows.push(row(
            format!("regular simplex n={n} max facet ratio"),
            max_ratio(regular_simplex(n)),
            ((nf - 1.0) / (nf + 1.0)).sqrt(),
            1e-9,
        ));
    }
    // Cylinder over the unit square with height t: the base facet has
    // ratio t·n/(n-1)·|∂L|/(2|L| + t|∂L|).
    for (p, q) in [(1, 2), (2, 1), (3, 1)] {
        let t = ratio(p, q);
        let tf = p as f64 / q as f64;
        let expected = tf * 1.5 * 4.0 / (2.0 + 4.0 * tf);
        let value = cube(2).and_then(|l| cylinder(&l, &t));
        rows.push(row(format!("square cylinder t={p}/{q} base facet ratio"), top_facet_ratio(value), expected, 1e-9));
    }
    let n = 3;
    let half_ball_limit = 1.0 + 1.0 / (n as f64 * wallis(n).to_f64());
    rows.push(row("half-ball n=3 res=200 isop".into(), body_isop(half_ball(n, 200)), half_ball_limit, 0.05));
    rows.push(row(
        "half-ellipsoid n=3 a=1 isop".into(),
        half_ellipsoid_isop(n, 1.0, DEFAULT_QUAD_TOL).map(|e| e.isop.value),
        1.5,
        1e-8,
    ));
    rows
}

pub fn report_markdown(rows: &[ExampleRow]) -> String {
    let mut s = String::from("| example | pipeline | closed form | abs error | tol | pass |\n|---|---|---|---|---|---|\n");
    for r in rows {
        s.push_str(&format!(
            "| {} | {:.12} | {:.12} | {:.3e} | {:.1e} | {} |\n",
            r.name, r.pipeline, r.closed_form, r.abs_error, r.tol, r.pass
        ));
    }
    s
}

pub fn report_csv(rows: &[ExampleRow]) -> String {
    let mut s = String::from("example,pipeline,closed_form,abs_error,tol,pass\n");
    for r in rows {
        s.push_str(&format!("{},{:e},{:e},{:e},{:e},{}\n", r.name, r.pipeline, r.closed_form, r.abs_error, r.tol, r.pass));
    }
    s
}
