//! Command-line front end: slope specs in, JSON reports and SVG out.

pub mod spec;

use std::collections::BTreeMap;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::{json, Value};

use slopecheck::charcheck::{verdict, CheckOptions, Status};
use slopecheck::coincidence::{
    all_equations_with, coincidence_lattice, enumerate_types, grassmann_point, grassmann_variables, integer_constraints,
    minimize_r, realize, Coincidence, Realization,
};
use slopecheck::geometry::Window;
use slopecheck::groebner::GroebnerLimits;
use slopecheck::patterns::{enumerate_r_patterns, pattern_region, Edge, LiftedPattern};
use slopecheck::poly::{MonomialOrder, Poly};
use slopecheck::rational::{fmt_q, parse_q};
use slopecheck::slope::Slope;
use slopecheck::tiling::{digitize, digitize_random, offset_for_shift};
use slopecheck::{Error, FieldElem, Q};

use crate::spec::{q_strings, SlopeSpec};

#[derive(Parser, Debug)]
#[command(name = "slopecheck", version, about = "Decide whether a quasicrystal slope is characterized by its coincidences")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Grassmann coordinates, Plücker residuals and genericity.
    Info { spec: String },
    /// Canonical projection patch around the origin.
    Digitize {
        spec: String,
        #[arg(long)]
        radius: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        svg: Option<String>,
        #[arg(long)]
        json: Option<String>,
    },
    /// Coincidence types, their lattices and realized coincidences.
    Coincidences { spec: String },
    /// Coincidence equations in the Grassmann coordinates.
    Equations {
        spec: String,
        #[arg(long)]
        parallel: bool,
    },
    /// Full characterization report.
    Verdict {
        spec: String,
        #[arg(long)]
        normalization: Option<String>,
        #[arg(long)]
        parallel: bool,
        #[arg(long, default_value_t = 12)]
        max_degree: u32,
        #[arg(long, default_value_t = 10_000)]
        max_elements: usize,
        /// Include wall-clock timings (makes output run-dependent).
        #[arg(long)]
        timings: bool,
    },
    /// Region of a lifted pattern in the window.
    Regions {
        spec: String,
        #[arg(long)]
        pattern: String,
        #[arg(long)]
        out: Option<String>,
    },
    /// Enumerates r-patterns and their exact regions.
    Rpatterns {
        spec: String,
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
}

/// Result of one invocation.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::ResourceLimit(_) => 2,
        Error::SingularOffset(_) => 3,
        _ => 1,
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            return Outcome { code, stdout: if code == 0 { e.to_string() } else { String::new() }, stderr: if code == 0 { String::new() } else { e.to_string() } };
        }
    };
    match execute(&cli.command) {
        Ok(v) => Outcome { code: 0, stdout: to_pretty(&v), stderr: String::new() },
        Err(e) => {
            let mut msg = format!("error: {e}\n");
            if let Error::SingularOffset(_) = e {
                msg.push_str("hint: perturb the offset, e.g. add 1/1000 to one coordinate, or drop it and pass --seed\n");
            }
            Outcome { code: exit_code(&e), stdout: String::new(), stderr: msg }
        }
    }
}

pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json");
    s.push('\n');
    s
}

fn write_file(path: &str, content: &str) -> slopecheck::Result<()> {
    std::fs::write(path, content).map_err(|e| Error::Parse(format!("{path}: {e}")))
}

fn execute(cmd: &Command) -> slopecheck::Result<Value> {
    match cmd {
        Command::Info { spec } => {
            let sp = SlopeSpec::load(spec)?;
            info(&sp)
        }
        Command::Digitize { spec, radius, seed, svg, json } => {
            let sp = SlopeSpec::load(spec)?;
            let radius = parse_q(radius)?;
            let (report, svg_text, faces) = digitize_report(&sp, &radius, *seed)?;
            if let Some(p) = svg {
                write_file(p, &svg_text?)?;
            }
            if let Some(p) = json {
                write_file(p, &to_pretty(&faces))?;
            }
            Ok(report)
        }
        Command::Coincidences { spec } => coincidences(&SlopeSpec::load(spec)?),
        Command::Equations { spec, parallel } => equations(&SlopeSpec::load(spec)?, threads(*parallel)),
        Command::Verdict { spec, normalization, parallel, max_degree, max_elements, timings } => {
            let sp = SlopeSpec::load(spec)?;
            let opts = CheckOptions {
                normalization: normalization.clone().or_else(|| sp.normalization.clone()),
                limits: GroebnerLimits { max_degree: *max_degree, max_elements: *max_elements },
                threads: threads(*parallel),
            };
            verdict_report(&sp, &opts, *timings)
        }
        Command::Regions { spec, pattern, out } => {
            let sp = SlopeSpec::load(spec)?;
            let text = std::fs::read_to_string(pattern).map_err(|e| Error::Parse(format!("{pattern}: {e}")))?;
            let pat = parse_pattern(&text, sp.n)?;
            let v = region_report(&sp, &pat)?;
            if let Some(p) = out {
                write_file(p, &to_pretty(&v))?;
            }
            Ok(v)
        }
        Command::Rpatterns { spec, r, samples, seed } => {
            let sp = SlopeSpec::load(spec)?;
            rpatterns(&sp, *r, *samples, seed.or(sp.seed).unwrap_or(0))
        }
    }
}

fn threads(parallel: bool) -> usize {
    if parallel {
        std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
    } else {
        1
    }
}

pub fn fe_json(x: &FieldElem) -> Value {
    json!({
        "coeffs": q_strings(x.coeffs()),
        "expr": x.to_poly_string("a"),
        "approx": x.approx(6),
    })
}

fn bigints(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(|x| json!(x.to_string().parse::<i64>().unwrap_or(0))).collect())
}

fn poly_json(p: &Poly, names: &[String]) -> Value {
    json!({
        "text": p.to_string_with(names, MonomialOrder::GrevLex),
        "monomials": p.to_named_map(names),
    })
}

fn header(sp: &SlopeSpec) -> BTreeMap<String, Value> {
    let mut m = BTreeMap::new();
    m.insert("name".into(), json!(sp.name));
    m.insert("spec_sha256".into(), json!(sp.sha256()));
    m
}

fn obj(mut base: BTreeMap<String, Value>, extra: Value) -> Value {
    if let Value::Object(e) = extra {
        for (k, v) in e {
            base.insert(k, v);
        }
    }
    Value::Object(base.into_iter().collect())
}

pub fn info(sp: &SlopeSpec) -> slopecheck::Result<Value> {
    let s = sp.to_slope()?;
    let g = s.grassmann();
    let (generic, witness) = s.is_generic();
    let coords: Vec<Value> = g.iter().map(|(t, x)| json!({ "name": slopecheck::slope::coord_name(s.n(), t), "value": fe_json(x) })).collect();
    let residuals = g.plucker_residuals();
    Ok(obj(
        header(sp),
        json!({
            "n": s.n(),
            "d": s.d(),
            "field": {
                "minpoly": sp.field.minpoly,
                "root_interval": sp.field.root_interval,
                "alpha_approx": FieldElem::alpha(s.field()).approx(12),
            },
            "grassmann": coords,
            "plucker_residuals_vanish": residuals.iter().all(FieldElem::is_zero),
            "plucker_relation_count": residuals.len(),
            "generic": generic,
            "genericity_witness": witness.as_deref().map(bigints),
        }),
    ))
}

type DigitizeOut = (Value, slopecheck::Result<String>, Value);

pub fn digitize_report(sp: &SlopeSpec, radius: &Q, seed: Option<u64>) -> slopecheck::Result<DigitizeOut> {
    let s = sp.to_slope()?;
    let (patch, used_seed) = match (seed, sp.offset_q()?) {
        (None, Some(gamma)) => (digitize(&s, &offset_for_shift(&s, &gamma), radius)?, None),
        (seed, _) => {
            let sd = seed.or(sp.seed).unwrap_or(0);
            (digitize_random(&s, radius, sd)?, Some(sd))
        }
    };
    let freqs: Vec<Value> = patch
        .tile_frequencies()?
        .into_iter()
        .map(|(t, f)| json!({ "tile": t.iter().map(|i| i + 1).collect::<Vec<_>>(), "frequency": fmt_q(&f), "approx": format!("{:.6}", slopecheck::rational::q_to_f64(&f)) }))
        .collect();
    let report = obj(
        header(sp),
        json!({
            "radius": fmt_q(radius),
            "seed": used_seed,
            "offset": patch.offset.iter().map(fe_json).collect::<Vec<_>>(),
            "seed_vertex": patch.seed_vertex,
            "vertex_count": patch.vertices.len(),
            "face_count": patch.faces.len(),
            "tile_frequencies": freqs,
        }),
    );
    let faces = json!({
        "faces": patch.faces.iter().collect::<Vec<_>>(),
        "vertices": patch.vertices.iter().collect::<Vec<_>>(),
    });
    Ok((report, patch.render_svg(), faces))
}

fn coincidence_json(c: &Coincidence) -> Value {
    json!({
        "points": c.points.iter().map(|x| x.iter().map(fe_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "window_point": c.window_point.iter().map(fe_json).collect::<Vec<_>>(),
    })
}

pub fn coincidences(sp: &SlopeSpec) -> slopecheck::Result<Value> {
    let s = sp.to_slope()?;
    let chart = s.chart();
    let mut types = Vec::new();
    for ty in enumerate_types(s.n(), s.d()) {
        let c = integer_constraints(&s, &ty);
        let lattice = coincidence_lattice(&s, &ty)?;
        let mut found = Vec::new();
        for v in &lattice {
            match realize(&s, &ty, v)? {
                Realization::Degenerate => found.push(json!({ "vector": bigints(v), "degenerate": true })),
                Realization::Coincidence(co) => {
                    let (m, r, t) = minimize_r(&co, &chart);
                    found.push(json!({
                        "vector": bigints(v),
                        "degenerate": false,
                        "r": r,
                        "translation": bigints(&t),
                        "coincidence": coincidence_json(&m),
                    }));
                }
            }
        }
        types.push(json!({
            "type": ty.label(),
            "constraints": c.to_rows().iter().map(|r| q_strings(r)).collect::<Vec<_>>(),
            "lattice": lattice.iter().map(|v| bigints(v)).collect::<Vec<_>>(),
            "coincidences": found,
        }));
    }
    Ok(obj(header(sp), json!({ "types": types })))
}

pub fn equations(sp: &SlopeSpec, threads: usize) -> slopecheck::Result<Value> {
    let s = sp.to_slope()?;
    let (_, names) = grassmann_variables(s.n(), s.d());
    let eqs = all_equations_with(&s, threads)?;
    let list: Vec<Value> = eqs
        .iter()
        .map(|e| {
            obj(
                BTreeMap::new(),
                json!({
                    "type": e.equation.ty.label(),
                    "vector": e.equation.vector,
                    "r": e.r,
                    "text": e.equation.poly.to_string_with(&names, MonomialOrder::GrevLex),
                    "monomials": e.equation.poly.to_named_map(&names),
                }),
            )
        })
        .collect();
    Ok(obj(header(sp), json!({ "variables": names, "equations": list })))
}

fn status_name(s: Status) -> &'static str {
    match s {
        Status::CharacterizedByCoincidences => "CharacterizedByCoincidences",
        Status::NotCharacterized => "NotCharacterized",
        Status::NonGenericInput => "NonGenericInput",
    }
}

pub fn verdict_report(sp: &SlopeSpec, opts: &CheckOptions, timings: bool) -> slopecheck::Result<Value> {
    let s = sp.to_slope()?;
    let v = verdict(&s, opts)?;
    let names = &v.variables;
    let r_coincidences: Vec<Value> = v
        .equations
        .iter()
        .filter(|e| e.r.is_some() && e.r == v.r_bound)
        .map(|e| {
            json!({
                "type": e.equation.ty.label(),
                "vector": e.equation.vector,
                "r": e.r,
                "coincidence": e.coincidence.as_ref().map(coincidence_json),
            })
        })
        .collect();
    let family = v.family.as_ref().map(|f| {
        json!({
            "free_variable": names[f.free_variable],
            "value": fmt_q(&f.value),
            "point": f.point.as_ref().map(|p| {
                names.iter().zip(p).map(|(n, x)| (n.clone(), json!(fmt_q(x)))).collect::<serde_json::Map<_, _>>()
            }),
            "basis": f.basis.iter().map(|p| p.to_string_with(names, MonomialOrder::GrevLex)).collect::<Vec<_>>(),
        })
    });
    let univariate: Vec<Value> = v
        .univariate
        .iter()
        .map(|u| {
            json!({
                "variable": names[u.variable],
                "coefficients": q_strings(&u.coefficients),
                "roots": u.roots.iter().map(|(a, b)| json!([fmt_q(a), fmt_q(b)])).collect::<Vec<_>>(),
                "accepted": u.accepted,
            })
        })
        .collect();
    let mut extra = json!({
        "status": status_name(v.status),
        "variables": names,
        "normalization": names[v.normalization],
        "equation_count": v.equations.len(),
        "generators": v.generators.iter().map(|p| p.to_string_with(names, MonomialOrder::GrevLex)).collect::<Vec<_>>(),
        "groebner": v.groebner.iter().map(|p| poly_json(p, names)).collect::<Vec<_>>(),
        "zero_dimensional": v.zero_dimensional,
        "r_bound": v.r_bound,
        "r_coincidences": r_coincidences,
        "genericity_witness": v.genericity_witness.as_deref().map(bigints),
        "family_witness": family,
        "univariate": univariate,
        "normalized_point": names.iter().zip(&v.point).map(|(n, x)| (n.clone(), fe_json(x))).collect::<serde_json::Map<_, _>>(),
    });
    if timings {
        extra["millis"] = json!(v.millis as u64);
    }
    Ok(obj(header(sp), extra))
}

/// Pattern file: `{"edges": [{"vertex": [..], "direction": k}, ..]}` with
/// 1-based directions, or `{"vertices": [[..], ..]}`.
pub fn parse_pattern(text: &str, n: usize) -> slopecheck::Result<LiftedPattern> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let ints = |x: &Value| -> slopecheck::Result<Vec<i64>> {
        let arr = x.as_array().ok_or_else(|| Error::Parse("expected an integer array".into()))?;
        let out: Vec<i64> = arr.iter().map(|e| e.as_i64().ok_or_else(|| Error::Parse("expected integers".into()))).collect::<slopecheck::Result<_>>()?;
        if out.len() != n {
            return Err(Error::Parse(format!("points must have {n} coordinates")));
        }
        Ok(out)
    };
    if let Some(es) = v.get("edges").and_then(Value::as_array) {
        let mut edges = Vec::new();
        for e in es {
            let vertex = ints(e.get("vertex").ok_or_else(|| Error::Parse("edge without vertex".into()))?)?;
            let dir = e.get("direction").and_then(Value::as_u64).ok_or_else(|| Error::Parse("edge without direction".into()))? as usize;
            if dir == 0 || dir > n {
                return Err(Error::Parse(format!("direction must lie in 1..={n}")));
            }
            edges.push(Edge { vertex, direction: dir - 1 });
        }
        let p = LiftedPattern::from_edges(edges);
        if !p.is_connected() {
            return Err(Error::Parse("pattern is not connected".into()));
        }
        return Ok(p);
    }
    if let Some(vs) = v.get("vertices").and_then(Value::as_array) {
        let pts: Vec<Vec<i64>> = vs.iter().map(ints).collect::<slopecheck::Result<_>>()?;
        return Ok(LiftedPattern { vertices: pts.into_iter().collect(), edges: Default::default() });
    }
    Err(Error::Parse("pattern needs \"edges\" or \"vertices\"".into()))
}

pub fn region_report(sp: &SlopeSpec, p: &LiftedPattern) -> slopecheck::Result<Value> {
    let s: Slope = sp.to_slope()?;
    let w = Window::of(&s);
    let reg = pattern_region(&w, p);
    let area = if reg.is_empty() { None } else { Some(fe_json(&reg.volume()?)) };
    Ok(obj(
        header(sp),
        json!({
            "pattern": p,
            "empty": reg.is_empty(),
            "interior_empty": reg.interior_empty(),
            "occurs": !reg.interior_empty(),
            "vertices": reg.vertices().iter().map(|v| v.iter().map(fe_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "area": area,
        }),
    ))
}

pub fn rpatterns(sp: &SlopeSpec, r: usize, samples: usize, seed: u64) -> slopecheck::Result<Value> {
    let s = sp.to_slope()?;
    let w = Window::of(&s);
    let en = enumerate_r_patterns(&w, r, samples, seed)?;
    let pats: Vec<Value> = en
        .regions
        .iter()
        .map(|reg| {
            json!({
                "pattern": reg.pattern,
                "area": fe_json(&reg.volume),
                "pieces": reg.pieces.len(),
            })
        })
        .collect();
    Ok(obj(
        header(sp),
        json!({
            "r": r,
            "samples": samples,
            "seed": seed,
            "count": en.regions.len(),
            "complete": en.complete,
            "window_area": fe_json(&en.window_volume),
            "covered_area": fe_json(&en.covered_volume),
            "patterns": pats,
        }),
    ))
}

/// Grassmann coordinates of a spec's slope (used by reports and tests).
pub fn grassmann_of(sp: &SlopeSpec) -> slopecheck::Result<Vec<FieldElem>> {
    Ok(grassmann_point(&sp.to_slope()?))
}
