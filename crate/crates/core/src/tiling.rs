//! Canonical projection tilings: selection of unit faces of Z^n whose
//! lift projects into the window, tile frequencies and SVG output.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{add_pts, dot, scale_pt, Location, Point, Window};
use crate::linalg::Matrix;
use crate::numfield::FieldElem;
use crate::rational::{q_to_f64, Q};
use crate::slope::{combinations, Slope};

/// Unit d-face of Z^n: `anchor + Σ_{i ∈ dirs} [0,1] e_i`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Face {
    pub anchor: Vec<i64>,
    pub directions: Vec<usize>,
}

impl Face {
    pub fn corners(&self) -> Vec<Vec<i64>> {
        let d = self.directions.len();
        (0..1usize << d)
            .map(|mask| {
                let mut x = self.anchor.clone();
                for (b, &i) in self.directions.iter().enumerate() {
                    if mask >> b & 1 == 1 {
                        x[i] += 1;
                    }
                }
                x
            })
            .collect()
    }
}

/// Exact window-membership test for lattice points, `x ↦ Lx + o ∈ W`,
/// with a floating point fast path that defers to exact arithmetic near
/// the boundary.
#[derive(Clone, Debug)]
pub struct Selector {
    n: usize,
    window: Window,
    offset: Point,
    /// `coef[k][i] = ν_k · L e_i`
    coef: Vec<Vec<FieldElem>>,
    base: Vec<FieldElem>,
    lo: Vec<FieldElem>,
    hi: Vec<FieldElem>,
    coef_f: Vec<Vec<f64>>,
    base_f: Vec<f64>,
    lo_f: Vec<f64>,
    hi_f: Vec<f64>,
}

impl Selector {
    pub fn new(window: &Window, offset: &Point) -> Self {
        let n = window.generators().len();
        let mut coef = Vec::new();
        let mut base = Vec::new();
        let mut lo = Vec::new();
        let mut hi = Vec::new();
        for (nu, l, h) in window.slabs() {
            coef.push(window.generators().iter().map(|g| dot(nu, g)).collect::<Vec<_>>());
            base.push(dot(nu, offset));
            lo.push(l.clone());
            hi.push(h.clone());
        }
        let coef_f = coef.iter().map(|r| r.iter().map(FieldElem::to_f64).collect()).collect();
        let base_f = base.iter().map(FieldElem::to_f64).collect();
        let lo_f = lo.iter().map(FieldElem::to_f64).collect();
        let hi_f = hi.iter().map(FieldElem::to_f64).collect();
        Selector { n, window: window.clone(), offset: offset.clone(), coef, base, lo, hi, coef_f, base_f, lo_f, hi_f }
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn offset(&self) -> &Point {
        &self.offset
    }

    /// The point `Lx + o` in chart coordinates.
    pub fn project(&self, x: &[i64]) -> Point {
        let f = self.offset[0].field().clone();
        let mut p = self.offset.clone();
        for (i, &xi) in x.iter().enumerate() {
            if xi != 0 {
                p = add_pts(&p, &scale_pt(&self.window.generators()[i], &FieldElem::from_int(&f, xi)));
            }
        }
        p
    }

    fn exact_value(&self, k: usize, x: &[i64]) -> FieldElem {
        let f = self.base[k].field().clone();
        let mut acc = self.base[k].clone();
        for (c, &xi) in self.coef[k].iter().zip(x) {
            if xi != 0 {
                acc = &acc + &(c * &FieldElem::from_int(&f, xi));
            }
        }
        acc
    }

    pub fn locate(&self, x: &[i64]) -> Location {
        debug_assert_eq!(x.len(), self.n);
        let mut boundary = false;
        for k in 0..self.coef.len() {
            let mut v = self.base_f[k];
            let mut scale = self.base_f[k].abs() + self.lo_f[k].abs() + self.hi_f[k].abs() + 1.0;
            for (c, &xi) in self.coef_f[k].iter().zip(x) {
                let t = c * xi as f64;
                v += t;
                scale += t.abs();
            }
            let tol = 1e-9 * scale;
            if v < self.lo_f[k] - tol || v > self.hi_f[k] + tol {
                return Location::Outside;
            }
            if v > self.lo_f[k] + tol && v < self.hi_f[k] - tol {
                continue;
            }
            let e = self.exact_value(k, x);
            let (a, b) = ((&e - &self.lo[k]).sign(), (&self.hi[k] - &e).sign());
            if a < 0 || b < 0 {
                return Location::Outside;
            }
            if a == 0 || b == 0 {
                boundary = true;
            }
        }
        if boundary {
            Location::Boundary
        } else {
            Location::Inside
        }
    }
}

/// Orthonormal coordinates of π(x) in E, in floating point (for radii and
/// rendering only).
#[derive(Clone, Debug)]
pub struct Embedding {
    /// `basis[j][i]`: component i of the j-th orthonormal vector of E.
    basis: Vec<Vec<f64>>,
}

impl Embedding {
    pub fn of(s: &Slope) -> Self {
        let mut basis: Vec<Vec<f64>> = Vec::new();
        for c in 0..s.d() {
            let mut v: Vec<f64> = s.generators().col(c).iter().map(FieldElem::to_f64).collect();
            for b in &basis {
                let p: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
                v.iter_mut().zip(b).for_each(|(x, y)| *x -= p * y);
            }
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v.iter_mut().for_each(|x| *x /= norm);
            basis.push(v);
        }
        Embedding { basis }
    }

    pub fn coords(&self, x: &[i64]) -> Vec<f64> {
        self.basis.iter().map(|b| b.iter().zip(x).map(|(c, &xi)| c * xi as f64).sum()).collect()
    }

    pub fn dist(&self, x: &[i64], y: &[i64]) -> f64 {
        let diff: Vec<i64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
        self.coords(&diff).iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Sum of the lengths of the projected basis vectors.
    pub fn diameter_bound(&self, n: usize) -> f64 {
        (0..n)
            .map(|i| {
                let mut e = vec![0i64; n];
                e[i] = 1;
                self.coords(&e).iter().map(|v| v * v).sum::<f64>().sqrt()
            })
            .sum()
    }
}

/// A finite piece of the canonical projection tiling.
#[derive(Clone, Debug)]
pub struct Patch {
    pub n: usize,
    pub d: usize,
    /// Translation o of the selection rule `Lx + o ∈ W`.
    pub offset: Point,
    pub radius: Q,
    /// Seed of the random offset, when the offset was drawn.
    pub seed: Option<u64>,
    pub seed_vertex: Vec<i64>,
    pub faces: BTreeSet<Face>,
    /// Selected vertices explored while building the patch.
    pub vertices: BTreeSet<Vec<i64>>,
    embedding: Embedding,
}

/// Offset o = −Lγ realizing the tiling of the shifted slope E + γ.
pub fn offset_for_shift(s: &Slope, gamma: &[Q]) -> Point {
    let chart = s.chart();
    let g: Vec<FieldElem> = gamma.iter().map(|x| FieldElem::from_q(s.field(), x.clone())).collect();
    chart.mul_vec(&g).expect("length n").into_iter().map(|x| -x).collect()
}

/// Window center plus a small random rational perturbation.
pub fn random_offset(s: &Slope, window: &Window, seed: u64) -> Point {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let den = 100_003i64;
    let c = window.center();
    c.iter()
        .map(|x| {
            let num = rng.gen_range(-den / 10..=den / 10);
            x + &FieldElem::from_q(s.field(), Q::new(BigInt::from(num), BigInt::from(den)))
        })
        .collect()
}

fn seed_vertex(sel: &Selector, n: usize, emb: &Embedding, near: &[i64]) -> Result<Vec<i64>> {
    let mut best: Option<(f64, Vec<i64>)> = None;
    for reach in 1..=4i64 {
        let width = (2 * reach + 1) as usize;
        let total = width.checked_pow(n as u32).unwrap_or(usize::MAX).min(1 << 20);
        for code in 0..total {
            let mut c = code;
            let x: Vec<i64> = (0..n)
                .map(|i| {
                    let v = (c % width) as i64 - reach;
                    c /= width;
                    near[i] + v
                })
                .collect();
            match sel.locate(&x) {
                Location::Inside => {
                    let dist = emb.dist(&x, near);
                    if best.as_ref().is_none_or(|(d, _)| dist < *d) {
                        best = Some((dist, x));
                    }
                }
                Location::Boundary => return Err(singular(&x)),
                Location::Outside => {}
            }
        }
        if let Some((_, x)) = best {
            return Ok(x);
        }
    }
    Err(Error::SingularOffset("no lattice point projects into the window near the origin".into()))
}

fn singular(x: &[i64]) -> Error {
    Error::SingularOffset(format!("lattice point {x:?} projects onto the window boundary; perturb the offset"))
}

/// Digitizes the slope around the lattice point nearest to `near`
/// (default: the origin) with selection offset `offset`.
pub fn digitize(s: &Slope, offset: &Point, radius: &Q) -> Result<Patch> {
    digitize_near(s, offset, radius, &vec![0; s.n()])
}

pub fn digitize_near(s: &Slope, offset: &Point, radius: &Q, near: &[i64]) -> Result<Patch> {
    let n = s.n();
    let d = s.d();
    let window = Window::of(s);
    let sel = Selector::new(&window, offset);
    let emb = Embedding::of(s);
    let seed = seed_vertex(&sel, n, &emb, near)?;
    let r = q_to_f64(radius).max(0.0);
    let margin = 2.0 * emb.diameter_bound(n) + 1e-9;

    let mut cache: HashMap<Vec<i64>, bool> = HashMap::new();
    let mut selected = |x: &Vec<i64>| -> Result<bool> {
        if let Some(&b) = cache.get(x) {
            return Ok(b);
        }
        let b = match sel.locate(x) {
            Location::Inside => true,
            Location::Outside => false,
            Location::Boundary => return Err(singular(x)),
        };
        cache.insert(x.clone(), b);
        Ok(b)
    };

    let mut visited: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut queue = VecDeque::new();
    visited.insert(seed.clone());
    queue.push_back(seed.clone());
    while let Some(x) = queue.pop_front() {
        for i in 0..n {
            for step in [-1i64, 1] {
                let mut y = x.clone();
                y[i] += step;
                if visited.contains(&y) || emb.dist(&y, &seed) > r + margin {
                    continue;
                }
                if selected(&y)? {
                    visited.insert(y.clone());
                    queue.push_back(y);
                }
            }
        }
    }

    let core: Vec<&Vec<i64>> = visited.iter().filter(|x| emb.dist(x, &seed) <= r + 1e-12).collect();
    let subsets = combinations(n, d);
    let mut faces = BTreeSet::new();
    for y in core {
        for dirs in &subsets {
            for mask in 0..1usize << d {
                let mut anchor = y.clone();
                for (b, &i) in dirs.iter().enumerate() {
                    if mask >> b & 1 == 1 {
                        anchor[i] -= 1;
                    }
                }
                let face = Face { anchor, directions: dirs.clone() };
                if faces.contains(&face) {
                    continue;
                }
                let mut ok = true;
                for c in face.corners() {
                    if !selected(&c)? {
                        ok = false;
                        break;
                    }
                }
                if ok {
                    faces.insert(face);
                }
            }
        }
    }
    Ok(Patch {
        n,
        d,
        offset: offset.clone(),
        radius: radius.clone(),
        seed: None,
        seed_vertex: seed,
        faces,
        vertices: visited,
        embedding: emb,
    })
}

/// Digitizes with a random regular offset, redrawing on boundary hits.
/// The seed that succeeded is recorded in the patch.
pub fn digitize_random(s: &Slope, radius: &Q, seed: u64) -> Result<Patch> {
    let window = Window::of(s);
    let mut last = None;
    for attempt in 0..16u64 {
        let sd = seed.wrapping_add(attempt);
        let o = random_offset(s, &window, sd);
        match digitize(s, &o, radius) {
            Ok(mut p) => {
                p.seed = Some(sd);
                return Ok(p);
            }
            Err(e @ Error::SingularOffset(_)) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

impl Patch {
    pub fn embedding(&self) -> &Embedding {
        &self.embedding
    }

    /// Count of each tile type divided by the number of tiles.
    pub fn tile_frequencies(&self) -> Result<BTreeMap<Vec<usize>, Q>> {
        if self.faces.is_empty() {
            return Err(Error::EmptyPatch);
        }
        let mut counts: BTreeMap<Vec<usize>, i64> = BTreeMap::new();
        for f in &self.faces {
            *counts.entry(f.directions.clone()).or_insert(0) += 1;
        }
        let total = BigInt::from(self.faces.len());
        Ok(counts.into_iter().map(|(k, c)| (k, Q::new(BigInt::from(c), total.clone()))).collect())
    }

    /// One polygon per tile at the projected vertex positions.
    pub fn render_svg(&self) -> Result<String> {
        if self.d != 2 {
            return Err(Error::UnsupportedDimension(self.d));
        }
        let pts: Vec<Vec<Vec<f64>>> = self
            .faces
            .iter()
            .map(|f| {
                let c = f.corners();
                // corners in cyclic order: 00, 10, 11, 01
                [&c[0], &c[1], &c[3], &c[2]].iter().map(|x| self.embedding.coords(x)).collect()
            })
            .collect();
        let (mut xmin, mut ymin, mut xmax, mut ymax) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
        for (k, p) in pts.iter().flatten().enumerate() {
            if k == 0 {
                (xmin, xmax, ymin, ymax) = (p[0], p[0], p[1], p[1]);
            }
            xmin = xmin.min(p[0]);
            xmax = xmax.max(p[0]);
            ymin = ymin.min(p[1]);
            ymax = ymax.max(p[1]);
        }
        let pad = 1.0;
        let mut out = String::new();
        let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{} {} {} {}">"#,
            sig(xmin - pad),
            sig(-ymax - pad),
            sig(xmax - xmin + 2.0 * pad),
            sig(ymax - ymin + 2.0 * pad)
        );
        let palette = ["#e8c170", "#7fb3d5", "#c39bd3", "#76d7c4", "#f1948a", "#aab7b8", "#f7dc6f", "#85c1e9", "#bb8fce", "#82e0aa"];
        let types: Vec<Vec<usize>> = combinations(self.n, self.d);
        for (f, p) in self.faces.iter().zip(&pts) {
            let t = types.iter().position(|t| *t == f.directions).unwrap_or(0);
            let coords: Vec<String> = p.iter().map(|v| format!("{},{}", sig(v[0]), sig(-v[1]))).collect();
            let _ = writeln!(
                out,
                r#"  <polygon points="{}" fill="{}" stroke="black" stroke-width="0.02"/>"#,
                coords.join(" "),
                palette[t % palette.len()]
            );
        }
        out.push_str("</svg>\n");
        Ok(out)
    }

    /// Integer translations t with π't = 0 (period lattice of a rational
    /// slope); empty for irrational slopes.
    pub fn period_candidates(s: &Slope) -> Vec<Vec<BigInt>> {
        if s.field().degree() != 1 {
            return Vec::new();
        }
        let chart = s.chart();
        let rows: Vec<Vec<Q>> = chart.to_rows().iter().map(|r| r.iter().map(|x| x.coeffs()[0].clone()).collect()).collect();
        Matrix::from_rows(rows, &Q::zero()).expect("rectangular").integer_kernel()
    }
}

/// Formats with 12 significant digits, without exponent.
pub fn sig(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return "0".into();
    }
    let e = v.abs().log10().floor() as i32;
    let decimals = (11 - e).max(0) as usize;
    let s = format!("{:.*}", decimals, v);
    let s = if s.contains('.') { s.trim_end_matches('0').trim_end_matches('.').to_string() } else { s };
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

/// Complementary-zonotope test: the face (x, S) is selected iff Lx + o
/// lies in the parallelotope spanned by the generators outside S. Returns
/// `None` when those generators are dependent.
pub fn complementary_test(sel: &Selector, face: &Face) -> Option<Location> {
    let gens = sel.window().generators();
    let comp: Vec<usize> = (0..gens.len()).filter(|i| !face.directions.contains(i)).collect();
    let p = sel.project(&face.anchor);
    let zero = FieldElem::zero(p[0].field());
    let g = Matrix::from_cols(comp.iter().map(|&i| gens[i].clone()).collect(), &zero).ok()?;
    if g.rows() != g.cols() || g.det().ok()?.is_zero() {
        return None;
    }
    let t = g.solve(&p).ok()??;
    let one = FieldElem::one(p[0].field());
    let mut boundary = false;
    for ti in &t {
        let (a, b) = (ti.sign(), (&one - ti).sign());
        if a < 0 || b < 0 {
            return Some(Location::Outside);
        }
        if a == 0 || b == 0 {
            boundary = true;
        }
    }
    Some(if boundary { Location::Boundary } else { Location::Inside })
}
