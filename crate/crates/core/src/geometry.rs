//! Exact polytopes in the window space E' (dimension n − d), expressed in
//! the linear chart of [`Slope::chart`].

use std::cmp::Ordering;
use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::numfield::FieldElem;
use crate::slope::{combinations, Slope};

pub type Point = Vec<FieldElem>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Location {
    Inside,
    Boundary,
    Outside,
}

pub fn dot(a: &[FieldElem], b: &[FieldElem]) -> FieldElem {
    let mut it = a.iter().zip(b);
    let (x, y) = it.next().expect("nonempty vectors");
    it.fold(x * y, |acc, (x, y)| &acc + &(x * y))
}

pub fn add_pts(a: &[FieldElem], b: &[FieldElem]) -> Point {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_pts(a: &[FieldElem], b: &[FieldElem]) -> Point {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale_pt(a: &[FieldElem], s: &FieldElem) -> Point {
    a.iter().map(|x| x * s).collect()
}

/// Scales `v` so that its first nonzero entry is +1; `None` for v = 0.
/// Returns the scaled vector and the positive factor it was divided by.
pub fn canonical_direction(v: &[FieldElem]) -> Option<(Point, FieldElem)> {
    let lead = v.iter().find(|x| !x.is_zero())?;
    let s = lead.abs();
    let inv = s.inv().expect("nonzero");
    Some((scale_pt(v, &inv), s))
}

/// Vector orthogonal to the m − 1 given vectors of R^m (cofactor expansion).
pub fn generalized_cross(vs: &[Point]) -> Point {
    let m = vs.len() + 1;
    let zero = vs.first().map(|v| v[0].zero_like_elem()).expect("at least one vector");
    let mat = Matrix::from_rows(vs.to_vec(), &zero).expect("rectangular");
    let rows: Vec<usize> = (0..m - 1).collect();
    (0..m)
        .map(|j| {
            let cols: Vec<usize> = (0..m).filter(|&c| c != j).collect();
            let det = mat.submatrix(&rows, &cols).det().expect("square");
            if j % 2 == 0 {
                det
            } else {
                -det
            }
        })
        .collect()
}

trait ZeroLike {
    fn zero_like_elem(&self) -> FieldElem;
}

impl ZeroLike for FieldElem {
    fn zero_like_elem(&self) -> FieldElem {
        FieldElem::zero(self.field())
    }
}

/// Half-space `normal · p ≤ offset`.
#[derive(Clone, Debug, PartialEq)]
pub struct HalfSpace {
    pub normal: Point,
    pub offset: FieldElem,
}

impl HalfSpace {
    pub fn new(normal: Point, offset: FieldElem) -> Self {
        HalfSpace { normal, offset }
    }

    pub fn slack(&self, p: &[FieldElem]) -> FieldElem {
        &self.offset - &dot(&self.normal, p)
    }

    pub fn translate(&self, t: &[FieldElem]) -> Self {
        HalfSpace { normal: self.normal.clone(), offset: &self.offset + &dot(&self.normal, t) }
    }

    /// The opposite closed half-space `normal · p ≥ offset`.
    pub fn complement(&self) -> Self {
        HalfSpace { normal: self.normal.iter().map(|x| -x).collect(), offset: -&self.offset }
    }

    fn canonical(&self) -> Option<HalfSpace> {
        let (normal, s) = canonical_direction(&self.normal)?;
        Some(HalfSpace { normal, offset: self.offset.checked_div(&s).expect("nonzero") })
    }
}

/// Merges half-spaces with parallel normals of the same orientation,
/// keeping the tightest one. Zero-normal half-spaces are kept only when
/// infeasible (offset < 0).
pub fn merge_parallel(hs: &[HalfSpace]) -> Vec<HalfSpace> {
    let mut order: Vec<Point> = Vec::new();
    let mut best: HashMap<Point, FieldElem> = HashMap::new();
    let mut infeasible = None;
    for h in hs {
        match h.canonical() {
            None => {
                if h.offset.sign() < 0 {
                    infeasible = Some(h.clone());
                }
            }
            Some(c) => match best.get_mut(&c.normal) {
                Some(o) => {
                    if c.offset.cmp_value(o) == Ordering::Less {
                        *o = c.offset;
                    }
                }
                None => {
                    order.push(c.normal.clone());
                    best.insert(c.normal, c.offset);
                }
            },
        }
    }
    let mut out: Vec<HalfSpace> = order
        .into_iter()
        .map(|n| {
            let o = best.remove(&n).expect("present");
            HalfSpace { normal: n, offset: o }
        })
        .collect();
    out.extend(infeasible);
    out
}

/// Bounded polytope given by half-spaces, with its exact vertex list.
#[derive(Clone, Debug)]
pub struct HPolytope {
    dim: usize,
    halfspaces: Vec<HalfSpace>,
    vertices: Vec<Point>,
}

/// Intersection of half-spaces in dimension `dim` (≤ 3 for vertex
/// enumeration). Parallel constraints are merged and the description made
/// irredundant when the result is full-dimensional. An empty intersection
/// is reported through [`HPolytope::is_empty`].
pub fn intersect_halfspaces(dim: usize, hs: &[HalfSpace]) -> HPolytope {
    let merged = merge_parallel(hs);
    let vertices = enumerate_vertices(dim, &merged);
    let mut p = HPolytope { dim, halfspaces: merged, vertices };
    p.prune();
    p
}

fn enumerate_vertices(dim: usize, hs: &[HalfSpace]) -> Vec<Point> {
    if hs.iter().any(|h| h.normal.iter().all(FieldElem::is_zero)) {
        return Vec::new();
    }
    let mut out: Vec<Point> = Vec::new();
    if hs.len() < dim || dim == 0 {
        return out;
    }
    let zero = hs[0].offset.zero_like_elem();
    for sub in combinations(hs.len(), dim) {
        let rows: Vec<Point> = sub.iter().map(|&i| hs[i].normal.clone()).collect();
        let a = Matrix::from_rows(rows, &zero).expect("rectangular");
        if a.det().expect("square").is_zero() {
            continue;
        }
        let b: Vec<FieldElem> = sub.iter().map(|&i| hs[i].offset.clone()).collect();
        let Some(x) = a.solve(&b).expect("shapes agree") else { continue };
        if hs.iter().all(|h| h.slack(&x).sign() >= 0) && !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

fn affine_rank(points: &[Point]) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    let zero = points[0][0].zero_like_elem();
    let rows: Vec<Point> = points[1..].iter().map(|p| sub_pts(p, &points[0])).collect();
    Matrix::from_rows(rows, &zero).expect("rectangular").rank()
}

impl HPolytope {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn halfspaces(&self) -> &[HalfSpace] {
        &self.halfspaces
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// True iff the polytope is empty or lower-dimensional.
    pub fn interior_empty(&self) -> bool {
        self.vertices.len() <= self.dim || affine_rank(&self.vertices) < self.dim
    }

    fn prune(&mut self) {
        if self.interior_empty() {
            return;
        }
        let dim = self.dim;
        let verts = &self.vertices;
        self.halfspaces.retain(|h| {
            let tight: Vec<Point> = verts.iter().filter(|v| h.slack(v).is_zero()).cloned().collect();
            tight.len() >= dim && affine_rank(&tight) == dim - 1
        });
    }

    pub fn contains(&self, p: &[FieldElem]) -> Location {
        locate(&self.halfspaces, p)
    }

    pub fn intersect(&self, other: &HPolytope) -> HPolytope {
        let mut hs = self.halfspaces.clone();
        hs.extend(other.halfspaces.iter().cloned());
        intersect_halfspaces(self.dim, &hs)
    }

    /// Adds one more constraint.
    pub fn cut(&self, h: &HalfSpace) -> HPolytope {
        let mut hs = self.halfspaces.clone();
        hs.push(h.clone());
        intersect_halfspaces(self.dim, &hs)
    }

    pub fn translate(&self, t: &[FieldElem]) -> HPolytope {
        HPolytope {
            dim: self.dim,
            halfspaces: self.halfspaces.iter().map(|h| h.translate(t)).collect(),
            vertices: self.vertices.iter().map(|v| add_pts(v, t)).collect(),
        }
    }

    /// Convex pieces covering `self` minus the interior of `other`. Pieces
    /// have pairwise disjoint interiors; lower-dimensional ones are dropped.
    pub fn difference(&self, other: &HPolytope) -> Vec<HPolytope> {
        let mut out = Vec::new();
        if self.interior_empty() {
            return out;
        }
        let mut rest = self.clone();
        for h in &other.halfspaces {
            let outside = rest.cut(&h.complement());
            if !outside.interior_empty() {
                out.push(outside);
            }
            rest = rest.cut(h);
            if rest.interior_empty() {
                break;
            }
        }
        out
    }

    /// Average of the vertices (an interior point when the interior is
    /// nonempty).
    pub fn centroid(&self) -> Option<Point> {
        let first = self.vertices.first()?;
        let zero: Point = first.iter().map(|x| x.zero_like_elem()).collect();
        let sum = self.vertices.iter().fold(zero, |acc, v| add_pts(&acc, v));
        let k = FieldElem::from_int(first[0].field(), self.vertices.len() as i64);
        Some(scale_pt(&sum, &k.inv().expect("nonzero")))
    }

    /// Exact volume in chart coordinates (dimension ≤ 3).
    pub fn volume(&self) -> Result<FieldElem> {
        if self.dim > 3 {
            return Err(Error::DimensionTooHigh(self.dim));
        }
        let Some(c) = self.centroid() else {
            return Ok(self.zero_elem());
        };
        if self.interior_empty() {
            return Ok(c[0].zero_like_elem());
        }
        Ok(match self.dim {
            1 => {
                let xs: Vec<&FieldElem> = self.vertices.iter().map(|v| &v[0]).collect();
                let max = xs.iter().copied().max_by(|a, b| a.cmp_value(b)).expect("nonempty");
                let min = xs.iter().copied().min_by(|a, b| a.cmp_value(b)).expect("nonempty");
                max - min
            }
            2 => {
                let ring = sort_around(&self.vertices, &c, None);
                shoelace(&ring).abs()
            }
            _ => {
                let mut total = c[0].zero_like_elem();
                for h in &self.halfspaces {
                    let face: Vec<Point> = self.vertices.iter().filter(|v| h.slack(v).is_zero()).cloned().collect();
                    if face.len() < 3 {
                        continue;
                    }
                    let fc = centroid_of(&face);
                    let ring = sort_around(&face, &fc, Some(&h.normal));
                    for i in 1..ring.len() - 1 {
                        let m = Matrix::from_rows(
                            vec![sub_pts(&ring[0], &c), sub_pts(&ring[i], &c), sub_pts(&ring[i + 1], &c)],
                            &c[0],
                        )
                        .expect("3x3");
                        total = &total + &m.det().expect("square").abs();
                    }
                }
                total.scale_q(&crate::rational::qf(1, 6))
            }
        })
    }

    fn zero_elem(&self) -> FieldElem {
        self.halfspaces.first().map(|h| h.offset.zero_like_elem()).expect("polytope without half-spaces")
    }
}

fn centroid_of(pts: &[Point]) -> Point {
    let zero: Point = pts[0].iter().map(|x| x.zero_like_elem()).collect();
    let sum = pts.iter().fold(zero, |acc, v| add_pts(&acc, v));
    let k = FieldElem::from_int(pts[0][0].field(), pts.len() as i64);
    scale_pt(&sum, &k.inv().expect("nonzero"))
}

fn shoelace(ring: &[Point]) -> FieldElem {
    let n = ring.len();
    let mut acc = ring[0][0].zero_like_elem();
    for i in 0..n {
        let (a, b) = (&ring[i], &ring[(i + 1) % n]);
        acc = &acc + &(&(&a[0] * &b[1]) - &(&a[1] * &b[0]));
    }
    acc.scale_q(&crate::rational::qf(1, 2))
}

/// Cyclic order of coplanar points around `c`. In 3D the plane is the one
/// orthogonal to `normal`.
fn sort_around(pts: &[Point], c: &[FieldElem], normal: Option<&Point>) -> Vec<Point> {
    let rel: Vec<Point> = pts.iter().map(|p| sub_pts(p, c)).collect();
    // in-plane basis (u, w)
    let (u, w): (Point, Point) = match normal {
        None => {
            let z = c[0].zero_like_elem();
            let one = FieldElem::one(c[0].field());
            (vec![one.clone(), z.clone()], vec![z, one])
        }
        Some(nrm) => {
            let u = rel.iter().find(|r| r.iter().any(|x| !x.is_zero())).expect("non-degenerate face").clone();
            let w = cross3(nrm, &u);
            (u, w)
        }
    };
    let coords: Vec<(FieldElem, FieldElem)> = rel.iter().map(|r| (dot(r, &u), dot(r, &w))).collect();
    let half = |p: &(FieldElem, FieldElem)| -> u8 {
        let (x, y) = (p.0.sign(), p.1.sign());
        if y > 0 || (y == 0 && x > 0) {
            0
        } else {
            1
        }
    };
    let mut idx: Vec<usize> = (0..pts.len()).collect();
    idx.sort_by(|&i, &j| {
        let (a, b) = (&coords[i], &coords[j]);
        half(a).cmp(&half(b)).then_with(|| {
            let cr = &(&a.0 * &b.1) - &(&a.1 * &b.0);
            match cr.sign() {
                1 => Ordering::Less,
                -1 => Ordering::Greater,
                _ => Ordering::Equal,
            }
        })
    });
    idx.into_iter().map(|i| pts[i].clone()).collect()
}

fn cross3(a: &[FieldElem], b: &[FieldElem]) -> Point {
    vec![
        &(&a[1] * &b[2]) - &(&a[2] * &b[1]),
        &(&a[2] * &b[0]) - &(&a[0] * &b[2]),
        &(&a[0] * &b[1]) - &(&a[1] * &b[0]),
    ]
}

pub fn locate(hs: &[HalfSpace], p: &[FieldElem]) -> Location {
    let mut boundary = false;
    for h in hs {
        match h.slack(p).sign() {
            -1 => return Location::Outside,
            0 => boundary = true,
            _ => {}
        }
    }
    if boundary {
        Location::Boundary
    } else {
        Location::Inside
    }
}

/// The window π'([0,1]^n) in chart coordinates, as a zonotope with slab
/// description `lo_k ≤ ν_k · p ≤ hi_k`.
#[derive(Clone, Debug)]
pub struct Window {
    generators: Vec<Point>,
    normals: Vec<Point>,
    lo: Vec<FieldElem>,
    hi: Vec<FieldElem>,
    polytope: HPolytope,
}

impl Window {
    pub fn of(s: &Slope) -> Window {
        let chart = s.chart();
        let m = s.m();
        let generators: Vec<Point> = (0..s.n()).map(|i| chart.col(i)).collect();
        Self::from_generators(m, generators)
    }

    /// Zonotope Σ [0,1]·g_i in R^m.
    pub fn from_generators(m: usize, generators: Vec<Point>) -> Window {
        let f = generators[0][0].field().clone();
        let mut normals: Vec<Point> = Vec::new();
        if m == 1 {
            normals.push(vec![FieldElem::one(&f)]);
        } else {
            for sub in combinations(generators.len(), m - 1) {
                let vs: Vec<Point> = sub.iter().map(|&i| generators[i].clone()).collect();
                let nu = generalized_cross(&vs);
                if let Some((c, _)) = canonical_direction(&nu) {
                    if !normals.contains(&c) {
                        normals.push(c);
                    }
                }
            }
        }
        let zero = FieldElem::zero(&f);
        let mut lo = Vec::new();
        let mut hi = Vec::new();
        let mut hs = Vec::new();
        for nu in &normals {
            let (mut l, mut h) = (zero.clone(), zero.clone());
            for g in &generators {
                let v = dot(nu, g);
                match v.sign() {
                    1 => h = &h + &v,
                    -1 => l = &l + &v,
                    _ => {}
                }
            }
            hs.push(HalfSpace::new(nu.clone(), h.clone()));
            hs.push(HalfSpace::new(nu.iter().map(|x| -x).collect(), -&l));
            lo.push(l);
            hi.push(h);
        }
        let vertices = enumerate_vertices(m, &hs);
        let polytope = HPolytope { dim: m, halfspaces: hs, vertices };
        Window { generators, normals, lo, hi, polytope }
    }

    pub fn dim(&self) -> usize {
        self.polytope.dim
    }

    pub fn generators(&self) -> &[Point] {
        &self.generators
    }

    pub fn normals(&self) -> &[Point] {
        &self.normals
    }

    /// Slab bounds `(lo, hi)` per normal.
    pub fn slabs(&self) -> impl Iterator<Item = (&Point, &FieldElem, &FieldElem)> {
        self.normals.iter().zip(&self.lo).zip(&self.hi).map(|((n, l), h)| (n, l, h))
    }

    pub fn facet_count(&self) -> usize {
        2 * self.normals.len()
    }

    pub fn polytope(&self) -> &HPolytope {
        &self.polytope
    }

    pub fn halfspaces(&self) -> &[HalfSpace] {
        &self.polytope.halfspaces
    }

    pub fn center(&self) -> Point {
        let f = self.generators[0][0].field().clone();
        let zero: Point = vec![FieldElem::zero(&f); self.dim()];
        let sum = self.generators.iter().fold(zero, |acc, g| add_pts(&acc, g));
        scale_pt(&sum, &FieldElem::from_q(&f, crate::rational::qf(1, 2)))
    }

    pub fn contains(&self, p: &[FieldElem]) -> Location {
        locate(&self.polytope.halfspaces, p)
    }

    /// The translate `W + t` as a polytope.
    pub fn translated(&self, t: &[FieldElem]) -> HPolytope {
        self.polytope.translate(t)
    }

    pub fn volume(&self) -> Result<FieldElem> {
        self.polytope.volume()
    }
}
