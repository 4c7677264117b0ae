//! Lifted patterns, their regions in the window, r-patterns and the
//! partition of the window they induce.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{add_pts, scale_pt, HPolytope, Location, Point, Window};
use crate::linalg::Matrix;
use crate::numfield::FieldElem;
use crate::rational::Q;
use crate::slope::Slope;
use crate::tiling::{Patch, Selector};

/// Unit edge `vertex → vertex + e_direction`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Edge {
    pub vertex: Vec<i64>,
    pub direction: usize,
}

/// A finite connected set of unit edges of Z^n.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct LiftedPattern {
    pub vertices: BTreeSet<Vec<i64>>,
    pub edges: BTreeSet<Edge>,
}

impl LiftedPattern {
    pub fn single_vertex(x: Vec<i64>) -> Self {
        LiftedPattern { vertices: [x].into_iter().collect(), edges: BTreeSet::new() }
    }

    pub fn from_edges(edges: impl IntoIterator<Item = Edge>) -> Self {
        let edges: BTreeSet<Edge> = edges.into_iter().collect();
        let mut vertices = BTreeSet::new();
        for e in &edges {
            let mut y = e.vertex.clone();
            y[e.direction] += 1;
            vertices.insert(e.vertex.clone());
            vertices.insert(y);
        }
        LiftedPattern { vertices, edges }
    }

    pub fn is_connected(&self) -> bool {
        let Some(start) = self.vertices.iter().next() else { return true };
        let mut adj: HashMap<&Vec<i64>, Vec<Vec<i64>>> = HashMap::new();
        for e in &self.edges {
            let mut y = e.vertex.clone();
            y[e.direction] += 1;
            adj.entry(&e.vertex).or_default().push(y.clone());
            if let Some(k) = self.vertices.get(&y) {
                adj.entry(k).or_default().push(e.vertex.clone());
            }
        }
        let mut seen: BTreeSet<Vec<i64>> = [start.clone()].into_iter().collect();
        let mut stack = vec![start.clone()];
        while let Some(x) = stack.pop() {
            for y in adj.get(&x).into_iter().flatten() {
                if seen.insert(y.clone()) {
                    stack.push(y.clone());
                }
            }
        }
        seen.len() == self.vertices.len()
    }

    pub fn translate(&self, t: &[i64]) -> Self {
        let mv = |x: &Vec<i64>| x.iter().zip(t).map(|(a, b)| a + b).collect::<Vec<_>>();
        LiftedPattern {
            vertices: self.vertices.iter().map(mv).collect(),
            edges: self.edges.iter().map(|e| Edge { vertex: mv(&e.vertex), direction: e.direction }).collect(),
        }
    }

    /// Representative modulo translation: lexicographically smallest vertex
    /// moved to the origin.
    pub fn normalized(&self) -> Self {
        match self.vertices.iter().next() {
            None => self.clone(),
            Some(m) => self.translate(&m.iter().map(|x| -x).collect::<Vec<_>>()),
        }
    }

    /// Image under a signed permutation `x ↦ P x` where
    /// `(P x)_{perm[i]} = sign[i] · x_i`.
    pub fn transform(&self, g: &SignedPerm) -> Self {
        let vertices = self.vertices.iter().map(|x| g.apply(x)).collect();
        let edges = self
            .edges
            .iter()
            .map(|e| {
                let a = g.apply(&e.vertex);
                let j = g.perm[e.direction];
                if g.sign[e.direction] > 0 {
                    Edge { vertex: a, direction: j }
                } else {
                    let mut b = a;
                    b[j] -= 1;
                    Edge { vertex: b, direction: j }
                }
            })
            .collect();
        LiftedPattern { vertices, edges }
    }
}

/// Region ∩_{x} (W − Lx) of a pattern, in chart coordinates.
pub fn pattern_region(window: &Window, p: &LiftedPattern) -> HPolytope {
    let mut hs = Vec::new();
    for x in &p.vertices {
        let t = lattice_image(window, x).iter().map(|v| -v).collect::<Vec<_>>();
        hs.extend(window.translated(&t).halfspaces().iter().cloned());
    }
    if hs.is_empty() {
        return window.polytope().clone();
    }
    crate::geometry::intersect_halfspaces(window.dim(), &hs)
}

/// L x for a lattice point x.
pub fn lattice_image(window: &Window, x: &[i64]) -> Point {
    let gens = window.generators();
    let f = gens[0][0].field().clone();
    let mut p: Point = vec![FieldElem::zero(&f); window.dim()];
    for (i, &xi) in x.iter().enumerate() {
        if xi != 0 {
            p = add_pts(&p, &scale_pt(&gens[i], &FieldElem::from_int(&f, xi)));
        }
    }
    p
}

/// One signed unit step of a lattice path.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Step {
    pub direction: usize,
    pub sign: i8,
}

fn walk(start: &[i64], steps: &[Step]) -> Vec<Vec<i64>> {
    let mut out = vec![start.to_vec()];
    let mut x = start.to_vec();
    for s in steps {
        x[s.direction] += s.sign as i64;
        out.push(x.clone());
    }
    out
}

/// Reorders the steps of a path whose endpoints lie in the window so that
/// every intermediate vertex does as well. Steps are moved forward one at
/// a time, as in the swap argument, with a bounded search as fallback.
pub fn fold_path(sel: &Selector, start: &[i64], steps: &[Step]) -> Result<Vec<Step>> {
    let inside = |x: &[i64]| -> Result<bool> {
        match sel.locate(x) {
            Location::Inside => Ok(true),
            Location::Outside => Ok(false),
            Location::Boundary => Err(Error::NotFoldable),
        }
    };
    let ends = walk(start, steps);
    if !inside(start)? || !inside(ends.last().expect("nonempty"))? {
        return Err(Error::NotFoldable);
    }
    let mut path = steps.to_vec();
    'outer: loop {
        let verts = walk(start, &path);
        let mut bad = None;
        for (k, v) in verts.iter().enumerate().skip(1).take(path.len().saturating_sub(1)) {
            if !inside(v)? {
                bad = Some(k - 1);
                break;
            }
        }
        let Some(k) = bad else { return Ok(path) };
        // replace step k by a later step that keeps the walk inside
        for j in k + 1..path.len() {
            let mut x = verts[k].clone();
            x[path[j].direction] += path[j].sign as i64;
            if inside(&x)? {
                let s = path.remove(j);
                path.insert(k, s);
                continue 'outer;
            }
        }
        break;
    }
    search_fold(&inside, start, steps).ok_or(Error::NotFoldable)
}

fn search_fold(inside: &dyn Fn(&[i64]) -> Result<bool>, start: &[i64], steps: &[Step]) -> Option<Vec<Step>> {
    fn rec(
        inside: &dyn Fn(&[i64]) -> Result<bool>,
        x: &mut Vec<i64>,
        left: &mut Vec<Step>,
        acc: &mut Vec<Step>,
        budget: &mut usize,
    ) -> bool {
        if left.is_empty() {
            return true;
        }
        if *budget == 0 {
            return false;
        }
        *budget -= 1;
        for i in 0..left.len() {
            if i > 0 && left[..i].contains(&left[i]) {
                continue;
            }
            let s = left[i];
            x[s.direction] += s.sign as i64;
            let ok = left.len() == 1 || inside(x).unwrap_or(false);
            if ok {
                left.remove(i);
                acc.push(s);
                if rec(inside, x, left, acc, budget) {
                    return true;
                }
                acc.pop();
                left.insert(i, s);
            }
            x[s.direction] -= s.sign as i64;
        }
        false
    }
    let mut x = start.to_vec();
    let mut left = steps.to_vec();
    let mut acc = Vec::new();
    let mut budget = 100_000;
    rec(inside, &mut x, &mut left, &mut acc, &mut budget).then_some(acc)
}

/// The r-pattern at a point q of the window together with the data that
/// pins down its exact region.
#[derive(Clone, Debug)]
pub struct RPattern {
    pub pattern: LiftedPattern,
    /// Lattice points adjacent to the explored vertices that are not
    /// selected; they must stay unselected for the pattern to persist.
    pub frontier: BTreeSet<Vec<i64>>,
}

/// Union of lifted paths of r+1 unit edges from the origin whose vertices
/// all satisfy `q + Lx ∈ W`.
pub fn r_pattern_at(window: &Window, q: &Point, r: usize) -> Result<RPattern> {
    let n = window.generators().len();
    let sel = Selector::new(window, q);
    let loc = |x: &[i64]| -> Result<bool> {
        match sel.locate(x) {
            Location::Inside => Ok(true),
            Location::Outside => Ok(false),
            Location::Boundary => Err(Error::SingularPoint),
        }
    };
    let origin = vec![0i64; n];
    if !loc(&origin)? {
        return Err(Error::DimensionMismatch("point lies outside the window".into()));
    }
    let mut depth: BTreeMap<Vec<i64>, usize> = BTreeMap::new();
    let mut frontier = BTreeSet::new();
    let mut edges = BTreeSet::new();
    depth.insert(origin.clone(), 0);
    let mut queue = VecDeque::from([origin]);
    while let Some(x) = queue.pop_front() {
        let dx = depth[&x];
        if dx > r {
            continue;
        }
        for i in 0..n {
            for s in [-1i64, 1] {
                let mut y = x.clone();
                y[i] += s;
                if frontier.contains(&y) {
                    continue;
                }
                if !depth.contains_key(&y) {
                    if !loc(&y)? {
                        frontier.insert(y);
                        continue;
                    }
                    depth.insert(y.clone(), dx + 1);
                    queue.push_back(y.clone());
                }
                let e = if s > 0 { Edge { vertex: x.clone(), direction: i } } else { Edge { vertex: y.clone(), direction: i } };
                edges.insert(e);
            }
        }
    }
    let pattern = if edges.is_empty() {
        LiftedPattern::single_vertex(vec![0; n])
    } else {
        LiftedPattern::from_edges(edges)
    };
    Ok(RPattern { pattern, frontier })
}

/// Exact set of points whose r-pattern is `rp`, as convex pieces with
/// pairwise disjoint interiors.
pub fn exact_region(window: &Window, rp: &RPattern) -> Vec<HPolytope> {
    let base = pattern_region(window, &rp.pattern);
    let mut pieces = if base.interior_empty() { Vec::new() } else { vec![base] };
    for y in &rp.frontier {
        let t: Point = lattice_image(window, y).iter().map(|v| -v).collect();
        let hole = window.translated(&t);
        pieces = pieces.into_iter().flat_map(|p| p.difference(&hole)).collect();
    }
    pieces
}

#[derive(Clone, Debug)]
pub struct PatternRegion {
    pub pattern: LiftedPattern,
    pub pieces: Vec<HPolytope>,
    pub volume: FieldElem,
}

impl PatternRegion {
    pub fn contains(&self, p: &Point) -> Location {
        let mut best = Location::Outside;
        for piece in &self.pieces {
            match piece.contains(p) {
                Location::Inside => return Location::Inside,
                Location::Boundary => best = Location::Boundary,
                Location::Outside => {}
            }
        }
        best
    }
}

#[derive(Clone, Debug)]
pub struct Enumeration {
    pub regions: Vec<PatternRegion>,
    pub window_volume: FieldElem,
    pub covered_volume: FieldElem,
    pub complete: bool,
}

/// Random rational point of the window (rejection sampling in the
/// bounding box, boundary points rejected).
pub fn sample_window_point(window: &Window, rng: &mut ChaCha8Rng) -> Point {
    let f = window.generators()[0][0].field().clone();
    let verts = window.polytope().vertices();
    let dim = window.dim();
    let lo: Vec<f64> = (0..dim).map(|j| verts.iter().map(|v| v[j].to_f64()).fold(f64::INFINITY, f64::min)).collect();
    let hi: Vec<f64> = (0..dim).map(|j| verts.iter().map(|v| v[j].to_f64()).fold(f64::NEG_INFINITY, f64::max)).collect();
    let den: i64 = 1 << 20;
    loop {
        let p: Point = (0..dim)
            .map(|j| {
                let a = (lo[j] * den as f64).floor() as i64;
                let b = (hi[j] * den as f64).ceil() as i64;
                let num = rng.gen_range(a..=b);
                FieldElem::from_q(&f, Q::new(BigInt::from(num), BigInt::from(den)))
            })
            .collect();
        if window.contains(&p) == Location::Inside {
            return p;
        }
    }
}

/// Discovers r-patterns by sampling the window, then fills the remaining
/// gaps exactly until the regions cover the window (dimension ≤ 3).
pub fn enumerate_r_patterns(window: &Window, r: usize, samples: usize, seed: u64) -> Result<Enumeration> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut found: BTreeMap<LiftedPattern, PatternRegion> = BTreeMap::new();
    let add = |q: &Point, found: &mut BTreeMap<LiftedPattern, PatternRegion>| -> Result<()> {
        if found.values().any(|reg| reg.contains(q) == Location::Inside) {
            return Ok(());
        }
        let rp = match r_pattern_at(window, q, r) {
            Ok(rp) => rp,
            Err(Error::SingularPoint) => return Ok(()),
            Err(e) => return Err(e),
        };
        if found.contains_key(&rp.pattern) {
            return Ok(());
        }
        let pieces = exact_region(window, &rp);
        let mut volume = FieldElem::zero(q[0].field());
        for p in &pieces {
            volume = &volume + &p.volume()?;
        }
        found.insert(rp.pattern.clone(), PatternRegion { pattern: rp.pattern, pieces, volume });
        Ok(())
    };
    for _ in 0..samples {
        let q = sample_window_point(window, &mut rng);
        add(&q, &mut found)?;
    }
    let window_volume = window.volume()?;
    for _round in 0..64 {
        let mut gaps = vec![window.polytope().clone()];
        for reg in found.values() {
            for piece in &reg.pieces {
                gaps = gaps.into_iter().flat_map(|g| g.difference(piece)).collect();
            }
        }
        if gaps.is_empty() {
            break;
        }
        let before = found.len();
        for g in &gaps {
            let q = interior_point(g, &mut rng);
            add(&q, &mut found)?;
        }
        if found.len() == before {
            break;
        }
    }
    let mut covered = FieldElem::zero(window.generators()[0][0].field());
    for reg in found.values() {
        covered = &covered + &reg.volume;
    }
    let complete = covered == window_volume;
    Ok(Enumeration { regions: found.into_values().collect(), window_volume, covered_volume: covered, complete })
}

/// Random convex combination of the vertices with positive weights.
fn interior_point(p: &HPolytope, rng: &mut ChaCha8Rng) -> Point {
    let verts = p.vertices();
    let f = verts[0][0].field().clone();
    let weights: Vec<i64> = verts.iter().map(|_| rng.gen_range(1..=1000)).collect();
    let total: i64 = weights.iter().sum();
    let mut acc: Point = vec![FieldElem::zero(&f); p.dim()];
    for (v, w) in verts.iter().zip(&weights) {
        acc = add_pts(&acc, &scale_pt(v, &FieldElem::from_q(&f, Q::new(BigInt::from(*w), BigInt::from(total)))));
    }
    acc
}

/// Signed permutation of coordinates: `(P x)_{perm[i]} = sign[i] · x_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedPerm {
    pub perm: Vec<usize>,
    pub sign: Vec<i8>,
    /// Orientation-preserving on E.
    pub rotation: bool,
}

impl SignedPerm {
    pub fn apply(&self, x: &[i64]) -> Vec<i64> {
        let mut y = vec![0; x.len()];
        for i in 0..x.len() {
            y[self.perm[i]] = self.sign[i] as i64 * x[i];
        }
        y
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    fn rec(k: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == p.len() {
            out.push(p.clone());
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            rec(k + 1, p, out);
            p.swap(k, i);
        }
    }
    rec(0, &mut p, &mut out);
    out
}

/// Signed permutations of Z^n mapping E onto itself, flagged as rotations
/// when they preserve the orientation of E.
pub fn slope_symmetries(s: &Slope) -> Vec<SignedPerm> {
    let n = s.n();
    let d = s.d();
    let chart = s.chart();
    let u = s.generators();
    let zero = s.zero();
    let mut out = Vec::new();
    for perm in permutations(n) {
        for mask in 0..1u32 << n {
            let sign: Vec<i8> = (0..n).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect();
            // P U column by column
            let pu: Vec<Vec<FieldElem>> = (0..d)
                .map(|c| {
                    let mut v = vec![zero.clone(); n];
                    for i in 0..n {
                        let e = u.get(i, c);
                        v[perm[i]] = if sign[i] > 0 { e.clone() } else { -e };
                    }
                    v
                })
                .collect();
            if !pu.iter().all(|v| chart.mul_vec(v).expect("length n").iter().all(FieldElem::is_zero)) {
                continue;
            }
            // P U = U T; orientation from det T
            let mut t_cols = Vec::new();
            for v in &pu {
                let t = u.solve(v).expect("shape").expect("in E");
                t_cols.push(t);
            }
            let t = Matrix::from_cols(t_cols, &zero).expect("square");
            let rotation = t.det().expect("square").sign() > 0;
            out.push(SignedPerm { perm: perm.clone(), sign, rotation });
        }
    }
    out
}

/// Canonical representative of a pattern centered at the origin under the
/// given symmetries (which fix the origin).
pub fn canonical_under(p: &LiftedPattern, group: &[SignedPerm]) -> LiftedPattern {
    group.iter().map(|g| p.transform(g)).min().unwrap_or_else(|| p.clone())
}

/// The 0-pattern (vertex star) of every vertex of the patch lying at
/// least `margin` inside its radius, read from the tiling's edges.
pub fn zero_patterns_in_patch(patch: &Patch, margin: f64) -> BTreeSet<LiftedPattern> {
    let mut edges: BTreeSet<Edge> = BTreeSet::new();
    for f in &patch.faces {
        for c in f.corners() {
            for &i in &f.directions {
                let mut y = c.clone();
                y[i] += 1;
                if f.corners().contains(&y) {
                    edges.insert(Edge { vertex: c.clone(), direction: i });
                }
            }
        }
    }
    let emb = patch.embedding();
    let r = crate::rational::q_to_f64(&patch.radius);
    let mut star: BTreeMap<Vec<i64>, BTreeSet<Edge>> = BTreeMap::new();
    for e in &edges {
        let mut y = e.vertex.clone();
        y[e.direction] += 1;
        star.entry(e.vertex.clone()).or_default().insert(e.clone());
        star.entry(y).or_default().insert(e.clone());
    }
    star.into_iter()
        .filter(|(x, _)| emb.dist(x, &patch.seed_vertex) <= r - margin)
        .map(|(x, es)| {
            let neg: Vec<i64> = x.iter().map(|v| -v).collect();
            LiftedPattern::from_edges(es).translate(&neg)
        })
        .collect()
}
