//! Coincidences of lifted faces and the polynomial equations they impose
//! on Grassmann coordinates.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::linalg::{lll, Matrix};
use crate::numfield::FieldElem;
use crate::poly::{MonomialOrder, Poly};
use crate::rational::Q;
use crate::slope::{combinations, coord_name, Slope};

/// Real-entry positions of each of the n−d+1 points.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CoincidenceType {
    pub real_positions: Vec<Vec<usize>>,
}

impl CoincidenceType {
    pub fn new(real_positions: Vec<Vec<usize>>) -> Self {
        CoincidenceType { real_positions }
    }

    pub fn canonical(&self) -> Self {
        let mut r = self.real_positions.clone();
        r.sort();
        CoincidenceType { real_positions: r }
    }

    pub fn label(&self) -> String {
        let parts: Vec<String> = self
            .real_positions
            .iter()
            .map(|s| format!("({})", s.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        parts.join("")
    }
}

/// All types modulo point permutation.
pub fn enumerate_types(n: usize, d: usize) -> Vec<CoincidenceType> {
    assert!(n > d && d >= 1);
    let m = n - d;
    if m == 1 {
        return vec![CoincidenceType::new(vec![vec![], vec![]])];
    }
    let subsets = combinations(n, m - 1);
    combinations(subsets.len(), m + 1)
        .into_iter()
        .map(|pick| CoincidenceType::new(pick.into_iter().map(|k| subsets[k].clone()).collect()))
        .collect()
}

/// Variable layout and the block matrix M for one type.
#[derive(Clone, Debug)]
pub struct CoincidenceSystem {
    pub n: usize,
    pub d: usize,
    pub ty: CoincidenceType,
    /// (point, position) of the integer entries a_1, a_2, …
    pub integer_vars: Vec<(usize, usize)>,
    /// (point, position) of the real entries r_1, r_2, …
    pub real_vars: Vec<(usize, usize)>,
}

impl CoincidenceSystem {
    pub fn new(n: usize, d: usize, ty: &CoincidenceType) -> Self {
        let mut integer_vars = Vec::new();
        let mut real_vars = Vec::new();
        for (j, rj) in ty.real_positions.iter().enumerate() {
            for pos in 0..n {
                if rj.contains(&pos) {
                    real_vars.push((j, pos));
                } else {
                    integer_vars.push((j, pos));
                }
            }
        }
        CoincidenceSystem { n, d, ty: ty.clone(), integer_vars, real_vars }
    }

    pub fn m(&self) -> usize {
        self.n - self.d
    }

    pub fn size(&self) -> usize {
        self.n * self.m()
    }

    fn int_entry(&self, v: &[BigInt], j: usize, pos: usize) -> BigInt {
        self.integer_vars.iter().position(|&x| x == (j, pos)).map(|k| v[k].clone()).unwrap_or_default()
    }

    /// First column: b_i = int(x_0) − int(x_i), stacked over i = 1..m.
    pub fn b_column(&self, v: &[BigInt]) -> Vec<BigInt> {
        let mut b = Vec::with_capacity(self.size());
        for i in 1..=self.m() {
            for pos in 0..self.n {
                b.push(self.int_entry(v, 0, pos) - self.int_entry(v, i, pos));
            }
        }
        b
    }

    /// Entry of the A block at (row, real variable k).
    fn a_entry(&self, row: usize, k: usize) -> i64 {
        let i = row / self.n + 1;
        let pos = row % self.n;
        let (j, p) = self.real_vars[k];
        let mut e = 0;
        if p == pos && j == 0 {
            e += 1;
        }
        if p == pos && j == i {
            e -= 1;
        }
        e
    }

    /// M = [b | A | diag(U, …, U)].
    pub fn matrix(&self, s: &Slope, v: &[BigInt]) -> Matrix<FieldElem> {
        let f = s.field();
        let zero = s.zero();
        let size = self.size();
        let p = self.real_vars.len();
        let b = self.b_column(v);
        let u = s.generators();
        let mut mat = Matrix::zeros(size, size, &zero);
        for row in 0..size {
            mat.set(row, 0, FieldElem::from_bigint(f, &b[row]));
            for k in 0..p {
                let e = self.a_entry(row, k);
                if e != 0 {
                    mat.set(row, 1 + k, FieldElem::from_int(f, e));
                }
            }
            let blk = row / self.n;
            let pos = row % self.n;
            for c in 0..self.d {
                mat.set(row, 1 + p + blk * self.d + c, u.get(pos, c).clone());
            }
        }
        mat
    }
}

/// k × (#integer entries) rational matrix whose kernel is the set of
/// integer entries making det M vanish.
pub fn integer_constraints(s: &Slope, ty: &CoincidenceType) -> Matrix<Q> {
    let sys = CoincidenceSystem::new(s.n(), s.d(), ty);
    let k = s.field().degree();
    let nv = sys.integer_vars.len();
    let zero_v = vec![BigInt::zero(); nv];
    let full = sys.matrix(s, &zero_v);
    let cols: Vec<usize> = (1..sys.size()).collect();
    let rows: Vec<usize> = (0..sys.size()).collect();
    let rest = full.submatrix(&rows, &cols);
    // det M = c · (y · b) for y spanning the left kernel of the other columns
    let left = rest.transpose().kernel();
    if left.len() != 1 {
        return Matrix::zeros(k, nv, &Q::zero());
    }
    let y = &left[0];
    let mut out = Matrix::zeros(k, nv, &Q::zero());
    for (col, &(j, pos)) in sys.integer_vars.iter().enumerate() {
        let mut coeff = s.zero();
        if j == 0 {
            for i in 1..=sys.m() {
                coeff = &coeff + &y[(i - 1) * sys.n + pos];
            }
        } else {
            coeff = &coeff - &y[(j - 1) * sys.n + pos];
        }
        for (r, c) in coeff.coeffs().iter().enumerate() {
            out.set(r, col, c.clone());
        }
    }
    out
}

/// LLL-reduced basis of the integer kernel of the constraints.
pub fn coincidence_lattice(s: &Slope, ty: &CoincidenceType) -> Result<Vec<Vec<BigInt>>> {
    let c = integer_constraints(s, ty);
    let basis = c.integer_kernel();
    if basis.is_empty() {
        return Ok(basis);
    }
    lll(&basis)
}

/// n−d+1 points with a common π'-projection.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Coincidence {
    pub ty: CoincidenceType,
    #[serde(skip)]
    pub points: Vec<Vec<FieldElem>>,
    #[serde(skip)]
    pub window_point: Point,
}

impl Coincidence {
    pub fn translate(&self, t: &[BigInt], chart: &Matrix<FieldElem>) -> Coincidence {
        let points: Vec<Vec<FieldElem>> = self
            .points
            .iter()
            .map(|x| x.iter().zip(t).map(|(e, ti)| e + &FieldElem::from_bigint(e.field(), ti)).collect())
            .collect();
        let window_point = chart.mul_vec(&points[0]).expect("length n");
        Coincidence { ty: self.ty.clone(), points, window_point }
    }
}

#[derive(Clone, Debug)]
pub enum Realization {
    Coincidence(Coincidence),
    Degenerate,
}

/// Solves M(v) · (1, r, λ) = 0 and assembles the points.
pub fn realize(s: &Slope, ty: &CoincidenceType, v: &[BigInt]) -> Result<Realization> {
    let sys = CoincidenceSystem::new(s.n(), s.d(), ty);
    if v.len() != sys.integer_vars.len() {
        return Err(Error::DimensionMismatch(format!("expected {} integer entries", sys.integer_vars.len())));
    }
    let m = sys.matrix(s, v);
    let size = sys.size();
    let rows: Vec<usize> = (0..size).collect();
    let rest = m.submatrix(&rows, &(1..size).collect::<Vec<_>>());
    let rhs: Vec<FieldElem> = m.col(0).iter().map(|e| -e).collect();
    let sol = rest.solve(&rhs)?.ok_or(Error::InconsistentSystem)?;
    let f = s.field();
    let points: Vec<Vec<FieldElem>> = (0..=sys.m())
        .map(|j| {
            (0..s.n())
                .map(|pos| match sys.real_vars.iter().position(|&x| x == (j, pos)) {
                    Some(k) => sol[k].clone(),
                    None => FieldElem::from_bigint(f, &sys.int_entry(v, j, pos)),
                })
                .collect()
        })
        .collect();
    // the faces already meet in R^n
    if points.iter().all(|x| x == &points[0]) {
        return Ok(Realization::Degenerate);
    }
    let chart = s.chart();
    let window_point = chart.mul_vec(&points[0])?;
    Ok(Realization::Coincidence(Coincidence { ty: ty.clone(), points, window_point }))
}

/// Names and index tuples of the Grassmann variables, in lexicographic order.
pub fn grassmann_variables(n: usize, d: usize) -> (Vec<Vec<usize>>, Vec<String>) {
    let tuples = combinations(n, d);
    let names = tuples.iter().map(|t| coord_name(n, t)).collect();
    (tuples, names)
}

#[derive(Clone, Debug, Serialize)]
pub struct CoincidenceEquation {
    #[serde(skip)]
    pub poly: Poly,
    pub ty: CoincidenceType,
    pub vector: Vec<i64>,
}

impl CoincidenceEquation {
    pub fn to_string(&self, names: &[String]) -> String {
        self.poly.to_string_with(names, MonomialOrder::GrevLex)
    }
}

#[derive(Clone, Debug)]
pub enum EquationOutcome {
    Equation(CoincidenceEquation),
    Trivial,
}

fn det_i128(mut a: Vec<Vec<i128>>) -> Option<i128> {
    let n = a.len();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&r| a[r][k] != 0) else { return Some(0) };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let x = a[i][j].checked_mul(a[k][k])?.checked_sub(a[i][k].checked_mul(a[k][j])?)?;
                a[i][j] = x / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    Some(sign * a[n - 1][n - 1])
}

fn det_bigint(a: Vec<Vec<i128>>) -> BigInt {
    let rows: Vec<Vec<Q>> = a.iter().map(|r| r.iter().map(|&x| Q::from_integer(BigInt::from(x))).collect()).collect();
    let m = Matrix::from_rows(rows, &Q::zero()).expect("rectangular");
    m.det().expect("square").to_integer()
}

/// Blockwise Laplace expansion of det M along its first p+1 columns, with
/// each d×d minor of a U block replaced by its Grassmann variable.
pub fn equation_of(s: &Slope, ty: &CoincidenceType, v: &[BigInt]) -> Result<EquationOutcome> {
    let (n, d) = (s.n(), s.d());
    let sys = CoincidenceSystem::new(n, d, ty);
    if v.len() != sys.integer_vars.len() {
        return Err(Error::DimensionMismatch(format!("expected {} integer entries", sys.integer_vars.len())));
    }
    let m = sys.m();
    let p = sys.real_vars.len();
    let size = sys.size();
    let b: Vec<i128> = sys
        .b_column(v)
        .iter()
        .map(|x| x.to_i128().ok_or_else(|| Error::ResourceLimit("entry too large".into())))
        .collect::<Result<_>>()?;
    let (tuples, _) = grassmann_variables(n, d);
    let nvars = tuples.len();
    // rows of U block i that may be picked without zeroing a column of A
    let choices: Vec<Vec<Vec<usize>>> = (1..=m)
        .map(|i| tuples.iter().filter(|t| t.iter().all(|pos| !ty.real_positions[i].contains(pos))).cloned().collect())
        .collect();
    let col_sum: usize = (1..=p + 1).sum();
    let mut poly = Poly::zero(nvars);
    let mut idx = vec![0usize; m];
    if choices.iter().any(|c| c.is_empty()) {
        return Ok(EquationOutcome::Trivial);
    }
    loop {
        let mut picked = vec![false; size];
        let mut mono = vec![0u32; nvars];
        for i in 0..m {
            let t = &choices[i][idx[i]];
            for &pos in t {
                picked[i * n + pos] = true;
            }
            mono[tuples.iter().position(|x| x == t).expect("tuple")] += 1;
        }
        let rbar: Vec<usize> = (0..size).filter(|&r| !picked[r]).collect();
        let sub: Vec<Vec<i128>> = rbar
            .iter()
            .map(|&r| {
                let mut row = vec![b[r]];
                row.extend((0..p).map(|k| sys.a_entry(r, k) as i128));
                row
            })
            .collect();
        let dphi = match det_i128(sub.clone()) {
            Some(x) => BigInt::from(x),
            None => det_bigint(sub),
        };
        if !dphi.is_zero() {
            let exp: usize = rbar.iter().map(|r| r + 1).sum::<usize>() + col_sum;
            let signed = if exp % 2 == 0 { dphi } else { -dphi };
            poly = poly.add(&Poly::from_terms(nvars, [(mono, Q::from_integer(signed))]));
        }
        // next φ
        let mut k = 0;
        loop {
            if k == m {
                return Ok(finish(poly, ty, v));
            }
            idx[k] += 1;
            if idx[k] < choices[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

fn finish(poly: Poly, ty: &CoincidenceType, v: &[BigInt]) -> EquationOutcome {
    if poly.is_zero() {
        return EquationOutcome::Trivial;
    }
    EquationOutcome::Equation(CoincidenceEquation {
        poly,
        ty: ty.clone(),
        vector: v.iter().map(|x| x.to_i64().unwrap_or(i64::MAX)).collect(),
    })
}

/// Common integer translation minimizing the largest entry modulus.
pub fn minimize_r(c: &Coincidence, chart: &Matrix<FieldElem>) -> (Coincidence, u64, Vec<BigInt>) {
    let n = c.points[0].len();
    let bounds: Vec<(BigInt, BigInt)> = (0..n)
        .map(|pos| {
            let lo = c.points.iter().map(|x| x[pos].floor()).min().expect("points");
            let hi = c.points.iter().map(|x| x[pos].ceil()).max().expect("points");
            (lo, hi)
        })
        .collect();
    // cost at shift t: max(hi + t, −lo − t); optimum ⌈(hi − lo)/2⌉
    let cost = |(lo, hi): &(BigInt, BigInt), t: &BigInt| -> BigInt { (hi + t).max(-(lo + t)) };
    let best = bounds
        .iter()
        .map(|(lo, hi)| {
            let w: BigInt = hi - lo;
            (w + BigInt::one()) / 2
        })
        .max()
        .unwrap_or_default();
    let shift: Vec<BigInt> = bounds
        .iter()
        .map(|bd| {
            // smallest |t| with cost(t) ≤ best, ties toward positive
            let mut k = BigInt::zero();
            loop {
                if cost(bd, &k) <= best {
                    return k;
                }
                let nk = -&k;
                if cost(bd, &nk) <= best {
                    return nk;
                }
                k += 1;
            }
        })
        .collect();
    let out = c.translate(&shift, chart);
    (out, best.to_u64().unwrap_or(u64::MAX), shift)
}

/// Entry bound of a coincidence as it stands.
pub fn entry_bound(c: &Coincidence) -> u64 {
    c.points
        .iter()
        .flatten()
        .map(|e| e.ceil().abs().max(e.floor().abs()))
        .max()
        .and_then(|x| x.to_u64())
        .unwrap_or(0)
}

#[derive(Clone, Debug)]
pub struct EquationRecord {
    pub equation: CoincidenceEquation,
    pub coincidence: Option<Coincidence>,
    pub r: Option<u64>,
}

/// Equations from the reduced lattice basis of every type, deduplicated up
/// to rational scaling.
pub fn all_equations(s: &Slope) -> Result<Vec<EquationRecord>> {
    all_equations_with(s, 1)
}

/// As [`all_equations`], spreading the types over `threads` workers; the
/// merged output does not depend on the thread count.
pub fn all_equations_with(s: &Slope, threads: usize) -> Result<Vec<EquationRecord>> {
    let types = enumerate_types(s.n(), s.d());
    let per_type: Vec<Result<Vec<EquationRecord>>> = if threads <= 1 {
        types.iter().map(|ty| type_equations(s, ty)).collect()
    } else {
        let chunk = types.len().div_ceil(threads).max(1);
        std::thread::scope(|scope| {
            let handles: Vec<_> = types
                .chunks(chunk)
                .map(|tys| scope.spawn(move || tys.iter().map(|ty| type_equations(s, ty)).collect::<Vec<_>>()))
                .collect();
            handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
        })
    };
    let mut index: BTreeMap<Poly, usize> = BTreeMap::new();
    let mut out: Vec<EquationRecord> = Vec::new();
    for recs in per_type {
        for rec in recs? {
            match index.get(&rec.equation.poly) {
                Some(&i) => {
                    if rec.r.unwrap_or(0) < out[i].r.unwrap_or(0) {
                        out[i] = rec;
                    }
                }
                None => {
                    index.insert(rec.equation.poly.clone(), out.len());
                    out.push(rec);
                }
            }
        }
    }
    Ok(out)
}

fn type_equations(s: &Slope, ty: &CoincidenceType) -> Result<Vec<EquationRecord>> {
    let chart = s.chart();
    let mut out: Vec<EquationRecord> = Vec::new();
    for v in coincidence_lattice(s, ty)? {
        let EquationOutcome::Equation(mut eq) = equation_of(s, ty, &v)? else { continue };
        eq.poly = eq.poly.primitive(MonomialOrder::GrevLex);
        let (coincidence, r) = match realize(s, ty, &v)? {
            Realization::Coincidence(c) => {
                let (c2, r, _) = minimize_r(&c, &chart);
                (Some(c2), Some(r))
            }
            Realization::Degenerate => (None, None),
        };
        match out.iter_mut().find(|x| x.equation.poly == eq.poly) {
            Some(x) if r.unwrap_or(0) < x.r.unwrap_or(0) => *x = EquationRecord { equation: eq, coincidence, r },
            Some(_) => {}
            None => out.push(EquationRecord { equation: eq, coincidence, r }),
        }
    }
    Ok(out)
}

/// Grassmann coordinates of the slope as a point in variable order.
pub fn grassmann_point(s: &Slope) -> Vec<FieldElem> {
    let g = s.grassmann();
    combinations(s.n(), s.d()).iter().map(|t| g.get(t)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;
    use crate::rational::q;
    use crate::slope::tests::{ammann_beenker, typical};

    fn bi(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn reference_type() -> CoincidenceType {
        CoincidenceType::new(vec![vec![3], vec![2], vec![1]])
    }

    const V: [i64; 9] = [3, -3, 3, 3, 3, 2, -5, -3, -3];

    #[test]
    fn type_counts() {
        assert_eq!(enumerate_types(4, 2).len(), 4);
        assert_eq!(enumerate_types(3, 2).len(), 1);
        assert_eq!(enumerate_types(5, 4).len(), 1);
    }

    #[test]
    fn type_count_brute_force() {
        // ordered tuples of distinct 2-subsets of 5 positions, deduplicated by sorting
        let subs = combinations(5, 2);
        let mut seen = BTreeSet::new();
        for a in &subs {
            for b in &subs {
                for c in &subs {
                    for d in &subs {
                        let mut t = vec![a.clone(), b.clone(), c.clone(), d.clone()];
                        t.sort();
                        t.dedup();
                        if t.len() == 4 {
                            seen.insert(t);
                        }
                    }
                }
            }
        }
        let got: BTreeSet<_> = enumerate_types(5, 2).into_iter().map(|t| t.canonical().real_positions).collect();
        assert_eq!(got, seen);
        assert_eq!(got.len(), 210);
    }

    #[test]
    fn constraints_match_reference_system() {
        let s = typical();
        let c = integer_constraints(&s, &reference_type());
        assert_eq!((c.rows(), c.cols()), (3, 9));
        let reference = Matrix::from_i64(&[
            vec![17, 6, -30, 10, -6, 0, -27, 30, 0],
            vec![56, -4, -69, -26, 4, 30, -30, 69, -30],
            vec![32, -7, -45, 4, 7, -12, -36, 45, 12],
        ]);
        assert_eq!(c.rank(), 3);
        assert_eq!(c.vstack(&reference).unwrap().rank(), 3);
    }

    #[test]
    fn rational_slope_has_one_constraint_row() {
        let f = crate::numfield::NumberField::rationals();
        let cols = vec![
            vec![vec![q(1)], vec![q(0)], vec![q(2)], vec![q(1)]],
            vec![vec![q(0)], vec![q(1)], vec![q(1)], vec![q(3)]],
        ];
        let s = Slope::from_coeffs(&f, &cols, None).unwrap();
        assert_eq!(integer_constraints(&s, &reference_type()).rows(), 1);
    }

    #[test]
    fn lattice_of_reference_type() {
        let s = typical();
        let b = coincidence_lattice(&s, &reference_type()).unwrap();
        assert_eq!(b.len(), 6);
        assert!(crate::linalg::lattice_contains(&b, &bi(&V)));
        assert!(crate::linalg::is_lll_reduced(&b));
        let c = integer_constraints(&s, &reference_type());
        let zero = vec![Q::zero(); 9];
        for v in &b {
            let vq: Vec<Q> = v.iter().map(|x| Q::from_integer(x.clone())).collect();
            assert_eq!(c.mul_vec(&vq).unwrap(), zero[..3].to_vec());
        }
    }

    #[test]
    fn realize_reference_vector() {
        let s = typical();
        let Realization::Coincidence(c) = realize(&s, &reference_type(), &bi(&V)).unwrap() else { panic!() };
        assert_eq!(c.points[0][3].to_poly_string("a"), "-4*a^2 - 2*a + 2");
        assert_eq!(c.points[1][2].to_poly_string("a"), "-64/17*a^2 - 52/17*a + 163/17");
        assert_eq!(c.points[2][1].to_poly_string("a"), "-a^2 - 5*a - 6");
        assert_eq!(c.points[0][3].approx(4), "-7.853");
        let chart = s.chart();
        for x in &c.points {
            assert_eq!(chart.mul_vec(x).unwrap(), c.window_point);
        }
        assert_eq!(entry_bound(&c), 8);
        let (c2, r, t) = minimize_r(&c, &chart);
        assert_eq!(r, 5);
        assert_eq!(t, bi(&[0, 0, 0, 3]));
        assert_eq!(entry_bound(&c2), 5);
        let (_, r3, t3) = minimize_r(&c2, &chart);
        assert_eq!((r3, t3), (5, bi(&[0, 0, 0, 0])));
    }

    #[test]
    fn minimize_r_ignores_pretranslation() {
        let s = typical();
        let chart = s.chart();
        let Realization::Coincidence(c) = realize(&s, &reference_type(), &bi(&V)).unwrap() else { panic!() };
        let moved = c.translate(&bi(&[7, -4, 2, 11]), &chart);
        assert_eq!(minimize_r(&moved, &chart).1, 5);
    }

    #[test]
    fn zero_vector_is_degenerate() {
        let s = typical();
        assert!(matches!(realize(&s, &reference_type(), &bi(&[0; 9])).unwrap(), Realization::Degenerate));
        assert!(matches!(equation_of(&s, &reference_type(), &bi(&[0; 9])).unwrap(), EquationOutcome::Trivial));
    }

    #[test]
    fn vector_outside_lattice_is_inconsistent() {
        let s = typical();
        let err = realize(&s, &reference_type(), &bi(&[1, 0, 0, 0, 0, 0, 0, 0, 0])).unwrap_err();
        assert!(matches!(err, Error::InconsistentSystem));
    }

    #[test]
    fn reference_equation() {
        let s = typical();
        let EquationOutcome::Equation(e) = equation_of(&s, &reference_type(), &bi(&V)).unwrap() else { panic!() };
        let (_, names) = grassmann_variables(4, 2);
        let p = e.poly.primitive(MonomialOrder::GrevLex);
        let expect = ["5*G12*G13", "-6*G12*G14", "-6*G13*G14", "8*G12*G34"];
        let map = p.to_named_map(&names);
        assert_eq!(map.len(), 4);
        for t in expect {
            let (c, mono) = t.split_once('*').unwrap();
            let got = &map[mono];
            // up to a global sign
            let sgn = if map["G12*G13"].starts_with('-') { -1 } else { 1 };
            assert_eq!(got.parse::<i64>().unwrap() * sgn, c.parse::<i64>().unwrap());
        }
        assert!(p.is_homogeneous());
        assert_eq!(p.total_degree(), Some(2));
        assert!(p.eval(&grassmann_point(&s)).is_zero());
    }

    #[test]
    fn equation_matches_determinant() {
        // numeric oracle: substitute the actual U into M and compare det M with the polynomial
        let s = typical();
        let g = grassmann_point(&s);
        for v in coincidence_lattice(&s, &reference_type()).unwrap() {
            let det = CoincidenceSystem::new(4, 2, &reference_type()).matrix(&s, &v).det().unwrap();
            let val = match equation_of(&s, &reference_type(), &v).unwrap() {
                EquationOutcome::Equation(e) => e.poly.eval(&g),
                EquationOutcome::Trivial => s.zero(),
            };
            assert_eq!(det, val);
        }
        let v = bi(&[1, 2, 0, -1, 0, 3, 1, 1, 0]);
        let det = CoincidenceSystem::new(4, 2, &reference_type()).matrix(&s, &v).det().unwrap();
        let EquationOutcome::Equation(e) = equation_of(&s, &reference_type(), &v).unwrap() else { panic!() };
        assert_eq!(det, e.poly.eval(&g));
        assert!(!det.is_zero());
    }

    #[test]
    fn equation_is_linear_in_vector() {
        let s = typical();
        let b = coincidence_lattice(&s, &reference_type()).unwrap();
        let poly_of = |v: &[BigInt]| match equation_of(&s, &reference_type(), v).unwrap() {
            EquationOutcome::Equation(e) => e.poly,
            EquationOutcome::Trivial => Poly::zero(6),
        };
        let sum: Vec<BigInt> = b[0].iter().zip(&b[1]).map(|(x, y)| x + y).collect();
        assert_eq!(poly_of(&sum), poly_of(&b[0]).add(&poly_of(&b[1])));
    }

    #[test]
    fn all_equations_vanish_at_slope() {
        for s in [typical(), ammann_beenker()] {
            let g = grassmann_point(&s);
            let eqs = all_equations(&s).unwrap();
            assert!(!eqs.is_empty());
            for e in &eqs {
                assert!(e.equation.poly.is_homogeneous());
                assert_eq!(e.equation.poly.total_degree(), Some(2));
                assert!(e.equation.poly.eval(&g).is_zero());
            }
        }
    }

    #[test]
    fn reference_quadric_list_vanishes() {
        let s = typical();
        let (_, names) = grassmann_variables(4, 2);
        let g = grassmann_point(&s);
        let idx = |nm: &str| names.iter().position(|x| x == nm).unwrap();
        let quad = |terms: &[(i64, &str, &str)]| {
            Poly::from_terms(
                6,
                terms.iter().map(|&(c, a, b)| {
                    let mut m = vec![0; 6];
                    m[idx(a)] += 1;
                    m[idx(b)] += 1;
                    (m, q(c))
                }),
            )
        };
        let p = quad(&[(14, "G12", "G23"), (-9, "G14", "G23"), (-2, "G12", "G24"), (24, "G23", "G24")]);
        assert!(p.eval(&g).is_zero());
    }

    #[test]
    fn parallel_matches_sequential() {
        let s = typical();
        let a: Vec<Poly> = all_equations(&s).unwrap().into_iter().map(|r| r.equation.poly).collect();
        let b: Vec<Poly> = all_equations_with(&s, 3).unwrap().into_iter().map(|r| r.equation.poly).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn degeneracy_consistency_on_basis() {
        for s in [typical(), ammann_beenker()] {
            for ty in enumerate_types(4, 2) {
                for v in coincidence_lattice(&s, &ty).unwrap() {
                    let deg = matches!(realize(&s, &ty, &v).unwrap(), Realization::Degenerate);
                    let triv = matches!(equation_of(&s, &ty, &v).unwrap(), EquationOutcome::Trivial);
                    assert_eq!(deg, triv, "{:?} {:?}", ty, v);
                }
            }
        }
    }
}
