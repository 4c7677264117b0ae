//! Slopes, their Grassmann coordinates and the Plücker relations.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{hnf, Matrix};
use crate::numfield::{FieldElem, NumberField};
use crate::rational::Q;

/// A d-plane of R^n given by an n×d generator matrix over Q(α).
#[derive(Clone, Debug)]
pub struct Slope {
    field: Arc<NumberField>,
    n: usize,
    d: usize,
    generators: Matrix<FieldElem>,
    offset: Option<Vec<Q>>,
}

impl Slope {
    /// `columns` are the d generators, each of length n.
    pub fn new(field: &Arc<NumberField>, columns: Vec<Vec<FieldElem>>, offset: Option<Vec<Q>>) -> Result<Self> {
        let d = columns.len();
        let n = columns.first().map_or(0, Vec::len);
        if d == 0 || n <= d {
            return Err(Error::DimensionMismatch(format!("need n > d >= 1, got n = {n}, d = {d}")));
        }
        if let Some(o) = &offset {
            if o.len() != n {
                return Err(Error::DimensionMismatch(format!("offset has length {}, expected {n}", o.len())));
            }
        }
        let zero = FieldElem::zero(field);
        let generators = Matrix::from_cols(columns, &zero)?;
        if generators.rank() != d {
            return Err(Error::RankDeficient);
        }
        Ok(Slope { field: Arc::clone(field), n, d, generators, offset })
    }

    /// Convenience constructor from coefficient lists (ascending powers of α).
    pub fn from_coeffs(field: &Arc<NumberField>, columns: &[Vec<Vec<Q>>], offset: Option<Vec<Q>>) -> Result<Self> {
        let cols = columns
            .iter()
            .map(|c| c.iter().map(|e| FieldElem::new(field, e.clone())).collect())
            .collect();
        Self::new(field, cols, offset)
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Codimension n − d, the dimension of the window.
    pub fn m(&self) -> usize {
        self.n - self.d
    }

    pub fn generators(&self) -> &Matrix<FieldElem> {
        &self.generators
    }

    pub fn offset(&self) -> Option<&[Q]> {
        self.offset.as_deref()
    }

    pub fn with_offset(&self, offset: Option<Vec<Q>>) -> Self {
        Slope { offset, ..self.clone() }
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem::zero(&self.field)
    }

    /// Orthogonal projections (π, π') onto E and E'.
    pub fn projectors(&self) -> (Matrix<FieldElem>, Matrix<FieldElem>) {
        let u = &self.generators;
        let ut = u.transpose();
        let gram_inv = ut.mul(u).and_then(|g| g.inverse()).expect("full column rank");
        let pi = u.mul(&gram_inv).and_then(|m| m.mul(&ut)).expect("shapes agree");
        let pi_perp = Matrix::identity(self.n, &self.zero()).sub(&pi).expect("square");
        (pi, pi_perp)
    }

    /// Linear chart of E': an (n−d)×n matrix whose kernel is E. Its rows are
    /// the nonzero rows of the reduced echelon form of π'.
    pub fn chart(&self) -> Matrix<FieldElem> {
        let (_, pi_perp) = self.projectors();
        let (r, piv) = pi_perp.rref();
        let rows: Vec<usize> = (0..piv.len()).collect();
        let cols: Vec<usize> = (0..self.n).collect();
        r.submatrix(&rows, &cols)
    }

    /// Rational vectors u^(j) with generator = Σ_j α^j u^(j), one per
    /// generator and power.
    pub fn rational_parts(&self) -> Vec<Vec<Q>> {
        let k = self.field.degree();
        let mut out = Vec::new();
        for c in 0..self.d {
            for j in 0..k {
                out.push((0..self.n).map(|i| self.generators.get(i, c).coeffs()[j].clone()).collect());
            }
        }
        out
    }

    /// Genericity test: E is generic iff the rational parts of its
    /// generators span Q^n. Otherwise returns a primitive integer normal of
    /// the smallest rational subspace containing E.
    pub fn is_generic(&self) -> (bool, Option<Vec<BigInt>>) {
        let parts = self.rational_parts();
        let m = Matrix::from_rows(parts, &Q::zero()).expect("rectangular");
        if m.rank() == self.n {
            return (true, None);
        }
        let kernel = m.integer_kernel();
        // columns = kernel vectors; first HNF column is the canonical witness
        let cols: Vec<Vec<BigInt>> = (0..self.n).map(|i| kernel.iter().map(|v| v[i].clone()).collect()).collect();
        let h = hnf(&cols);
        let mut w: Vec<BigInt> = h.iter().map(|row| row[0].clone()).collect();
        if w.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
            w.iter_mut().for_each(|x| *x = -x.clone());
        }
        (false, Some(w))
    }

    pub fn grassmann(&self) -> GrassmannCoords {
        let mut coords = BTreeMap::new();
        let cols: Vec<usize> = (0..self.d).collect();
        for t in combinations(self.n, self.d) {
            let det = self.generators.submatrix(&t, &cols).det().expect("square");
            coords.insert(t, det);
        }
        GrassmannCoords { n: self.n, d: self.d, field: Arc::clone(&self.field), coords }
    }
}

/// All ascending k-subsets of `0..n`, in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Sorts an index tuple; returns the permutation sign, or `None` when an
/// index repeats.
pub fn sort_with_sign(t: &[usize]) -> Option<(Vec<usize>, i8)> {
    let mut v = t.to_vec();
    let mut sign = 1i8;
    for i in 0..v.len() {
        for j in 0..v.len().saturating_sub(1 + i) {
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                sign = -sign;
            } else if v[j] == v[j + 1] {
                return None;
            }
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, sign))
}

/// Variable name of a coordinate, 1-based: `G13`, or `G_2_10` once n ≥ 10.
pub fn coord_name(n: usize, t: &[usize]) -> String {
    if n <= 9 {
        format!("G{}", t.iter().map(|i| (i + 1).to_string()).collect::<String>())
    } else {
        format!("G_{}", t.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join("_"))
    }
}

/// The d×d minors of a generator matrix, keyed by ascending 0-based tuples.
#[derive(Clone, Debug)]
pub struct GrassmannCoords {
    n: usize,
    d: usize,
    field: Arc<NumberField>,
    coords: BTreeMap<Vec<usize>, FieldElem>,
}

impl PartialEq for GrassmannCoords {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.d == other.d && self.coords == other.coords
    }
}

impl GrassmannCoords {
    pub fn from_map(n: usize, d: usize, field: &Arc<NumberField>, coords: BTreeMap<Vec<usize>, FieldElem>) -> Self {
        GrassmannCoords { n, d, field: Arc::clone(field), coords }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    /// Ascending tuples with their values, in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = (&Vec<usize>, &FieldElem)> {
        self.coords.iter()
    }

    /// Value for any index tuple, extended antisymmetrically.
    pub fn get(&self, t: &[usize]) -> FieldElem {
        match sort_with_sign(t) {
            None => FieldElem::zero(&self.field),
            Some((s, sign)) => {
                let v = self.coords.get(&s).cloned().unwrap_or_else(|| FieldElem::zero(&self.field));
                if sign < 0 {
                    -v
                } else {
                    v
                }
            }
        }
    }

    pub fn names(&self) -> Vec<String> {
        self.coords.keys().map(|t| coord_name(self.n, t)).collect()
    }

    /// Exact signs of all coordinates in tuple order.
    pub fn sign_vector(&self) -> Vec<i8> {
        self.coords.values().map(FieldElem::sign).collect()
    }

    pub fn scale(&self, s: &FieldElem) -> Self {
        let coords = self.coords.iter().map(|(k, v)| (k.clone(), v * s)).collect();
        GrassmannCoords { coords, ..self.clone() }
    }

    /// `Some(λ)` with `self = λ · other` when the two are proportional.
    pub fn ratio_to(&self, other: &GrassmannCoords) -> Option<FieldElem> {
        let mut lambda: Option<FieldElem> = None;
        for (k, v) in &self.coords {
            let w = other.coords.get(k)?;
            match (v.is_zero(), w.is_zero()) {
                (true, true) => continue,
                (false, false) => {}
                _ => return None,
            }
            let r = v.checked_div(w).ok()?;
            match &lambda {
                None => lambda = Some(r),
                Some(l) if *l == r => {}
                Some(_) => return None,
            }
        }
        lambda
    }

    /// One residual per Plücker relation.
    pub fn plucker_residuals(&self) -> Vec<FieldElem> {
        plucker_relations(self.n, self.d)
            .iter()
            .map(|rel| {
                rel.terms.iter().fold(FieldElem::zero(&self.field), |acc, (c, a, b)| {
                    let p = &self.get(a) * &self.get(b);
                    &acc + &p.scale_int(*c)
                })
            })
            .collect()
    }

    /// Generators with entry (j, i) = G_{1..i−1, j, i+1..d}.
    pub fn to_slope(&self) -> Result<Slope> {
        if self.plucker_residuals().iter().any(|r| !r.is_zero()) {
            return Err(Error::PluckerViolation);
        }
        let lead: Vec<usize> = (0..self.d).collect();
        if self.get(&lead).is_zero() {
            return Err(Error::DegenerateLeadingCoordinate);
        }
        let cols = (0..self.d)
            .map(|i| {
                (0..self.n)
                    .map(|j| {
                        let mut t = lead.clone();
                        t[i] = j;
                        self.get(&t)
                    })
                    .collect()
            })
            .collect();
        Slope::new(&self.field, cols, None)
    }
}

/// A quadratic Plücker relation Σ c · G_A · G_B = 0 with ascending tuples.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct PluckerRelation {
    pub terms: Vec<(i64, Vec<usize>, Vec<usize>)>,
}

/// The three-term (and longer) Plücker relations
/// Σ_l (−1)^l G_{I ∪ j_l} G_{J \ j_l} over |I| = d−1, |J| = d+1,
/// with trivial relations dropped and duplicates (up to sign) removed.
pub fn plucker_relations(n: usize, d: usize) -> Vec<PluckerRelation> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for i_set in combinations(n, d - 1) {
        for j_set in combinations(n, d + 1) {
            let mut acc: BTreeMap<(Vec<usize>, Vec<usize>), i64> = BTreeMap::new();
            for (l, &jl) in j_set.iter().enumerate() {
                let mut a = i_set.clone();
                a.push(jl);
                let b: Vec<usize> = j_set.iter().copied().filter(|&x| x != jl).collect();
                let Some((a, sa)) = sort_with_sign(&a) else { continue };
                let sign = if l % 2 == 0 { 1 } else { -1 } * sa as i64;
                let key = if a <= b { (a, b) } else { (b, a) };
                *acc.entry(key).or_insert(0) += sign;
            }
            let mut terms: Vec<(i64, Vec<usize>, Vec<usize>)> =
                acc.into_iter().filter(|(_, c)| *c != 0).map(|((a, b), c)| (c, a, b)).collect();
            if terms.is_empty() {
                continue;
            }
            if terms[0].0 < 0 {
                terms.iter_mut().for_each(|t| t.0 = -t.0);
            }
            if seen.insert(terms.clone()) {
                out.push(PluckerRelation { terms });
            }
        }
    }
    out
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::rational::{q, qf};
    use proptest::prelude::*;

    pub(crate) fn typical() -> Slope {
        let f = NumberField::new(vec![q(1), q(-1), q(1), q(1)], (q(-2), qf(-3, 2))).unwrap();
        let e = |c: &[i64]| c.iter().map(|&x| q(x)).collect::<Vec<_>>();
        let u1 = vec![e(&[0, 1]), e(&[1, 2, 2]), e(&[2, 2]), e(&[0, 0, 2])];
        let u2 = vec![e(&[0, 2, 2]), e(&[1, 1, 1]), e(&[2]), e(&[1, 2, 2])];
        Slope::from_coeffs(&f, &[u1, u2], None).unwrap()
    }

    pub(crate) fn ammann_beenker() -> Slope {
        let f = NumberField::new(vec![q(-2), q(0), q(1)], (q(1), q(2))).unwrap();
        let e = |c: &[i64]| c.iter().map(|&x| q(x)).collect::<Vec<_>>();
        let u1 = vec![e(&[-1]), e(&[0]), e(&[1]), e(&[0, 1])];
        let u2 = vec![e(&[0]), e(&[1]), e(&[0, 1]), e(&[1])];
        Slope::from_coeffs(&f, &[u1, u2], None).unwrap()
    }

    pub(crate) fn penrose() -> Slope {
        let f = NumberField::new(vec![q(-1), q(-1), q(1)], (q(1), q(2))).unwrap();
        let e = |c: &[i64]| c.iter().map(|&x| q(x)).collect::<Vec<_>>();
        let u1 = vec![e(&[0, 1]), e(&[0]), e(&[0, -1]), e(&[-1]), e(&[1])];
        let u2 = vec![e(&[-1]), e(&[1]), e(&[0, 1]), e(&[0]), e(&[0, -1])];
        Slope::from_coeffs(&f, &[u1, u2], None).unwrap()
    }

    fn fe(s: &Slope, c: &[i64]) -> FieldElem {
        FieldElem::new(s.field(), c.iter().map(|&x| q(x)).collect())
    }

    #[test]
    fn typical_coordinates() {
        let s = typical();
        let g = s.grassmann();
        assert_eq!(g.get(&[0, 1]), fe(&s, &[3, 0, -6]));
        assert_eq!(g.get(&[0, 2]), fe(&s, &[4, -6, -4]));
        assert_eq!(g.get(&[0, 3]), fe(&s, &[-2, 7, -4]));
        assert_eq!(g.get(&[1, 2]), fe(&s, &[2, -2, 2]));
        assert_eq!(g.get(&[1, 3]), fe(&s, &[-3, 6, 4]));
        assert_eq!(g.get(&[2, 3]), fe(&s, &[-2, 10]));
        assert_eq!(g.get(&[3, 2]), -g.get(&[2, 3]));
        assert!(g.get(&[1, 1]).is_zero());
        assert!(g.plucker_residuals().iter().all(FieldElem::is_zero));
        assert_eq!(g.names(), vec!["G12", "G13", "G14", "G23", "G24", "G34"]);
    }

    #[test]
    fn plucker_by_substitution_oracle() {
        // G12 G34 − G13 G24 + G14 G23 written out by hand
        let s = typical();
        let g = s.grassmann();
        let r = &(&g.get(&[0, 1]) * &g.get(&[2, 3])) - &(&g.get(&[0, 2]) * &g.get(&[1, 3]));
        let r = &r + &(&g.get(&[0, 3]) * &g.get(&[1, 2]));
        assert!(r.is_zero());
        let rels = plucker_relations(4, 2);
        assert_eq!(rels.len(), 1);
        assert_eq!(rels[0].terms, vec![(1, vec![0, 1], vec![2, 3]), (-1, vec![0, 2], vec![1, 3]), (1, vec![0, 3], vec![1, 2])]);
    }

    #[test]
    fn ammann_beenker_coordinates() {
        let s = ammann_beenker();
        // these generators give every coordinate with a factor −1
        let g = s.grassmann().scale(&fe(&s, &[-1]));
        let one = fe(&s, &[1]);
        let a = fe(&s, &[0, 1]);
        for t in [[0, 1], [0, 3], [1, 2], [2, 3]] {
            assert_eq!(g.get(&t), one);
        }
        assert_eq!(g.get(&[0, 2]), a);
        assert_eq!(g.get(&[1, 3]), a);
        assert_eq!(s.is_generic(), (true, None));
    }

    #[test]
    fn coordinate_plane() {
        let f = NumberField::rationals();
        let e = |c: i64| vec![q(c)];
        let s = Slope::from_coeffs(&f, &[vec![e(1), e(0), e(0), e(0)], vec![e(0), e(1), e(0), e(0)]], None).unwrap();
        let g = s.grassmann();
        for (t, v) in g.iter() {
            assert_eq!(v.is_one(), t == &vec![0, 1]);
            if t != &vec![0, 1] {
                assert!(v.is_zero());
            }
        }
        assert!(g.plucker_residuals().iter().all(FieldElem::is_zero));
        let back = g.to_slope().unwrap();
        assert!(back.grassmann().ratio_to(&g).is_some());
    }

    #[test]
    fn genericity() {
        assert_eq!(typical().is_generic(), (true, None));
        let (generic, w) = penrose().is_generic();
        assert!(!generic);
        assert_eq!(w.unwrap(), vec![BigInt::from(1); 5]);
    }

    #[test]
    fn projector_identities() {
        let s = ammann_beenker();
        let (pi, pp) = s.projectors();
        let id = Matrix::identity(4, &s.zero());
        assert_eq!(pi.add(&pp).unwrap(), id);
        assert_eq!(pp.mul(&pp).unwrap(), pp);
        assert_eq!(pp.transpose(), pp);
        for c in 0..2 {
            let u = s.generators().col(c);
            assert!(pp.mul_vec(&u).unwrap().iter().all(FieldElem::is_zero));
        }
        // UᵀU = [[4, 2α], [2α, 4]] directly; π'_{11} = 1 − u_1ᵀ (UᵀU)⁻¹ u_1 with u_1 = (−1, 0)
        // (UᵀU)⁻¹_{11} = 4 / (16 − 8) = 1/2, so π'_{11} = 1/2
        assert_eq!(pp.get(0, 0), &FieldElem::from_q(s.field(), qf(1, 2)));
        let chart = s.chart();
        assert_eq!(chart.rows(), 2);
        for c in 0..2 {
            let u = s.generators().col(c);
            assert!(chart.mul_vec(&u).unwrap().iter().all(FieldElem::is_zero));
        }
    }

    #[test]
    fn comparison_slope_from_coordinates() {
        let f = NumberField::rationals();
        let v = |x: Q| FieldElem::from_q(&f, x);
        let mut m = BTreeMap::new();
        for (t, x) in [
            (vec![0, 1], q(1)),
            (vec![0, 2], qf(3, 2)),
            (vec![0, 3], q(1)),
            (vec![1, 2], q(1)),
            (vec![1, 3], qf(4, 3)),
            (vec![2, 3], q(1)),
        ] {
            m.insert(t, v(x));
        }
        let g = GrassmannCoords::from_map(4, 2, &f, m);
        let s = g.to_slope().unwrap();
        assert!(s.grassmann().ratio_to(&g).is_some());
        let mut bad = g.clone();
        bad.coords.insert(vec![1, 3], v(q(1)));
        assert_eq!(bad.to_slope().unwrap_err(), Error::PluckerViolation);
        let mut zero_lead = BTreeMap::new();
        for t in combinations(4, 2) {
            zero_lead.insert(t.clone(), v(if t == vec![2, 3] { q(1) } else { q(0) }));
        }
        let z = GrassmannCoords::from_map(4, 2, &f, zero_lead);
        assert_eq!(z.to_slope().unwrap_err(), Error::DegenerateLeadingCoordinate);
    }

    #[test]
    fn typical_round_trip() {
        let g = typical().grassmann();
        let back = g.to_slope().unwrap().grassmann();
        assert!(back.ratio_to(&g).is_some());
    }

    fn rational_matrix() -> impl Strategy<Value = (usize, usize, Vec<i64>)> {
        (2usize..4).prop_flat_map(|d| {
            ((d + 1)..7).prop_flat_map(move |n| (Just(n), Just(d), prop::collection::vec(-5i64..6, n * d)))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(30))]

        #[test]
        fn minors_satisfy_plucker((n, d, xs) in rational_matrix()) {
            let f = NumberField::rationals();
            let cols: Vec<Vec<FieldElem>> =
                (0..d).map(|c| (0..n).map(|r| FieldElem::from_int(&f, xs[c * n + r])).collect()).collect();
            let Ok(s) = Slope::new(&f, cols, None) else { return Ok(()) };
            prop_assert!(s.grassmann().plucker_residuals().iter().all(FieldElem::is_zero));
        }

        #[test]
        fn grassmann_scales_by_det(t in prop::collection::vec(-4i64..5, 4)) {
            let s = typical();
            let f = s.field().clone();
            let tm = Matrix::from_rows(
                vec![vec![FieldElem::from_int(&f, t[0]), FieldElem::from_int(&f, t[1])],
                     vec![FieldElem::from_int(&f, t[2]), FieldElem::from_int(&f, t[3])]],
                &s.zero()).unwrap();
            let det = tm.det().unwrap();
            prop_assume!(!det.is_zero());
            let u = s.generators().mul(&tm).unwrap();
            let s2 = Slope::new(&f, (0..2).map(|c| u.col(c)).collect(), None).unwrap();
            prop_assert_eq!(s2.grassmann(), s.grassmann().scale(&det));
        }
    }
}
