//! Sparse multivariate polynomials with rational coefficients.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::numfield::FieldElem;
use crate::rational::{fmt_q, Q};

pub type Monomial = Vec<u32>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MonomialOrder {
    Lex,
    GrevLex,
    /// Degree in the last variable first, then grevlex on the others;
    /// eliminates the last variable.
    ElimLast,
}

impl MonomialOrder {
    pub fn cmp(self, a: &[u32], b: &[u32]) -> Ordering {
        match self {
            MonomialOrder::Lex => a.cmp(b),
            MonomialOrder::GrevLex => {
                let da: u32 = a.iter().sum();
                let db: u32 = b.iter().sum();
                da.cmp(&db).then_with(|| {
                    for (x, y) in a.iter().zip(b).rev() {
                        if x != y {
                            return y.cmp(x);
                        }
                    }
                    Ordering::Equal
                })
            }
            MonomialOrder::ElimLast => {
                let k = a.len() - 1;
                a[k].cmp(&b[k]).then_with(|| MonomialOrder::GrevLex.cmp(&a[..k], &b[..k]))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, Q>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        Self::from_terms(nvars, [(vec![0; nvars], c)])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = vec![0; nvars];
        m[i] = 1;
        Self::from_terms(nvars, [(m, Q::one())])
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, Q)>) -> Self {
        let mut p = Poly::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.len(), nvars);
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.iter().sum()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut ds = self.terms.keys().map(|m| m.iter().sum::<u32>());
        match ds.next() {
            None => true,
            Some(d) => ds.all(|e| e == d),
        }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut p = self.clone();
        for (m, c) in &o.terms {
            p.add_term(m.clone(), c.clone());
        }
        p
    }

    pub fn neg(&self) -> Poly {
        self.scale(&-Q::one())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn scale(&self, s: &Q) -> Poly {
        if s.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect() }
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut p = Poly::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let m: Monomial = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                p.add_term(m, c1 * c2);
            }
        }
        p
    }

    pub fn mul_term(&self, m: &[u32], c: &Q) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.iter().zip(m).map(|(a, b)| a + b).collect(), v * c))
                .collect(),
        }
    }

    pub fn leading(&self, ord: MonomialOrder) -> Option<(&Monomial, &Q)> {
        self.terms.iter().max_by(|a, b| ord.cmp(a.0, b.0))
    }

    /// Terms sorted from largest to smallest monomial.
    pub fn sorted_terms(&self, ord: MonomialOrder) -> Vec<(&Monomial, &Q)> {
        let mut t: Vec<_> = self.terms.iter().collect();
        t.sort_by(|a, b| ord.cmp(b.0, a.0));
        t
    }

    pub fn monic(&self, ord: MonomialOrder) -> Poly {
        match self.leading(ord) {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    /// Integer coefficients with content 1 and positive leading coefficient.
    pub fn primitive(&self, ord: MonomialOrder) -> Poly {
        let Some((_, lc)) = self.leading(ord) else { return self.clone() };
        let den = self.terms.values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = self.terms.values().fold(BigInt::zero(), |acc, c| acc.gcd(&(c.numer() * &den / c.denom())));
        let mut s = Q::new(den, num);
        if lc.is_negative() {
            s = -s;
        }
        self.scale(&s)
    }

    pub fn eval(&self, point: &[FieldElem]) -> FieldElem {
        let f = point[0].field().clone();
        let mut acc = FieldElem::zero(&f);
        for (m, c) in &self.terms {
            let mut t = FieldElem::from_q(&f, c.clone());
            for (x, &e) in point.iter().zip(m) {
                if e > 0 {
                    t = &t * &x.pow(e);
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    pub fn eval_q(&self, point: &[Q]) -> Q {
        let mut acc = Q::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m) {
                for _ in 0..e {
                    t *= x;
                }
            }
            acc += t;
        }
        acc
    }

    /// Substitutes `x_i = value`.
    pub fn substitute(&self, i: usize, value: &Q) -> Poly {
        let mut p = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut m2 = m.clone();
            let e = m2[i];
            m2[i] = 0;
            let mut c2 = c.clone();
            for _ in 0..e {
                c2 *= value;
            }
            p.add_term(m2, c2);
        }
        p
    }

    /// Same polynomial in one more variable, appended last.
    pub fn with_extra_var(&self) -> Poly {
        Poly {
            nvars: self.nvars + 1,
            terms: self.terms.iter().map(|(m, c)| (m.iter().copied().chain([0]).collect(), c.clone())).collect(),
        }
    }

    /// Drops the last variable, which must not occur.
    pub fn without_last_var(&self) -> Option<Poly> {
        if self.terms.keys().any(|m| m[self.nvars - 1] > 0) {
            return None;
        }
        Some(Poly {
            nvars: self.nvars - 1,
            terms: self.terms.iter().map(|(m, c)| (m[..self.nvars - 1].to_vec(), c.clone())).collect(),
        })
    }

    /// Variables with a nonzero exponent in some term.
    pub fn support(&self) -> Vec<usize> {
        (0..self.nvars).filter(|&i| self.terms.keys().any(|m| m[i] > 0)).collect()
    }

    pub fn to_string_with(&self, names: &[String], ord: MonomialOrder) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (m, c)) in self.sorted_terms(ord).into_iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let vars: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { names[i].clone() } else { format!("{}^{}", names[i], e) })
                .collect();
            if vars.is_empty() {
                s.push_str(&fmt_q(&a));
            } else {
                if !a.is_one() {
                    let _ = write!(s, "{}*", fmt_q(&a));
                }
                s.push_str(&vars.join("*"));
            }
        }
        s
    }

    /// Monomial → coefficient map keyed by a readable monomial string.
    pub fn to_named_map(&self, names: &[String]) -> BTreeMap<String, String> {
        self.terms
            .iter()
            .map(|(m, c)| {
                let key: Vec<String> = m
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| if e == 1 { names[i].clone() } else { format!("{}^{}", names[i], e) })
                    .collect();
                let key = if key.is_empty() { "1".to_string() } else { key.join("*") };
                (key, fmt_q(c))
            })
            .collect()
    }
}

/// Univariate coefficients (ascending) of a polynomial in the single
/// variable `i`; `None` if another variable occurs.
pub fn as_univariate(p: &Poly, i: usize) -> Option<Vec<Q>> {
    let mut out: Vec<Q> = Vec::new();
    for (m, c) in p.terms() {
        if m.iter().enumerate().any(|(j, &e)| j != i && e > 0) {
            return None;
        }
        let e = m[i] as usize;
        if out.len() <= e {
            out.resize(e + 1, Q::zero());
        }
        out[e] += c;
    }
    Some(out)
}
