//! Dense univariate polynomials over Q: Euclidean algorithm, Sturm
//! sequences, real root isolation and an irreducibility test.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::rational::{common_denominator, Q};

/// Coefficients in ascending powers; never has trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UPoly {
    coeffs: Vec<Q>,
}

impl UPoly {
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Q) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `c * x^k`.
    pub fn monomial(c: Q, k: usize) -> Self {
        let mut v = vec![Q::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Q {
        self.coeffs.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn eval(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Q::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn scale(&self, s: &Q) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.leading().recip();
        self.scale(&inv)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            (0..n)
                .map(|i| {
                    let a = self.coeffs.get(i).cloned().unwrap_or_else(Q::zero);
                    let b = other.coeffs.get(i).cloned().unwrap_or_else(Q::zero);
                    a + b
                })
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Q::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn divrem(&self, div: &Self) -> (Self, Self) {
        let dd = div.degree().expect("division by zero polynomial");
        let lc_inv = div.leading().recip();
        let mut rem = self.coeffs.clone();
        let mut quo = vec![Q::zero(); self.coeffs.len().saturating_sub(dd).max(1)];
        while rem.len() > dd && !rem.is_empty() {
            let top = rem.len() - 1;
            let c = &rem[top] * &lc_inv;
            if !c.is_zero() {
                let shift = top - dd;
                for (k, dc) in div.coeffs.iter().enumerate() {
                    rem[shift + k] -= &c * dc;
                }
                quo[shift] = c;
            }
            rem.pop();
            while rem.last().is_some_and(|x| x.is_zero()) {
                rem.pop();
            }
        }
        (Self::new(quo), Self::new(rem))
    }

    pub fn rem(&self, div: &Self) -> Self {
        self.divrem(div).1
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(g, s, t)` with `s*self + t*other = g`, `g` monic.
    pub fn ext_gcd(&self, other: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::constant(Q::one()), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::constant(Q::one()));
        while !r1.is_zero() {
            let (qt, r) = r0.divrem(&r1);
            r0 = r1;
            r1 = r;
            let s = s0.sub(&qt.mul(&s1));
            s0 = s1;
            s1 = s;
            let t = t0.sub(&qt.mul(&t1));
            t0 = t1;
            t1 = t;
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = r0.leading().recip();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree() == Some(0)
    }

    /// Canonical Sturm sequence of the square-free part.
    pub fn sturm_sequence(&self) -> Vec<UPoly> {
        let g = self.gcd(&self.derivative());
        let p0 = self.divrem(&g).0;
        let mut seq = vec![p0.clone(), p0.derivative()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let r = seq[n - 2].rem(&seq[n - 1]).neg();
            if r.is_zero() {
                break;
            }
            seq.push(r);
        }
        seq
    }

    /// Number of distinct real roots in the half-open interval `(lo, hi]`.
    pub fn count_roots(&self, lo: &Q, hi: &Q) -> usize {
        let seq = self.sturm_sequence();
        let v = |x: &Q| sign_changes(seq.iter().map(|p| p.eval(x)));
        v(lo).saturating_sub(v(hi))
    }

    /// Number of distinct real roots in the closed interval `[lo, hi]`.
    pub fn count_roots_closed(&self, lo: &Q, hi: &Q) -> usize {
        self.count_roots(lo, hi) + usize::from(self.eval(lo).is_zero())
    }

    /// Cauchy bound: every real root has modulus below the returned value.
    pub fn root_bound(&self) -> Q {
        let lc = self.leading().abs();
        let m = self.coeffs[..self.coeffs.len().saturating_sub(1)]
            .iter()
            .map(|c| c.abs() / &lc)
            .fold(Q::zero(), |a, b| if b > a { b } else { a });
        m + Q::one()
    }

    /// Isolating intervals `[lo, hi]` for every distinct real root, in
    /// increasing order. Rational roots hit during bisection come back as
    /// degenerate intervals.
    pub fn isolate_real_roots(&self) -> Vec<(Q, Q)> {
        if self.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let b = self.root_bound();
        let mut out = Vec::new();
        let mut stack = vec![(-b.clone(), b)];
        while let Some((lo, hi)) = stack.pop() {
            let c = self.count_roots(&lo, &hi);
            if c == 0 {
                continue;
            }
            if c == 1 {
                if self.eval(&hi).is_zero() {
                    out.push((hi.clone(), hi));
                } else {
                    out.push((lo, hi));
                }
                continue;
            }
            let mid = (&lo + &hi) / Q::from_integer(BigInt::from(2));
            stack.push((lo, mid.clone()));
            stack.push((mid, hi));
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    /// Integer primitive associate with positive leading coefficient.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        let den = common_denominator(self.coeffs.iter());
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * Q::from_integer(den.clone())).to_integer())
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |a, b| a.gcd(b));
        let sign = if ints.last().is_some_and(|c| c.is_negative()) { -BigInt::one() } else { BigInt::one() };
        ints.into_iter().map(|c| c / &g * &sign).collect()
    }

    /// Irreducibility over Q. Uses the rational root test up to degree 3
    /// and Kronecker's interpolation method beyond.
    pub fn is_irreducible(&self) -> bool {
        let Some(deg) = self.degree() else { return false };
        if deg == 0 {
            return false;
        }
        if deg == 1 {
            return true;
        }
        if !self.is_squarefree() {
            return false;
        }
        let f = self.primitive_integer();
        if has_rational_root(&f) {
            return false;
        }
        if deg <= 3 {
            return true;
        }
        let fq = UPoly::new(f.iter().map(|c| Q::from_integer(c.clone())).collect());
        for e in 2..=deg / 2 {
            if kronecker_has_factor(&fq, e) {
                return false;
            }
        }
        true
    }
}

fn sign_changes(values: impl Iterator<Item = Q>) -> usize {
    let mut last = 0i8;
    let mut count = 0;
    for v in values {
        let s = if v.is_positive() { 1 } else if v.is_negative() { -1 } else { 0 };
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let Some(v) = n.to_u128() else {
        // Coefficients this large do not occur for hand-entered fields.
        return vec![BigInt::one(), n];
    };
    let mut out = Vec::new();
    let mut i = 1u128;
    while i * i <= v {
        if v % i == 0 {
            out.push(BigInt::from(i));
            if i * i != v {
                out.push(BigInt::from(v / i));
            }
        }
        i += 1;
    }
    out
}

fn has_rational_root(f: &[BigInt]) -> bool {
    if f[0].is_zero() {
        return true;
    }
    let fq = UPoly::new(f.iter().map(|c| Q::from_integer(c.clone())).collect());
    let lead = f.last().unwrap();
    for p in divisors(&f[0]) {
        for qd in divisors(lead) {
            for s in [BigInt::one(), -BigInt::one()] {
                let x = Q::new(&p * &s, qd.clone());
                if fq.eval(&x).is_zero() {
                    return true;
                }
            }
        }
    }
    false
}

/// Searches for an integer factor of exact degree `e` (Kronecker).
fn kronecker_has_factor(f: &UPoly, e: usize) -> bool {
    // Interpolation nodes where f does not vanish (there are no rational
    // roots at this point, so any integers work).
    let nodes: Vec<BigInt> = (0..=e as i64)
        .map(|k| BigInt::from(if k % 2 == 0 { k / 2 } else { -(k + 1) / 2 }))
        .collect();
    let values: Vec<BigInt> = nodes
        .iter()
        .map(|x| f.eval(&Q::from_integer(x.clone())).to_integer())
        .collect();
    let divs: Vec<Vec<BigInt>> = values
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let pos = divisors(v);
            if i == 0 {
                pos
            } else {
                pos.iter().flat_map(|d| [d.clone(), -d.clone()]).collect()
            }
        })
        .collect();
    let mut idx = vec![0usize; nodes.len()];
    loop {
        let picks: Vec<Q> = idx.iter().enumerate().map(|(i, &j)| Q::from_integer(divs[i][j].clone())).collect();
        let g = interpolate(&nodes, &picks);
        if g.degree() == Some(e)
            && g.coeffs().iter().all(|c| c.is_integer())
            && f.rem(&g).is_zero()
        {
            return true;
        }
        let mut k = 0;
        loop {
            if k == idx.len() {
                return false;
            }
            idx[k] += 1;
            if idx[k] < divs[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

fn interpolate(xs: &[BigInt], ys: &[Q]) -> UPoly {
    let mut acc = UPoly::zero();
    for (i, yi) in ys.iter().enumerate() {
        let mut basis = UPoly::constant(yi.clone());
        for (j, xj) in xs.iter().enumerate() {
            if i == j {
                continue;
            }
            let den = Q::from_integer(&xs[i] - xj);
            let lin = UPoly::new(vec![Q::from_integer(-xj.clone()), Q::one()]);
            basis = basis.mul(&lin).scale(&den.recip());
        }
        acc = acc.add(&basis);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf};

    fn p(c: &[i64]) -> UPoly {
        UPoly::new(c.iter().map(|&x| q(x)).collect())
    }

    #[test]
    fn division_and_gcd() {
        let a = p(&[-1, 0, 1]); // x^2 - 1
        let b = p(&[1, 1]); // x + 1
        let (qt, r) = a.divrem(&b);
        assert_eq!(qt, p(&[-1, 1]));
        assert!(r.is_zero());
        assert_eq!(a.gcd(&p(&[-1, 1]).mul(&p(&[2, 1]))), p(&[-1, 1]));
        let (g, s, t) = p(&[-2, 0, 1]).ext_gcd(&p(&[0, 1]));
        assert_eq!(g, p(&[1]));
        assert_eq!(s.mul(&p(&[-2, 0, 1])).add(&t.mul(&p(&[0, 1]))), p(&[1]));
    }

    #[test]
    fn sturm_counts() {
        let f = p(&[1, -1, 1, 1]); // x^3 + x^2 - x + 1, one real root near -1.839
        assert_eq!(f.count_roots(&q(-3), &q(3)), 1);
        assert_eq!(f.count_roots(&q(-2), &qf(-3, 2)), 1);
        let g = p(&[-2, 0, 1]);
        assert_eq!(g.count_roots(&q(-2), &q(2)), 2);
        assert_eq!(g.count_roots_closed(&q(1), &q(2)), 1);
        assert_eq!(g.isolate_real_roots().len(), 2);
        let h = p(&[0, -1, 0, 1]); // x^3 - x, rational roots
        let roots = h.isolate_real_roots();
        assert_eq!(roots.len(), 3);
    }

    #[test]
    fn irreducibility() {
        assert!(p(&[1, -1, 1, 1]).is_irreducible());
        assert!(p(&[-2, 0, 1]).is_irreducible());
        assert!(p(&[-1, -1, 1]).is_irreducible());
        assert!(!p(&[-1, 0, 1]).is_irreducible());
        assert!(p(&[-2, 1]).is_irreducible());
        // (x^2+1)(x^2+2) has no rational roots but factors.
        assert!(!p(&[2, 0, 3, 0, 1]).is_irreducible());
        assert!(p(&[-2, 0, 0, 0, 1]).is_irreducible());
        assert!(p(&[1, 1, 1, 1, 1]).is_irreducible());
        assert!(!p(&[1, 0, 1]).mul(&p(&[1, 1, 0, 1])).is_irreducible());
    }
}
