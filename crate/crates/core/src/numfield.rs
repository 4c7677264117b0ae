//! Exact arithmetic in a real number field Q(α).
//!
//! A field is given by the minimal polynomial of α and a rational interval
//! isolating the real root that α denotes. Elements are polynomials in α
//! of degree below the field degree, always reduced. Signs are decided
//! exactly: a cheap outward-rounded floating point enclosure is tried
//! first and bisection of the isolating interval takes over when it is
//! inconclusive.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{fmt_q, q_to_f64, q_to_f64_interval, Q};
use crate::upoly::UPoly;

/// Width (as a power of two) the stored isolating interval is refined to.
const TIGHT_BITS: u32 = 96;

#[derive(Debug)]
pub struct NumberField {
    minpoly: UPoly,
    degree: usize,
    /// Isolating interval as supplied by the caller.
    given: (Q, Q),
    /// Refined isolating interval; `lo == hi` iff α is rational.
    lo: Q,
    hi: Q,
    sign_at_lo: i8,
    /// `reduction[j]` holds α^(k+j) in the power basis, `j < k - 1`.
    reduction: Vec<Vec<Q>>,
    /// Outward f64 enclosures of α^i, `i < k`.
    powers_f64: Vec<(f64, f64)>,
}

impl NumberField {
    /// Builds Q(α) for the unique root of `minpoly` (ascending coefficients)
    /// inside `[lo, hi]`.
    pub fn new(minpoly: Vec<Q>, interval: (Q, Q)) -> Result<Arc<Self>> {
        let poly = UPoly::new(minpoly);
        let degree = match poly.degree() {
            None | Some(0) => return Err(Error::ConstantMinpoly),
            Some(k) => k,
        };
        let (lo, hi) = interval;
        if lo >= hi {
            return Err(Error::BadInterval);
        }
        if !poly.is_irreducible() {
            return Err(Error::ReducibleMinpoly);
        }
        match poly.count_roots_closed(&lo, &hi) {
            0 => return Err(Error::NoRootInInterval),
            1 => {}
            _ => return Err(Error::MultipleRootsInInterval),
        }
        let poly = poly.monic();
        let given = (lo.clone(), hi.clone());
        let (lo, hi, sign_at_lo) = if degree == 1 {
            let root = -poly.coeffs()[0].clone();
            (root.clone(), root, 0)
        } else {
            let s = sgn(&poly.eval(&lo));
            let mut lo = lo;
            let mut hi = hi;
            let target = Q::new(BigInt::one(), BigInt::one() << TIGHT_BITS);
            while &hi - &lo > target {
                let mid = (&lo + &hi) / Q::from_integer(BigInt::from(2));
                if sgn(&poly.eval(&mid)) == s {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            (lo, hi, s)
        };

        // α^k = -(c_0 + ... + c_{k-1} α^{k-1}); higher powers by shifting.
        let mut reduction = Vec::new();
        let mut cur: Vec<Q> = poly.coeffs()[..degree].iter().map(|c| -c).collect();
        for _ in 0..degree.saturating_sub(1) {
            reduction.push(cur.clone());
            let top = cur[degree - 1].clone();
            let mut next = vec![Q::zero(); degree];
            for i in 1..degree {
                next[i] = cur[i - 1].clone();
            }
            for i in 0..degree {
                next[i] -= &top * &poly.coeffs()[i];
            }
            cur = next;
        }

        let mut powers_f64 = Vec::with_capacity(degree);
        let mut p = (Q::one(), Q::one());
        for _ in 0..degree {
            let (a, _) = q_to_f64_interval(&p.0);
            let (_, b) = q_to_f64_interval(&p.1);
            let (c, _) = q_to_f64_interval(&p.1);
            let (_, d) = q_to_f64_interval(&p.0);
            powers_f64.push((a.min(c), b.max(d)));
            p = interval_mul(&p, &(lo.clone(), hi.clone()));
        }

        Ok(Arc::new(NumberField { minpoly: poly, degree, given, lo, hi, sign_at_lo, reduction, powers_f64 }))
    }

    /// The field Q itself, presented as Q(α) with α = 0.
    pub fn rationals() -> Arc<Self> {
        Self::new(vec![Q::zero(), Q::one()], (Q::from_integer((-1).into()), Q::one()))
            .expect("x is irreducible")
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Monic minimal polynomial, ascending coefficients.
    pub fn minpoly(&self) -> &[Q] {
        self.minpoly.coeffs()
    }

    pub fn given_interval(&self) -> (&Q, &Q) {
        (&self.given.0, &self.given.1)
    }

    /// Current isolating interval of α.
    pub fn root_interval(&self) -> (&Q, &Q) {
        (&self.lo, &self.hi)
    }

    /// A copy of the field whose isolating interval is refined to width at
    /// most `2^-bits`.
    pub fn refined(&self, bits: u32) -> NumberField {
        let (lo, hi) = self.refine_interval(self.lo.clone(), self.hi.clone(), bits);
        NumberField {
            minpoly: self.minpoly.clone(),
            degree: self.degree,
            given: self.given.clone(),
            lo,
            hi,
            sign_at_lo: self.sign_at_lo,
            reduction: self.reduction.clone(),
            powers_f64: self.powers_f64.clone(),
        }
    }

    fn refine_interval(&self, mut lo: Q, mut hi: Q, bits: u32) -> (Q, Q) {
        let target = Q::new(BigInt::one(), BigInt::one() << bits);
        while &hi - &lo > target {
            let (a, b) = self.bisect(lo, hi);
            lo = a;
            hi = b;
        }
        (lo, hi)
    }

    fn bisect(&self, lo: Q, hi: Q) -> (Q, Q) {
        let mid = (&lo + &hi) / Q::from_integer(BigInt::from(2));
        if sgn(&self.minpoly.eval(&mid)) == self.sign_at_lo {
            (mid, hi)
        } else {
            (lo, mid)
        }
    }

    pub fn same_as(&self, other: &NumberField) -> bool {
        std::ptr::eq(self, other)
            || (self.minpoly == other.minpoly && self.lo <= other.hi && other.lo <= self.hi)
    }

    /// Approximate value of α.
    pub fn alpha_f64(&self) -> f64 {
        q_to_f64(&((&self.lo + &self.hi) / Q::from_integer(BigInt::from(2))))
    }
}

fn sgn(x: &Q) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

fn interval_mul(a: &(Q, Q), b: &(Q, Q)) -> (Q, Q) {
    let c = [&a.0 * &b.0, &a.0 * &b.1, &a.1 * &b.0, &a.1 * &b.1];
    let mut lo = c[0].clone();
    let mut hi = c[0].clone();
    for v in &c[1..] {
        if *v < lo {
            lo = v.clone();
        }
        if *v > hi {
            hi = v.clone();
        }
    }
    (lo, hi)
}

/// Element of Q(α): `coeffs[i]` multiplies α^i; length is the field degree.
#[derive(Clone)]
pub struct FieldElem {
    field: Arc<NumberField>,
    coeffs: Vec<Q>,
}

/// Binary field operations exposed with explicit error reporting.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl FieldElem {
    pub fn new(field: &Arc<NumberField>, mut coeffs: Vec<Q>) -> Self {
        if coeffs.len() > field.degree {
            coeffs = reduce(field, coeffs);
        }
        coeffs.resize(field.degree, Q::zero());
        FieldElem { field: Arc::clone(field), coeffs }
    }

    pub fn zero(field: &Arc<NumberField>) -> Self {
        Self::new(field, Vec::new())
    }

    pub fn one(field: &Arc<NumberField>) -> Self {
        Self::from_q(field, Q::one())
    }

    pub fn from_q(field: &Arc<NumberField>, x: Q) -> Self {
        Self::new(field, vec![x])
    }

    pub fn from_int(field: &Arc<NumberField>, x: i64) -> Self {
        Self::from_q(field, Q::from_integer(BigInt::from(x)))
    }

    pub fn from_bigint(field: &Arc<NumberField>, x: &BigInt) -> Self {
        Self::from_q(field, Q::from_integer(x.clone()))
    }

    /// The generator α.
    pub fn alpha(field: &Arc<NumberField>) -> Self {
        Self::new(field, vec![Q::zero(), Q::one()])
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// `Some(q)` when the element is rational.
    pub fn as_rational(&self) -> Option<&Q> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(&self.coeffs[0])
        } else if self.field.degree == 1 {
            unreachable!()
        } else {
            None
        }
    }

    pub fn compatible(&self, other: &FieldElem) -> bool {
        Arc::ptr_eq(&self.field, &other.field) || self.field.same_as(&other.field)
    }

    pub fn scale_q(&self, s: &Q) -> Self {
        FieldElem { field: Arc::clone(&self.field), coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    pub fn scale_int(&self, s: i64) -> Self {
        self.scale_q(&Q::from_integer(BigInt::from(s)))
    }

    /// Multiplicative inverse via the extended Euclidean algorithm.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(Self::from_q(&self.field, r.recip()));
        }
        let a = UPoly::new(self.coeffs.clone());
        let (g, s, _) = a.ext_gcd(&self.field.minpoly);
        debug_assert_eq!(g.degree(), Some(0));
        Ok(Self::new(&self.field, s.coeffs().to_vec()))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    /// Exact arithmetic with explicit field and zero-division checks.
    pub fn apply(&self, other: &Self, op: FieldOp) -> Result<Self> {
        if !self.compatible(other) {
            return Err(Error::FieldMismatch);
        }
        Ok(match op {
            FieldOp::Add => self + other,
            FieldOp::Sub => self - other,
            FieldOp::Mul => self * other,
            FieldOp::Div => self.checked_div(other)?,
        })
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.field);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Exact sign under the real embedding α ↦ root.
    pub fn sign(&self) -> i8 {
        if self.is_zero() {
            return 0;
        }
        if let Some(r) = self.as_rational() {
            return sgn(r);
        }
        if let Some(s) = self.sign_f64() {
            return s;
        }
        let mut lo = self.field.lo.clone();
        let mut hi = self.field.hi.clone();
        loop {
            let (a, b) = self.enclose_on(&lo, &hi);
            if a.is_positive() {
                return 1;
            }
            if b.is_negative() {
                return -1;
            }
            (lo, hi) = self.field.bisect(lo, hi);
        }
    }

    /// Outward-rounded floating point enclosure; `None` if it straddles 0.
    fn sign_f64(&self) -> Option<i8> {
        let (lo, hi) = self.f64_interval();
        if lo > 0.0 {
            Some(1)
        } else if hi < 0.0 {
            Some(-1)
        } else {
            None
        }
    }

    /// Certified f64 interval containing the value.
    pub fn f64_interval(&self) -> (f64, f64) {
        let mut acc = (0.0f64, 0.0f64);
        for (c, p) in self.coeffs.iter().zip(&self.field.powers_f64) {
            if c.is_zero() {
                continue;
            }
            let cv = q_to_f64_interval(c);
            let prods = [cv.0 * p.0, cv.0 * p.1, cv.1 * p.0, cv.1 * p.1];
            let lo = prods.iter().cloned().fold(f64::INFINITY, f64::min).next_down();
            let hi = prods.iter().cloned().fold(f64::NEG_INFINITY, f64::max).next_up();
            acc = ((acc.0 + lo).next_down(), (acc.1 + hi).next_up());
        }
        if acc.0.is_nan() || acc.1.is_nan() {
            return (f64::NEG_INFINITY, f64::INFINITY);
        }
        acc
    }

    fn enclose_on(&self, lo: &Q, hi: &Q) -> (Q, Q) {
        let base = (lo.clone(), hi.clone());
        let mut pw = (Q::one(), Q::one());
        let mut acc = (Q::zero(), Q::zero());
        for c in &self.coeffs {
            if !c.is_zero() {
                let (a, b) = (c * &pw.0, c * &pw.1);
                if a <= b {
                    acc = (acc.0 + a, acc.1 + b);
                } else {
                    acc = (acc.0 + b, acc.1 + a);
                }
            }
            pw = interval_mul(&pw, &base);
        }
        acc
    }

    /// Rational interval of width at most `width` containing the value.
    pub fn enclose(&self, width: &Q) -> (Q, Q) {
        let mut lo = self.field.lo.clone();
        let mut hi = self.field.hi.clone();
        loop {
            let (a, b) = self.enclose_on(&lo, &hi);
            if &(&b - &a) <= width {
                return (a, b);
            }
            (lo, hi) = self.field.bisect(lo, hi);
        }
    }

    pub fn to_f64(&self) -> f64 {
        let (a, b) = self.f64_interval();
        if a.is_finite() && b.is_finite() && (b - a) <= 1e-9 * (1.0 + a.abs()) {
            return 0.5 * (a + b);
        }
        let (a, b) = self.enclose(&Q::new(BigInt::one(), BigInt::one() << 60));
        q_to_f64(&((a + b) / Q::from_integer(BigInt::from(2))))
    }

    /// Exact floor of the real value.
    pub fn floor(&self) -> BigInt {
        if let Some(r) = self.as_rational() {
            return crate::rational::floor_q(r);
        }
        // Irrational values are never integers, so refinement terminates.
        let mut width = Q::new(BigInt::one(), BigInt::from(4));
        loop {
            let (a, b) = self.enclose(&width);
            let fa = crate::rational::floor_q(&a);
            if fa == crate::rational::floor_q(&b) && Q::from_integer(fa.clone()) != a {
                return fa;
            }
            width = width / Q::from_integer(BigInt::from(16));
        }
    }

    pub fn ceil(&self) -> BigInt {
        -(-self).floor()
    }

    pub fn cmp_value(&self, other: &Self) -> Ordering {
        match (self - other).sign() {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }

    pub fn abs(&self) -> Self {
        if self.sign() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    /// Decimal expansion truncated to `digits` significant digits, so every
    /// emitted digit is exact.
    pub fn approx(&self, digits: usize) -> String {
        approx_decimal(self, digits.max(1))
    }

    /// Polynomial rendering in α, e.g. `-4*a^2 - 2*a + 2`.
    pub fn to_poly_string(&self, var: &str) -> String {
        let mut parts: Vec<String> = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            let body = match i {
                0 => fmt_q(&mag),
                _ => {
                    let v = if i == 1 { var.to_string() } else { format!("{var}^{i}") };
                    if mag.is_one() {
                        v
                    } else {
                        format!("{}*{}", fmt_q(&mag), v)
                    }
                }
            };
            parts.push(format!("{sign} {body}"));
        }
        if parts.is_empty() {
            return "0".into();
        }
        let joined = parts.join(" ");
        if let Some(rest) = joined.strip_prefix("+ ") {
            rest.to_string()
        } else {
            format!("-{}", &joined[2..])
        }
    }
}

fn reduce(field: &NumberField, mut coeffs: Vec<Q>) -> Vec<Q> {
    let k = field.degree;
    if coeffs.len() <= k {
        coeffs.resize(k, Q::zero());
        return coeffs;
    }
    let mut out: Vec<Q> = coeffs[..k].to_vec();
    for (j, c) in coeffs.drain(k..).enumerate() {
        if c.is_zero() {
            continue;
        }
        let row = field
            .reduction
            .get(j)
            .cloned()
            .unwrap_or_else(|| power_in_basis(field, k + j));
        for (o, r) in out.iter_mut().zip(&row) {
            *o += &c * r;
        }
    }
    out
}

fn power_in_basis(field: &NumberField, e: usize) -> Vec<Q> {
    let mut v = vec![Q::zero(); e + 1];
    v[e] = Q::one();
    let p = UPoly::new(v).rem(&field.minpoly);
    let mut out = p.coeffs().to_vec();
    out.resize(field.degree, Q::zero());
    out
}

fn approx_decimal(x: &FieldElem, digits: usize) -> String {
    if x.is_zero() {
        return format_scaled(&BigInt::zero(), digits as i64 - 1);
    }
    // Find exponent e with 10^e <= |x| < 10^(e+1), then truncate to
    // digits-1-e decimals. Refine until both interval ends agree.
    let ten = Q::from_integer(BigInt::from(10));
    let mut width = Q::new(BigInt::one(), BigInt::from(1000));
    loop {
        let (a, b) = if let Some(r) = x.as_rational() { (r.clone(), r.clone()) } else { x.enclose(&width) };
        if a.is_positive() || b.is_negative() {
            let ea = exponent10(&a.abs());
            let eb = exponent10(&b.abs());
            if ea == eb {
                let decimals = digits as i64 - 1 - ea;
                let scale = |v: &Q| {
                    if decimals >= 0 {
                        v * num_traits::pow(ten.clone(), decimals as usize)
                    } else {
                        v / num_traits::pow(ten.clone(), (-decimals) as usize)
                    }
                };
                let (ra, rb) = (scale(&a).trunc().to_integer(), scale(&b).trunc().to_integer());
                if ra == rb {
                    if decimals >= 0 {
                        return format_scaled(&ra, decimals);
                    }
                    let v = ra * num_traits::pow(BigInt::from(10), (-decimals) as usize);
                    return v.to_string();
                }
            }
        }
        width = width / Q::from_integer(BigInt::from(1024));
    }
}

fn exponent10(v: &Q) -> i64 {
    let ten = Q::from_integer(BigInt::from(10));
    let mut e = 0i64;
    let mut p = Q::one();
    if *v >= p {
        while *v >= &p * &ten {
            p = p * &ten;
            e += 1;
        }
    } else {
        while *v < p {
            p = p / &ten;
            e -= 1;
        }
    }
    e
}

fn format_scaled(n: &BigInt, decimals: i64) -> String {
    let neg = n.is_negative();
    let digits = n.abs().to_string();
    let d = decimals.max(0) as usize;
    let s = if d == 0 {
        digits
    } else if digits.len() > d {
        format!("{}.{}", &digits[..digits.len() - d], &digits[digits.len() - d..])
    } else {
        format!("0.{}{}", "0".repeat(d - digits.len()), digits)
    };
    if neg {
        format!("-{s}")
    } else {
        s
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_poly_string("a"))
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_poly_string("a"))
    }
}

impl PartialEq for FieldElem {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl Eq for FieldElem {}

impl Hash for FieldElem {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl<'a> Add<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn add(self, rhs: &FieldElem) -> FieldElem {
        debug_assert!(self.compatible(rhs), "field mismatch");
        FieldElem {
            field: Arc::clone(&self.field),
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn sub(self, rhs: &FieldElem) -> FieldElem {
        debug_assert!(self.compatible(rhs), "field mismatch");
        FieldElem {
            field: Arc::clone(&self.field),
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl<'a> Mul<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn mul(self, rhs: &FieldElem) -> FieldElem {
        debug_assert!(self.compatible(rhs), "field mismatch");
        let k = self.field.degree;
        if k == 1 {
            return FieldElem { field: Arc::clone(&self.field), coeffs: vec![&self.coeffs[0] * &rhs.coeffs[0]] };
        }
        let mut prod = vec![Q::zero(); 2 * k - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        FieldElem { field: Arc::clone(&self.field), coeffs: reduce(&self.field, prod) }
    }
}

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        FieldElem { field: Arc::clone(&self.field), coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        -&self
    }
}

impl Add for FieldElem {
    type Output = FieldElem;
    fn add(self, rhs: FieldElem) -> FieldElem {
        &self + &rhs
    }
}

impl Sub for FieldElem {
    type Output = FieldElem;
    fn sub(self, rhs: FieldElem) -> FieldElem {
        &self - &rhs
    }
}

impl Mul for FieldElem {
    type Output = FieldElem;
    fn mul(self, rhs: FieldElem) -> FieldElem {
        &self * &rhs
    }
}
