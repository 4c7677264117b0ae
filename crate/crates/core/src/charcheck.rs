//! Characterization verdict: coincidence equations, Plücker relations and
//! a normalization, decided by zero-dimensionality of the ideal.

use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::coincidence::{all_equations_with, grassmann_point, grassmann_variables, EquationRecord};
use crate::error::{Error, Result};
use crate::groebner::{buchberger, free_variables, saturate, is_unit_ideal, is_zero_dimensional, minimal_polynomial, GroebnerLimits};
use crate::numfield::FieldElem;
use crate::poly::{as_univariate, MonomialOrder, Poly};
use crate::rational::{convergents, Q};
use crate::slope::{plucker_relations, Slope};
use crate::upoly::UPoly;

const ORD: MonomialOrder = MonomialOrder::GrevLex;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    CharacterizedByCoincidences,
    NotCharacterized,
    NonGenericInput,
}

#[derive(Clone, Debug, Default)]
pub struct CheckOptions {
    /// Grassmann variable set to 1; defaults to the largest in modulus.
    pub normalization: Option<String>,
    pub limits: GroebnerLimits,
    /// Worker threads for equation derivation (0 or 1: sequential).
    pub threads: usize,
}

/// A rational point of the variety other than the slope itself.
#[derive(Clone, Debug)]
pub struct FamilyWitness {
    pub free_variable: usize,
    pub value: Q,
    /// Remaining coordinates, when they are rational.
    pub point: Option<Vec<Q>>,
    /// Gröbner basis of the system with the free variable fixed.
    pub basis: Vec<Poly>,
}

/// A univariate consequence with its real roots and the sign filter.
#[derive(Clone, Debug)]
pub struct UnivariateConsequence {
    pub variable: usize,
    pub coefficients: Vec<Q>,
    pub roots: Vec<(Q, Q)>,
    /// Index into `roots` of the root matching the slope's sign.
    pub accepted: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub status: Status,
    pub variables: Vec<String>,
    pub normalization: usize,
    pub equations: Vec<EquationRecord>,
    pub generators: Vec<Poly>,
    pub groebner: Vec<Poly>,
    pub zero_dimensional: bool,
    pub r_bound: Option<u64>,
    pub genericity_witness: Option<Vec<BigInt>>,
    pub family: Option<FamilyWitness>,
    pub univariate: Vec<UnivariateConsequence>,
    /// Normalized coordinates of the slope.
    pub point: Vec<FieldElem>,
    pub millis: u128,
}

/// Plücker relations as polynomials in the lexicographically ordered
/// Grassmann variables.
pub fn plucker_polys(n: usize, d: usize) -> Vec<Poly> {
    let (tuples, _) = grassmann_variables(n, d);
    let nv = tuples.len();
    let idx = |t: &Vec<usize>| tuples.iter().position(|x| x == t).expect("sorted tuple");
    plucker_relations(n, d)
        .into_iter()
        .map(|r| {
            Poly::from_terms(
                nv,
                r.terms.iter().map(|(c, a, b)| {
                    let mut m = vec![0u32; nv];
                    m[idx(a)] += 1;
                    m[idx(b)] += 1;
                    (m, Q::from_integer(BigInt::from(*c)))
                }),
            )
        })
        .collect()
}

fn resolve_normalization(names: &[String], g: &[FieldElem], opt: &Option<String>) -> Result<usize> {
    match opt {
        Some(name) => {
            let i = names
                .iter()
                .position(|x| x == name)
                .ok_or_else(|| Error::Parse(format!("unknown normalization variable {name}")))?;
            if g[i].is_zero() {
                return Err(Error::Parse(format!("{name} vanishes on the slope")));
            }
            Ok(i)
        }
        None => {
            let mut best = 0;
            for i in 1..g.len() {
                if g[i].abs().cmp_value(&g[best].abs()).is_gt() {
                    best = i;
                }
            }
            Ok(best)
        }
    }
}

/// Coincidence equations ∪ Plücker relations ∪ {G_k − 1}.
pub fn assemble_system(n: usize, d: usize, equations: &[EquationRecord], norm: usize) -> Vec<Poly> {
    let nv = grassmann_variables(n, d).0.len();
    let mut gens: Vec<Poly> = equations.iter().map(|e| e.equation.poly.clone()).collect();
    gens.extend(plucker_polys(n, d));
    gens.push(Poly::var(nv, norm).sub(&Poly::constant(nv, Q::one())));
    let mut out: Vec<Poly> = Vec::new();
    for g in gens {
        let g = g.primitive(ORD);
        if !g.is_zero() && !out.contains(&g) {
            out.push(g);
        }
    }
    out
}

/// Rational approximation of a field element to within 2^-64.
fn rational_near(x: &FieldElem) -> Q {
    let w = Q::new(BigInt::one(), BigInt::one() << 64);
    let (lo, hi) = x.enclose(&w);
    (lo + hi) / Q::from_integer(BigInt::from(2))
}

/// Fixes one coordinate at a continued-fraction convergent of its value
/// on the slope (second convergent first) and solves for the rest. Free
/// variables of the basis are tried first; the first choice with a
/// rational solution wins.
pub fn family_witness(gens: &[Poly], gb: &[Poly], point: &[FieldElem], limits: GroebnerLimits) -> Result<Option<FamilyWitness>> {
    let nv = point.len();
    let free = free_variables(gb, ORD, nv);
    let order: Vec<usize> = free.iter().copied().chain((0..nv).filter(|v| !free.contains(v))).collect();
    let mut fallback = None;
    for var in order {
        let approx = rational_near(&point[var]);
        let conv = convergents(&approx, 4);
        let mut candidates: Vec<Q> = conv.into_iter().skip(1).collect();
        if let Some(c) = point[var].as_rational() {
            candidates.retain(|x| x != c);
            candidates.insert(0, c + Q::one());
        }
        for value in candidates {
            if Some(&value) == point[var].as_rational() {
                continue;
            }
            let mut sys: Vec<Poly> = gens.to_vec();
            sys.push(Poly::var(nv, var).sub(&Poly::constant(nv, value.clone())));
            let basis = buchberger(&sys, ORD, limits)?;
            if is_unit_ideal(&basis, ORD) {
                continue;
            }
            let point = solve_rational(&basis, nv);
            let w = FamilyWitness { free_variable: var, value, point, basis };
            if w.point.is_some() {
                return Ok(Some(w));
            }
            if fallback.is_none() && free.contains(&var) {
                fallback = Some(w);
            }
        }
    }
    Ok(fallback)
}

/// Reads off the unique rational solution of a basis of linear
/// polynomials `x_i − c_i`, if that is its shape.
fn solve_rational(basis: &[Poly], nv: usize) -> Option<Vec<Q>> {
    let mut out: Vec<Option<Q>> = vec![None; nv];
    for p in basis {
        if p.total_degree() != Some(1) {
            return None;
        }
        let vars = p.support();
        if vars.len() != 1 {
            return None;
        }
        let coeffs = as_univariate(p, vars[0])?;
        out[vars[0]] = Some(-&coeffs[0] / &coeffs[1]);
    }
    out.into_iter().collect()
}

/// Univariate consequences of a zero-dimensional ideal, with real roots
/// and the sign filter that keeps roots of the slope's sign.
pub fn univariate_consequences(gb: &[Poly], point: &[FieldElem], vars: &[usize]) -> Vec<UnivariateConsequence> {
    let mut out = Vec::new();
    for &var in vars {
        let Some(coeffs) = minimal_polynomial(gb, ORD, var, 16) else { continue };
        if coeffs.len() < 3 {
            continue;
        }
        let up = UPoly::new(coeffs.clone());
        let roots = up.isolate_real_roots();
        let sign = point[var].sign();
        let matching: Vec<usize> =
            (0..roots.len()).filter(|&i| root_sign(&up, &roots[i]) == sign).collect();
        let accepted = if matching.len() == 1 { Some(matching[0]) } else { None };
        out.push(UnivariateConsequence { variable: var, coefficients: coeffs, roots, accepted });
    }
    out
}

/// Sign of the root isolated in `(lo, hi]` (or equal to `lo == hi`).
fn root_sign(up: &UPoly, (lo, hi): &(Q, Q)) -> i8 {
    if lo == hi {
        return if lo.is_positive() { 1 } else if lo.is_negative() { -1 } else { 0 };
    }
    if !lo.is_negative() {
        return 1;
    }
    if hi.is_negative() {
        return -1;
    }
    if up.eval(&Q::zero()).is_zero() {
        return 0;
    }
    if up.count_roots(lo, &Q::zero()) == 1 {
        -1
    } else {
        1
    }
}

/// Least R such that the equations whose coincidences fit in radius R
/// already cut out finitely many points.
fn sufficient_r(
    n: usize,
    d: usize,
    equations: &[EquationRecord],
    norm: usize,
    nonzero: &[usize],
    limits: GroebnerLimits,
) -> Result<Option<u64>> {
    let mut radii: Vec<u64> = equations.iter().filter_map(|e| e.r).collect();
    radii.sort_unstable();
    radii.dedup();
    let enough = |r: u64| -> Result<bool> {
        let subset: Vec<EquationRecord> = equations.iter().filter(|e| e.r.map_or(true, |x| x <= r)).cloned().collect();
        let gens = assemble_system(n, d, &subset, norm);
        Ok(is_zero_dimensional(&saturate(&gens, nonzero, ORD, limits)?, ORD))
    };
    let (mut lo, mut hi) = (0, radii.len());
    while lo + 1 < hi {
        let mid = (lo + hi) / 2;
        if enough(radii[mid - 1])? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi.checked_sub(1).map(|i| radii[i]))
}

/// Decision procedure for one slope.
pub fn verdict(s: &Slope, opts: &CheckOptions) -> Result<Verdict> {
    let t0 = Instant::now();
    let (n, d) = (s.n(), s.d());
    let (_, names) = grassmann_variables(n, d);
    let g = grassmann_point(s);
    let norm = resolve_normalization(&names, &g, &opts.normalization)?;
    let scale = g[norm].inv()?;
    let point: Vec<FieldElem> = g.iter().map(|x| x * &scale).collect();
    let (generic, witness) = s.is_generic();
    let equations = all_equations_with(s, opts.threads)?;
    for e in &equations {
        if !e.equation.poly.eval(&g).is_zero() {
            return Err(Error::InconsistentSystem);
        }
    }
    let generators = assemble_system(n, d, &equations, norm);
    debug_assert!(generators.iter().all(|p| p.eval(&point).is_zero()));
    // coordinates nonzero on the slope stay nonzero on the family
    let nonzero: Vec<usize> = (0..names.len()).filter(|&i| i != norm && !g[i].is_zero()).collect();
    let groebner = saturate(&generators, &nonzero, ORD, opts.limits)?;
    let zero_dimensional = is_zero_dimensional(&groebner, ORD);
    let r_bound = if zero_dimensional {
        sufficient_r(n, d, &equations, norm, &nonzero, opts.limits)?
    } else {
        equations.iter().filter_map(|e| e.r).max()
    };
    let mut family = None;
    let mut univariate = Vec::new();
    let status = if !generic {
        if zero_dimensional {
            univariate = univariate_consequences(&groebner, &point, &(0..names.len()).collect::<Vec<_>>());
        }
        Status::NonGenericInput
    } else if zero_dimensional {
        Status::CharacterizedByCoincidences
    } else {
        family = family_witness(&groebner, &groebner, &point, opts.limits)?;
        Status::NotCharacterized
    };
    Ok(Verdict {
        status,
        variables: names,
        normalization: norm,
        equations,
        generators,
        groebner,
        zero_dimensional,
        r_bound,
        genericity_witness: witness,
        family,
        univariate,
        point,
        millis: t0.elapsed().as_millis(),
    })
}


#[cfg(test)]
mod penrose_tests {
    use super::*;
    use crate::slope::tests::penrose;

    #[test]
    fn penrose_is_reported_non_generic_with_golden_consequence() {
        let s = penrose();
        let t = Instant::now();
        let v = verdict(&s, &CheckOptions { normalization: Some("G13".into()), ..Default::default() }).unwrap();
        assert!(t.elapsed().as_secs() < 60);
        assert_eq!(v.status, Status::NonGenericInput);
        let w: Vec<i64> = v.genericity_witness.unwrap().iter().map(|x| x.try_into().unwrap()).collect();
        assert_eq!(w, vec![1, 1, 1, 1, 1]);
        let g12 = v.variables.iter().position(|x| x == "G12").unwrap();
        let u = v.univariate.iter().find(|u| u.variable == g12).unwrap();
        assert_eq!(u.coefficients, vec![Q::from_integer((-1).into()), Q::from_integer((-1).into()), Q::one()]);
        assert_eq!(u.roots.len(), 2);
        let (lo, hi) = &u.roots[u.accepted.unwrap()];
        assert_eq!(root_sign(&UPoly::new(u.coefficients.clone()), &(lo.clone(), hi.clone())), 1);
        assert_eq!(v.point[g12].approx(4), "1.618");
        let rejected = &u.roots[1 - u.accepted.unwrap()];
        assert_eq!(root_sign(&UPoly::new(u.coefficients.clone()), rejected), -1);
    }
}
