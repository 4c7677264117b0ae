//! Buchberger's algorithm over Q with Gebauer–Möller pair pruning.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::poly::{Monomial, MonomialOrder, Poly};
use crate::rational::Q;

#[derive(Clone, Copy, Debug)]
pub struct GroebnerLimits {
    pub max_degree: u32,
    pub max_elements: usize,
}

impl Default for GroebnerLimits {
    fn default() -> Self {
        GroebnerLimits { max_degree: 12, max_elements: 10_000 }
    }
}

type Key = Vec<i64>;

fn key(ord: MonomialOrder, m: &[u32]) -> Key {
    match ord {
        MonomialOrder::Lex => m.iter().map(|&e| e as i64).collect(),
        MonomialOrder::GrevLex => {
            let mut k = Vec::with_capacity(m.len() + 1);
            k.push(m.iter().map(|&e| e as i64).sum());
            k.extend(m.iter().rev().map(|&e| -(e as i64)));
            k
        }
        MonomialOrder::ElimLast => {
            let n = m.len() - 1;
            let mut k = vec![m[n] as i64];
            k.extend(key(MonomialOrder::GrevLex, &m[..n]));
            k
        }
    }
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn lcm(a: &[u32], b: &[u32]) -> Monomial {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

fn coprime(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| *x == 0 || *y == 0)
}

/// Terms in decreasing order; the first is the monic leading term.
#[derive(Clone, Debug)]
struct GPoly {
    terms: Vec<(Monomial, Q)>,
}

impl GPoly {
    fn from_poly(p: &Poly, ord: MonomialOrder) -> Self {
        GPoly { terms: p.sorted_terms(ord).into_iter().map(|(m, c)| (m.clone(), c.clone())).collect() }
    }

    fn lm(&self) -> &Monomial {
        &self.terms[0].0
    }

    fn monic(mut self) -> Self {
        let lc = self.terms[0].1.clone();
        if !lc.is_one() {
            for t in &mut self.terms {
                t.1 /= &lc;
            }
        }
        self
    }

    fn to_poly(&self, nvars: usize) -> Poly {
        Poly::from_terms(nvars, self.terms.iter().cloned())
    }
}

/// Full reduction of `terms` modulo the polynomials `basis[i]`, `i ∈ active`.
fn reduce_terms(
    terms: impl IntoIterator<Item = (Monomial, Q)>,
    store: &[GPoly],
    active: &[usize],
    ord: MonomialOrder,
) -> Vec<(Monomial, Q)> {
    let mut p: BTreeMap<Key, (Monomial, Q)> = BTreeMap::new();
    let add = |p: &mut BTreeMap<Key, (Monomial, Q)>, m: Monomial, c: Q| {
        let k = key(ord, &m);
        match p.get_mut(&k) {
            Some(e) => {
                e.1 += c;
                if e.1.is_zero() {
                    p.remove(&k);
                }
            }
            None => {
                p.insert(k, (m, c));
            }
        }
    };
    for (m, c) in terms {
        add(&mut p, m, c);
    }
    let mut rem = Vec::new();
    while let Some((_, (m, c))) = p.pop_last() {
        let g = active.iter().map(|&i| &store[i]).find(|g| divides(g.lm(), &m));
        match g {
            Some(g) => {
                // g is monic
                let shift: Monomial = m.iter().zip(g.lm()).map(|(a, b)| a - b).collect();
                for (gm, gc) in &g.terms[1..] {
                    let nm: Monomial = gm.iter().zip(&shift).map(|(a, b)| a + b).collect();
                    add(&mut p, nm, -(&c * gc));
                }
            }
            None => rem.push((m, c)),
        }
    }
    rem
}

/// Normal form of `f` modulo `basis`.
pub fn normal_form(f: &Poly, basis: &[Poly], ord: MonomialOrder) -> Poly {
    let store: Vec<GPoly> = basis.iter().filter(|p| !p.is_zero()).map(|p| GPoly::from_poly(p, ord).monic()).collect();
    let active: Vec<usize> = (0..store.len()).collect();
    let rem = reduce_terms(f.terms().map(|(m, c)| (m.clone(), c.clone())), &store, &active, ord);
    Poly::from_terms(f.nvars(), rem)
}

pub fn s_polynomial(f: &Poly, g: &Poly, ord: MonomialOrder) -> Poly {
    let (fm, fc) = f.leading(ord).expect("nonzero");
    let (gm, gc) = g.leading(ord).expect("nonzero");
    let l = lcm(fm, gm);
    let uf: Monomial = l.iter().zip(fm).map(|(a, b)| a - b).collect();
    let ug: Monomial = l.iter().zip(gm).map(|(a, b)| a - b).collect();
    f.mul_term(&uf, &fc.recip()).sub(&g.mul_term(&ug, &gc.recip()))
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

/// Reduced Gröbner basis, monic, sorted by increasing leading monomial.
pub fn buchberger(gens: &[Poly], ord: MonomialOrder, limits: GroebnerLimits) -> Result<Vec<Poly>> {
    let nvars = match gens.iter().find(|p| !p.is_zero()) {
        Some(p) => p.nvars(),
        None => return Ok(Vec::new()),
    };
    let mut store: Vec<GPoly> = Vec::new();
    let mut active: Vec<usize> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();
    let mut inputs: Vec<Poly> = gens.iter().filter(|p| !p.is_zero()).cloned().collect();
    inputs.sort_by(|a, b| ord.cmp(a.leading(ord).unwrap().0, b.leading(ord).unwrap().0));
    for f in inputs {
        let rem = reduce_terms(f.terms().map(|(m, c)| (m.clone(), c.clone())), &store, &active, ord);
        if !rem.is_empty() {
            insert(GPoly { terms: rem }.monic(), &mut store, &mut active, &mut pairs, limits)?;
        }
    }
    while !pairs.is_empty() {
        let (idx, _) = pairs
            .iter()
            .enumerate()
            .min_by(|a, b| ord.cmp(&a.1.lcm, &b.1.lcm))
            .expect("nonempty");
        let pr = pairs.swap_remove(idx);
        let (f, g) = (&store[pr.i], &store[pr.j]);
        let uf: Monomial = pr.lcm.iter().zip(f.lm()).map(|(a, b)| a - b).collect();
        let ug: Monomial = pr.lcm.iter().zip(g.lm()).map(|(a, b)| a - b).collect();
        let mut terms: Vec<(Monomial, Q)> = Vec::new();
        for (m, c) in &f.terms[1..] {
            terms.push((m.iter().zip(&uf).map(|(a, b)| a + b).collect(), c.clone()));
        }
        for (m, c) in &g.terms[1..] {
            terms.push((m.iter().zip(&ug).map(|(a, b)| a + b).collect(), -c.clone()));
        }
        let rem = reduce_terms(terms, &store, &active, ord);
        if !rem.is_empty() {
            insert(GPoly { terms: rem }.monic(), &mut store, &mut active, &mut pairs, limits)?;
        }
    }
    // interreduce
    let mut out: Vec<GPoly> = Vec::new();
    for (k, &i) in active.iter().enumerate() {
        let others: Vec<usize> = active.iter().enumerate().filter(|&(l, _)| l != k).map(|(_, &j)| j).collect();
        let rem = reduce_terms(store[i].terms.clone(), &store, &others, ord);
        if !rem.is_empty() {
            out.push(GPoly { terms: rem }.monic());
        }
    }
    out.sort_by(|a, b| ord.cmp(a.lm(), b.lm()));
    Ok(out.iter().map(|g| g.to_poly(nvars)).collect())
}

/// Gebauer–Möller update with the new element `h`.
fn insert(h: GPoly, store: &mut Vec<GPoly>, active: &mut Vec<usize>, pairs: &mut Vec<Pair>, limits: GroebnerLimits) -> Result<()> {
    let deg: u32 = h.terms.iter().map(|(m, _)| m.iter().sum::<u32>()).max().unwrap_or(0);
    if deg > limits.max_degree {
        return Err(Error::ResourceLimit(format!("basis degree {deg} exceeds {}", limits.max_degree)));
    }
    if active.len() + 1 > limits.max_elements {
        return Err(Error::ResourceLimit(format!("basis size exceeds {}", limits.max_elements)));
    }
    let hi = store.len();
    let hlm = h.lm().clone();
    store.push(h);
    let cand: Vec<Pair> = active.iter().map(|&g| Pair { i: g, j: hi, lcm: lcm(store[g].lm(), &hlm) }).collect();
    // chain criterion among the new pairs
    let mut kept: Vec<Pair> = Vec::new();
    for (a, p) in cand.iter().enumerate() {
        let cop = coprime(store[p.i].lm(), &hlm);
        let dominated = cand.iter().enumerate().any(|(b, q)| {
            b != a && divides(&q.lcm, &p.lcm) && (q.lcm != p.lcm || b < a)
        });
        if cop || !dominated {
            kept.push(p.clone());
        }
    }
    // product criterion
    kept.retain(|p| !coprime(store[p.i].lm(), &hlm));
    // old pairs made redundant by h
    pairs.retain(|p| {
        !(divides(&hlm, &p.lcm)
            && lcm(store[p.i].lm(), &hlm) != p.lcm
            && lcm(store[p.j].lm(), &hlm) != p.lcm)
    });
    pairs.extend(kept);
    active.retain(|&g| !divides(&hlm, store[g].lm()));
    active.push(hi);
    Ok(())
}

/// Saturation I : (x_v)^∞ for each listed variable in turn, via an extra
/// variable t with t·x_v − 1 and elimination of t. Returns the reduced
/// basis in `ord`.
pub fn saturate(gens: &[Poly], vars: &[usize], ord: MonomialOrder, limits: GroebnerLimits) -> Result<Vec<Poly>> {
    let mut current: Vec<Poly> = gens.to_vec();
    let Some(nv) = gens.first().map(Poly::nvars) else { return Ok(Vec::new()) };
    for &v in vars {
        let mut ext: Vec<Poly> = current.iter().map(Poly::with_extra_var).collect();
        let t = Poly::var(nv + 1, nv);
        ext.push(t.mul(&Poly::var(nv + 1, v)).sub(&Poly::constant(nv + 1, Q::one())));
        let gb = buchberger(&ext, MonomialOrder::ElimLast, limits)?;
        current = gb.iter().filter_map(Poly::without_last_var).collect();
    }
    buchberger(&current, ord, limits)
}

/// Every variable has a pure power among the leading monomials.
pub fn is_zero_dimensional(gb: &[Poly], ord: MonomialOrder) -> bool {
    let Some(n) = gb.first().map(Poly::nvars) else { return false };
    let lms: Vec<&Monomial> = gb.iter().filter_map(|p| p.leading(ord).map(|(m, _)| m)).collect();
    if lms.iter().any(|m| m.iter().all(|&e| e == 0)) {
        return true;
    }
    (0..n).all(|i| lms.iter().any(|m| m[i] > 0 && m.iter().enumerate().all(|(j, &e)| j == i || e == 0)))
}

/// The basis is {1}.
pub fn is_unit_ideal(gb: &[Poly], ord: MonomialOrder) -> bool {
    gb.iter().any(|p| p.leading(ord).is_some_and(|(m, _)| m.iter().all(|&e| e == 0)))
}

/// Variables that are not a pure power of any leading monomial.
pub fn free_variables(gb: &[Poly], ord: MonomialOrder, nvars: usize) -> Vec<usize> {
    let lms: Vec<&Monomial> = gb.iter().filter_map(|p| p.leading(ord).map(|(m, _)| m)).collect();
    (0..nvars)
        .filter(|&i| !lms.iter().any(|m| m[i] > 0 && m.iter().enumerate().all(|(j, &e)| j == i || e == 0)))
        .collect()
}

/// Minimal polynomial (ascending coefficients, monic) of `x_var` modulo a
/// zero-dimensional ideal given by its Gröbner basis.
pub fn minimal_polynomial(gb: &[Poly], ord: MonomialOrder, var: usize, max_degree: usize) -> Option<Vec<Q>> {
    let nvars = gb.first()?.nvars();
    let x = Poly::var(nvars, var);
    let mut nfs: Vec<Poly> = vec![normal_form(&Poly::constant(nvars, Q::one()), gb, ord)];
    let mut power = Poly::constant(nvars, Q::one());
    for k in 1..=max_degree {
        power = normal_form(&power.mul(&x), gb, ord);
        nfs.push(power.clone());
        // linear dependency among NF(x^0..x^k)
        let mut monos: Vec<Monomial> = nfs.iter().flat_map(|p| p.terms().map(|(m, _)| m.clone())).collect();
        monos.sort();
        monos.dedup();
        let cols: Vec<Vec<Q>> = nfs
            .iter()
            .map(|p| {
                let t: BTreeMap<&Monomial, &Q> = p.terms().collect();
                monos.iter().map(|m| t.get(m).map(|c| (*c).clone()).unwrap_or_else(Q::zero)).collect()
            })
            .collect();
        let mat = Matrix::from_cols(cols, &Q::zero()).ok()?;
        let ker = mat.kernel();
        if let Some(v) = ker.first() {
            let lc = v[k].clone();
            if lc.is_zero() {
                return None;
            }
            return Some(v.iter().map(|c| c / &lc).collect());
        }
    }
    None
}
