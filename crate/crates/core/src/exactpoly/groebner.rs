//! Buchberger's algorithm with the Gebauer–Möller pair criteria and the normal
//! selection strategy. Bases are always returned reduced and monic, sorted by
//! increasing leading monomial, so they are canonical for a given order.

use std::cmp::Ordering;
use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrdering};

use num_traits::{One, Zero};

use super::monomial::{Monomial, MonomialOrder};
use super::polynomial::{Polynomial, Term};
use super::ring::{same_ring, Ring};
use super::Rational;
use crate::error::{Error, Result};

pub const DEFAULT_MAX_BASIS: usize = 5000;
pub const DEFAULT_MAX_DEGREE: usize = 60;

static MAX_BASIS: AtomicUsize = AtomicUsize::new(DEFAULT_MAX_BASIS);
static MAX_DEGREE: AtomicUsize = AtomicUsize::new(DEFAULT_MAX_DEGREE);

/// Caps on intermediate basis size and total degree. Exceeding either aborts
/// the computation with [`Error::ResourceLimit`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResourceLimits {
    pub max_basis: usize,
    pub max_degree: usize,
}

impl Default for ResourceLimits {
    fn default() -> Self {
        ResourceLimits {
            max_basis: DEFAULT_MAX_BASIS,
            max_degree: DEFAULT_MAX_DEGREE,
        }
    }
}

impl ResourceLimits {
    /// The process-wide limits used by every Gröbner computation.
    pub fn current() -> Self {
        ResourceLimits {
            max_basis: MAX_BASIS.load(AtomicOrdering::Relaxed),
            max_degree: MAX_DEGREE.load(AtomicOrdering::Relaxed),
        }
    }

    pub fn install(self) {
        MAX_BASIS.store(self.max_basis, AtomicOrdering::Relaxed);
        MAX_DEGREE.store(self.max_degree, AtomicOrdering::Relaxed);
    }
}

/// Polynomial whose terms are sorted decreasingly under a given order.
#[derive(Clone, Debug)]
pub(crate) struct OrderedPoly {
    pub terms: Vec<Term>,
}

impl OrderedPoly {
    pub fn from_poly(p: &Polynomial, order: MonomialOrder) -> Self {
        let mut terms = p.terms().to_vec();
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        OrderedPoly { terms }
    }

    pub fn to_poly(&self, ring: &Ring) -> Polynomial {
        Polynomial::from_terms(ring, self.terms.clone())
    }

    fn lm(&self) -> &Monomial {
        &self.terms[0].0
    }

    fn make_monic(&mut self) {
        let lc = self.terms[0].1.clone();
        if !lc.is_one() {
            for t in &mut self.terms {
                t.1 = &t.1 / &lc;
            }
        }
    }
}

/// `p - c * m * g`, all term lists sorted decreasingly under `order`.
fn sub_scaled(p: &[Term], c: &Rational, m: &Monomial, g: &[Term], order: MonomialOrder) -> Vec<Term> {
    let mut out = Vec::with_capacity(p.len() + g.len());
    let (mut i, mut j) = (0, 0);
    let mut pending: Option<Term> = None;
    loop {
        if pending.is_none() && j < g.len() {
            pending = Some((g[j].0.mul(m), &g[j].1 * c));
            j += 1;
        }
        match (p.get(i), pending.as_ref()) {
            (None, None) => break,
            (Some(a), None) => {
                out.push(a.clone());
                i += 1;
            }
            (None, Some(_)) => {
                let (bm, bc) = pending.take().unwrap();
                out.push((bm, -bc));
            }
            (Some(a), Some(b)) => match order.cmp(&a.0, &b.0) {
                Ordering::Greater => {
                    out.push(a.clone());
                    i += 1;
                }
                Ordering::Less => {
                    let (bm, bc) = pending.take().unwrap();
                    out.push((bm, -bc));
                }
                Ordering::Equal => {
                    let (bm, bc) = pending.take().unwrap();
                    let v = &a.1 - &bc;
                    if !v.is_zero() {
                        out.push((bm, v));
                    }
                    i += 1;
                }
            },
        }
    }
    out
}

/// Full reduction of `f` by the divisors in `basis`.
pub(crate) fn reduce(f: Vec<Term>, basis: &[&OrderedPoly], order: MonomialOrder) -> Vec<Term> {
    let mut p = f;
    let mut start = 0;
    let mut rem = Vec::new();
    while start < p.len() {
        let (lm, lc) = (&p[start].0, &p[start].1);
        match basis.iter().find(|g| g.lm().divides(lm)) {
            Some(g) => {
                let q = lm.div(g.lm());
                let c = lc / &g.terms[0].1;
                p = sub_scaled(&p[start..], &c, &q, &g.terms, order);
                start = 0;
            }
            None => {
                rem.push(p[start].clone());
                start += 1;
            }
        }
    }
    rem
}

fn spoly(f: &OrderedPoly, g: &OrderedPoly, order: MonomialOrder) -> Vec<Term> {
    let l = f.lm().lcm(g.lm());
    let mf = l.div(f.lm());
    let mg = l.div(g.lm());
    let scaled_f: Vec<Term> = f.terms.iter().map(|(m, c)| (m.mul(&mf), c.clone())).collect();
    sub_scaled(&scaled_f, &Rational::one(), &mg, &g.terms, order)
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

struct State {
    order: MonomialOrder,
    limits: ResourceLimits,
    polys: Vec<OrderedPoly>,
    active: Vec<bool>,
    pairs: Vec<Pair>,
}

impl State {
    fn active_basis(&self) -> Vec<&OrderedPoly> {
        self.polys
            .iter()
            .zip(&self.active)
            .filter(|(_, &a)| a)
            .map(|(p, _)| p)
            .collect()
    }

    fn update(&mut self, h: OrderedPoly) -> Result<()> {
        let degree = h.terms.iter().map(|(m, _)| m.degree()).max().unwrap_or(0) as usize;
        if degree > self.limits.max_degree {
            return Err(Error::ResourceLimit {
                what: "total degree",
                limit: self.limits.max_degree,
            });
        }
        let k = self.polys.len();
        let lm_h = h.lm().clone();
        let candidates: Vec<usize> = (0..k).filter(|&i| self.active[i]).collect();
        let lcms: Vec<Monomial> = candidates
            .iter()
            .map(|&i| self.polys[i].lm().lcm(&lm_h))
            .collect();

        let mut kept: Vec<usize> = Vec::new();
        for idx in 0..candidates.len() {
            let i = candidates[idx];
            if self.polys[i].lm().is_coprime(&lm_h) {
                kept.push(idx);
                continue;
            }
            let l = &lcms[idx];
            let dominated = (idx + 1..candidates.len()).any(|o| lcms[o].divides(l))
                || kept.iter().any(|&o| lcms[o].divides(l));
            if !dominated {
                kept.push(idx);
            }
        }

        self.pairs.retain(|p| {
            !(lm_h.divides(&p.lcm)
                && self.polys[p.i].lm().lcm(&lm_h) != p.lcm
                && self.polys[p.j].lm().lcm(&lm_h) != p.lcm)
        });
        for idx in kept {
            let i = candidates[idx];
            if !self.polys[i].lm().is_coprime(&lm_h) {
                self.pairs.push(Pair {
                    i,
                    j: k,
                    lcm: lcms[idx].clone(),
                });
            }
        }
        for i in candidates {
            if lm_h.divides(self.polys[i].lm()) {
                self.active[i] = false;
            }
        }
        self.polys.push(h);
        self.active.push(true);
        let live = self.active.iter().filter(|&&a| a).count();
        if live > self.limits.max_basis {
            return Err(Error::ResourceLimit {
                what: "basis size",
                limit: self.limits.max_basis,
            });
        }
        Ok(())
    }

    fn select(&mut self) -> Option<Pair> {
        if self.pairs.is_empty() {
            return None;
        }
        let order = self.order;
        let mut best = 0;
        for (k, p) in self.pairs.iter().enumerate().skip(1) {
            if order.cmp(&p.lcm, &self.pairs[best].lcm) == Ordering::Less {
                best = k;
            }
        }
        Some(self.pairs.remove(best))
    }
}

/// Reduced Gröbner basis of the ideal generated by `gens` (over `ring`).
pub(crate) fn groebner(
    gens: &[Polynomial],
    ring: &Ring,
    order: MonomialOrder,
    limits: ResourceLimits,
) -> Result<Vec<OrderedPoly>> {
    let unit = || {
        vec![OrderedPoly {
            terms: vec![(Monomial::one(ring.len()), Rational::one())],
        }]
    };
    let mut state = State {
        order,
        limits,
        polys: Vec::new(),
        active: Vec::new(),
        pairs: Vec::new(),
    };
    let mut inputs: Vec<OrderedPoly> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| OrderedPoly::from_poly(g, order))
        .collect();
    inputs.sort_by(|a, b| order.cmp(a.lm(), b.lm()));
    for f in inputs {
        let h = reduce(f.terms, &state.active_basis(), order);
        if h.is_empty() {
            continue;
        }
        let mut h = OrderedPoly { terms: h };
        if h.lm().is_one() {
            return Ok(unit());
        }
        h.make_monic();
        state.update(h)?;
    }
    while let Some(pair) = state.select() {
        let s = spoly(&state.polys[pair.i], &state.polys[pair.j], order);
        let h = reduce(s, &state.active_basis(), order);
        if h.is_empty() {
            continue;
        }
        let mut h = OrderedPoly { terms: h };
        if h.lm().is_one() {
            return Ok(unit());
        }
        h.make_monic();
        state.update(h)?;
    }
    Ok(interreduce(state.active_basis().into_iter().cloned().collect(), order))
}

fn interreduce(mut g: Vec<OrderedPoly>, order: MonomialOrder) -> Vec<OrderedPoly> {
    g.sort_by(|a, b| order.cmp(a.lm(), b.lm()));
    let mut minimal: Vec<OrderedPoly> = Vec::new();
    for p in g {
        if !minimal.iter().any(|q| q.lm().divides(p.lm())) {
            minimal.push(p);
        }
    }
    let mut out = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<&OrderedPoly> = minimal
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, q)| q)
            .collect();
        let head = minimal[i].terms[0].clone();
        let mut tail = reduce(minimal[i].terms[1..].to_vec(), &others, order);
        let mut terms = vec![head];
        terms.append(&mut tail);
        let mut p = OrderedPoly { terms };
        p.make_monic();
        out.push(p);
    }
    out
}

/// A reduced Gröbner basis together with its ring and order.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    ring: Ring,
    order: MonomialOrder,
    polys: Vec<OrderedPoly>,
}

impl GroebnerBasis {
    pub fn compute(gens: &[Polynomial], ring: &Ring, order: MonomialOrder) -> Result<Self> {
        if gens.iter().any(|g| !same_ring(g.ring(), ring)) {
            return Err(Error::VariableMismatch);
        }
        let polys = groebner(gens, ring, order, ResourceLimits::current())?;
        Ok(GroebnerBasis {
            ring: ring.clone(),
            order,
            polys,
        })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.polys.len() == 1 && self.polys[0].lm().is_one()
    }

    pub fn polynomials(&self) -> Vec<Polynomial> {
        self.polys.iter().map(|p| p.to_poly(&self.ring)).collect()
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.polys.iter().map(|p| p.lm().clone()).collect()
    }

    pub fn normal_form(&self, f: &Polynomial) -> Result<Polynomial> {
        if !same_ring(f.ring(), &self.ring) {
            return Err(Error::VariableMismatch);
        }
        let basis: Vec<&OrderedPoly> = self.polys.iter().collect();
        let r = reduce(OrderedPoly::from_poly(f, self.order).terms, &basis, self.order);
        Ok(Polynomial::from_terms(&self.ring, r))
    }

    pub fn contains(&self, f: &Polynomial) -> Result<bool> {
        Ok(self.normal_form(f)?.is_zero())
    }
}
