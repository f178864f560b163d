use std::collections::HashSet;
use std::sync::OnceLock;

use super::groebner::GroebnerBasis;
use super::monomial::MonomialOrder;
use super::polynomial::Polynomial;
use super::ring::{same_ring, Ring};
use crate::error::{Error, Result};
use crate::par;

/// An ideal of a polynomial ring, given by generators. Zero generators are
/// dropped, so an empty generator list is the zero ideal. The graded reverse
/// lex Gröbner basis is computed lazily and cached.
#[derive(Clone, Debug)]
pub struct Ideal {
    ring: Ring,
    generators: Vec<Polynomial>,
    basis: OnceLock<GroebnerBasis>,
}

impl Ideal {
    pub fn new(ring: &Ring, generators: Vec<Polynomial>) -> Result<Self> {
        if generators.iter().any(|g| !same_ring(g.ring(), ring)) {
            return Err(Error::VariableMismatch);
        }
        Ok(Ideal {
            ring: ring.clone(),
            generators: generators.into_iter().filter(|g| !g.is_zero()).collect(),
            basis: OnceLock::new(),
        })
    }

    pub fn zero(ring: &Ring) -> Self {
        Ideal {
            ring: ring.clone(),
            generators: Vec::new(),
            basis: OnceLock::new(),
        }
    }

    pub fn unit(ring: &Ring) -> Self {
        Ideal {
            ring: ring.clone(),
            generators: vec![Polynomial::one(ring)],
            basis: OnceLock::new(),
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.generators.is_empty()
    }

    /// Reduced Gröbner basis under graded reverse lex (cached).
    pub fn groebner_basis(&self) -> Result<&GroebnerBasis> {
        if let Some(gb) = self.basis.get() {
            return Ok(gb);
        }
        let gb = GroebnerBasis::compute(&self.generators, &self.ring, MonomialOrder::GrevLex)?;
        Ok(self.basis.get_or_init(|| gb))
    }

    pub fn is_unit(&self) -> Result<bool> {
        if self.generators.iter().any(|g| g.is_constant()) {
            return Ok(true);
        }
        Ok(self.groebner_basis()?.is_unit())
    }

    pub fn contains(&self, f: &Polynomial) -> Result<bool> {
        if f.is_zero() {
            return Ok(true);
        }
        self.groebner_basis()?.contains(f)
    }

    pub fn contains_ideal(&self, other: &Ideal) -> Result<bool> {
        for g in &other.generators {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Equality as ideals (mutual containment).
    pub fn same_ideal(&self, other: &Ideal) -> Result<bool> {
        Ok(self.contains_ideal(other)? && other.contains_ideal(self)?)
    }

    /// Equality of radicals (mutual radical membership of generators).
    pub fn same_radical(&self, other: &Ideal) -> Result<bool> {
        for g in &other.generators {
            if !radical_membership(g, self)? {
                return Ok(false);
            }
        }
        for g in &self.generators {
            if !radical_membership(g, other)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn sum(&self, other: &Ideal) -> Result<Ideal> {
        if !same_ring(&self.ring, &other.ring) {
            return Err(Error::VariableMismatch);
        }
        let mut gens = self.generators.clone();
        gens.extend(other.generators.iter().cloned());
        Ideal::new(&self.ring, gens)
    }

    pub fn with_generators(&self, extra: impl IntoIterator<Item = Polynomial>) -> Result<Ideal> {
        let mut gens = self.generators.clone();
        gens.extend(extra);
        Ideal::new(&self.ring, gens)
    }

    pub fn dimension(&self) -> Result<usize> {
        ideal_dimension(self)
    }

    /// Reduced graded reverse lex basis as integer-cleared strings, sorted.
    /// The zero ideal prints as `["0"]`.
    pub fn canonical_strings(&self) -> Result<Vec<String>> {
        if self.generators.is_empty() {
            return Ok(vec!["0".to_string()]);
        }
        let mut out: Vec<String> = self
            .groebner_basis()?
            .polynomials()
            .iter()
            .map(|p| p.primitive().to_string())
            .collect();
        out.sort();
        Ok(out)
    }

    /// Moves the ideal to a ring with identical variable names.
    pub fn with_ring(&self, target: &Ring) -> Result<Ideal> {
        let gens = self
            .generators
            .iter()
            .map(|g| g.with_ring(target))
            .collect::<Result<Vec<_>>>()?;
        Ideal::new(target, gens)
    }
}

/// Remainder of multivariate division of `f` by the list `divisors`.
pub fn normal_form(f: &Polynomial, divisors: &[Polynomial], order: MonomialOrder) -> Result<Polynomial> {
    if divisors.iter().any(|g| !same_ring(g.ring(), f.ring())) {
        return Err(Error::VariableMismatch);
    }
    use super::groebner::{reduce, OrderedPoly};
    let ordered: Vec<OrderedPoly> = divisors
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| OrderedPoly::from_poly(g, order))
        .collect();
    let refs: Vec<&OrderedPoly> = ordered.iter().collect();
    let r = reduce(OrderedPoly::from_poly(f, order).terms, &refs, order);
    Ok(Polynomial::from_terms(f.ring(), r))
}

/// Reduced Gröbner basis of `ideal` under `order`.
pub fn buchberger(ideal: &Ideal, order: MonomialOrder) -> Result<Vec<Polynomial>> {
    Ok(GroebnerBasis::compute(ideal.generators(), ideal.ring(), order)?.polynomials())
}

fn shift_into(p: &Polynomial, target: &Ring, offset: usize) -> Polynomial {
    let mapping: Vec<usize> = (0..p.ring().len()).map(|i| i + offset).collect();
    p.map_variables(target, &mapping)
}

/// Eliminates the leading `front` variables of `ring_ext` from the generators
/// and returns the surviving polynomials moved back to `base` (whose variables
/// are the trailing ones of `ring_ext`).
fn eliminate_front(gens: &[Polynomial], ring_ext: &Ring, front: usize, base: &Ring) -> Result<Vec<Polynomial>> {
    let gb = GroebnerBasis::compute(gens, ring_ext, MonomialOrder::Block { front })?;
    let front_mask: u64 = if front >= 64 { u64::MAX } else { (1u64 << front) - 1 };
    let mapping: Vec<usize> = (0..ring_ext.len()).map(|i| i.saturating_sub(front)).collect();
    Ok(gb
        .polynomials()
        .into_iter()
        .filter(|p| p.support_mask() & front_mask == 0)
        .map(|p| p.map_variables(base, &mapping))
        .collect())
}

/// `I ∩ k[remaining variables]`, returned as an ideal over the ring of the
/// remaining variables (names and blocks preserved).
pub fn eliminate(ideal: &Ideal, drop: &[usize]) -> Result<Ideal> {
    let ring = ideal.ring();
    let n = ring.len();
    let mut drop: Vec<usize> = drop.to_vec();
    drop.sort_unstable();
    drop.dedup();
    if let Some(&bad) = drop.iter().find(|&&i| i >= n) {
        return Err(Error::OutOfRange(format!("variable index {bad} out of range")));
    }
    if drop.is_empty() {
        return Ok(ideal.clone());
    }
    let keep: Vec<usize> = (0..n).filter(|i| !drop.contains(i)).collect();
    let mut names: Vec<String> = drop.iter().map(|&i| ring.name(i).to_string()).collect();
    names.extend(keep.iter().map(|&i| ring.name(i).to_string()));
    let ext = super::VariableSet::with_blocks(&names, &[drop.len(), keep.len()])?;
    let mut mapping = vec![0; n];
    for (pos, &i) in drop.iter().chain(keep.iter()).enumerate() {
        mapping[i] = pos;
    }
    let gens: Vec<Polynomial> = ideal
        .generators()
        .iter()
        .map(|g| g.map_variables(&ext, &mapping))
        .collect();
    let target = ring.without(&drop);
    let kept = eliminate_front(&gens, &ext, drop.len(), &target)?;
    Ideal::new(&target, kept)
}

/// Eliminates variables by name.
pub fn eliminate_names(ideal: &Ideal, drop: &[&str]) -> Result<Ideal> {
    let idx = drop
        .iter()
        .map(|name| {
            ideal
                .ring()
                .index_of(name)
                .ok_or_else(|| Error::UnknownVariable(name.to_string()))
        })
        .collect::<Result<Vec<_>>>()?;
    eliminate(ideal, &idx)
}

/// `I : h^∞` via `(I + ⟨1 - w h⟩) ∩ k[vars]`.
fn saturate_by_element(ideal: &Ideal, h: &Polynomial) -> Result<Ideal> {
    let ring = ideal.ring();
    let w = ring.fresh_name("w");
    let ext = ring.prepend(&[w]);
    let wv = Polynomial::var(&ext, 0);
    let mut gens: Vec<Polynomial> = ideal
        .generators()
        .iter()
        .map(|g| shift_into(g, &ext, 1))
        .collect();
    gens.push(&Polynomial::one(&ext) - &(&wv * &shift_into(h, &ext, 1)));
    let kept = eliminate_front(&gens, &ext, 1, ring)?;
    Ideal::new(ring, kept)
}

/// `I ∩ J` via `(t I + (1 - t) J) ∩ k[vars]`.
pub fn intersect(a: &Ideal, b: &Ideal) -> Result<Ideal> {
    if !same_ring(a.ring(), b.ring()) {
        return Err(Error::VariableMismatch);
    }
    let ring = a.ring();
    if a.is_zero_ideal() || b.is_zero_ideal() {
        return Ok(Ideal::zero(ring));
    }
    if a.is_unit()? {
        return Ok(b.clone());
    }
    if b.is_unit()? {
        return Ok(a.clone());
    }
    let t = ring.fresh_name("t");
    let ext = ring.prepend(&[t]);
    let tv = Polynomial::var(&ext, 0);
    let one_minus_t = &Polynomial::one(&ext) - &tv;
    let mut gens: Vec<Polynomial> = a
        .generators()
        .iter()
        .map(|g| &tv * &shift_into(g, &ext, 1))
        .collect();
    gens.extend(b.generators().iter().map(|g| &one_minus_t * &shift_into(g, &ext, 1)));
    let kept = eliminate_front(&gens, &ext, 1, ring)?;
    Ideal::new(ring, kept)
}

/// Chooses a subset of the generators of `saturator` whose radical modulo
/// `ideal` equals that of all of them; `I : J^∞` only depends on `√(I + J)`.
/// Returns `None` when `I + J` is the unit ideal.
fn prune_saturator(ideal: &Ideal, saturator: &Ideal) -> Result<Option<Vec<Polynomial>>> {
    let gb = ideal.groebner_basis()?;
    let mut seen = HashSet::new();
    let mut candidates = Vec::new();
    for g in saturator.generators() {
        let r = gb.normal_form(g)?;
        if r.is_zero() {
            continue;
        }
        if r.is_constant() {
            return Ok(None);
        }
        let key = r.primitive();
        if seen.insert(key.to_string()) {
            candidates.push(key);
        }
    }
    candidates.sort_by_key(|p| (p.total_degree(), p.terms().len()));
    let mut chosen: Vec<Polynomial> = Vec::new();
    let mut current = ideal.clone();
    for h in candidates {
        if current.contains(&h)? || radical_membership(&h, &current)? {
            continue;
        }
        current = current.with_generators([h.clone()])?;
        chosen.push(h);
    }
    Ok(Some(chosen))
}

/// The saturation `I : J^∞`, as the intersection of `I : h^∞` over a
/// generating set of `J`.
pub fn saturate(ideal: &Ideal, by: &Ideal) -> Result<Ideal> {
    if !same_ring(ideal.ring(), by.ring()) {
        return Err(Error::VariableMismatch);
    }
    if by.is_zero_ideal() {
        return Err(Error::ZeroIdeal);
    }
    if by.generators().iter().any(|g| g.is_constant()) || ideal.is_zero_ideal() {
        return Ok(ideal.clone());
    }
    if ideal.is_unit()? {
        return Ok(ideal.clone());
    }
    let chosen = match prune_saturator(ideal, by)? {
        None => return Ok(ideal.clone()),
        Some(c) => c,
    };
    if chosen.is_empty() {
        // J ⊂ √I: every component of V(I) lies in V(J).
        return Ok(Ideal::unit(ideal.ring()));
    }
    let parts = par::try_map_slice(&chosen, |h| saturate_by_element(ideal, h))?;
    let mut acc = parts[0].clone();
    for p in &parts[1..] {
        acc = intersect(&acc, p)?;
    }
    let gens = acc.groebner_basis()?.polynomials();
    Ideal::new(ideal.ring(), gens)
}

/// Whether `f ∈ √I`, decided by `1 ∈ I + ⟨1 - w f⟩`.
pub fn radical_membership(f: &Polynomial, ideal: &Ideal) -> Result<bool> {
    if !same_ring(f.ring(), ideal.ring()) {
        return Err(Error::VariableMismatch);
    }
    if f.is_zero() || ideal.contains(f)? {
        return Ok(true);
    }
    let ring = ideal.ring();
    let ext = ring.prepend(&[ring.fresh_name("w")]);
    let wv = Polynomial::var(&ext, 0);
    let mut gens: Vec<Polynomial> = ideal
        .generators()
        .iter()
        .map(|g| shift_into(g, &ext, 1))
        .collect();
    gens.push(&Polynomial::one(&ext) - &(&wv * &shift_into(f, &ext, 1)));
    Ok(GroebnerBasis::compute(&gens, &ext, MonomialOrder::GrevLex)?.is_unit())
}

/// Krull dimension of `k[vars]/I`: the largest set of variables containing the
/// support of no leading monomial of a Gröbner basis.
pub fn ideal_dimension(ideal: &Ideal) -> Result<usize> {
    let n = ideal.ring().len();
    if ideal.is_zero_ideal() {
        return Ok(n);
    }
    let gb = ideal.groebner_basis()?;
    if gb.is_unit() {
        return Err(Error::EmptyVariety);
    }
    if n > 30 {
        return Err(Error::ResourceLimit {
            what: "variables for independent-set search",
            limit: 30,
        });
    }
    let supports: Vec<u64> = gb.leading_monomials().iter().map(|m| m.support_mask()).collect();
    let mut best = 0;
    for set in 0u64..(1u64 << n) {
        let size = set.count_ones() as usize;
        if size > best && supports.iter().all(|&s| s & !set != 0) {
            best = size;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::{Rational, VariableSet};

    fn ring3() -> (Ring, Polynomial, Polynomial, Polynomial) {
        let r = VariableSet::new(&["x", "y", "z"]).unwrap();
        (r.clone(), Polynomial::var(&r, 0), Polynomial::var(&r, 1), Polynomial::var(&r, 2))
    }

    #[test]
    fn normal_form_examples() {
        let (r, x, y, _) = ring3();
        let one = Polynomial::one(&r);
        assert!(normal_form(&x, &[x.clone()], MonomialOrder::Lex).unwrap().is_zero());
        let f = &(&(&x * &x) * &y) + &one;
        let g = &(&x * &y) - &one;
        assert_eq!(normal_form(&f, &[g], MonomialOrder::Lex).unwrap(), &x + &one);
        let seven = Polynomial::integer(&r, 7);
        assert_eq!(normal_form(&seven, &[x.clone(), y.clone()], MonomialOrder::Lex).unwrap(), seven);
    }

    #[test]
    fn normal_form_rejects_mixed_rings() {
        let (_, x, _, _) = ring3();
        let other = VariableSet::new(&["u"]).unwrap();
        let u = Polynomial::var(&other, 0);
        assert_eq!(normal_form(&x, &[u], MonomialOrder::Lex), Err(Error::VariableMismatch));
    }

    #[test]
    fn buchberger_examples() {
        let (r, x, y, z) = ring3();
        let i = Ideal::new(&r, vec![x.clone(), y.clone()]).unwrap();
        assert_eq!(buchberger(&i, MonomialOrder::Lex).unwrap(), vec![y.clone(), x.clone()]);

        let twisted = Ideal::new(&r, vec![&(&x * &x) - &y, &x.pow(3) - &z]).unwrap();
        let gb = buchberger(&twisted, MonomialOrder::Lex).unwrap();
        let elim: Vec<&Polynomial> = gb.iter().filter(|p| !p.uses_variable(0)).collect();
        assert_eq!(elim, vec![&(&y.pow(3) - &z.pow(2))]);

        let i = Ideal::new(&r, vec![&(&x * &x) + &(&y * &y), &x * &y]).unwrap();
        let gb = buchberger(&i, MonomialOrder::GrevLex).unwrap();
        assert_eq!(gb.len(), 3);
        assert!(gb.contains(&y.pow(3)));
        assert!(gb.contains(&(&x * &y)));
        assert!(gb.contains(&(&(&x * &x) + &(&y * &y))));
    }

    #[test]
    fn elimination_examples() {
        let r = VariableSet::new(&["t", "x", "y"]).unwrap();
        let (t, x, y) = (Polynomial::var(&r, 0), Polynomial::var(&r, 1), Polynomial::var(&r, 2));
        let i = Ideal::new(&r, vec![&x - &t, &y - &(&t * &t)]).unwrap();
        let e = eliminate(&i, &[0]).unwrap();
        assert_eq!(e.ring().names(), &["x", "y"]);
        let x2 = Polynomial::var(e.ring(), 0);
        let y2 = Polynomial::var(e.ring(), 1);
        let expected = Ideal::new(e.ring(), vec![&y2 - &(&x2 * &x2)]).unwrap();
        assert!(e.same_ideal(&expected).unwrap());

        assert_eq!(eliminate(&i, &[]).unwrap().generators(), i.generators());

        let r2 = VariableSet::new(&["t", "x"]).unwrap();
        let only_t = Ideal::new(&r2, vec![Polynomial::var(&r2, 0)]).unwrap();
        assert!(eliminate(&only_t, &[0]).unwrap().is_zero_ideal());
        assert!(eliminate(&only_t, &[5]).is_err());
    }

    #[test]
    fn saturation_examples() {
        let (r, x, y, _) = ring3();
        let xy = Ideal::new(&r, vec![&x * &y]).unwrap();
        let by_x = Ideal::new(&r, vec![x.clone()]).unwrap();
        let s = saturate(&xy, &by_x).unwrap();
        assert!(s.same_ideal(&Ideal::new(&r, vec![y.clone()]).unwrap()).unwrap());

        let unit = Ideal::unit(&r);
        assert!(saturate(&xy, &unit).unwrap().same_ideal(&xy).unwrap());

        let i = Ideal::new(&r, vec![&x * &x, &x * &y]).unwrap();
        let s = saturate(&i, &by_x).unwrap();
        // every component of V(x^2, xy) = {x = 0} lies in V(x)
        assert!(s.contains(&x).unwrap() && s.contains(&y).unwrap());

        assert_eq!(saturate(&xy, &Ideal::zero(&r)).unwrap_err(), Error::ZeroIdeal);
    }

    #[test]
    fn saturation_by_a_proper_ideal() {
        let (r, x, y, z) = ring3();
        // ⟨x z, y z⟩ : ⟨x, y⟩^∞ = ⟨z⟩
        let i = Ideal::new(&r, vec![&x * &z, &y * &z]).unwrap();
        let j = Ideal::new(&r, vec![x.clone(), y.clone()]).unwrap();
        let s = saturate(&i, &j).unwrap();
        assert!(s.same_ideal(&Ideal::new(&r, vec![z.clone()]).unwrap()).unwrap());
    }

    #[test]
    fn radical_membership_examples() {
        let (r, x, y, z) = ring3();
        let i = Ideal::new(&r, vec![&x * &x]).unwrap();
        assert!(radical_membership(&x, &i).unwrap());
        let umbrella = Ideal::new(&r, vec![&(&x * &x) - &(&(&y * &y) * &z)]).unwrap();
        assert!(!radical_membership(&z, &umbrella).unwrap());
        assert!(radical_membership(&Polynomial::zero(&r), &umbrella).unwrap());
    }

    #[test]
    fn dimension_examples() {
        let (r, x, y, z) = ring3();
        let point = Ideal::new(&r, vec![x.clone(), y.clone(), z.clone()]).unwrap();
        assert_eq!(ideal_dimension(&point).unwrap(), 0);
        let sphere = Ideal::new(&r, vec![&(&(&x * &x) + &(&y * &y)) + &(&z * &z)]).unwrap();
        assert_eq!(ideal_dimension(&sphere).unwrap(), 2);
        let umbrella = Ideal::new(&r, vec![&(&x * &x) - &(&(&y * &y) * &z)]).unwrap();
        assert_eq!(ideal_dimension(&umbrella).unwrap(), 2);
        assert_eq!(ideal_dimension(&Ideal::unit(&r)), Err(Error::EmptyVariety));
        assert_eq!(ideal_dimension(&Ideal::zero(&r)).unwrap(), 3);
    }

    #[test]
    fn intersection_of_coordinate_axes() {
        let (r, x, y, _) = ring3();
        let a = Ideal::new(&r, vec![x.clone()]).unwrap();
        let b = Ideal::new(&r, vec![y.clone()]).unwrap();
        let c = intersect(&a, &b).unwrap();
        assert!(c.same_ideal(&Ideal::new(&r, vec![&x * &y]).unwrap()).unwrap());
    }

    #[test]
    fn canonical_strings_are_integer_cleared() {
        let (r, x, y, _) = ring3();
        let half = Rational::new(1.into(), 2.into());
        let i = Ideal::new(&r, vec![&x.scale(&half) - &y]).unwrap();
        assert_eq!(i.canonical_strings().unwrap(), vec!["x - 2*y".to_string()]);
        assert_eq!(Ideal::zero(&r).canonical_strings().unwrap(), vec!["0".to_string()]);
    }
}
