use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::monomial::{Monomial, MonomialOrder};
use super::ring::{same_ring, Ring};
use super::Rational;
use crate::error::{Error, Result};

pub type Term = (Monomial, Rational);

/// A polynomial with rational coefficients over a [`Ring`].
///
/// Terms are kept sorted by decreasing graded reverse lex order with no zero
/// coefficients, so structural equality is polynomial equality. Arithmetic
/// operators panic when the operands live over different rings; the
/// ideal-level functions check and report [`Error::VariableMismatch`] instead.
#[derive(Clone, Debug)]
pub struct Polynomial {
    ring: Ring,
    terms: Vec<Term>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

const CANONICAL: MonomialOrder = MonomialOrder::GrevLex;

impl Polynomial {
    pub fn zero(ring: &Ring) -> Self {
        Polynomial {
            ring: ring.clone(),
            terms: Vec::new(),
        }
    }

    pub fn one(ring: &Ring) -> Self {
        Self::constant(ring, Rational::one())
    }

    pub fn constant(ring: &Ring, c: Rational) -> Self {
        Self::from_terms(ring, vec![(Monomial::one(ring.len()), c)])
    }

    pub fn integer(ring: &Ring, c: i64) -> Self {
        Self::constant(ring, Rational::from_integer(c.into()))
    }

    pub fn var(ring: &Ring, index: usize) -> Self {
        Self::from_terms(
            ring,
            vec![(Monomial::variable(ring.len(), index, 1), Rational::one())],
        )
    }

    /// Variable by name.
    pub fn named(ring: &Ring, name: &str) -> Result<Self> {
        ring.index_of(name)
            .map(|i| Self::var(ring, i))
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    /// Builds a polynomial from arbitrary terms: sorts, combines like terms and
    /// drops zeros.
    pub fn from_terms(ring: &Ring, terms: Vec<Term>) -> Self {
        let mut acc: HashMap<Monomial, Rational> = HashMap::with_capacity(terms.len());
        for (m, c) in terms {
            assert_eq!(m.nvars(), ring.len(), "monomial arity does not match ring");
            *acc.entry(m).or_insert_with(Rational::zero) += c;
        }
        let mut terms: Vec<Term> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| CANONICAL.cmp(&b.0, &a.0));
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    pub(crate) fn from_sorted_terms(ring: &Ring, terms: Vec<Term>) -> Self {
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    /// The constant value, if the polynomial is constant.
    pub fn constant_value(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    /// Leading term under `order`.
    pub fn leading_term(&self, order: MonomialOrder) -> Option<&Term> {
        self.terms
            .iter()
            .max_by(|a, b| order.cmp(&a.0, &b.0))
    }

    /// Bitmask of the variables that occur.
    pub fn support_mask(&self) -> u64 {
        self.terms.iter().fold(0, |acc, (m, _)| acc | m.support_mask())
    }

    pub fn uses_variable(&self, var: usize) -> bool {
        self.terms.iter().any(|(m, _)| m.exponents()[var] > 0)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.ring);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn derivative(&self, var: usize) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.exponents()[var] > 0)
            .map(|(m, c)| {
                let mut e = m.exponents().to_vec();
                let k = e[var];
                e[var] -= 1;
                (Monomial::from_exponents(e), c * Rational::from_integer(k.into()))
            })
            .collect();
        Self::from_terms(&self.ring, terms)
    }

    /// Substitutes `images[i]` (polynomials over `target`) for variable `i`.
    pub fn compose(&self, target: &Ring, images: &[Polynomial]) -> Self {
        assert_eq!(images.len(), self.ring.len());
        let mut powers: Vec<Vec<Polynomial>> = images
            .iter()
            .map(|p| vec![Polynomial::one(target), p.clone()])
            .collect();
        let mut out = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(target, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = &powers[i][powers[i].len() - 1] * &images[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][e as usize];
            }
            out = &out + &t;
        }
        out
    }

    /// Renames variables: variable `i` becomes variable `mapping[i]` of `target`.
    pub fn map_variables(&self, target: &Ring, mapping: &[usize]) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = vec![0u16; target.len()];
                for (i, &k) in m.exponents().iter().enumerate() {
                    if k > 0 {
                        e[mapping[i]] += k;
                    }
                }
                (Monomial::from_exponents(e), c.clone())
            })
            .collect();
        Self::from_terms(target, terms)
    }

    pub fn eval_rational(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.ring.len());
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.exponents()) {
                if e > 0 {
                    t *= num_traits::pow::pow(x.clone(), e as usize);
                }
            }
            total += t;
        }
        total
    }

    pub fn eval_complex(&self, point: &[Complex64]) -> Complex64 {
        assert_eq!(point.len(), self.ring.len());
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut t = Complex64::new(rational_to_f64(c), 0.0);
                for (x, &e) in point.iter().zip(m.exponents()) {
                    if e > 0 {
                        t *= x.powu(e as u32);
                    }
                }
                t
            })
            .sum()
    }

    /// The positive primitive integer multiple: coefficients cleared of
    /// denominators, divided by their gcd, leading coefficient positive.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut denom_lcm = BigInt::one();
        for (_, c) in &self.terms {
            denom_lcm = denom_lcm.lcm(c.denom());
        }
        let ints: Vec<BigInt> = self
            .terms
            .iter()
            .map(|(_, c)| (c * Rational::from_integer(denom_lcm.clone())).to_integer())
            .collect();
        let mut g = BigInt::zero();
        for v in &ints {
            g = g.gcd(v);
        }
        if self.terms[0].1.is_negative() {
            g = -g;
        }
        let terms = self
            .terms
            .iter()
            .zip(ints)
            .map(|((m, _), v)| (m.clone(), Rational::from_integer(v / &g)))
            .collect();
        Polynomial {
            ring: self.ring.clone(),
            terms,
        }
    }

    /// Re-embeds this polynomial in `target`, which must have the same
    /// variable names in the same order (block structure may differ).
    pub fn with_ring(&self, target: &Ring) -> Result<Self> {
        if self.ring.names() != target.names() {
            return Err(Error::VariableMismatch);
        }
        Ok(Polynomial {
            ring: target.clone(),
            terms: self.terms.clone(),
        })
    }
}

pub(crate) fn rational_to_f64(c: &Rational) -> f64 {
    c.to_f64().unwrap_or_else(|| {
        c.numer().to_f64().unwrap_or(f64::NAN) / c.denom().to_f64().unwrap_or(f64::NAN)
    })
}

fn merge(a: &[Term], b: &[Term], negate_b: bool) -> Vec<Term> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match CANONICAL.cmp(&a[i].0, &b[j].0) {
            Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Less => {
                let c = if negate_b { -&b[j].1 } else { b[j].1.clone() };
                out.push((b[j].0.clone(), c));
                j += 1;
            }
            Ordering::Equal => {
                let c = if negate_b { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                if !c.is_zero() {
                    out.push((a[i].0.clone(), c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend(a[i..].iter().cloned());
    out.extend(b[j..].iter().map(|(m, c)| (m.clone(), if negate_b { -c } else { c.clone() })));
    out
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        assert!(same_ring(&self.ring, &rhs.ring), "ring mismatch in addition");
        Polynomial::from_sorted_terms(&self.ring, merge(&self.terms, &rhs.terms, false))
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        assert!(same_ring(&self.ring, &rhs.ring), "ring mismatch in subtraction");
        Polynomial::from_sorted_terms(&self.ring, merge(&self.terms, &rhs.terms, true))
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert!(same_ring(&self.ring, &rhs.ring), "ring mismatch in multiplication");
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        let mut terms = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                terms.push((ma.mul(mb), ca * cb));
            }
        }
        Polynomial::from_terms(&self.ring, terms)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: Polynomial) -> Polynomial {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

fn fmt_monomial(f: &mut fmt::Formatter<'_>, ring: &Ring, m: &Monomial) -> fmt::Result {
    let mut first = true;
    for (i, &e) in m.exponents().iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        write!(f, "{}", ring.name(i))?;
        if e > 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            if k == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                fmt_monomial(f, &self.ring, m)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::VariableSet;

    fn xyz() -> (Ring, Polynomial, Polynomial, Polynomial) {
        let r = VariableSet::new(&["x", "y", "z"]).unwrap();
        let x = Polynomial::var(&r, 0);
        let y = Polynomial::var(&r, 1);
        let z = Polynomial::var(&r, 2);
        (r, x, y, z)
    }

    #[test]
    fn arithmetic_and_display() {
        let (r, x, y, z) = xyz();
        let f = &(&x * &x) - &(&(&y * &y) * &z);
        assert_eq!(f.to_string(), "-y^2*z + x^2");
        let g = &(&x + &y) * &(&x - &y);
        assert_eq!(g, &(&x * &x) - &(&y * &y));
        assert!((&g - &g).is_zero());
        let h = Polynomial::constant(&r, Rational::new(3.into(), 4.into()));
        assert_eq!((&h * &x).to_string(), "3/4*x");
        assert_eq!((&x + &y).pow(2).terms().len(), 3);
    }

    #[test]
    fn derivative_and_eval() {
        let (_, x, y, z) = xyz();
        let f = &(&x * &x) - &(&(&y * &y) * &z);
        assert_eq!(f.derivative(1), -&(&Polynomial::integer(x.ring(), 2) * &(&y * &z)));
        let p = vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)];
        assert_eq!(f.eval_complex(&p), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn primitive_clears_denominators() {
        let (r, x, y, _) = xyz();
        let f = &x.scale(&Rational::new((-1).into(), 2.into())) + &y.scale(&Rational::new(1.into(), 3.into()));
        let p = f.primitive();
        assert_eq!(p.to_string(), "3*x - 2*y");
        assert_eq!(Polynomial::zero(&r).primitive(), Polynomial::zero(&r));
    }

    #[test]
    fn compose_substitutes() {
        let (r, x, y, _) = xyz();
        let t = VariableSet::new(&["t"]).unwrap();
        let tt = Polynomial::var(&t, 0);
        let f = &(&x * &x) + &y;
        let g = f.compose(&t, &[tt.clone(), tt.clone(), Polynomial::zero(&t)]);
        assert_eq!(g, &(&tt * &tt) + &tt);
        let _ = r;
    }
}
