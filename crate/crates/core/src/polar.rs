//! Polar varieties through the `ℓ`-conormal space.
//!
//! For `X` of dimension `d`, a projection kernel `D` of dimension
//! `n - d + k - 1` and `d ≤ ℓ ≤ n - 1`, the Schubert condition
//! `c_k(D) = {W ∈ G(ℓ, n) : dim(W ∩ D) ≥ m}` with `m = k + ℓ - d` is the rank
//! condition `rank [W | D] ≤ ℓ + dim D - m`. The polar variety is the image in
//! `X` of the part of `C_ℓ(X)` lying over `c_k(D)`.

use rand::Rng;
use serde::Serialize;

use crate::conormal::{conormal_ideal, fiber_ideal, AffineVariety, ConormalChartIdeal};
use crate::error::{Error, Result};
use crate::exactpoly::{eliminate, ideal_dimension, intersect, minors, Ideal, PolyMatrix, Polynomial, Rational, Ring};
use crate::grassmann::{chart_cover, Chart, PlaneBasis};
use crate::par;
use crate::sample::task_rng;

/// `c_k(D)` inside `G(ℓ, n)` for a variety of dimension `dim_x`.
#[derive(Debug, Clone, PartialEq)]
pub struct SchubertCondition {
    d_basis: PlaneBasis<Rational>,
    k: usize,
    ell: usize,
    dim_x: usize,
}

impl SchubertCondition {
    pub fn new(d_basis: PlaneBasis<Rational>, k: usize, ell: usize, dim_x: usize) -> Result<Self> {
        let n = d_basis.ambient_dim();
        if k == 0 || k >= dim_x {
            return Err(Error::OutOfRange(format!("k = {k} must satisfy 1 <= k <= {}", dim_x as i64 - 1)));
        }
        if ell < dim_x || ell >= n {
            return Err(Error::OutOfRange(format!("l = {ell} must satisfy {dim_x} <= l <= {}", n - 1)));
        }
        if d_basis.dim() != n - dim_x + k - 1 {
            return Err(Error::OutOfRange(format!(
                "D must have dimension {}, got {}",
                n - dim_x + k - 1,
                d_basis.dim()
            )));
        }
        Ok(SchubertCondition {
            d_basis,
            k,
            ell,
            dim_x,
        })
    }

    /// A random `D` with entries `p / q`, `p ∈ [-100, 100]`, `q ∈ [1, 10]`.
    pub fn random(n: usize, k: usize, ell: usize, dim_x: usize, seed: u64, draw: usize) -> Result<Self> {
        let dim_d = (n + k).checked_sub(dim_x + 1).ok_or_else(|| Error::OutOfRange("k too small".into()))?;
        let mut rng = task_rng(seed, draw);
        loop {
            let cols: Vec<Vec<Rational>> = (0..dim_d)
                .map(|_| {
                    (0..n)
                        .map(|_| Rational::new(rng.gen_range(-100i64..=100).into(), rng.gen_range(1i64..=10).into()))
                        .collect()
                })
                .collect();
            match PlaneBasis::new(n, cols) {
                Ok(b) => return Self::new(b, k, ell, dim_x),
                Err(Error::RankDeficient) => continue,
                Err(e) => return Err(e),
            }
        }
    }

    pub fn d_basis(&self) -> &PlaneBasis<Rational> {
        &self.d_basis
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    /// `m = k + ℓ - dim X`.
    pub fn m(&self) -> usize {
        self.k + self.ell - self.dim_x
    }
}

/// Generators of `dim(W ∩ D) ≥ m` over a chart ring.
fn schubert_generators(d_basis: &PlaneBasis<Rational>, m: usize, chart: &Chart, ring: &Ring) -> Result<Vec<Polynomial>> {
    let n = chart.n();
    if d_basis.ambient_dim() != n {
        return Err(Error::ChartMismatch("D lives in a different ambient space".into()));
    }
    let w = chart.symbolic_basis(ring)?;
    let cols = chart.d() + d_basis.dim();
    let rows: Vec<Vec<Polynomial>> = (0..n)
        .map(|i| {
            let mut row: Vec<Polynomial> = w.iter().map(|c| c[i].clone()).collect();
            row.extend(d_basis.columns().iter().map(|c| Polynomial::constant(ring, c[i].clone())));
            row
        })
        .collect();
    let size = cols + 1 - m.min(cols + 1);
    if m == 0 || size > n.min(cols) {
        return Ok(Vec::new());
    }
    let mat = PolyMatrix::from_rows(ring, rows)?;
    Ok(minors(&mat, size)?.into_iter().filter(|p| !p.is_zero()).collect())
}

fn to_a_ring(chart: &Chart, gens: Vec<Polynomial>) -> Result<Ideal> {
    let target = chart.a_ring();
    let n = chart.n();
    let images: Vec<Polynomial> = (0..n)
        .map(|_| Polynomial::zero(&target))
        .chain((0..chart.num_a()).map(|i| Polynomial::var(&target, i)))
        .collect();
    let gens = gens.iter().map(|g| g.compose(&target, &images)).collect();
    Ideal::new(&target, gens)
}

/// `c_k(D)` on `chart` as an ideal in the `a` variables.
pub fn schubert_ideal(s: &SchubertCondition, chart: &Chart) -> Result<Ideal> {
    schubert_ideal_with_m(s.d_basis(), s.m(), chart, s.ell)
}

/// `{W : dim(W ∩ D) ≥ m}` on a chart of `G(ell, n)`.
pub fn schubert_ideal_with_m(d_basis: &PlaneBasis<Rational>, m: usize, chart: &Chart, ell: usize) -> Result<Ideal> {
    if chart.d() != ell {
        return Err(Error::ChartMismatch(format!("chart {} is not a chart of G({ell},{})", chart.label(), chart.n())));
    }
    let ring = chart.default_ring();
    to_a_ring(chart, schubert_generators(d_basis, m, chart, &ring)?)
}

#[derive(Debug, Clone, Serialize)]
pub struct PolarResult {
    #[serde(skip)]
    pub ideal: Ideal,
    /// `None` when the polar variety is empty.
    pub dim: Option<usize>,
    /// Outcome of the fiber formula at 0; `None` for an empty intersection.
    pub fiber_check: Option<bool>,
}

fn polar_piece(c: &ConormalChartIdeal, d_basis: &PlaneBasis<Rational>, m: usize) -> Result<Ideal> {
    let chart = c.chart();
    let mut gens = c.ideal().generators().to_vec();
    gens.extend(schubert_generators(d_basis, m, chart, c.ring())?);
    let sum = Ideal::new(c.ring(), gens)?;
    let drop: Vec<usize> = (chart.n()..chart.n() + chart.num_a()).collect();
    eliminate(&sum, &drop)
}

fn dim_or_empty(i: &Ideal) -> Result<Option<usize>> {
    if i.is_unit()? {
        Ok(None)
    } else {
        Ok(Some(ideal_dimension(i)?))
    }
}

/// The chart piece of `P_k(X; D)`.
pub fn polar_ideal(x: &AffineVariety, s: &SchubertCondition, chart: &Chart) -> Result<PolarResult> {
    polar_ideal_with_m(x, s.d_basis(), s.m(), s.ell, chart)
}

/// As [`polar_ideal`] with an explicit intersection dimension `m`.
pub fn polar_ideal_with_m(x: &AffineVariety, d_basis: &PlaneBasis<Rational>, m: usize, ell: usize, chart: &Chart) -> Result<PolarResult> {
    let c = conormal_ideal(x, ell, chart)?;
    let ideal = polar_piece(&c, d_basis, m)?;
    Ok(PolarResult {
        dim: dim_or_empty(&ideal)?,
        fiber_check: None,
        ideal,
    })
}

/// `P_k(X; D)` over all charts: the intersection of the chart pieces.
pub fn polar_all_charts(x: &AffineVariety, s: &SchubertCondition) -> Result<PolarResult> {
    let charts = chart_cover(x.n(), s.ell)?;
    let pieces = par::try_map_slice(&charts, |chart| -> Result<(Ideal, Option<(usize, Option<usize>)>)> {
        let c = conormal_ideal(x, s.ell, chart)?;
        Ok((polar_piece(&c, s.d_basis(), s.m())?, fiber_sides(&c, s)?))
    })?;
    let mut acc = Ideal::unit(x.ring());
    for (p, _) in &pieces {
        acc = intersect(&acc, p)?;
    }
    let ideal = Ideal::new(x.ring(), acc.groebner_basis()?.polynomials())?;
    let sides: Vec<_> = pieces.iter().map(|p| p.1).collect();
    Ok(PolarResult {
        dim: dim_or_empty(&ideal)?,
        fiber_check: aggregate_sides(x, s, &sides),
        ideal,
    })
}

/// `(dim ν⁻¹(0), lhs)` on one chart; `lhs` is `None` when the intersection
/// is empty there, and the whole result is `None` when `0 ∉ X`.
fn fiber_sides(c: &ConormalChartIdeal, s: &SchubertCondition) -> Result<Option<(usize, Option<usize>)>> {
    let origin = vec![Rational::from_integer(0.into()); c.variety().n()];
    if !c.variety().contains_point(&origin) {
        return Ok(None);
    }
    let fiber = fiber_ideal(c, &origin)?;
    let Some(fiber_dim) = dim_or_empty(&fiber)? else {
        return Ok(None);
    };
    let cond = schubert_ideal(s, c.chart())?;
    let both = fiber.sum(&cond)?;
    Ok(Some((fiber_dim, dim_or_empty(&both)?)))
}

fn compare_sides(x: &AffineVariety, s: &SchubertCondition, fiber_dim: usize, lhs: usize) -> bool {
    let (n, d, ell) = (x.n() as i64, x.dim() as i64, s.ell as i64);
    lhs as i64 == fiber_dim as i64 - (ell - d) * (n - ell) - s.k as i64
}

fn aggregate_sides(x: &AffineVariety, s: &SchubertCondition, sides: &[Option<(usize, Option<usize>)>]) -> Option<bool> {
    let fiber_dim = sides.iter().flatten().map(|p| p.0).max()?;
    let lhs = sides.iter().flatten().filter_map(|p| p.1).max()?;
    Some(compare_sides(x, s, fiber_dim, lhs))
}

/// `dim(ν⁻¹(0) ∩ γ⁻¹(c_k(D))) = dim ν⁻¹(0) - (ℓ - d)(n - ℓ) - k` on one chart;
/// `None` when the intersection is empty.
pub fn polar_fiber_dimension_check(x: &AffineVariety, s: &SchubertCondition, chart: &Chart) -> Result<Option<bool>> {
    let c = conormal_ideal(x, s.ell, chart)?;
    Ok(match fiber_sides(&c, s)? {
        Some((fiber_dim, Some(lhs))) => Some(compare_sides(x, s, fiber_dim, lhs)),
        _ => None,
    })
}

/// The fiber formula with both sides maximized over all charts.
pub fn polar_fiber_dimension_check_all(x: &AffineVariety, s: &SchubertCondition) -> Result<Option<bool>> {
    let charts = chart_cover(x.n(), s.ell)?;
    let sides = par::try_map_slice(&charts, |chart| fiber_sides(&conormal_ideal(x, s.ell, chart)?, s))?;
    Ok(aggregate_sides(x, s, &sides))
}

/// Polar dimensions over several random draws of `D`.
#[derive(Debug, Clone, Serialize)]
pub struct PolarDraws {
    /// Per draw: `None` for an empty polar variety.
    pub dims: Vec<Option<usize>>,
    pub fiber_checks: Vec<Option<bool>>,
    /// Most frequent entry of `dims`, earliest on ties.
    pub majority: Option<usize>,
    /// Draws disagreeing with the majority.
    pub non_generic: Vec<usize>,
    pub expected_dim: usize,
    #[serde(skip)]
    pub ideals: Vec<Ideal>,
}

pub fn polar_draws(x: &AffineVariety, k: usize, ell: usize, draws: usize, seed: u64) -> Result<PolarDraws> {
    let results = par::try_map_slice(&(0..draws).collect::<Vec<_>>(), |&i| {
        let s = SchubertCondition::random(x.n(), k, ell, x.dim(), seed, i)?;
        polar_all_charts(x, &s)
    })?;
    let dims: Vec<Option<usize>> = results.iter().map(|r| r.dim).collect();
    let mut best = None;
    let mut best_count = 0;
    for d in &dims {
        let c = dims.iter().filter(|e| *e == d).count();
        if c > best_count {
            best = Some(*d);
            best_count = c;
        }
    }
    let majority = best.flatten();
    let non_generic = dims
        .iter()
        .enumerate()
        .filter(|(_, d)| Some(**d) != best)
        .map(|(i, _)| i)
        .collect();
    Ok(PolarDraws {
        fiber_checks: results.iter().map(|r| r.fiber_check).collect(),
        ideals: results.into_iter().map(|r| r.ideal).collect(),
        dims,
        majority,
        non_generic,
        expected_dim: x.dim() - k,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::{rational, VariableSet};

    fn vars(names: &[&str]) -> (Ring, Vec<Polynomial>) {
        let r = VariableSet::new(names).unwrap();
        let v = (0..names.len()).map(|i| Polynomial::var(&r, i)).collect();
        (r, v)
    }

    fn hypersurface(signs: &[i64], constant: i64) -> AffineVariety {
        let names: Vec<String> = (1..=signs.len()).map(|i| format!("x{i}")).collect();
        let names: Vec<&str> = names.iter().map(String::as_str).collect();
        let (r, v) = vars(&names);
        let mut f = Polynomial::integer(&r, constant);
        for (s, x) in signs.iter().zip(&v) {
            f = &f + &(&(x * x) * &Polynomial::integer(&r, *s));
        }
        AffineVariety::from_polynomials(&r, vec![f]).unwrap()
    }

    fn line(dir: &[i64]) -> PlaneBasis<Rational> {
        PlaneBasis::new(dir.len(), vec![dir.iter().map(|&c| rational(c, 1)).collect()]).unwrap()
    }

    /// `X ∩ {∇f · v = 0}` for a hypersurface and a direction `v`.
    fn critical_locus(x: &AffineVariety, v: &[Rational]) -> Ideal {
        let f = x.ideal().generators()[0].clone();
        let mut g = Polynomial::zero(x.ring());
        for (i, c) in v.iter().enumerate() {
            g = &g + &f.derivative(i).scale(c);
        }
        Ideal::new(x.ring(), vec![f, g]).unwrap()
    }

    #[test]
    fn invariants() {
        let d = line(&[1, 2, 3]);
        assert!(SchubertCondition::new(d.clone(), 1, 2, 2).is_ok());
        assert!(SchubertCondition::new(d.clone(), 0, 2, 2).is_err());
        assert!(SchubertCondition::new(d.clone(), 1, 3, 2).is_err());
        assert!(SchubertCondition::new(d.clone(), 1, 1, 2).is_err());
        assert!(SchubertCondition::new(d, 1, 2, 1).is_err());
        let s = SchubertCondition::random(4, 2, 3, 3, 9, 0).unwrap();
        assert_eq!((s.d_basis().dim(), s.m()), (2, 2));
        assert_eq!(s, SchubertCondition::random(4, 2, 3, 3, 9, 0).unwrap());
    }

    #[test]
    fn schubert_ideal_is_membership_of_a_line() {
        // W ⊃ span(e3) never happens on the chart {1,2}|{3}
        let chart = Chart::new(3, &[0, 1]).unwrap();
        let s = SchubertCondition::new(line(&[0, 0, 1]), 1, 2, 2).unwrap();
        assert!(schubert_ideal(&s, &chart).unwrap().is_unit().unwrap());
        // W = {z3 = a11 z1 + a12 z2} contains e1 + e3 iff a11 = 1
        let s = SchubertCondition::new(line(&[1, 0, 1]), 1, 2, 2).unwrap();
        assert_eq!(schubert_ideal(&s, &chart).unwrap().canonical_strings().unwrap(), vec!["a11 - 1"]);
        let zero = schubert_ideal_with_m(s.d_basis(), 0, &chart, 2).unwrap();
        assert!(zero.is_zero_ideal());
        assert!(schubert_ideal_with_m(s.d_basis(), 1, &Chart::new(3, &[0]).unwrap(), 2).is_err());
    }

    #[test]
    fn polar_curve_of_sphere_matches_critical_locus() {
        let x = hypersurface(&[1, 1, 1], -1);
        let v = [rational(1, 1), rational(-2, 1), rational(3, 1)];
        let s = SchubertCondition::new(PlaneBasis::new(3, vec![v.to_vec()]).unwrap(), 1, 2, 2).unwrap();
        let p = polar_all_charts(&x, &s).unwrap();
        assert_eq!(p.dim, Some(1));
        assert!(p.ideal.same_radical(&critical_locus(&x, &v)).unwrap());
        assert_eq!(p.fiber_check, None);
    }

    #[test]
    fn polar_curve_of_cone_and_fiber_formula() {
        let x = hypersurface(&[1, 1, -1], 0);
        let draws = polar_draws(&x, 1, 2, 5, 3).unwrap();
        assert_eq!(draws.majority, Some(1));
        assert!(draws.non_generic.is_empty());
        for (i, ideal) in draws.ideals.iter().enumerate() {
            let s = SchubertCondition::random(3, 1, 2, 2, 3, i).unwrap();
            let v = s.d_basis().columns()[0].clone();
            assert!(ideal.same_radical(&critical_locus(&x, &v)).unwrap());
            assert_eq!(draws.fiber_checks[i], Some(true));
        }
    }

    #[test]
    fn weakened_condition_gives_the_variety() {
        let x = hypersurface(&[1, 1, -1], 0);
        let chart = Chart::new(3, &[0, 1]).unwrap();
        let p = polar_ideal_with_m(&x, &line(&[1, 2, 3]), 0, 2, &chart).unwrap();
        assert!(p.ideal.same_radical(x.ideal()).unwrap());
        assert_eq!(p.dim, Some(2));
    }

    #[test]
    fn second_polar_of_a_threefold() {
        let x = hypersurface(&[1, 1, 1, -1], 0);
        let draws = polar_draws(&x, 2, 3, 3, 11).unwrap();
        assert_eq!(draws.majority, Some(1));
        assert_eq!(draws.expected_dim, 1);
    }
}
