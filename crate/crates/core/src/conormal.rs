//! `d`-conormal spaces `C_d(X) ⊂ X × G(d, n)` as chart ideals.
//!
//! On a chart the incidence `T_zX⁰ ⊂ W` says that each linear equation `ρ_i`
//! of `W` lies in the row span of the Jacobian of `X`; with `r = n - k` this is
//! the vanishing of the `(r+1)`-minors of `[Jac; ρ_i]`. The closure over the
//! smooth locus is the saturation by the `r`-minors of `Jac`. `d = k` gives
//! the Nash modification and `d = n - 1` the classical conormal space.

use std::sync::OnceLock;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactpoly::{
    ideal_dimension, jacobian, minors, radical_membership, saturate, Ideal, Polynomial, Rational,
    Ring, VariableSet,
};
use crate::grassmann::Chart;
use crate::numlin::{intersection_dim, Subspace};
use crate::par;
use crate::sample::{sample_smooth_points, PolySystem, ProjectionSettings};

/// An affine variety `X = V(I) ⊂ C^n` with its dimension `k`.
#[derive(Debug, Clone)]
pub struct AffineVariety {
    ideal: Ideal,
    k: usize,
    generic_rank: OnceLock<usize>,
}

impl AffineVariety {
    /// Fails with [`Error::EmptyVariety`] for the unit ideal.
    pub fn new(ideal: Ideal) -> Result<Self> {
        let k = ideal_dimension(&ideal)?;
        Ok(AffineVariety {
            ideal,
            k,
            generic_rank: OnceLock::new(),
        })
    }

    pub fn from_polynomials(ring: &Ring, polys: Vec<Polynomial>) -> Result<Self> {
        Self::new(Ideal::new(ring, polys)?)
    }

    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    pub fn ring(&self) -> &Ring {
        self.ideal.ring()
    }

    pub fn n(&self) -> usize {
        self.ring().len()
    }

    pub fn dim(&self) -> usize {
        self.k
    }

    pub fn codim(&self) -> usize {
        self.n() - self.k
    }

    /// Largest `s` such that some `s`-minor of the Jacobian is not in `√I`.
    pub fn generic_jacobian_rank(&self) -> Result<usize> {
        if let Some(&r) = self.generic_rank.get() {
            return Ok(r);
        }
        let n = self.n();
        let jac = jacobian(&self.ideal, &(0..n).collect::<Vec<_>>())?;
        let mut rank = 0;
        for s in 1..=jac.rows().min(n) {
            let ms = minors(&jac, s)?;
            let mut found = false;
            for m in &ms {
                if !radical_membership(m, &self.ideal)? {
                    found = true;
                    break;
                }
            }
            if !found {
                break;
            }
            rank = s;
        }
        let _ = self.generic_rank.set(rank);
        Ok(rank)
    }

    /// Whether `p` lies on `X` exactly.
    pub fn contains_point(&self, p: &[Rational]) -> bool {
        p.len() == self.n() && self.ideal.generators().iter().all(|g| g.eval_rational(p).is_zero())
    }
}

/// `C_d(X)` on one chart: an ideal over the ring `(z, a)`.
#[derive(Debug, Clone)]
pub struct ConormalChartIdeal {
    variety: AffineVariety,
    d: usize,
    chart: Chart,
    ideal: Ideal,
}

impl ConormalChartIdeal {
    pub fn variety(&self) -> &AffineVariety {
        &self.variety
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    pub fn ring(&self) -> &Ring {
        self.ideal.ring()
    }

    /// Whether the chart misses `C_d(X)` entirely.
    pub fn is_empty(&self) -> Result<bool> {
        self.ideal.is_unit()
    }

    /// `k + (d - k)(n - d)`.
    pub fn expected_dimension(&self) -> usize {
        let (n, k, d) = (self.variety.n(), self.variety.dim(), self.d);
        k + (d - k) * (n - d)
    }
}

/// The chart ring for `X`'s coordinate names.
pub fn chart_ring(x: &AffineVariety, chart: &Chart) -> Result<Ring> {
    chart.coordinate_ring(x.ring().names())
}

/// The generators of `X` pulled back to the chart ring.
pub fn lift_to_chart(x: &AffineVariety, ring: &Ring) -> Vec<Polynomial> {
    let mapping: Vec<usize> = (0..x.n()).collect();
    x.ideal()
        .generators()
        .iter()
        .map(|g| g.map_variables(ring, &mapping))
        .collect()
}

/// The ideal of `C_d(X)` on `chart`.
pub fn conormal_ideal(x: &AffineVariety, d: usize, chart: &Chart) -> Result<ConormalChartIdeal> {
    let (n, k) = (x.n(), x.dim());
    if chart.n() != n || chart.d() != d {
        return Err(Error::ChartMismatch(format!(
            "chart {} is not a chart of G({d},{n})",
            chart.label()
        )));
    }
    if d < k || d + 1 > n {
        return Err(Error::OutOfRange(format!("d = {d} must satisfy {k} <= d <= {}", n - 1)));
    }
    let r = n - k;
    let rank = x.generic_jacobian_rank()?;
    if rank != r {
        return Err(Error::JacobianRank { rank, codim: r });
    }
    let ring = chart_ring(x, chart)?;
    let base = Ideal::new(&ring, lift_to_chart(x, &ring))?;
    let z: Vec<usize> = (0..n).collect();
    let jac = jacobian(&base, &z)?;
    let mut raw = base.generators().to_vec();
    if r < n {
        let stacked = chart
            .equation_rows(&ring)?
            .into_iter()
            .map(|row| jac.with_row(&row))
            .collect::<Result<Vec<_>>>()?;
        for m in par::try_map_slice(&stacked, |s| minors(s, r + 1))? {
            raw.extend(m);
        }
    }
    let raw = Ideal::new(&ring, raw)?;
    let smooth = Ideal::new(&ring, if r == 0 { vec![Polynomial::one(&ring)] } else { minors(&jac, r)? })?;
    let sat = saturate(&raw, &smooth)?;
    let ideal = Ideal::new(&ring, sat.groebner_basis()?.polynomials())?;
    Ok(ConormalChartIdeal {
        variety: x.clone(),
        d,
        chart: chart.clone(),
        ideal,
    })
}

/// The Nash modification on `chart`: `C_k(X)`.
pub fn nash_ideal(x: &AffineVariety, chart: &Chart) -> Result<ConormalChartIdeal> {
    conormal_ideal(x, x.dim(), chart)
}

fn substitute(c: &ConormalChartIdeal, images_z: Vec<Polynomial>, target: &Ring) -> Result<Vec<Polynomial>> {
    let chart = &c.chart;
    let mut images = images_z;
    images.extend((0..chart.num_a()).map(|i| Polynomial::var(target, i)));
    Ok(c.ideal
        .generators()
        .iter()
        .map(|g| g.compose(target, &images))
        .collect())
}

/// The chart slice of the fiber `ν_d⁻¹(p)` as an ideal in the `a` variables.
pub fn fiber_ideal(c: &ConormalChartIdeal, p: &[Rational]) -> Result<Ideal> {
    if !c.variety.contains_point(p) {
        return Err(Error::NotOnVariety);
    }
    let target = c.chart.a_ring();
    let images = p.iter().map(|v| Polynomial::constant(&target, v.clone())).collect();
    let gens = substitute(c, images, &target)?;
    Ideal::new(&target, gens)
}

/// The fiber over the Gaussian-rational point `re + i·im`, as an ideal over
/// `Q[a, w]` containing `w² + 1` (so `w` plays the role of `i`).
pub fn fiber_ideal_over_gaussian(c: &ConormalChartIdeal, re: &[Rational], im: &[Rational]) -> Result<Ideal> {
    let n = c.variety.n();
    if re.len() != n || im.len() != n {
        return Err(Error::NotOnVariety);
    }
    let mut names = c.chart.a_names();
    let wname = VariableSet::new(&names)?.fresh_name("w");
    names.push(wname);
    let target = VariableSet::new(&names)?;
    let w = Polynomial::var(&target, names.len() - 1);
    let w2 = &(&w * &w) + &Polynomial::one(&target);
    let images: Vec<Polynomial> = re
        .iter()
        .zip(im)
        .map(|(a, b)| &Polynomial::constant(&target, a.clone()) + &w.scale(b))
        .collect();
    let modulus = Ideal::new(&target, vec![w2.clone()])?;
    for g in c.variety.ideal().generators() {
        if !modulus.contains(&g.compose(&target, &images))? {
            return Err(Error::NotOnVariety);
        }
    }
    let mut gens = substitute(c, images, &target)?;
    gens.push(w2);
    Ideal::new(&target, gens)
}

/// Whether `dim C_d(X) = k + (d - k)(n - d)` on this chart.
pub fn dimension_formula_check(c: &ConormalChartIdeal) -> Result<bool> {
    Ok(ideal_dimension(&c.ideal)? == c.expected_dimension())
}

/// Outcome of a sampled transversality test.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransversalityVerdict {
    pub transversal: bool,
    pub samples: usize,
    /// Indices of samples where `T Z` meets `0 × T_W G`.
    pub failures: Vec<usize>,
}

pub const DEFAULT_TRANSVERSALITY_SAMPLES: usize = 25;
pub const TRANSVERSALITY_TOL: f64 = 1e-6;

/// Samples smooth points of `V(ideal)` on `chart` and tests
/// `T Z ∩ (0 × T_W G) = 0` at each.
pub fn transversality_check_ideal(chart: &Chart, ideal: &Ideal, samples: usize, seed: u64) -> Result<TransversalityVerdict> {
    let total = chart.n() + chart.num_a();
    if ideal.ring().len() != total {
        return Err(Error::ChartMismatch("ideal does not live on the chart ring".into()));
    }
    let dim = ideal_dimension(ideal)?;
    let gb = ideal.groebner_basis()?.polynomials();
    let system = PolySystem::new(ideal.ring(), &gb);
    let settings = ProjectionSettings {
        tol: 1e-8,
        max_iterations: 200,
    };
    let points = sample_smooth_points(&system, total - dim, samples, seed, 1.0, &settings)?;
    let fiber_dirs = Subspace::coordinate(total, &(chart.n()..total).collect::<Vec<_>>());
    let hits = par::try_map_slice(&points, |p| {
        intersection_dim(&system.tangent_space(p), &fiber_dirs, TRANSVERSALITY_TOL)
    })?;
    let failures: Vec<usize> = hits
        .iter()
        .enumerate()
        .filter(|(_, &h)| h > 0)
        .map(|(i, _)| i)
        .collect();
    Ok(TransversalityVerdict {
        transversal: failures.is_empty(),
        samples: points.len(),
        failures,
    })
}

pub fn transversality_check(c: &ConormalChartIdeal, samples: usize, seed: u64) -> Result<TransversalityVerdict> {
    transversality_check_ideal(&c.chart, &c.ideal, samples, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::rational;
    use crate::grassmann::chart_cover;

    fn variety(names: &[&str], build: impl Fn(&[Polynomial]) -> Vec<Polynomial>) -> AffineVariety {
        let r = VariableSet::new(names).unwrap();
        let vars: Vec<Polynomial> = (0..names.len()).map(|i| Polynomial::var(&r, i)).collect();
        AffineVariety::from_polynomials(&r, build(&vars)).unwrap()
    }

    fn cone() -> AffineVariety {
        variety(&["x", "y", "z"], |v| vec![&(&(&v[0] * &v[0]) + &(&v[1] * &v[1])) + &(&v[2] * &v[2])])
    }

    fn strings(i: &Ideal) -> Vec<String> {
        i.canonical_strings().unwrap()
    }

    #[test]
    fn coordinate_line_in_three_space() {
        // Y = z1-axis, d = 2, chart with Y inside W0
        let y = variety(&["z1", "z2", "z3"], |v| vec![v[1].clone(), v[2].clone()]);
        let c = conormal_ideal(&y, 2, &Chart::new(3, &[0, 1]).unwrap()).unwrap();
        assert_eq!(strings(c.ideal()), vec!["a11", "z2", "z3"]);
        assert!(dimension_formula_check(&c).unwrap());
        let f = fiber_ideal(&c, &vec![rational(0, 1); 3]).unwrap();
        assert_eq!(strings(&f), vec!["a11"]);
    }

    #[test]
    fn cone_nash_chart() {
        let x = cone();
        let c = nash_ideal(&x, &Chart::new(3, &[0, 1]).unwrap()).unwrap();
        assert_eq!(ideal_dimension(c.ideal()).unwrap(), 2);
        let zero = fiber_ideal(&c, &vec![rational(0, 1); 3]).unwrap();
        let ring = zero.ring().clone();
        let a11 = Polynomial::var(&ring, 0);
        let a12 = Polynomial::var(&ring, 1);
        let conic = Ideal::new(&ring, vec![&(&(&a11 * &a11) + &(&a12 * &a12)) + &Polynomial::one(&ring)]).unwrap();
        assert!(zero.same_radical(&conic).unwrap());
    }

    #[test]
    fn cone_fiber_over_gaussian_point_is_tangent_plane() {
        let c = nash_ideal(&cone(), &Chart::new(3, &[0, 1]).unwrap()).unwrap();
        // p = (1, 0, i): tangent plane v3 = i v1, so a11 = w, a12 = 0
        let f = fiber_ideal_over_gaussian(
            &c,
            &[rational(1, 1), rational(0, 1), rational(0, 1)],
            &[rational(0, 1), rational(0, 1), rational(1, 1)],
        )
        .unwrap();
        assert_eq!(strings(&f), vec!["a11 - w", "a12", "w^2 + 1"]);
        assert!(fiber_ideal_over_gaussian(&c, &vec![rational(1, 1); 3], &vec![rational(0, 1); 3]).is_err());
    }

    #[test]
    fn umbrella_dimension() {
        let x = variety(&["x", "y", "z"], |v| vec![&(&v[0] * &v[0]) - &(&(&v[1] * &v[1]) * &v[2])]);
        for chart in chart_cover(3, 2).unwrap() {
            let c = nash_ideal(&x, &chart).unwrap();
            assert_eq!(ideal_dimension(c.ideal()).unwrap(), 2, "chart {}", chart.label());
        }
    }

    #[test]
    fn rejects_bad_input() {
        let x = cone();
        assert!(conormal_ideal(&x, 1, &Chart::new(3, &[0]).unwrap()).is_err());
        let c = nash_ideal(&x, &Chart::new(3, &[0, 1]).unwrap()).unwrap();
        assert_eq!(fiber_ideal(&c, &vec![rational(1, 1); 3]).unwrap_err(), Error::NotOnVariety);
        // double plane: Jacobian vanishes on X
        let double = variety(&["x", "y", "z"], |v| vec![&v[2] * &v[2]]);
        assert!(matches!(
            conormal_ideal(&double, 2, &Chart::new(3, &[0, 1]).unwrap()),
            Err(Error::JacobianRank { rank: 0, codim: 1 })
        ));
    }

    #[test]
    fn linear_nash_is_transversal() {
        let plane = variety(&["x", "y", "z"], |v| vec![&(&v[0] + &v[1]) - &v[2]]);
        let c = nash_ideal(&plane, &Chart::new(3, &[0, 1]).unwrap()).unwrap();
        assert_eq!(strings(c.ideal()), vec!["a11 - 1", "a12 - 1", "x + y - z"]);
        let v = transversality_check(&c, 10, 0).unwrap();
        assert!(v.transversal);
        assert_eq!(v.samples, 10);
    }
}
