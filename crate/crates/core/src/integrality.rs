//! Integral subvarieties of `(C^n × G(d, n), 𝓗)` on a chart.
//!
//! `Z` is integral when `T_{(z,W)}Z ⊂ 𝓗(z, W)` at its smooth points. With
//! `r = codim Z`, at a smooth point this says that each distribution form
//! lies in the row span of the Jacobian, i.e. the `(r+1)`-minors of
//! `[Jac; ω_i]` vanish. Restricting to the smooth locus is done by saturating
//! with the `r`-minors of `Jac`, so the test is exact and point-free. The
//! checker assumes `Z` equidimensional and, for [`characterize`], irreducible;
//! neither is verified.

use std::sync::OnceLock;

use serde::Serialize;

use crate::conormal::{conormal_ideal, AffineVariety};
use crate::distribution::forms_in_ring;
use crate::error::{Error, Result};
use crate::exactpoly::{
    eliminate, ideal_dimension, jacobian, minors, radical_membership, saturate, Ideal, Polynomial,
};
use crate::grassmann::Chart;
use crate::par;

/// A subvariety of `C^n × chart` given by an ideal over `(z, a)`.
#[derive(Debug, Clone)]
pub struct ChartSubvariety {
    chart: Chart,
    ideal: Ideal,
    dim: OnceLock<usize>,
}

impl ChartSubvariety {
    /// The ideal must live on a ring whose first `n` variables are the `z`
    /// coordinates and whose remaining variables are the chart's `a` names in
    /// order; it is moved onto the canonical chart ring.
    pub fn new(chart: &Chart, ideal: Ideal) -> Result<Self> {
        let ring = ideal.ring();
        let n = chart.n();
        if ring.len() != n + chart.num_a() {
            return Err(Error::ChartMismatch(format!(
                "expected {} variables for chart {}, got {}",
                n + chart.num_a(),
                chart.label(),
                ring.len()
            )));
        }
        if ring.names()[n..] != chart.a_names()[..] {
            return Err(Error::ChartMismatch(format!(
                "chart variables must be named {}",
                chart.a_names().join(" ")
            )));
        }
        let target = chart.coordinate_ring(&ring.names()[..n])?;
        let ideal = ideal.with_ring(&target)?;
        if ideal.is_unit()? {
            return Err(Error::EmptyVariety);
        }
        Ok(ChartSubvariety {
            chart: chart.clone(),
            ideal,
            dim: OnceLock::new(),
        })
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    pub fn dim(&self) -> Result<usize> {
        if let Some(&k) = self.dim.get() {
            return Ok(k);
        }
        let k = ideal_dimension(&self.ideal)?;
        let _ = self.dim.set(k);
        Ok(k)
    }

    fn ambient_dim(&self) -> usize {
        self.chart.n() + self.chart.num_a()
    }
}

/// An offending stacked minor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    /// 0-based index of the distribution form.
    pub form: usize,
    pub minor: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntegralityVerdict {
    pub is_integral: bool,
    pub dim_z: usize,
    /// Dimension of the projection `π(Z) ⊂ C^n`.
    pub t: usize,
    /// `t + (d - t)(n - d)`.
    pub bound: i64,
    pub witness: Option<Witness>,
}

impl IntegralityVerdict {
    fn new(chart: &Chart, is_integral: bool, dim_z: usize, t: usize, witness: Option<Witness>) -> Self {
        let (n, d) = (chart.n() as i64, chart.d() as i64);
        let ti = t as i64;
        IntegralityVerdict {
            is_integral,
            dim_z,
            t,
            bound: ti + (d - ti) * (n - d),
            witness,
        }
    }
}

/// Closure of `π(Z)`: the `a` variables eliminated.
pub fn projection_ideal(z: &ChartSubvariety) -> Result<Ideal> {
    let n = z.chart.n();
    let drop: Vec<usize> = (n..z.ambient_dim()).collect();
    eliminate(&z.ideal, &drop)
}

fn projection_dim(z: &ChartSubvariety) -> Result<usize> {
    ideal_dimension(&projection_ideal(z)?)
}

/// Decides integrality at generic smooth points of `Z`.
pub fn check_integral(z: &ChartSubvariety) -> Result<IntegralityVerdict> {
    let total = z.ambient_dim();
    let dim_z = z.dim()?;
    let r = total - dim_z;
    let t = projection_dim(z)?;
    let ring = z.ideal.ring();
    let all: Vec<usize> = (0..total).collect();
    let gens = z.ideal.groebner_basis()?.polynomials();
    let zi = Ideal::new(ring, gens)?;
    let jac = jacobian(&zi, &all)?;

    let smooth = if r == 0 {
        z.ideal.clone()
    } else {
        let m = minors(&jac, r)?;
        let mut any_outside = false;
        for g in &m {
            if !radical_membership(g, &z.ideal)? {
                any_outside = true;
                break;
            }
        }
        if !any_outside {
            return Err(Error::EmptySmoothLocus);
        }
        saturate(&z.ideal, &Ideal::new(ring, m)?)?
    };

    let forms = forms_in_ring(&z.chart, ring)?;
    let stacked = forms
        .forms()
        .iter()
        .map(|row| jac.with_row(row))
        .collect::<Result<Vec<_>>>()?;
    let witnesses = par::try_map_slice(&stacked, |s| -> Result<Option<Polynomial>> {
        if r + 1 > s.rows().min(s.cols()) {
            return Ok(None);
        }
        for m in minors(s, r + 1)? {
            if !radical_membership(&m, &smooth)? {
                return Ok(Some(m));
            }
        }
        Ok(None)
    })?;
    let witness = witnesses
        .into_iter()
        .enumerate()
        .find_map(|(form, m)| m.map(|m| Witness {
            form,
            minor: m.primitive().to_string(),
        }));
    Ok(IntegralityVerdict::new(&z.chart, witness.is_none(), dim_z, t, witness))
}

/// The two dimension inequalities for an integral `Z`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DimensionBound {
    pub verdict: IntegralityVerdict,
    /// `t ≤ d`.
    pub t_within_d: bool,
    /// `dim Z ≤ t + (d - t)(n - d)`.
    pub dim_within_bound: bool,
    /// `dim Z = t + (d - t)(n - d)`.
    pub equality: bool,
}

impl DimensionBound {
    pub fn holds(&self) -> bool {
        self.t_within_d && self.dim_within_bound
    }
}

pub fn dimension_bound_check(z: &ChartSubvariety) -> Result<DimensionBound> {
    let verdict = check_integral(z)?;
    let d = z.chart.d();
    Ok(DimensionBound {
        t_within_d: verdict.t <= d,
        dim_within_bound: (verdict.dim_z as i64) <= verdict.bound,
        equality: verdict.dim_z as i64 == verdict.bound,
        verdict,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Classification {
    IsDConormalOfImage,
    IntegralButNotMaximal,
    NotIntegral,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Characterization {
    pub class: Classification,
    pub verdict: IntegralityVerdict,
    /// For maximal integral `Z`: whether `Z` and the conormal space rebuilt
    /// from `π(Z)` have the same radical.
    pub cross_validated: Option<bool>,
}

/// Classifies a reduced irreducible `Z`.
pub fn characterize(z: &ChartSubvariety) -> Result<Characterization> {
    let verdict = check_integral(z)?;
    if !verdict.is_integral {
        return Ok(Characterization {
            class: Classification::NotIntegral,
            verdict,
            cross_validated: None,
        });
    }
    if verdict.t > z.chart.d() || verdict.dim_z as i64 != verdict.bound {
        return Ok(Characterization {
            class: Classification::IntegralButNotMaximal,
            verdict,
            cross_validated: None,
        });
    }
    let x = AffineVariety::new(projection_ideal(z)?)?;
    let rebuilt = conormal_ideal(&x, z.chart.d(), &z.chart)?;
    let agree = rebuilt.ideal().same_radical(&z.ideal)?;
    Ok(Characterization {
        class: Classification::IsDConormalOfImage,
        verdict,
        cross_validated: Some(agree),
    })
}
