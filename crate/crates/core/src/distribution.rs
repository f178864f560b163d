//! The plane distribution `𝓗(z, W) = W × T_W G(d, n)` on `C^n × G(d, n)`.
//!
//! On a chart it is the common kernel of the `n-d` one-forms
//! `dz_{w1[i]} - Σ_j a[i][j] dz_{w0[j]}`. Forms are stored as coefficient rows
//! over the chart coordinates `(dz_1, …, dz_n, da_11, …)`.

use std::fmt;

use crate::error::{Error, Result};
use crate::exactpoly::{Polynomial, Ring};
use crate::grassmann::{rank, Chart, PlaneMatrix, Scalar};

/// The defining one-forms of `𝓗` on one chart.
#[derive(Debug, Clone)]
pub struct DistributionForms {
    chart: Chart,
    ring: Ring,
    forms: Vec<Vec<Polynomial>>,
}

/// Forms over the default ring `z1..zn, a11..`.
pub fn forms_for_chart(chart: &Chart) -> DistributionForms {
    forms_in_ring(chart, &chart.default_ring()).expect("default ring fits the chart")
}

/// Forms over a given chart ring (z block first, then the a block).
pub fn forms_in_ring(chart: &Chart, ring: &Ring) -> Result<DistributionForms> {
    let width = chart.n() + chart.num_a();
    if ring.len() != width {
        return Err(Error::ChartMismatch(format!(
            "ring has {} variables, chart needs {width}",
            ring.len()
        )));
    }
    let forms = chart
        .equation_rows(ring)?
        .into_iter()
        .map(|mut row| {
            row.resize(width, Polynomial::zero(ring));
            row
        })
        .collect();
    Ok(DistributionForms {
        chart: chart.clone(),
        ring: ring.clone(),
        forms,
    })
}

impl DistributionForms {
    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    /// Coefficient rows, one per form, of length `n + d(n-d)`.
    pub fn forms(&self) -> &[Vec<Polynomial>] {
        &self.forms
    }

    /// Coefficient matrix at a point of the chart.
    pub fn coefficients_at<S: Scalar>(&self, point: &PlaneMatrix<S>) -> Result<Vec<Vec<S>>> {
        if point.chart() != &self.chart {
            return Err(Error::ChartMismatch(format!(
                "point lives on chart {}, forms on {}",
                point.chart().label(),
                self.chart.label()
            )));
        }
        let mut coords = vec![S::zero(); self.chart.n()];
        coords.extend(point.flat());
        Ok(self
            .forms
            .iter()
            .map(|row| row.iter().map(|c| S::eval(c, &coords)).collect())
            .collect())
    }

    /// Rank of the form system at a point; always `n - d`.
    pub fn rank_at<S: Scalar>(&self, point: &PlaneMatrix<S>) -> Result<usize> {
        Ok(rank(&self.coefficients_at(point)?))
    }

    pub fn form_strings(&self) -> Vec<String> {
        (0..self.forms.len()).map(|i| self.form_string(i)).collect()
    }

    /// Human form such as `dz2 - a11*dz1`.
    pub fn form_string(&self, i: usize) -> String {
        let row = &self.forms[i];
        let lead = self.chart.w1()[i];
        let order = std::iter::once(lead).chain((0..row.len()).filter(|&k| k != lead));
        let mut out = String::new();
        for k in order {
            let c = &row[k];
            if c.is_zero() {
                continue;
            }
            let name = format!("d{}", self.ring.name(k));
            let (neg, body) = if c.is_constant() {
                let v = c.constant_value().expect("constant");
                let neg = v < num_traits::Zero::zero();
                let mag = if neg { -v } else { v };
                if num_traits::One::is_one(&mag) {
                    (neg, name)
                } else {
                    (neg, format!("{mag}*{name}"))
                }
            } else if c.terms().len() == 1 && c.terms()[0].1 < num_traits::Zero::zero() {
                (true, format!("{}*{name}", wrap(&(-c.clone()))))
            } else {
                (false, format!("{}*{name}", wrap(c)))
            };
            match (out.is_empty(), neg) {
                (true, false) => out.push_str(&body),
                (true, true) => out.push_str(&format!("-{body}")),
                (false, false) => out.push_str(&format!(" + {body}")),
                (false, true) => out.push_str(&format!(" - {body}")),
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

fn wrap(p: &Polynomial) -> String {
    if p.terms().len() > 1 {
        format!("({p})")
    } else {
        p.to_string()
    }
}

impl fmt::Display for DistributionForms {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.form_strings().join(", "))
    }
}

/// A tangent vector to `C^n × chart` at some point.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentVector<S: Scalar> {
    pub z_part: Vec<S>,
    pub a_part: Vec<Vec<S>>,
}

impl<S: Scalar> TangentVector<S> {
    pub fn new(chart: &Chart, z_part: Vec<S>, a_part: Vec<Vec<S>>) -> Result<Self> {
        if z_part.len() != chart.n()
            || a_part.len() != chart.codim()
            || a_part.iter().any(|r| r.len() != chart.d())
        {
            return Err(Error::ChartMismatch("tangent vector shape does not fit the chart".into()));
        }
        Ok(TangentVector { z_part, a_part })
    }

    fn flat(&self) -> Vec<S> {
        let mut v = self.z_part.clone();
        v.extend(self.a_part.iter().flatten().cloned());
        v
    }
}

/// Values of the `n-d` forms on `v` at the point `point`. All zero iff
/// `v ∈ 𝓗`.
pub fn evaluate_form<S: Scalar>(
    forms: &DistributionForms,
    point: &PlaneMatrix<S>,
    v: &TangentVector<S>,
) -> Result<Vec<S>> {
    let c = &forms.chart;
    if v.z_part.len() != c.n() || v.a_part.len() != c.codim() || v.a_part.iter().any(|r| r.len() != c.d()) {
        return Err(Error::ChartMismatch("tangent vector shape does not fit the chart".into()));
    }
    let coeffs = forms.coefficients_at(point)?;
    let flat = v.flat();
    Ok(coeffs
        .iter()
        .map(|row| {
            row.iter()
                .zip(&flat)
                .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
        })
        .collect())
}
