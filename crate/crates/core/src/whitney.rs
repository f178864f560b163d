//! Whitney conditions for a pair `(X, Y)` with `Y` a coordinate subspace.
//!
//! Condition a) is decided exactly on the Nash modification: on a chart the
//! planes containing `Y` are cut out by `ρ_i(e_y) = 0` for the chart's
//! equation rows `ρ_i`, and a) holds along `Y` iff these lie in the radical of
//! `J + (Nash ideal)` where `J = ⟨z_j : j ∉ Y⟩`. This is a global surrogate:
//! it tests every point of `ν⁻¹(Y)` on the chart, not only the fiber over 0.
//! Condition w) is only probed numerically along curves into the origin.

use serde::Serialize;

use crate::conormal::{nash_ideal, AffineVariety, ConormalChartIdeal};
use crate::error::{Error, Result};
use crate::exactpoly::{radical_membership, Ideal, Polynomial};
use crate::grassmann::{chart_cover, plane_from_matrix, Chart, PlaneMatrix};
use crate::numlin::{delta_distance, norm, orthonormalize, ComplexMatrix, Subspace, C64};
use crate::par;
use crate::sample::{curves_into_origin, task_rng, Curve, PolySystem};

/// `X` together with `Y = span(e_j : j ∈ y_axes)` and a chart of the Nash
/// modification.
#[derive(Debug, Clone)]
pub struct WhitneyInstance {
    x: AffineVariety,
    y_axes: Vec<usize>,
    chart: Chart,
}

/// Whether the coordinate subspace on `y_axes` lies in `X`.
fn contains_axes(x: &AffineVariety, y_axes: &[usize]) -> bool {
    let ring = x.ring();
    let images: Vec<Polynomial> = (0..x.n())
        .map(|i| {
            if y_axes.contains(&i) {
                Polynomial::var(ring, i)
            } else {
                Polynomial::zero(ring)
            }
        })
        .collect();
    x.ideal().generators().iter().all(|g| g.compose(ring, &images).is_zero())
}

fn check_axes(x: &AffineVariety, y_axes: &[usize]) -> Result<Vec<usize>> {
    let mut y = y_axes.to_vec();
    y.sort_unstable();
    y.dedup();
    if y.iter().any(|&i| i >= x.n()) {
        return Err(Error::OutOfRange("axis index out of range".into()));
    }
    if !contains_axes(x, &y) {
        return Err(Error::NotOnVariety);
    }
    Ok(y)
}

impl WhitneyInstance {
    /// `chart` must be a chart of `G(k, n)` whose `W₀` contains every axis of
    /// `Y`, so that `W₁ ∩ Y = 0`.
    pub fn new(x: AffineVariety, y_axes: &[usize], chart: Chart) -> Result<Self> {
        let y = check_axes(&x, y_axes)?;
        if chart.n() != x.n() || chart.d() != x.dim() {
            return Err(Error::ChartMismatch(format!(
                "chart {} is not a chart of G({},{})",
                chart.label(),
                x.dim(),
                x.n()
            )));
        }
        if !y.iter().all(|i| chart.w0().contains(i)) {
            return Err(Error::NotTransversal);
        }
        Ok(WhitneyInstance { x, y_axes: y, chart })
    }

    pub fn variety(&self) -> &AffineVariety {
        &self.x
    }

    pub fn y_axes(&self) -> &[usize] {
        &self.y_axes
    }

    pub fn t(&self) -> usize {
        self.y_axes.len()
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }
}

/// `𝓘` and `J` on one chart, both containing the Nash ideal.
#[derive(Debug, Clone)]
pub struct WhitneyIdealPair {
    pub nash: ConormalChartIdeal,
    pub i_script: Ideal,
    pub j: Ideal,
    /// The generators `𝓘` adds to `J`.
    pub plane_conditions: Vec<Polynomial>,
}

/// `ρ_i(e_y)` for every equation row and every axis of `Y`.
fn plane_conditions(chart: &Chart, nash: &ConormalChartIdeal, y_axes: &[usize]) -> Result<Vec<Polynomial>> {
    let rows = chart.equation_rows(nash.ring())?;
    Ok(rows
        .iter()
        .flat_map(|row| y_axes.iter().map(move |&y| row[y].clone()))
        .filter(|p| !p.is_zero())
        .collect())
}

fn pair_on_chart(x: &AffineVariety, y_axes: &[usize], chart: &Chart) -> Result<WhitneyIdealPair> {
    let nash = nash_ideal(x, chart)?;
    let ring = nash.ring().clone();
    let off_y: Vec<Polynomial> = (0..x.n())
        .filter(|i| !y_axes.contains(i))
        .map(|i| Polynomial::var(&ring, i))
        .collect();
    let j = nash.ideal().with_generators(off_y)?;
    let conds = plane_conditions(chart, &nash, y_axes)?;
    let i_script = j.with_generators(conds.iter().cloned())?;
    Ok(WhitneyIdealPair {
        nash,
        i_script,
        j,
        plane_conditions: conds,
    })
}

pub fn build_ideal_pair(w: &WhitneyInstance) -> Result<WhitneyIdealPair> {
    pair_on_chart(&w.x, &w.y_axes, &w.chart)
}

/// `J ⊂ 𝓘`, by membership of every generator of `J`.
pub fn inclusion_holds(pair: &WhitneyIdealPair) -> Result<bool> {
    for g in pair.j.generators() {
        if !pair.i_script.contains(g)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn radicals_agree(pair: &WhitneyIdealPair) -> Result<bool> {
    for g in &pair.plane_conditions {
        if !radical_membership(g, &pair.j)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `√𝓘 = √J` on the instance's chart.
pub fn condition_a_check(w: &WhitneyInstance) -> Result<bool> {
    radicals_agree(&build_ideal_pair(w)?)
}

/// Per-chart outcome of [`condition_a_all_charts`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChartVerdict {
    pub chart: usize,
    pub label: String,
    pub holds: bool,
    /// `J ⊂ 𝓘` on this chart.
    pub inclusion: bool,
}

/// Condition a) along `Y` on every chart of the Nash modification. On charts
/// whose `W₀` misses an axis of `Y` no plane contains `Y`, so there the
/// condition says that `ν⁻¹(Y)` does not meet the chart.
pub fn condition_a_all_charts(x: &AffineVariety, y_axes: &[usize]) -> Result<Vec<ChartVerdict>> {
    let y = check_axes(x, y_axes)?;
    let charts = chart_cover(x.n(), x.dim())?;
    par::try_map_slice(&charts, |chart| {
        let pair = pair_on_chart(x, &y, chart)?;
        Ok(ChartVerdict {
            chart: 0,
            label: chart.label(),
            holds: radicals_agree(&pair)?,
            inclusion: inclusion_holds(&pair)?,
        })
    })
    .map(|v| {
        v.into_iter()
            .enumerate()
            .map(|(i, c)| ChartVerdict { chart: i, ..c })
            .collect()
    })
}

/// `δ(Y, T)` for the coordinate subspace `Y`; 0 when `Y = 0`.
fn delta_to_axes(n: usize, y_axes: &[usize], t: &Subspace) -> Result<f64> {
    delta_distance(&Subspace::coordinate(n, y_axes), t)
}

fn distance_to_axes(x: &[C64], y_axes: &[usize]) -> f64 {
    let off: Vec<C64> = x
        .iter()
        .enumerate()
        .filter(|(i, _)| !y_axes.contains(i))
        .map(|(_, z)| *z)
        .collect();
    norm(&off)
}

/// Outcome of the limit-plane sampling oracle for condition a) at 0.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitPlaneReport {
    /// Whether every sampled limit plane contains `Y` within `tol`.
    pub contains_y: bool,
    /// `δ(Y, T)` per curve at the smallest scale.
    pub deltas: Vec<f64>,
    pub tol: f64,
}

pub const LIMIT_SCALES: [f64; 3] = [1e-6, 1e-7, 1e-8];
pub const LIMIT_TOL: f64 = 1e-6;

/// Approximates limits of tangent planes at 0 by the tangent planes at
/// `x(s)` for tiny `s` along `curves` random curves into 0 on `X`.
pub fn limit_plane_oracle(x: &AffineVariety, y_axes: &[usize], curves: usize, seed: u64) -> Result<LimitPlaneReport> {
    let y = check_axes(x, y_axes)?;
    let system = PolySystem::new(x.ring(), x.ideal().generators());
    let family = curves_into_origin(&system, x.codim(), curves, seed)?;
    let deltas = par::try_map_slice(&family, |c| -> Result<f64> {
        let mut last = None;
        for &s in &LIMIT_SCALES {
            let p = c.point(&system, s)?;
            if system.is_smooth_point(&p, x.codim()) {
                last = Some(delta_to_axes(x.n(), &y, &system.tangent_space(&p))?);
            }
        }
        last.ok_or(Error::InsufficientSamples { found: 0, wanted: 1 })
    })?;
    Ok(LimitPlaneReport {
        contains_y: deltas.iter().all(|&d| d <= LIMIT_TOL),
        deltas,
        tol: LIMIT_TOL,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WVerdict {
    Bounded,
    UnboundedSuspected,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WSample {
    pub curve: usize,
    pub scale: f64,
    /// Point as `[re, im]` pairs.
    pub point: Vec<[f64; 2]>,
    pub distance: f64,
    pub delta: f64,
    pub ratio: f64,
}

/// Ratios `δ(T_yY, T_xX⁰) / d(x, Y)` along curves into 0. A probe, not a proof.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WRatioReport {
    pub samples: Vec<WSample>,
    pub max_ratio: f64,
    pub verdict: WVerdict,
}

pub const W_SCALES: [f64; 3] = [1e-2, 1e-3, 1e-4];

/// Probes condition w) along `curves` random curves into 0.
pub fn condition_w_probe(w: &WhitneyInstance, curves: usize, seed: u64) -> Result<WRatioReport> {
    let system = PolySystem::new(w.x.ring(), w.x.ideal().generators());
    let family = curves_into_origin(&system, w.x.codim(), curves, seed)?;
    condition_w_along(w, &family, &W_SCALES)
}

/// Probe along given curves at the given decreasing scales.
pub fn condition_w_along(w: &WhitneyInstance, curves: &[Curve], scales: &[f64]) -> Result<WRatioReport> {
    let x = &w.x;
    let system = PolySystem::new(x.ring(), x.ideal().generators());
    let per_curve = par::try_map_slice(curves, |c| -> Result<Vec<(f64, Vec<C64>, f64, f64)>> {
        let mut out = Vec::new();
        for &s in scales {
            let p = c.point(&system, s)?;
            if !system.is_smooth_point(&p, x.codim()) {
                continue;
            }
            let dist = distance_to_axes(&p, &w.y_axes);
            if dist == 0.0 {
                continue;
            }
            let delta = delta_to_axes(x.n(), &w.y_axes, &system.tangent_space(&p))?;
            out.push((s, p, dist, delta));
        }
        Ok(out)
    })?;
    let mut samples = Vec::new();
    let mut unbounded = false;
    for (ci, rows) in per_curve.into_iter().enumerate() {
        let ratios: Vec<f64> = rows.iter().map(|r| r.3 / r.2).collect();
        if ratios.len() >= 3 {
            let increasing = ratios.windows(2).all(|p| p[1] > p[0]);
            let (first, last) = (ratios[0], ratios[ratios.len() - 1]);
            if increasing && last >= 10.0 * first && first > 0.0 {
                unbounded = true;
            }
        }
        for ((s, p, dist, delta), ratio) in rows.into_iter().zip(ratios) {
            samples.push(WSample {
                curve: ci,
                scale: s,
                point: p.iter().map(|z| [z.re, z.im]).collect(),
                distance: dist,
                delta,
                ratio,
            });
        }
    }
    if samples.is_empty() {
        return Err(Error::InsufficientSamples { found: 0, wanted: 1 });
    }
    let max_ratio = samples.iter().map(|s| s.ratio).fold(0.0, f64::max);
    Ok(WRatioReport {
        samples,
        max_ratio,
        verdict: if unbounded {
            WVerdict::UnboundedSuspected
        } else {
            WVerdict::Bounded
        },
    })
}

/// Result of the randomized test of `δ(Y, W) ≤ t √(n-d) max |a_ij|`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeltaBoundReport {
    pub passed: bool,
    pub trials: usize,
    pub failures: usize,
    /// Largest observed `δ / bound`.
    pub worst_ratio: f64,
}

pub const DELTA_SLACK: f64 = 1e-6;

/// `δ(Y, W)` and the bound `t √(n-d) max_{j < t} |a_ij|` for `Y` the first
/// `t` coordinates and `W` the graph of `a` on the chart `W₀ = first d`.
pub fn delta_and_bound(p: &PlaneMatrix<C64>, t: usize) -> Result<(f64, f64)> {
    let chart = p.chart();
    let (n, d) = (chart.n(), chart.d());
    if t > d || chart.w0() != (0..d).collect::<Vec<_>>().as_slice() {
        return Err(Error::ChartMismatch("expected the chart W0 = first d coordinates".into()));
    }
    let basis = plane_from_matrix(p);
    let w = orthonormalize(&ComplexMatrix::from_columns(n, basis.columns())?)?;
    let y = Subspace::coordinate(n, &(0..t).collect::<Vec<_>>());
    let delta = delta_distance(&y, &w)?;
    let sup = (0..n - d)
        .flat_map(|i| (0..t).map(move |j| (i, j)))
        .map(|(i, j)| p.get(i, j).norm())
        .fold(0.0, f64::max);
    Ok((delta, t as f64 * ((n - d) as f64).sqrt() * sup))
}

/// Checks the inequality on `trials` random complex matrices whose entries
/// range over several orders of magnitude.
pub fn delta_bound_property(n: usize, d: usize, t: usize, trials: usize, seed: u64) -> Result<DeltaBoundReport> {
    if t > d || d == 0 || d >= n {
        return Err(Error::OutOfRange(format!("need t <= d <= n - 1, got n={n} d={d} t={t}")));
    }
    let chart = Chart::new(n, &(0..d).collect::<Vec<_>>())?;
    let results = par::map_range(trials, |k| -> Result<f64> {
        use rand::Rng;
        let mut rng = task_rng(seed, k);
        let scale = 10f64.powf(rng.gen_range(-3.0..3.0));
        let flat: Vec<C64> = (0..chart.num_a())
            .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * scale)
            .collect();
        let p = PlaneMatrix::from_flat(&chart, &flat)?;
        let (delta, bound) = delta_and_bound(&p, t)?;
        Ok(if bound == 0.0 {
            if delta == 0.0 { 0.0 } else { f64::INFINITY }
        } else {
            delta / bound
        })
    });
    let ratios = results.into_iter().collect::<Result<Vec<f64>>>()?;
    let failures = ratios.iter().filter(|&&r| r > 1.0 + DELTA_SLACK).count();
    Ok(DeltaBoundReport {
        passed: failures == 0,
        trials,
        failures,
        worst_ratio: ratios.iter().cloned().fold(0.0, f64::max),
    })
}
