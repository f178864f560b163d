//! Numeric sampling of points on affine varieties.
//!
//! Points are found by damped Gauss–Newton projection from random complex
//! starts; a point is smooth when the numeric rank of the Jacobian equals the
//! expected codimension, and its tangent space is the Jacobian kernel. Curves
//! into the origin are either solved in closed form for a variable that
//! occurs linearly, or tracked numerically by projecting `s · p₀`.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactpoly::{rational_to_f64, Polynomial, Ring};
use crate::numlin::{self, norm, ComplexMatrix, Subspace, C64};
use crate::par;

/// Relative tolerance for numeric Jacobian ranks.
pub const RANK_TOL: f64 = 1e-7;

/// Random generator for task `index` of a run seeded with `seed`; independent
/// of scheduling.
pub fn task_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

pub fn random_complex_point(rng: &mut impl Rng, n: usize, radius: f64) -> Vec<C64> {
    (0..n)
        .map(|_| C64::new(rng.gen_range(-radius..radius), rng.gen_range(-radius..radius)))
        .collect()
}

/// Stopping rule of the projection.
#[derive(Debug, Clone, Copy)]
pub struct ProjectionSettings {
    /// Residual tolerance relative to the size of the terms at the point.
    pub tol: f64,
    pub max_iterations: usize,
}

impl Default for ProjectionSettings {
    fn default() -> Self {
        ProjectionSettings {
            tol: 1e-10,
            max_iterations: 200,
        }
    }
}

/// A polynomial system `F = 0` with its Jacobian.
#[derive(Debug, Clone)]
pub struct PolySystem {
    ring: Ring,
    polys: Vec<Polynomial>,
    jac: Vec<Vec<Polynomial>>,
}

impl PolySystem {
    pub fn new(ring: &Ring, polys: &[Polynomial]) -> Self {
        let polys: Vec<Polynomial> = polys.iter().filter(|p| !p.is_zero()).cloned().collect();
        let jac = polys
            .iter()
            .map(|p| (0..ring.len()).map(|v| p.derivative(v)).collect())
            .collect();
        PolySystem {
            ring: ring.clone(),
            polys,
            jac,
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn nvars(&self) -> usize {
        self.ring.len()
    }

    pub fn polys(&self) -> &[Polynomial] {
        &self.polys
    }

    pub fn residual(&self, x: &[C64]) -> Vec<C64> {
        self.polys.iter().map(|p| p.eval_complex(x)).collect()
    }

    /// `Σ |c| |x^m|` over all terms of all equations.
    fn term_scale(&self, x: &[C64]) -> f64 {
        let ax: Vec<f64> = x.iter().map(|z| z.norm()).collect();
        self.polys
            .iter()
            .flat_map(|p| p.terms())
            .map(|(m, c)| {
                m.exponents()
                    .iter()
                    .zip(&ax)
                    .fold(rational_to_f64(c).abs(), |acc, (&e, &a)| acc * a.powi(e as i32))
            })
            .sum()
    }

    /// Whether `x` satisfies every equation to relative accuracy `tol`.
    pub fn on_variety(&self, x: &[C64], tol: f64) -> bool {
        norm(&self.residual(x)) <= tol * self.term_scale(x).max(f64::MIN_POSITIVE)
    }

    pub fn jacobian_at(&self, x: &[C64]) -> ComplexMatrix {
        let n = self.nvars();
        let mut m = ComplexMatrix::zeros(self.polys.len(), n);
        for (i, row) in self.jac.iter().enumerate() {
            for (j, p) in row.iter().enumerate() {
                if !p.is_zero() {
                    m[(i, j)] = p.eval_complex(x);
                }
            }
        }
        m
    }

    pub fn numeric_rank(&self, x: &[C64]) -> usize {
        self.nvars() - self.tangent_space(x).dim()
    }

    /// Kernel of the Jacobian at `x`.
    pub fn tangent_space(&self, x: &[C64]) -> Subspace {
        numlin::kernel(&self.jacobian_at(x), RANK_TOL)
    }

    pub fn is_smooth_point(&self, x: &[C64], codim: usize) -> bool {
        self.numeric_rank(x) == codim
    }

    /// Damped Gauss–Newton projection of `start` onto `V(F)`.
    pub fn project(&self, start: &[C64], settings: &ProjectionSettings) -> Result<Vec<C64>> {
        let mut x = start.to_vec();
        if self.polys.is_empty() {
            return Ok(x);
        }
        let mut r = self.residual(&x);
        let mut rn = norm(&r);
        let mut damping = 1e-8;
        for _ in 0..settings.max_iterations {
            if rn <= settings.tol * self.term_scale(&x).max(f64::MIN_POSITIVE) {
                return Ok(x);
            }
            let j = self.jacobian_at(&x);
            let step = match numlin::min_norm_step(&j, &r, damping) {
                Ok(s) => s,
                Err(_) => {
                    damping *= 10.0;
                    continue;
                }
            };
            let trial: Vec<C64> = x.iter().zip(&step).map(|(a, b)| a - b).collect();
            let tr = self.residual(&trial);
            let tn = norm(&tr);
            if tn.is_finite() && tn < rn {
                x = trial;
                r = tr;
                rn = tn;
                damping = (damping / 10.0).max(1e-14);
            } else {
                damping *= 10.0;
                if damping > 1e8 {
                    break;
                }
            }
        }
        Err(Error::NoConvergence(settings.max_iterations))
    }
}

/// Up to `count` smooth points of `V(F)` (expected codimension `codim`),
/// projected from random starts in the box of half-width `radius`. Results
/// are in attempt order, independent of scheduling.
pub fn sample_smooth_points(
    system: &PolySystem,
    codim: usize,
    count: usize,
    seed: u64,
    radius: f64,
    settings: &ProjectionSettings,
) -> Result<Vec<Vec<C64>>> {
    let max_attempts = 40 * count.max(1);
    let batch = (2 * count).max(8);
    let mut found = Vec::new();
    let mut next = 0;
    while found.len() < count && next < max_attempts {
        let end = (next + batch).min(max_attempts);
        let hits = par::map_range(end - next, |k| {
            let mut rng = task_rng(seed, next + k);
            let start = random_complex_point(&mut rng, system.nvars(), radius);
            system
                .project(&start, settings)
                .ok()
                .filter(|x| x.iter().all(|z| z.re.is_finite() && z.im.is_finite()))
                .filter(|x| system.is_smooth_point(x, codim))
        });
        found.extend(hits.into_iter().flatten());
        next = end;
    }
    if found.len() < count {
        return Err(Error::InsufficientSamples {
            found: found.len(),
            wanted: count,
        });
    }
    found.truncate(count);
    Ok(found)
}

/// A curve `s ↦ x(s)` on `X` with `x(s) → 0` as `s → 0`.
#[derive(Debug, Clone)]
pub enum Curve {
    /// `x_j = c_j s^{e_j}` for `j ≠ var`, and `x_var = numer / denom`.
    Solved {
        var: usize,
        numer: Polynomial,
        denom: Polynomial,
        coeffs: Vec<C64>,
        exponents: Vec<u32>,
    },
    /// Projection of `s · start` onto `X`.
    Tracked { start: Vec<C64> },
}

impl Curve {
    pub fn point(&self, system: &PolySystem, s: f64) -> Result<Vec<C64>> {
        match self {
            Curve::Solved {
                var,
                numer,
                denom,
                coeffs,
                exponents,
            } => {
                let mut x: Vec<C64> = coeffs
                    .iter()
                    .zip(exponents)
                    .map(|(c, &e)| c * s.powi(e as i32))
                    .collect();
                x[*var] = C64::zero();
                let den = denom.eval_complex(&x);
                if den.norm() == 0.0 {
                    return Err(Error::NotOnVariety);
                }
                x[*var] = numer.eval_complex(&x) / den;
                Ok(x)
            }
            Curve::Tracked { start } => {
                let scaled: Vec<C64> = start.iter().map(|z| z * s).collect();
                let settings = ProjectionSettings {
                    tol: 1e-12,
                    max_iterations: 200,
                };
                system.project(&scaled, &settings)
            }
        }
    }

    pub fn is_solved(&self) -> bool {
        matches!(self, Curve::Solved { .. })
    }
}

/// A variable in which `f` has degree one, split as `f = A·x + B`; variables
/// with constant `A` are preferred.
fn linear_variable(f: &Polynomial) -> Option<(usize, Polynomial, Polynomial)> {
    let ring = f.ring();
    let mut best: Option<(usize, Polynomial, Polynomial)> = None;
    for v in 0..ring.len() {
        let maxdeg = f.terms().iter().map(|(m, _)| m.exponents()[v]).max().unwrap_or(0);
        if maxdeg != 1 {
            continue;
        }
        let a = f.derivative(v);
        let rest = f.terms().iter().filter(|(m, _)| m.exponents()[v] == 0).cloned().collect();
        let b = Polynomial::from_terms(ring, rest);
        if a.is_constant() {
            return Some((v, a, b));
        }
        if best.is_none() {
            best = Some((v, a, b));
        }
    }
    best
}

/// `count` curves on `X` into the origin. Hypersurfaces with a variable of
/// degree one are parametrized in closed form; everything else is tracked.
pub fn curves_into_origin(system: &PolySystem, codim: usize, count: usize, seed: u64) -> Result<Vec<Curve>> {
    let n = system.nvars();
    let solved = if system.polys().len() == 1 {
        linear_variable(&system.polys()[0])
    } else {
        None
    };
    if let Some((var, a, b)) = solved {
        let numer = -b;
        let curves = par::map_range(count, |k| {
            let mut rng = task_rng(seed, k);
            for _ in 0..50 {
                let coeffs: Vec<C64> = (0..n)
                    .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                    .collect();
                let exponents: Vec<u32> = (0..n).map(|_| rng.gen_range(1..=3)).collect();
                let curve = Curve::Solved {
                    var,
                    numer: numer.clone(),
                    denom: a.clone(),
                    coeffs,
                    exponents,
                };
                if solved_curve_is_usable(&curve, system, codim) {
                    return Some(curve);
                }
            }
            None
        });
        if curves.iter().all(Option::is_some) {
            return Ok(curves.into_iter().flatten().collect());
        }
    }
    let starts = sample_smooth_points(system, codim, count, seed, 1.0, &ProjectionSettings::default())?;
    Ok(starts
        .into_iter()
        .map(|p| {
            let s = norm(&p);
            Curve::Tracked {
                start: p.into_iter().map(|z| z / s).collect(),
            }
        })
        .collect())
}

fn solved_curve_is_usable(curve: &Curve, system: &PolySystem, codim: usize) -> bool {
    let pts: Vec<Vec<C64>> = match [1e-2, 1e-4, 1e-6]
        .iter()
        .map(|&s| curve.point(system, s))
        .collect::<Result<_>>()
    {
        Ok(p) => p,
        Err(_) => return false,
    };
    let norms: Vec<f64> = pts.iter().map(|p| norm(p)).collect();
    norms.iter().all(|v| v.is_finite())
        && norms[2] < norms[1] && norms[1] < norms[0] && norms[2] < 1e-3
        && pts.iter().all(|p| system.is_smooth_point(p, codim))
}
