//! Small dense complex linear algebra in double precision.
//!
//! Only what the geometric checks need: Gram–Schmidt orthonormalization,
//! orthogonal projectors, the spectral norm by power iteration, the subspace
//! distance `δ(A, B) = ‖(I - P_B) P_A‖₂`, and principal-angle counting.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Shared numeric tolerances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericSettings {
    /// Column norm below which a vector counts as linearly dependent.
    pub rank_tol: f64,
    /// Relative convergence tolerance of power iteration.
    pub power_tol: f64,
    pub max_iterations: usize,
    /// Seed of the power-iteration start vector.
    pub seed: u64,
}

impl Default for NumericSettings {
    fn default() -> Self {
        NumericSettings {
            rank_tol: 1e-9,
            power_tol: 1e-10,
            max_iterations: 10_000,
            seed: 0,
        }
    }
}

/// Dense row-major complex matrix with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::OutOfRange(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::OutOfRange("matrix entries must be finite".into()));
        }
        Ok(ComplexMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows
            .iter()
            .flat_map(|r| r.iter().map(|&x| C64::new(x, 0.0)))
            .collect();
        Self::new(rows.len(), cols, data)
    }

    pub fn from_columns(nrows: usize, columns: &[Vec<C64>]) -> Result<Self> {
        let mut m = Self::zeros(nrows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != nrows {
                return Err(Error::OutOfRange("column length mismatch".into()));
            }
            for (i, &v) in c.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        Self::new(nrows, columns.len(), m.data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn columns(&self) -> Vec<Vec<C64>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    pub fn matmul(&self, other: &ComplexMatrix) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::OutOfRange("inner dimensions differ".into()));
        }
        let mut m = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    m.data[i * other.cols + j] += a * other[(k, j)];
                }
            }
        }
        Ok(m)
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn sub(&self, other: &ComplexMatrix) -> Self {
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

pub fn dot(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

pub fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn axpy(y: &mut [C64], a: C64, x: &[C64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

/// A linear subspace of `C^n` with an orthonormal basis (possibly empty).
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    ambient_dim: usize,
    basis: ComplexMatrix,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: ComplexMatrix::zeros(ambient_dim, 0),
        }
    }

    pub fn whole(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: ComplexMatrix::identity(ambient_dim),
        }
    }

    /// Span of the listed standard basis vectors (0-based).
    pub fn coordinate(ambient_dim: usize, indices: &[usize]) -> Self {
        let cols: Vec<Vec<C64>> = indices
            .iter()
            .map(|&i| {
                let mut e = vec![C64::new(0.0, 0.0); ambient_dim];
                e[i] = C64::new(1.0, 0.0);
                e
            })
            .collect();
        Subspace {
            ambient_dim,
            basis: ComplexMatrix::from_columns(ambient_dim, &cols).expect("unit columns"),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.cols
    }

    pub fn basis(&self) -> &ComplexMatrix {
        &self.basis
    }

    pub fn projector(&self) -> ComplexMatrix {
        self.basis
            .matmul(&self.basis.adjoint())
            .expect("compatible shapes")
    }

    /// Orthogonal projection of `v` onto the subspace.
    pub fn project(&self, v: &[C64]) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); self.ambient_dim];
        for q in self.basis.columns() {
            axpy(&mut out, dot(&q, v), &q);
        }
        out
    }

    pub fn contains(&self, v: &[C64], tol: f64) -> bool {
        let p = self.project(v);
        let r: Vec<C64> = v.iter().zip(&p).map(|(a, b)| a - b).collect();
        norm(&r) <= tol * norm(v).max(1.0)
    }
}

/// Orthonormal basis of the column span by modified Gram–Schmidt with one
/// reorthogonalization pass. Fails on rank deficiency.
pub fn orthonormalize(m: &ComplexMatrix) -> Result<Subspace> {
    orthonormalize_with(m, &NumericSettings::default())
}

pub fn orthonormalize_with(m: &ComplexMatrix, settings: &NumericSettings) -> Result<Subspace> {
    let mut q: Vec<Vec<C64>> = Vec::with_capacity(m.cols);
    for mut v in m.columns() {
        for _ in 0..2 {
            for u in &q {
                let c = dot(u, &v);
                axpy(&mut v, -c, u);
            }
        }
        let nv = norm(&v);
        if nv < settings.rank_tol {
            return Err(Error::RankDeficient);
        }
        v.iter_mut().for_each(|x| *x /= nv);
        q.push(v);
    }
    Ok(Subspace {
        ambient_dim: m.rows,
        basis: ComplexMatrix::from_columns(m.rows, &q)?,
    })
}

/// Orthonormal basis of the span of `vectors`, dropping directions whose
/// residual falls below `rel_tol` times the largest input norm. Columns are
/// pivoted by largest residual, so the kept rank is numerically robust.
pub fn span(ambient_dim: usize, vectors: &[Vec<C64>], rel_tol: f64) -> Subspace {
    let scale = vectors.iter().map(|v| norm(v)).fold(0.0, f64::max);
    let mut work: Vec<Vec<C64>> = vectors.to_vec();
    let mut q: Vec<Vec<C64>> = Vec::new();
    if scale == 0.0 {
        return Subspace::zero(ambient_dim);
    }
    while !work.is_empty() && q.len() < ambient_dim {
        let (best, best_norm) = work
            .iter()
            .enumerate()
            .map(|(i, v)| (i, norm(v)))
            .fold((0, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best_norm <= rel_tol * scale {
            break;
        }
        let mut v = work.swap_remove(best);
        for u in &q {
            let c = dot(u, &v);
            axpy(&mut v, -c, u);
        }
        let nv = norm(&v);
        if nv <= rel_tol * scale {
            continue;
        }
        v.iter_mut().for_each(|x| *x /= nv);
        for w in work.iter_mut() {
            let c = dot(&v, w);
            axpy(w, -c, &v);
        }
        q.push(v);
    }
    Subspace {
        ambient_dim,
        basis: ComplexMatrix::from_columns(ambient_dim, &q).expect("consistent lengths"),
    }
}

pub fn orthogonal_complement(s: &Subspace) -> Subspace {
    let n = s.ambient_dim;
    let residuals: Vec<Vec<C64>> = (0..n)
        .map(|i| {
            let mut e = vec![C64::new(0.0, 0.0); n];
            e[i] = C64::new(1.0, 0.0);
            let p = s.project(&e);
            e.iter().zip(&p).map(|(a, b)| a - b).collect()
        })
        .collect();
    let comp = span(n, &residuals, 1e-8);
    // the complement has exactly n - dim(s) directions
    let k = n - s.dim();
    let cols: Vec<Vec<C64>> = comp.basis.columns().into_iter().take(k).collect();
    Subspace {
        ambient_dim: n,
        basis: ComplexMatrix::from_columns(n, &cols).expect("consistent lengths"),
    }
}

/// Null space `{v : M v = 0}` with relative rank tolerance `rel_tol`.
pub fn kernel(m: &ComplexMatrix, rel_tol: f64) -> Subspace {
    let rows: Vec<Vec<C64>> = (0..m.rows)
        .map(|i| m.row(i).iter().map(|z| z.conj()).collect())
        .collect();
    orthogonal_complement(&span(m.cols, &rows, rel_tol))
}

fn start_vector(n: usize, seed: u64) -> Vec<C64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<C64> = (0..n)
        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let nv = norm(&v);
    v.iter_mut().for_each(|x| *x /= nv);
    v
}

/// Squarings always performed before the stopping test may fire; `2^30`
/// power steps resolve relative eigenvalue gaps down to about `1e-9`.
const MIN_SQUARINGS: usize = 30;

fn scaled(m: &ComplexMatrix) -> Option<ComplexMatrix> {
    let s = m.max_abs();
    if s == 0.0 || !s.is_finite() {
        return None;
    }
    let mut out = m.clone();
    for i in 0..m.rows {
        for j in 0..m.cols {
            out[(i, j)] /= s;
        }
    }
    Some(out)
}

/// Largest eigenpair of a Hermitian positive semidefinite matrix by power
/// iteration with repeated squaring: step `s` applies `H^(2^s)` to the seeded
/// start vector and stops once the Rayleigh quotient settles.
fn top_eigenpair(h: &ComplexMatrix, settings: &NumericSettings) -> Result<(f64, Vec<C64>)> {
    let n = h.rows;
    let v0 = start_vector(n, settings.seed);
    let Some(mut p) = scaled(h) else {
        return Ok((0.0, v0));
    };
    let rayleigh = |v: &[C64]| dot(v, &h.apply(v)).re.max(0.0);
    let mut v = v0.clone();
    let mut lambda = rayleigh(&v);
    for step in 0..settings.max_iterations {
        let mut w = p.apply(&v0);
        let mut nw = norm(&w);
        // v0 may lie (numerically) in the kernel, e.g. after deflation
        let widest = (0..n).map(|j| p.column(j)).max_by(|x, y| norm(x).total_cmp(&norm(y))).expect("nonempty");
        if nw < 1e-8 * norm(&widest) {
            nw = norm(&widest);
            w = widest;
        }
        if nw == 0.0 || !nw.is_finite() {
            return Ok((lambda, v));
        }
        v = w.into_iter().map(|x| x / nw).collect();
        let next = rayleigh(&v);
        if step >= MIN_SQUARINGS && (next - lambda).abs() <= settings.power_tol * next.abs().max(f64::MIN_POSITIVE) {
            return Ok((next, v));
        }
        lambda = next;
        match scaled(&p.matmul(&p)?) {
            Some(q) => p = q,
            None => return Ok((lambda, v)),
        }
    }
    Err(Error::NoConvergence(settings.max_iterations))
}

/// Largest singular value by power iteration on `MᴴM`.
pub fn spectral_norm(m: &ComplexMatrix) -> Result<f64> {
    spectral_norm_with(m, &NumericSettings::default())
}

pub fn spectral_norm_with(m: &ComplexMatrix, settings: &NumericSettings) -> Result<f64> {
    if m.rows == 0 || m.cols == 0 {
        return Err(Error::OutOfRange("spectral norm of an empty matrix".into()));
    }
    if m.max_abs() == 0.0 {
        return Ok(0.0);
    }
    let h = m.adjoint().matmul(m)?;
    let (lambda, _) = top_eigenpair(&h, settings)?;
    Ok(lambda.sqrt())
}

/// `δ(A, B) = sup |⟨u, v⟩| / (‖u‖‖v‖)` over `u ∈ B^⊥`, `v ∈ A`, computed as
/// `‖(I - P_B) P_A‖₂`. An empty `A` gives 0.
pub fn delta_distance(a: &Subspace, b: &Subspace) -> Result<f64> {
    if a.ambient_dim != b.ambient_dim {
        return Err(Error::OutOfRange("subspaces live in different ambient spaces".into()));
    }
    if a.dim() == 0 || b.dim() == a.ambient_dim {
        return Ok(0.0);
    }
    let n = a.ambient_dim;
    let m = ComplexMatrix::identity(n).sub(&b.projector()).matmul(&a.projector())?;
    Ok(spectral_norm(&m)?.min(1.0))
}

/// Number of principal angles between `A` and `B` that vanish within `tol`,
/// i.e. singular values of `AᴴB` at least `1 - tol`, counted by power
/// iteration with deflation.
pub fn intersection_dim(a: &Subspace, b: &Subspace, tol: f64) -> Result<usize> {
    if a.ambient_dim != b.ambient_dim {
        return Err(Error::OutOfRange("subspaces live in different ambient spaces".into()));
    }
    if a.dim() == 0 || b.dim() == 0 {
        return Ok(0);
    }
    let settings = NumericSettings::default();
    let c = a.basis.adjoint().matmul(&b.basis)?;
    let mut h = c.adjoint().matmul(&c)?;
    let threshold = (1.0 - tol) * (1.0 - tol);
    let mut count = 0;
    for _ in 0..a.dim().min(b.dim()) {
        // eigenvalues of what is left are at most rows * max_abs
        if h.max_abs() * (h.rows as f64) < threshold {
            break;
        }
        let (lambda, v) = top_eigenpair(&h, &settings)?;
        if lambda < threshold {
            break;
        }
        count += 1;
        for i in 0..h.rows {
            for j in 0..h.cols {
                h[(i, j)] -= v[i] * v[j].conj() * lambda;
            }
        }
    }
    Ok(count)
}

/// Solves `A x = b` by Gaussian elimination with partial pivoting.
pub fn solve(a: &ComplexMatrix, b: &[C64]) -> Result<Vec<C64>> {
    let n = a.rows;
    if a.cols != n || b.len() != n {
        return Err(Error::OutOfRange("solve needs a square system".into()));
    }
    let scale = a.max_abs().max(f64::MIN_POSITIVE);
    let mut m = a.clone();
    let mut x = b.to_vec();
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| m[(i, k)].norm().total_cmp(&m[(j, k)].norm()))
            .expect("nonempty range");
        if m[(p, k)].norm() <= 1e-14 * scale {
            return Err(Error::RankDeficient);
        }
        if p != k {
            for j in 0..n {
                let t = m[(k, j)];
                m[(k, j)] = m[(p, j)];
                m[(p, j)] = t;
            }
            x.swap(k, p);
        }
        for i in k + 1..n {
            let f = m[(i, k)] / m[(k, k)];
            if f == C64::new(0.0, 0.0) {
                continue;
            }
            for j in k..n {
                let t = m[(k, j)];
                m[(i, j)] -= f * t;
            }
            let t = x[k];
            x[i] -= f * t;
        }
    }
    for k in (0..n).rev() {
        let s: C64 = (k + 1..n).map(|j| m[(k, j)] * x[j]).sum();
        x[k] = (x[k] - s) / m[(k, k)];
    }
    Ok(x)
}

/// Damped minimum-norm least-squares step `Jᴴ (J Jᴴ + μ I)⁻¹ r` with `μ`
/// relative to the size of `J Jᴴ`.
pub fn min_norm_step(j: &ComplexMatrix, r: &[C64], damping: f64) -> Result<Vec<C64>> {
    let jh = j.adjoint();
    let mut g = j.matmul(&jh)?;
    let scale = g.max_abs();
    let mu = damping * if scale > 0.0 { scale } else { 1.0 };
    for i in 0..g.rows {
        g[(i, i)] += C64::new(mu, 0.0);
    }
    let y = solve(&g, r)?;
    Ok(jh.apply(&y))
}
