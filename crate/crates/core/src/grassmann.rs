//! Coordinate charts on `G(d, n)` and `C^n × G(d, n)`.
//!
//! A chart is fixed by a coordinate `d`-plane `W₀` and its complementary
//! coordinate `(n-d)`-plane `W₁`. A plane `W` transversal to `W₁` is the graph
//! of a linear map `L: W₀ → W₁` with matrix `a` of shape `(n-d) × d`; entry
//! `a[i][j]` multiplies the `j`-th `W₀` coordinate and lands in the `i`-th `W₁`
//! coordinate. Indices are 0-based in the API and 1-based in names and JSON.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactpoly::{combinations, rational_to_f64, Polynomial, Rational, Ring, VariableSet};
use crate::numlin::C64;

/// Which pipeline a scalar belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarKind {
    Exact,
    Float,
}

/// Field elements usable as plane coordinates. Exact rationals compare
/// exactly; complex floats compare within `FLOAT_TOL` relative to the data.
/// Mixing kinds is a type error.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const KIND: ScalarKind;
    fn zero() -> Self;
    fn one() -> Self;
    fn from_rational(q: &Rational) -> Self;
    fn magnitude(&self) -> f64;
    /// Whether `self` vanishes relative to data of size `scale`.
    fn is_negligible(&self, scale: f64) -> bool;
    fn eval(p: &Polynomial, point: &[Self]) -> Self;
    fn to_complex(&self) -> C64;
}

pub const FLOAT_TOL: f64 = 1e-9;

impl Scalar for Rational {
    const KIND: ScalarKind = ScalarKind::Exact;
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
    fn magnitude(&self) -> f64 {
        rational_to_f64(self).abs()
    }
    fn is_negligible(&self, _scale: f64) -> bool {
        Zero::is_zero(self)
    }
    fn eval(p: &Polynomial, point: &[Self]) -> Self {
        p.eval_rational(point)
    }
    fn to_complex(&self) -> C64 {
        C64::new(rational_to_f64(self), 0.0)
    }
}

impl Scalar for C64 {
    const KIND: ScalarKind = ScalarKind::Float;
    fn zero() -> Self {
        C64::new(0.0, 0.0)
    }
    fn one() -> Self {
        C64::new(1.0, 0.0)
    }
    fn from_rational(q: &Rational) -> Self {
        C64::new(rational_to_f64(q), 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn is_negligible(&self, scale: f64) -> bool {
        self.norm() <= FLOAT_TOL * scale.max(1.0)
    }
    fn eval(p: &Polynomial, point: &[Self]) -> Self {
        p.eval_complex(point)
    }
    fn to_complex(&self) -> C64 {
        *self
    }
}

fn max_magnitude<S: Scalar>(rows: &[Vec<S>]) -> f64 {
    rows.iter()
        .flat_map(|r| r.iter().map(Scalar::magnitude))
        .fold(0.0, f64::max)
}

/// Rank by Gaussian elimination with largest-magnitude pivoting.
pub fn rank<S: Scalar>(rows: &[Vec<S>]) -> usize {
    let mut m: Vec<Vec<S>> = rows.to_vec();
    let ncols = m.first().map_or(0, |r| r.len());
    let scale = max_magnitude(&m);
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let p = (r..m.len())
            .max_by(|&i, &j| m[i][c].magnitude().total_cmp(&m[j][c].magnitude()))
            .expect("nonempty");
        if m[p][c].is_negligible(scale) {
            continue;
        }
        m.swap(r, p);
        let pivot = m[r][c].clone();
        for i in r + 1..m.len() {
            let f = m[i][c].clone() / pivot.clone();
            for j in c..ncols {
                let t = m[r][j].clone();
                m[i][j] = m[i][j].clone() - f.clone() * t;
            }
        }
        r += 1;
    }
    r
}

/// Inverse of a square matrix, or `None` when singular.
pub fn invert<S: Scalar>(m: &[Vec<S>]) -> Option<Vec<Vec<S>>> {
    let n = m.len();
    let scale = max_magnitude(m);
    let mut a: Vec<Vec<S>> = m.to_vec();
    let mut inv: Vec<Vec<S>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { S::one() } else { S::zero() }).collect())
        .collect();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i][c].magnitude().total_cmp(&a[j][c].magnitude()))?;
        if a[p][c].is_negligible(scale) {
            return None;
        }
        a.swap(c, p);
        inv.swap(c, p);
        let pivot = a[c][c].clone();
        for j in 0..n {
            a[c][j] = a[c][j].clone() / pivot.clone();
            inv[c][j] = inv[c][j].clone() / pivot.clone();
        }
        for i in 0..n {
            if i == c || a[i][c] == S::zero() {
                continue;
            }
            let f = a[i][c].clone();
            for j in 0..n {
                let t = a[c][j].clone();
                a[i][j] = a[i][j].clone() - f.clone() * t;
                let t = inv[c][j].clone();
                inv[i][j] = inv[i][j].clone() - f.clone() * t;
            }
        }
    }
    Some(inv)
}

/// A coordinate chart `(W₀, W₁)` of `G(d, n)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Chart {
    n: usize,
    w0: Vec<usize>,
    w1: Vec<usize>,
}

impl Chart {
    /// Chart whose `W₀` is spanned by the listed coordinates (0-based).
    pub fn new(n: usize, w0: &[usize]) -> Result<Chart> {
        let d = w0.len();
        if d == 0 || d >= n {
            return Err(Error::OutOfRange(format!("plane dimension {d} must lie in 1..={}", n.saturating_sub(1))));
        }
        if w0.windows(2).any(|w| w[0] >= w[1]) || w0.iter().any(|&i| i >= n) {
            return Err(Error::OutOfRange(
                "chart indices must be strictly increasing and below n".into(),
            ));
        }
        let w1 = (0..n).filter(|i| !w0.contains(i)).collect();
        Ok(Chart { n, w0: w0.to_vec(), w1 })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.w0.len()
    }

    pub fn codim(&self) -> usize {
        self.n - self.d()
    }

    pub fn w0(&self) -> &[usize] {
        &self.w0
    }

    pub fn w1(&self) -> &[usize] {
        &self.w1
    }

    /// Number of `a` coordinates, `d(n-d)`.
    pub fn num_a(&self) -> usize {
        self.d() * self.codim()
    }

    /// Position of `a[i][j]` among the `a` coordinates (row-major).
    pub fn a_offset(&self, i: usize, j: usize) -> usize {
        i * self.d() + j
    }

    /// Name of `a[i][j]`, 1-based: `a11`, `a12`, ...
    pub fn a_name(&self, i: usize, j: usize) -> String {
        if self.codim() > 9 || self.d() > 9 {
            format!("a{}_{}", i + 1, j + 1)
        } else {
            format!("a{}{}", i + 1, j + 1)
        }
    }

    pub fn a_names(&self) -> Vec<String> {
        (0..self.codim())
            .flat_map(|i| (0..self.d()).map(move |j| (i, j)))
            .map(|(i, j)| self.a_name(i, j))
            .collect()
    }

    /// Ring of `C^n × chart`: the `z` names followed by the `a` block.
    pub fn coordinate_ring<S: AsRef<str>>(&self, z_names: &[S]) -> Result<Ring> {
        if z_names.len() != self.n {
            return Err(Error::InvalidVariables(format!(
                "expected {} coordinate names, got {}",
                self.n,
                z_names.len()
            )));
        }
        let mut names: Vec<String> = z_names.iter().map(|s| s.as_ref().to_string()).collect();
        names.extend(self.a_names());
        VariableSet::with_blocks(&names, &[self.n, self.num_a()])
    }

    /// Ring with the default names `z1, ..., zn`.
    pub fn default_ring(&self) -> Ring {
        self.coordinate_ring(&default_z_names(self.n))
            .expect("default names are distinct")
    }

    /// Ring of the `a` coordinates alone.
    pub fn a_ring(&self) -> Ring {
        VariableSet::new(&self.a_names()).expect("distinct names")
    }

    /// `1 + w0` joined by commas, e.g. `"{1,2}|{3}"`.
    pub fn label(&self) -> String {
        let f = |v: &[usize]| {
            v.iter()
                .map(|i| (i + 1).to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        format!("{{{}}}|{{{}}}", f(&self.w0), f(&self.w1))
    }

    fn check_ring(&self, ring: &Ring) -> Result<()> {
        if ring.len() < self.n + self.num_a() {
            return Err(Error::ChartMismatch(format!(
                "ring has {} variables, chart needs {}",
                ring.len(),
                self.n + self.num_a()
            )));
        }
        Ok(())
    }

    /// Variable `a[i][j]` in a chart ring (z block first).
    pub fn a_var(&self, ring: &Ring, i: usize, j: usize) -> Polynomial {
        Polynomial::var(ring, self.n + self.a_offset(i, j))
    }

    /// Columns of the plane as polynomials in the chart ring: column `j` is
    /// `e_{w0[j]} + Σ_i a[i][j] e_{w1[i]}`.
    pub fn symbolic_basis(&self, ring: &Ring) -> Result<Vec<Vec<Polynomial>>> {
        self.check_ring(ring)?;
        Ok((0..self.d())
            .map(|j| {
                let mut col = vec![Polynomial::zero(ring); self.n];
                col[self.w0[j]] = Polynomial::one(ring);
                for (i, &row) in self.w1.iter().enumerate() {
                    col[row] = self.a_var(ring, i, j);
                }
                col
            })
            .collect())
    }

    /// The `n-d` linear equations of the plane as rows: row `i` has `1` at
    /// `w1[i]` and `-a[i][j]` at `w0[j]`.
    pub fn equation_rows(&self, ring: &Ring) -> Result<Vec<Vec<Polynomial>>> {
        self.check_ring(ring)?;
        Ok((0..self.codim())
            .map(|i| {
                let mut row = vec![Polynomial::zero(ring); self.n];
                row[self.w1[i]] = Polynomial::one(ring);
                for (j, &col) in self.w0.iter().enumerate() {
                    row[col] = -self.a_var(ring, i, j);
                }
                row
            })
            .collect())
    }
}

pub fn default_z_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("z{i}")).collect()
}

/// All `C(n, d)` coordinate charts in lexicographic order of `W₀`.
pub fn chart_cover(n: usize, d: usize) -> Result<Vec<Chart>> {
    if d == 0 || d >= n {
        return Err(Error::OutOfRange(format!("plane dimension {d} must lie in 1..={}", n.saturating_sub(1))));
    }
    combinations(n, d).iter().map(|w0| Chart::new(n, w0)).collect()
}

/// A plane in chart coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneMatrix<S: Scalar> {
    chart: Chart,
    a: Vec<Vec<S>>,
}

impl<S: Scalar> PlaneMatrix<S> {
    pub fn new(chart: &Chart, a: Vec<Vec<S>>) -> Result<Self> {
        if a.len() != chart.codim() || a.iter().any(|r| r.len() != chart.d()) {
            return Err(Error::ChartMismatch(format!(
                "expected a {}x{} matrix",
                chart.codim(),
                chart.d()
            )));
        }
        Ok(PlaneMatrix {
            chart: chart.clone(),
            a,
        })
    }

    pub fn zero(chart: &Chart) -> Self {
        PlaneMatrix {
            chart: chart.clone(),
            a: vec![vec![S::zero(); chart.d()]; chart.codim()],
        }
    }

    /// From the row-major list of `a` coordinates.
    pub fn from_flat(chart: &Chart, flat: &[S]) -> Result<Self> {
        if flat.len() != chart.num_a() {
            return Err(Error::ChartMismatch(format!("expected {} coordinates", chart.num_a())));
        }
        let a = flat.chunks(chart.d()).map(|r| r.to_vec()).collect();
        Self::new(chart, a)
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn entries(&self) -> &[Vec<S>] {
        &self.a
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.a[i][j]
    }

    pub fn flat(&self) -> Vec<S> {
        self.a.iter().flatten().cloned().collect()
    }
}

/// A plane given by `d` spanning columns in `C^n` (or `Q^n`).
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneBasis<S: Scalar> {
    ambient_dim: usize,
    columns: Vec<Vec<S>>,
}

impl<S: Scalar> PlaneBasis<S> {
    pub fn new(ambient_dim: usize, columns: Vec<Vec<S>>) -> Result<Self> {
        if columns.iter().any(|c| c.len() != ambient_dim) {
            return Err(Error::OutOfRange("column length differs from ambient dimension".into()));
        }
        if rank(&columns) != columns.len() {
            return Err(Error::RankDeficient);
        }
        Ok(PlaneBasis {
            ambient_dim,
            columns,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[Vec<S>] {
        &self.columns
    }
}

/// The graph of `a`: column `j` is `e_{w0[j]} + Σ_i a[i][j] e_{w1[i]}`.
pub fn plane_from_matrix<S: Scalar>(p: &PlaneMatrix<S>) -> PlaneBasis<S> {
    let c = &p.chart;
    let columns = (0..c.d())
        .map(|j| {
            let mut v = vec![S::zero(); c.n];
            v[c.w0[j]] = S::one();
            for (i, &row) in c.w1.iter().enumerate() {
                v[row] = p.a[i][j].clone();
            }
            v
        })
        .collect();
    PlaneBasis {
        ambient_dim: c.n,
        columns,
    }
}

/// Chart coordinates of `w`, i.e. `a = P₁ P₀⁻¹` where `P₀`, `P₁` are the
/// `W₀` and `W₁` rows of the basis.
pub fn matrix_from_plane<S: Scalar>(chart: &Chart, w: &PlaneBasis<S>) -> Result<PlaneMatrix<S>> {
    if w.ambient_dim != chart.n || w.dim() != chart.d() {
        return Err(Error::ChartMismatch(format!(
            "plane of dimension {} in C^{} does not fit chart {}",
            w.dim(),
            w.ambient_dim,
            chart.label()
        )));
    }
    let d = chart.d();
    let p0: Vec<Vec<S>> = chart
        .w0
        .iter()
        .map(|&r| (0..d).map(|j| w.columns[j][r].clone()).collect())
        .collect();
    let inv = invert(&p0).ok_or(Error::NotTransversal)?;
    let a = chart
        .w1
        .iter()
        .map(|&r| {
            (0..d)
                .map(|j| {
                    (0..d).fold(S::zero(), |acc, k| {
                        acc + w.columns[k][r].clone() * inv[k][j].clone()
                    })
                })
                .collect()
        })
        .collect();
    PlaneMatrix::new(chart, a)
}

/// Whether every column of `v` lies in the plane with coordinates `p`.
pub fn contains_subspace<S: Scalar>(p: &PlaneMatrix<S>, v: &PlaneBasis<S>) -> Result<bool> {
    let c = &p.chart;
    if v.ambient_dim != c.n {
        return Err(Error::ChartMismatch("ambient dimensions differ".into()));
    }
    let scale = max_magnitude(&p.a).max(1.0) * max_magnitude(&v.columns).max(1.0);
    Ok(v.columns.iter().all(|col| {
        (0..c.codim()).all(|i| {
            let image = (0..c.d()).fold(S::zero(), |acc, j| {
                acc + p.a[i][j].clone() * col[c.w0[j]].clone()
            });
            (col[c.w1[i]].clone() - image).is_negligible(scale * c.d() as f64)
        })
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::rational;
    use proptest::prelude::*;

    fn q(n: i64) -> Rational {
        rational(n, 1)
    }

    #[test]
    fn cover_examples() {
        let c = chart_cover(2, 1).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!((c[0].w0(), c[0].w1()), (&[0][..], &[1][..]));
        assert_eq!((c[1].w0(), c[1].w1()), (&[1][..], &[0][..]));
        assert_eq!(chart_cover(4, 2).unwrap().len(), 6);
        let first = &chart_cover(3, 2).unwrap()[0];
        assert_eq!((first.w0(), first.w1()), (&[0, 1][..], &[2][..]));
        assert!(chart_cover(3, 3).is_err());
        assert!(chart_cover(3, 0).is_err());
    }

    #[test]
    fn cover_lists_each_subset_once() {
        for n in 2..=6 {
            for d in 1..n {
                let cover = chart_cover(n, d).unwrap();
                assert_eq!(cover.len(), combinations(n, d).len());
                let mut seen: Vec<Vec<usize>> = cover.iter().map(|c| c.w0().to_vec()).collect();
                seen.dedup();
                assert_eq!(seen.len(), cover.len());
            }
        }
    }

    #[test]
    fn plane_from_matrix_examples() {
        let c = Chart::new(2, &[0]).unwrap();
        let w = plane_from_matrix(&PlaneMatrix::new(&c, vec![vec![q(5)]]).unwrap());
        assert_eq!(w.columns(), &[vec![q(1), q(5)]]);
        let c = Chart::new(3, &[0, 1]).unwrap();
        let p = PlaneMatrix::new(&c, vec![vec![q(2), q(-3)]]).unwrap();
        let w = plane_from_matrix(&p);
        assert_eq!(w.columns(), &[vec![q(1), q(0), q(2)], vec![q(0), q(1), q(-3)]]);
        let zero = plane_from_matrix(&PlaneMatrix::<Rational>::zero(&c));
        assert_eq!(zero.columns(), &[vec![q(1), q(0), q(0)], vec![q(0), q(1), q(0)]]);
    }

    #[test]
    fn matrix_from_plane_examples() {
        let c = Chart::new(2, &[0]).unwrap();
        let w1 = PlaneBasis::new(2, vec![vec![q(0), q(1)]]).unwrap();
        assert_eq!(matrix_from_plane(&c, &w1), Err(Error::NotTransversal));
        let c = Chart::new(3, &[0, 1]).unwrap();
        let w = PlaneBasis::new(3, vec![vec![q(1), q(1), q(5)], vec![q(1), q(-1), q(1)]]).unwrap();
        let p = matrix_from_plane(&c, &w).unwrap();
        // (1,0,·) = ((1,1,5) + (1,-1,1)) / 2 and (0,1,·) = ((1,1,5) - (1,-1,1)) / 2
        assert_eq!(p.entries(), &[vec![q(3), q(2)]]);
    }

    #[test]
    fn contains_examples() {
        let c = Chart::new(3, &[0, 2]).unwrap();
        let zero = PlaneMatrix::<Rational>::zero(&c);
        let w0 = PlaneBasis::new(3, vec![vec![q(1), q(0), q(0)], vec![q(0), q(0), q(1)]]).unwrap();
        assert!(contains_subspace(&zero, &w0).unwrap());
        let e = PlaneBasis::new(3, vec![vec![q(0), q(1), q(0)]]).unwrap();
        assert!(!contains_subspace(&zero, &e).unwrap());
        let c = Chart::new(2, &[0]).unwrap();
        let p = PlaneMatrix::new(&c, vec![vec![rational(3, 7)]]).unwrap();
        let line = PlaneBasis::new(2, vec![vec![q(7), q(3)]]).unwrap();
        assert!(contains_subspace(&p, &line).unwrap());
    }

    #[test]
    fn float_containment_uses_tolerance() {
        let c = Chart::new(2, &[0]).unwrap();
        let p = PlaneMatrix::new(&c, vec![vec![C64::new(0.5, 0.5)]]).unwrap();
        let v = PlaneBasis::new(2, vec![vec![C64::new(2.0, 0.0), C64::new(1.0, 1.0 + 1e-12)]]).unwrap();
        assert!(contains_subspace(&p, &v).unwrap());
        let far = PlaneBasis::new(2, vec![vec![C64::new(2.0, 0.0), C64::new(1.0, 1.001)]]).unwrap();
        assert!(!contains_subspace(&p, &far).unwrap());
    }

    #[test]
    fn symbolic_rows_annihilate_symbolic_basis() {
        let c = Chart::new(4, &[1, 3]).unwrap();
        let ring = c.default_ring();
        let basis = c.symbolic_basis(&ring).unwrap();
        for row in c.equation_rows(&ring).unwrap() {
            for col in &basis {
                let s = row
                    .iter()
                    .zip(col)
                    .fold(Polynomial::zero(&ring), |acc, (a, b)| &acc + &(a * b));
                assert!(s.is_zero());
            }
        }
        assert_eq!(ring.name(4), "a11");
        assert_eq!(ring.name(7), "a22");
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-20i64..=20, 1i64..=5).prop_map(|(n, d)| rational(n, d))
    }

    proptest! {
        #[test]
        fn exact_round_trip(n in 2usize..=5, seed in 0usize..100, entries in prop::collection::vec(small_rational(), 16)) {
            let d = 1 + seed % (n - 1);
            let cover = chart_cover(n, d).unwrap();
            let chart = &cover[seed % cover.len()];
            let p = PlaneMatrix::from_flat(chart, &entries[..chart.num_a()]).unwrap();
            let w = plane_from_matrix(&p);
            prop_assert!(contains_subspace(&p, &w).unwrap());
            prop_assert_eq!(matrix_from_plane(chart, &w).unwrap(), p);
        }

        #[test]
        fn float_round_trip_spans_same_plane(re in prop::collection::vec(-3.0f64..3.0, 12), im in prop::collection::vec(-3.0f64..3.0, 12)) {
            let chart = Chart::new(4, &[0, 2]).unwrap();
            let data: Vec<C64> = re.iter().zip(&im).map(|(&a, &b)| C64::new(a, b)).collect();
            let cols = vec![data[0..4].to_vec(), data[4..8].to_vec()];
            let Ok(w) = PlaneBasis::new(4, cols) else { return Ok(()) };
            let Ok(p) = matrix_from_plane(&chart, &w) else { return Ok(()) };
            let back = plane_from_matrix(&p);
            let mut all = w.columns().to_vec();
            all.extend_from_slice(back.columns());
            prop_assert_eq!(rank(&all), 2);
        }
    }
}
