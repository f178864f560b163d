use super::ideal::Ideal;
use super::polynomial::Polynomial;
use super::ring::{same_ring, Ring};
use crate::error::{Error, Result};
use crate::par;

/// Dense row-major matrix of polynomials over one ring.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyMatrix {
    ring: Ring,
    rows: usize,
    cols: usize,
    entries: Vec<Polynomial>,
}

impl PolyMatrix {
    pub fn from_rows(ring: &Ring, rows: Vec<Vec<Polynomial>>) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::OutOfRange("ragged matrix rows".into()));
        }
        if rows.iter().flatten().any(|p| !same_ring(p.ring(), ring)) {
            return Err(Error::VariableMismatch);
        }
        Ok(PolyMatrix {
            ring: ring.clone(),
            rows: rows.len(),
            cols,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Polynomial {
        &self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Polynomial] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    /// This matrix with `row` appended at the bottom.
    pub fn with_row(&self, row: &[Polynomial]) -> Result<Self> {
        if row.len() != self.cols {
            return Err(Error::OutOfRange("appended row has the wrong length".into()));
        }
        let mut m = self.clone();
        m.entries.extend(row.iter().cloned());
        m.rows += 1;
        Ok(m)
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &PolyMatrix) -> Result<Self> {
        if self.rows != other.rows {
            return Err(Error::OutOfRange("row counts differ".into()));
        }
        let rows = (0..self.rows)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.extend(other.row(i).iter().cloned());
                r
            })
            .collect();
        Self::from_rows(&self.ring, rows)
    }

    /// Determinant of the submatrix on `rows × cols` (equal lengths).
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> Polynomial {
        let k = rows.len();
        assert_eq!(k, cols.len());
        let size = 1usize << k;
        let mut dp: Vec<Polynomial> = vec![Polynomial::zero(&self.ring); size];
        dp[0] = Polynomial::one(&self.ring);
        for mask in 0..size {
            if dp[mask].is_zero() {
                continue;
            }
            let r = mask.count_ones() as usize;
            if r == k {
                continue;
            }
            for c in 0..k {
                if mask & (1 << c) != 0 {
                    continue;
                }
                let entry = self.get(rows[r], cols[c]);
                if entry.is_zero() {
                    continue;
                }
                let term = &dp[mask] * entry;
                let inversions = (mask >> (c + 1)).count_ones();
                let next = mask | (1 << c);
                dp[next] = if inversions % 2 == 0 {
                    &dp[next] + &term
                } else {
                    &dp[next] - &term
                };
            }
        }
        dp.pop().expect("nonempty table")
    }
}

/// Strictly increasing `size`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if size > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..size).collect();
    loop {
        out.push(cur.clone());
        let mut i = size;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] != i + n - size {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        cur[i] += 1;
        for j in i + 1..size {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Jacobian matrix: entry `(i, j)` is `∂g_i/∂v_j` for `v_j` in `wrt`.
pub fn jacobian(ideal: &Ideal, wrt: &[usize]) -> Result<PolyMatrix> {
    let n = ideal.ring().len();
    if let Some(&bad) = wrt.iter().find(|&&v| v >= n) {
        return Err(Error::OutOfRange(format!("variable index {bad} out of range")));
    }
    let rows = ideal
        .generators()
        .iter()
        .map(|g| wrt.iter().map(|&v| g.derivative(v)).collect())
        .collect();
    PolyMatrix::from_rows(ideal.ring(), rows)
}

/// All `size × size` minors, rows index sets outer and column index sets
/// inner, both in lexicographic order. Zero minors are included.
pub fn minors(m: &PolyMatrix, size: usize) -> Result<Vec<Polynomial>> {
    if size == 0 || size > m.rows().min(m.cols()) {
        return Err(Error::OutOfRange(format!(
            "minor size {size} out of range for a {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    let row_sets = combinations(m.rows(), size);
    let col_sets = combinations(m.cols(), size);
    let jobs: Vec<(usize, usize)> = (0..row_sets.len())
        .flat_map(|r| (0..col_sets.len()).map(move |c| (r, c)))
        .collect();
    Ok(par::map_slice(&jobs, |&(r, c)| m.minor(&row_sets[r], &col_sets[c])))
}
