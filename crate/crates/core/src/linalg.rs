//! Linear algebra helpers: an exact sparse row-echelon builder over the rationals and a
//! handful of small dense `f64` routines on top of nalgebra.

use nalgebra::DMatrix;
use num_traits::{One, Zero};

use crate::scalar::{magnitude, Rational, Scalar};

pub type SparseRow = Vec<(usize, Rational)>;

/// Incremental row-echelon form over `Rational`. Rows are sparse and sorted by column;
/// every stored row has leading coefficient 1 at its pivot column.
#[derive(Clone, Debug)]
pub struct RationalEchelon {
    ncols: usize,
    rows: Vec<SparseRow>,
    pivot_of: Vec<Option<usize>>,
}

impl RationalEchelon {
    pub fn new(ncols: usize) -> Self {
        RationalEchelon { ncols, rows: Vec::new(), pivot_of: vec![None; ncols] }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn nullity(&self) -> usize {
        self.ncols - self.rows.len()
    }

    pub fn pivot_columns(&self) -> Vec<usize> {
        (0..self.ncols).filter(|&c| self.pivot_of[c].is_some()).collect()
    }

    /// Reduce `row` against the stored pivots. Returns the (possibly empty) remainder.
    pub fn reduce(&self, mut row: SparseRow) -> SparseRow {
        row.sort_by_key(|e| e.0);
        row.retain(|e| !e.1.is_zero());
        let mut start = 0;
        loop {
            let hit = row[start..].iter().position(|(c, _)| self.pivot_of[*c].is_some());
            let Some(off) = hit else { return row };
            let pos = start + off;
            let (col, factor) = row[pos].clone();
            let pivot_row = &self.rows[self.pivot_of[col].unwrap()];
            row = axpy(&row, &factor, pivot_row);
            // entries before `pos` are untouched because pivot rows start at `col`
            start = pos;
            if start >= row.len() {
                return row;
            }
        }
    }

    /// Insert a row; returns true when the rank grew.
    pub fn insert(&mut self, row: SparseRow) -> bool {
        debug_assert!(row.iter().all(|(c, _)| *c < self.ncols));
        let mut r = self.reduce(row);
        if r.is_empty() {
            return false;
        }
        let lead = r[0].1.clone();
        if !lead.is_one() {
            let inv = Rational::one() / lead;
            for e in r.iter_mut() {
                e.1 = &e.1 * &inv;
            }
        }
        self.pivot_of[r[0].0] = Some(self.rows.len());
        self.rows.push(r);
        true
    }

    /// Basis of the right nullspace, one dense vector per free column, with a 1 in that
    /// free column and zeros in all other free columns.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let pivots: Vec<(usize, usize)> = (0..self.ncols)
            .filter_map(|c| self.pivot_of[c].map(|r| (c, r)))
            .collect();
        let mut out = Vec::new();
        for free in (0..self.ncols).filter(|&c| self.pivot_of[c].is_none()) {
            let mut x = vec![Rational::zero(); self.ncols];
            x[free] = Rational::one();
            for &(c, r) in pivots.iter().rev() {
                let mut acc = Rational::zero();
                for (j, v) in &self.rows[r][1..] {
                    if !x[*j].is_zero() {
                        acc -= v * &x[*j];
                    }
                }
                x[c] = acc;
            }
            out.push(x);
        }
        out
    }
}

/// `a - f * b` for sparse sorted rows.
fn axpy(a: &SparseRow, f: &Rational, b: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ca = a.get(i).map_or(usize::MAX, |e| e.0);
        let cb = b.get(j).map_or(usize::MAX, |e| e.0);
        if ca < cb {
            out.push(a[i].clone());
            i += 1;
        } else if cb < ca {
            out.push((cb, -(f * &b[j].1)));
            j += 1;
        } else {
            let v = &a[i].1 - f * &b[j].1;
            if !v.is_zero() {
                out.push((ca, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Rank of a dense rational matrix.
pub fn rank_exact(m: &DMatrix<Rational>) -> usize {
    let mut ech = RationalEchelon::new(m.ncols());
    for i in 0..m.nrows() {
        let row: SparseRow = (0..m.ncols()).filter(|&j| !m[(i, j)].is_zero()).map(|j| (j, m[(i, j)].clone())).collect();
        ech.insert(row);
    }
    ech.rank()
}

/// Determinant by Gaussian elimination. Exact for rationals; partial pivoting for doubles.
pub fn det<T: Scalar>(m: &DMatrix<T>) -> T {
    assert_eq!(m.nrows(), m.ncols(), "det of a non-square matrix");
    let n = m.nrows();
    let mut a = m.clone();
    let mut d = T::one();
    for k in 0..n {
        let p = (k..n).max_by(|&x, &y| magnitude(&a[(x, k)]).total_cmp(&magnitude(&a[(y, k)])));
        let Some(p) = p.filter(|&p| !a[(p, k)].is_zero()) else { return T::zero() };
        if p != k {
            a.swap_rows(p, k);
            d = -d;
        }
        let piv = a[(k, k)].clone();
        d *= piv.clone();
        for i in k + 1..n {
            if a[(i, k)].is_zero() {
                continue;
            }
            let f = a[(i, k)].clone() / piv.clone();
            for j in k + 1..n {
                let t = f.clone() * a[(k, j)].clone();
                a[(i, j)] -= t;
            }
        }
    }
    d
}

pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0f64, |acc, x| acc.max(x.abs()))
}

/// `max |M^T M - I|`.
pub fn orthogonality_residual(m: &DMatrix<f64>) -> f64 {
    let g = m.transpose() * m;
    max_abs(&(g - DMatrix::identity(m.ncols(), m.ncols())))
}

/// Matrix exponential by scaling and squaring with a plain Taylor series.
pub fn expm(a: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.nrows();
    let norm1 = (0..n).map(|j| a.column(j).iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max);
    let s = if norm1 > 0.5 { (norm1 / 0.5).log2().ceil() as i32 } else { 0 };
    let b = a / 2f64.powi(s);
    let mut sum = DMatrix::identity(n, n);
    let mut term = DMatrix::identity(n, n);
    for k in 1..40 {
        term = &term * &b / k as f64;
        sum += &term;
        if max_abs(&term) < 1e-18 {
            break;
        }
    }
    for _ in 0..s {
        sum = &sum * &sum;
    }
    sum
}

/// Singular values in decreasing order with the matching right singular vectors (as columns).
pub fn svd_sorted(m: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    // nalgebra returns V^T with min(r, c) rows; pad wide matrices with zero rows so that
    // the full right basis is available
    let (r, c) = m.shape();
    let padded = if r < c { m.clone().resize_vertically(c, 0.0) } else { m.clone() };
    let svd = padded.svd(false, true);
    let vt = svd.v_t.expect("requested V^T");
    let mut idx: Vec<usize> = (0..svd.singular_values.len()).collect();
    idx.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let vals = idx.iter().map(|&i| svd.singular_values[i]).collect();
    let v = DMatrix::from_fn(c, idx.len(), |i, j| vt[(idx[j], i)]);
    (vals, v)
}

pub fn singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    let mut s: Vec<f64> = m.clone().singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

pub fn min_singular_value(m: &DMatrix<f64>) -> f64 {
    singular_values(m).last().copied().unwrap_or(0.0)
}

/// Numerical rank with threshold `rel_tol * sigma_max`.
pub fn rank_f64(m: &DMatrix<f64>, rel_tol: f64) -> usize {
    let s = singular_values(m);
    let top = s.first().copied().unwrap_or(0.0);
    s.iter().filter(|&&x| x > rel_tol * top).count()
}

/// Modified Gram–Schmidt (two passes) over the columns of `m`, dropping columns whose
/// residual norm falls below `tol`.
pub fn orthonormalize(m: &DMatrix<f64>, tol: f64) -> DMatrix<f64> {
    let mut kept: Vec<nalgebra::DVector<f64>> = Vec::new();
    for j in 0..m.ncols() {
        let mut v = m.column(j).into_owned();
        for _ in 0..2 {
            for q in &kept {
                let d = q.dot(&v);
                v -= q * d;
            }
        }
        let n = v.norm();
        if n > tol {
            kept.push(v / n);
        }
    }
    if kept.is_empty() {
        return DMatrix::zeros(m.nrows(), 0);
    }
    DMatrix::from_columns(&kept)
}

/// Sine of the largest principal angle between two subspaces given by orthonormal
/// columns: `|| (I - A A^T) B ||_2`. Computed without the `1 - cos^2` cancellation.
pub fn subspace_distance(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    let r = b - a * (a.transpose() * b);
    let r2 = a - b * (b.transpose() * a);
    let s1 = singular_values(&r).first().copied().unwrap_or(0.0);
    let s2 = singular_values(&r2).first().copied().unwrap_or(0.0);
    s1.max(s2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn echelon_rank_and_nullspace() {
        // rows of a 3x4 matrix of rank 2
        let rows = [[1, 2, 0, -1], [2, 4, 1, 0], [3, 6, 1, -1]];
        let mut e = RationalEchelon::new(4);
        let mut grew = Vec::new();
        for r in rows {
            grew.push(e.insert(r.iter().enumerate().map(|(j, &v)| (j, rational(v, 1))).collect()));
        }
        assert_eq!(grew, vec![true, true, false]);
        assert_eq!(e.rank(), 2);
        let ns = e.nullspace();
        assert_eq!(ns.len(), 2);
        for x in &ns {
            for r in rows {
                let dot = r.iter().zip(x).fold(Rational::zero(), |acc, (&a, b)| acc + rational(a, 1) * b);
                assert!(dot.is_zero());
            }
        }
    }

    #[test]
    fn echelon_matches_dense_rank_on_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..30 {
            let (r, c) = (rng.random_range(1..7), rng.random_range(1..7));
            let k = rng.random_range(1..=r.min(c));
            let a = DMatrix::from_fn(r, k, |_, _| rng.random_range(-3..=3) as f64);
            let b = DMatrix::from_fn(k, c, |_, _| rng.random_range(-3..=3) as f64);
            let p = &a * &b;
            let exact = DMatrix::from_fn(r, c, |i, j| rational(p[(i, j)] as i64, 1));
            assert_eq!(rank_exact(&exact), rank_f64(&p, 1e-10));
        }
    }

    #[test]
    fn exact_determinant() {
        let m = DMatrix::from_row_slice(3, 3, &[2, 0, 1, 1, 3, 2, 1, 1, 2].map(|v| rational(v, 1)));
        assert_eq!(det(&m), rational(6, 1));
        let m = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        assert_eq!(det(&m), -1.0);
    }

    #[test]
    fn expm_of_rotation_generator() {
        let t = 0.7f64;
        let s = DMatrix::from_row_slice(2, 2, &[0.0, -t, t, 0.0]);
        let e = expm(&s);
        let want = DMatrix::from_row_slice(2, 2, &[t.cos(), -t.sin(), t.sin(), t.cos()]);
        assert!(max_abs(&(e - want)) < 1e-14);
        let big = DMatrix::from_row_slice(2, 2, &[0.0, -20.0, 20.0, 0.0]);
        assert!(orthogonality_residual(&expm(&big)) < 1e-12);
    }

    #[test]
    fn principal_angles() {
        let a = DMatrix::from_column_slice(3, 1, &[1.0, 0.0, 0.0]);
        let t = 0.3f64;
        let b = DMatrix::from_column_slice(3, 1, &[t.cos(), t.sin(), 0.0]);
        assert!((subspace_distance(&a, &b) - t.sin()).abs() < 1e-15);
        assert!(subspace_distance(&a, &a) < 1e-16);
    }

    #[test]
    fn gram_schmidt_drops_dependent_columns() {
        let m = DMatrix::from_column_slice(3, 3, &[1.0, 1.0, 0.0, 2.0, 2.0, 0.0, 0.0, 1.0, 1.0]);
        let q = orthonormalize(&m, 1e-12);
        assert_eq!(q.ncols(), 2);
        assert!(orthogonality_residual(&q) < 1e-15);
    }

    #[test]
    fn sorted_svd_of_wide_matrix_has_full_right_basis() {
        let m = DMatrix::from_row_slice(1, 3, &[1.0, 2.0, 2.0]);
        let (s, v) = svd_sorted(&m);
        assert_eq!(v.ncols(), 3);
        assert!((s[0] - 3.0).abs() < 1e-14);
        assert!(s[1].abs() < 1e-14 && s[2].abs() < 1e-14);
        assert!((&m * v.column(2)).norm() < 1e-14);
    }
}
