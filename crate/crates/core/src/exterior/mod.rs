//! Sparse alternating forms on R^n (n <= 16).
//!
//! A basis k-form `dx_{i1} ^ ... ^ dx_{ik}` is keyed by a [`MultiIndex`], a bitmask of
//! its (0-based) indices; only strictly increasing index sets are stored and all sign
//! bookkeeping is done by permutation parity.

pub mod fast;
mod io;
mod poly;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg::det;
use crate::scalar::Scalar;

pub use io::{parse_form, read_form_file, write_form, write_form_file};
pub use poly::{sphere_moment, sphere_moment_dim, PolyScalar, POLY_VARS};

pub const MAX_DIM: usize = 16;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct MultiIndex(u16);

impl MultiIndex {
    pub fn from_mask(mask: u16) -> Self {
        MultiIndex(mask)
    }

    /// From 0-based strictly increasing indices.
    pub fn new(idx: &[usize]) -> Result<Self> {
        let mut mask = 0u16;
        for (p, &i) in idx.iter().enumerate() {
            if i >= MAX_DIM {
                return Err(Error::Dimension(format!("index {} exceeds {}", i + 1, MAX_DIM)));
            }
            if p > 0 && idx[p - 1] >= i {
                return Err(Error::Dimension(format!("indices {:?} are not strictly increasing", idx)));
            }
            mask |= 1 << i;
        }
        Ok(MultiIndex(mask))
    }

    pub fn mask(self) -> u16 {
        self.0
    }

    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn max_index(self) -> Option<usize> {
        (self.0 != 0).then(|| 15 - self.0.leading_zeros() as usize)
    }

    /// Ascending 0-based indices.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut m = self.0;
        std::iter::from_fn(move || {
            (m != 0).then(|| {
                let i = m.trailing_zeros() as usize;
                m &= m - 1;
                i
            })
        })
    }

    pub fn indices(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// All k-subsets of {0..n-1} in lexicographic order.
    pub fn all(n: usize, k: usize) -> Vec<MultiIndex> {
        let total = binomial(n, k);
        (0..total).map(|r| unrank(n, k, r)).collect()
    }

    /// Position of this index among `MultiIndex::all(n, degree)`.
    pub fn lex_rank(self, n: usize) -> usize {
        let k = self.degree();
        let mut rank = 0;
        let mut next = 0;
        for (p, a) in self.iter().enumerate() {
            for v in next..a {
                rank += binomial(n - v - 1, k - p - 1);
            }
            next = a + 1;
        }
        rank
    }
}

fn unrank(n: usize, k: usize, mut r: usize) -> MultiIndex {
    let mut mask = 0u16;
    let mut v = 0;
    for p in 0..k {
        loop {
            let block = binomial(n - v - 1, k - p - 1);
            if r < block {
                break;
            }
            r -= block;
            v += 1;
        }
        mask |= 1 << v;
        v += 1;
    }
    MultiIndex(mask)
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

impl Ord for MultiIndex {
    /// Lexicographic order of the ascending index sequences: the set owning the smallest
    /// element of the symmetric difference comes first.
    fn cmp(&self, other: &Self) -> Ordering {
        let d = self.0 ^ other.0;
        if d == 0 {
            Ordering::Equal
        } else if self.0 & d & d.wrapping_neg() != 0 {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    /// 1-based, space separated.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|i| (i + 1).to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

/// Sign of `dx^I ^ dx^J` relative to `dx^{I u J}`; `None` when they overlap.
pub fn wedge_sign(a: u16, b: u16) -> Option<i8> {
    if a & b != 0 {
        return None;
    }
    let mut inversions = 0u32;
    let mut m = b;
    while m != 0 {
        let j = m.trailing_zeros();
        m &= m - 1;
        inversions += (a >> j).count_ones();
    }
    Some(if inversions % 2 == 0 { 1 } else { -1 })
}

/// Sign picked up when index `old` of `mask` is replaced in place by `new` (not in mask)
/// and the sequence is re-sorted.
pub fn replace_sign(mask: u16, old: usize, new: usize) -> i8 {
    let (lo, hi) = if old < new { (old, new) } else { (new, old) };
    let between = if hi - lo <= 1 { 0 } else { ((1u32 << hi) - (1u32 << (lo + 1))) as u16 };
    if (mask & between).count_ones() % 2 == 0 {
        1
    } else {
        -1
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExteriorForm<T> {
    n: usize,
    k: usize,
    coeffs: BTreeMap<MultiIndex, T>,
}

/// Non-zero entries of each matrix row as `(column, value)`.
fn sparse_rows<T: Scalar>(m: &DMatrix<T>) -> Vec<Vec<(usize, T)>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).filter(|&j| !m[(i, j)].is_zero()).map(|j| (j, m[(i, j)].clone())).collect())
        .collect()
}

impl<T: Scalar> ExteriorForm<T> {
    pub fn zero(n: usize, k: usize) -> Result<Self> {
        if n > MAX_DIM || k > n {
            return Err(Error::Dimension(format!("no {k}-forms on R^{n} (n <= {MAX_DIM})")));
        }
        Ok(ExteriorForm { n, k, coeffs: BTreeMap::new() })
    }

    /// `dx_{i1} ^ ... ^ dx_{ik}` from 0-based increasing indices.
    pub fn basis(n: usize, idx: &[usize]) -> Result<Self> {
        let mut f = Self::zero(n, idx.len())?;
        let m = MultiIndex::new(idx)?;
        f.check_index(m)?;
        f.coeffs.insert(m, T::one());
        Ok(f)
    }

    pub fn from_terms(n: usize, k: usize, terms: impl IntoIterator<Item = (MultiIndex, T)>) -> Result<Self> {
        let mut f = Self::zero(n, k)?;
        for (m, v) in terms {
            f.check_index(m)?;
            f.add_term(m, v);
        }
        Ok(f)
    }

    fn check_index(&self, m: MultiIndex) -> Result<()> {
        if m.degree() != self.k || m.max_index().is_some_and(|i| i >= self.n) {
            return Err(Error::Dimension(format!("index ({m}) is not a {}-index on R^{}", self.k, self.n)));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn nnz(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coefficient(&self, m: &MultiIndex) -> T {
        self.coeffs.get(m).cloned().unwrap_or_else(T::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &T)> {
        self.coeffs.iter()
    }

    /// Accumulate `v` into the coefficient of `m`, dropping exact zeros.
    pub fn add_term(&mut self, m: MultiIndex, v: T) {
        if v.is_zero() {
            return;
        }
        match self.coeffs.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(v);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().clone() + v;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn scale(&self, s: &T) -> Self {
        let mut out = Self { n: self.n, k: self.k, coeffs: BTreeMap::new() };
        for (m, v) in &self.coeffs {
            out.add_term(*m, v.clone() * s.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&-T::one())
    }

    fn same_shape(&self, o: &Self) -> Result<()> {
        if self.n != o.n || self.k != o.k {
            return Err(Error::Dimension(format!(
                "{}-form on R^{} vs {}-form on R^{}",
                self.k, self.n, o.k, o.n
            )));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.same_shape(o)?;
        let mut out = self.clone();
        for (m, v) in &o.coeffs {
            out.add_term(*m, v.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn wedge(&self, o: &Self) -> Result<Self> {
        if self.n != o.n {
            return Err(Error::Dimension(format!("wedge of forms on R^{} and R^{}", self.n, o.n)));
        }
        let mut out = Self::zero(self.n, self.k + o.k)?;
        for (a, x) in &self.coeffs {
            for (b, y) in &o.coeffs {
                if let Some(s) = wedge_sign(a.0, b.0) {
                    let v = x.clone() * y.clone();
                    out.add_term(MultiIndex(a.0 | b.0), if s > 0 { v } else { -v });
                }
            }
        }
        Ok(out)
    }

    /// `sum_I a_I det(V[I, :])` for the n x k matrix whose columns are the arguments.
    pub fn eval(&self, vectors: &[Vec<T>]) -> Result<T> {
        if vectors.len() != self.k || vectors.iter().any(|v| v.len() != self.n) {
            return Err(Error::Dimension(format!(
                "a {}-form on R^{} needs {} vectors of length {}",
                self.k, self.n, self.k, self.n
            )));
        }
        let mut acc = T::zero();
        for (m, a) in &self.coeffs {
            let rows = m.indices();
            let sub = DMatrix::from_fn(self.k, self.k, |i, j| vectors[j][rows[i]].clone());
            acc += a.clone() * det(&sub);
        }
        Ok(acc)
    }

    fn check_matrix(&self, m: &DMatrix<T>) -> Result<()> {
        if m.nrows() != self.n || m.ncols() != self.n {
            return Err(Error::Dimension(format!(
                "{}x{} matrix acting on forms over R^{}",
                m.nrows(),
                m.ncols(),
                self.n
            )));
        }
        Ok(())
    }

    /// `M^* a`, i.e. `(M^* a)(v_1..v_k) = a(M v_1, .., M v_k)`.
    pub fn pullback(&self, m: &DMatrix<T>) -> Result<Self> {
        self.check_matrix(m)?;
        let rows = sparse_rows(m);
        let mut out = Self::zero(self.n, self.k)?;
        for (idx, a) in &self.coeffs {
            // expand M^* dx_{i1} ^ ... ^ M^* dx_{ik} one factor at a time
            let mut acc: BTreeMap<u16, T> = BTreeMap::from([(0u16, a.clone())]);
            for i in idx.iter() {
                let mut next: BTreeMap<u16, T> = BTreeMap::new();
                for (mask, v) in &acc {
                    for (c, w) in &rows[i] {
                        if mask >> c & 1 == 1 {
                            continue;
                        }
                        let t = v.clone() * w.clone();
                        let t = if ((*mask as u32) >> (c + 1)).count_ones() % 2 == 0 { t } else { -t };
                        *next.entry(mask | 1 << c).or_insert_with(T::zero) += t;
                    }
                }
                next.retain(|_, v| !v.is_zero());
                acc = next;
            }
            for (mask, v) in acc {
                out.add_term(MultiIndex(mask), v);
            }
        }
        Ok(out)
    }

    /// The derivation of gl(n) on k-forms: `d/dt exp(tS)^* a` at `t = 0`.
    pub fn infinitesimal_action(&self, s: &DMatrix<T>) -> Result<Self> {
        self.check_matrix(s)?;
        Ok(self.infinitesimal_action_sparse(&sparse_rows(s)))
    }

    pub(crate) fn infinitesimal_action_sparse(&self, rows: &[Vec<(usize, T)>]) -> Self {
        let mut out = Self { n: self.n, k: self.k, coeffs: BTreeMap::new() };
        for (idx, a) in &self.coeffs {
            for i in idx.iter() {
                for (c, w) in &rows[i] {
                    if *c == i {
                        out.add_term(*idx, a.clone() * w.clone());
                    } else if !idx.contains(*c) {
                        let mask = idx.0 & !(1 << i) | 1 << c;
                        let v = a.clone() * w.clone();
                        let v = if replace_sign(idx.0, i, *c) > 0 { v } else { -v };
                        out.add_term(MultiIndex(mask), v);
                    }
                }
            }
        }
        out
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> ExteriorForm<U> {
        let mut out = ExteriorForm { n: self.n, k: self.k, coeffs: BTreeMap::new() };
        for (m, v) in &self.coeffs {
            out.add_term(*m, f(v));
        }
        out
    }

    pub fn to_f64(&self) -> ExteriorForm<f64> {
        self.map(|v| v.to_f64())
    }

    /// Coefficients over `MultiIndex::all(n, k)` in lexicographic order.
    pub fn to_dense(&self) -> Vec<T> {
        let mut out = vec![T::zero(); binomial(self.n, self.k)];
        for (m, v) in &self.coeffs {
            out[m.lex_rank(self.n)] = v.clone();
        }
        out
    }

    pub fn from_dense(n: usize, k: usize, dense: &[T]) -> Result<Self> {
        if dense.len() != binomial(n, k) {
            return Err(Error::Dimension(format!("dense {k}-form on R^{n} needs {} entries", binomial(n, k))));
        }
        let idx = MultiIndex::all(n, k);
        Self::from_terms(n, k, idx.into_iter().zip(dense.iter().cloned()))
    }
}

impl ExteriorForm<f64> {
    pub fn max_abs(&self) -> f64 {
        self.coeffs.values().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.values().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Drop coefficients with magnitude at or below `tol`.
    pub fn pruned(&self, tol: f64) -> Self {
        let mut out = self.clone();
        out.coeffs.retain(|_, v| v.abs() > tol);
        out
    }
}

pub fn cosine_similarity(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    dot / (na * nb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{expm, max_abs};
    use num_traits::Zero;
    use crate::scalar::{rational, Rational};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rand_form(rng: &mut ChaCha8Rng, n: usize, k: usize) -> ExteriorForm<Rational> {
        let all = MultiIndex::all(n, k);
        let terms: Vec<_> = (0..rng.random_range(1..6))
            .map(|_| (all[rng.random_range(0..all.len())], rational(rng.random_range(-4..=4), rng.random_range(1..4))))
            .collect();
        ExteriorForm::from_terms(n, k, terms).unwrap()
    }

    fn rand_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
        (0..n).map(|_| rational(rng.random_range(-3..=3), rng.random_range(1..3))).collect()
    }

    fn rand_mat(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<Rational> {
        DMatrix::from_fn(n, n, |_, _| rational(rng.random_range(-2..=2), 1))
    }

    fn mat_vec(m: &DMatrix<Rational>, v: &[Rational]) -> Vec<Rational> {
        (0..m.nrows()).map(|i| (0..m.ncols()).fold(Rational::from_i64(0), |acc, j| acc + &m[(i, j)] * &v[j])).collect()
    }

    #[test]
    fn lex_order_and_rank() {
        let all = MultiIndex::all(6, 3);
        assert_eq!(all.len(), 20);
        assert_eq!(all[0].indices(), vec![0, 1, 2]);
        assert_eq!(all[19].indices(), vec![3, 4, 5]);
        for w in all.windows(2) {
            assert!(w[0] < w[1]);
            assert!(w[0].indices() < w[1].indices());
        }
        for (r, m) in all.iter().enumerate() {
            assert_eq!(m.lex_rank(6), r);
        }
        assert_eq!(MultiIndex::all(16, 8).len(), 12870);
        assert!(MultiIndex::new(&[2, 1]).is_err());
    }

    #[test]
    fn wedge_of_basis_forms() {
        let a = ExteriorForm::<Rational>::basis(4, &[0]).unwrap();
        let b = ExteriorForm::<Rational>::basis(4, &[1]).unwrap();
        assert_eq!(a.wedge(&b).unwrap(), ExteriorForm::basis(4, &[0, 1]).unwrap());
        assert_eq!(b.wedge(&a).unwrap(), ExteriorForm::basis(4, &[0, 1]).unwrap().neg());
    }

    #[test]
    fn odd_forms_square_to_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for k in [1, 3] {
            let a = rand_form(&mut rng, 7, k);
            assert!(a.wedge(&a).unwrap().is_zero());
        }
    }

    #[test]
    fn graded_commutativity() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for _ in 0..30 {
            let (p, q) = (rng.random_range(1..4), rng.random_range(1..4));
            let a = rand_form(&mut rng, 7, p);
            let b = rand_form(&mut rng, 7, q);
            let ab = a.wedge(&b).unwrap();
            let ba = b.wedge(&a).unwrap();
            assert_eq!(ab, if p * q % 2 == 0 { ba } else { ba.neg() });
        }
    }

    #[test]
    fn eval_basics() {
        let vol = ExteriorForm::<Rational>::basis(8, &[0, 1, 2, 3, 4, 5, 6, 7]).unwrap();
        let e: Vec<Vec<Rational>> = (0..8)
            .map(|i| (0..8).map(|j| rational((i == j) as i64, 1)).collect())
            .collect();
        assert_eq!(vol.eval(&e).unwrap(), rational(1, 1));
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let a = rand_form(&mut rng, 6, 3);
        let (u, v) = (rand_vec(&mut rng, 6), rand_vec(&mut rng, 6));
        assert!(a.eval(&[u.clone(), v.clone(), u.clone()]).unwrap().is_zero());
        let w = rand_vec(&mut rng, 6);
        let x = a.eval(&[u.clone(), v.clone(), w.clone()]).unwrap();
        assert_eq!(a.eval(&[v, u, w]).unwrap(), -x);
        assert!(a.eval(&[rand_vec(&mut rng, 6)]).is_err());
    }

    // wedge against the shuffle formula evaluated on vectors
    #[test]
    fn wedge_agrees_with_evaluation() {
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        for _ in 0..100 {
            let n = rng.random_range(4..=8);
            let a = rand_form(&mut rng, n, 1);
            let b = rand_form(&mut rng, n, 2);
            let (u, v, w) = (rand_vec(&mut rng, n), rand_vec(&mut rng, n), rand_vec(&mut rng, n));
            let e = |f: &ExteriorForm<Rational>, vs: &[&Vec<Rational>]| {
                f.eval(&vs.iter().map(|x| (*x).clone()).collect::<Vec<_>>()).unwrap()
            };
            // (a ^ b)(u,v,w) = a(u) b(v,w) - a(v) b(u,w) + a(w) b(u,v)
            let want = e(&a, &[&u]) * e(&b, &[&v, &w]) - e(&a, &[&v]) * e(&b, &[&u, &w])
                + e(&a, &[&w]) * e(&b, &[&u, &v]);
            assert_eq!(e(&a.wedge(&b).unwrap(), &[&u, &v, &w]), want);
        }
    }

    #[test]
    fn pullback_basics() {
        let a = ExteriorForm::<Rational>::basis(4, &[0, 1]).unwrap();
        assert_eq!(a.pullback(&DMatrix::identity(4, 4)).unwrap(), a);
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![2, 3, 1, 1].into_iter().map(|x| rational(x, 1)).collect()));
        assert_eq!(a.pullback(&d).unwrap(), a.scale(&rational(6, 1)));
    }

    #[test]
    fn pullback_matches_evaluation_and_is_functorial() {
        let mut rng = ChaCha8Rng::seed_from_u64(25);
        for _ in 0..100 {
            let n = rng.random_range(3..=6);
            let k = rng.random_range(1..=n.min(4));
            let a = rand_form(&mut rng, n, k);
            let (m, nn) = (rand_mat(&mut rng, n), rand_mat(&mut rng, n));
            let vs: Vec<Vec<Rational>> = (0..k).map(|_| rand_vec(&mut rng, n)).collect();
            let mvs: Vec<Vec<Rational>> = vs.iter().map(|v| mat_vec(&m, v)).collect();
            assert_eq!(a.pullback(&m).unwrap().eval(&vs).unwrap(), a.eval(&mvs).unwrap());
            let lhs = a.pullback(&(&m * &nn)).unwrap();
            let rhs = a.pullback(&m).unwrap().pullback(&nn).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn infinitesimal_action_basics() {
        let a = ExteriorForm::<Rational>::basis(4, &[0, 1]).unwrap();
        assert!(a.infinitesimal_action(&DMatrix::from_element(4, 4, rational(0, 1))).unwrap().is_zero());
        let mut s = DMatrix::from_element(4, 4, rational(0, 1));
        s[(0, 1)] = rational(-1, 1);
        s[(1, 0)] = rational(1, 1);
        assert!(a.infinitesimal_action(&s).unwrap().is_zero());
    }

    #[test]
    fn infinitesimal_action_matches_evaluation_and_leibniz() {
        let mut rng = ChaCha8Rng::seed_from_u64(26);
        for _ in 0..100 {
            let n = rng.random_range(3..=7);
            let k = rng.random_range(1..=n.min(3));
            let a = rand_form(&mut rng, n, k);
            let s = rand_mat(&mut rng, n);
            let vs: Vec<Vec<Rational>> = (0..k).map(|_| rand_vec(&mut rng, n)).collect();
            let mut want = Rational::from_i64(0);
            for j in 0..k {
                let mut ws = vs.clone();
                ws[j] = mat_vec(&s, &vs[j]);
                want += a.eval(&ws).unwrap();
            }
            assert_eq!(a.infinitesimal_action(&s).unwrap().eval(&vs).unwrap(), want);

            let b = rand_form(&mut rng, n, 1);
            if k + 1 <= n {
                let lhs = a.wedge(&b).unwrap().infinitesimal_action(&s).unwrap();
                let rhs = a
                    .infinitesimal_action(&s)
                    .unwrap()
                    .wedge(&b)
                    .unwrap()
                    .add(&a.wedge(&b.infinitesimal_action(&s).unwrap()).unwrap())
                    .unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn derivative_of_pullback_along_exp() {
        let mut rng = ChaCha8Rng::seed_from_u64(27);
        let t = 1e-4;
        for _ in 0..10 {
            let n = 6;
            let a = rand_form(&mut rng, n, 3).to_f64();
            let s = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
            let plus = a.pullback(&expm(&(&s * t))).unwrap();
            let minus = a.pullback(&expm(&(&s * -t))).unwrap();
            let fd = plus.sub(&minus).unwrap().scale(&(0.5 / t));
            let exact = a.infinitesimal_action(&s).unwrap();
            let diff = fd.sub(&exact).unwrap();
            assert!(diff.max_abs() < 1e-6, "{}", diff.max_abs());
        }
        let _ = max_abs;
    }

    #[test]
    fn dense_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(28);
        let a = rand_form(&mut rng, 8, 4);
        let d = a.to_dense();
        assert_eq!(d.len(), 70);
        assert_eq!(ExteriorForm::from_dense(8, 4, &d).unwrap(), a);
    }

    #[test]
    fn shape_errors() {
        let a = ExteriorForm::<Rational>::basis(4, &[0]).unwrap();
        let b = ExteriorForm::<Rational>::basis(5, &[0]).unwrap();
        assert!(a.wedge(&b).is_err());
        assert!(a.pullback(&DMatrix::identity(5, 5)).is_err());
        assert!(ExteriorForm::<Rational>::zero(17, 2).is_err());
    }
}
