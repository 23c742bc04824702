//! Clifford systems: nine anticommuting symmetric involutions on R^16 = O^2 and the
//! five-element quaternionic system on R^8 = H^2.
//!
//! Both are built from the block matrix `[[r Id, R_conj(u)], [R_u, -r Id]]` of a unit
//! vector `(r, u)`, with `R_u` the right multiplication by `u`.

use nalgebra::DMatrix;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::RationalEchelon;
use crate::octonion::{mult_matrix, quaternion_mult_matrix, Octonion, Quaternion, Side};
use crate::scalar::{Rational, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct CliffordSystem {
    n: usize,
    generators: Vec<DMatrix<i64>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SystemReport {
    pub n: usize,
    pub m: usize,
    pub relations_hold: bool,
    pub symmetric: bool,
    pub orthogonal: bool,
    pub products_are_complex_structures: bool,
    pub span_dim: usize,
    pub failures: Vec<String>,
}

impl SystemReport {
    pub fn passed(&self, expected_span: usize) -> bool {
        self.relations_hold && self.symmetric && self.orthogonal && self.span_dim == expected_span
    }
}

fn to_int(m: &DMatrix<Rational>) -> DMatrix<i64> {
    m.map(|x| x.to_integer().to_i64().expect("integer entry"))
}

fn block(r: i64, ru: &DMatrix<i64>, ru_bar: &DMatrix<i64>) -> DMatrix<i64> {
    let h = ru.nrows();
    let mut m = DMatrix::zeros(2 * h, 2 * h);
    for i in 0..h {
        m[(i, i)] = r;
        m[(h + i, h + i)] = -r;
    }
    m.view_mut((0, h), (h, h)).copy_from(ru_bar);
    m.view_mut((h, 0), (h, h)).copy_from(ru);
    m
}

/// `I_1..I_9` on R^16: slots 1..8 use `u = 1, i, j, k, e, f, g, h` with `r = 0`,
/// slot 9 is `(r, u) = (1, 0)`.
pub fn spin9_system() -> CliffordSystem {
    let mut gens = Vec::with_capacity(9);
    for a in 0..8 {
        let u = Octonion::<Rational>::basis(a);
        let ru = to_int(&mult_matrix(Side::Right, &u));
        let ru_bar = to_int(&mult_matrix(Side::Right, &u.conj()));
        gens.push(block(0, &ru, &ru_bar));
    }
    gens.push(block(1, &DMatrix::zeros(8, 8), &DMatrix::zeros(8, 8)));
    CliffordSystem { n: 16, generators: gens }
}

/// `I_1..I_5` on R^8 from `(r, u) = (0,1), (0,i), (0,j), (0,k), (1,0)`.
pub fn sp2sp1_system() -> CliffordSystem {
    let mut gens = Vec::with_capacity(5);
    for a in 0..4 {
        let u = Quaternion::<Rational>::basis(a);
        let ru = to_int(&quaternion_mult_matrix(Side::Right, &u));
        let ru_bar = to_int(&quaternion_mult_matrix(Side::Right, &u.conj()));
        gens.push(block(0, &ru, &ru_bar));
    }
    gens.push(block(1, &DMatrix::zeros(4, 4), &DMatrix::zeros(4, 4)));
    CliffordSystem { n: 8, generators: gens }
}

impl CliffordSystem {
    pub fn new(generators: Vec<DMatrix<i64>>) -> Result<Self> {
        let n = generators.first().map_or(0, |g| g.nrows());
        if generators.iter().any(|g| g.nrows() != n || g.ncols() != n) {
            return Err(Error::Dimension("generators must be square of equal size".into()));
        }
        Ok(CliffordSystem { n, generators })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// `I_{a+1}` (0-based slot).
    pub fn generator(&self, a: usize) -> &DMatrix<i64> {
        &self.generators[a]
    }

    pub fn generators(&self) -> &[DMatrix<i64>] {
        &self.generators
    }

    pub fn generator_f64(&self, a: usize) -> DMatrix<f64> {
        self.generators[a].map(|x| x as f64)
    }

    pub fn generator_exact(&self, a: usize) -> DMatrix<Rational> {
        self.generators[a].map(Rational::from_i64)
    }

    pub fn product(&self, a: usize, b: usize) -> DMatrix<i64> {
        &self.generators[a] * &self.generators[b]
    }

    /// The `m(m-1)/2` products `I_a I_b` with `a < b`, in lexicographic order of `(a, b)`.
    pub fn products(&self) -> Vec<((usize, usize), DMatrix<i64>)> {
        let m = self.len();
        let mut out = Vec::new();
        for a in 0..m {
            for b in a + 1..m {
                out.push(((a, b), self.product(a, b)));
            }
        }
        out
    }

    /// Copy with entry `(row, col)` of `I_{alpha+1}` and its mirror negated.
    pub fn with_flipped_entry(&self, alpha: usize, row: usize, col: usize) -> Self {
        let mut out = self.clone();
        let g = &mut out.generators[alpha];
        g[(row, col)] = -g[(row, col)];
        if row != col {
            g[(col, row)] = -g[(col, row)];
        }
        out
    }

    /// `(sum_a v_a I_a) p`; `v` must be a unit vector (exactly for rationals).
    pub fn action<T: Scalar>(&self, v: &[T], p: &[T]) -> Result<Vec<T>> {
        if v.len() != self.len() || p.len() != self.n {
            return Err(Error::Dimension(format!(
                "action needs v in R^{} and p in R^{}, got {} and {}",
                self.len(),
                self.n,
                v.len(),
                p.len()
            )));
        }
        let norm = v.iter().fold(T::zero(), |acc, x| acc + x.clone() * x.clone());
        if !norm.near(&T::one(), 1e-12) {
            return Err(Error::NotUnit { norm_sqr: norm.to_f64() });
        }
        let mut out = vec![T::zero(); self.n];
        for (g, va) in self.generators.iter().zip(v) {
            if va.is_zero() {
                continue;
            }
            for i in 0..self.n {
                for j in 0..self.n {
                    let e = g[(i, j)];
                    if e != 0 {
                        out[i] += va.clone() * T::from_i64(e) * p[j].clone();
                    }
                }
            }
        }
        Ok(out)
    }

    /// `sum_a v_a I_a` as a dense matrix.
    pub fn combination_f64(&self, v: &[f64]) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.n, self.n);
        for (g, va) in self.generators.iter().zip(v) {
            m += g.map(|x| x as f64) * *va;
        }
        m
    }

    pub fn verify(&self) -> SystemReport {
        let n = self.n;
        let id = DMatrix::<i64>::identity(n, n);
        let mut failures = Vec::new();
        let mut relations_hold = true;
        let mut symmetric = true;
        let mut orthogonal = true;
        let mut complex = true;
        for (a, g) in self.generators.iter().enumerate() {
            if g != &g.transpose() {
                symmetric = false;
                failures.push(format!("I{} is not symmetric", a + 1));
            }
            if g * g != id {
                relations_hold = false;
                failures.push(format!("I{}^2 != Id", a + 1));
            }
            if &g.transpose() * g != id {
                orthogonal = false;
                failures.push(format!("I{} is not orthogonal", a + 1));
            }
        }
        for ((a, b), p) in self.products() {
            let q = self.product(b, a);
            if !(&p + &q).iter().all(|x| *x == 0) {
                relations_hold = false;
                failures.push(format!("I{} I{} + I{} I{} != 0", a + 1, b + 1, b + 1, a + 1));
            }
            if p.transpose() != -&p || &p * &p != -&id {
                complex = false;
            }
        }
        // rank of the products flattened to vectors of length n^2
        let mut ech = RationalEchelon::new(n * n);
        for (_, p) in self.products() {
            let row = p
                .iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(i, x)| (i, Rational::from_i64(*x)))
                .collect();
            ech.insert(row);
        }
        SystemReport {
            n,
            m: self.len(),
            relations_hold,
            symmetric,
            orthogonal,
            products_are_complex_structures: complex,
            span_dim: ech.rank(),
            failures,
        }
    }
}

/// `clifford_action` for the R^16 system.
pub fn clifford_action<T: Scalar>(v: &[T], p: &[T]) -> Result<Vec<T>> {
    spin9_system().action(v, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn i9_and_i1_blocks() {
        let s = spin9_system();
        let mut want = DMatrix::<i64>::identity(16, 16);
        for i in 8..16 {
            want[(i, i)] = -1;
        }
        assert_eq!(s.generator(8), &want);
        let mut swap = DMatrix::<i64>::zeros(16, 16);
        for i in 0..8 {
            swap[(i, i + 8)] = 1;
            swap[(i + 8, i)] = 1;
        }
        assert_eq!(s.generator(0), &swap);
    }

    #[test]
    fn anticommutation_spot_check() {
        let s = spin9_system();
        assert!((s.product(1, 2) + s.product(2, 1)).iter().all(|x| *x == 0));
    }

    #[test]
    fn spin9_report() {
        let r = spin9_system().verify();
        assert!(r.passed(36), "{:?}", r.failures);
        assert!(r.products_are_complex_structures);
        assert!(r.failures.is_empty());
    }

    #[test]
    fn sp2sp1_report() {
        let s = sp2sp1_system();
        let mut i5 = DMatrix::<i64>::identity(8, 8);
        for i in 4..8 {
            i5[(i, i)] = -1;
        }
        assert_eq!(s.generator(4), &i5);
        let r = s.verify();
        assert!(r.passed(10), "{:?}", r.failures);
        assert!(r.products_are_complex_structures);
    }

    #[test]
    fn corrupted_system_is_reported() {
        let r = spin9_system().with_flipped_entry(3, 0, 11).verify();
        assert!(!r.relations_hold);
        assert!(!r.failures.is_empty());
    }

    #[test]
    fn action_matches_generators() {
        let s = spin9_system();
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let p: Vec<Rational> = (0..16).map(|_| rational(rng.random_range(-5..5), 3)).collect();
        let mut v = vec![rational(0, 1); 9];
        v[8] = rational(1, 1);
        let out = s.action(&v, &p).unwrap();
        let want: Vec<Rational> = (0..16).map(|i| if i < 8 { p[i].clone() } else { -p[i].clone() }).collect();
        assert_eq!(out, want);
        let mut v = vec![rational(0, 1); 9];
        v[0] = rational(1, 1);
        let out = s.action(&v, &p).unwrap();
        assert_eq!(out, (0..16).map(|i| p[(i + 8) % 16].clone()).collect::<Vec<_>>());
        // a rational unit vector: (3/5, 4/5) in slots 2 and 9
        let mut v = vec![rational(0, 1); 9];
        v[1] = rational(3, 5);
        v[8] = rational(4, 5);
        let once = s.action(&v, &p).unwrap();
        assert_eq!(s.action(&v, &once).unwrap(), p);
        assert!(matches!(s.action(&vec![rational(1, 2); 9], &p), Err(Error::NotUnit { .. })));
    }

    #[test]
    fn action_agrees_with_matrix_sum() {
        let s = spin9_system();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..100 {
            let raw: Vec<f64> = (0..9).map(|_| rng.random_range(-1.0..1.0)).collect();
            let n = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
            let v: Vec<f64> = raw.iter().map(|x| x / n).collect();
            let p: Vec<f64> = (0..16).map(|_| rng.random_range(-1.0..1.0)).collect();
            let out = s.action(&v, &p).unwrap();
            let want = s.combination_f64(&v) * nalgebra::DVector::from_vec(p.clone());
            for i in 0..16 {
                assert!((out[i] - want[i]).abs() < 1e-14);
            }
            let back = s.action(&v, &out).unwrap();
            for i in 0..16 {
                assert!((back[i] - p[i]).abs() < 1e-13);
            }
        }
    }
}
