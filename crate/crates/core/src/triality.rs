//! Triality companions of `A_q` and the resulting Sp(1) inside Spin(9).
//!
//! Companions solve `C(m) A(x) = B(m x)` with `C(m)` the left multiplication by the
//! octonion `C m`, which leaves 128 unknowns (the entries of `B` and `C`).
//!
//! The eigen-lines of the Clifford system are `{(x, x m)}`, while the relation above
//! preserves the family `{(x, m x)}`. Conjugating by `kappa = conj (+) conj` swaps the
//! two families, so the rotation actually built is `kappa diag(A_q, B_q) kappa`.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hopf::{random_unit, HopfGeometry};
use crate::linalg::{orthogonality_residual, subspace_distance, svd_sorted};
use crate::octonion::{mult_matrix, Octonion, Quaternion, Side};

/// Relative threshold under which a singular value counts as zero.
pub const NULL_TOL: f64 = 1e-8;

fn check_unit(q: &Quaternion<f64>) -> Result<()> {
    let n = q.norm_sqr();
    if (n - 1.0).abs() > 1e-12 {
        return Err(Error::NotUnit { norm_sqr: n });
    }
    Ok(())
}

/// `h1 + h2 e -> h1 q + (conj(q) h2) e`.
pub fn aq_matrix(q: &Quaternion<f64>) -> Result<DMatrix<f64>> {
    check_unit(q)?;
    let qc = q.conj();
    let mut m = DMatrix::zeros(8, 8);
    for j in 0..8 {
        let (h1, h2) = Octonion::<f64>::basis(j).halves();
        let img = Octonion::from_halves(&(&h1 * q), &(&qc * &h2));
        for i in 0..8 {
            m[(i, j)] = img.c[i];
        }
    }
    Ok(m)
}

fn octonion_col(m: &DMatrix<f64>, j: usize) -> Octonion<f64> {
    Octonion::new(std::array::from_fn(|i| m[(i, j)]))
}

fn apply(m: &DMatrix<f64>, x: &Octonion<f64>) -> Octonion<f64> {
    Octonion::new(std::array::from_fn(|i| (0..8).map(|j| m[(i, j)] * x.c[j]).sum()))
}

#[derive(Clone, Debug, Serialize)]
pub struct TrialityTriple {
    pub a: DMatrix<f64>,
    pub b: DMatrix<f64>,
    /// Column `i` is the octonion `C e_i`; `C(m)` is left multiplication by `C m`.
    pub c: DMatrix<f64>,
    /// `max |C(m) A(x) - B(m x)|` over basis pairs.
    pub residual: f64,
    pub nullspace_dim: usize,
    /// The two smallest singular values, relative to the largest.
    pub smallest_singular_values: [f64; 2],
}

impl TrialityTriple {
    /// `C(m)` as an 8x8 matrix.
    pub fn c_of(&self, m: &Octonion<f64>) -> DMatrix<f64> {
        mult_matrix(Side::Left, &apply(&self.c, m))
    }

    /// The eight matrices `C(e_i)`.
    pub fn c_matrices(&self) -> Vec<DMatrix<f64>> {
        (0..8).map(|i| self.c_of(&Octonion::basis(i))).collect()
    }

    pub fn negated(&self) -> TrialityTriple {
        let mut t = self.clone();
        t.b = -t.b;
        t.c = -t.c;
        t.residual = relation_residual(&t.a, &t.b, &t.c);
        t
    }

    /// Worst `|C(m)^T C(m) - Id|` over basis `m` and `random` unit `m`.
    pub fn c_orthogonality(&self, random: usize, seed: u64) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst = self.c_matrices().iter().map(orthogonality_residual).fold(0.0, f64::max);
        for _ in 0..random {
            let m = Octonion::new(random_unit::<8>(&mut rng));
            worst = worst.max(orthogonality_residual(&self.c_of(&m)));
        }
        worst
    }
}

pub fn relation_residual(a: &DMatrix<f64>, b: &DMatrix<f64>, c: &DMatrix<f64>) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..8 {
        let cm = octonion_col(c, i);
        for j in 0..8 {
            let lhs = &cm * &octonion_col(a, j);
            let rhs = apply(b, &(&Octonion::basis(i) * &Octonion::basis(j)));
            worst = worst.max((&lhs - &rhs).max_abs());
        }
    }
    worst
}

/// The 512 x 128 system; unknowns `B[r, s]` at `8 r + s` and `C[k, i]` at `64 + 8 k + i`.
fn companion_system(a: &DMatrix<f64>) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(512, 128);
    for i in 0..8 {
        for j in 0..8 {
            let mx = &Octonion::<f64>::basis(i) * &Octonion::basis(j);
            let ax = octonion_col(a, j);
            let prods: Vec<Octonion<f64>> = (0..8).map(|k| &Octonion::basis(k) * &ax).collect();
            for comp in 0..8 {
                let row = (i * 8 + j) * 8 + comp;
                for (k, p) in prods.iter().enumerate() {
                    m[(row, 64 + k * 8 + i)] += p.c[comp];
                }
                for s in 0..8 {
                    m[(row, comp * 8 + s)] -= mx.c[s];
                }
            }
        }
    }
    m
}

/// Raw companion pair for `A`, scaled so `B` is orthogonal, sign unnormalized.
fn companion_raw(a: &DMatrix<f64>) -> Result<TrialityTriple> {
    if a.nrows() != 8 || a.ncols() != 8 {
        return Err(Error::Dimension(format!("expected 8x8, got {}x{}", a.nrows(), a.ncols())));
    }
    let residual = orthogonality_residual(a);
    if residual > 1e-10 {
        return Err(Error::NotOrthogonal { residual });
    }
    let (sv, v) = svd_sorted(&companion_system(a));
    let top = sv[0];
    let null = sv.iter().filter(|&&s| s <= NULL_TOL * top).count();
    if null != 1 {
        return Err(Error::CompanionNullspace { dim: null });
    }
    let x = v.column(127);
    let b = DMatrix::from_fn(8, 8, |r, s| x[8 * r + s]);
    let c = DMatrix::from_fn(8, 8, |k, i| x[64 + 8 * k + i]);
    let scale = (8.0f64).sqrt() / b.norm();
    let (b, c) = (b * scale, c * scale);
    let n = sv.len();
    Ok(TrialityTriple {
        residual: relation_residual(a, &b, &c),
        a: a.clone(),
        b,
        c,
        nullspace_dim: null,
        smallest_singular_values: [sv[n - 2] / top, sv[n - 1] / top],
    })
}

/// Companions of `A`, signed so that `tr(B) >= 0` (first nonzero entry of `B` positive
/// when the trace vanishes).
pub fn companion_solve(a: &DMatrix<f64>) -> Result<TrialityTriple> {
    let t = companion_raw(a)?;
    let tr = t.b.trace();
    let flip = if tr.abs() > 1e-9 {
        tr < 0.0
    } else {
        t.b.iter().find(|x| x.abs() > 1e-9).is_some_and(|&x| x < 0.0)
    };
    Ok(if flip { t.negated() } else { t })
}

/// Point at parameter `t` on the great circle from 1 to `q`.
fn geodesic(q: &Quaternion<f64>, t: f64) -> Quaternion<f64> {
    let angle = q.c[0].clamp(-1.0, 1.0).acos();
    let axis = [q.c[1], q.c[2], q.c[3]];
    let n = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
    let axis = if n > 1e-14 { axis.map(|x| x / n) } else { [1.0, 0.0, 0.0] };
    let (s, c) = (angle * t).sin_cos();
    Quaternion::new(c, s * axis[0], s * axis[1], s * axis[2])
}

/// Companions along the lift `q -> B_q` through 1, with `B_1 = Id`: the sign is carried
/// by continuity along the great circle from 1 to `q`, in steps short enough that
/// consecutive `B`'s stay far from orthogonal.
pub fn lifted_companion(q: &Quaternion<f64>) -> Result<TrialityTriple> {
    check_unit(q)?;
    let angle = q.c[0].clamp(-1.0, 1.0).acos();
    let steps = ((angle / (std::f64::consts::PI / 3.0)).ceil() as usize).max(1);
    let mut prev = DMatrix::<f64>::identity(8, 8);
    let mut last = None;
    for s in 1..=steps {
        let qt = if s == steps { q.clone() } else { geodesic(q, s as f64 / steps as f64) };
        let mut t = companion_raw(&aq_matrix(&qt)?)?;
        if t.b.dot(&prev) < 0.0 {
            t = t.negated();
        }
        prev = t.b.clone();
        last = Some(t);
    }
    last.ok_or(Error::CompanionNullspace { dim: 0 })
}

fn kappa() -> DMatrix<f64> {
    DMatrix::from_diagonal(&nalgebra::DVector::from_fn(16, |i, _| if i % 8 == 0 { 1.0 } else { -1.0 }))
}

#[derive(Clone, Debug, Serialize)]
pub struct TrialityRotation {
    pub q: [f64; 4],
    pub triple: TrialityTriple,
    /// `kappa diag(A_q, B_q) kappa`.
    pub matrix: DMatrix<f64>,
}

pub fn rq_rotation(q: &Quaternion<f64>) -> Result<TrialityRotation> {
    let triple = lifted_companion(q)?;
    let mut d = DMatrix::zeros(16, 16);
    d.view_mut((0, 0), (8, 8)).copy_from(&triple.a);
    d.view_mut((8, 8), (8, 8)).copy_from(&triple.b);
    let k = kappa();
    Ok(TrialityRotation { q: q.c, triple, matrix: &k * d * &k })
}

pub fn rq_build(q: &Quaternion<f64>) -> Result<DMatrix<f64>> {
    Ok(rq_rotation(q)?.matrix)
}

/// Max distance between `R l` and the eigen-line through the first image point, over
/// random eigen-lines `l`.
pub fn line_preservation_check(r: &DMatrix<f64>, samples: usize, seed: u64) -> Result<f64> {
    if r.nrows() != 16 || r.ncols() != 16 {
        return Err(Error::Dimension(format!("expected 16x16, got {}x{}", r.nrows(), r.ncols())));
    }
    let geo = HopfGeometry::standard();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let v = random_unit::<9>(&mut rng);
        let frame = DMatrix::from_iterator(16, 8, geo.line_eigen(&v)?.iter().copied());
        let image = r * &frame;
        let p: Vec<f64> = image.column(0).iter().copied().collect();
        let n = p.iter().map(|x| x * x).sum::<f64>().sqrt();
        let p: Vec<f64> = p.iter().map(|x| x / n).collect();
        let fitted = geo.line_eigen(&geo.hopf_project(&p)?)?;
        let fitted = DMatrix::from_iterator(16, 8, fitted.iter().copied());
        worst = worst.max(subspace_distance(&image, &fitted));
    }
    Ok(worst)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CompositionLaw {
    /// `R_q R_q' = R_{q' q}`
    Right,
    /// `R_q R_q' = R_{q q'}`
    Left,
    Neither,
}

#[derive(Clone, Debug, Serialize)]
pub struct CompositionReport {
    pub law: CompositionLaw,
    pub right_residual: f64,
    pub left_residual: f64,
}

/// Compares `R_q R_q'` with both orders of the product on random pairs.
pub fn composition_law(samples: usize, seed: u64, tol: f64) -> Result<CompositionReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut right, mut left) = (0.0f64, 0.0f64);
    for _ in 0..samples {
        let q1 = random_quaternion(&mut rng);
        let q2 = random_quaternion(&mut rng);
        let prod = rq_build(&q1)? * rq_build(&q2)?;
        right = right.max((&prod - rq_build(&(&q2 * &q1))?).amax());
        left = left.max((&prod - rq_build(&(&q1 * &q2))?).amax());
    }
    let law = if right <= tol {
        CompositionLaw::Right
    } else if left <= tol {
        CompositionLaw::Left
    } else {
        CompositionLaw::Neither
    };
    Ok(CompositionReport { law, right_residual: right, left_residual: left })
}

pub fn random_quaternion(rng: &mut impl Rng) -> Quaternion<f64> {
    let [a, b, c, d] = random_unit::<4>(rng);
    Quaternion::new(a, b, c, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::min_singular_value;

    fn q(a: f64, b: f64, c: f64, d: f64) -> Quaternion<f64> {
        Quaternion::new(a, b, c, d)
    }

    #[test]
    fn aq_basics() {
        assert_eq!(aq_matrix(&q(1.0, 0.0, 0.0, 0.0)).unwrap(), DMatrix::identity(8, 8));
        assert_eq!(aq_matrix(&q(-1.0, 0.0, 0.0, 0.0)).unwrap(), -DMatrix::<f64>::identity(8, 8));
        assert!(matches!(aq_matrix(&q(1.0, 1.0, 0.0, 0.0)), Err(Error::NotUnit { .. })));
        let mut rng = ChaCha8Rng::seed_from_u64(91);
        let (q1, q2) = (random_quaternion(&mut rng), random_quaternion(&mut rng));
        let a1 = aq_matrix(&q1).unwrap();
        assert!(orthogonality_residual(&a1) < 1e-14);
        // block diagonal w.r.t. H + He
        assert!(a1.view((0, 4), (4, 4)).amax() == 0.0 && a1.view((4, 0), (4, 4)).amax() == 0.0);
        // right action
        let prod = &a1 * aq_matrix(&q2).unwrap();
        assert!((prod - aq_matrix(&(&q2 * &q1)).unwrap()).amax() < 1e-14);
        // no fixed points for q != 1
        assert!(min_singular_value(&(a1 - DMatrix::identity(8, 8))) > 1e-3);
    }

    #[test]
    fn identity_companions() {
        let t = companion_solve(&DMatrix::identity(8, 8)).unwrap();
        assert!((&t.b - DMatrix::<f64>::identity(8, 8)).amax() < 1e-9);
        assert!((&t.c - DMatrix::<f64>::identity(8, 8)).amax() < 1e-9);
        assert_eq!(t.nullspace_dim, 1);
    }

    #[test]
    fn companions_of_a_i() {
        let t = companion_solve(&aq_matrix(&q(0.0, 1.0, 0.0, 0.0)).unwrap()).unwrap();
        assert_eq!(t.nullspace_dim, 1);
        assert!(orthogonality_residual(&t.b) < 1e-9);
        assert!(t.residual < 1e-9);
        assert!(t.c_orthogonality(20, 3) < 1e-9);
        let b4 = &t.b * &t.b * &t.b * &t.b;
        let id = DMatrix::<f64>::identity(8, 8);
        assert!((&b4 - &id).amax() < 1e-8 || (&b4 + &id).amax() < 1e-8);
        let neg = t.negated();
        assert!((neg.residual - t.residual).abs() < 1e-12);
    }

    #[test]
    fn rotations_have_companions_reflections_do_not() {
        // any plane rotation lies in SO(8), the image of Spin(8)
        let mut a = DMatrix::<f64>::identity(8, 8);
        let (s, c) = 0.3f64.sin_cos();
        a[(0, 0)] = c;
        a[(1, 1)] = c;
        a[(0, 1)] = -s;
        a[(1, 0)] = s;
        let t = companion_solve(&a).unwrap();
        assert!(t.residual < 1e-9);
        let mut refl = DMatrix::<f64>::identity(8, 8);
        refl[(3, 3)] = -1.0;
        match companion_solve(&refl) {
            Err(Error::CompanionNullspace { dim }) => assert_ne!(dim, 1),
            other => panic!("unexpected {other:?}"),
        }
        let bad = DMatrix::<f64>::identity(8, 8) * 2.0;
        assert!(matches!(companion_solve(&bad), Err(Error::NotOrthogonal { .. })));
    }

    #[test]
    fn rq_identity_and_minus_one() {
        let r1 = rq_build(&q(1.0, 0.0, 0.0, 0.0)).unwrap();
        assert!((r1 - DMatrix::<f64>::identity(16, 16)).amax() < 1e-9);
        let rm = rq_build(&q(-1.0, 0.0, 0.0, 0.0)).unwrap();
        assert!(min_singular_value(&(rm - DMatrix::<f64>::identity(16, 16))) > 1.0);
    }

    #[test]
    fn composition_is_a_right_action() {
        let rep = composition_law(2, 17, 1e-8).unwrap();
        assert_eq!(rep.law, CompositionLaw::Right, "{rep:?}");
    }

    #[test]
    fn lines_are_preserved() {
        assert!(line_preservation_check(&DMatrix::identity(16, 16), 5, 1).unwrap() < 1e-10);
        let mut rng = ChaCha8Rng::seed_from_u64(93);
        let r = rq_build(&random_quaternion(&mut rng)).unwrap();
        assert!(line_preservation_check(&r, 10, 2).unwrap() <= 1e-8);
        let mut swap = DMatrix::<f64>::identity(16, 16);
        swap.swap_rows(0, 8);
        assert!(line_preservation_check(&swap, 10, 3).unwrap() > 1e-2);
    }
}
