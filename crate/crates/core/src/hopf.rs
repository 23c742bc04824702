//! Octonionic lines, the Hopf map S^15 -> S^8 and the frame fields `I_a B`.
//!
//! The eigen-line of a unit `v = (u, r)` in R^9 is the +1 eigenspace of
//! `V = sum v_a I_a`; slope charts (`{(x, m x)}` or `{(x, x m)}`) are only views of it,
//! and which of the two families matches is decided by [`family_consistency_check`].

use std::sync::OnceLock;

use nalgebra::{DMatrix, SMatrix, SVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::clifford::{spin9_system, CliffordSystem};
use crate::error::{Error, Result};
use crate::linalg::{orthonormalize, subspace_distance};
use crate::octonion::{mult_matrix, Octonion, Side};

pub type Mat16 = SMatrix<f64, 16, 16>;
pub type Vec16 = SVector<f64, 16>;
pub type Frame = SMatrix<f64, 16, 8>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LineFamily {
    /// `l_m = {(x, m x)}`
    Left,
    /// `l_m = {(x, x m)}`
    Right,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Slope {
    Finite(Octonion<f64>),
    Infinity,
}

/// A line in one of the three descriptions.
#[derive(Clone, Debug, PartialEq)]
pub enum OctonionicLine {
    Slope { m: Slope, family: LineFamily },
    Eigen { v: [f64; 9] },
}

impl OctonionicLine {
    pub fn basis(&self) -> Result<Frame> {
        match self {
            OctonionicLine::Slope { m, family } => Ok(line_span(m, *family)),
            OctonionicLine::Eigen { v } => line_eigen(v),
        }
    }
}

/// Orthonormal basis of `{(x, m x)}` (left), `{(x, x m)}` (right) or `{0} + O` (infinity).
pub fn line_span(m: &Slope, family: LineFamily) -> Frame {
    match m {
        Slope::Infinity => Frame::from_fn(|i, j| if i == j + 8 { 1.0 } else { 0.0 }),
        Slope::Finite(m) => {
            let side = match family {
                LineFamily::Left => Side::Left,
                LineFamily::Right => Side::Right,
            };
            let mm = mult_matrix(side, m);
            let raw = DMatrix::from_fn(16, 8, |i, j| if i < 8 { (i == j) as u8 as f64 } else { mm[(i - 8, j)] });
            let q = orthonormalize(&raw, 1e-12);
            Frame::from_fn(|i, j| q[(i, j)])
        }
    }
}

/// The nine generators as `f64` matrices together with the derived geometric operations.
#[derive(Clone, Debug)]
pub struct HopfGeometry {
    gens: [Mat16; 9],
}

impl HopfGeometry {
    pub fn new(sys: &CliffordSystem) -> Result<Self> {
        if sys.len() != 9 || sys.dim() != 16 {
            return Err(Error::Dimension(format!("need 9 generators on R^16, got {} on R^{}", sys.len(), sys.dim())));
        }
        let gens = std::array::from_fn(|a| Mat16::from_fn(|i, j| sys.generator(a)[(i, j)] as f64));
        Ok(HopfGeometry { gens })
    }

    pub fn standard() -> &'static HopfGeometry {
        static G: OnceLock<HopfGeometry> = OnceLock::new();
        G.get_or_init(|| HopfGeometry::new(&spin9_system()).expect("standard system"))
    }

    pub fn generator(&self, a: usize) -> &Mat16 {
        &self.gens[a]
    }

    pub fn combination(&self, v: &[f64]) -> Mat16 {
        let mut m = Mat16::zeros();
        for (g, x) in self.gens.iter().zip(v) {
            m += g * *x;
        }
        m
    }

    /// Oriented orthonormal basis of the +1 eigenspace of `sum v_a I_a`.
    ///
    /// The basis is obtained by projecting `e_1..e_8` (when `r >= 0`) or `e_9..e_16`
    /// (when `r < 0`) and orthonormalizing. The orientation makes the determinant of the
    /// better conditioned 8x8 half positive; on lines where both halves are invertible
    /// the two rules agree.
    pub fn line_eigen(&self, v: &[f64]) -> Result<Frame> {
        if v.len() != 9 {
            return Err(Error::Dimension(format!("eigen-lines need v in R^9, got R^{}", v.len())));
        }
        let n2: f64 = v.iter().map(|x| x * x).sum();
        if (n2 - 1.0).abs() > 1e-12 {
            return Err(Error::NotUnit { norm_sqr: n2 });
        }
        let vm = self.combination(v);
        let proj = (Mat16::identity() + vm) * 0.5;
        let offset = if v[8] >= 0.0 { 0 } else { 8 };
        let mut frame = Frame::zeros();
        let mut kept = 0;
        for j in 0..8 {
            let mut c: Vec16 = proj.column(offset + j).into_owned();
            for _ in 0..2 {
                for q in 0..kept {
                    let d = frame.column(q).dot(&c);
                    c -= frame.column(q) * d;
                }
            }
            let n = c.norm();
            if n > 1e-6 {
                frame.set_column(kept, &(c / n));
                kept += 1;
            }
        }
        let residual = (vm * frame - frame).amax();
        if kept != 8 || residual > 1e-8 {
            return Err(Error::EigenspaceDimension { dim: eigen_one_count(&vm) });
        }
        let top = frame.fixed_view::<8, 8>(0, 0).determinant();
        let bottom = frame.fixed_view::<8, 8>(8, 0).determinant();
        let d = if top.abs() >= bottom.abs() { top } else { bottom };
        if d < 0.0 {
            let c = -frame.column(7);
            frame.set_column(7, &c);
        }
        Ok(frame)
    }

    /// `v_a = <I_a p, p> / |p|^2`.
    pub fn hopf_project(&self, p: &[f64]) -> Result<[f64; 9]> {
        let p = as_vec16(p)?;
        let n2 = p.norm_squared();
        if n2 == 0.0 {
            return Err(Error::ZeroVector("the Hopf projection"));
        }
        Ok(std::array::from_fn(|a| (self.gens[a] * p).dot(&p) / n2))
    }

    pub fn hopf_frame(&self, p: &[f64]) -> Result<HopfFrame> {
        let pv = as_vec16(p)?;
        let n2 = pv.norm_squared();
        if (n2 - 1.0).abs() > 1e-12 {
            return Err(Error::NotUnit { norm_sqr: n2 });
        }
        let fields: [Vec16; 9] = std::array::from_fn(|a| self.gens[a] * pv);
        let lambda: [f64; 9] = std::array::from_fn(|a| fields[a].dot(&pv));
        let recon = fields.iter().zip(&lambda).fold(Vec16::zeros(), |acc, (f, l)| acc + f * *l);
        let mut ortho = 0.0f64;
        for a in 0..9 {
            for b in 0..9 {
                let want = if a == b { 1.0 } else { 0.0 };
                ortho = ortho.max((fields[a].dot(&fields[b]) - want).abs());
            }
        }
        let mut cols: Vec<Vec16> = fields.to_vec();
        cols.extend((0..16).map(|i| Vec16::from_fn(|r, _| (r == i) as u8 as f64)));
        let all = DMatrix::from_fn(16, cols.len(), |i, j| cols[j][i]);
        let q = orthonormalize(&all, 1e-8);
        let complement = DMatrix::from_fn(16, q.ncols() - 9, |i, j| q[(i, j + 9)]);
        Ok(HopfFrame {
            p: pv,
            fields,
            lambda,
            reconstruction_residual: (recon - pv).amax(),
            orthonormality_residual: ortho,
            lambda_norm_residual: (lambda.iter().map(|l| l * l).sum::<f64>() - 1.0).abs(),
            complement,
        })
    }

    /// Splits `x` into its part orthogonal to `VB = span{I_a p}` (vertical) and its
    /// part in `VB`.
    pub fn vertical_projection(&self, x: &[f64], p: &[f64]) -> Result<(Vec16, Vec16)> {
        let xv = as_vec16(x)?;
        let pv = as_vec16(p)?;
        let n2 = pv.norm_squared();
        if (n2 - 1.0).abs() > 1e-12 {
            return Err(Error::NotUnit { norm_sqr: n2 });
        }
        let mut vb = Vec16::zeros();
        for g in &self.gens {
            let f = g * pv;
            vb += f * f.dot(&xv);
        }
        Ok((xv - vb, vb))
    }

    /// Residuals of the orthogonality chain for `x` as given (no projection).
    pub fn theorem_a_residuals(&self, p: &[f64], x: &[f64]) -> Result<TheoremAReport> {
        let pv = as_vec16(p)?;
        let xv = as_vec16(x)?;
        let images: [Vec16; 9] = std::array::from_fn(|a| self.gens[a] * xv);
        let mut tangency = 0.0f64;
        let mut pairwise = 0.0f64;
        let mut lengths = 0.0f64;
        for a in 0..9 {
            tangency = tangency.max(images[a].dot(&pv).abs());
            lengths = lengths.max((images[a].norm() - xv.norm()).abs());
            for b in a + 1..9 {
                pairwise = pairwise.max(images[a].dot(&images[b]).abs());
            }
        }
        Ok(TheoremAReport { tangency, pairwise, lengths, max: tangency.max(pairwise).max(lengths) })
    }

    /// Projects `x` to the vertical part at `p`, then evaluates the chain.
    pub fn theorem_a_check(&self, p: &[f64], x: &[f64]) -> Result<TheoremAReport> {
        let (vert, _) = self.vertical_projection(x, p)?;
        self.theorem_a_residuals(p, vert.as_slice())
    }

    /// Which slope family reproduces the eigen-lines. For each random `v` the slope is
    /// read off the eigen-basis as the image of `1` under `x -> y`, and both candidate
    /// spans are compared with the eigenspace by principal angles.
    pub fn family_consistency_check(&self, samples: usize, seed: u64) -> Result<FamilyReport> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut left_matches = 0;
        let mut right_matches = 0;
        let mut max_left = 0.0f64;
        let mut max_right = 0.0f64;
        let mut min_miss = f64::INFINITY;
        for _ in 0..samples {
            let v = random_unit::<9>(&mut rng);
            let (dl, dr) = self.family_distances(&v)?;
            max_left = max_left.max(dl);
            max_right = max_right.max(dr);
            if dl <= FAMILY_TOL {
                left_matches += 1;
            } else {
                min_miss = min_miss.min(dl);
            }
            if dr <= FAMILY_TOL {
                right_matches += 1;
            } else {
                min_miss = min_miss.min(dr);
            }
        }
        let verdict = if samples > 0 && right_matches == samples && left_matches == 0 {
            Some(LineFamily::Right)
        } else if samples > 0 && left_matches == samples && right_matches == 0 {
            Some(LineFamily::Left)
        } else {
            None
        };
        Ok(FamilyReport {
            samples,
            seed,
            left_matches,
            right_matches,
            max_left_distance: max_left,
            max_right_distance: max_right,
            min_mismatch_distance: min_miss,
            verdict,
        })
    }

    /// Subspace distances from the eigen-line of `v` to the left and right slope lines.
    pub fn family_distances(&self, v: &[f64]) -> Result<(f64, f64)> {
        let frame = self.line_eigen(v)?;
        let eig = DMatrix::from_fn(16, 8, |i, j| frame[(i, j)]);
        let slope = match slope_of(&frame) {
            Some(m) => Slope::Finite(m),
            None => Slope::Infinity,
        };
        let as_dyn = |f: Frame| DMatrix::from_fn(16, 8, |i, j| f[(i, j)]);
        let dl = subspace_distance(&eig, &as_dyn(line_span(&slope, LineFamily::Left)));
        let dr = subspace_distance(&eig, &as_dyn(line_span(&slope, LineFamily::Right)));
        Ok((dl, dr))
    }
}

const FAMILY_TOL: f64 = 1e-10;

fn eigen_one_count(vm: &Mat16) -> usize {
    let sym = (vm + vm.transpose()) * 0.5;
    sym.symmetric_eigenvalues().iter().filter(|l| (*l - 1.0).abs() < 1e-8).count()
}

/// Slope `m = y(x = 1)` of a line given by a basis, or `None` for the line at infinity.
pub fn slope_of(frame: &Frame) -> Option<Octonion<f64>> {
    let top = frame.fixed_view::<8, 8>(0, 0).into_owned();
    let bottom = frame.fixed_view::<8, 8>(8, 0).into_owned();
    let inv = top.try_inverse().filter(|_| top.determinant().abs() > 1e-12)?;
    let w = bottom * inv;
    Some(Octonion::new(std::array::from_fn(|i| w[(i, 0)])))
}

fn as_vec16(p: &[f64]) -> Result<Vec16> {
    if p.len() != 16 {
        return Err(Error::Dimension(format!("expected a vector in R^16, got R^{}", p.len())));
    }
    Ok(Vec16::from_column_slice(p))
}

pub fn random_unit<const N: usize>(rng: &mut impl Rng) -> [f64; N] {
    loop {
        let g: [f64; N] = std::array::from_fn(|_| rng.sample(StandardNormal));
        let n = g.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-3 {
            return g.map(|x| x / n);
        }
    }
}

#[derive(Clone, Debug)]
pub struct HopfFrame {
    pub p: Vec16,
    /// `I_1 p, .., I_9 p`
    pub fields: [Vec16; 9],
    /// `lambda_a = <I_a p, p>`
    pub lambda: [f64; 9],
    /// `|p - sum lambda_a I_a p|_max`
    pub reconstruction_residual: f64,
    pub orthonormality_residual: f64,
    pub lambda_norm_residual: f64,
    /// Orthonormal basis of the 7-dimensional `VB^perp`.
    pub complement: DMatrix<f64>,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct TheoremAReport {
    /// `max_a |<I_a X, p>|`
    pub tangency: f64,
    /// `max_{a != b} |<I_a X, I_b X>|`
    pub pairwise: f64,
    /// `max_a ||I_a X| - |X||`
    pub lengths: f64,
    pub max: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyReport {
    pub samples: usize,
    pub seed: u64,
    pub left_matches: usize,
    pub right_matches: usize,
    pub max_left_distance: f64,
    pub max_right_distance: f64,
    pub min_mismatch_distance: f64,
    pub verdict: Option<LineFamily>,
}

/// Signed symbols of the coordinates of `I_a B` for `B = (x_1..x_8, y_1..y_8)`.
pub fn frame_symbols(sys: &CliffordSystem, alpha: usize) -> Vec<String> {
    let g = sys.generator(alpha);
    (0..16)
        .map(|i| {
            let terms: Vec<String> = (0..16)
                .filter(|&j| g[(i, j)] != 0)
                .map(|j| {
                    let name = if j < 8 { format!("x{}", j + 1) } else { format!("y{}", j - 7) };
                    match g[(i, j)] {
                        1 => name,
                        -1 => format!("-{name}"),
                        c => format!("{c}{name}"),
                    }
                })
                .collect();
            if terms.is_empty() {
                "0".into()
            } else {
                terms.join("+")
            }
        })
        .collect()
}

/// Global sign `s` with `lambda_a = s * (-2 x . R_u y)` for `a = 2..8`, from samples;
/// `None` when the slots disagree.
pub fn lambda_sign(samples: usize, seed: u64) -> (Option<i8>, f64) {
    let geo = HopfGeometry::standard();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut plus = 0.0f64;
    let mut minus = 0.0f64;
    for _ in 0..samples {
        let p = random_unit::<16>(&mut rng);
        let lam = geo.hopf_project(&p).expect("unit point");
        for (a, l) in lam.iter().enumerate().take(8).skip(1) {
            let printed = printed_lambda(&p, a);
            plus = plus.max((l - printed).abs());
            minus = minus.max((l + printed).abs());
        }
    }
    if plus <= 1e-12 {
        (Some(1), plus)
    } else if minus <= 1e-12 {
        (Some(-1), minus)
    } else {
        (None, plus.min(minus))
    }
}

/// `-2 x . R_u y` with `u` the `a`-th basis octonion.
pub fn printed_lambda(p: &[f64], a: usize) -> f64 {
    let ru = mult_matrix(Side::Right, &Octonion::<f64>::basis(a));
    let x = &p[..8];
    let y = nalgebra::DVector::from_column_slice(&p[8..]);
    let ry = ru * y;
    -2.0 * x.iter().zip(ry.iter()).map(|(a, b)| a * b).sum::<f64>()
}

/// Sign `s` with `I_9 B = s B` on the fiber `x = 0`.
pub fn i9_sign_on_infinity_fiber() -> i8 {
    let mut b = Vec16::zeros();
    b[8] = 1.0;
    let img = HopfGeometry::standard().generator(8) * b;
    if (img - b).amax() < 1e-15 {
        1
    } else {
        -1
    }
}

pub fn line_eigen(v: &[f64]) -> Result<Frame> {
    HopfGeometry::standard().line_eigen(v)
}

pub fn hopf_project(p: &[f64]) -> Result<[f64; 9]> {
    HopfGeometry::standard().hopf_project(p)
}

pub fn hopf_frame(p: &[f64]) -> Result<HopfFrame> {
    HopfGeometry::standard().hopf_frame(p)
}

pub fn vertical_projection(x: &[f64], p: &[f64]) -> Result<(Vec16, Vec16)> {
    HopfGeometry::standard().vertical_projection(x, p)
}

pub fn theorem_a_check(p: &[f64], x: &[f64]) -> Result<TheoremAReport> {
    HopfGeometry::standard().theorem_a_check(p, x)
}

pub fn family_consistency_check(samples: usize, seed: u64) -> Result<FamilyReport> {
    HopfGeometry::standard().family_consistency_check(samples, seed)
}

pub const FAMILY_SEED: u64 = 0x5eed_f00d;
pub const FAMILY_SAMPLES: usize = 64;

/// The verdict of the standard system, computed once.
pub fn eigen_family() -> Result<LineFamily> {
    static V: OnceLock<Option<LineFamily>> = OnceLock::new();
    let v = V.get_or_init(|| family_consistency_check(FAMILY_SAMPLES, FAMILY_SEED).ok().and_then(|r| r.verdict));
    v.ok_or_else(|| Error::FamilyMismatch("no slope family matches the eigen-lines".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geo() -> &'static HopfGeometry {
        HopfGeometry::standard()
    }

    fn e9(sign: f64) -> [f64; 9] {
        let mut v = [0.0; 9];
        v[8] = sign;
        v
    }

    #[test]
    fn poles_give_the_coordinate_slots() {
        let f = geo().line_eigen(&e9(1.0)).unwrap();
        assert!((f - Frame::from_fn(|i, j| (i == j) as u8 as f64)).amax() < 1e-15);
        let f = geo().line_eigen(&e9(-1.0)).unwrap();
        assert!((f - Frame::from_fn(|i, j| (i == j + 8) as u8 as f64)).amax() < 1e-15);
    }

    #[test]
    fn eigen_basis_is_fixed_and_orthonormal() {
        let mut rng = ChaCha8Rng::seed_from_u64(51);
        for _ in 0..50 {
            let v = random_unit::<9>(&mut rng);
            let f = geo().line_eigen(&v).unwrap();
            assert!((geo().combination(&v) * f - f).amax() <= 1e-12);
            assert!((f.transpose() * f - SMatrix::<f64, 8, 8>::identity()).amax() < 1e-13);
        }
        assert!(matches!(geo().line_eigen(&[0.5; 9]), Err(Error::NotUnit { .. })));
    }

    #[test]
    fn orientation_is_continuous_across_the_equator() {
        // both halves are invertible away from the poles, so both determinants must be
        // positive for the chosen orientation
        let mut rng = ChaCha8Rng::seed_from_u64(52);
        for _ in 0..50 {
            let mut v = random_unit::<9>(&mut rng);
            v[8] *= 1e-3;
            let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            let v = v.map(|x| x / n);
            let f = geo().line_eigen(&v).unwrap();
            assert!(f.fixed_view::<8, 8>(0, 0).determinant() > 0.0);
            assert!(f.fixed_view::<8, 8>(8, 0).determinant() > 0.0);
        }
    }

    #[test]
    fn broken_system_is_rejected() {
        let bad = HopfGeometry::new(&spin9_system().with_flipped_entry(2, 0, 10)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        let v = random_unit::<9>(&mut rng);
        assert!(matches!(bad.line_eigen(&v), Err(Error::EigenspaceDimension { .. })));
    }

    #[test]
    fn slope_spans() {
        let f = line_span(&Slope::Finite(Octonion::zero()), LineFamily::Left);
        assert!((f - Frame::from_fn(|i, j| (i == j) as u8 as f64)).amax() < 1e-15);
        let f = line_span(&Slope::Infinity, LineFamily::Right);
        assert!((f - Frame::from_fn(|i, j| (i == j + 8) as u8 as f64)).amax() < 1e-15);
        let i = Slope::Finite(Octonion::basis(1));
        let l = line_span(&i, LineFamily::Left);
        let r = line_span(&i, LineFamily::Right);
        let stacked = DMatrix::from_fn(16, 16, |a, b| if b < 8 { l[(a, b)] } else { r[(a, b - 8)] });
        // i x = x i exactly on span{1, i}, so the two lines share a 2-plane
        assert_eq!(crate::linalg::rank_f64(&stacked, 1e-10), 14);
        let as_dyn = |f: Frame| DMatrix::from_fn(16, 8, |a, b| f[(a, b)]);
        assert!(subspace_distance(&as_dyn(l), &as_dyn(r)) > 0.5);
    }

    #[test]
    fn projection_basics() {
        let mut x = [0.0; 16];
        x[0] = 1.0;
        assert_eq!(geo().hopf_project(&x).unwrap(), e9(1.0));
        assert!(matches!(geo().hopf_project(&[0.0; 16]), Err(Error::ZeroVector(_))));
        let mut rng = ChaCha8Rng::seed_from_u64(54);
        for _ in 0..100 {
            let p: [f64; 16] = std::array::from_fn(|_| rng.random_range(-2.0..2.0));
            let v = geo().hopf_project(&p).unwrap();
            let n = v.iter().map(|a| a * a).sum::<f64>().sqrt();
            assert!((n - 1.0).abs() <= 1e-12);
            let scaled = p.map(|a| a * 3.5);
            let w = geo().hopf_project(&scaled).unwrap();
            assert!(v.iter().zip(&w).all(|(a, b)| (a - b).abs() < 1e-14));
        }
    }

    #[test]
    fn frame_reconstructs_the_point() {
        let mut rng = ChaCha8Rng::seed_from_u64(55);
        for _ in 0..100 {
            let p = random_unit::<16>(&mut rng);
            let f = geo().hopf_frame(&p).unwrap();
            assert!(f.reconstruction_residual <= 1e-12);
            assert!(f.orthonormality_residual <= 1e-13);
            assert!(f.lambda_norm_residual <= 1e-12);
            assert_eq!(f.complement.ncols(), 7);
        }
    }

    #[test]
    fn vertical_split() {
        let mut p = [0.0; 16];
        p[0] = 1.0;
        let mut x = [0.0; 16];
        x[1] = 1.0;
        let (vert, vb) = geo().vertical_projection(&x, &p).unwrap();
        assert!((vert - Vec16::from_column_slice(&x)).amax() < 1e-15);
        assert!(vb.amax() < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(56);
        let p = random_unit::<16>(&mut rng);
        let i3p = geo().generator(2) * Vec16::from_column_slice(&p);
        let (vert, _) = geo().vertical_projection(i3p.as_slice(), &p).unwrap();
        assert!(vert.amax() < 1e-14);
        // idempotent
        let x: [f64; 16] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        let (v1, _) = geo().vertical_projection(&x, &p).unwrap();
        let (v2, _) = geo().vertical_projection(v1.as_slice(), &p).unwrap();
        assert!((v1 - v2).amax() < 1e-14);
    }

    #[test]
    fn theorem_a_chain() {
        let mut rng = ChaCha8Rng::seed_from_u64(57);
        for _ in 0..20 {
            let p = random_unit::<16>(&mut rng);
            let x: [f64; 16] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
            assert!(geo().theorem_a_check(&p, &x).unwrap().max <= 1e-10);
        }
        let p = random_unit::<16>(&mut rng);
        assert_eq!(geo().theorem_a_check(&p, &[0.0; 16]).unwrap().max, 0.0);
        // horizontal X: I_a X is not tangent for some a
        let h = geo().generator(4) * Vec16::from_column_slice(&p);
        assert!(geo().theorem_a_residuals(&p, h.as_slice()).unwrap().tangency > 1e-3);
    }

    #[test]
    fn family_verdict_is_right() {
        let r = geo().family_consistency_check(200, 58).unwrap();
        assert_eq!(r.verdict, Some(LineFamily::Right));
        assert!(r.max_right_distance <= 1e-10);
        assert!(r.min_mismatch_distance > 1e-3);
        assert_eq!(eigen_family().unwrap(), LineFamily::Right);
        // poles: both families coincide
        for s in [1.0, -1.0] {
            let (dl, dr) = geo().family_distances(&e9(s)).unwrap();
            assert!(dl < 1e-12 && dr < 1e-12);
        }
    }

    #[test]
    fn printed_frame_table() {
        let sys = spin9_system();
        let table = [
            "y1 y2 y3 y4 y5 y6 y7 y8 x1 x2 x3 x4 x5 x6 x7 x8",
            "y2 -y1 -y4 y3 -y6 y5 y8 -y7 -x2 x1 x4 -x3 x6 -x5 -x8 x7",
            "y3 y4 -y1 -y2 -y7 -y8 y5 y6 -x3 -x4 x1 x2 x7 x8 -x5 -x6",
            "y4 -y3 y2 -y1 -y8 y7 -y6 y5 -x4 x3 -x2 x1 x8 -x7 x6 -x5",
            "y5 y6 y7 y8 -y1 -y2 -y3 -y4 -x5 -x6 -x7 -x8 x1 x2 x3 x4",
            "y6 -y5 y8 -y7 y2 -y1 y4 -y3 -x6 x5 -x8 x7 -x2 x1 -x4 x3",
            "y7 -y8 -y5 y6 y3 -y4 -y1 y2 -x7 x8 x5 -x6 -x3 x4 x1 -x2",
            "y8 y7 -y6 -y5 y4 y3 -y2 -y1 -x8 -x7 x6 x5 -x4 -x3 x2 x1",
            "x1 x2 x3 x4 x5 x6 x7 x8 -y1 -y2 -y3 -y4 -y5 -y6 -y7 -y8",
        ];
        for (a, row) in table.iter().enumerate() {
            assert_eq!(frame_symbols(&sys, a).join(" "), *row, "I{}B", a + 1);
        }
    }

    #[test]
    fn lambda_formulas() {
        let mut rng = ChaCha8Rng::seed_from_u64(59);
        for _ in 0..100 {
            let p = random_unit::<16>(&mut rng);
            let lam = geo().hopf_project(&p).unwrap();
            let (x, y) = (&p[..8], &p[8..]);
            let xy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
            let x2: f64 = x.iter().map(|a| a * a).sum();
            let y2: f64 = y.iter().map(|a| a * a).sum();
            assert!((lam[0] - 2.0 * xy).abs() <= 1e-12);
            assert!((lam[8] - (x2 - y2)).abs() <= 1e-12);
        }
        assert_eq!(lambda_sign(100, 60).0, Some(1));
        assert_eq!(i9_sign_on_infinity_fiber(), -1);
    }
}
