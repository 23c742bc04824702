//! Berger's average over octonionic lines of the pulled-back volume forms.
//!
//! The line of `v = (u, r)` is `{(x, x m)}` with `m = u / (1 + r)`; writing its oriented
//! orthonormal frame as `[Id; R_m] P` shows that the coefficient of `dx_A ^ dy_K` is
//! `det(P) sgn(A) det(R_m[K, A^c])`, with `det P = ((1 + r) / 2)^4`. Near `r = -1` the
//! other chart `{(y w, y)}`, `w = conj(u) / (1 - r)` is used instead.

use nalgebra::SMatrix;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exterior::fast::{split_sign, Minors8};
use crate::exterior::{cosine_similarity, ExteriorForm, MultiIndex, PolyScalar};
use crate::hopf::{random_unit, HopfGeometry};
use crate::octonion::{mult_matrix, Octonion, Side};
use crate::scalar::{Rational, Scalar};

pub const MIN_SAMPLES: usize = 10_000;
const CHUNK: usize = 4096;
const BATCH: usize = 16;

/// `Phi_berger(e_1, .., e_8) = E[(1 + r)^4] / 16`.
pub fn berger_l0_coefficient() -> Rational {
    let one_plus_r = &PolyScalar::constant(Rational::one()) + &PolyScalar::var(8);
    one_plus_r.pow(4).sphere_mean() / Rational::from_i64(16)
}

fn poly_det(m: &[Vec<PolyScalar>]) -> PolyScalar {
    match m.len() {
        0 => PolyScalar::constant(Rational::one()),
        1 => m[0][0].clone(),
        k => {
            let mut acc = PolyScalar::zero();
            for j in 0..k {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<PolyScalar>> =
                    m[1..].iter().map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, x)| x.clone()).collect()).collect();
                let term = &m[0][j] * &poly_det(&minor);
                acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            acc
        }
    }
}

/// `R_u` (or `R_conj(u)`) with entries linear in the variables `u_1..u_8`.
fn symbolic_right(conjugate: bool) -> Vec<Vec<PolyScalar>> {
    let mut m = vec![vec![PolyScalar::zero(); 8]; 8];
    for a in 0..8 {
        let ra = mult_matrix::<Rational>(Side::Right, &Octonion::basis(a));
        let ua = if conjugate && a > 0 { -&PolyScalar::var(a) } else { PolyScalar::var(a) };
        for i in 0..8 {
            for j in 0..8 {
                if !ra[(i, j)].is_zero() {
                    m[i][j] = &m[i][j] + &ua.scale(&ra[(i, j)]);
                }
            }
        }
    }
    m
}

fn submatrix(m: &[Vec<PolyScalar>], rows: u16, cols: u16) -> Vec<Vec<PolyScalar>> {
    let ri = MultiIndex::from_mask(rows).indices();
    let ci = MultiIndex::from_mask(cols).indices();
    ri.iter().map(|&i| ci.iter().map(|&j| m[i][j].clone()).collect()).collect()
}

/// The Berger-normalized form, integrated exactly with sphere moments.
pub fn berger_phi_exact() -> Result<ExteriorForm<Rational>> {
    let ru = symbolic_right(false);
    let rbar = symbolic_right(true);
    let one = PolyScalar::constant(Rational::one());
    let r = PolyScalar::var(8);
    let plus = &one + &r;
    let minus = &one - &r;
    let sixteenth = Rational::new(1.into(), 16.into());
    let mut terms = Vec::new();
    for idx in MultiIndex::all(16, 8) {
        let a = idx.mask() & 0xff;
        let k = idx.mask() >> 8;
        let (nk, na) = (k.count_ones(), a.count_ones());
        let integrand = if nk <= 4 {
            let s = split_sign(a, 8);
            (&plus.pow(4 - nk) * &poly_det(&submatrix(&ru, k, !a & 0xff))).scale(&Rational::from_i64(s as i64))
        } else {
            let kc = !k & 0xff;
            let s = split_sign(kc, 8);
            (&minus.pow(4 - na) * &poly_det(&submatrix(&rbar, a, kc))).scale(&Rational::from_i64(s as i64))
        };
        let c = integrand.sphere_mean() * &sixteenth;
        if !c.is_zero() {
            terms.push((idx, c));
        }
    }
    ExteriorForm::from_terms(16, 8, terms)
}

#[derive(Clone, Debug, PartialEq)]
pub struct BergerEstimate {
    pub samples: usize,
    pub seed: u64,
    /// Dense over `MultiIndex::all(16, 8)`, Berger normalization.
    pub mean: Vec<f64>,
    pub std_err: Vec<f64>,
}

impl BergerEstimate {
    pub fn form(&self) -> ExteriorForm<f64> {
        ExteriorForm::from_dense(16, 8, &self.mean).expect("dense length is C(16, 8)")
    }

    pub fn position(idx: &MultiIndex) -> usize {
        idx.lex_rank(16)
    }

    pub fn coefficient(&self, idx: &MultiIndex) -> (f64, f64) {
        let p = Self::position(idx);
        (self.mean[p], self.std_err[p])
    }

    pub fn cosine_similarity(&self, exact: &ExteriorForm<Rational>) -> f64 {
        cosine_similarity(&self.mean, &exact.to_f64().to_dense())
    }

    pub fn max_std_err(&self) -> f64 {
        self.std_err.iter().fold(0.0, |m, &x| m.max(x))
    }
}

/// Per multi-index in lex order, the minor slot and sign each chart reads.
struct Layout {
    slots1: Vec<u32>,
    signs1: Vec<f64>,
    slots2: Vec<u32>,
    signs2: Vec<f64>,
}

impl Layout {
    fn new() -> Self {
        let entries = MultiIndex::all(16, 8)
            .iter()
            .map(|m| {
                let a = (m.mask() & 0xff) as u8;
                let k = (m.mask() >> 8) as u8;
                (a, k, split_sign(a as u16, 8), split_sign(!k as u16 & 0xff, 8))
            })
            .collect::<Vec<_>>();
        let plan = Minors8::plan();
        Layout {
            slots1: entries.iter().map(|&(a, k, _, _)| plan.slot(k as u16, !a as u16 & 0xff) as u32).collect(),
            signs1: entries.iter().map(|e| e.2).collect(),
            slots2: entries.iter().map(|&(a, k, _, _)| plan.slot(a as u16, !k as u16 & 0xff) as u32).collect(),
            signs2: entries.iter().map(|e| e.3).collect(),
        }
    }
}

fn chunk_sums(geo: &HopfGeometry, layout: &Layout, seed: u64, chunk: usize, count: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk as u64);
    let n = layout.slots1.len();
    let mut sum = vec![0.0; n];
    let mut sq = vec![0.0; n];
    let plan = Minors8::plan();
    let mut table = vec![0.0; plan.len()];
    let mut sample = vec![0.0; n];
    for _ in 0..count {
        let v = random_unit::<9>(&mut rng);
        let frame = geo.line_eigen(&v)?;
        let p: SMatrix<f64, 8, 8> = frame.fixed_view::<8, 8>(0, 0).into_owned();
        let q: SMatrix<f64, 8, 8> = frame.fixed_view::<8, 8>(8, 0).into_owned();
        let (dp, dq) = (p.determinant(), q.determinant());
        let first_chart = dp.abs() >= dq.abs();
        let (w, base) = if first_chart {
            (q * p.try_inverse().ok_or(Error::EigenspaceDimension { dim: 0 })?, dp)
        } else {
            (p * q.try_inverse().ok_or(Error::EigenspaceDimension { dim: 0 })?, dq)
        };
        let flat: [f64; 64] = std::array::from_fn(|t| w[(t / 8, t % 8)]);
        plan.fill(&flat, &mut table);
        let (slots, signs) = if first_chart { (&layout.slots1, &layout.signs1) } else { (&layout.slots2, &layout.signs2) };
        for ((c, &slot), &sign) in sample.iter_mut().zip(slots).zip(signs) {
            *c = base * sign * table[slot as usize];
        }
        for ((s, q), &c) in sum.iter_mut().zip(sq.iter_mut()).zip(&sample) {
            *s += c;
            *q += c * c;
        }
    }
    Ok((sum, sq))
}

pub fn berger_phi_mc(samples: usize, seed: u64) -> Result<BergerEstimate> {
    berger_phi_mc_with(HopfGeometry::standard(), samples, seed)
}

/// Sample `v` uniformly on S^8, take the oriented frame of its eigen-line and average the
/// wedge of the dual covectors. Chunk `c` draws from stream `c` of the seeded generator
/// and chunks are merged in order, so the output depends only on `(samples, seed)`.
pub fn berger_phi_mc_with(geo: &HopfGeometry, samples: usize, seed: u64) -> Result<BergerEstimate> {
    if samples < MIN_SAMPLES {
        return Err(Error::TooFewSamples { got: samples, min: MIN_SAMPLES });
    }
    let layout = Layout::new();
    let n = layout.slots1.len();
    let chunks = samples.div_ceil(CHUNK);
    let mut sum = vec![0.0; n];
    let mut sq = vec![0.0; n];
    for start in (0..chunks).step_by(BATCH) {
        let end = (start + BATCH).min(chunks);
        let parts: Vec<(Vec<f64>, Vec<f64>)> = (start..end)
            .into_par_iter()
            .map(|c| chunk_sums(geo, &layout, seed, c, CHUNK.min(samples - c * CHUNK)))
            .collect::<Result<_>>()?;
        for (s, q) in parts {
            for t in 0..n {
                sum[t] += s[t];
                sq[t] += q[t];
            }
        }
    }
    let nf = samples as f64;
    let mean: Vec<f64> = sum.iter().map(|s| s / nf).collect();
    let std_err = sq
        .iter()
        .zip(&mean)
        .map(|(q, m)| ((q - nf * m * m).max(0.0) / (nf - 1.0) / nf).sqrt())
        .collect();
    Ok(BergerEstimate { samples, seed, mean, std_err })
}

/// Wedge of the rows of the frame, straight from determinants.
#[cfg(test)]
fn frame_form(frame: &crate::hopf::Frame) -> Vec<f64> {
    MultiIndex::all(16, 8)
        .iter()
        .map(|m| {
            let rows = m.indices();
            crate::linalg::det(&nalgebra::DMatrix::from_fn(8, 8, |i, j| frame[(rows[i], j)]))
        })
        .collect()
}
