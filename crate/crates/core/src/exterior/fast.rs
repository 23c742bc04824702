//! Double-precision kernels for top-heavy computations on Λ^8(R^16): all minors of a
//! small matrix, and pullback of a sparse form by a dense matrix.

use std::sync::OnceLock;

use nalgebra::DMatrix;

use super::{binomial, ExteriorForm, MultiIndex};
use crate::error::{Error, Result};

/// Masks of `{0..n-1}` grouped by popcount.
pub fn masks_by_popcount(n: usize) -> Vec<Vec<u16>> {
    let mut out = vec![Vec::new(); n + 1];
    for m in 0..(1u32 << n) {
        out[m.count_ones() as usize].push(m as u16);
    }
    out
}

fn masks8() -> &'static [Vec<u16>] {
    static M: OnceLock<Vec<Vec<u16>>> = OnceLock::new();
    M.get_or_init(|| masks_by_popcount(8))
}

fn masks16() -> &'static [Vec<u16>] {
    static M: OnceLock<Vec<Vec<u16>>> = OnceLock::new();
    M.get_or_init(|| masks_by_popcount(16))
}

/// Sign of the sequence `(X ascending, complement ascending)` inside `{0..n-1}`.
pub fn split_sign(x: u16, n: usize) -> f64 {
    let comp = !x & ((1u32 << n) - 1) as u16;
    let mut inv = 0u32;
    let mut m = x;
    while m != 0 {
        let i = m.trailing_zeros();
        m &= m - 1;
        inv += (comp & ((1u32 << i) - 1) as u16).count_ones();
    }
    if inv % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Packed storage for all minors of an 8x8 matrix: minors of size `k` sit in a
/// `C(8,k) x C(8,k)` block, indexed by the ranks of the row and column masks.
pub struct Minors8 {
    rank: [u16; 256],
    offset: [usize; 9],
    width: [usize; 9],
    /// Per column mask, for each member column in order: the column, the rank of the
    /// mask without it, and the cofactor sign.
    cols: [[u8; 8]; 256],
    subs: [[u16; 8]; 256],
    signs: [[f64; 8]; 256],
}

impl Minors8 {
    pub fn plan() -> &'static Minors8 {
        static P: OnceLock<Minors8> = OnceLock::new();
        P.get_or_init(|| {
            let masks = masks8();
            let mut rank = [0u16; 256];
            for level in masks {
                for (i, &m) in level.iter().enumerate() {
                    rank[m as usize] = i as u16;
                }
            }
            let width: [usize; 9] = std::array::from_fn(|k| binomial(8, k));
            let mut offset = [0usize; 9];
            for k in 1..9 {
                offset[k] = offset[k - 1] + width[k - 1] * width[k - 1];
            }
            let mut cols = [[0u8; 8]; 256];
            let mut subs = [[0u16; 8]; 256];
            let mut signs = [[0.0; 8]; 256];
            for c in 1..256u16 {
                let k = c.count_ones() as usize;
                for (pos, j) in MultiIndex::from_mask(c).iter().enumerate() {
                    cols[c as usize][pos] = j as u8;
                    subs[c as usize][pos] = rank[(c ^ (1 << j)) as usize];
                    signs[c as usize][pos] = if (k - 1 + pos) % 2 == 0 { 1.0 } else { -1.0 };
                }
            }
            Minors8 { rank, offset, width, cols, subs, signs }
        })
    }

    pub fn len(&self) -> usize {
        self.offset[8] + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Slot of `det(m[rows, cols])`; the masks must have equal size.
    #[inline]
    pub fn slot(&self, rows: u16, cols: u16) -> usize {
        let k = rows.count_ones() as usize;
        self.offset[k] + self.rank[rows as usize] as usize * self.width[k] + self.rank[cols as usize] as usize
    }

    /// Fills `table` (length `len()`) with every minor of the row-major matrix `m`,
    /// expanding along the last selected row.
    pub fn fill(&self, m: &[f64; 64], table: &mut [f64]) {
        let masks = masks8();
        table[0] = 1.0;
        for k in 1..=8 {
            let (w, wp) = (self.width[k], self.width[k - 1]);
            let (off, offp) = (self.offset[k], self.offset[k - 1]);
            let (done, rest_of_table) = table.split_at_mut(off);
            let level = &mut rest_of_table[..w * w];
            for (ri, &r) in masks[k].iter().enumerate() {
                let last = 15 - r.leading_zeros() as usize;
                let rest = self.rank[(r ^ (1 << last)) as usize] as usize;
                let row = &m[last * 8..last * 8 + 8];
                let prev = &done[offp + rest * wp..offp + rest * wp + wp];
                for (out, &c) in level[ri * w..ri * w + w].iter_mut().zip(&masks[k]) {
                    let c = c as usize;
                    let (cs, ss, gs) = (&self.cols[c], &self.subs[c], &self.signs[c]);
                    let mut acc = 0.0;
                    for p in 0..k {
                        acc += gs[p] * row[cs[p] as usize] * prev[ss[p] as usize];
                    }
                    *out = acc;
                }
            }
        }
    }

    pub fn minors(&self, m: &[f64; 64]) -> Vec<f64> {
        let mut t = vec![0.0; self.len()];
        self.fill(m, &mut t);
        t
    }
}

/// `G^* phi` as a dense vector over `MultiIndex::all(16, 8)`.
///
/// Block-diagonal `G` (exactly zero off-diagonal 8x8 blocks) goes through the compound
/// matrices of the two blocks; everything else through a Laplace expansion that shares
/// work between multi-indices with a common prefix.
pub fn pullback_dense(phi: &ExteriorForm<f64>, g: &DMatrix<f64>) -> Result<Vec<f64>> {
    if phi.dim() != 16 || phi.degree() != 8 || g.nrows() != 16 || g.ncols() != 16 {
        return Err(Error::Dimension("fast pullback is for 8-forms on R^16 and 16x16 matrices".into()));
    }
    let by_mask = if is_block_diagonal(g) { block_pullback(phi, g) } else { prefix_pullback(phi, g) };
    Ok(MultiIndex::all(16, 8).iter().map(|m| by_mask[m.mask() as usize]).collect())
}

fn is_block_diagonal(g: &DMatrix<f64>) -> bool {
    (0..8).all(|i| (8..16).all(|j| g[(i, j)] == 0.0 && g[(j, i)] == 0.0))
}

fn block_pullback(phi: &ExteriorForm<f64>, g: &DMatrix<f64>) -> Vec<f64> {
    let a: [f64; 64] = std::array::from_fn(|t| g[(t / 8, t % 8)]);
    let d: [f64; 64] = std::array::from_fn(|t| g[(8 + t / 8, 8 + t % 8)]);
    let plan = Minors8::plan();
    let ma = plan.minors(&a);
    let md = plan.minors(&d);
    let masks = masks8();
    let mut out = vec![0.0; 1 << 16];
    for (idx, c) in phi.terms() {
        let p = idx.mask() & 0xff;
        let k = idx.mask() >> 8;
        for &p2 in &masks[p.count_ones() as usize] {
            let x = ma[plan.slot(p, p2)];
            if x == 0.0 {
                continue;
            }
            let cx = c * x;
            for &k2 in &masks[k.count_ones() as usize] {
                out[(k2 as usize) << 8 | p2 as usize] += cx * md[plan.slot(k, k2)];
            }
        }
    }
    out
}

fn prefix_pullback(phi: &ExteriorForm<f64>, g: &DMatrix<f64>) -> Vec<f64> {
    let masks = masks16();
    let rows: Vec<[f64; 16]> = (0..16).map(|i| std::array::from_fn(|j| g[(i, j)])).collect();
    let mut levels: Vec<Vec<f64>> = vec![vec![0.0; 1 << 16]; 9];
    levels[0][0] = 1.0;
    let mut prefix: Vec<usize> = Vec::new();
    let mut out = vec![0.0; 1 << 16];
    for (idx, c) in phi.terms() {
        let seq = idx.indices();
        let common = prefix.iter().zip(&seq).take_while(|(a, b)| a == b).count();
        for l in common + 1..=8 {
            let row = &rows[seq[l - 1]];
            let (lo, hi) = levels.split_at_mut(l);
            let prev = &lo[l - 1];
            let cur = &mut hi[0];
            for &cm in &masks[l] {
                let mut acc = 0.0;
                let mut bits = cm;
                let mut pos = 0;
                while bits != 0 {
                    let j = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    let a = row[j];
                    if a != 0.0 {
                        let sub = prev[(cm ^ (1 << j)) as usize];
                        if (l - 1 + pos) % 2 == 0 {
                            acc += a * sub;
                        } else {
                            acc -= a * sub;
                        }
                    }
                    pos += 1;
                }
                cur[cm as usize] = acc;
            }
        }
        prefix = seq;
        let top = &levels[8];
        for &cm in &masks[8] {
            out[cm as usize] += c * top[cm as usize];
        }
    }
    out
}

pub fn dense_len() -> usize {
    binomial(16, 8)
}
