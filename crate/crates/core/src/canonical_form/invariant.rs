//! Exact invariant k-forms of a Lie algebra spanned by integer matrices.

use std::collections::{HashMap, HashSet, VecDeque};

use nalgebra::DMatrix;
use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exterior::{replace_sign, ExteriorForm, MultiIndex, MAX_DIM};
use crate::linalg::RationalEchelon;
use crate::scalar::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SolveMethod {
    /// One unknown per multi-index.
    Direct,
    /// Unknowns folded by the finite group the generators generate when they are signed
    /// permutations squaring to -Id.
    Orbits,
}

#[derive(Clone, Debug, Serialize)]
pub struct SolveStats {
    pub method: SolveMethod,
    pub unknowns: usize,
    pub dead_orbits: usize,
    pub equations: usize,
    pub rank: usize,
    pub nullspace_dim: usize,
    pub group_order: Option<usize>,
}

/// Row `i` of the matrix has its single nonzero entry `sign[i]` in column `image[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignedPermutation {
    image: Vec<u8>,
    sign: Vec<i8>,
}

impl SignedPermutation {
    pub fn from_matrix(m: &DMatrix<i64>) -> Option<Self> {
        let n = m.nrows();
        if m.ncols() != n || n > MAX_DIM {
            return None;
        }
        let mut image = Vec::with_capacity(n);
        let mut sign = Vec::with_capacity(n);
        let mut seen = 0u32;
        for i in 0..n {
            let nz: Vec<usize> = (0..n).filter(|&j| m[(i, j)] != 0).collect();
            if nz.len() != 1 || m[(i, nz[0])].abs() != 1 || seen >> nz[0] & 1 == 1 {
                return None;
            }
            seen |= 1 << nz[0];
            image.push(nz[0] as u8);
            sign.push(m[(i, nz[0])] as i8);
        }
        Some(SignedPermutation { image, sign })
    }

    pub fn identity(n: usize) -> Self {
        SignedPermutation { image: (0..n as u8).collect(), sign: vec![1; n] }
    }

    /// Matrix product `self * other`.
    pub fn compose(&self, other: &Self) -> Self {
        let image = self.image.iter().map(|&a| other.image[a as usize]).collect();
        let sign = self.image.iter().zip(&self.sign).map(|(&a, &s)| s * other.sign[a as usize]).collect();
        SignedPermutation { image, sign }
    }

    /// `M^* dx^I = sign * dx^{I'}`.
    pub fn act(&self, mask: u16) -> (u16, i8) {
        let mut seq = [0u8; MAX_DIM];
        let mut k = 0;
        let mut s = 1i8;
        let mut out = 0u16;
        let mut m = mask;
        while m != 0 {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            seq[k] = self.image[i];
            s *= self.sign[i];
            out |= 1 << self.image[i];
            k += 1;
        }
        let mut inversions = 0;
        for a in 0..k {
            for b in a + 1..k {
                if seq[a] > seq[b] {
                    inversions += 1;
                }
            }
        }
        (out, if inversions % 2 == 0 { s } else { -s })
    }
}

/// Order of the group generated by `gens`; `None` once it exceeds `cap`.
pub fn group_order(gens: &[SignedPermutation], cap: usize) -> Option<usize> {
    let n = gens.first().map_or(0, |g| g.image.len());
    let id = SignedPermutation::identity(n);
    let mut seen: HashSet<SignedPermutation> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(g) = queue.pop_front() {
        for h in gens {
            let p = g.compose(h);
            if seen.insert(p.clone()) {
                if seen.len() > cap {
                    return None;
                }
                queue.push_back(p);
            }
        }
    }
    Some(seen.len())
}

/// Orbits of k-subsets under `gens` with the sign each member carries in an invariant
/// vector. Orbits where the signs are inconsistent force their coefficients to zero.
fn fold_orbits(n: usize, k: usize, gens: &[SignedPermutation]) -> (Vec<Vec<(u16, i8)>>, usize) {
    let mut assigned: HashMap<u16, i8> = HashMap::new();
    let mut live = Vec::new();
    let mut dead = 0;
    for start in MultiIndex::all(n, k) {
        let start = start.mask();
        if assigned.contains_key(&start) {
            continue;
        }
        assigned.insert(start, 1);
        let mut members = vec![(start, 1i8)];
        let mut consistent = true;
        let mut head = 0;
        while head < members.len() {
            let (mask, s) = members[head];
            head += 1;
            for g in gens {
                // invariance: c_{g(I)} = sign * c_I
                let (img, t) = g.act(mask);
                let want = s * t;
                match assigned.get(&img) {
                    Some(&have) => consistent &= have == want,
                    None => {
                        assigned.insert(img, want);
                        members.push((img, want));
                    }
                }
            }
        }
        if consistent {
            live.push(members);
        } else {
            dead += 1;
        }
    }
    (live, dead)
}

fn normalize_row(mut row: Vec<(usize, i64)>) -> Option<Vec<(usize, i64)>> {
    row.sort_unstable_by_key(|e| e.0);
    let mut merged: Vec<(usize, i64)> = Vec::with_capacity(row.len());
    for (c, v) in row {
        match merged.last_mut() {
            Some(last) if last.0 == c => last.1 += v,
            _ => merged.push((c, v)),
        }
    }
    merged.retain(|e| e.1 != 0);
    let first = merged.first()?.1;
    let g = merged.iter().fold(0i64, |g, e| g.gcd(&e.1)) * first.signum();
    for e in merged.iter_mut() {
        e.1 /= g;
    }
    Some(merged)
}

/// Basis of `{a in Λ^k(R^n) : S . a = 0 for every S in lie}`.
///
/// With `SolveMethod::Orbits` every generator must be a signed permutation with
/// `S^2 = -Id`, so that `S = exp(pi/2 S)` lies in the connected group; invariants of
/// the Lie algebra are then exactly the invariants inside the orbit-folded subspace.
pub fn invariant_forms(
    n: usize,
    k: usize,
    lie: &[DMatrix<i64>],
    method: SolveMethod,
) -> Result<(Vec<ExteriorForm<Rational>>, SolveStats)> {
    if n > MAX_DIM || k > n || lie.iter().any(|s| s.nrows() != n || s.ncols() != n) {
        return Err(Error::Dimension(format!("{} generators on R^{n} with k = {k}", lie.len())));
    }
    let (orbits, dead, order) = match method {
        SolveMethod::Direct => (MultiIndex::all(n, k).iter().map(|m| vec![(m.mask(), 1)]).collect(), 0, None),
        SolveMethod::Orbits => {
            let mut perms = Vec::with_capacity(lie.len());
            for s in lie {
                let sq = s * s;
                let p = SignedPermutation::from_matrix(s);
                match p {
                    Some(p) if sq == -DMatrix::<i64>::identity(n, n) => perms.push(p),
                    _ => return Err(Error::Dimension("orbit folding needs signed permutations with S^2 = -Id".into())),
                }
            }
            let (live, dead) = fold_orbits(n, k, &perms);
            (live, dead, group_order(&perms, 1 << 16))
        }
    };
    let sparse: Vec<Vec<Vec<(usize, i64)>>> = lie
        .iter()
        .map(|s| (0..n).map(|i| (0..n).filter(|&j| s[(i, j)] != 0).map(|j| (j, s[(i, j)])).collect()).collect())
        .collect();

    let mut seen: HashSet<Vec<(usize, i64)>> = HashSet::new();
    let mut rows: Vec<Vec<(usize, i64)>> = Vec::new();
    for rows_s in &sparse {
        // coefficient of dx^J in S . (sum_o c_o v_o), as a row over the orbits
        let mut by_target: HashMap<u16, Vec<(usize, i64)>> = HashMap::new();
        for (o, members) in orbits.iter().enumerate() {
            for &(mask, sign) in members {
                let mut m = mask;
                while m != 0 {
                    let i = m.trailing_zeros() as usize;
                    m &= m - 1;
                    for &(c, w) in &rows_s[i] {
                        let (target, v) = if c == i {
                            (mask, w)
                        } else if mask >> c & 1 == 0 {
                            (mask & !(1 << i) | 1 << c, w * replace_sign(mask, i, c) as i64)
                        } else {
                            continue;
                        };
                        by_target.entry(target).or_default().push((o, v * sign as i64));
                    }
                }
            }
        }
        let mut targets: Vec<u16> = by_target.keys().copied().collect();
        targets.sort_unstable();
        for t in targets {
            if let Some(r) = normalize_row(by_target.remove(&t).unwrap_or_default()) {
                if seen.insert(r.clone()) {
                    rows.push(r);
                }
            }
        }
    }

    let mut ech = RationalEchelon::new(orbits.len());
    for r in &rows {
        ech.insert(r.iter().map(|&(c, v)| (c, Rational::from_integer(v.into()))).collect());
    }
    let mut forms = Vec::new();
    for v in ech.nullspace() {
        let terms = orbits
            .iter()
            .zip(&v)
            .flat_map(|(members, c)| members.iter().map(move |&(mask, s)| (MultiIndex::from_mask(mask), if s > 0 { c.clone() } else { -c.clone() })));
        forms.push(ExteriorForm::from_terms(n, k, terms)?);
    }
    let stats = SolveStats {
        method,
        unknowns: orbits.len(),
        dead_orbits: dead,
        equations: rows.len(),
        rank: ech.rank(),
        nullspace_dim: forms.len(),
        group_order: order,
    };
    Ok((forms, stats))
}
