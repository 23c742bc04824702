//! Finite subgroups of the diagonal Sp(1) in Spin(9), their free action on S^15, and
//! mapping-torus data `(r, K, psi)`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::canonical_form::{finite_invariance, phi_l0};
use crate::error::{Error, Result};
use crate::linalg::{min_singular_value, orthogonality_residual};
use crate::octonion::Quaternion;
use crate::triality::rq_build;

pub const DEFAULT_CAP: usize = 2000;
/// Entries are rounded to this grid for hashing.
const HASH_GRID: f64 = 1e-6;
/// Closure and conjugation matches are re-verified at this tolerance.
const MATCH_TOL: f64 = 1e-8;
/// An action is called free when every non-identity element stays this far from 1.
pub const FREE_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupKind {
    Cyclic,
    BinaryDihedral,
    BinaryTetrahedral,
    BinaryOctahedral,
    BinaryIcosahedral,
}

impl FromStr for GroupKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "cyclic" => GroupKind::Cyclic,
            "binary_dihedral" | "dihedral" => GroupKind::BinaryDihedral,
            "binary_tetrahedral" | "tetrahedral" => GroupKind::BinaryTetrahedral,
            "binary_octahedral" | "octahedral" => GroupKind::BinaryOctahedral,
            "binary_icosahedral" | "icosahedral" => GroupKind::BinaryIcosahedral,
            other => return Err(Error::InvalidPreset(format!("unknown group kind {other:?}"))),
        })
    }
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GroupKind::Cyclic => "cyclic",
            GroupKind::BinaryDihedral => "binary_dihedral",
            GroupKind::BinaryTetrahedral => "binary_tetrahedral",
            GroupKind::BinaryOctahedral => "binary_octahedral",
            GroupKind::BinaryIcosahedral => "binary_icosahedral",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GroupPreset {
    pub kind: GroupKind,
    /// Only meaningful for the cyclic and dihedral families.
    pub n: usize,
}

/// A relation `lhs = rhs` between words; a word is a list of `(generator, power)`.
pub type Word = Vec<(usize, i32)>;

impl GroupPreset {
    pub fn new(kind: GroupKind, n: usize) -> Result<Self> {
        if matches!(kind, GroupKind::Cyclic | GroupKind::BinaryDihedral) && n == 0 {
            return Err(Error::InvalidPreset(format!("{kind} needs n >= 1")));
        }
        Ok(GroupPreset { kind, n })
    }

    pub fn all(n: usize) -> Result<Vec<GroupPreset>> {
        use GroupKind::*;
        [Cyclic, BinaryDihedral, BinaryTetrahedral, BinaryOctahedral, BinaryIcosahedral]
            .into_iter()
            .map(|k| GroupPreset::new(k, n))
            .collect()
    }

    pub fn expected_order(&self) -> usize {
        match self.kind {
            GroupKind::Cyclic => self.n,
            GroupKind::BinaryDihedral => 4 * self.n,
            GroupKind::BinaryTetrahedral => 24,
            GroupKind::BinaryOctahedral => 48,
            GroupKind::BinaryIcosahedral => 120,
        }
    }

    pub fn label(&self) -> String {
        match self.kind {
            GroupKind::Cyclic | GroupKind::BinaryDihedral => format!("{}({})", self.kind, self.n),
            _ => self.kind.to_string(),
        }
    }

    /// Named generators: `a` (cyclic), `a, b` (dihedral), `a, b, c` with `a = bc` otherwise.
    pub fn generators(&self) -> Vec<(&'static str, Quaternion<f64>)> {
        let pi = std::f64::consts::PI;
        let expi = |t: f64| Quaternion::new(t.cos(), t.sin(), 0.0, 0.0);
        let with_a = |b: Quaternion<f64>, c: Quaternion<f64>| vec![("a", &b * &c), ("b", b), ("c", c)];
        match self.kind {
            GroupKind::Cyclic => vec![("a", expi(2.0 * pi / self.n as f64))],
            GroupKind::BinaryDihedral => vec![("a", expi(pi / self.n as f64)), ("b", Quaternion::basis(2))],
            GroupKind::BinaryTetrahedral => with_a(Quaternion::new(0.5, 0.5, 0.5, 0.5), Quaternion::new(0.5, 0.5, 0.5, -0.5)),
            GroupKind::BinaryOctahedral => {
                let r = std::f64::consts::FRAC_1_SQRT_2;
                with_a(Quaternion::new(-0.5, -0.5, -0.5, -0.5), Quaternion::new(r, r, 0.0, 0.0))
            }
            GroupKind::BinaryIcosahedral => {
                let phi = (1.0 + 5f64.sqrt()) / 2.0;
                with_a(Quaternion::new(0.5, 0.5, 0.5, 0.5), Quaternion::new(phi / 2.0, 0.5 / phi, 0.5, 0.0))
            }
        }
    }

    /// Defining relations of the presentation, over the generators in `generators()`.
    pub fn relations(&self) -> Vec<(Word, Word)> {
        let n = self.n as i32;
        let abc: Word = vec![(0, 1), (1, 1), (2, 1)];
        let chain = |k: i32| vec![(vec![(0, 2)], vec![(1, 3)]), (vec![(1, 3)], vec![(2, k)]), (vec![(2, k)], abc.clone())];
        match self.kind {
            GroupKind::Cyclic => vec![(vec![(0, n)], vec![])],
            GroupKind::BinaryDihedral => vec![
                (vec![(0, 2 * n)], vec![]),
                (vec![(1, 2)], vec![(0, n)]),
                (vec![(1, -1), (0, 1), (1, 1)], vec![(0, -1)]),
            ],
            GroupKind::BinaryTetrahedral => chain(3),
            GroupKind::BinaryOctahedral => chain(4),
            GroupKind::BinaryIcosahedral => chain(5),
        }
    }
}

pub fn preset_generators(p: &GroupPreset) -> Vec<Quaternion<f64>> {
    p.generators().into_iter().map(|(_, q)| q).collect()
}

#[derive(Clone, Debug)]
pub struct FiniteGroup {
    pub elements: Vec<DMatrix<f64>>,
    /// Positions of the generators inside `elements`.
    pub generator_indices: Vec<usize>,
}

fn hash_key(m: &DMatrix<f64>) -> Vec<i64> {
    m.iter().map(|x| (x / HASH_GRID).round() as i64).collect()
}

struct Index {
    by_key: HashMap<Vec<i64>, usize>,
}

impl Index {
    fn of(elements: &[DMatrix<f64>]) -> Self {
        Index { by_key: elements.iter().enumerate().map(|(i, e)| (hash_key(e), i)).collect() }
    }

    fn find(&self, elements: &[DMatrix<f64>], m: &DMatrix<f64>) -> Option<usize> {
        if let Some(&i) = self.by_key.get(&hash_key(m)) {
            return Some(i);
        }
        // entries sitting on a rounding boundary hash differently
        elements.iter().position(|e| (e - m).amax() <= HASH_GRID)
    }
}

impl FiniteGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn trivial(n: usize) -> FiniteGroup {
        FiniteGroup { elements: vec![DMatrix::identity(n, n)], generator_indices: Vec::new() }
    }

    pub fn position(&self, m: &DMatrix<f64>, tol: f64) -> Option<usize> {
        self.elements.iter().position(|e| (e - m).amax() <= tol)
    }

    /// Products and inverses stay in the set, within `tol`.
    pub fn verify_closure(&self, tol: f64) -> bool {
        let index = Index::of(&self.elements);
        let has = |m: &DMatrix<f64>| index.find(&self.elements, m).is_some_and(|i| (&self.elements[i] - m).amax() <= tol);
        self.elements.iter().all(|g| has(&g.transpose()) && self.elements.iter().all(|h| has(&(g * h))))
    }
}

/// Breadth-first closure of `gens` under products.
pub fn enumerate_closure(gens: &[DMatrix<f64>], cap: usize) -> Result<FiniteGroup> {
    let n = gens.first().map_or(16, |g| g.nrows());
    for g in gens {
        if g.nrows() != n || g.ncols() != n {
            return Err(Error::Dimension("generators of different sizes".into()));
        }
        let residual = orthogonality_residual(g);
        if residual > 1e-10 {
            return Err(Error::NotOrthogonal { residual });
        }
    }
    let id = DMatrix::<f64>::identity(n, n);
    let mut index = Index { by_key: HashMap::from([(hash_key(&id), 0)]) };
    let mut elements = vec![id];
    let mut head = 0;
    while head < elements.len() {
        for g in gens {
            let p = &elements[head] * g;
            if index.find(&elements, &p).is_none() {
                if elements.len() >= cap {
                    return Err(Error::CapExceeded { cap });
                }
                index.by_key.insert(hash_key(&p), elements.len());
                elements.push(p);
            }
        }
        head += 1;
    }
    let generator_indices = gens.iter().map(|g| index.find(&elements, g).unwrap_or(0)).collect();
    let group = FiniteGroup { elements, generator_indices };
    if !group.verify_closure(MATCH_TOL) {
        return Err(Error::InvariantFailure { condition: "closure not verified at 1e-8", residual: MATCH_TOL });
    }
    Ok(group)
}

/// The image of a preset under `q -> R_q`.
pub fn preset_group(p: &GroupPreset, cap: usize) -> Result<FiniteGroup> {
    let gens: Vec<DMatrix<f64>> = preset_generators(p).iter().map(rq_build).collect::<Result<_>>()?;
    enumerate_closure(&gens, cap)
}

#[derive(Clone, Debug, Serialize)]
pub struct FreeCertificate {
    /// `min |lambda - 1|` over eigenvalues of non-identity elements; `None` for the trivial group.
    pub min_distance: Option<f64>,
    pub witness: Option<usize>,
    pub free: bool,
}

/// For an orthogonal (hence normal) `g`, `min |lambda - 1| = sigma_min(g - Id)`.
pub fn free_action_certificate(group: &FiniteGroup) -> FreeCertificate {
    let mut best: Option<(f64, usize)> = None;
    for (i, g) in group.elements.iter().enumerate() {
        let d = g - DMatrix::<f64>::identity(g.nrows(), g.ncols());
        if d.amax() <= MATCH_TOL {
            continue;
        }
        let s = min_singular_value(&d);
        if best.is_none_or(|(b, _)| s < b) {
            best = Some((s, i));
        }
    }
    FreeCertificate {
        min_distance: best.map(|b| b.0),
        witness: best.map(|b| b.1),
        free: best.is_none_or(|(b, _)| b > FREE_TOL),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NormalizerReport {
    pub normalizes: bool,
    /// `permutation[k] = j` when `psi g_k psi^-1 = g_j`.
    pub permutation: Vec<Option<usize>>,
}

pub fn normalizer_check(psi: &DMatrix<f64>, group: &FiniteGroup) -> NormalizerReport {
    let inv = psi.transpose();
    let index = Index::of(&group.elements);
    let permutation: Vec<Option<usize>> = group
        .elements
        .iter()
        .map(|g| {
            let c = psi * g * &inv;
            index.find(&group.elements, &c).filter(|&i| (&group.elements[i] - &c).amax() <= MATCH_TOL)
        })
        .collect();
    NormalizerReport { normalizes: permutation.iter().all(Option::is_some), permutation }
}

#[derive(Clone, Debug, Serialize)]
pub struct PresentationReport {
    /// Worst relation residual among unit quaternions.
    pub quaternion_residual: f64,
    /// Words read left to right as products of `R`-matrices.
    pub matrix_residual: f64,
    /// Words read right to left.
    pub matrix_reversed_residual: f64,
}

fn eval_word<T: Clone>(word: &Word, gens: &[T], inv: impl Fn(&T) -> T, mul: impl Fn(&T, &T) -> T, one: T, reversed: bool) -> T {
    let mut factors: Vec<T> = Vec::new();
    for &(g, p) in word {
        let base = if p < 0 { inv(&gens[g]) } else { gens[g].clone() };
        for _ in 0..p.unsigned_abs() {
            factors.push(base.clone());
        }
    }
    if reversed {
        factors.reverse();
    }
    factors.iter().fold(one, |acc, f| mul(&acc, f))
}

/// Checks the presentation on the quaternions and on their images, in both reading orders.
pub fn presentation_check(p: &GroupPreset) -> Result<PresentationReport> {
    let qs = preset_generators(p);
    let ms: Vec<DMatrix<f64>> = qs.iter().map(rq_build).collect::<Result<_>>()?;
    let mut report = PresentationReport { quaternion_residual: 0.0, matrix_residual: 0.0, matrix_reversed_residual: 0.0 };
    for (lhs, rhs) in p.relations() {
        let qe = |w: &Word| eval_word(w, &qs, |q| q.conj(), |a, b| a * b, Quaternion::one(), false);
        let d = &qe(&lhs) - &qe(&rhs);
        report.quaternion_residual = report.quaternion_residual.max(d.c.iter().fold(0.0, |m, x| m.max(x.abs())));
        for reversed in [false, true] {
            let me = |w: &Word| eval_word(w, &ms, |m| m.transpose(), |a, b| a * b, DMatrix::identity(16, 16), reversed);
            let r = (me(&lhs) - me(&rhs)).amax();
            let slot = if reversed { &mut report.matrix_reversed_residual } else { &mut report.matrix_residual };
            *slot = slot.max(r);
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct MappingTorusDescriptor {
    pub r: f64,
    pub group_order: usize,
    pub psi: DMatrix<f64>,
    pub phi_residual: f64,
    pub normalizer: NormalizerReport,
    pub certificate: FreeCertificate,
}

/// Validates `(r, K, psi)`: `psi` preserves the invariant form and normalizes `K`, and
/// `K` acts freely on S^15.
pub fn mapping_torus_validate(r: f64, group: &FiniteGroup, psi: &DMatrix<f64>) -> Result<MappingTorusDescriptor> {
    if r.is_nan() || r <= 0.0 {
        return Err(Error::InvariantFailure { condition: "radius must be positive", residual: r });
    }
    let phi = phi_l0()?.to_f64();
    let phi_residual = finite_invariance(&phi, psi)?;
    if phi_residual > MATCH_TOL {
        return Err(Error::InvariantFailure { condition: "psi does not preserve the invariant 8-form", residual: phi_residual });
    }
    let normalizer = normalizer_check(psi, group);
    if !normalizer.normalizes {
        return Err(Error::InvariantFailure { condition: "psi does not normalize K", residual: 1.0 });
    }
    let certificate = free_action_certificate(group);
    if !certificate.free {
        return Err(Error::InvariantFailure {
            condition: "K does not act freely on S^15",
            residual: certificate.min_distance.unwrap_or(0.0),
        });
    }
    Ok(MappingTorusDescriptor { r, group_order: group.order(), psi: psi.clone(), phi_residual, normalizer, certificate })
}
