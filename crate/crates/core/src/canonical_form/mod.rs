//! The Spin(9)-invariant 8-form on R^16: exact solver, Berger's average over lines,
//! stabilizer, and the quaternionic 4-form identity on R^8.

mod berger;
mod invariant;
mod quaternionic;

use std::collections::HashMap;
use std::str::FromStr;
use std::sync::OnceLock;

use nalgebra::DMatrix;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::clifford::{spin9_system, CliffordSystem};
use crate::error::{Error, Result};
use crate::exterior::{fast, parse_form, write_form, ExteriorForm, MultiIndex};
use crate::linalg::{orthogonality_residual, RationalEchelon};
use crate::scalar::{Rational, Scalar};

pub use berger::{berger_l0_coefficient, berger_phi_exact, berger_phi_mc, berger_phi_mc_with, BergerEstimate, MIN_SAMPLES};
pub use invariant::{group_order, invariant_forms, SignedPermutation, SolveMethod, SolveStats};
pub use quaternionic::{quaternionic_forms, quaternionic_identity, quaternionic_residual_with_signs, QuaternionicFormSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Normalization {
    /// Value 1 on the standard basis of the line {(x, 0)}.
    L0,
    /// The plain average over lines of the pulled-back volume forms.
    Berger,
}

impl Normalization {
    pub fn tag(self) -> &'static str {
        match self {
            Normalization::L0 => "l0",
            Normalization::Berger => "berger",
        }
    }
}

impl FromStr for Normalization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "l0" => Ok(Normalization::L0),
            "berger" => Ok(Normalization::Berger),
            other => Err(Error::NormalizationMismatch { expected: "l0 or berger".into(), found: other.into() }),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Provenance {
    Solver(SolveStats),
    /// Berger's integral evaluated with exact sphere moments.
    Integral,
    Imported,
}

#[derive(Clone, Debug)]
pub struct CanonicalForm {
    pub form: ExteriorForm<Rational>,
    pub normalization: Normalization,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, Serialize)]
pub struct PhiReport {
    pub normalization: Normalization,
    pub provenance: Provenance,
    pub nonzero_coefficients: usize,
    pub l0_coefficient: String,
    /// Berger-normalized over l0-normalized.
    pub berger_ratio: String,
}

impl CanonicalForm {
    /// `Phi(e_1, .., e_8)`.
    pub fn l0_coefficient(&self) -> Rational {
        self.form.coefficient(&l0_index())
    }

    pub fn to_f64(&self) -> ExteriorForm<f64> {
        self.form.to_f64()
    }

    pub fn nnz(&self) -> usize {
        self.form.nnz()
    }

    pub fn renormalized(&self, target: Normalization) -> CanonicalForm {
        let factor = normalization_factor(self.normalization, target);
        CanonicalForm { form: self.form.scale(&factor), normalization: target, provenance: self.provenance.clone() }
    }

    pub fn export(&self) -> String {
        write_form(&self.form, self.normalization.tag())
    }

    /// Parses a `.form` file; `expected` rejects a different normalization tag.
    pub fn import(text: &str, expected: Option<Normalization>) -> Result<CanonicalForm> {
        let (form, tag) = parse_form(text)?;
        let normalization: Normalization = tag.parse()?;
        if let Some(e) = expected {
            if e != normalization {
                return Err(Error::NormalizationMismatch { expected: e.tag().into(), found: tag });
            }
        }
        if form.dim() != 16 || form.degree() != 8 {
            return Err(Error::Dimension(format!("expected an 8-form on R^16, got a {}-form on R^{}", form.degree(), form.dim())));
        }
        Ok(CanonicalForm { form, normalization, provenance: Provenance::Imported })
    }

    pub fn report(&self) -> PhiReport {
        PhiReport {
            normalization: self.normalization,
            provenance: self.provenance.clone(),
            nonzero_coefficients: self.nnz(),
            l0_coefficient: self.l0_coefficient().to_text(),
            berger_ratio: berger_l0_coefficient().to_text(),
        }
    }
}

pub fn l0_index() -> MultiIndex {
    MultiIndex::from_mask(0x00ff)
}

/// Factor taking a form in normalization `from` to normalization `to`.
pub fn normalization_factor(from: Normalization, to: Normalization) -> Rational {
    let b = berger_l0_coefficient();
    match (from, to) {
        (a, b2) if a == b2 => Rational::one(),
        (Normalization::L0, Normalization::Berger) => b,
        _ => b.recip(),
    }
}

/// The 36 products `I_a I_b` (a < b) of the Spin(9) system.
pub fn spin9_generators() -> Vec<DMatrix<i64>> {
    spin9_system().products().into_iter().map(|(_, m)| m).collect()
}

/// Solves for the invariant 8-form and scales it.
///
/// Each product `I_a I_b` squares to `-Id`, so it equals `exp(pi/2 I_a I_b)` and lies in
/// Spin(9); being a signed permutation, it is used to fold the unknowns into orbits
/// before the infinitesimal equations are imposed.
pub fn invariant_phi(normalization: Normalization) -> Result<CanonicalForm> {
    invariant_phi_for(&spin9_system(), normalization, SolveMethod::Orbits)
}

pub fn invariant_phi_for(sys: &CliffordSystem, normalization: Normalization, method: SolveMethod) -> Result<CanonicalForm> {
    let n = sys.dim();
    let lie: Vec<DMatrix<i64>> = sys.products().into_iter().map(|(_, m)| m).collect();
    let (mut basis, stats) = invariant_forms(n, n / 2, &lie, method)?;
    if basis.len() != 1 {
        return Err(Error::NullspaceDimension { dim: basis.len() });
    }
    let raw = basis.remove(0);
    let lead = raw.coefficient(&MultiIndex::from_mask(((1u32 << (n / 2)) - 1) as u16));
    if lead.is_zero() {
        return Err(Error::InvariantFailure { condition: "invariant form vanishes on the line {(x, 0)}", residual: 0.0 });
    }
    let l0 = raw.scale(&lead.recip());
    for s in &lie {
        if !l0.infinitesimal_action(&s.map(Rational::from_i64))?.is_zero() {
            return Err(Error::InvariantFailure { condition: "solver output is not annihilated by a generator", residual: 1.0 });
        }
    }
    let form = l0.scale(&normalization_factor(Normalization::L0, normalization));
    Ok(CanonicalForm { form, normalization, provenance: Provenance::Solver(stats) })
}

/// Process-wide l0-normalized form, solved once.
pub fn phi_l0() -> Result<&'static CanonicalForm> {
    static CELL: OnceLock<CanonicalForm> = OnceLock::new();
    if let Some(phi) = CELL.get() {
        return Ok(phi);
    }
    let phi = invariant_phi(Normalization::L0)?;
    Ok(CELL.get_or_init(|| phi))
}

/// `omega(X, Y) = <J X, Y>`, so `omega_ab = J[b, a]`.
pub fn kaehler_two_form<T: Scalar>(j: &DMatrix<T>) -> Result<ExteriorForm<T>> {
    let n = j.nrows();
    if j.ncols() != n {
        return Err(Error::Dimension(format!("{}x{} is not square", n, j.ncols())));
    }
    let skew = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).fold(0.0f64, |m, (a, b)| {
        m.max(crate::scalar::magnitude(&(j[(a, b)].clone() + j[(b, a)].clone())))
    });
    let square = j * j + DMatrix::<T>::identity(n, n);
    let sq = square.iter().fold(0.0f64, |m, x| m.max(crate::scalar::magnitude(x)));
    let tol = if T::KIND == crate::scalar::ScalarKind::Rational { 0.0 } else { 1e-12 };
    if skew > tol || sq > tol {
        return Err(Error::NotComplexStructure { residual: skew.max(sq) });
    }
    let mut terms = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            terms.push((MultiIndex::new(&[a, b])?, j[(b, a)].clone()));
        }
    }
    ExteriorForm::from_terms(n, 2, terms)
}

#[derive(Clone, Debug)]
pub struct StabilizerReport {
    pub dim: usize,
    /// Skew 16x16 matrices spanning the annihilator.
    pub basis: Vec<DMatrix<Rational>>,
    pub basis_annihilates: bool,
    pub contains_generators: bool,
}

fn skew_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect()
}

/// `{S skew : S . phi = 0}`, computed exactly over the skew matrices `e_a e_b^T - e_b e_a^T`.
pub fn stabilizer_dim(phi: &ExteriorForm<Rational>) -> StabilizerReport {
    let n = phi.dim();
    let pairs = skew_pairs(n);
    let mut rows: HashMap<u16, Vec<(usize, Rational)>> = HashMap::new();
    for (p, &(a, b)) in pairs.iter().enumerate() {
        let mut sparse = vec![Vec::new(); n];
        sparse[a].push((b, Rational::one()));
        sparse[b].push((a, -Rational::one()));
        for (idx, v) in phi.infinitesimal_action_sparse(&sparse).terms() {
            rows.entry(idx.mask()).or_default().push((p, v.clone()));
        }
    }
    let mut ech = RationalEchelon::new(pairs.len());
    let mut keys: Vec<u16> = rows.keys().copied().collect();
    keys.sort_unstable();
    for k in keys {
        ech.insert(rows.remove(&k).unwrap_or_default());
    }
    let basis: Vec<DMatrix<Rational>> = ech
        .nullspace()
        .into_iter()
        .map(|v| {
            let mut m = DMatrix::from_element(n, n, Rational::zero());
            for (&(a, b), x) in pairs.iter().zip(v) {
                m[(b, a)] = -x.clone();
                m[(a, b)] = x;
            }
            m
        })
        .collect();
    let annihilates = |s: &DMatrix<Rational>| phi.infinitesimal_action(s).map(|f| f.is_zero()).unwrap_or(false);
    let basis_annihilates = basis.iter().all(annihilates);
    let contains_generators = n == 16
        && spin9_generators().iter().all(|g| {
            let s = g.map(Rational::from_i64);
            s.transpose() == -s.clone() && annihilates(&s)
        });
    StabilizerReport { dim: basis.len(), basis, basis_annihilates, contains_generators }
}

/// `max |G^* phi - phi|` over all coefficients.
pub fn finite_invariance(phi: &ExteriorForm<f64>, g: &DMatrix<f64>) -> Result<f64> {
    if g.nrows() != 16 || g.ncols() != 16 {
        return Err(Error::Dimension(format!("expected 16x16, got {}x{}", g.nrows(), g.ncols())));
    }
    let residual = orthogonality_residual(g);
    if residual > 1e-10 {
        return Err(Error::NotOrthogonal { residual });
    }
    let pulled = fast::pullback_dense(phi, g)?;
    let base = phi.to_dense();
    Ok(pulled.iter().zip(&base).fold(0.0, |m, (a, b)| m.max((a - b).abs())))
}
