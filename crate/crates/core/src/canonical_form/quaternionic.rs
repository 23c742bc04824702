//! On R^8 = H^2: the Kähler forms of the five-generator system against those of the
//! left quaternionic multiplications.

use nalgebra::DMatrix;
use num_traits::Zero;

use super::kaehler_two_form;
use crate::clifford::sp2sp1_system;
use crate::error::Result;
use crate::exterior::ExteriorForm;
use crate::octonion::{quaternion_mult_matrix, Quaternion, Side};
use crate::scalar::{Rational, Scalar};

#[derive(Clone, Debug)]
pub struct QuaternionicFormSet {
    /// `omega_ab` for `a < b`, 0-based generator indices.
    pub omega: Vec<((usize, usize), ExteriorForm<Rational>)>,
    /// Kähler forms of `L_i, L_j, L_k` acting diagonally on H^2.
    pub omega_l: [ExteriorForm<Rational>; 3],
    /// `omega_{L_i}^2 + omega_{L_j}^2 + omega_{L_k}^2`.
    pub big_omega_l: ExteriorForm<Rational>,
    pub sum_of_squares: ExteriorForm<Rational>,
}

fn diagonal_left(q: usize) -> DMatrix<Rational> {
    let l = quaternion_mult_matrix(Side::Left, &Quaternion::<Rational>::basis(q));
    let mut m = DMatrix::from_element(8, 8, Rational::zero());
    m.view_mut((0, 0), (4, 4)).copy_from(&l);
    m.view_mut((4, 4), (4, 4)).copy_from(&l);
    m
}

fn square(w: &ExteriorForm<Rational>) -> Result<ExteriorForm<Rational>> {
    w.wedge(w)
}

pub fn quaternionic_forms() -> Result<QuaternionicFormSet> {
    let sys = sp2sp1_system();
    let mut omega = Vec::new();
    for ((a, b), m) in sys.products() {
        omega.push(((a, b), kaehler_two_form(&m.map(Rational::from_i64))?));
    }
    let omega_l = [kaehler_two_form(&diagonal_left(1))?, kaehler_two_form(&diagonal_left(2))?, kaehler_two_form(&diagonal_left(3))?];
    let mut big_omega_l = ExteriorForm::zero(8, 4)?;
    for w in &omega_l {
        big_omega_l = big_omega_l.add(&square(w)?)?;
    }
    let mut sum_of_squares = ExteriorForm::zero(8, 4)?;
    for (_, w) in &omega {
        sum_of_squares = sum_of_squares.add(&square(w)?)?;
    }
    Ok(QuaternionicFormSet { omega, omega_l, big_omega_l, sum_of_squares })
}

impl QuaternionicFormSet {
    /// `sum_{a<b} omega_ab^2 + 2 Omega_L`.
    pub fn residual(&self) -> Result<ExteriorForm<Rational>> {
        self.sum_of_squares.add(&self.big_omega_l.scale(&Rational::from_i64(2)))
    }
}

/// Residual of the identity; zero exactly when it holds.
pub fn quaternionic_identity() -> Result<ExteriorForm<Rational>> {
    quaternionic_forms()?.residual()
}

/// The residual with each square `omega_ab^2` entering the sum with the given sign.
/// Squares do not see the sign of `omega_ab` itself, so this is how a single term is
/// corrupted.
pub fn quaternionic_residual_with_signs(signs: &[i8; 10]) -> Result<ExteriorForm<Rational>> {
    let set = quaternionic_forms()?;
    let mut acc = set.big_omega_l.scale(&Rational::from_i64(2));
    for ((_, w), &s) in set.omega.iter().zip(signs) {
        acc = acc.add(&square(w)?.scale(&Rational::from_i64(s as i64)))?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::MultiIndex;

    #[test]
    fn identity_holds_exactly() {
        let set = quaternionic_forms().unwrap();
        assert_eq!(set.omega.len(), 10);
        assert!(!set.sum_of_squares.is_zero());
        assert!(set.residual().unwrap().is_zero());
    }

    #[test]
    fn corrupted_term_leaves_residual() {
        let mut signs = [1i8; 10];
        signs[3] = -1;
        assert!(!quaternionic_residual_with_signs(&signs).unwrap().is_zero());
        assert!(quaternionic_residual_with_signs(&[1; 10]).unwrap().is_zero());
    }

    #[test]
    fn omega_l_on_first_quaternion_line() {
        let set = quaternionic_forms().unwrap();
        let e = |i: usize| (0..8).map(|t| Rational::from_i64((t == i) as i64)).collect::<Vec<_>>();
        let frame = [e(0), e(1), e(2), e(3)];
        let direct = set.omega_l.iter().fold(Rational::zero(), |acc, w| acc + square(w).unwrap().eval(&frame).unwrap());
        let value = set.big_omega_l.eval(&frame).unwrap();
        assert_eq!(value, direct);
        assert!(!value.is_zero());
        assert_eq!(value, set.big_omega_l.coefficient(&MultiIndex::from_mask(0x0f)));
    }
}
