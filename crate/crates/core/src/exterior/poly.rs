use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::scalar::Rational;

pub const POLY_VARS: usize = 9;

type Exponents = [u8; POLY_VARS];

/// Polynomial with rational coefficients in up to nine variables `v_1..v_9`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PolyScalar {
    terms: BTreeMap<Exponents, Rational>,
}

impl PolyScalar {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term([0; POLY_VARS], c);
        p
    }

    /// The coordinate function `v_{i+1}`.
    pub fn var(i: usize) -> Self {
        let mut e = [0; POLY_VARS];
        e[i] = 1;
        let mut p = Self::zero();
        p.add_term(e, Rational::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Rational)> {
        self.terms.iter()
    }

    fn add_term(&mut self, e: Exponents, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero();
        for (e, v) in &self.terms {
            out.add_term(*e, v * c);
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::constant(Rational::one()), |acc, _| &acc * self)
    }

    pub fn eval(&self, v: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                let m: f64 = e.iter().zip(v).map(|(&a, x)| x.powi(a as i32)).product();
                crate::scalar::Scalar::to_f64(c) * m
            })
            .sum()
    }

    /// Mean over the unit sphere S^8 in R^9 with its probability measure.
    pub fn sphere_mean(&self) -> Rational {
        self.terms.iter().fold(Rational::zero(), |acc, (e, c)| {
            let exps: Vec<u32> = e.iter().map(|&a| a as u32).collect();
            acc + c * sphere_moment_dim(&exps)
        })
    }
}

impl Add for &PolyScalar {
    type Output = PolyScalar;
    fn add(self, o: &PolyScalar) -> PolyScalar {
        let mut out = self.clone();
        for (e, v) in &o.terms {
            out.add_term(*e, v.clone());
        }
        out
    }
}

impl Neg for &PolyScalar {
    type Output = PolyScalar;
    fn neg(self) -> PolyScalar {
        self.scale(&-Rational::one())
    }
}

impl Sub for &PolyScalar {
    type Output = PolyScalar;
    fn sub(self, o: &PolyScalar) -> PolyScalar {
        self + &(-o)
    }
}

impl Mul for &PolyScalar {
    type Output = PolyScalar;
    fn mul(self, o: &PolyScalar) -> PolyScalar {
        let mut out = PolyScalar::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Exponents = std::array::from_fn(|i| e1[i] + e2[i]);
                out.add_term(e, c1 * c2);
            }
        }
        out
    }
}

/// Moment of `v_1^{a_1} .. v_d^{a_d}` over S^{d-1} with the probability measure:
/// `prod (a_i - 1)!! / (d (d + 2) .. (d + |a| - 2))`, zero when any exponent is odd.
pub fn sphere_moment_dim(exps: &[u32]) -> Rational {
    if exps.iter().any(|a| a % 2 == 1) {
        return Rational::zero();
    }
    let d = exps.len() as u64;
    let mut num = BigInt::one();
    for &a in exps {
        let mut j = 1u64;
        while j < a as u64 {
            num *= j;
            j += 2;
        }
    }
    let half: u64 = exps.iter().map(|&a| a as u64 / 2).sum();
    let mut den = BigInt::one();
    for j in 0..half {
        den *= d + 2 * j;
    }
    Rational::new(num, den)
}

/// Moment over S^8 in R^9.
pub fn sphere_moment(exps: &[u32; POLY_VARS]) -> Rational {
    sphere_moment_dim(exps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rational, Scalar};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    #[test]
    fn low_moments() {
        let mut e = [0u32; 9];
        e[0] = 2;
        assert_eq!(sphere_moment(&e), rational(1, 9));
        e[0] = 1;
        assert_eq!(sphere_moment(&e), rational(0, 1));
        e[0] = 4;
        assert_eq!(sphere_moment(&e), rational(1, 33));
        assert_eq!(sphere_moment(&[0; 9]), rational(1, 1));
    }

    #[test]
    fn second_moments_sum_to_one() {
        let r2 = (0..9).fold(PolyScalar::zero(), |acc, i| &acc + &(&PolyScalar::var(i) * &PolyScalar::var(i)));
        assert_eq!(r2.sphere_mean(), rational(1, 1));
        // |v|^4 = 1 on the sphere as well
        assert_eq!((&r2 * &r2).sphere_mean(), rational(1, 1));
    }

    #[test]
    fn ring_axioms() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let rand_poly = |rng: &mut ChaCha8Rng| {
            (0..4).fold(PolyScalar::zero(), |acc, _| {
                let t = PolyScalar::var(rng.random_range(0..9)).scale(&rational(rng.random_range(-3..=3), 2));
                &acc + &(&t * &PolyScalar::var(rng.random_range(0..9)))
            })
        };
        for _ in 0..20 {
            let (a, b, c) = (rand_poly(&mut rng), rand_poly(&mut rng), rand_poly(&mut rng));
            assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            assert!((&a - &a).is_zero());
        }
    }

    // Monte Carlo agreement within 3 standard errors on random even exponent tuples
    #[test]
    fn moments_agree_with_sampling() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        let samples: Vec<[f64; 9]> = (0..200_000)
            .map(|_| {
                let g: [f64; 9] = std::array::from_fn(|_| rng.sample(StandardNormal));
                let n = g.iter().map(|x| x * x).sum::<f64>().sqrt();
                g.map(|x| x / n)
            })
            .collect();
        for _ in 0..20 {
            let mut e = [0u32; 9];
            let mut budget = 4 - rng.random_range(0..3);
            while budget > 0 {
                e[rng.random_range(0..9)] += 2;
                budget -= 1;
            }
            let vals: Vec<f64> = samples
                .iter()
                .map(|v| v.iter().zip(&e).map(|(x, &a)| x.powi(a as i32)).product())
                .collect();
            let mean = vals.iter().sum::<f64>() / vals.len() as f64;
            let var = vals.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (vals.len() - 1) as f64;
            let se = (var / vals.len() as f64).sqrt();
            let exact = sphere_moment(&e).to_f64();
            assert!((mean - exact).abs() <= 3.0 * se + 1e-15, "{e:?}: {mean} vs {exact} (se {se})");
        }
    }
}
