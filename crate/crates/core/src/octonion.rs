//! Quaternions and octonions over an arbitrary [`Scalar`].
//!
//! Octonions are pairs of quaternions `h1 + h2 e` with the Cayley–Dickson product
//! `(h1 + h2 e)(k1 + k2 e) = (h1 k1 - conj(k2) h2) + (h2 conj(k1) + k2 h1) e`.
//! The real basis is ordered `1, i, j, k, e, f = ie, g = je, h = ke`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const BASIS_NAMES: [&str; 8] = ["1", "i", "j", "k", "e", "f", "g", "h"];

#[derive(Clone, Debug, PartialEq)]
pub struct Quaternion<T> {
    pub c: [T; 4],
}

impl<T: Scalar> Quaternion<T> {
    pub fn new(a: T, b: T, c: T, d: T) -> Self {
        Quaternion { c: [a, b, c, d] }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero(), T::zero())
    }

    pub fn one() -> Self {
        Self::new(T::one(), T::zero(), T::zero(), T::zero())
    }

    pub fn basis(idx: usize) -> Self {
        let mut q = Self::zero();
        q.c[idx] = T::one();
        q
    }

    pub fn re(&self) -> &T {
        &self.c[0]
    }

    pub fn conj(&self) -> Self {
        let [a, b, c, d] = self.c.clone();
        Self::new(a, -b, -c, -d)
    }

    pub fn norm_sqr(&self) -> T {
        self.c.iter().fold(T::zero(), |acc, x| acc + x.clone() * x.clone())
    }

    pub fn scale(&self, s: &T) -> Self {
        Quaternion { c: self.c.clone().map(|x| x * s.clone()) }
    }

    pub fn inv(&self) -> Result<Self> {
        let n = self.norm_sqr();
        if n.is_zero() {
            return Err(Error::ZeroOctonion);
        }
        Ok(self.conj().scale(&(T::one() / n)))
    }

    pub fn to_f64(&self) -> Quaternion<f64> {
        Quaternion { c: self.c.clone().map(|x| x.to_f64()) }
    }

    /// Embedding `h -> h + 0 e`.
    pub fn to_octonion(&self) -> Octonion<T> {
        Octonion::from_halves(self, &Quaternion::zero())
    }
}

impl Quaternion<f64> {
    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn normalized(&self) -> Self {
        self.scale(&(1.0 / self.norm()))
    }
}

impl<T: Scalar> Mul for &Quaternion<T> {
    type Output = Quaternion<T>;

    fn mul(self, o: &Quaternion<T>) -> Quaternion<T> {
        let [a1, b1, c1, d1] = &self.c;
        let [a2, b2, c2, d2] = &o.c;
        let m = |x: &T, y: &T| x.clone() * y.clone();
        Quaternion::new(
            m(a1, a2) - m(b1, b2) - m(c1, c2) - m(d1, d2),
            m(a1, b2) + m(b1, a2) + m(c1, d2) - m(d1, c2),
            m(a1, c2) - m(b1, d2) + m(c1, a2) + m(d1, b2),
            m(a1, d2) + m(b1, c2) - m(c1, b2) + m(d1, a2),
        )
    }
}

impl<T: Scalar> Mul for Quaternion<T> {
    type Output = Quaternion<T>;
    fn mul(self, o: Quaternion<T>) -> Quaternion<T> {
        &self * &o
    }
}

impl<T: Scalar> Add for &Quaternion<T> {
    type Output = Quaternion<T>;
    fn add(self, o: &Quaternion<T>) -> Quaternion<T> {
        Quaternion { c: std::array::from_fn(|i| self.c[i].clone() + o.c[i].clone()) }
    }
}

impl<T: Scalar> Sub for &Quaternion<T> {
    type Output = Quaternion<T>;
    fn sub(self, o: &Quaternion<T>) -> Quaternion<T> {
        Quaternion { c: std::array::from_fn(|i| self.c[i].clone() - o.c[i].clone()) }
    }
}

impl<T: Scalar> Neg for &Quaternion<T> {
    type Output = Quaternion<T>;
    fn neg(self) -> Quaternion<T> {
        Quaternion { c: self.c.clone().map(|x| -x) }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Octonion<T> {
    pub c: [T; 8],
}

impl<T: Scalar> Octonion<T> {
    pub fn new(c: [T; 8]) -> Self {
        Octonion { c }
    }

    pub fn zero() -> Self {
        Octonion { c: std::array::from_fn(|_| T::zero()) }
    }

    pub fn one() -> Self {
        Self::basis(0)
    }

    pub fn basis(idx: usize) -> Self {
        let mut o = Self::zero();
        o.c[idx] = T::one();
        o
    }

    pub fn from_slice(v: &[T]) -> Result<Self> {
        if v.len() != 8 {
            return Err(Error::Dimension(format!("octonion needs 8 coefficients, got {}", v.len())));
        }
        Ok(Octonion { c: std::array::from_fn(|i| v[i].clone()) })
    }

    pub fn from_halves(h1: &Quaternion<T>, h2: &Quaternion<T>) -> Self {
        Octonion { c: std::array::from_fn(|i| if i < 4 { h1.c[i].clone() } else { h2.c[i - 4].clone() }) }
    }

    pub fn halves(&self) -> (Quaternion<T>, Quaternion<T>) {
        (
            Quaternion { c: std::array::from_fn(|i| self.c[i].clone()) },
            Quaternion { c: std::array::from_fn(|i| self.c[i + 4].clone()) },
        )
    }

    /// `conj(h1 + h2 e) = conj(h1) - h2 e`.
    pub fn conj(&self) -> Self {
        Octonion { c: std::array::from_fn(|i| if i == 0 { self.c[0].clone() } else { -self.c[i].clone() }) }
    }

    pub fn norm_sqr(&self) -> T {
        self.c.iter().fold(T::zero(), |acc, x| acc + x.clone() * x.clone())
    }

    pub fn dot(&self, o: &Self) -> T {
        self.c.iter().zip(&o.c).fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
    }

    pub fn scale(&self, s: &T) -> Self {
        Octonion { c: self.c.clone().map(|x| x * s.clone()) }
    }

    pub fn inv(&self) -> Result<Self> {
        let n = self.norm_sqr();
        if n.is_zero() {
            return Err(Error::ZeroOctonion);
        }
        Ok(self.conj().scale(&(T::one() / n)))
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    pub fn to_f64(&self) -> Octonion<f64> {
        Octonion { c: self.c.clone().map(|x| x.to_f64()) }
    }
}

impl Octonion<f64> {
    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.c.iter().fold(0.0f64, |m, x| m.max(x.abs()))
    }
}

impl<T: Scalar> Mul for &Octonion<T> {
    type Output = Octonion<T>;

    fn mul(self, o: &Octonion<T>) -> Octonion<T> {
        let (h1, h2) = self.halves();
        let (k1, k2) = o.halves();
        let re = &(&h1 * &k1) - &(&k2.conj() * &h2);
        let im = &(&h2 * &k1.conj()) + &(&k2 * &h1);
        Octonion::from_halves(&re, &im)
    }
}

impl<T: Scalar> Mul for Octonion<T> {
    type Output = Octonion<T>;
    fn mul(self, o: Octonion<T>) -> Octonion<T> {
        &self * &o
    }
}

impl<T: Scalar> Add for &Octonion<T> {
    type Output = Octonion<T>;
    fn add(self, o: &Octonion<T>) -> Octonion<T> {
        Octonion { c: std::array::from_fn(|i| self.c[i].clone() + o.c[i].clone()) }
    }
}

impl<T: Scalar> Sub for &Octonion<T> {
    type Output = Octonion<T>;
    fn sub(self, o: &Octonion<T>) -> Octonion<T> {
        Octonion { c: std::array::from_fn(|i| self.c[i].clone() - o.c[i].clone()) }
    }
}

impl<T: Scalar> Neg for &Octonion<T> {
    type Output = Octonion<T>;
    fn neg(self) -> Octonion<T> {
        Octonion { c: self.c.clone().map(|x| -x) }
    }
}

/// `[a, b, c] = (ab)c - a(bc)`.
pub fn associator<T: Scalar>(a: &Octonion<T>, b: &Octonion<T>, c: &Octonion<T>) -> Octonion<T> {
    &(&(a * b) * c) - &(a * &(b * c))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Matrix of `x -> u x` (left) or `x -> x u` (right); column `j` is the image of `e_j`.
pub fn mult_matrix<T: Scalar>(side: Side, u: &Octonion<T>) -> DMatrix<T> {
    let mut m = DMatrix::from_element(8, 8, T::zero());
    for j in 0..8 {
        let ej = Octonion::basis(j);
        let col = match side {
            Side::Left => u * &ej,
            Side::Right => &ej * u,
        };
        for i in 0..8 {
            m[(i, j)] = col.c[i].clone();
        }
    }
    m
}

/// Quaternionic analogue on R^4 = H.
pub fn quaternion_mult_matrix<T: Scalar>(side: Side, u: &Quaternion<T>) -> DMatrix<T> {
    let mut m = DMatrix::from_element(4, 4, T::zero());
    for j in 0..4 {
        let ej = Quaternion::basis(j);
        let col = match side {
            Side::Left => u * &ej,
            Side::Right => &ej * u,
        };
        for i in 0..4 {
            m[(i, j)] = col.c[i].clone();
        }
    }
    m
}

fn parse_list<T: Scalar, const N: usize>(s: &str) -> Result<[T; N]> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != N {
        return Err(Error::Parse { line: 1, msg: format!("expected {N} comma-separated scalars, got {}", parts.len()) });
    }
    let mut out = Vec::with_capacity(N);
    for p in parts {
        out.push(T::parse_text(p).ok_or_else(|| Error::Parse { line: 1, msg: format!("bad scalar `{}`", p.trim()) })?);
    }
    Ok(std::array::from_fn(|i| out[i].clone()))
}

fn write_list<T: Scalar>(f: &mut fmt::Formatter<'_>, c: &[T]) -> fmt::Result {
    let parts: Vec<String> = c.iter().map(|x| x.to_text()).collect();
    f.write_str(&parts.join(","))
}

impl<T: Scalar> FromStr for Octonion<T> {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_list::<T, 8>(s).map(Octonion::new)
    }
}

impl<T: Scalar> FromStr for Quaternion<T> {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_list::<T, 4>(s).map(|c| Quaternion { c })
    }
}

impl<T: Scalar> fmt::Display for Octonion<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_list(f, &self.c)
    }
}

impl<T: Scalar> fmt::Display for Quaternion<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_list(f, &self.c)
    }
}
