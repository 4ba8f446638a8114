//! Dense univariate polynomials over exact integers and rationals, plus the
//! generating-function helpers the Ehrhart machinery is built on.
//!
//! Coefficients are stored by degree with no trailing zeros, so the zero
//! polynomial is the empty vector. Polynomials serialize as JSON arrays of
//! strings (`"3"`, `"-1/2"`), index = degree.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Dense polynomial with coefficients in `T`, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

pub type RatPoly = Poly<BigRational>;
pub type IntPoly = Poly<BigInt>;

impl<T: Clone + Num> Default for Poly<T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: Clone + Num> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(T::one())
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Self::new(vec![T::zero(), T::one()])
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, d: usize) -> T {
        self.coeffs.get(d).cloned().unwrap_or_else(T::zero)
    }

    pub fn leading_coeff(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn derivative(&self) -> Self {
        let mut k = T::zero();
        let mut out = Vec::with_capacity(self.coeffs.len().saturating_sub(1));
        for c in self.coeffs.iter() {
            if !k.is_zero() {
                out.push(c.clone() * k.clone());
            }
            k = k + T::one();
        }
        Self::new(out)
    }

    /// Coefficient sequence reversed: `x^deg · p(1/x)`.
    pub fn reversed(&self) -> Self {
        let mut c = self.coeffs.clone();
        c.reverse();
        Self::new(c)
    }

    /// Product truncated above degree `max_degree`.
    pub fn mul_truncated(&self, other: &Self, max_degree: usize) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let len = (self.coeffs.len() + other.coeffs.len() - 1).min(max_degree + 1);
        let mut out = vec![T::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(len - i) {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }
}

impl<T: Clone + Num> Add<&Poly<T>> for &Poly<T> {
    type Output = Poly<T>;
    fn add(self, rhs: &Poly<T>) -> Poly<T> {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..len).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<T: Clone + Num> Sub<&Poly<T>> for &Poly<T> {
    type Output = Poly<T>;
    fn sub(self, rhs: &Poly<T>) -> Poly<T> {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..len).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<T: Clone + Num> Mul<&Poly<T>> for &Poly<T> {
    type Output = Poly<T>;
    fn mul(self, rhs: &Poly<T>) -> Poly<T> {
        match (self.degree(), rhs.degree()) {
            (Some(a), Some(b)) => self.mul_truncated(rhs, a + b),
            _ => Poly::zero(),
        }
    }
}

impl<T: Clone + Num + Neg<Output = T>> Neg for &Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        Poly::new(self.coeffs.iter().cloned().map(Neg::neg).collect())
    }
}

macro_rules! forward_owned_binop {
    ($tr:ident, $method:ident) => {
        impl<T: Clone + Num> $tr<Poly<T>> for Poly<T> {
            type Output = Poly<T>;
            fn $method(self, rhs: Poly<T>) -> Poly<T> {
                (&self).$method(&rhs)
            }
        }
        impl<T: Clone + Num> $tr<&Poly<T>> for Poly<T> {
            type Output = Poly<T>;
            fn $method(self, rhs: &Poly<T>) -> Poly<T> {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl RatPoly {
    pub fn from_ints<I: IntoIterator<Item = i64>>(coeffs: I) -> Self {
        Self::new(coeffs.into_iter().map(|c| BigRational::from_integer(c.into())).collect())
    }

    pub fn eval_int(&self, t: i64) -> BigRational {
        self.eval(&BigRational::from_integer(t.into()))
    }

    /// `Some` iff every coefficient is an integer.
    pub fn to_int_poly(&self) -> Option<IntPoly> {
        self.coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect::<Option<Vec<_>>>()
            .map(IntPoly::new)
    }

    /// Exact Lagrange interpolation through distinct abscissae.
    pub fn interpolate(points: &[(BigRational, BigRational)]) -> Result<Self> {
        let mut acc = RatPoly::zero();
        for (i, (xi, yi)) in points.iter().enumerate() {
            let mut basis = RatPoly::one();
            let mut denom = BigRational::one();
            for (j, (xj, _)) in points.iter().enumerate() {
                if i == j {
                    continue;
                }
                if xi == xj {
                    return Err(Error::Malformed(format!("repeated abscissa {xi}")));
                }
                basis = &basis * &RatPoly::new(vec![-xj.clone(), BigRational::one()]);
                denom *= xi - xj;
            }
            acc = &acc + &basis.scale(&(yi / denom));
        }
        Ok(acc)
    }
}

impl IntPoly {
    pub fn from_ints<I: IntoIterator<Item = i64>>(coeffs: I) -> Self {
        Self::new(coeffs.into_iter().map(BigInt::from).collect())
    }

    pub fn to_rat(&self) -> RatPoly {
        RatPoly::new(self.coeffs.iter().cloned().map(BigRational::from_integer).collect())
    }

    pub fn eval_int(&self, x: i64) -> BigInt {
        self.eval(&BigInt::from(x))
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }
}

impl<T: Clone + Num + fmt::Display> fmt::Display for Poly<T> {
    /// Human-readable form, e.g. `1 + 2*x + x^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (d, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match d {
                0 => write!(f, "{c}")?,
                _ if c.is_one() => write!(f, "x")?,
                _ => write!(f, "({c})*x")?,
            }
            if d > 1 {
                write!(f, "^{d}")?;
            }
        }
        Ok(())
    }
}

impl<T: fmt::Display> Serialize for Poly<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.coeffs.iter().map(ToString::to_string))
    }
}

impl<'de, T> Deserialize<'de> for Poly<T>
where
    T: Clone + Num + FromStr,
{
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<String>::deserialize(deserializer)?;
        let coeffs = raw
            .iter()
            .map(|s| s.trim().parse::<T>().map_err(|_| D::Error::custom(format!("bad coefficient {s:?}"))))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(Poly::new(coeffs))
    }
}

/// Formats a rational as `p/q` in lowest terms with `q > 0`, or `p` when integral.
pub fn format_rational(q: &BigRational) -> String {
    q.to_string()
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| Error::Malformed(format!("rational {s:?}")))?;
    let den: BigInt = den.parse().map_err(|_| Error::Malformed(format!("rational {s:?}")))?;
    if den.is_zero() {
        return Err(Error::Malformed(format!("zero denominator in {s:?}")));
    }
    Ok(BigRational::new(num, den))
}

/// The affine expression `slope·t + intercept`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LinearForm {
    pub slope: i64,
    pub intercept: i64,
}

impl LinearForm {
    pub fn new(slope: i64, intercept: i64) -> Self {
        LinearForm { slope, intercept }
    }

    pub fn at(&self, t: i64) -> i64 {
        self.slope * t + self.intercept
    }
}

/// `binom(a(t), r) = (1/r!) ∏_{s<r} (a(t) − s)` as a polynomial in `t`.
///
/// The product form is used throughout, so negative integer values of
/// `a(t)` give the generalized binomial.
pub fn poly_binomial(a: LinearForm, r: u32) -> RatPoly {
    let mut acc = RatPoly::one();
    let mut factorial = BigInt::one();
    for s in 0..r {
        let factor = RatPoly::from_ints([a.intercept - i64::from(s), a.slope]);
        acc = &acc * &factor;
        factorial *= BigInt::from(s + 1);
    }
    acc.scale(&BigRational::new(BigInt::one(), factorial))
}

/// `[x^target] ∏_i (1 + x + … + x^{caps_i})`: the number of integer vectors
/// `0 ≤ v_i ≤ caps_i` summing to `target`.
pub fn bounded_power_coeff(caps: &[u64], target: u64) -> BigInt {
    let width = target as usize + 1;
    let mut row = vec![BigInt::zero(); width];
    row[0] = BigInt::one();
    for &cap in caps {
        // new[j] = Σ_{i=0}^{min(cap, j)} old[j − i], via a running window sum.
        let mut next = vec![BigInt::zero(); width];
        let mut window = BigInt::zero();
        for j in 0..width {
            window += &row[j];
            if j as u64 > cap {
                window -= &row[j - cap as usize - 1];
            }
            next[j] = window.clone();
        }
        row = next;
    }
    row.pop().unwrap_or_default()
}

/// Ordinary binomial `C(n, r)` for `n ≥ 0`; zero when `r > n`.
pub fn binomial(n: u64, r: u64) -> BigInt {
    if r > n {
        return BigInt::zero();
    }
    let r = r.min(n - r);
    let mut acc = BigInt::one();
    for i in 0..r {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Generalized binomial `C(a, r) = a(a−1)…(a−r+1)/r!` for any integer `a`.
pub fn binomial_signed(a: i64, r: u64) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for s in 0..r {
        num *= BigInt::from(a) - BigInt::from(s);
        den *= BigInt::from(s + 1);
    }
    let (q, rem) = num.div_rem(&den);
    debug_assert!(rem.is_zero());
    q
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// h*-polynomial from an Ehrhart polynomial of a `d`-dimensional lattice
/// polytope: `(1 − x)^{d+1} Σ_j p(j) x^j`, truncated at degree `d`.
pub fn hstar_from_ehrhart(p: &RatPoly, d: usize) -> Result<IntPoly> {
    if let Some(deg) = p.degree() {
        if deg > d {
            return Err(Error::OutOfRange(format!("Ehrhart polynomial degree {deg} exceeds dimension {d}")));
        }
    }
    let values: Vec<BigRational> = (0..=d as i64).map(|j| p.eval_int(j)).collect();
    let mut out = Vec::with_capacity(d + 1);
    for i in 0..=d {
        let mut h = BigRational::zero();
        for j in 0..=i {
            let term = &values[j] * BigRational::from_integer(binomial(d as u64 + 1, (i - j) as u64));
            if (i - j) % 2 == 0 {
                h += term;
            } else {
                h -= term;
            }
        }
        if !h.is_integer() || h.is_negative() {
            return Err(Error::InvalidHStar { degree: i, value: format_rational(&h) });
        }
        out.push(h.to_integer());
    }
    Ok(IntPoly::new(out))
}
