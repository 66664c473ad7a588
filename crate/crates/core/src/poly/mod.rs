//! Dense univariate polynomials over a field, with an exact rational profile
//! (`BigRational`) and a floating profile (`f64`).

mod roots;
mod sturm;

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use roots::{real_roots, RealRoot, DEDUP_TOL, REFINE_TOL};
pub use sturm::{count_distinct_real_roots, count_positive_real_roots, sturm_sequence};

/// Largest relative remainder accepted by [`divide_exact`] in the floating profile.
pub const FLOAT_DIVISION_TOL: f64 = 1e-9;

pub trait Coefficient:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + FromPrimitive
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Whether arithmetic is exact, so remainders must vanish identically.
    const EXACT: bool;

    fn magnitude(&self) -> f64;
}

impl Coefficient for f64 {
    const EXACT: bool = false;

    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl Coefficient for BigRational {
    const EXACT: bool = true;

    fn magnitude(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }
}

/// Coefficients in ascending degree; trailing zeros are always trimmed, so
/// the zero polynomial has no coefficients.
#[derive(Clone, PartialEq)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T: Coefficient> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
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

    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.clone() * T::from_usize(i).expect("small degree"))
                .collect(),
        )
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::constant(T::one()), |acc, _| &acc * self)
    }

    /// Largest coefficient magnitude.
    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(Coefficient::magnitude).fold(0.0, f64::max)
    }

    /// Euclidean division `self = q * div + r` with `deg r < deg div`.
    pub fn div_rem(&self, div: &Self) -> Result<(Self, Self)> {
        let m = div.degree().ok_or_else(|| Error::Degenerate("division by the zero polynomial".into()))?;
        let Some(n) = self.degree() else {
            return Ok((Self::zero(), Self::zero()));
        };
        if n < m {
            return Ok((Self::zero(), self.clone()));
        }
        let lead = div.coeffs[m].clone();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![T::zero(); n - m + 1];
        for i in (0..=n - m).rev() {
            let c = rem[i + m].clone() / lead.clone();
            for j in 0..m {
                rem[i + j] = rem[i + j].clone() - c.clone() * div.coeffs[j].clone();
            }
            rem[i + m] = T::zero();
            quot[i] = c;
        }
        rem.truncate(m);
        Ok((Self::new(quot), Self::new(rem)))
    }

    pub fn map<U: Coefficient>(&self, f: impl Fn(&T) -> U) -> Poly<U> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }
}

impl Poly<BigRational> {
    /// Exact image of a floating polynomial: every `f64` is a dyadic rational.
    pub fn from_f64(p: &Poly<f64>) -> Result<Self> {
        p.coeffs
            .iter()
            .map(|&c| BigRational::from_float(c).ok_or_else(|| Error::Domain(format!("non-finite coefficient {c}"))))
            .collect::<Result<Vec<_>>>()
            .map(Self::new)
    }

    pub fn to_f64(&self) -> Poly<f64> {
        self.map(|c| c.to_f64().unwrap_or(f64::NAN))
    }

    pub fn from_integers(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect())
    }
}

impl<T: Coefficient> Add for &Poly<T> {
    type Output = Poly<T>;

    fn add(self, rhs: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<T: Coefficient> Sub for &Poly<T> {
    type Output = Poly<T>;

    fn sub(self, rhs: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<T: Coefficient> Mul for &Poly<T> {
    type Output = Poly<T>;

    fn mul(self, rhs: &Poly<T>) -> Poly<T> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }
}

impl<T: Coefficient> Neg for &Poly<T> {
    type Output = Poly<T>;

    fn neg(self) -> Poly<T> {
        Poly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl<T: Coefficient> fmt::Debug for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c:?}"),
                1 => format!("({c:?})x"),
                _ => format!("({c:?})x^{i}"),
            })
            .collect();
        f.write_str(&terms.join(" + "))
    }
}

/// Outcome of a division expected to be exact.
#[derive(Clone)]
pub struct Division<T> {
    pub quotient: Poly<T>,
    /// Largest remainder coefficient relative to the largest dividend coefficient.
    pub remainder_rel: f64,
}

/// Divides `num` by `div`, requiring a zero remainder in the exact profile
/// and a relative remainder below [`FLOAT_DIVISION_TOL`] otherwise.
impl<T: Coefficient> fmt::Debug for Division<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Division")
            .field("quotient", &self.quotient)
            .field("remainder_rel", &self.remainder_rel)
            .finish()
    }
}

pub fn divide_checked<T: Coefficient>(num: &Poly<T>, div: &Poly<T>) -> Result<Division<T>> {
    let (quotient, rem) = num.div_rem(div)?;
    let scale = num.norm();
    let remainder_rel = if rem.is_zero() {
        0.0
    } else if scale > 0.0 {
        rem.norm() / scale
    } else {
        f64::INFINITY
    };
    let ok = if T::EXACT { rem.is_zero() } else { remainder_rel < FLOAT_DIVISION_TOL };
    if !ok {
        return Err(Error::NotDivisible(remainder_rel));
    }
    Ok(Division { quotient, remainder_rel })
}

pub fn divide_exact<T: Coefficient>(num: &Poly<T>, div: &Poly<T>) -> Result<Poly<T>> {
    divide_checked(num, div).map(|d| d.quotient)
}

/// `num / den` with a nonzero denominator.
#[derive(Clone, PartialEq)]
pub struct RationalFn<T> {
    pub num: Poly<T>,
    pub den: Poly<T>,
}

impl<T: Coefficient> RationalFn<T> {
    pub fn new(num: Poly<T>, den: Poly<T>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Degenerate("rational function with zero denominator".into()));
        }
        Ok(Self { num, den })
    }

    pub fn polynomial(p: Poly<T>) -> Self {
        Self { num: p, den: Poly::constant(T::one()) }
    }

    pub fn identity() -> Self {
        Self::polynomial(Poly::x())
    }

    pub fn eval(&self, x: &T) -> T {
        self.num.eval(x) / self.den.eval(x)
    }

    /// `self ∘ inner`, with denominators cleared by `den(inner)^d` where `d`
    /// is the larger of the two degrees of `self`.
    pub fn compose(&self, inner: &RationalFn<T>) -> Result<Self> {
        let d = self.num.degree().unwrap_or(0).max(self.den.degree().unwrap_or(0));
        let num_pows: Vec<Poly<T>> = (0..=d).map(|i| inner.num.pow(i as u32)).collect();
        let den_pows: Vec<Poly<T>> = (0..=d).map(|i| inner.den.pow(i as u32)).collect();
        let homogenize = |p: &Poly<T>| {
            p.coeffs()
                .iter()
                .enumerate()
                .fold(Poly::zero(), |acc, (i, c)| &acc + &(&num_pows[i] * &den_pows[d - i]).scale(c))
        };
        let num = homogenize(&self.num);
        let den = homogenize(&self.den);
        if den.is_zero() {
            return Err(Error::Degenerate("composition has an identically zero denominator".into()));
        }
        Ok(Self { num, den })
    }

    /// Numerator of `self(u) - u` over the same denominator.
    pub fn fixed_point_numerator(&self) -> Poly<T> {
        &self.num - &(&Poly::x() * &self.den)
    }
}

impl<T: Coefficient> fmt::Debug for RationalFn<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}) / ({:?})", self.num, self.den)
    }
}
