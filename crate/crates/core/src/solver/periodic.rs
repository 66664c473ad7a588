use num_rational::BigRational;
use serde::Serialize;

use super::{reduced_map, BoltzmannWeights};
use crate::error::{Error, Result};
use crate::poly::{divide_checked, Coefficient, Division, Poly, RationalFn};

/// Minimum `|r − f(r)|` for a root of `u = f(f(u))` to count as proper.
pub const PROPER_SEPARATION: f64 = 1e-6;

/// `f(u) = ((x̄u + 2ȳ) / (ȳu + x̄ + z̄))²` as a rational function.
pub fn reduced_map_rational<T: Coefficient>(xw: T, yw: T, zw: T) -> RationalFn<T> {
    let two = T::one() + T::one();
    let num = Poly::new(vec![two * yw.clone(), xw.clone()]);
    let den = Poly::new(vec![xw + zw, yw]);
    RationalFn { num: num.pow(2), den: den.pow(2) }
}

/// Quotient of the numerator of `f(f(u)) − u` by the numerator of `f(u) − u`.
pub fn periodic_quadratic<T: Coefficient>(xw: T, yw: T, zw: T) -> Result<Division<T>> {
    let f = reduced_map_rational(xw, yw, zw);
    let ff = f.compose(&f)?;
    let div = divide_checked(&ff.fixed_point_numerator(), &f.fixed_point_numerator()).map_err(|e| match e {
        Error::NotDivisible(r) => Error::Internal(format!("fixed points of f do not divide f∘f: remainder {r:e}")),
        other => other,
    })?;
    if div.quotient.degree() != Some(2) {
        return Err(Error::Internal(format!("expected a quadratic quotient, got degree {:?}", div.quotient.degree())));
    }
    Ok(div)
}

/// `(A, B, C)` computed with exact rational arithmetic.
pub fn periodic_quadratic_exact(xw: BigRational, yw: BigRational, zw: BigRational) -> Result<[BigRational; 3]> {
    let q = periodic_quadratic(xw, yw, zw)?.quotient;
    Ok([q.coeff(2), q.coeff(1), q.coeff(0)])
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeriodicReport {
    /// `(A, B, C)` of `A u² + B u + C`.
    pub quad: [f64; 3],
    pub discriminant: f64,
    pub proper_roots: Vec<f64>,
    pub two_periodic_exists: bool,
    pub remainder_rel: f64,
}

impl PeriodicReport {
    /// Magnitude against which `discriminant` is compared to decide it is zero.
    pub fn discriminant_scale(&self) -> f64 {
        let [a, b, c] = self.quad;
        b * b + 4.0 * (a * c).abs()
    }

    /// The sign conditions `B < 0`, `D > 0`.
    pub fn sign_condition(&self) -> bool {
        self.quad[1] < 0.0 && self.discriminant > 0.0
    }
}

/// Two-periodic solutions on the invariant line.
pub fn two_periodic_report(w: &BoltzmannWeights) -> Result<PeriodicReport> {
    let div = periodic_quadratic(w.xw, w.yw, w.zw)?;
    let q = &div.quotient;
    let (a, b, c) = (q.coeff(2), q.coeff(1), q.coeff(0));
    let d = b * b - 4.0 * a * c;

    let mut proper_roots = Vec::new();
    if d > 0.0 {
        let t = -0.5 * (b + b.signum() * d.sqrt());
        let mut roots = [t / a, c / t];
        roots.sort_by(f64::total_cmp);
        for r in roots {
            let r = polish(q, r);
            if r > 0.0 && (r - reduced_map(r, w)).abs() > PROPER_SEPARATION {
                proper_roots.push(r);
            }
        }
    }
    Ok(PeriodicReport {
        quad: [a, b, c],
        discriminant: d,
        two_periodic_exists: !proper_roots.is_empty(),
        proper_roots,
        remainder_rel: div.remainder_rel,
    })
}

fn polish(q: &Poly<f64>, mut r: f64) -> f64 {
    let dq = q.derivative();
    for _ in 0..2 {
        let d = dq.eval(&r);
        if d == 0.0 {
            break;
        }
        let next = r - q.eval(&r) / d;
        if q.eval(&next).abs() >= q.eval(&r).abs() {
            break;
        }
        r = next;
    }
    r
}
