//! Real root isolation for floating polynomials.
//!
//! Roots of `p'` split the line into intervals on which `p` is monotone, so
//! each interval holds at most one simple root and is bracketed by a sign
//! change. A critical point where `p` vanishes to within the relative
//! tolerance is a multiple root; its multiplicity is one more than its
//! multiplicity as a root of `p'`.

use super::Poly;

/// Absolute width at which bisection stops.
pub const REFINE_TOL: f64 = 1e-12;

/// Relative distance below which two roots are reported as one.
pub const DEDUP_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealRoot {
    pub value: f64,
    pub multiplicity: usize,
}

/// `Σ |c_i| |x|^i`, the natural scale of `p(x)` under rounding.
fn eval_scale(p: &Poly<f64>, x: f64) -> f64 {
    p.coeffs().iter().rev().fold(0.0, |acc, c| acc * x.abs() + c.abs())
}

fn bisect(p: &Poly<f64>, mut lo: f64, mut hi: f64) -> f64 {
    let mut f_lo = p.eval(&lo);
    for _ in 0..2000 {
        if hi - lo <= REFINE_TOL {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = p.eval(&mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    let dp = p.derivative();
    let mut x = 0.5 * (lo + hi);
    for _ in 0..3 {
        let d = dp.eval(&x);
        if d == 0.0 {
            break;
        }
        let next = x - p.eval(&x) / d;
        if !(lo..=hi).contains(&next) || p.eval(&next).abs() > p.eval(&x).abs() {
            break;
        }
        x = next;
    }
    x
}

/// All real roots of `p` in increasing order, with multiplicities.
///
/// `tol` bounds `|p(c)| / Σ|c_i||c|^i` at a critical point `c` for it to be
/// accepted as a multiple root.
pub fn real_roots(p: &Poly<f64>, tol: f64) -> Vec<RealRoot> {
    let Some(deg) = p.degree() else {
        return Vec::new();
    };
    if deg == 0 {
        return Vec::new();
    }
    let norm = p.norm();
    let mut p = p.scale(&(1.0 / norm));

    let mut roots = Vec::new();
    let zeros = p.coeffs().iter().take_while(|&&c| c == 0.0).count();
    if zeros > 0 {
        roots.push(RealRoot { value: 0.0, multiplicity: zeros });
        p = Poly::new(p.coeffs()[zeros..].to_vec());
    }

    match p.degree() {
        Some(0) | None => {}
        Some(1) => roots.push(RealRoot { value: -p.coeff(0) / p.coeff(1), multiplicity: 1 }),
        Some(n) => {
            let lead = p.coeff(n);
            let bound = 1.0 + (0..n).map(|i| (p.coeff(i) / lead).abs()).fold(0.0, f64::max);
            let crit: Vec<RealRoot> =
                real_roots(&p.derivative(), tol).into_iter().filter(|r| r.value.abs() < bound).collect();

            // (point, multiple-root multiplicity if p vanishes there)
            let mut points: Vec<(f64, Option<usize>)> = vec![(-bound, None)];
            for c in &crit {
                let vanishes = p.eval(&c.value).abs() <= tol * eval_scale(&p, c.value);
                points.push((c.value, vanishes.then_some(c.multiplicity + 1)));
            }
            points.push((bound, None));

            for &(x, mult) in &points {
                if let Some(m) = mult {
                    roots.push(RealRoot { value: x, multiplicity: m });
                }
            }
            for w in points.windows(2) {
                let ((l, ml), (r, mr)) = (w[0], w[1]);
                if ml.is_some() || mr.is_some() {
                    continue;
                }
                let (fl, fr) = (p.eval(&l), p.eval(&r));
                if fl == 0.0 {
                    roots.push(RealRoot { value: l, multiplicity: 1 });
                } else if fl.signum() != fr.signum() && fr != 0.0 {
                    roots.push(RealRoot { value: bisect(&p, l, r), multiplicity: 1 });
                }
            }
        }
    }

    roots.sort_by(|a, b| a.value.total_cmp(&b.value));
    let mut merged: Vec<RealRoot> = Vec::with_capacity(roots.len());
    for r in roots {
        match merged.last_mut() {
            Some(last) if (r.value - last.value).abs() <= DEDUP_TOL * last.value.abs().max(1.0) => {
                last.multiplicity += r.multiplicity;
            }
            _ => merged.push(r),
        }
    }
    merged
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn from_roots(rs: &[f64]) -> Poly<f64> {
        rs.iter().fold(Poly::constant(1.0), |acc, &r| &acc * &Poly::new(vec![-r, 1.0]))
    }

    fn values(rs: &[RealRoot]) -> Vec<f64> {
        rs.iter().map(|r| r.value).collect()
    }

    #[test]
    fn quadratic_with_integer_roots() {
        let r = real_roots(&Poly::new(vec![10.0, -7.0, 1.0]), 1e-12);
        assert_eq!(r.len(), 2);
        assert!((r[0].value - 2.0).abs() < 1e-12);
        assert!((r[1].value - 5.0).abs() < 1e-12);
    }

    #[test]
    fn no_real_roots() {
        assert!(real_roots(&Poly::new(vec![1.0, 0.0, 1.0]), 1e-12).is_empty());
        assert!(real_roots(&Poly::new(vec![3.0]), 1e-12).is_empty());
    }

    #[test]
    fn quartic_positive_root() {
        let r = real_roots(&Poly::new(vec![-1.0, 0.0, 6.0, 10.0, 3.0]), 1e-12);
        let pos: Vec<_> = r.iter().filter(|r| r.value > 0.0).collect();
        assert_eq!(pos.len(), 1);
        assert!((pos[0].value - 0.323591553488076).abs() < 1e-12);
    }

    #[test]
    fn multiplicities() {
        let r = real_roots(&from_roots(&[1.0, 1.0, -2.0]), 1e-12);
        assert_eq!(r, vec![RealRoot { value: -2.0, multiplicity: 1 }, RealRoot { value: 1.0, multiplicity: 2 }]);
        let r = real_roots(&from_roots(&[0.5, 0.5, 0.5]), 1e-12);
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].multiplicity, 3);
        assert!((r[0].value - 0.5).abs() < 1e-8);
        let r = real_roots(&from_roots(&[0.0, 0.0, 3.0]), 1e-12);
        assert_eq!(values(&r), vec![0.0, 3.0]);
        assert_eq!(r[0].multiplicity, 2);
    }

    #[test]
    fn cubic_with_tangent_root() {
        // 0.032x³ − 0.36x² + 1.2x − 1 = 0.032 (x − 5)² (x − 1.25)
        let r = real_roots(&Poly::new(vec![-1.0, 1.2, -0.36, 0.032]), 1e-12);
        assert_eq!(r.len(), 2);
        assert!((r[0].value - 1.25).abs() < 1e-10);
        assert!((r[1].value - 5.0).abs() < 1e-7);
        assert_eq!(r[1].multiplicity, 2);
    }

    proptest! {
        #[test]
        fn planted_roots_are_recovered(mut rs in prop::collection::vec(-10.0f64..10.0, 1..5)) {
            rs.sort_by(f64::total_cmp);
            prop_assume!(rs.windows(2).all(|w| w[1] - w[0] > 1e-2));
            let found = real_roots(&from_roots(&rs), 1e-12);
            prop_assert_eq!(found.len(), rs.len());
            for (f, r) in found.iter().zip(&rs) {
                prop_assert!((f.value - r).abs() < 1e-8, "{} vs {}", f.value, r);
                prop_assert_eq!(f.multiplicity, 1);
            }
        }
    }
}
