//! Exact Sturm sequences over the rationals, for counting distinct real roots.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::Poly;

/// `p, p', -rem(p, p'), ...` down to a constant.
pub fn sturm_sequence(p: &Poly<BigRational>) -> Vec<Poly<BigRational>> {
    let mut seq = vec![p.clone()];
    if p.degree().unwrap_or(0) == 0 {
        return seq;
    }
    seq.push(p.derivative());
    loop {
        let n = seq.len();
        if seq[n - 1].is_zero() {
            seq.pop();
            break;
        }
        let (_, rem) = seq[n - 2].div_rem(&seq[n - 1]).expect("nonzero divisor");
        if rem.is_zero() {
            break;
        }
        seq.push(-&rem);
    }
    seq
}

fn variations(signs: impl Iterator<Item = i8>) -> usize {
    let mut count = 0;
    let mut prev = 0i8;
    for s in signs.filter(|&s| s != 0) {
        if prev != 0 && s != prev {
            count += 1;
        }
        prev = s;
    }
    count
}

fn sign(x: &BigRational) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// Sign of `p` at `x`, or at `±∞` when `x` is `None` (`at_plus` selects the end).
fn sign_at(p: &Poly<BigRational>, x: Option<&BigRational>, at_plus: bool) -> i8 {
    match x {
        Some(x) => sign(&p.eval(x)),
        None => {
            let lead = p.leading().map_or(0, sign);
            let odd = p.degree().unwrap_or(0) % 2 == 1;
            if !at_plus && odd {
                -lead
            } else {
                lead
            }
        }
    }
}

/// Number of distinct real roots in `(lo, hi]`; `None` bounds mean `∓∞`.
/// Also correct for polynomials with repeated roots.
pub fn count_distinct_real_roots(p: &Poly<BigRational>, lo: Option<&BigRational>, hi: Option<&BigRational>) -> usize {
    let seq = sturm_sequence(p);
    let v_lo = variations(seq.iter().map(|q| sign_at(q, lo, false)));
    let v_hi = variations(seq.iter().map(|q| sign_at(q, hi, true)));
    v_lo.saturating_sub(v_hi)
}

pub fn count_positive_real_roots(p: &Poly<BigRational>) -> usize {
    count_distinct_real_roots(p, Some(&BigRational::zero()), None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn ip(c: &[i64]) -> Poly<BigRational> {
        Poly::from_integers(c)
    }

    #[test]
    fn counts() {
        assert_eq!(count_distinct_real_roots(&ip(&[10, -7, 1]), None, None), 2);
        assert_eq!(count_distinct_real_roots(&ip(&[1, 0, 1]), None, None), 0);
        // (x − 1)² (x + 2)
        assert_eq!(count_distinct_real_roots(&ip(&[2, -3, 0, 1]), None, None), 2);
        assert_eq!(count_positive_real_roots(&ip(&[2, -3, 0, 1])), 1);
        assert_eq!(count_positive_real_roots(&ip(&[-1, 0, 6, 10, 3])), 1);
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(
            count_distinct_real_roots(&ip(&[10, -7, 1]), Some(&half), Some(&BigRational::from_integer(3.into()))),
            1
        );
    }
}
