//! Exact decisions involving base-2 logarithms of rationals.
//!
//! `log2(x)` is rational only when `x` is a power of two. Otherwise comparisons use
//! `q <= log2 x  <=>  2^a <= x^b` for `q = a/b` when the powers are small enough,
//! and a certified enclosure by repeated squaring when they are not.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::rational::{cmp_powers, Rational};

/// Largest precision tried before giving up on a comparison.
pub const MAX_BITS: u32 = 4096;

/// Power-method budget: bits of `x^b` we are willing to materialize.
const POWER_BUDGET: u64 = 1 << 22;

fn pow2(e: i64) -> Rational {
    let p = BigInt::one() << e.unsigned_abs();
    if e >= 0 {
        Rational::from(p)
    } else {
        Rational::new(1, p)
    }
}

fn power_of_two_exponent(v: &BigInt) -> Option<u64> {
    if !v.is_positive() {
        return None;
    }
    let tz = v.trailing_zeros()?;
    (v >> tz).is_one().then_some(tz)
}

/// `log2 x` when it is rational, i.e. when `x` is a power of two.
pub fn log2_exact(x: &Rational) -> Option<Rational> {
    let a = power_of_two_exponent(x.numer())? as i64;
    let b = power_of_two_exponent(x.denom())? as i64;
    Some(Rational::from(a - b))
}

/// `floor(log2 x)` for `x > 0`.
fn floor_log2(x: &Rational) -> i64 {
    let mut e = x.numer().bits() as i64 - x.denom().bits() as i64;
    while pow2(e) > *x {
        e -= 1;
    }
    while pow2(e + 1) <= *x {
        e += 1;
    }
    e
}

fn round_down(v: &Rational, scale: &BigInt) -> Rational {
    Rational::new((v * &Rational::from(scale.clone())).floor(), scale.clone())
}

fn round_up(v: &Rational, scale: &BigInt) -> Rational {
    Rational::new((v * &Rational::from(scale.clone())).ceil(), scale.clone())
}

/// Interval `[lo, hi]` containing `log2 x` with `hi - lo <= 2^-bits`.
pub fn log2_enclosure(x: &Rational, bits: u32) -> Result<(Rational, Rational)> {
    if x.signum() <= 0 {
        return Err(Error::Domain(format!("log2 of nonpositive {x}")));
    }
    if let Some(l) = log2_exact(x) {
        return Ok((l.clone(), l));
    }
    let e = floor_log2(x);
    let m = x * &pow2(-e);
    let two = Rational::from(2);
    let scale = BigInt::one() << (bits as usize + 16);
    let (mut lo, mut hi) = (m.clone(), m);
    let mut frac = Rational::zero();
    let mut step = Rational::one();
    for _ in 0..bits {
        step = &step / &two;
        let sq_lo = round_down(&(&lo * &lo), &scale);
        let sq_hi = round_up(&(&hi * &hi), &scale);
        if sq_lo >= two {
            frac = &frac + &step;
            lo = &sq_lo / &two;
            hi = &sq_hi / &two;
        } else if sq_hi < two {
            lo = sq_lo;
            hi = sq_hi;
        } else {
            // Bit undecided at this working precision; the remaining tail is below
            // twice the current step.
            let base = &Rational::from(e) + &frac;
            let width = &step * &two;
            return Ok((base.clone(), &base + &width));
        }
    }
    let base = &Rational::from(e) + &frac;
    Ok((base.clone(), &base + &step))
}

/// Ordering of `q` against `log2 x` for `x > 0`.
pub fn cmp_log2(q: &Rational, x: &Rational) -> Result<Ordering> {
    if x.signum() <= 0 {
        return Err(Error::Domain(format!("log2 of nonpositive {x}")));
    }
    if let Some(l) = log2_exact(x) {
        return Ok(q.cmp(&l));
    }
    let a = q.numer();
    let b = q.denom();
    let x_bits = x.numer().bits().max(x.denom().bits());
    if let (Some(ua), Some(ub)) = (
        u32::try_from(a.abs()).ok(),
        u32::try_from(b.clone()).ok(),
    ) {
        if (ub as u64) * x_bits <= POWER_BUDGET && (ua as u64) <= POWER_BUDGET {
            // q <= log2 x  <=>  2^a <= x^b.
            let base = if a.is_negative() {
                Rational::new(1, 2)
            } else {
                Rational::from(2)
            };
            return Ok(cmp_powers(&base, ua, x, ub));
        }
    }
    cmp_log2_by_enclosure(q, x)
}

pub(crate) fn cmp_log2_by_enclosure(q: &Rational, x: &Rational) -> Result<Ordering> {
    let mut bits = 64;
    while bits <= MAX_BITS {
        let (lo, hi) = log2_enclosure(x, bits)?;
        if *q < lo {
            return Ok(Ordering::Less);
        }
        if *q > hi {
            return Ok(Ordering::Greater);
        }
        if lo == hi {
            return Ok(Ordering::Equal);
        }
        bits *= 2;
    }
    Err(Error::Undecided(MAX_BITS))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn exact_powers() {
        assert_eq!(log2_exact(&r(8, 1)), Some(Rational::from(3)));
        assert_eq!(log2_exact(&r(1, 4)), Some(Rational::from(-2)));
        assert_eq!(log2_exact(&r(6, 1)), None);
    }

    #[test]
    fn enclosure_of_three() {
        let (lo, hi) = log2_enclosure(&r(3, 1), 40).unwrap();
        let v = 3f64.log2();
        assert!(lo.to_f64() <= v && v <= hi.to_f64());
        assert!((&hi - &lo) <= Rational::new(1, 1i64 << 39));
    }

    #[test]
    fn compare_against_irrational_logs() {
        // log2 6 ~ 2.585
        assert_eq!(cmp_log2(&r(5, 2), &r(6, 1)).unwrap(), Ordering::Less);
        assert_eq!(cmp_log2(&r(13, 5), &r(6, 1)).unwrap(), Ordering::Greater);
        assert_eq!(cmp_log2(&r(-1, 3), &r(2, 3)).unwrap(), Ordering::Greater);
        assert_eq!(cmp_log2(&r(-3, 5), &r(2, 3)).unwrap(), Ordering::Less);
    }

    #[test]
    fn enclosure_path_agrees_with_powers() {
        for num in -40i64..40 {
            for den in 1i64..7 {
                for x in [r(3, 1), r(5, 7), r(10, 1), r(123, 17)] {
                    let q = r(num, den);
                    assert_eq!(
                        cmp_log2(&q, &x).unwrap(),
                        cmp_log2_by_enclosure(&q, &x).unwrap(),
                        "{q} vs log2 {x}"
                    );
                }
            }
        }
    }
}
