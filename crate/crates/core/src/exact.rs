//! Exact integer and rational helpers: binomials, falling factorials, the
//! convex extension of the binomial, and rigorous rational enclosures of
//! `log2 n` and of fractional powers of integers.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;

pub fn binom_u128(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

pub fn binom_big(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `n (n-1) ... (n-k+1)`; zero when `k > n`.
pub fn falling_u128(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)?;
    }
    Some(acc)
}

pub fn factorial_big(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

pub fn pow_u128(base: u128, exp: u32) -> Option<u128> {
    base.checked_pow(exp)
}

pub fn ratio(p: impl Into<BigInt>, q: impl Into<BigInt>) -> BigRational {
    BigRational::new(p.into(), q.into())
}

pub fn int(p: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(p.into())
}

pub fn big(u: u128) -> BigRational {
    BigRational::from_integer(BigInt::from(u))
}

/// `x (x-1) ... (x-k+1) / k!` for `x >= k-1`, zero below; convex on the reals.
pub fn convex_binom(x: &BigRational, k: u32) -> BigRational {
    if *x < int(k as i64 - 1) {
        return BigRational::zero();
    }
    let mut acc = BigRational::one();
    for i in 0..k {
        acc *= x - int(i);
    }
    acc / BigRational::from_integer(BigInt::from(factorial_big(k as u64)))
}

/// Renders a rational as `"p/q"` in lowest terms with a positive denominator.
pub fn render(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Twelve-significant-digit scientific rendering, labelled approximate by callers.
pub fn approx(q: &BigRational) -> String {
    format!("{:.12e}", to_f64(q))
}

pub fn to_f64(q: &BigRational) -> f64 {
    if q.is_zero() {
        return 0.0;
    }
    if let Some(v) = q.to_f64() {
        if v.is_finite() && v != 0.0 {
            return v;
        }
    }
    // Scale by powers of two when numerator or denominator overflow f64.
    let nb = q.numer().abs().bits() as i64;
    let db = q.denom().bits() as i64;
    let shift = nb - db;
    let scaled = if shift >= 0 {
        q / int(BigInt::one() << shift as usize)
    } else {
        q * int(BigInt::one() << (-shift) as usize)
    };
    scaled.to_f64().unwrap_or(f64::NAN) * 2f64.powi(shift as i32)
}

/// A closed interval `[lo, hi]` of positive rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Interval {
    pub fn exact(v: BigRational) -> Self {
        Interval {
            lo: v.clone(),
            hi: v,
        }
    }

    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        debug_assert!(lo <= hi);
        Interval { lo, hi }
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        Interval::new(&self.lo * &o.lo, &self.hi * &o.hi)
    }

    pub fn scale(&self, c: &BigRational) -> Interval {
        debug_assert!(!c.is_negative());
        Interval::new(&self.lo * c, &self.hi * c)
    }

    pub fn recip(&self) -> Interval {
        Interval::new(self.hi.recip(), self.lo.recip())
    }

    pub fn div(&self, o: &Interval) -> Interval {
        self.mul(&o.recip())
    }

    pub fn pow(&self, e: u32) -> Interval {
        Interval::new(pow_rat(&self.lo, e), pow_rat(&self.hi, e))
    }

    pub fn add(&self, o: &Interval) -> Interval {
        Interval::new(&self.lo + &o.lo, &self.hi + &o.hi)
    }

    /// Strictly below `x` for every point of the interval.
    pub fn certainly_lt(&self, x: &BigRational) -> bool {
        self.hi < *x
    }

    pub fn certainly_le(&self, x: &BigRational) -> bool {
        self.hi <= *x
    }

    pub fn certainly_ge(&self, x: &BigRational) -> bool {
        self.lo >= *x
    }
}

pub fn pow_rat(q: &BigRational, e: u32) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..e {
        acc *= q;
    }
    acc
}

/// Rigorous enclosure of `log2 n` of width at most `2^-bits`.
///
/// Bits of the fractional part come from repeated squaring of `n / 2^m`
/// carried in fixed point, with the lower bound rounded down and the upper
/// bound rounded up; a bit is emitted only once both bounds agree.
pub fn log2_interval(n: u64, bits: u32) -> Interval {
    assert!(n >= 1);
    let m = 63 - n.leading_zeros() as u64;
    if n.is_power_of_two() {
        return Interval::exact(int(m));
    }
    let prec = 2 * bits as usize + 64;
    let one = BigUint::one() << prec;
    let two = &one << 1usize;
    let scaled = BigUint::from(n) << prec;
    let den = BigUint::one() << m as usize;
    let (mut lo, rem) = scaled.div_rem(&den);
    let mut hi = if rem.is_zero() { lo.clone() } else { &lo + 1u32 };
    let mut frac = BigUint::zero();
    let mut got = 0u32;
    for _ in 0..bits {
        lo = (&lo * &lo) >> prec;
        let sq = &hi * &hi;
        hi = (&sq >> prec) + if (&sq & (&one - 1u32)).is_zero() { 0u32 } else { 1u32 };
        frac <<= 1usize;
        if lo >= two {
            frac += 1u32;
            lo >>= 1usize;
            hi = (&hi + 1u32) >> 1usize;
        } else if hi < two {
            // bit is zero
        } else {
            frac >>= 1usize;
            break;
        }
        got += 1;
    }
    let scale = BigInt::one() << got as usize;
    let base = int(m) + BigRational::new(BigInt::from(frac.clone()), scale.clone());
    let width = BigRational::new(BigInt::one(), scale);
    Interval::new(base.clone(), base + width)
}

/// Enclosure of the `q`-th root of a positive integer, width `2^-bits`.
pub fn root_interval(value: &BigUint, q: u32, bits: u32) -> Interval {
    assert!(q >= 1);
    let shifted = value << (q as usize * bits as usize);
    let r = shifted.nth_root(q);
    let den = BigInt::one() << bits as usize;
    let lo = BigRational::new(BigInt::from(r.clone()), den.clone());
    if r.pow(q) == shifted {
        return Interval::exact(lo);
    }
    let hi = BigRational::new(BigInt::from(r + 1u32), den);
    Interval::new(lo, hi)
}

/// Enclosure of `n^(-p/q)` for positive integers.
pub fn neg_frac_power(n: u64, p: u64, q: u64, bits: u32) -> Interval {
    let g = p.gcd(&q);
    let (p, q) = (p / g, q / g);
    let np = BigUint::from(n).pow(p as u32);
    root_interval(&np, q as u32, bits).recip()
}

pub fn cmp_u128_rat(a: u128, q: &BigRational) -> Ordering {
    big(a).cmp(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binom_u128(5, 2), Some(10));
        assert_eq!(binom_u128(4, 7), Some(0));
        assert_eq!(binom_u128(60, 30), Some(118264581564861424));
        assert_eq!(binom_big(100, 50).to_string(), "100891344545564193334812497256");
        assert_eq!(falling_u128(4, 4), Some(24));
        assert_eq!(falling_u128(5, 2), Some(20));
        assert_eq!(falling_u128(2, 3), Some(0));
    }

    #[test]
    fn convex_binomial_branches() {
        assert_eq!(convex_binom(&ratio(1, 2), 2), BigRational::zero());
        assert_eq!(convex_binom(&int(4), 2), int(6));
        assert_eq!(convex_binom(&ratio(5, 2), 2), ratio(15, 8));
        assert_eq!(convex_binom(&int(1), 3), BigRational::zero());
    }

    #[test]
    fn log2_powers_are_exact() {
        assert_eq!(log2_interval(256, 40), Interval::exact(int(8)));
        assert_eq!(log2_interval(1, 40), Interval::exact(int(0)));
    }

    #[test]
    fn log2_encloses_float_value() {
        for n in [3u64, 5, 10, 12, 100, 1000, 12345] {
            let iv = log2_interval(n, 48);
            let f = (n as f64).log2();
            assert!(to_f64(&iv.lo) <= f + 1e-12, "n={n}");
            assert!(to_f64(&iv.hi) >= f - 1e-12, "n={n}");
            assert!(&iv.hi - &iv.lo <= ratio(1, 1u64 << 48));
        }
    }

    #[test]
    fn log2_bounds_are_rigorous() {
        // 2^(p/2^b) <= n  <=>  2^p <= n^(2^b); check at 8 bits where that is cheap
        for n in [3u64, 5, 6, 7, 9, 10, 11, 13] {
            let iv = log2_interval(n, 8);
            let to_check = |q: &BigRational| {
                let scale = BigInt::one() << 8usize;
                let p = q * int(scale.clone());
                assert!(p.is_integer());
                let p = p.to_integer().to_biguint().unwrap();
                (BigUint::from(2u32).pow(p.to_u32().unwrap()), BigUint::from(n).pow(256))
            };
            let (lo_pow, n_pow) = to_check(&iv.lo);
            assert!(lo_pow <= n_pow, "lower bound too high for n={n}");
            let (hi_pow, n_pow) = to_check(&iv.hi);
            assert!(hi_pow >= n_pow, "upper bound too low for n={n}");
        }
    }

    #[test]
    fn roots() {
        let iv = root_interval(&BigUint::from(27u32), 3, 20);
        assert_eq!(iv, Interval::exact(int(3)));
        let iv = root_interval(&BigUint::from(2u32), 2, 30);
        let f = 2f64.sqrt();
        assert!(to_f64(&iv.lo) <= f && f <= to_f64(&iv.hi));
        let iv = neg_frac_power(4, 2, 3, 40);
        let f = 4f64.powf(-2.0 / 3.0);
        assert!(to_f64(&iv.lo) <= f + 1e-15 && f <= to_f64(&iv.hi) + 1e-15);
    }

    #[test]
    fn rendering() {
        assert_eq!(render(&ratio(6, 4)), "3/2");
        assert_eq!(render(&int(7)), "7/1");
        assert_eq!(render(&ratio(1, -3)), "-1/3");
        let tiny = ratio(1, BigInt::one() << 2000usize);
        assert!(to_f64(&tiny) == 0.0 || to_f64(&tiny).is_finite());
        let huge = int(BigInt::one() << 1100usize);
        assert!(to_f64(&huge).is_infinite() || to_f64(&huge) > 1e300);
    }
}
