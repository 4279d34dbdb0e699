use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use rug::float::Constant;
use rug::ops::{Pow, PowAssign};
use rug::{Assign, Float, Integer};

use super::{euler_numbers, BigReal, BoundKind, Precision, TruncatedValue};
use crate::error::{Error, Result};

/// Upper limit on direct-summation terms for ζ(s).
const ZETA_MAX_TERMS: u64 = 1 << 20;

pub fn pi_const(prec: Precision) -> BigReal {
    BigReal::from_float(Float::with_val(prec.bits(), Constant::Pi))
}

pub fn ln2_const(prec: Precision) -> BigReal {
    BigReal::from_float(Float::with_val(prec.bits(), Constant::Log2))
}

fn zeta_cache() -> &'static Mutex<HashMap<(u32, u32), TruncatedValue>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32), TruncatedValue>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// ζ(s) by direct summation to K terms, reported as the midpoint of the
/// integral-comparison enclosure of the tail.
pub fn zeta_int(s: u32, prec: Precision) -> Result<TruncatedValue> {
    if s < 2 {
        return Err(Error::domain(format!("zeta_int needs s >= 2, got {s}")));
    }
    let key = (s, prec.digits());
    if let Some(v) = zeta_cache().lock().unwrap().get(&key) {
        return Ok(v.clone());
    }
    let target = f64::from(prec.digits() + 2) / f64::from(s);
    let k_max = if target > 7.0 {
        ZETA_MAX_TERMS
    } else {
        (10f64.powf(target).ceil() as u64).clamp(16, ZETA_MAX_TERMS)
    };
    let v = zeta_direct(s, k_max, prec);
    zeta_cache().lock().unwrap().insert(key, v.clone());
    Ok(v)
}

fn zeta_direct(s: u32, k_max: u64, prec: Precision) -> TruncatedValue {
    let bits = prec.bits();
    let mut sum = Float::new(bits);
    let mut term = Float::new(bits);
    for k in (1..=k_max).rev() {
        term.assign(k);
        term.pow_assign(s);
        term.recip_mut();
        sum += &term;
    }
    // Σ_{k>K} k^{-s} lies between (K+1)^{1-s}/(s-1) and K^{1-s}/(s-1).
    let sm1 = s - 1;
    let lo = Float::with_val(bits, k_max + 1).pow(sm1).recip() / sm1;
    let hi = Float::with_val(bits, k_max).pow(sm1).recip() / sm1;
    let mid = Float::with_val(bits, &lo + &hi) / 2u32;
    let half = Float::with_val(bits, &hi - &lo) / 2u32;
    sum += &mid;
    let rounding = Float::with_val(bits, &sum * (k_max * 4)) >> bits;
    TruncatedValue {
        estimate: BigReal::from_float(sum),
        error_indicator: BigReal::from_float(half + rounding),
        terms_used: k_max,
        bound_kind: BoundKind::Rigorous,
    }
}

/// ζ̄(s) = (1 − 2^{1−s})ζ(s).
pub fn zeta_bar_int(s: u32, prec: Precision) -> Result<TruncatedValue> {
    let z = zeta_int(s, prec)?;
    let mut factor = Float::with_val(prec.bits(), 1);
    factor >>= s - 1;
    let factor = BigReal::from_float(Float::with_val(prec.bits(), 1 - factor));
    Ok(z.scale(&factor))
}

/// β(2a+1) = (−1)^a π^{2a+1} E_{2a} / (4^{a+1} (2a)!).
pub fn beta_odd(a: u32, prec: Precision) -> BigReal {
    let e = euler_numbers(2 * a).expect("even bound");
    let e2a = &e[a as usize];
    let bits = prec.bits();
    let pi = Float::with_val(bits, Constant::Pi);
    let num = Float::with_val(bits, pi.pow(2 * a + 1)) * e2a;
    let four = Integer::from(4u32).pow(a + 1);
    let fact = Integer::from(Integer::factorial(2 * a));
    let mut v = num / (four * fact);
    if a % 2 == 1 {
        v = -v;
    }
    BigReal::from_float(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Rational;

    fn p(d: u32) -> Precision {
        Precision::new(d).unwrap()
    }

    #[test]
    fn pi_digits() {
        assert_eq!(pi_const(p(10)).to_decimal(10), "3.141592654");
        assert_eq!(pi_const(p(20)).to_decimal(20), "3.1415926535897932385");
        // Machin's formula as a second route.
        let prec = p(40);
        let bits = prec.bits();
        let a = Float::with_val(bits, Rational::from((1, 5))).atan() * 16u32;
        let b = Float::with_val(bits, Rational::from((1, 239))).atan() * 4u32;
        let machin = BigReal::from_float(a - b);
        assert!((pi_const(prec) - machin).abs() < 1e-45);
    }

    #[test]
    fn pi_precision_monotone() {
        for d in 12..40 {
            assert_eq!(pi_const(p(d)).to_decimal(d - 2), pi_const(p(d - 2)).to_decimal(d - 2));
        }
    }

    #[test]
    fn zeta_values() {
        let prec = p(30);
        let pi = pi_const(prec);
        let z2 = zeta_int(2, prec).unwrap();
        let want = (&pi * &pi).div_int(6);
        assert!(z2.contains(&want));
        assert!(z2.error_indicator < 1e-12);
        let z3 = zeta_int(3, prec).unwrap();
        assert!(z3.distance(&BigReal::parse("1.2020569031595942853997381615", prec).unwrap()) < 1e-17);
        assert_eq!(z3.bound_kind, BoundKind::Rigorous);
        assert!(zeta_int(1, prec).is_err());
    }

    #[test]
    fn even_zeta_matches_pi_power() {
        let prec = p(25);
        let pi = pi_const(prec);
        // ζ(2m) = (-1)^{m+1} B_{2m} (2π)^{2m} / (2 (2m)!)
        let table: [(u32, i64); 5] = [(2, 6), (4, 90), (6, 945), (8, 9450), (10, 93555)];
        for (s, den) in table {
            let exact = pi.powi(s as i32).div_int(den);
            let z = zeta_int(s, prec).unwrap();
            assert!(z.contains(&exact), "s = {s}");
        }
    }

    #[test]
    fn zeta_bar_relation() {
        let prec = p(20);
        let z = zeta_int(3, prec).unwrap();
        let zb = zeta_bar_int(3, prec).unwrap();
        let ratio = &zb.estimate / &z.estimate;
        assert!((ratio - BigReal::from_f64(0.75, prec)).abs() < 1e-25);
        let pi = pi_const(prec);
        let zb2 = zeta_bar_int(2, prec).unwrap();
        assert!(zb2.contains(&(&pi * &pi).div_int(12)));
        assert!(zb.distance(&BigReal::from_f64(0.9015426774, prec)) < 1e-10);
    }

    #[test]
    fn beta_closed_forms() {
        let prec = p(30);
        let pi = pi_const(prec);
        assert!((beta_odd(0, prec) - pi.div_int(4)).abs() < 1e-35);
        assert!((beta_odd(1, prec) - pi.powi(3).div_int(32)).abs() < 1e-35);
        assert!((beta_odd(2, prec) - pi.powi(5).mul_int(5).div_int(1536)).abs() < 1e-35);
    }

    #[test]
    fn beta_matches_paired_alternating_sum() {
        // Σ_k (-1)^k/(2k+1)^s in pairs; the paired terms decrease, so the
        // remainder after an even number of terms lies in [0, next term].
        let prec = p(20);
        let bits = prec.bits();
        for a in 0..=4u32 {
            let s = 2 * a + 1;
            let n: u64 = if a == 0 { 2_000_000 } else { 20_000 };
            let mut sum = Float::new(bits);
            for k in (0..n).rev() {
                let t = Float::with_val(bits, 2 * k + 1).pow(s).recip();
                if k % 2 == 0 {
                    sum += t;
                } else {
                    sum -= t;
                }
            }
            let next = Float::with_val(bits, 2 * n + 1).pow(s).recip();
            let got = beta_odd(a, prec);
            let lo = BigReal::from_float(sum.clone());
            let hi = BigReal::from_float(sum + next);
            assert!(got >= &lo - &BigReal::from_f64(1e-25, prec), "a = {a}");
            assert!(got <= &hi + &BigReal::from_f64(1e-25, prec), "a = {a}");
        }
    }
}
