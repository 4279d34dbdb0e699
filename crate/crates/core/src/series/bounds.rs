use rug::{Integer, Rational};

use crate::error::{Error, Result};
use crate::numerics::{double_factorial, pi_const, BigReal, Precision};

/// |Π_{k>n} (1 − z²/(2k−1)²)^{−1} − 1| and the bound 1/(4n−3).
///
/// The infinite product is the ratio of the finite product over k ≤ n and
/// cos(πz/2).
pub fn product_tail_check(n: u64, z: &BigReal, prec: Precision) -> Result<(BigReal, BigReal)> {
    if n == 0 {
        return Err(Error::domain("n must be at least 1"));
    }
    if z.abs() >= 1.0 {
        return Err(Error::domain("|z| must be below 1"));
    }
    let one = BigReal::from_int(1, prec);
    let z2 = z * z;
    let mut head = one.clone();
    for k in 1..=n {
        let o = BigReal::from_int(2 * k as i64 - 1, prec);
        head = &head * &(&one - &(&z2 / &(&o * &o)));
    }
    let cos = (&pi_const(prec) * z).div_int(2).cos();
    let tail = &head / &cos;
    let lhs = (&tail - &one).abs();
    let bound = one.div_int(4 * n as i64 - 3);
    Ok((lhs, bound))
}

/// (2n)!!/(2n+1)!!, (2n−1)!!/(2n)!!·π/2 and (2n−2)!!/(2n−1)!!.
pub fn wallis_bounds(n: u64, prec: Precision) -> Result<(Rational, BigReal, Rational)> {
    if n == 0 {
        return Err(Error::domain("n must be at least 1"));
    }
    let n = n as i64;
    let df = |m: i64| -> Result<Integer> { double_factorial(m) };
    let lower = Rational::from((df(2 * n)?, df(2 * n + 1)?));
    let upper = Rational::from((df(2 * n - 2)?, df(2 * n - 1)?));
    let ratio = Rational::from((df(2 * n - 1)?, df(2 * n)?));
    let middle = BigReal::from_rational(&ratio, prec) * pi_const(prec).div_int(2);
    Ok((lower, middle, upper))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Precision {
        Precision::new(30).unwrap()
    }

    /// Direct product over k ∈ (n, N] with the remaining factor bounded by
    /// exp(z²·Σ_{k>N} 1/((2k−1)² − 1)) ≤ exp(1/(4N)).
    fn direct_tail(n: u64, z: f64, big_n: u64) -> (f64, f64) {
        let mut prod = 1.0f64;
        for k in n + 1..=big_n {
            let o = (2 * k - 1) as f64;
            prod /= 1.0 - z * z / (o * o);
        }
        let slack = (1.0 / (4.0 * big_n as f64)).exp_m1();
        (prod - 1.0, slack * prod)
    }

    #[test]
    fn tail_examples() {
        let prec = p();
        let (lhs, bound) = product_tail_check(1, &BigReal::from_f64(0.5, prec), prec).unwrap();
        assert!(lhs < bound && bound == 1.0);
        let (lhs, bound) = product_tail_check(10, &BigReal::from_f64(0.9, prec), prec).unwrap();
        assert!(lhs < bound);
        assert!((bound.to_f64() - 1.0 / 37.0).abs() < 1e-15);
        let (lhs, bound) = product_tail_check(100, &BigReal::from_f64(0.5, prec), prec).unwrap();
        assert!(lhs < bound);
        assert!(product_tail_check(0, &BigReal::from_f64(0.5, prec), prec).is_err());
    }

    #[test]
    fn tail_matches_direct_product() {
        let prec = p();
        for &(n, z) in &[(1u64, 0.5f64), (10, 0.9), (100, 0.5), (7, 0.1)] {
            let (lhs, _) = product_tail_check(n, &BigReal::from_f64(z, prec), prec).unwrap();
            let (direct, slack) = direct_tail(n, z, 2_000_000);
            assert!((lhs.to_f64() - direct).abs() <= slack + 1e-12, "n={n} z={z}");
        }
    }

    #[test]
    fn wallis_examples() {
        let prec = p();
        let (lo, mid, hi) = wallis_bounds(1, prec).unwrap();
        assert_eq!(lo, Rational::from((2, 3)));
        assert_eq!(hi, 1);
        assert!((mid.to_f64() - std::f64::consts::PI / 4.0).abs() < 1e-15);
        for n in [10u64, 100] {
            let (lo, mid, hi) = wallis_bounds(n, prec).unwrap();
            let lo = BigReal::from_rational(&lo, prec);
            let hi = BigReal::from_rational(&hi, prec);
            assert!(lo < mid && mid < hi);
            if n == 100 {
                assert!(&hi - &mid < 0.01 && &mid - &lo < 0.01);
            }
        }
    }
}
