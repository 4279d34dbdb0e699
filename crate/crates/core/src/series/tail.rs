//! Enclosures for the part of a nested sum whose outermost variable exceeds K.
//!
//! Inner partial sums are bounded for x ≥ K by polynomials B(v) with
//! nonnegative coefficients in v = ½·ln((2x−1)/(2K−1)). Sums over integers
//! are compared with integrals, which is valid while the summand decreases;
//! that is checked coefficientwise and reported through `proved`.

use rug::ops::Pow;
use rug::{Assign, Float};

pub(crate) struct TailEnclosure {
    /// Amount added to the partial sum to form the estimate.
    pub shift: Float,
    /// Half-width-style error around the shifted estimate.
    pub error: Float,
    /// False when a monotonicity condition behind the integral comparison failed.
    pub proved: bool,
}

/// ∫_K^∞ B(v(t)) (2t−1)^{−s} dt = Σ_j b_j (2K−1)^{1−s} j! / (2(s−1))^{j+1}.
fn tail_integral(s: u32, b: &[Float], k: u64, bits: u32) -> Float {
    let sm1 = s - 1;
    let base = Float::with_val(bits, 2 * k - 1).pow(sm1).recip();
    let rate = Float::with_val(bits, 2 * sm1);
    let mut acc = Float::new(bits);
    // j!/rate^{j+1}, updated incrementally.
    let mut moment = Float::with_val(bits, rate.clone().recip());
    for (j, bj) in b.iter().enumerate() {
        if j > 0 {
            moment *= j as u32;
            moment /= &rate;
        }
        acc += Float::with_val(bits, bj * &moment);
    }
    acc * base
}

/// ∫_0^v B(w) dw.
fn antiderivative(b: &[Float], bits: u32) -> Vec<Float> {
    let mut out = Vec::with_capacity(b.len() + 1);
    out.push(Float::new(bits));
    for (j, bj) in b.iter().enumerate() {
        out.push(Float::with_val(bits, bj / (j as u32 + 1)));
    }
    out
}

/// B(v)·e^{−2sv} is nonincreasing for v ≥ 0 when j·b_j ≤ 2s·b_{j−1}.
fn decreasing_weighted(b: &[Float], s: u32, bits: u32) -> bool {
    b.windows(2).enumerate().all(|(j, w)| {
        let lhs = Float::with_val(bits, &w[1] * (j as u32 + 1));
        let rhs = Float::with_val(bits, &w[0] * (2 * s));
        lhs <= rhs
    })
}

/// Tail of Σ_k σ^k (2k−1)^{−s_1} H_2(k) beyond K for σ_1 = +1 and s_1 ≥ 2.
///
/// `inner_at_k[j]` holds the level-(j+1) partial sum at K. For all-plus
/// indices the tail is enclosed in [lo, hi]; otherwise only |tail| ≤ hi is
/// available and the shift uses the frozen inner value.
pub(crate) fn outer_tail(entries: &[u32], inner_at_k: &[Float], plain: bool, k: u64, bits: u32) -> TailEnclosure {
    let r = entries.len();
    let mut proved = true;
    let mut b: Vec<Float> = vec![Float::with_val(bits, 1)];
    for i in (1..r).rev() {
        let s = entries[i];
        let h = Float::with_val(bits, inner_at_k[i - 1].abs_ref());
        proved &= decreasing_weighted(&b, s.max(1), bits);
        if s == 1 {
            b = antiderivative(&b, bits);
            b[0].assign(&h);
        } else {
            let e = tail_integral(s, &b, k, bits);
            b = vec![h + e];
        }
    }
    let s1 = entries[0];
    proved &= decreasing_weighted(&b, s1, bits);
    let hi = tail_integral(s1, &b, k, bits);

    let h2 = if r >= 2 {
        inner_at_k[0].clone()
    } else {
        Float::with_val(bits, 1)
    };
    // Σ_{k>K} (2k−1)^{−s} ≥ ∫_{K+1}^∞ (2t−1)^{−s} dt = (2K+1)^{1−s}/(2(s−1)).
    let lo_int = Float::with_val(bits, 2 * k + 1).pow(s1 - 1).recip() / (2 * (s1 - 1));
    let shift = Float::with_val(bits, &h2 * &lo_int);
    let error = if plain {
        let e = Float::with_val(bits, &hi - &shift);
        if e.is_sign_negative() {
            Float::new(bits)
        } else {
            e
        }
    } else {
        hi + Float::with_val(bits, h2.abs() * &lo_int)
    };
    TailEnclosure { shift, error, proved }
}

/// Π_j U_j with U ≥ Σ_{k≤K} (2k−1)^{−s}: bounds every absolute partial sum.
pub(crate) fn absolute_majorant(entries: &[u32], k: u64, bits: u32) -> Float {
    let mut m = Float::with_val(bits, 1);
    for &s in entries {
        let u = if s == 1 {
            Float::with_val(bits, 2 * k - 1).ln() / 2u32 + 1u32
        } else {
            Float::with_val(bits, 1) + Float::with_val(bits, 1) / (2 * (s - 1))
        };
        m *= u;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_entry_matches_integral() {
        let bits = 128;
        let t = outer_tail(&[2], &[], true, 10, bits);
        // hi = 1/(2·19), lo = 1/(2·21)
        let hi = 1.0 / 38.0;
        let lo = 1.0 / 42.0;
        assert!((t.shift.to_f64() - lo).abs() < 1e-15);
        assert!((t.error.to_f64() - (hi - lo)).abs() < 1e-15);
        assert!(t.proved);
    }

    #[test]
    fn polynomial_moments() {
        let bits = 128;
        let b = vec![Float::with_val(bits, 1), Float::with_val(bits, 1)];
        // (2K−1)^{−1}·(1/2 + 1/4) for s = 2.
        let v = tail_integral(2, &b, 1, bits);
        assert!((v.to_f64() - 0.75).abs() < 1e-15);
        assert!(decreasing_weighted(&b, 1, bits));
        let steep = vec![Float::with_val(bits, 1), Float::with_val(bits, 5)];
        assert!(!decreasing_weighted(&steep, 2, bits));
    }
}
