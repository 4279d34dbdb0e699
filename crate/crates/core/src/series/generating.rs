use crate::error::{Error, Result};
use crate::index::{check_separators, Index};
use crate::kernel::BlockAutomaton;
use crate::numerics::{pi_const, BigReal, BoundKind, Precision, TruncatedValue};

use super::t_star_partial;

/// (2K+1)^{1−s}/(2(s−1)) ≤ Σ_{k>K} (2k−1)^{−s}.
fn tail_floor(s: u32, k: u64, prec: Precision) -> BigReal {
    BigReal::from_int(2 * k as i64 + 1, prec)
        .powi(1 - s as i32)
        .div_int(2 * (i64::from(s) - 1))
}

/// G(c; z) summed from its definition: every coefficient with a_j ≤ a_max,
/// every variable ≤ K.
///
/// The estimate adds the part of the K-tail in which only the outermost
/// letter exceeds K (a lower bound). The error indicator combines the
/// coefficient tail beyond a_max and the uniform bound on G − G_K, both of
/// which are proved, so the result is rigorous whenever the enclosure of
/// t★(c_1, …, c_d) is.
pub fn g_eval_series(c: &[u32], z: &[BigReal], a_max: u32, k_max: u64, prec: Precision) -> Result<TruncatedValue> {
    check_separators(c)?;
    if k_max < 2 {
        return Err(Error::domain("the number of terms must be at least 2"));
    }
    if c.first().is_some_and(|&c1| c1 < 3) {
        return Err(Error::domain("the leading separator c_1 must be at least 3"));
    }
    if z.len() != c.len() + 1 {
        return Err(Error::domain(format!(
            "expected {} generating variables for {} separators, got {}",
            c.len() + 1,
            c.len(),
            z.len()
        )));
    }
    if z.iter().any(|v| v.abs() >= 1.0) {
        return Err(Error::domain("every |z_j| must be below 1"));
    }
    let d = c.len();
    let z_sq: Vec<BigReal> = z.iter().map(|v| v * v).collect();
    let proto = BigReal::zero(prec);
    let mut au = BlockAutomaton::new(&proto, c, z_sq.clone(), a_max);
    for k in 1..=k_max {
        au.step(&proto, k);
    }
    let base = au.accepted();

    let mut floor = &(&z_sq[0] * &tail_floor(2, k_max, prec)) * &au.block_open(0);
    if d >= 1 {
        floor = &floor + &(&tail_floor(c[0], k_max, prec) * &au.block_total(1));
    }

    // Coefficient tail: every run of twos contributes at most (4/π) per
    // coefficient, so the a > a_max part is dominated by geometric series.
    let one = BigReal::from_int(1, prec);
    let sep = Index::new(c.to_vec())?;
    let (star, partial) = t_star_partial(&sep, k_max, prec)?;
    let mut full = one.clone();
    let mut kept = one.clone();
    for x in &z_sq {
        let geo = (&one - x).recip();
        full = &full * &geo;
        let xp = x.powi(a_max as i32 + 1);
        kept = &kept * &(&(&one - &xp) * &geo);
    }
    let four_over_pi = BigReal::from_int(4, prec) / pi_const(prec);
    let majorant = four_over_pi.powi(d as i32 + 1);
    let coeff_tail = &(&majorant * &partial) * &(&full - &kept);

    // Uniform bound on G − G_K from the secant product over each block.
    let pi = pi_const(prec);
    let mut sec = one.clone();
    for v in z {
        let half_angle = (&pi * &v.abs()).div_int(2);
        sec = &sec * &half_angle.cos().recip();
    }
    let upper = star.upper();
    let k_gap = &upper - &partial;
    let k_gap = if k_gap.is_sign_negative() { BigReal::zero(prec) } else { k_gap };
    let uniform = &sec * &(&k_gap + &upper.div_int(4 * k_max as i64 - 3));

    let round = &(&base.abs() + &floor.abs()) * &prec.unit_roundoff().mul_int((k_max as i64 + 16) * 8);
    Ok(TruncatedValue {
        estimate: &base + &floor,
        error_indicator: &(&coeff_tail + &uniform) + &round,
        terms_used: k_max,
        bound_kind: star.bound_kind.and(BoundKind::Rigorous),
    })
}
