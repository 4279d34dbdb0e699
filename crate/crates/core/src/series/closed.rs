//! Shell-sum evaluation of the infinite closed forms: the generating function
//! G(c; z), its a_u ≥ 1 part, and star values in block form.

use crate::error::{Error, Result};
use crate::index::{check_separators, BlockForm};
use crate::kernel::{ChainKernel, MainWeights};
use crate::numerics::{pi_const, BigReal, BoundKind, Precision, TruncatedValue};

/// Final shells inspected by the truncation heuristic.
const WINDOW: usize = 10;

/// Per-shell contributions for outermost values k_0 = 1..=K.
#[derive(Clone, Debug)]
pub struct ShellSum {
    pub outer_limit: u64,
    pub shells: Vec<BigReal>,
}

impl ShellSum {
    pub fn estimate(&self) -> BigReal {
        self.shells.iter().cloned().sum()
    }
}

/// Sweeps K + 1 shells and returns the first K plus the next one.
fn chain_shells(kernel: &ChainKernel<BigReal>, k_max: u64, scale: &BigReal, prec: Precision) -> (ShellSum, BigReal) {
    let proto = BigReal::zero(prec);
    let mut shells = Vec::with_capacity(k_max as usize + 1);
    kernel.sweep(&proto, k_max + 1, |_, shell| shells.push(shell * scale));
    let next = shells.pop().expect("at least one shell");
    (
        ShellSum {
            outer_limit: k_max,
            shells,
        },
        next,
    )
}

/// Estimate and heuristic error for a shell sum.
///
/// Alternating shells with decreasing magnitude use the midpoint of the last
/// partial-sum step; the reported error is |last shell| plus the largest of
/// the final five. Shells without alternation are treated as a ~1/k² tail.
fn finalize(sum: &ShellSum, next: &BigReal, prec: Precision) -> TruncatedValue {
    let total = sum.estimate();
    let k = sum.outer_limit;
    let tail_start = sum.shells.len().saturating_sub(WINDOW - 1);
    let mut window: Vec<&BigReal> = sum.shells[tail_start..].iter().collect();
    window.push(next);
    let alternating = window.len() >= 2
        && window
            .windows(2)
            .all(|p| p[0].is_sign_negative() != p[1].is_sign_negative() && !p[0].is_zero() && !p[1].is_zero());
    let monotone = window.windows(2).all(|p| p[1].abs() < p[0].abs());
    let last = sum.shells.last().map(BigReal::abs).unwrap_or_else(|| BigReal::zero(prec));
    let max5 = sum
        .shells
        .iter()
        .rev()
        .take(5)
        .map(BigReal::abs)
        .fold(BigReal::zero(prec), BigReal::max);
    let (estimate, error) = if alternating {
        let est = if monotone { &total + &next.div_int(2) } else { total };
        (est, &last + &max5)
    } else {
        (total, &last.mul_int(2 * k as i64) + &max5)
    };
    TruncatedValue {
        estimate,
        error_indicator: error,
        terms_used: k,
        bound_kind: BoundKind::Heuristic,
    }
}

fn two_over_pi(prec: Precision) -> BigReal {
    BigReal::from_int(2, prec) / pi_const(prec)
}

fn check_terms(k_max: u64) -> Result<()> {
    if k_max == 0 {
        return Err(Error::domain("the number of shells must be at least 1"));
    }
    Ok(())
}

fn check_generating(c: &[u32], z: &[BigReal], need_c1: bool) -> Result<Vec<BigReal>> {
    check_separators(c)?;
    if need_c1 && c.first().is_some_and(|&c1| c1 < 3) {
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
    for (j, zj) in z.iter().enumerate() {
        if zj.abs() >= 1.0 {
            return Err(Error::domain(format!("|z_{j}| must be below 1")));
        }
    }
    Ok(z.iter().map(|v| v * v).collect())
}

/// t★ of the flattened block form from the coefficient shell formula.
pub fn t_star_closed_blocks(b: &BlockForm, k_max: u64, prec: Precision) -> Result<TruncatedValue> {
    check_terms(k_max)?;
    let v = b.validate_convergent_star();
    if !v.ok {
        return Err(Error::domain(format!(
            "block form {b} does not give a convergent star value: {}",
            v.reason.unwrap_or_default()
        )));
    }
    let proto = BigReal::zero(prec);
    let kernel = ChainKernel::build(&proto, b.c(), MainWeights::Coefficients { a: b.a() }, None)?;
    let scale = kernel.constant() * &two_over_pi(prec);
    let (sum, next) = chain_shells(&kernel, k_max, &scale, prec);
    Ok(finalize(&sum, &next, prec))
}

/// Shell sums of G(c; z) (scaled by 2/π and the chain constant).
fn generating_shells(
    c: &[u32],
    z: &[BigReal],
    restrict: Option<usize>,
    k_max: u64,
    prec: Precision,
) -> Result<(ShellSum, BigReal)> {
    let need_c1 = restrict.map_or(true, |u| u >= 1);
    let z_sq = check_generating(c, z, need_c1)?;
    let proto = BigReal::zero(prec);
    let kernel = ChainKernel::build(&proto, c, MainWeights::Generating { z_sq: &z_sq }, restrict)?;
    let scale = kernel.constant() * &two_over_pi(prec);
    Ok(chain_shells(&kernel, k_max, &scale, prec))
}

/// G(c; z) = Σ_{a} t★({2}^{a_0}, c_1, …, c_d, {2}^{a_d}) Π z_j^{2a_j} via shells.
pub fn g_eval_closed(c: &[u32], z: &[BigReal], k_max: u64, prec: Precision) -> Result<TruncatedValue> {
    check_terms(k_max)?;
    let (sum, next) = generating_shells(c, z, None, k_max, prec)?;
    Ok(finalize(&sum, &next, prec))
}

/// The part of G(c; z) with a_u ≥ 1.
pub fn restricted_g_eval(c: &[u32], z: &[BigReal], u: usize, k_max: u64, prec: Precision) -> Result<TruncatedValue> {
    check_terms(k_max)?;
    if u > c.len() {
        return Err(Error::domain(format!("block position {u} out of range 0..={}", c.len())));
    }
    let (sum, next) = generating_shells(c, z, Some(u), k_max, prec)?;
    Ok(finalize(&sum, &next, prec))
}

/// One row of the shell-growth diagnostic.
#[derive(Clone, Debug)]
pub struct GrowthRow {
    pub k0: u64,
    pub magnitude: BigReal,
    pub envelope: BigReal,
}

/// |G̃_{k_0}| next to C·log^a(2k_0+1)/k_0² with a = Σ c_i and C fitted at k_0 = 1.
pub fn gtilde_growth_probe(c: &[u32], z: &[BigReal], k0_max: u64, prec: Precision) -> Result<Vec<GrowthRow>> {
    check_terms(k0_max)?;
    let z_sq = check_generating(c, z, true)?;
    let proto = BigReal::zero(prec);
    let kernel = ChainKernel::build(&proto, c, MainWeights::Generating { z_sq: &z_sq }, None)?;
    let mut mags = Vec::with_capacity(k0_max as usize);
    kernel.sweep(&proto, k0_max, |_, shell| mags.push((shell * kernel.constant()).abs()));
    let a: i32 = c.iter().map(|&v| v as i32).sum();
    let log_at = |k: u64| BigReal::from_int(2 * k as i64 + 1, prec).ln().powi(a);
    let scale = &mags[0] / &log_at(1);
    Ok(mags
        .into_iter()
        .enumerate()
        .map(|(i, magnitude)| {
            let k0 = i as u64 + 1;
            let envelope = (&scale * &log_at(k0)).div_int((k0 * k0) as i64);
            GrowthRow { k0, magnitude, envelope }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::zeta_int;
    use crate::series::t_star_direct;

    fn p() -> Precision {
        Precision::new(30).unwrap()
    }

    fn r(v: f64) -> BigReal {
        BigReal::from_f64(v, p())
    }

    #[test]
    fn block_values() {
        let prec = p();
        let pi = pi_const(prec);
        let b = BlockForm::new(vec![1], vec![]).unwrap();
        let v = t_star_closed_blocks(&b, 2000, prec).unwrap();
        assert!(v.distance(&(&pi * &pi).div_int(8)) < 1e-8);
        assert_eq!(v.bound_kind, BoundKind::Heuristic);

        let b = BlockForm::new(vec![0, 0], vec![3]).unwrap();
        let v = t_star_closed_blocks(&b, 2000, prec).unwrap();
        let want = zeta_int(3, prec).unwrap().estimate.mul_int(7).div_int(8);
        assert!(v.contains(&want));

        let b = BlockForm::new(vec![1, 0], vec![3]).unwrap();
        let v = t_star_closed_blocks(&b, 2000, prec).unwrap();
        let oracle = t_star_direct(&b.expand(), 100_000, prec).unwrap();
        assert!(v.distance(&oracle.estimate) <= &v.error_indicator + &oracle.error_indicator);
        assert!(v.distance(&oracle.estimate) < 1e-6);

        let bad = BlockForm::new(vec![0, 0], vec![1]).unwrap();
        assert!(t_star_closed_blocks(&bad, 100, prec).is_err());
    }

    #[test]
    fn secant_product() {
        let prec = p();
        let pi = pi_const(prec);
        let v = g_eval_closed(&[], &[r(0.5)], 2000, prec).unwrap();
        let sqrt2 = BigReal::from_int(2, prec).sqrt();
        assert!(v.distance(&sqrt2) < 1e-7);
        let v = g_eval_closed(&[], &[BigReal::zero(prec)], 2000, prec).unwrap();
        assert!(v.distance(&BigReal::from_int(1, prec)) < 1e-7);
        let z = r(0.3);
        let v = g_eval_closed(&[], std::slice::from_ref(&z), 100_000, prec).unwrap();
        let sec = (&pi * &z).div_int(2).cos().recip();
        assert!(v.distance(&sec) < 1e-10);
        assert!(g_eval_closed(&[1], &[r(0.1), r(0.1)], 10, prec).is_err());
        assert!(g_eval_closed(&[], &[r(1.0)], 10, prec).is_err());
    }

    #[test]
    fn restricted_values() {
        let prec = p();
        let v = restricted_g_eval(&[], &[BigReal::zero(prec)], 0, 500, prec).unwrap();
        assert!(v.estimate.is_zero());
        let v = restricted_g_eval(&[], &[r(0.5)], 0, 2000, prec).unwrap();
        let want = BigReal::from_int(2, prec).sqrt() - BigReal::from_int(1, prec);
        assert!(v.distance(&want) < 1e-7);
        let half = r(0.5);
        let full = g_eval_closed(&[3], &[half.clone(), half.clone()], 2000, prec).unwrap();
        let zeroed = g_eval_closed(&[3], &[half.clone(), BigReal::zero(prec)], 2000, prec).unwrap();
        let part = restricted_g_eval(&[3], &[half.clone(), half], 1, 2000, prec).unwrap();
        let diff = &full.estimate - &zeroed.estimate;
        let tol = &(&full.error_indicator + &zeroed.error_indicator) + &part.error_indicator;
        assert!(part.distance(&diff) <= tol);
    }

    #[test]
    fn growth_probe() {
        let prec = p();
        let z = r(0.5);
        let rows = gtilde_growth_probe(&[], std::slice::from_ref(&z), 20, prec).unwrap();
        for row in &rows {
            let o = BigReal::from_int(2 * row.k0 as i64 - 1, prec);
            let want = o.mul_int(2) / (&(&o * &o) - &(&z * &z));
            assert!((&row.magnitude - &want).abs() < 1e-30);
        }
        assert!(rows.windows(2).all(|w| w[1].magnitude < w[0].magnitude));

        let zero = BigReal::zero(prec);
        let rows = gtilde_growth_probe(&[3], &[zero.clone(), zero], 100, prec).unwrap();
        assert!((&rows[0].magnitude - &rows[0].envelope).abs() < 1e-30);
        assert!(rows[1..].iter().all(|row| row.magnitude <= row.envelope));
    }
}
