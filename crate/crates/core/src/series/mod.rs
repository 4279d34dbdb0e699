//! Truncated evaluation of infinite nested sums with error indicators.

mod bounds;
mod closed;
mod generating;
mod tail;

pub use bounds::{product_tail_check, wallis_bounds};
pub use closed::{
    g_eval_closed, gtilde_growth_probe, restricted_g_eval, t_star_closed_blocks, GrowthRow, ShellSum,
};
pub use generating::g_eval_series;

use rug::ops::NegAssign;
use rug::{Assign, Float};

use crate::error::{Error, Result};
use crate::index::{Index, Sign, SignedIndex};
use crate::numerics::{BigReal, BoundKind, Precision, TruncatedValue};

/// Number of final shells inspected before trusting an alternating tail.
const LEIBNIZ_WINDOW: usize = 10;

/// Ordering of consecutive summation variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Order {
    Strict,
    Weak,
}

/// State of a single sweep k = 1, 2, … over a nested sum.
///
/// `cum[j]` holds the partial sum of level j (0 = outermost) over all
/// variables up to the current k.
pub(crate) struct NestedSweep {
    entries: Vec<u32>,
    signs: Vec<Sign>,
    order: Order,
    bits: u32,
    cum: Vec<Float>,
    powers: Vec<Float>,
    scratch: Float,
    k: u64,
}

impl NestedSweep {
    pub(crate) fn new(entries: &[u32], signs: &[Sign], order: Order, prec: Precision) -> Self {
        let bits = prec.bits();
        let smax = entries.iter().copied().max().unwrap_or(1) as usize;
        NestedSweep {
            entries: entries.to_vec(),
            signs: signs.to_vec(),
            order,
            bits,
            cum: vec![Float::new(bits); entries.len()],
            powers: vec![Float::new(bits); smax + 1],
            scratch: Float::new(bits),
            k: 0,
        }
    }

    /// Advances to the next k and returns the outermost shell value.
    pub(crate) fn step(&mut self) -> Float {
        self.k += 1;
        let k = self.k;
        self.powers[1].assign(2 * k - 1);
        self.powers[1].recip_mut();
        for e in 2..self.powers.len() {
            let (lo, hi) = self.powers.split_at_mut(e);
            hi[0].assign(&lo[e - 1] * &lo[1]);
        }
        let r = self.entries.len();
        let mut shell = Float::new(self.bits);
        let levels: Box<dyn Iterator<Item = usize>> = match self.order {
            // Inner partial sums must still exclude k.
            Order::Strict => Box::new(0..r),
            Order::Weak => Box::new((0..r).rev()),
        };
        for j in levels {
            let w = &self.powers[self.entries[j] as usize];
            if j + 1 == r {
                self.scratch.assign(w);
            } else {
                self.scratch.assign(w * &self.cum[j + 1]);
            }
            if self.signs[j].power(k) < 0 {
                self.scratch.neg_assign();
            }
            self.cum[j] += &self.scratch;
            if j == 0 {
                shell.assign(&self.scratch);
            }
        }
        shell
    }

    pub(crate) fn total(&self) -> &Float {
        &self.cum[0]
    }

    pub(crate) fn level(&self, j: usize) -> &Float {
        &self.cum[j]
    }

    pub(crate) fn k(&self) -> u64 {
        self.k
    }
}

/// Relative rounding allowance for a sweep of `k` steps over depth `r`.
fn rounding(scale: &Float, k: u64, r: usize, smax: u32, bits: u32) -> Float {
    let ops = k.saturating_mul(r as u64 + u64::from(smax) + 4) + 16;
    Float::with_val(bits, scale.clone().abs() * ops) >> bits
}

/// Returns the reported value and the plain partial sum up to K.
fn evaluate(
    entries: &[u32],
    signs: &[Sign],
    order: Order,
    k_max: u64,
    prec: Precision,
) -> Result<(TruncatedValue, BigReal)> {
    if k_max == 0 {
        return Err(Error::domain("the number of terms must be at least 1"));
    }
    let r = entries.len();
    if r == 0 {
        let one = BigReal::from_int(1, prec);
        return Ok((TruncatedValue::exact(one.clone(), prec), one));
    }
    let bits = prec.bits();
    let smax = entries.iter().copied().max().unwrap_or(1);
    let mut sweep = NestedSweep::new(entries, signs, order, prec);
    let alternating_outer = signs[0] == Sign::Minus;
    let mut window: Vec<Float> = Vec::with_capacity(LEIBNIZ_WINDOW + 1);
    let mut partial = Float::new(bits);
    let mut inner_at_k: Vec<Float> = Vec::new();
    let limit = if alternating_outer { k_max + 1 } else { k_max };
    while sweep.k() < limit {
        let shell = sweep.step();
        if sweep.k() == k_max {
            partial.assign(sweep.total());
            inner_at_k = (1..r).map(|j| sweep.level(j).clone()).collect();
        }
        if sweep.k() + LEIBNIZ_WINDOW as u64 > limit {
            window.push(shell);
        }
    }
    let majorant = tail::absolute_majorant(entries, k_max, bits);
    let round = rounding(&majorant, k_max + 1, r, smax, bits);

    if alternating_outer {
        let next = window.last().cloned().expect("window is non-empty");
        let alternates = window.len() >= 2
            && window.windows(2).all(|p| {
                p[0].is_sign_negative() != p[1].is_sign_negative()
                    && Float::with_val(bits, p[1].abs_ref()) < Float::with_val(bits, p[0].abs_ref())
            });
        if alternates {
            let half = Float::with_val(bits, &next / 2u32);
            let est = Float::with_val(bits, &partial + &half);
            let err = Float::with_val(bits, half.abs() + &round);
            let value = TruncatedValue {
                estimate: BigReal::from_float(est),
                error_indicator: BigReal::from_float(err),
                terms_used: k_max,
                bound_kind: BoundKind::Rigorous,
            };
            return Ok((value, BigReal::from_float(partial)));
        }
        let last5 = window
            .iter()
            .rev()
            .skip(1)
            .take(5)
            .map(|v| Float::with_val(bits, v.abs_ref()))
            .fold(Float::new(bits), |a, b| a.max(&b));
        let err = Float::with_val(bits, next.abs() + last5) + &round;
        let value = TruncatedValue {
            estimate: BigReal::from_float(partial.clone()),
            error_indicator: BigReal::from_float(err),
            terms_used: k_max,
            bound_kind: BoundKind::Heuristic,
        };
        return Ok((value, BigReal::from_float(partial)));
    }

    let plain = signs.iter().all(|&s| s == Sign::Plus);
    let enclosure = tail::outer_tail(entries, &inner_at_k, plain, k_max, bits);
    let est = Float::with_val(bits, &partial + &enclosure.shift);
    let err = enclosure.error + &round;
    let value = TruncatedValue {
        estimate: BigReal::from_float(est),
        error_indicator: BigReal::from_float(err),
        terms_used: k_max,
        bound_kind: if enclosure.proved {
            BoundKind::Rigorous
        } else {
            BoundKind::Heuristic
        },
    };
    Ok((value, BigReal::from_float(partial)))
}

/// Σ_{K ≥ k_1 > … > k_r ≥ 1} Π σ_i^{k_i} (2k_i − 1)^{−s_i}, with the tail
/// beyond K accounted for in the error indicator.
pub fn nested_t_sum(s: &SignedIndex, k_max: u64, prec: Precision) -> Result<TruncatedValue> {
    if !s.is_admissible() {
        return Err(Error::domain(format!("index `{s}` is not admissible (leading unsigned 1)")));
    }
    Ok(evaluate(s.entries().entries(), s.signs(), Order::Strict, k_max, prec)?.0)
}

/// Σ_{K ≥ k_1 ≥ … ≥ k_r ≥ 1} Π (2k_i − 1)^{−s_i} with a proved tail enclosure.
pub fn t_star_direct(s: &Index, k_max: u64, prec: Precision) -> Result<TruncatedValue> {
    Ok(t_star_partial(s, k_max, prec)?.0)
}

/// Star value enclosure together with the partial sum t★_K(s).
pub(crate) fn t_star_partial(s: &Index, k_max: u64, prec: Precision) -> Result<(TruncatedValue, BigReal)> {
    if !s.is_admissible() {
        return Err(Error::domain(format!("star sum over `{s}` diverges (first entry 1)")));
    }
    let signs = vec![Sign::Plus; s.depth()];
    evaluate(s.entries(), &signs, Order::Weak, k_max, prec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index::parse_signed_index;
    use crate::numerics::{pi_const, zeta_int};

    fn p() -> Precision {
        Precision::new(30).unwrap()
    }

    fn signed(t: &str) -> SignedIndex {
        parse_signed_index(t).unwrap()
    }

    /// Plain f64 nested sum by explicit loops, as an independent oracle.
    fn loops(entries: &[u32], signs: &[i32], strict: bool, k_max: u64) -> f64 {
        fn rec(e: &[u32], g: &[i32], strict: bool, upper: u64) -> f64 {
            match e.split_first() {
                None => 1.0,
                Some((&s, rest)) => {
                    let mut acc = 0.0;
                    for k in 1..=upper {
                        let sg = if g[0] < 0 && k % 2 == 1 { -1.0 } else { 1.0 };
                        let inner = rec(rest, &g[1..], strict, if strict { k - 1 } else { k });
                        acc += sg * inner / ((2 * k - 1) as f64).powi(s as i32);
                    }
                    acc
                }
            }
        }
        rec(entries, signs, strict, k_max)
    }

    #[test]
    fn sweep_matches_loops() {
        let cases: [(&[u32], &[i32]); 4] = [(&[2], &[1]), (&[3, 1], &[1, 1]), (&[2, 1, 2], &[-1, 1, -1]), (&[1, 2], &[-1, 1])];
        for (e, g) in cases {
            let signs: Vec<Sign> = g.iter().map(|&v| Sign::from_parity(v < 0)).collect();
            for order in [Order::Strict, Order::Weak] {
                let mut sw = NestedSweep::new(e, &signs, order, p());
                for _ in 0..40 {
                    sw.step();
                }
                let want = loops(e, g, order == Order::Strict, 40);
                assert!((sw.total().to_f64() - want).abs() < 1e-13, "{e:?} {g:?} {order:?}");
            }
        }
    }

    #[test]
    fn classical_values() {
        let prec = p();
        let pi = pi_const(prec);
        let v = nested_t_sum(&signed("2"), 100_000, prec).unwrap();
        let want = (&pi * &pi).div_int(8);
        assert!(v.contains(&want));
        assert!(v.error_indicator < 1e-9);
        assert_eq!(v.bound_kind, BoundKind::Rigorous);

        let catalan = BigReal::parse("0.915965594177219015054603514932", prec).unwrap();
        let v = nested_t_sum(&signed("~2"), 1000, prec).unwrap();
        assert!(v.contains(&-catalan));
        assert_eq!(v.bound_kind, BoundKind::Rigorous);

        let v = nested_t_sum(&signed("~1"), 100_000, prec).unwrap();
        assert!(v.contains(&-pi.div_int(4)));
        assert!(v.distance(&-pi.div_int(4)) < 1e-9);
        assert!(nested_t_sum(&signed("1,2"), 10, prec).is_err());
    }

    #[test]
    fn star_values() {
        let prec = p();
        assert_eq!(t_star_direct(&Index::empty(), 5, prec).unwrap().estimate, 1.0);
        let v = t_star_direct(&Index::new(vec![2]).unwrap(), 1_000_000, prec).unwrap();
        assert!(v.error_indicator < 1.0 / (4.0 * 1.0e6 - 2.0));
        let v = t_star_direct(&Index::new(vec![3]).unwrap(), 10_000, prec).unwrap();
        let z3 = zeta_int(3, prec).unwrap().estimate.mul_int(7).div_int(8);
        assert!(v.contains(&z3));
        assert!(t_star_direct(&Index::new(vec![1, 2]).unwrap(), 10, prec).is_err());
    }

    #[test]
    fn enclosures_nest_under_refinement() {
        let prec = p();
        for idx in ["2,1", "3,1,1", "2,2,1,3"] {
            let s: Index = idx.parse().unwrap();
            let a = t_star_direct(&s, 2_000, prec).unwrap();
            let b = t_star_direct(&s, 8_000, prec).unwrap();
            assert_eq!(a.bound_kind, BoundKind::Rigorous, "{idx}");
            assert!(a.distance(&b.estimate) <= a.error_indicator, "{idx}");
            assert!(b.error_indicator < a.error_indicator);
            let strict = nested_t_sum(&SignedIndex::all_plus(s.clone()), 2_000, prec).unwrap();
            let strict_fine = nested_t_sum(&SignedIndex::all_plus(s), 8_000, prec).unwrap();
            assert!(strict.distance(&strict_fine.estimate) <= strict.error_indicator, "{idx}");
        }
    }

    #[test]
    fn strict_all_plus_monotone_in_k() {
        let prec = p();
        let s = signed("3,1,2");
        let mut sw = NestedSweep::new(s.entries().entries(), s.signs(), Order::Strict, prec);
        let mut last = Float::new(prec.bits());
        for _ in 0..200 {
            sw.step();
            assert!(*sw.total() >= last);
            last.assign(sw.total());
        }
    }

    #[test]
    fn signed_inner_bounds_hold() {
        let prec = p();
        for t in ["3,~1", "2,~3,1", "4,~1,~1"] {
            let s = signed(t);
            let a = nested_t_sum(&s, 1_000, prec).unwrap();
            let b = nested_t_sum(&s, 64_000, prec).unwrap();
            assert!(a.distance(&b.estimate) <= a.error_indicator, "{t}");
        }
        for t in ["~2,1", "~3,2,1", "~1,~1"] {
            let s = signed(t);
            let a = nested_t_sum(&s, 1_000, prec).unwrap();
            let b = nested_t_sum(&s, 64_000, prec).unwrap();
            assert!(a.distance(&b.estimate) <= &a.error_indicator + &b.error_indicator, "{t}");
        }
    }
}
