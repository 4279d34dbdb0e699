//! Summation kernels shared by the exact and the floating engines.
//!
//! Two dynamic programs live here:
//!
//! * [`ChainKernel`] evaluates the shell sums behind the closed forms for the
//!   generating function and its coefficients. Every V^# factor is unfolded
//!   into a chain of nodes linked by "≥ with a factor 2 on strict descent"
//!   edges, so the whole nested sum becomes one chain that is swept once.
//! * [`BlockAutomaton`] evaluates truncated generating functions directly from
//!   their definition by reading the index from the innermost entry outwards.

use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::error::Result;
use crate::index::{check_separators, delta_weight};
use crate::numerics::BigReal;

/// Minimal field interface over exact rationals and [`BigReal`].
pub(crate) trait Field: Clone {
    fn zero_like(&self) -> Self;
    fn int_like(&self, v: i64) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// (2k − 1)^e, with k = 0 allowed.
    fn odd_pow(&self, k: u64, e: i32) -> Self;

    fn one_like(&self) -> Self {
        self.int_like(1)
    }
}

impl Field for Rational {
    fn zero_like(&self) -> Self {
        Rational::new()
    }
    fn int_like(&self, v: i64) -> Self {
        Rational::from(v)
    }
    fn add(&self, o: &Self) -> Self {
        Rational::from(self + o)
    }
    fn sub(&self, o: &Self) -> Self {
        Rational::from(self - o)
    }
    fn mul(&self, o: &Self) -> Self {
        Rational::from(self * o)
    }
    fn div(&self, o: &Self) -> Self {
        Rational::from(self / o)
    }
    fn neg(&self) -> Self {
        Rational::from(-self)
    }
    fn odd_pow(&self, k: u64, e: i32) -> Self {
        let base = Integer::from(2 * i128::from(k) - 1);
        let p = base.pow(e.unsigned_abs());
        if e >= 0 {
            Rational::from(p)
        } else {
            Rational::from((Integer::from(1), p))
        }
    }
}

impl Field for BigReal {
    fn zero_like(&self) -> Self {
        BigReal::from_float(Float::new(self.bits()))
    }
    fn int_like(&self, v: i64) -> Self {
        BigReal::from_float(Float::with_val(self.bits(), v))
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn odd_pow(&self, k: u64, e: i32) -> Self {
        let base = Float::with_val(self.bits(), 2 * i128::from(k) - 1);
        BigReal::from_float(base.pow(e))
    }
}

/// One node of an unfolded chain.
#[derive(Clone, Debug)]
struct Node<F> {
    /// Weight carries (−1)^k when set.
    alternating: bool,
    /// Exponent of (2k − 1).
    exponent: i32,
    /// Pole term: the weight is divided by (2k − 1)² − pole.
    pole: Option<F>,
}

impl<F: Field> Node<F> {
    fn weight(&self, proto: &F, k: u64) -> F {
        let mut w = proto.odd_pow(k, self.exponent);
        if let Some(p) = &self.pole {
            let denom = proto.odd_pow(k, 2).sub(p);
            w = w.div(&denom);
        }
        if self.alternating && k % 2 == 1 {
            w = w.neg();
        }
        w
    }
}

/// What the main nodes of the chain carry.
pub(crate) enum MainWeights<'a, F> {
    /// Generating-function shells: one squared variable per block.
    Generating { z_sq: &'a [F] },
    /// Coefficient shells: the run lengths a_0..a_d of twos.
    Coefficients { a: &'a [u32] },
}

/// The unfolded chain k_0 ≥ (inner nodes) ≥ k_1 ≥ … ≥ k_d ≥ 1.
pub(crate) struct ChainKernel<F> {
    nodes: Vec<Node<F>>,
    constant: F,
}

impl<F: Field> ChainKernel<F> {
    /// Builds the chain for separators `c`. With `restrict = Some(u)` the
    /// generating weights gain the factor z_u²/(2k_u − 1)².
    pub(crate) fn build(
        proto: &F,
        c: &[u32],
        weights: MainWeights<'_, F>,
        restrict: Option<usize>,
    ) -> Result<Self> {
        check_separators(c)?;
        let d = c.len();
        let sep = |i: usize| -> u32 {
            if i == 0 {
                1
            } else if i == d + 1 {
                0
            } else {
                c[i - 1]
            }
        };
        // The link from k_{-1} = 0 contributes 2·(−1)/(2k_0 − 1).
        let mut constant = proto.int_like(-2);
        let mut nodes = Vec::new();
        for i in 0..=d {
            if i >= 1 {
                let inner = i64::from(c[i - 1]) - 3;
                for _ in 0..inner.max(0) {
                    nodes.push(Node {
                        alternating: false,
                        exponent: -1,
                        pole: None,
                    });
                }
            }
            let delta = (delta_weight(sep(i))? + delta_weight(sep(i + 1))?) as i32;
            let telescoped = -1 + i32::from(i < d);
            let (mut exponent, pole) = match &weights {
                MainWeights::Generating { z_sq } => (delta - 1 + telescoped, Some(z_sq[i].clone())),
                MainWeights::Coefficients { a } => (-(2 * a[i] as i32 - delta + 3) + telescoped, None),
            };
            if restrict == Some(i) {
                if let MainWeights::Generating { z_sq } = &weights {
                    exponent -= 2;
                    constant = constant.mul(&z_sq[i]);
                }
            }
            nodes.push(Node {
                alternating: delta % 2 == 1,
                exponent,
                pole,
            });
        }
        Ok(ChainKernel { nodes, constant })
    }

    pub(crate) fn constant(&self) -> &F {
        &self.constant
    }

    /// Calls `visit(k, shell)` for k = 1..=k_max, where `shell` is the sum
    /// over all chains whose outermost node equals k, without the constant.
    pub(crate) fn sweep(&self, proto: &F, k_max: u64, mut visit: impl FnMut(u64, &F)) {
        let len = self.nodes.len();
        let mut prefix: Vec<F> = vec![proto.zero_like(); len];
        for k in 1..=k_max {
            // Σ_{u ≤ k} 2^{Δ(k,u)} f(u) = 2·prefix(k) − f(k).
            let mut below: Option<F> = None;
            let mut top = proto.zero_like();
            for j in (0..len).rev() {
                let w = self.nodes[j].weight(proto, k);
                let val = match &below {
                    None => w,
                    Some(b) => w.mul(b),
                };
                prefix[j] = prefix[j].add(&val);
                below = Some(prefix[j].add(&prefix[j]).sub(&val));
                top = val;
            }
            visit(k, &top);
        }
    }
}

/// Reads block-form words from the innermost letter outwards.
///
/// States are (block j, twos read in that block t ≤ a_max); a letter of value
/// k is either a 2 (weight z_j²/(2k−1)²) or the separator c_j that closes
/// block j and opens block j − 1.
pub(crate) struct BlockAutomaton<F> {
    c: Vec<u32>,
    z_sq: Vec<F>,
    a_max: usize,
    values: Vec<F>,
}

impl<F: Field> BlockAutomaton<F> {
    pub(crate) fn new(proto: &F, c: &[u32], z_sq: Vec<F>, a_max: u32) -> Self {
        let d = c.len();
        let width = a_max as usize + 1;
        let mut values = vec![proto.zero_like(); (d + 1) * width];
        values[d * width] = proto.one_like();
        BlockAutomaton {
            c: c.to_vec(),
            z_sq,
            a_max: a_max as usize,
            values,
        }
    }

    fn width(&self) -> usize {
        self.a_max + 1
    }

    /// Reads every letter equal to k (any number of them).
    pub(crate) fn step(&mut self, proto: &F, k: u64) {
        let d = self.c.len();
        let w = self.width();
        let y2 = proto.odd_pow(k, -2);
        for j in (0..=d).rev() {
            if j < d {
                let closing = proto.odd_pow(k, -(self.c[j] as i32));
                let total = self.block_total(j + 1);
                let add = closing.mul(&total);
                self.values[j * w] = self.values[j * w].add(&add);
            }
            let step = self.z_sq[j].mul(&y2);
            for t in 1..w {
                let add = step.mul(&self.values[j * w + t - 1]);
                self.values[j * w + t] = self.values[j * w + t].add(&add);
            }
        }
    }

    /// Σ_t value(j, t).
    pub(crate) fn block_total(&self, j: usize) -> F {
        let w = self.width();
        let mut acc = self.values[j * w].clone();
        for t in 1..w {
            acc = acc.add(&self.values[j * w + t]);
        }
        acc
    }

    /// Σ_{t < a_max} value(j, t): states that may still read another 2.
    pub(crate) fn block_open(&self, j: usize) -> F {
        let w = self.width();
        let mut acc = self.values[j * w].zero_like();
        for t in 0..self.a_max {
            acc = acc.add(&self.values[j * w + t]);
        }
        acc
    }

    /// Total weight of complete words read so far.
    pub(crate) fn accepted(&self) -> F {
        self.block_total(0)
    }
}
