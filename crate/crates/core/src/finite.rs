//! Exact evaluation of finite nested sums, truncated generating functions and
//! the binomial identities that drive their closed forms.

use rug::ops::Pow;
use rug::{Integer, Rational};

use crate::error::{Error, Result};
use crate::index::{check_separators, triangle, BlockForm, Index};
use crate::kernel::{BlockAutomaton, ChainKernel, Field, MainWeights};
use crate::numerics::binomial;

fn odd(k: u64) -> Integer {
    Integer::from(2 * i128::from(k) - 1)
}

fn inv_odd_pow(k: u64, e: u32) -> Rational {
    Rational::from((Integer::from(1), odd(k).pow(e)))
}

fn binom(n: u64, k: i64) -> Integer {
    binomial(n as u32, k)
}

/// V^#_{k,m}({1}^{ones}); `ones ≤ 0` selects the empty-index branch.
pub fn v_sharp(k: u64, m: u64, ones: i64) -> Result<Rational> {
    if ones <= 0 {
        if triangle(k, m) == 0 {
            return Ok(Rational::from(1));
        }
        return Ok(Rational::from((Integer::from(2) * odd(k), odd(m))));
    }
    if m == 0 || k < m {
        return Err(Error::domain(format!(
            "V# over {{1}}^{ones} needs k >= m >= 1, got k = {k}, m = {m}"
        )));
    }
    // f(l) = Σ over chains below l ending at m; innermost node first.
    let width = (k - m + 1) as usize;
    let mut f: Vec<Rational> = (m..=k)
        .map(|l| {
            let w = inv_odd_pow(l, 1);
            if l == m {
                w
            } else {
                w * 2u32
            }
        })
        .collect();
    for _ in 1..ones {
        let mut next = Vec::with_capacity(width);
        let mut prefix = Rational::new();
        for (i, l) in (m..=k).enumerate() {
            prefix += &f[i];
            let edge = Rational::from(&prefix * 2u32) - &f[i];
            next.push(edge * inv_odd_pow(l, 1));
        }
        f = next;
    }
    let total: Rational = f.iter().sum::<Rational>() * 2u32 - &f[width - 1];
    Ok(total * Rational::from((odd(k), odd(m))))
}

/// Weakly decreasing nested sum restricted to n ≥ k_1 ≥ … ≥ k_r ≥ m.
fn window_sum(n: u64, m: u64, s: &Index) -> Rational {
    let e = s.entries();
    let r = e.len();
    if r == 0 {
        return Rational::from(1);
    }
    let mut prefix = vec![Rational::new(); r];
    for k in m..=n {
        let mut below: Option<Rational> = None;
        for j in (0..r).rev() {
            let w = inv_odd_pow(k, e[j]);
            let val = match &below {
                None => w,
                Some(b) => w * b,
            };
            prefix[j] += &val;
            below = Some(prefix[j].clone());
        }
    }
    prefix.swap_remove(0)
}

/// t★_n(s) = Σ_{n ≥ k_1 ≥ … ≥ k_r ≥ 1} Π (2k_i − 1)^{−s_i}.
pub fn t_harmonic_star(n: u64, s: &Index) -> Rational {
    window_sum(n, 1, s)
}

/// t★_{n,m}(s), the star sum with every variable in [m, n].
pub fn t_window_star(n: u64, m: u64, s: &Index) -> Result<Rational> {
    if m == 0 || m > n {
        return Err(Error::domain(format!("window needs n >= m >= 1, got n = {n}, m = {m}")));
    }
    Ok(window_sum(n, m, s))
}

fn check_z(z: &[Rational], d: usize) -> Result<Vec<Rational>> {
    if z.len() != d + 1 {
        return Err(Error::domain(format!(
            "expected {} generating variables for {d} separators, got {}",
            d + 1,
            z.len()
        )));
    }
    for (j, zj) in z.iter().enumerate() {
        if zj.clone().abs() >= 1 {
            return Err(Error::domain(format!("|z_{j}| must be below 1")));
        }
    }
    Ok(z.iter().map(|v| Rational::from(v * v)).collect())
}

/// Σ_{a_j ≤ a_max} t★_n({2}^{a_0}, c_1, …, c_d, {2}^{a_d}) Π z_j^{2a_j}.
pub fn gn_series_eval(n: u64, c: &[u32], z: &[Rational], a_max: u32) -> Result<Rational> {
    check_separators(c)?;
    let z_sq = check_z(z, c.len())?;
    let proto = Rational::new();
    let mut au = BlockAutomaton::new(&proto, c, z_sq, a_max);
    for k in 1..=n {
        au.step(&proto, k);
    }
    Ok(au.accepted())
}

/// Π_{k=2}^{n} (2k−1)²/((2k−1)² − 1): bounds every coefficient of a run of twos.
fn run_majorant(n: u64) -> Rational {
    let mut m = Rational::from(1);
    for k in 2..=n {
        let o2 = odd(k).square();
        m *= Rational::from((o2.clone(), o2 - 1u32));
    }
    m
}

/// Upper bound on G_n − (the same series truncated at a_max), for any z.
pub fn gn_tail_certificate(n: u64, c: &[u32], z: &[Rational], a_max: u32) -> Result<Rational> {
    check_separators(c)?;
    let z_sq = check_z(z, c.len())?;
    let sep = Index::new(c.to_vec())?;
    let mut full = Rational::from(1);
    let mut kept = Rational::from(1);
    for x in &z_sq {
        let geo = Rational::from(1) / (1 - x.clone());
        full *= &geo;
        let xp = x.clone().pow(a_max + 1);
        kept *= (1 - xp) * geo;
    }
    let m = run_majorant(n).pow(c.len() as i32 + 1);
    Ok(m * t_harmonic_star(n, &sep) * (full - kept))
}

fn finite_prefactor(n: u64) -> Rational {
    Rational::from((Integer::from(n) * binom(2 * n, n as i64), Integer::from(1) << (4 * n as u32 - 2)))
}

fn finite_chain(n: u64, kernel: &ChainKernel<Rational>) -> Rational {
    let proto = Rational::new();
    let mut acc = Rational::new();
    kernel.sweep(&proto, n, |k, shell| {
        acc += Rational::from(shell * binom(2 * n - 1, n as i64 - k as i64));
    });
    acc * kernel.constant() * finite_prefactor(n)
}

fn require_n(n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::domain("n must be at least 1"));
    }
    Ok(())
}

/// G_n(c; z) from the explicit binomial-weighted shell formula.
pub fn gn_closed_eval(n: u64, c: &[u32], z: &[Rational]) -> Result<Rational> {
    require_n(n)?;
    check_separators(c)?;
    let z_sq = check_z(z, c.len())?;
    let kernel = ChainKernel::build(&Rational::new(), c, MainWeights::Generating { z_sq: &z_sq }, None)?;
    Ok(finite_chain(n, &kernel))
}

/// t★_n of the flattened block form, from the coefficient shell formula.
pub fn gn_coefficient_closed(n: u64, b: &BlockForm) -> Result<Rational> {
    require_n(n)?;
    let kernel = ChainKernel::build(&Rational::new(), b.c(), MainWeights::Coefficients { a: b.a() }, None)?;
    Ok(finite_chain(n, &kernel))
}

fn check_u(u: usize, d: usize) -> Result<()> {
    if u > d {
        return Err(Error::domain(format!("block position {u} out of range 0..={d}")));
    }
    Ok(())
}

/// Part of G_n(c; z) with a_u ≥ 1, as G_n(c; z) − G_n(c; z with z_u = 0).
pub fn gn_restricted_eval(n: u64, c: &[u32], z: &[Rational], u: usize) -> Result<Rational> {
    check_u(u, c.len())?;
    let full = gn_closed_eval(n, c, z)?;
    let mut zz = z.to_vec();
    zz[u] = Rational::new();
    Ok(full - gn_closed_eval(n, c, &zz)?)
}

/// Same quantity as [`gn_restricted_eval`], from the weighted shell formula
/// carrying z_u²/(2k_u − 1)².
pub fn gn_restricted_weighted(n: u64, c: &[u32], z: &[Rational], u: usize) -> Result<Rational> {
    require_n(n)?;
    check_u(u, c.len())?;
    check_separators(c)?;
    let z_sq = check_z(z, c.len())?;
    let kernel = ChainKernel::build(&Rational::new(), c, MainWeights::Generating { z_sq: &z_sq }, Some(u))?;
    Ok(finite_chain(n, &kernel))
}

/// Both sides of the recurrence that peels the outermost separator:
/// G_n(c; z) = A·G_{n−1}(c; z) + B·G_n(c⁻; z⁻).
pub fn gn_recurrence_sides(n: u64, c: &[u32], z: &[Rational]) -> Result<(Rational, Rational)> {
    require_n(n)?;
    if c.is_empty() {
        return Err(Error::domain("recurrence needs at least one separator"));
    }
    check_separators(c)?;
    check_z(z, c.len())?;
    let lhs = gn_closed_eval(n, c, z)?;
    let o2 = Rational::from(odd(n).square());
    let denom = &o2 - z[0].clone().square();
    let prev = if n == 1 {
        Rational::new()
    } else {
        gn_closed_eval(n - 1, c, z)?
    };
    let shifted = gn_closed_eval(n, &c[1..], &z[1..])?;
    let lead = (o2.clone() / &denom) * prev;
    let e = 2 - i64::from(c[0]);
    let pow = Rational::from(1).odd_pow(n, e as i32);
    let rest = pow / &denom * shifted;
    Ok((lhs, lead + rest))
}

/// Σ_{k=l+1}^{n} (2k−1) C(2n−1, n−k) and (n−l) C(2n−1, n−l).
pub fn identity_weighted_binomial(n: u64, l: u64) -> (Rational, Rational) {
    if n == 0 {
        // empty sum on the left, factor n − l = 0 on the right
        return (Rational::new(), Rational::new());
    }
    let mut lhs = Integer::new();
    for k in l + 1..=n {
        lhs += odd(k) * binom(2 * n - 1, n as i64 - k as i64);
    }
    let rhs = Integer::from(n as i64 - l as i64) * binom(2 * n - 1, n as i64 - l as i64);
    (Rational::from(lhs), Rational::from(rhs))
}

/// Σ_{k=l+1}^{n} (−1)^k C(2n−1, n−k) and (−1)^{l+1}(n−l)C(2n−1,n−l)/(2n−1).
pub fn identity_alternating_binomial(n: u64, l: u64) -> (Rational, Rational) {
    if n == 0 {
        return (Rational::new(), Rational::new());
    }
    let mut lhs = Rational::new();
    for k in l + 1..=n {
        let t = Rational::from(binom(2 * n - 1, n as i64 - k as i64));
        if k % 2 == 1 {
            lhs -= t;
        } else {
            lhs += t;
        }
    }
    let mut rhs = Rational::from((
        Integer::from(n as i64 - l as i64) * binom(2 * n - 1, n as i64 - l as i64),
        odd(n),
    ));
    if l % 2 == 0 {
        rhs = -rhs;
    }
    (lhs, rhs)
}

/// Σ_{k=l}^{n} ((−1)^k/(2k−1)) C(2n−1, n−k) V^#_{k,l}({1}^c) and
/// (−1)^l C(2n−1, n−l)/(2n−1)^{c+1}.
pub fn identity_vsharp_binomial(n: u64, l: u64, c: u32) -> Result<(Rational, Rational)> {
    if l < 1 || l > n {
        return Err(Error::domain(format!("need n >= l >= 1, got n = {n}, l = {l}")));
    }
    let mut lhs = Rational::new();
    for k in l..=n {
        let v = v_sharp(k, l, i64::from(c))?;
        let t = Rational::from((binom(2 * n - 1, n as i64 - k as i64), odd(k))) * v;
        if k % 2 == 1 {
            lhs -= t;
        } else {
            lhs += t;
        }
    }
    let mut rhs = Rational::from((binom(2 * n - 1, n as i64 - l as i64), odd(n).pow(c + 1)));
    if l % 2 == 1 {
        rhs = -rhs;
    }
    Ok((lhs, rhs))
}
