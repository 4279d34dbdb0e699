use rug::Integer;

use crate::error::{Error, Result};

/// C(n, k), zero outside 0 ≤ k ≤ n.
pub fn binomial(n: u32, k: i64) -> Integer {
    if k < 0 || k > i64::from(n) {
        return Integer::new();
    }
    Integer::from(Integer::binomial_u(n, k as u32))
}

/// n!! for n ≥ −1, with (−1)!! = 0!! = 1.
pub fn double_factorial(n: i64) -> Result<Integer> {
    if n < -1 {
        return Err(Error::domain(format!("double factorial needs n >= -1, got {n}")));
    }
    if n <= 0 {
        return Ok(Integer::from(1));
    }
    let n = u32::try_from(n).map_err(|_| Error::domain("double factorial argument too large"))?;
    Ok(Integer::from(Integer::factorial_2(n)))
}

/// Euler numbers E_0, E_2, …, E_{n_max} from Σ_k C(2m,2k)E_{2k} = 0.
pub fn euler_numbers(n_max: u32) -> Result<Vec<Integer>> {
    if n_max % 2 != 0 {
        return Err(Error::domain(format!("euler_numbers needs an even bound, got {n_max}")));
    }
    let half = n_max / 2;
    let mut out: Vec<Integer> = Vec::with_capacity(half as usize + 1);
    out.push(Integer::from(1));
    for m in 1..=half {
        let mut acc = Integer::new();
        for (k, e) in out.iter().enumerate() {
            acc += binomial(2 * m, 2 * k as i64) * e;
        }
        out.push(-acc);
    }
    Ok(out)
}

/// Compositions of `total` into exactly `parts` positive parts, in
/// lexicographic order.
#[derive(Clone, Debug)]
pub struct Compositions {
    current: Option<Vec<u32>>,
}

pub fn compositions(total: u32, parts: u32) -> Compositions {
    let current = if parts == 0 {
        if total == 0 {
            Some(Vec::new())
        } else {
            None
        }
    } else if total < parts {
        None
    } else {
        let mut v = vec![1u32; parts as usize];
        v[parts as usize - 1] = total - parts + 1;
        Some(v)
    };
    Compositions { current }
}

impl Iterator for Compositions {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        let out = self.current.take()?;
        let r = out.len();
        if r >= 2 {
            // Bump the rightmost position whose suffix still has slack.
            let mut suffix: u32 = out[r - 1];
            for i in (0..r - 1).rev() {
                let slots = (r - 1 - i) as u32;
                if suffix > slots {
                    let mut next = out.clone();
                    next[i] += 1;
                    for v in next.iter_mut().take(r - 1).skip(i + 1) {
                        *v = 1;
                    }
                    next[r - 1] = suffix - 1 - (slots - 1);
                    self.current = Some(next);
                    break;
                }
                suffix += out[i];
            }
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn binomial_small() {
        assert_eq!(binomial(3, 1), 3);
        assert_eq!(binomial(4, 5), 0);
        assert_eq!(binomial(4, -1), 0);
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(0, 0), 1);
    }

    #[test]
    fn double_factorial_values() {
        assert_eq!(double_factorial(-1).unwrap(), 1);
        assert_eq!(double_factorial(0).unwrap(), 1);
        assert_eq!(double_factorial(5).unwrap(), 15);
        assert_eq!(double_factorial(6).unwrap(), 48);
        assert!(double_factorial(-2).is_err());
    }

    #[test]
    fn euler_numbers_known() {
        assert_eq!(euler_numbers(0).unwrap(), vec![Integer::from(1)]);
        let e = euler_numbers(10).unwrap();
        let want = [1i64, -1, 5, -61, 1385, -50521];
        for (got, w) in e.iter().zip(want) {
            assert_eq!(*got, w);
        }
        assert!(euler_numbers(3).is_err());
    }

    #[test]
    fn euler_recurrence_holds() {
        let e = euler_numbers(40).unwrap();
        for n in 1..=20u32 {
            let mut s = Integer::new();
            for k in 0..=n {
                s += binomial(2 * n, 2 * k as i64) * &e[k as usize];
            }
            assert_eq!(s, 0, "n = {n}");
        }
    }

    #[test]
    fn compositions_lexicographic() {
        let all: Vec<Vec<u32>> = compositions(4, 2).collect();
        assert_eq!(all, vec![vec![1, 3], vec![2, 2], vec![3, 1]]);
        let three: Vec<Vec<u32>> = compositions(5, 3).collect();
        assert_eq!(three.first().unwrap(), &vec![1, 1, 3]);
        assert_eq!(three.last().unwrap(), &vec![3, 1, 1]);
        assert_eq!(compositions(3, 1).collect::<Vec<_>>(), vec![vec![3]]);
        assert_eq!(compositions(2, 3).count(), 0);
        assert_eq!(compositions(0, 0).count(), 1);
    }

    proptest! {
        #[test]
        fn composition_counts(m in 1u32..14, r in 1u32..14) {
            let items: Vec<Vec<u32>> = compositions(m, r).collect();
            prop_assert_eq!(Integer::from(items.len()), binomial(m - 1, i64::from(r) - 1));
            for w in items.windows(2) {
                prop_assert!(w[0] < w[1]);
            }
            for c in &items {
                prop_assert_eq!(c.iter().sum::<u32>(), m);
                prop_assert!(c.iter().all(|&x| x >= 1));
            }
        }

        #[test]
        fn pascal_rule(n in 1u32..200, k in -2i64..202) {
            prop_assert_eq!(binomial(n, k), binomial(n - 1, k - 1) + binomial(n - 1, k));
        }
    }
}
