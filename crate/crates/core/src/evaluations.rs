//! Closed-form right-hand sides for star values of block indices, expressed
//! through alternating t-values, ζ values and Euler numbers, together with
//! drivers that compare them against direct star sums.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Mutex;

use rug::ops::Pow;
use rug::{Integer, Rational};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::index::{BlockForm, Index, SignedIndex};
use crate::numerics::{
    binomial, compositions, euler_numbers, ln2_const, pi_const, zeta_int, BigReal, BoundKind, Precision,
    TruncatedValue,
};
use crate::series::{nested_t_sum, t_star_direct};

/// Which pair of separators a two-separator identity uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SeparatorPair {
    ThreeOne,
    ThreeThree,
    OneThree,
    OneOne,
}

impl SeparatorPair {
    pub fn separators(self) -> [u32; 2] {
        match self {
            SeparatorPair::ThreeOne => [3, 1],
            SeparatorPair::ThreeThree => [3, 3],
            SeparatorPair::OneThree => [1, 3],
            SeparatorPair::OneOne => [1, 1],
        }
    }

    fn code(self) -> u32 {
        let [x, y] = self.separators();
        10 * x + y
    }

    fn from_code(code: u32) -> Option<Self> {
        match code {
            31 => Some(SeparatorPair::ThreeOne),
            33 => Some(SeparatorPair::ThreeThree),
            13 => Some(SeparatorPair::OneThree),
            11 => Some(SeparatorPair::OneOne),
            _ => None,
        }
    }
}

/// An evaluation formula together with its parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    /// t★({2}^a).
    Thm41 { a: u32 },
    /// t★({2}^a, 3, {2}^b).
    Thm42 { a: u32, b: u32 },
    /// t★({2}^a, 3, {2}^b) through t★({2}^m) factors.
    LiWang42 { a: u32, b: u32 },
    /// t★({2}^a, 1, {2}^b), a ≥ 1.
    Thm44 { a: u32, b: u32 },
    /// t★({2}^a, c+3, {2}^b), c ≥ 1.
    Thm45 { a: u32, b: u32, c: u32 },
    /// t★({2}^a, 3, {2}^b, x, {2}^c) with x ∈ {1, 3}.
    Thm46 { a: u32, b: u32, c: u32, pair: SeparatorPair },
    /// t★({2}^a, 1, {2}^b, x, {2}^c) with x ∈ {3, 1}, a ≥ 1.
    Thm47 { a: u32, b: u32, c: u32, pair: SeparatorPair },
    /// t★(2, {1}^d, 2).
    Thm48 { d: u32 },
    /// t★({{2}^a, 3, {2}^a, 1}^{d−1}, {2}^a, 3, {2}^a), d ≥ 1.
    Thm49 { d: u32, a: u32 },
}

pub const FORMULA_IDS: [&str; 9] = [
    "thm41", "thm42", "liwang42", "thm44", "thm45", "thm46", "thm47", "thm48", "thm49",
];

impl Formula {
    pub fn id(&self) -> &'static str {
        match self {
            Formula::Thm41 { .. } => "thm41",
            Formula::Thm42 { .. } => "thm42",
            Formula::LiWang42 { .. } => "liwang42",
            Formula::Thm44 { .. } => "thm44",
            Formula::Thm45 { .. } => "thm45",
            Formula::Thm46 { .. } => "thm46",
            Formula::Thm47 { .. } => "thm47",
            Formula::Thm48 { .. } => "thm48",
            Formula::Thm49 { .. } => "thm49",
        }
    }

    /// Parameters as (name, value) pairs in a fixed order.
    pub fn inputs(&self) -> Vec<(&'static str, u32)> {
        match *self {
            Formula::Thm41 { a } => vec![("a", a)],
            Formula::Thm42 { a, b } | Formula::LiWang42 { a, b } | Formula::Thm44 { a, b } => {
                vec![("a", a), ("b", b)]
            }
            Formula::Thm45 { a, b, c } => vec![("a", a), ("b", b), ("c", c)],
            Formula::Thm46 { a, b, c, pair } | Formula::Thm47 { a, b, c, pair } => {
                vec![("a", a), ("b", b), ("c", c), ("case", pair.code())]
            }
            Formula::Thm48 { d } => vec![("d", d)],
            Formula::Thm49 { d, a } => vec![("d", d), ("a", a)],
        }
    }

    /// Builds a formula from its id and `name=value` parameters.
    pub fn from_params(id: &str, params: &BTreeMap<String, u32>) -> Result<Formula> {
        let get = |name: &str| -> Result<u32> {
            params
                .get(name)
                .copied()
                .ok_or_else(|| Error::domain(format!("formula `{id}` needs parameter `{name}`")))
        };
        let pair = |allowed: [SeparatorPair; 2]| -> Result<SeparatorPair> {
            let code = get("case")?;
            SeparatorPair::from_code(code)
                .filter(|p| allowed.contains(p))
                .ok_or_else(|| Error::domain(format!("formula `{id}` has no case {code}")))
        };
        let f = match id {
            "thm41" => Formula::Thm41 { a: get("a")? },
            "thm42" => Formula::Thm42 { a: get("a")?, b: get("b")? },
            "liwang42" => Formula::LiWang42 { a: get("a")?, b: get("b")? },
            "thm44" => Formula::Thm44 { a: get("a")?, b: get("b")? },
            "thm45" => Formula::Thm45 {
                a: get("a")?,
                b: get("b")?,
                c: get("c")?,
            },
            "thm46" => Formula::Thm46 {
                a: get("a")?,
                b: get("b")?,
                c: get("c")?,
                pair: pair([SeparatorPair::ThreeOne, SeparatorPair::ThreeThree])?,
            },
            "thm47" => Formula::Thm47 {
                a: get("a")?,
                b: get("b")?,
                c: get("c")?,
                pair: pair([SeparatorPair::OneThree, SeparatorPair::OneOne])?,
            },
            "thm48" => Formula::Thm48 { d: get("d")? },
            "thm49" => Formula::Thm49 { d: get("d")?, a: get("a")? },
            other => return Err(Error::domain(format!("unknown formula id `{other}`"))),
        };
        f.validate()?;
        Ok(f)
    }

    /// Checks the parameter domain.
    pub fn validate(&self) -> Result<()> {
        match *self {
            Formula::Thm44 { a: 0, .. } => Err(Error::domain("thm44 requires a >= 1")),
            Formula::Thm45 { c: 0, .. } => Err(Error::domain("thm45 requires c >= 1")),
            Formula::Thm46 { pair, .. }
                if !matches!(pair, SeparatorPair::ThreeOne | SeparatorPair::ThreeThree) =>
            {
                Err(Error::domain("thm46 covers the separator pairs (3,1) and (3,3)"))
            }
            Formula::Thm47 { pair, .. } if !matches!(pair, SeparatorPair::OneThree | SeparatorPair::OneOne) => {
                Err(Error::domain("thm47 covers the separator pairs (1,3) and (1,1)"))
            }
            Formula::Thm47 { a: 0, .. } => Err(Error::domain("thm47 requires a >= 1")),
            Formula::Thm49 { d: 0, .. } => Err(Error::domain("thm49 requires d >= 1")),
            _ => Ok(()),
        }
    }

    /// The star value the formula evaluates, as a block form.
    pub fn target(&self) -> BlockForm {
        let bf = |a: Vec<u32>, c: Vec<u32>| BlockForm::new(a, c).expect("formula targets are valid block forms");
        match *self {
            Formula::Thm41 { a } => bf(vec![a], vec![]),
            Formula::Thm42 { a, b } | Formula::LiWang42 { a, b } => bf(vec![a, b], vec![3]),
            Formula::Thm44 { a, b } => bf(vec![a, b], vec![1]),
            Formula::Thm45 { a, b, c } => bf(vec![a, b], vec![c + 3]),
            Formula::Thm46 { a, b, c, pair } | Formula::Thm47 { a, b, c, pair } => {
                bf(vec![a, b, c], pair.separators().to_vec())
            }
            Formula::Thm48 { d } => {
                if d == 0 {
                    bf(vec![2], vec![])
                } else {
                    let mut a = vec![0; d as usize + 1];
                    a[0] = 1;
                    a[d as usize] = 1;
                    bf(a, vec![1; d as usize])
                }
            }
            Formula::Thm49 { d, a } => {
                let seps: Vec<u32> = (0..2 * d - 1).map(|i| if i % 2 == 0 { 3 } else { 1 }).collect();
                bf(vec![a; 2 * d as usize], seps)
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params: Vec<String> = self.inputs().iter().map(|(k, v)| format!("{k}={v}")).collect();
        write!(f, "{}({})", self.id(), params.join(","))
    }
}

/// Outcome of comparing a closed form with the direct star-sum oracle.
#[derive(Clone, Debug)]
pub struct EvaluationReport {
    pub formula: Formula,
    pub target: Index,
    pub closed_values: Vec<TruncatedValue>,
    pub oracle_value: TruncatedValue,
    /// Largest |closed − oracle| over the closed-form lines.
    pub abs_disagreement: BigReal,
    /// Largest closed-line error plus the oracle error.
    pub combined_error: BigReal,
    pub tolerance: f64,
    pub pass: bool,
}

impl Serialize for EvaluationReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let inputs: BTreeMap<&str, u32> = self.formula.inputs().into_iter().collect();
        let mut st = serializer.serialize_struct("EvaluationReport", 9)?;
        st.serialize_field("formula_id", self.formula.id())?;
        st.serialize_field("inputs", &inputs)?;
        st.serialize_field("target", &self.target.to_string())?;
        st.serialize_field("closed_values", &self.closed_values)?;
        st.serialize_field("oracle_value", &self.oracle_value)?;
        st.serialize_field("abs_disagreement", &self.abs_disagreement.to_bound_string())?;
        st.serialize_field("combined_error", &self.combined_error.to_bound_string())?;
        st.serialize_field("tolerance", &self.tolerance)?;
        st.serialize_field("pass", &self.pass)?;
        st.end()
    }
}

type SignedKey = (SignedIndex, u64, u32);
type StarKey = (Index, u64, u32);

/// Evaluates closed forms at a fixed precision and truncation, memoizing
/// every alternating t-value and star oracle it computes.
pub struct Evaluator {
    precision: Precision,
    terms: u64,
    t_cache: Mutex<HashMap<SignedKey, TruncatedValue>>,
    star_cache: Mutex<HashMap<StarKey, TruncatedValue>>,
}

fn term(pairs: &[(u32, bool)]) -> SignedIndex {
    SignedIndex::from_pairs(pairs).expect("formula indices have positive entries")
}

fn bar(s: u32) -> SignedIndex {
    term(&[(s, true)])
}

impl Evaluator {
    pub fn new(precision: Precision, terms: u64) -> Result<Self> {
        if terms == 0 {
            return Err(Error::domain("the number of terms must be at least 1"));
        }
        Ok(Evaluator {
            precision,
            terms,
            t_cache: Mutex::new(HashMap::new()),
            star_cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn precision(&self) -> Precision {
        self.precision
    }

    pub fn terms(&self) -> u64 {
        self.terms
    }

    /// Alternating (or plain) multiple t-value, memoized.
    pub fn t_value(&self, s: &SignedIndex) -> Result<TruncatedValue> {
        let key = (s.clone(), self.terms, self.precision.digits());
        if let Some(v) = self.t_cache.lock().unwrap().get(&key) {
            return Ok(v.clone());
        }
        let v = nested_t_sum(s, self.terms, self.precision)?;
        self.t_cache.lock().unwrap().insert(key, v.clone());
        Ok(v)
    }

    /// Direct star-sum oracle, memoized.
    pub fn star_oracle(&self, s: &Index) -> Result<TruncatedValue> {
        let key = (s.clone(), self.terms, self.precision.digits());
        if let Some(v) = self.star_cache.lock().unwrap().get(&key) {
            return Ok(v.clone());
        }
        let v = t_star_direct(s, self.terms, self.precision)?;
        self.star_cache.lock().unwrap().insert(key, v.clone());
        Ok(v)
    }

    fn pi(&self) -> BigReal {
        pi_const(self.precision)
    }

    fn rational(&self, q: &Rational) -> BigReal {
        BigReal::from_rational(q, self.precision)
    }

    fn zero(&self) -> TruncatedValue {
        TruncatedValue {
            estimate: BigReal::zero(self.precision),
            error_indicator: BigReal::zero(self.precision),
            terms_used: self.terms,
            bound_kind: BoundKind::Rigorous,
        }
    }

    /// Σ (coef/π)·t(index).
    fn over_pi(&self, terms: &[(i64, SignedIndex)]) -> Result<TruncatedValue> {
        let pi = self.pi();
        let mut acc = self.zero();
        for (coef, idx) in terms {
            let factor = &BigReal::from_int(*coef, self.precision) / &pi;
            acc = acc.add(&self.t_value(idx)?.scale(&factor));
        }
        Ok(acc)
    }

    /// (−1)^a π^{2a} E_{2a} / (4^a (2a)!), exact up to the precision of π.
    fn euler_line(&self, a: u32) -> Result<TruncatedValue> {
        let e = euler_numbers(2 * a)?;
        let mut q = Rational::from((e[a as usize].clone(), Integer::from(4u32).pow(a) * Integer::from(Integer::factorial(2 * a))));
        if a % 2 == 1 {
            q = -q;
        }
        let v = &self.rational(&q) * &self.pi().powi(2 * a as i32);
        Ok(TruncatedValue::exact(v, self.precision))
    }

    /// Both displayed expressions for t★({2}^a).
    pub fn eval_thm41(&self, a: u32) -> Result<[TruncatedValue; 2]> {
        let line1 = self.over_pi(&[(-4, bar(2 * a + 1))])?;
        Ok([line1, self.euler_line(a)?])
    }

    /// ζ-weighted sum Σ_r w_r ζ(2r+1) X_r with exact rational weights.
    fn zeta_weighted(&self, terms: &[(Rational, u32, TruncatedValue)]) -> Result<TruncatedValue> {
        let mut acc = self.zero();
        for (w, r, x) in terms {
            let z = zeta_int(2 * r + 1, self.precision)?;
            acc = acc.add(&z.mul(x).scale(&self.rational(w)));
        }
        Ok(acc)
    }

    fn thm42_weight(a: u32, b: u32, r: u32) -> Rational {
        let four_r = Integer::from(1) << (2 * r);
        let p = Rational::from((binomial(2 * r, i64::from(2 * a + 1)), 1));
        let p = p * Rational::from((four_r.clone() - 1u32, four_r.clone()));
        let q = Rational::from((binomial(2 * r, i64::from(2 * b + 1)), 1));
        (p + q) / Rational::from(four_r)
    }

    /// Both displayed lines for t★({2}^a, 3, {2}^b).
    pub fn eval_thm42(&self, a: u32, b: u32) -> Result<[TruncatedValue; 2]> {
        let line1 = self.over_pi(&[
            (-4, bar(2 * a + 2 * b + 4)),
            (-8, term(&[(2 * a + 2, true), (2 * b + 2, false)])),
        ])?;
        let pi = self.pi();
        let mut terms = Vec::new();
        for r in 1..=a + b + 1 {
            let t = self.t_value(&bar(2 * a + 2 * b + 3 - 2 * r))?;
            let factor = &BigReal::from_int(-4, self.precision) / &pi;
            terms.push((Self::thm42_weight(a, b, r), r, t.scale(&factor)));
        }
        Ok([line1, self.zeta_weighted(&terms)?])
    }

    /// The same value through t★({2}^m) factors in Euler-number form.
    pub fn eval_liwang42(&self, a: u32, b: u32) -> Result<TruncatedValue> {
        let mut terms = Vec::new();
        for r in 1..=a + b + 1 {
            terms.push((Self::thm42_weight(a, b, r), r, self.euler_line(a + b + 1 - r)?));
        }
        self.zeta_weighted(&terms)
    }

    /// Both displayed lines for t★({2}^a, 1, {2}^b), a ≥ 1.
    pub fn eval_thm44(&self, a: u32, b: u32) -> Result<[TruncatedValue; 2]> {
        Formula::Thm44 { a, b }.validate()?;
        let line1 = self.over_pi(&[
            (-4, bar(2 * a + 2 * b + 2)),
            (-8, term(&[(2 * a + 1, false), (2 * b + 1, true)])),
        ])?;
        let pi = self.pi();
        let mut terms = Vec::new();
        for r in 1..=a + b {
            let four_r = Integer::from(1) << (2 * r);
            let p = Rational::from((binomial(2 * r, i64::from(2 * a)), 1));
            let q = Rational::from((binomial(2 * r, i64::from(2 * b)), 1))
                * Rational::from((four_r.clone() - 1u32, four_r.clone()));
            let w = (p + q) / Rational::from(four_r);
            let t = self.t_value(&bar(2 * a + 2 * b + 1 - 2 * r))?;
            let factor = &BigReal::from_int(-4, self.precision) / &pi;
            terms.push((w, r, t.scale(&factor)));
        }
        let mut line2 = self.zeta_weighted(&terms)?;
        if b == 0 {
            let factor = &(&ln2_const(self.precision) * &BigReal::from_int(-4, self.precision)) / &pi;
            line2 = line2.add(&self.t_value(&bar(2 * a + 1))?.scale(&factor));
        }
        Ok([line1, line2])
    }

    /// −(2/π) Σ_r 2^r Σ_{compositions} t(…), enumerating compositions of
    /// `total` and mapping each through `make` (r = 1 handled by `single`).
    fn composition_sum(
        &self,
        total: u32,
        single: SignedIndex,
        make: impl Fn(&[u32]) -> SignedIndex,
    ) -> Result<TruncatedValue> {
        let mut terms = vec![(-4i64, single)];
        for r in 2..=total {
            let mut count = 0u64;
            for comp in compositions(total, r) {
                count += 1;
                terms.push((-(2i64 << r), make(&comp)));
            }
            let expected = binomial(total - 1, i64::from(r) - 1);
            if expected != count {
                return Err(Error::domain(format!(
                    "composition count mismatch for {total} into {r} parts: {count} vs {expected}"
                )));
            }
        }
        self.over_pi(&terms)
    }

    /// t★({2}^a, c+3, {2}^b) as a weighted sum of alternating t-values, c ≥ 1.
    pub fn eval_thm45(&self, a: u32, b: u32, c: u32) -> Result<TruncatedValue> {
        Formula::Thm45 { a, b, c }.validate()?;
        self.composition_sum(c + 2, bar(2 * a + 2 * b + 4 + c), |s| {
            let r = s.len();
            let mut pairs = vec![(2 * a + 1 + s[0], true)];
            pairs.extend(s[1..r - 1].iter().map(|&v| (v, false)));
            pairs.push((2 * b + 1 + s[r - 1], false));
            term(&pairs)
        })
    }

    /// The (3,1) and (3,3) four-term combinations.
    pub fn eval_thm46(&self, a: u32, b: u32, c: u32) -> Result<[TruncatedValue; 2]> {
        let first = self.over_pi(&[
            (-4, bar(2 * a + 2 * b + 2 * c + 5)),
            (-8, term(&[(2 * a + 2, true), (2 * b + 2 * c + 3, false)])),
            (-8, term(&[(2 * a + 2 * b + 4, false), (2 * c + 1, true)])),
            (-16, term(&[(2 * a + 2, true), (2 * b + 2, true), (2 * c + 1, true)])),
        ])?;
        let second = self.over_pi(&[
            (-4, bar(2 * a + 2 * b + 2 * c + 7)),
            (-8, term(&[(2 * a + 2, true), (2 * b + 2 * c + 5, false)])),
            (-8, term(&[(2 * a + 2 * b + 5, true), (2 * c + 2, false)])),
            (-16, term(&[(2 * a + 2, true), (2 * b + 3, false), (2 * c + 2, false)])),
        ])?;
        Ok([first, second])
    }

    /// The (1,3) and (1,1) four-term combinations, a ≥ 1.
    pub fn eval_thm47(&self, a: u32, b: u32, c: u32) -> Result<[TruncatedValue; 2]> {
        if a == 0 {
            return Err(Error::domain("thm47 requires a >= 1"));
        }
        let first = self.over_pi(&[
            (-4, bar(2 * a + 2 * b + 2 * c + 5)),
            (-8, term(&[(2 * a + 1, false), (2 * b + 2 * c + 4, true)])),
            (-8, term(&[(2 * a + 2 * b + 3, true), (2 * c + 2, false)])),
            (-16, term(&[(2 * a + 1, false), (2 * b + 2, true), (2 * c + 2, false)])),
        ])?;
        let second = self.over_pi(&[
            (-4, bar(2 * a + 2 * b + 2 * c + 3)),
            (-8, term(&[(2 * a + 1, false), (2 * b + 2 * c + 2, true)])),
            (-8, term(&[(2 * a + 2 * b + 2, false), (2 * c + 1, true)])),
            (-16, term(&[(2 * a + 1, false), (2 * b + 1, false), (2 * c + 1, true)])),
        ])?;
        Ok([first, second])
    }

    /// t★(2, {1}^d, 2) as a composition-weighted sum.
    pub fn eval_thm48(&self, d: u32) -> Result<TruncatedValue> {
        self.composition_sum(d + 1, bar(d + 5), |s| {
            let r = s.len();
            let mut pairs = vec![(s[0] + 2, false)];
            pairs.extend(s[1..r - 1].iter().map(|&v| (v, false)));
            pairs.push((s[r - 1] + 2, true));
            term(&pairs)
        })
    }

    /// t★({{2}^a,3,{2}^a,1}^{d−1},{2}^a,3,{2}^a) as a composition-weighted sum.
    pub fn eval_thm49(&self, d: u32, a: u32) -> Result<TruncatedValue> {
        Formula::Thm49 { d, a }.validate()?;
        let w = 2 * a + 2;
        self.composition_sum(2 * d, bar(2 * d * w), |s| {
            let r = s.len();
            let pairs: Vec<(u32, bool)> = s
                .iter()
                .enumerate()
                .map(|(i, &v)| {
                    let odd = if i + 1 < r { v % 2 == 1 } else { v % 2 == 0 };
                    (w * v, odd)
                })
                .collect();
            term(&pairs)
        })
    }

    /// Every closed-form line the formula provides.
    pub fn evaluate(&self, f: &Formula) -> Result<Vec<TruncatedValue>> {
        f.validate()?;
        Ok(match *f {
            Formula::Thm41 { a } => self.eval_thm41(a)?.to_vec(),
            Formula::Thm42 { a, b } => self.eval_thm42(a, b)?.to_vec(),
            Formula::LiWang42 { a, b } => vec![self.eval_liwang42(a, b)?],
            Formula::Thm44 { a, b } => self.eval_thm44(a, b)?.to_vec(),
            Formula::Thm45 { a, b, c } => vec![self.eval_thm45(a, b, c)?],
            Formula::Thm46 { a, b, c, pair } => {
                let [x, y] = self.eval_thm46(a, b, c)?;
                vec![if pair == SeparatorPair::ThreeOne { x } else { y }]
            }
            Formula::Thm47 { a, b, c, pair } => {
                let [x, y] = self.eval_thm47(a, b, c)?;
                vec![if pair == SeparatorPair::OneThree { x } else { y }]
            }
            Formula::Thm48 { d } => vec![self.eval_thm48(d)?],
            Formula::Thm49 { d, a } => vec![self.eval_thm49(d, a)?],
        })
    }

    /// Evaluates the closed form(s) and the direct oracle and compares them.
    pub fn cross_check(&self, f: &Formula, tolerance: f64) -> Result<EvaluationReport> {
        if tolerance.is_nan() || tolerance <= 0.0 {
            return Err(Error::domain("tolerance must be positive"));
        }
        let lines = self.evaluate(f)?;
        let target = f.target().expand();
        let oracle = self.star_oracle(&target)?;
        let tol = BigReal::from_f64(tolerance, self.precision);
        let mut disagreement = BigReal::zero(self.precision);
        let mut worst_err = BigReal::zero(self.precision);
        let mut pass = true;
        for line in &lines {
            let gap = line.distance(&oracle.estimate);
            let allowed = &(&tol + &line.error_indicator) + &oracle.error_indicator;
            pass &= gap <= allowed;
            disagreement = disagreement.max(gap);
            worst_err = worst_err.max(line.error_indicator.clone());
        }
        Ok(EvaluationReport {
            formula: *f,
            target,
            closed_values: lines,
            combined_error: &worst_err + &oracle.error_indicator,
            oracle_value: oracle,
            abs_disagreement: disagreement,
            tolerance,
            pass,
        })
    }
}

/// Checks that the formula is known and `params` fits it; used by front ends
/// that take formula ids as text.
pub fn cross_check(
    evaluator: &Evaluator,
    formula_id: &str,
    params: &BTreeMap<String, u32>,
    tolerance: f64,
) -> Result<EvaluationReport> {
    let f = Formula::from_params(formula_id, params)?;
    evaluator.cross_check(&f, tolerance)
}

/// Parses "a=1,b=0" into a parameter map.
pub fn parse_params(text: &str) -> Result<BTreeMap<String, u32>> {
    let mut out = BTreeMap::new();
    let mut offset = 0;
    for field in text.split(',') {
        let trimmed = field.trim();
        if !trimmed.is_empty() {
            let (k, v) = trimmed
                .split_once('=')
                .ok_or_else(|| Error::parse(offset, format!("expected name=value, got `{trimmed}`")))?;
            let v: u32 = v
                .trim()
                .parse()
                .map_err(|_| Error::parse(offset, format!("invalid value in `{trimmed}`")))?;
            out.insert(k.trim().to_string(), v);
        }
        offset += field.len() + 1;
    }
    Ok(out)
}
