//! Verification grids. Every check produces one [`CheckRecord`]; grids run in
//! parallel but records come back in enumeration order.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use rug::Rational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::evaluations::{Evaluator, Formula, SeparatorPair};
use crate::finite::{
    gn_closed_eval, gn_coefficient_closed, gn_recurrence_sides, gn_restricted_eval, gn_restricted_weighted,
    gn_series_eval, gn_tail_certificate, identity_alternating_binomial, identity_vsharp_binomial,
    identity_weighted_binomial, t_harmonic_star, t_window_star,
};
use crate::index::{BlockForm, Index};
use crate::numerics::{pi_const, rational_string, BigReal, Precision};
use crate::series::{
    g_eval_closed, g_eval_series, product_tail_check, restricted_g_eval, t_star_closed_blocks, t_star_direct,
    wallis_bounds,
};

/// One verified relation.
#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub id: String,
    pub formula: String,
    pub inputs: BTreeMap<String, String>,
    pub lhs: String,
    pub rhs: String,
    pub abs_error: String,
    pub bound: String,
    pub pass: bool,
    pub engine: String,
    #[serde(rename = "K")]
    pub terms: Option<u64>,
    pub precision: Option<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    FiniteExact,
    Lemmas,
    Recurrence,
    SeriesVsClosed,
    Thm4,
    Bounds,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 7] = [
        "finite-exact",
        "lemmas",
        "recurrence",
        "series-vs-closed",
        "thm4",
        "bounds",
        "all",
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::FiniteExact => "finite-exact",
            Suite::Lemmas => "lemmas",
            Suite::Recurrence => "recurrence",
            Suite::SeriesVsClosed => "series-vs-closed",
            Suite::Thm4 => "thm4",
            Suite::Bounds => "bounds",
            Suite::All => "all",
        }
    }

    pub fn run(self, cfg: &SuiteConfig) -> Result<Vec<CheckRecord>> {
        match self {
            Suite::FiniteExact => finite_exact(),
            Suite::Lemmas => lemmas(),
            Suite::Recurrence => recurrence(),
            Suite::SeriesVsClosed => {
                let mut out = finite_series_vs_closed()?;
                out.extend(infinite_series_vs_closed(cfg)?);
                Ok(out)
            }
            Suite::Thm4 => {
                let ev = cfg.evaluator()?;
                let mut out = classical_values(cfg, &ev)?;
                out.extend(thm42_equivalence(cfg, &ev)?);
                out.extend(thm4_oracle_grid(cfg, &ev)?);
                Ok(out)
            }
            Suite::Bounds => bounds(cfg),
            Suite::All => {
                let mut out = Vec::new();
                for s in [
                    Suite::FiniteExact,
                    Suite::Lemmas,
                    Suite::Recurrence,
                    Suite::SeriesVsClosed,
                    Suite::Thm4,
                    Suite::Bounds,
                ] {
                    out.extend(s.run(cfg)?);
                }
                Ok(out)
            }
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "finite-exact" => Suite::FiniteExact,
            "lemmas" => Suite::Lemmas,
            "recurrence" => Suite::Recurrence,
            "series-vs-closed" => Suite::SeriesVsClosed,
            "thm4" => Suite::Thm4,
            "bounds" => Suite::Bounds,
            "all" => Suite::All,
            other => {
                return Err(Error::domain(format!(
                    "unknown suite `{other}` (expected one of {})",
                    Suite::NAMES.join(", ")
                )))
            }
        })
    }
}

/// Knobs shared by the numeric grids.
#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub precision: Precision,
    /// Terms of the direct-sum oracles.
    pub oracle_terms: u64,
    /// Outer shells of the closed-form sums.
    pub shells: u64,
    /// Overrides the per-formula tolerances of the §4 grid.
    pub tolerance: Option<f64>,
    /// Larger grids.
    pub extended: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            precision: Precision::new(30).expect("30 digits is valid"),
            oracle_terms: 100_000,
            shells: 2000,
            tolerance: None,
            extended: false,
        }
    }
}

impl SuiteConfig {
    /// Large oracle grids with K = 10^6.
    pub fn extended() -> Self {
        SuiteConfig {
            oracle_terms: 1_000_000,
            extended: true,
            ..SuiteConfig::default()
        }
    }

    pub fn evaluator(&self) -> Result<Evaluator> {
        Evaluator::new(self.precision, self.oracle_terms)
    }
}

type Job<'a> = Box<dyn Fn() -> Result<CheckRecord> + Send + Sync + 'a>;

fn run_jobs(jobs: Vec<Job<'_>>) -> Result<Vec<CheckRecord>> {
    jobs.par_iter().map(|job| job()).collect()
}

fn inputs(pairs: &[(&str, String)]) -> BTreeMap<String, String> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn list(v: &[u32]) -> String {
    v.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

fn rlist(v: &[Rational]) -> String {
    v.iter().map(rational_string).collect::<Vec<_>>().join(",")
}

fn item_id(suite: &str, formula: &str, ins: &BTreeMap<String, String>) -> String {
    let params: Vec<String> = ins.iter().map(|(k, v)| format!("{k}={v}")).collect();
    format!("{suite}/{formula}/{}", params.join(";"))
}

fn exact_record(
    suite: &str,
    formula: &str,
    ins: BTreeMap<String, String>,
    lhs: &Rational,
    rhs: &Rational,
    engine: &str,
) -> CheckRecord {
    let diff = Rational::from(lhs - rhs).abs();
    CheckRecord {
        id: item_id(suite, formula, &ins),
        formula: formula.to_string(),
        inputs: ins,
        lhs: rational_string(lhs),
        rhs: rational_string(rhs),
        pass: diff == 0,
        abs_error: rational_string(&diff),
        bound: "0/1".to_string(),
        engine: engine.to_string(),
        terms: None,
        precision: None,
    }
}

/// |lhs − rhs| ≤ bound with the bound stored next to the values.
#[allow(clippy::too_many_arguments)]
fn numeric_record(
    suite: &str,
    formula: &str,
    ins: BTreeMap<String, String>,
    lhs: &BigReal,
    rhs: &BigReal,
    bound: &BigReal,
    engine: &str,
    terms: u64,
    prec: Precision,
) -> CheckRecord {
    let diff = (lhs - rhs).abs();
    CheckRecord {
        id: item_id(suite, formula, &ins),
        formula: formula.to_string(),
        inputs: ins,
        lhs: lhs.to_decimal(prec.digits()),
        rhs: rhs.to_decimal(prec.digits()),
        pass: diff <= *bound,
        abs_error: diff.to_bound_string(),
        bound: bound.to_bound_string(),
        engine: engine.to_string(),
        terms: Some(terms),
        precision: Some(prec.digits()),
    }
}

/// All vectors of length `len` over `values`, in lexicographic order.
pub fn cartesian(values: &[u32], len: usize) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                values.iter().map(move |&v| {
                    let mut p = prefix.clone();
                    p.push(v);
                    p
                })
            })
            .collect();
    }
    out
}

/// Block forms with d ≤ `d_max` separators from `seps` and runs of at most
/// `a_max` twos.
pub fn block_grid(d_max: usize, seps: &[u32], a_max: u32) -> Vec<BlockForm> {
    let twos: Vec<u32> = (0..=a_max).collect();
    let mut out = Vec::new();
    for d in 0..=d_max {
        for c in cartesian(seps, d) {
            for a in cartesian(&twos, d + 1) {
                out.push(BlockForm::new(a, c.clone()).expect("grid separators avoid 0 and 2"));
            }
        }
    }
    out
}

fn half_third() -> [Rational; 2] {
    [Rational::from((1, 2)), Rational::from((1, 3))]
}

/// (n, c, z) over n ≤ 4, d ≤ 2, c_i ∈ {1,3,4,5}, z_j ∈ {1/2, 1/3}.
fn generating_grid(d_min: usize) -> Vec<(u64, Vec<u32>, Vec<Rational>)> {
    let zs = half_third();
    let mut out = Vec::new();
    for d in d_min..=2 {
        for c in cartesian(&[1, 3, 4, 5], d) {
            for pick in cartesian(&[0, 1], d + 1) {
                let z: Vec<Rational> = pick.iter().map(|&i| zs[i as usize].clone()).collect();
                for n in 1..=4 {
                    out.push((n, c.clone(), z.clone()));
                }
            }
        }
    }
    out
}

/// Coefficientwise star-sum identity, window consistency and the windowed
/// product expansion.
pub fn finite_exact() -> Result<Vec<CheckRecord>> {
    let mut jobs: Vec<Job> = Vec::new();
    for b in block_grid(2, &[1, 3, 4, 5], 2) {
        for n in 1..=6u64 {
            let b = b.clone();
            jobs.push(Box::new(move || {
                let lhs = gn_coefficient_closed(n, &b)?;
                let rhs = t_harmonic_star(n, &b.expand());
                let ins = inputs(&[("n", n.to_string()), ("blocks", b.to_string())]);
                Ok(exact_record("finite-exact", "coefficient-closed", ins, &lhs, &rhs, "finite"))
            }));
        }
    }
    for s in [vec![], vec![1], vec![2, 1], vec![3, 1, 2], vec![1, 1, 1]] {
        for n in 1..=6u64 {
            let s = s.clone();
            jobs.push(Box::new(move || {
                let idx = Index::new(s.clone())?;
                let lhs = t_window_star(n, 1, &idx)?;
                let rhs = t_harmonic_star(n, &idx);
                let ins = inputs(&[("n", n.to_string()), ("index", list(&s))]);
                Ok(exact_record("finite-exact", "window-consistency", ins, &lhs, &rhs, "finite"))
            }));
        }
    }
    for n in 1..=6u64 {
        for m in 1..=n {
            jobs.push(Box::new(move || window_product(n, m)));
        }
    }
    run_jobs(jobs)
}

/// Π_{k=m}^{n} (1 − x/(2k−1)²)^{−1} expanded to degree 20 against t★_{n,m}({2}^l).
fn window_product(n: u64, m: u64) -> Result<CheckRecord> {
    const DEG: usize = 20;
    let mut poly = vec![Rational::new(); DEG + 1];
    poly[0] = Rational::from(1);
    for k in m..=n {
        let w = Rational::from((1, (2 * k - 1) * (2 * k - 1)));
        // multiply by the geometric series Σ (w x)^j: p_l += w·p_{l−1}
        for l in 1..=DEG {
            let prev = Rational::from(&w * &poly[l - 1]);
            poly[l] += prev;
        }
    }
    let mut first_bad = None;
    for (l, coef) in poly.iter().enumerate() {
        let star = t_window_star(n, m, &Index::new(vec![2; l])?)?;
        if star != *coef && first_bad.is_none() {
            first_bad = Some((l, star));
        }
    }
    let (l, rhs) = first_bad.unwrap_or_else(|| (DEG, poly[DEG].clone()));
    let ins = inputs(&[("n", n.to_string()), ("m", m.to_string()), ("degree", l.to_string())]);
    Ok(exact_record("finite-exact", "window-product", ins, &poly[l], &rhs, "finite"))
}

/// Binomial and V^# identities over their full grids.
pub fn lemmas() -> Result<Vec<CheckRecord>> {
    let mut jobs: Vec<Job> = Vec::new();
    for n in 0..=50u64 {
        for l in 0..=n {
            jobs.push(Box::new(move || {
                let (lhs, rhs) = identity_weighted_binomial(n, l);
                let ins = inputs(&[("n", n.to_string()), ("l", l.to_string())]);
                Ok(exact_record("lemmas", "weighted-binomial", ins, &lhs, &rhs, "finite"))
            }));
            jobs.push(Box::new(move || {
                let (lhs, rhs) = identity_alternating_binomial(n, l);
                let ins = inputs(&[("n", n.to_string()), ("l", l.to_string())]);
                Ok(exact_record("lemmas", "alternating-binomial", ins, &lhs, &rhs, "finite"))
            }));
        }
    }
    for n in 1..=30u64 {
        for l in 1..=n {
            for c in 0..=4u32 {
                jobs.push(Box::new(move || {
                    let (lhs, rhs) = identity_vsharp_binomial(n, l, c)?;
                    let ins = inputs(&[("n", n.to_string()), ("l", l.to_string()), ("c", c.to_string())]);
                    Ok(exact_record("lemmas", "vsharp-binomial", ins, &lhs, &rhs, "finite"))
                }));
            }
        }
    }
    run_jobs(jobs)
}

/// The outer-separator recurrence for G_n at rational points.
pub fn recurrence() -> Result<Vec<CheckRecord>> {
    let jobs: Vec<Job> = generating_grid(1)
        .into_iter()
        .map(|(n, c, z)| -> Job {
            Box::new(move || {
                let (lhs, rhs) = gn_recurrence_sides(n, &c, &z)?;
                let ins = inputs(&[("n", n.to_string()), ("c", list(&c)), ("z", rlist(&z))]);
                Ok(exact_record("recurrence", "gn-recurrence", ins, &lhs, &rhs, "finite"))
            })
        })
        .collect();
    run_jobs(jobs)
}

/// G_n closed form against its truncated series, and the two restricted forms.
pub fn finite_series_vs_closed() -> Result<Vec<CheckRecord>> {
    const A_MAX: u32 = 40;
    let mut jobs: Vec<Job> = Vec::new();
    for (n, c, z) in generating_grid(0) {
        jobs.push(Box::new(move || {
            let closed = gn_closed_eval(n, &c, &z)?;
            let series = gn_series_eval(n, &c, &z, A_MAX)?;
            let cert = gn_tail_certificate(n, &c, &z, A_MAX)?;
            let gap = Rational::from(&closed - &series);
            let ins = inputs(&[
                ("n", n.to_string()),
                ("c", list(&c)),
                ("z", rlist(&z)),
                ("amax", A_MAX.to_string()),
            ]);
            // closed − series is the discarded tail, which is nonnegative
            let pass = gap >= 0 && gap <= cert;
            Ok(CheckRecord {
                id: item_id("series-vs-closed", "gn-closed-vs-series", &ins),
                formula: "gn-closed-vs-series".into(),
                inputs: ins,
                lhs: rational_string(&closed),
                rhs: rational_string(&series),
                abs_error: rational_string(&gap.abs()),
                bound: rational_string(&cert),
                pass,
                engine: "finite".into(),
                terms: None,
                precision: None,
            })
        }));
    }
    for (n, c, z) in generating_grid(0) {
        if c.len() > 1 {
            continue;
        }
        for u in 0..=c.len() {
            let (c, z) = (c.clone(), z.clone());
            jobs.push(Box::new(move || {
                let lhs = gn_restricted_weighted(n, &c, &z, u)?;
                let rhs = gn_restricted_eval(n, &c, &z, u)?;
                let ins = inputs(&[("n", n.to_string()), ("c", list(&c)), ("z", rlist(&z)), ("u", u.to_string())]);
                Ok(exact_record("series-vs-closed", "gn-restricted", ins, &lhs, &rhs, "finite"))
            }));
        }
    }
    run_jobs(jobs)
}

/// Secant values sec(πz/2) for z = 0.1, …, 0.9 need this many shells for 10⁻¹⁰.
pub const SECANT_SHELLS: u64 = 100_000;

/// Closed-form shell sums against direct series.
pub fn infinite_series_vs_closed(cfg: &SuiteConfig) -> Result<Vec<CheckRecord>> {
    let prec = cfg.precision;
    let mut jobs: Vec<Job> = Vec::new();
    let (seps, a_max): (&[u32], u32) = if cfg.extended { (&[1, 3, 4], 2) } else { (&[1, 3], 1) };
    for b in block_grid(2, seps, a_max) {
        if !b.validate_convergent_star().ok || b.expand().is_empty() {
            continue;
        }
        jobs.push(Box::new(move || {
            let closed = t_star_closed_blocks(&b, cfg.shells, prec)?;
            let oracle = t_star_direct(&b.expand(), cfg.oracle_terms, prec)?;
            let bound = &closed.error_indicator + &oracle.error_indicator;
            let ins = inputs(&[("blocks", b.to_string())]);
            let mut r = numeric_record(
                "series-vs-closed",
                "tstar-closed-vs-direct",
                ins,
                &closed.estimate,
                &oracle.estimate,
                &bound,
                "closed-shells/direct",
                cfg.shells,
                prec,
            );
            r.inputs.insert("oracle_terms".into(), cfg.oracle_terms.to_string());
            Ok(r)
        }));
    }
    let q = |s: &str| BigReal::parse(s, prec).expect("literal");
    let gen_cases: Vec<(Vec<u32>, Vec<&str>)> = vec![
        (vec![], vec!["1/2"]),
        (vec![], vec!["1/3"]),
        (vec![3], vec!["1/2", "0"]),
        (vec![3], vec!["1/2", "1/3"]),
        (vec![3], vec!["1/3", "1/2"]),
        (vec![4], vec!["1/2", "1/2"]),
        (vec![3, 1], vec!["1/3", "1/3", "1/3"]),
    ];
    for (c, zs) in gen_cases {
        jobs.push(Box::new(move || {
            let z: Vec<BigReal> = zs.iter().map(|s| q(s)).collect();
            let closed = g_eval_closed(&c, &z, cfg.shells, prec)?;
            let series = g_eval_series(&c, &z, 40, 4000, prec)?;
            let bound = &closed.error_indicator + &series.error_indicator;
            let ins = inputs(&[("c", list(&c)), ("z", zs.join(",")), ("amax", "40".into())]);
            Ok(numeric_record(
                "series-vs-closed",
                "g-closed-vs-series",
                ins,
                &closed.estimate,
                &series.estimate,
                &bound,
                "closed-shells/series",
                cfg.shells,
                prec,
            ))
        }));
    }
    for i in 1..=9 {
        jobs.push(Box::new(move || {
            let z = BigReal::parse(&format!("{i}/10"), prec)?;
            let closed = g_eval_closed(&[], std::slice::from_ref(&z), SECANT_SHELLS, prec)?;
            let sec = (&pi_const(prec) * &z).div_int(2).cos().recip();
            let ins = inputs(&[("z", format!("{i}/10"))]);
            Ok(numeric_record(
                "series-vs-closed",
                "secant-product",
                ins,
                &closed.estimate,
                &sec,
                &BigReal::from_f64(1e-10, prec),
                "closed-shells/cos",
                SECANT_SHELLS,
                prec,
            ))
        }));
    }
    let restricted: Vec<(Vec<u32>, Vec<&str>, usize)> = vec![
        (vec![], vec!["1/2"], 0),
        (vec![3], vec!["1/2", "1/2"], 0),
        (vec![3], vec!["1/2", "1/2"], 1),
        (vec![3], vec!["1/3", "1/2"], 1),
    ];
    for (c, zs, u) in restricted {
        jobs.push(Box::new(move || {
            let z: Vec<BigReal> = zs.iter().map(|s| q(s)).collect();
            let part = restricted_g_eval(&c, &z, u, cfg.shells, prec)?;
            let full = g_eval_closed(&c, &z, cfg.shells, prec)?;
            let mut zz = z.clone();
            zz[u] = BigReal::zero(prec);
            let zeroed = g_eval_closed(&c, &zz, cfg.shells, prec)?;
            let diff = &full.estimate - &zeroed.estimate;
            let bound = &(&part.error_indicator + &full.error_indicator) + &zeroed.error_indicator;
            let ins = inputs(&[("c", list(&c)), ("z", zs.join(",")), ("u", u.to_string())]);
            Ok(numeric_record(
                "series-vs-closed",
                "restricted-difference",
                ins,
                &part.estimate,
                &diff,
                &bound,
                "closed-shells",
                cfg.shells,
                prec,
            ))
        }));
    }
    run_jobs(jobs)
}

/// Default tolerance for a formula checked against the direct oracle.
pub fn default_tolerance(f: &Formula) -> f64 {
    match f {
        Formula::Thm41 { a: 1 } => 1e-6,
        Formula::Thm41 { .. } => 1e-7,
        Formula::Thm42 { .. } | Formula::LiWang42 { .. } => 1e-6,
        _ => 1e-5,
    }
}

fn report_record(ev: &Evaluator, f: &Formula, tolerance: f64) -> Result<CheckRecord> {
    let rep = ev.cross_check(f, tolerance)?;
    let prec = ev.precision();
    let worst = rep
        .closed_values
        .iter()
        .max_by(|x, y| {
            x.distance(&rep.oracle_value.estimate)
                .partial_cmp(&y.distance(&rep.oracle_value.estimate))
                .expect("finite distances")
        })
        .expect("at least one closed line");
    let bound = &BigReal::from_f64(tolerance, prec) + &rep.combined_error;
    let ins = f.inputs().into_iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
    let mut r = numeric_record(
        "thm4",
        f.id(),
        ins,
        &worst.estimate,
        &rep.oracle_value.estimate,
        &bound,
        "closed/direct",
        ev.terms(),
        prec,
    );
    r.id = format!("thm4/{}", f);
    r.pass = rep.pass;
    Ok(r)
}

/// t★({2}^a) in Euler-number form and the alternating line against the oracle.
pub fn classical_values(cfg: &SuiteConfig, ev: &Evaluator) -> Result<Vec<CheckRecord>> {
    let jobs: Vec<Job> = (0..=4u32)
        .map(|a| -> Job {
            Box::new(move || {
                let f = Formula::Thm41 { a };
                report_record(ev, &f, cfg.tolerance.unwrap_or_else(|| default_tolerance(&f)))
            })
        })
        .collect();
    run_jobs(jobs)
}

/// Pairwise agreement of the two lines of the (a, 3, b) formula and the
/// Li–Wang form, plus their agreement with the oracle.
pub fn thm42_equivalence(cfg: &SuiteConfig, ev: &Evaluator) -> Result<Vec<CheckRecord>> {
    let prec = ev.precision();
    let mut jobs: Vec<Job> = Vec::new();
    for a in 0..=3u32 {
        for b in 0..=3u32 {
            jobs.push(Box::new(move || {
                let [l1, l2] = ev.eval_thm42(a, b)?;
                let lw = ev.eval_liwang42(a, b)?;
                let pairs = [(&l1, &l2), (&l1, &lw), (&l2, &lw)];
                let worst = pairs
                    .iter()
                    .map(|(x, y)| (&x.estimate - &y.estimate).abs())
                    .fold(BigReal::zero(prec), BigReal::max);
                let ins = inputs(&[("a", a.to_string()), ("b", b.to_string())]);
                let mut r = numeric_record(
                    "thm4",
                    "thm42-liwang-pairwise",
                    ins,
                    &l1.estimate,
                    &lw.estimate,
                    &BigReal::from_f64(1e-10, prec),
                    "closed",
                    ev.terms(),
                    prec,
                );
                r.abs_error = worst.to_bound_string();
                r.pass = worst <= 1e-10;
                Ok(r)
            }));
        }
    }
    for a in 0..=2u32 {
        for b in 0..=2u32 {
            for f in [Formula::Thm42 { a, b }, Formula::LiWang42 { a, b }] {
                jobs.push(Box::new(move || {
                    report_record(ev, &f, cfg.tolerance.unwrap_or_else(|| default_tolerance(&f)))
                }));
            }
        }
    }
    run_jobs(jobs)
}

/// The parameter grid for the remaining formulas.
pub fn thm4_grid(extended: bool) -> Vec<Formula> {
    use SeparatorPair::*;
    let mut out = Vec::new();
    if extended {
        for a in 1..=2 {
            for b in 0..=2 {
                out.push(Formula::Thm44 { a, b });
            }
        }
        for a in 0..=1 {
            for b in 0..=1 {
                for c in 1..=2 {
                    out.push(Formula::Thm45 { a, b, c });
                }
            }
        }
        for a in 0..=1 {
            for b in 0..=1 {
                for c in 0..=1 {
                    out.push(Formula::Thm46 { a, b, c, pair: ThreeOne });
                    out.push(Formula::Thm46 { a, b, c, pair: ThreeThree });
                    out.push(Formula::Thm47 { a: a + 1, b, c, pair: OneThree });
                    out.push(Formula::Thm47 { a: a + 1, b, c, pair: OneOne });
                }
            }
        }
        for d in 0..=3 {
            out.push(Formula::Thm48 { d });
        }
        for d in 1..=2 {
            for a in 0..=1 {
                out.push(Formula::Thm49 { d, a });
            }
        }
    } else {
        out.extend([
            Formula::Thm44 { a: 1, b: 0 },
            Formula::Thm44 { a: 1, b: 1 },
            Formula::Thm44 { a: 2, b: 0 },
            Formula::Thm45 { a: 0, b: 0, c: 1 },
            Formula::Thm45 { a: 1, b: 0, c: 1 },
            Formula::Thm45 { a: 0, b: 0, c: 2 },
            Formula::Thm46 { a: 0, b: 0, c: 0, pair: ThreeOne },
            Formula::Thm46 { a: 0, b: 0, c: 0, pair: ThreeThree },
            Formula::Thm46 { a: 1, b: 0, c: 0, pair: ThreeOne },
            Formula::Thm47 { a: 1, b: 0, c: 0, pair: OneThree },
            Formula::Thm47 { a: 1, b: 0, c: 0, pair: OneOne },
            Formula::Thm47 { a: 1, b: 1, c: 0, pair: OneOne },
            Formula::Thm48 { d: 0 },
            Formula::Thm48 { d: 1 },
            Formula::Thm48 { d: 2 },
            Formula::Thm49 { d: 1, a: 0 },
            Formula::Thm49 { d: 1, a: 1 },
            Formula::Thm49 { d: 2, a: 0 },
        ]);
    }
    out
}

/// Closed forms with case selectors, checked against the direct oracle.
pub fn thm4_oracle_grid(cfg: &SuiteConfig, ev: &Evaluator) -> Result<Vec<CheckRecord>> {
    let prec = ev.precision();
    let mut jobs: Vec<Job> = Vec::new();
    for f in thm4_grid(cfg.extended) {
        jobs.push(Box::new(move || {
            report_record(ev, &f, cfg.tolerance.unwrap_or_else(|| default_tolerance(&f)))
        }));
    }
    // two-line agreement for the (a, 1, b) formula
    for a in 1..=2u32 {
        for b in 0..=2u32 {
            jobs.push(Box::new(move || {
                let [l1, l2] = ev.eval_thm44(a, b)?;
                let ins = inputs(&[("a", a.to_string()), ("b", b.to_string())]);
                Ok(numeric_record(
                    "thm4",
                    "thm44-two-lines",
                    ins,
                    &l1.estimate,
                    &l2.estimate,
                    &BigReal::from_f64(1e-8, prec),
                    "closed",
                    ev.terms(),
                    prec,
                ))
            }));
        }
    }
    run_jobs(jobs)
}

/// Wallis chain and the product-tail bound.
pub fn bounds(cfg: &SuiteConfig) -> Result<Vec<CheckRecord>> {
    let prec = cfg.precision;
    let mut jobs: Vec<Job> = Vec::new();
    for n in 1..=1000u64 {
        jobs.push(Box::new(move || {
            let (lo, mid, hi) = wallis_bounds(n, prec)?;
            let lo = BigReal::from_rational(&lo, prec);
            let hi = BigReal::from_rational(&hi, prec);
            // the record stores the smaller of the two gaps; it must be positive
            let lower_gap = &mid - &lo;
            let upper_gap = &hi - &mid;
            let gap = if lower_gap < upper_gap { lower_gap } else { upper_gap };
            let ins = inputs(&[("n", n.to_string())]);
            Ok(CheckRecord {
                id: item_id("bounds", "wallis", &ins),
                formula: "wallis".into(),
                inputs: ins,
                lhs: format!("{} < {}", lo.to_decimal(prec.digits()), mid.to_decimal(prec.digits())),
                rhs: format!("{} < {}", mid.to_decimal(prec.digits()), hi.to_decimal(prec.digits())),
                abs_error: gap.to_decimal(6),
                bound: "0".into(),
                pass: lo < mid && mid < hi,
                engine: "exact/float".into(),
                terms: None,
                precision: Some(prec.digits()),
            })
        }));
    }
    for z in ["1/10", "1/2", "9/10"] {
        for n in 1..=200u64 {
            jobs.push(Box::new(move || {
                let zv = BigReal::parse(z, prec)?;
                let (lhs, bound) = product_tail_check(n, &zv, prec)?;
                let ins = inputs(&[("n", n.to_string()), ("z", z.to_string())]);
                let mut r = numeric_record(
                    "bounds",
                    "product-tail",
                    ins,
                    &lhs,
                    &bound,
                    &bound,
                    "float",
                    n,
                    prec,
                );
                r.abs_error = lhs.to_bound_string();
                r.pass = lhs < bound;
                Ok(r)
            }));
        }
    }
    run_jobs(jobs)
}

/// Writes one JSON object per line.
pub fn write_jsonl<W: Write>(records: &[CheckRecord], mut out: W) -> std::io::Result<()> {
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}
