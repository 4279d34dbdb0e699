//! Indices, signed indices and block forms, with their text grammars.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Finite sequence of positive integers; the empty index is allowed.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Index(Vec<u32>);

impl Index {
    pub fn new(entries: Vec<u32>) -> Result<Self> {
        if let Some(pos) = entries.iter().position(|&s| s == 0) {
            return Err(Error::domain(format!("index entry {} is zero", pos + 1)));
        }
        Ok(Index(entries))
    }

    pub fn empty() -> Self {
        Index(Vec::new())
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self) -> u64 {
        self.0.iter().map(|&s| u64::from(s)).sum()
    }

    /// True when the star (or strict) sum converges: empty or s_1 > 1.
    pub fn is_admissible(&self) -> bool {
        self.0.first().map_or(true, |&s| s > 1)
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for Index {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match parse_index(s)? {
            ParsedIndex::Plain(i) => Ok(i),
            ParsedIndex::Signed(_) => {
                let offset = s.find('~').unwrap_or(0);
                Err(Error::parse(offset, "sign marker not allowed in a plain index"))
            }
        }
    }
}

/// Sign character attached to an entry of an alternating index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    /// σ^k.
    pub fn power(self, k: u64) -> i32 {
        match self {
            Sign::Minus if k % 2 == 1 => -1,
            _ => 1,
        }
    }

    pub fn from_parity(negative: bool) -> Sign {
        if negative {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }
}

/// Index with a sign per entry.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedIndex {
    entries: Index,
    signs: Vec<Sign>,
}

impl SignedIndex {
    pub fn new(entries: Index, signs: Vec<Sign>) -> Result<Self> {
        if entries.depth() != signs.len() {
            return Err(Error::domain(format!(
                "index has {} entries but {} signs",
                entries.depth(),
                signs.len()
            )));
        }
        Ok(SignedIndex { entries, signs })
    }

    /// Convenience constructor from (entry, negative) pairs.
    pub fn from_pairs(pairs: &[(u32, bool)]) -> Result<Self> {
        let entries = Index::new(pairs.iter().map(|p| p.0).collect())?;
        let signs = pairs.iter().map(|p| Sign::from_parity(p.1)).collect();
        SignedIndex::new(entries, signs)
    }

    pub fn all_plus(entries: Index) -> Self {
        let signs = vec![Sign::Plus; entries.depth()];
        SignedIndex { entries, signs }
    }

    pub fn entries(&self) -> &Index {
        &self.entries
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    pub fn depth(&self) -> usize {
        self.signs.len()
    }

    /// Admissible iff (s_1, σ_1) ≠ (1, +).
    pub fn is_admissible(&self) -> bool {
        !matches!(
            (self.entries.entries().first(), self.signs.first()),
            (Some(1), Some(Sign::Plus))
        )
    }
}

impl fmt::Display for SignedIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .entries
            .entries()
            .iter()
            .zip(&self.signs)
            .map(|(s, sg)| match sg {
                Sign::Plus => s.to_string(),
                Sign::Minus => format!("~{s}"),
            })
            .collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for SignedIndex {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_signed_index(s)
    }
}

/// Block form ({2}^{a_0}, c_1, {2}^{a_1}, …, c_d, {2}^{a_d}) with every c_i ≠ 2.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BlockForm {
    a: Vec<u32>,
    c: Vec<u32>,
}

impl BlockForm {
    pub fn new(a: Vec<u32>, c: Vec<u32>) -> Result<Self> {
        if a.len() != c.len() + 1 {
            return Err(Error::domain(format!(
                "block form needs d+1 runs of twos for d separators, got {} and {}",
                a.len(),
                c.len()
            )));
        }
        check_separators(&c)?;
        Ok(BlockForm { a, c })
    }

    pub fn d(&self) -> usize {
        self.c.len()
    }

    pub fn a(&self) -> &[u32] {
        &self.a
    }

    pub fn c(&self) -> &[u32] {
        &self.c
    }

    pub fn expand(&self) -> Index {
        let mut out = Vec::new();
        for (i, &run) in self.a.iter().enumerate() {
            if i > 0 {
                out.push(self.c[i - 1]);
            }
            out.extend(std::iter::repeat(2).take(run as usize));
        }
        Index(out)
    }

    /// Whether the flattened index gives a convergent star value.
    pub fn validate_convergent_star(&self) -> Validation {
        match self.expand().entries().first() {
            Some(1) => Validation::rejected("first entry 1"),
            _ => Validation::accepted(),
        }
    }
}

impl fmt::Display for BlockForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.a[0])?;
        for (c, a) in self.c.iter().zip(&self.a[1..]) {
            write!(f, ":{c}:{a}")?;
        }
        Ok(())
    }
}

impl FromStr for BlockForm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_blocks(s)
    }
}

/// Rejects separator entries equal to 2 or 0.
pub fn check_separators(c: &[u32]) -> Result<()> {
    for (i, &ci) in c.iter().enumerate() {
        if ci == 0 || ci == 2 {
            return Err(Error::domain(format!(
                "separator c_{} = {ci} is not allowed (must be 1 or at least 3)",
                i + 1
            )));
        }
    }
    Ok(())
}

/// Outcome of a validation check with the reason for rejection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Validation {
    pub ok: bool,
    pub reason: Option<String>,
}

impl Validation {
    fn accepted() -> Self {
        Validation { ok: true, reason: None }
    }

    fn rejected(reason: &str) -> Self {
        Validation {
            ok: false,
            reason: Some(reason.to_string()),
        }
    }
}

/// δ(0) = 2, δ(1) = 1, δ(c) = 0 for c ≥ 3; δ(2) is undefined.
pub fn delta_weight(c: u32) -> Result<u32> {
    match c {
        0 => Ok(2),
        1 => Ok(1),
        2 => Err(Error::domain("delta weight is undefined at c = 2")),
        _ => Ok(0),
    }
}

/// Δ(k, m): 0 if k = m, else 1.
pub fn triangle(k: u64, m: u64) -> u32 {
    u32::from(k != m)
}

/// Result of parsing index text: plain if no entry carries a sign marker.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParsedIndex {
    Plain(Index),
    Signed(SignedIndex),
}

impl ParsedIndex {
    pub fn into_signed(self) -> SignedIndex {
        match self {
            ParsedIndex::Plain(i) => SignedIndex::all_plus(i),
            ParsedIndex::Signed(s) => s,
        }
    }
}

fn parse_entry(field: &str, offset: usize) -> Result<u32> {
    let lead = field.len() - field.trim_start().len();
    let t = field.trim();
    if t.is_empty() {
        return Err(Error::parse(offset + lead, "empty entry"));
    }
    if let Some(bad) = t.char_indices().find(|(_, ch)| !ch.is_ascii_digit()) {
        return Err(Error::parse(
            offset + lead + bad.0,
            format!("unexpected character `{}`", bad.1),
        ));
    }
    let v: u32 = t
        .parse()
        .map_err(|_| Error::parse(offset + lead, "entry out of range"))?;
    Ok(v)
}

/// Parses the comma grammar, where `~` before an entry marks sign −1.
pub fn parse_signed_index(text: &str) -> Result<SignedIndex> {
    let mut entries = Vec::new();
    let mut signs = Vec::new();
    if text.trim().is_empty() {
        return Ok(SignedIndex::default());
    }
    let mut offset = 0;
    for field in text.split(',') {
        let lead = field.len() - field.trim_start().len();
        let body = &field[lead..];
        let (neg, digits, shift) = match body.strip_prefix('~') {
            Some(rest) => (true, rest, lead + 1),
            None => (false, body, lead),
        };
        let v = parse_entry(digits, offset + shift)?;
        if v == 0 {
            return Err(Error::parse(offset + shift, "entries must be positive"));
        }
        entries.push(v);
        signs.push(Sign::from_parity(neg));
        offset += field.len() + 1;
    }
    SignedIndex::new(Index(entries), signs)
}

/// Parses index text, returning a plain index unless a `~` marker occurs.
pub fn parse_index(text: &str) -> Result<ParsedIndex> {
    let s = parse_signed_index(text)?;
    if s.signs().iter().all(|&g| g == Sign::Plus) {
        Ok(ParsedIndex::Plain(s.entries))
    } else {
        Ok(ParsedIndex::Signed(s))
    }
}

/// Parses "a_0:c_1:a_1:…:c_d:a_d".
pub fn parse_blocks(text: &str) -> Result<BlockForm> {
    let mut fields = Vec::new();
    let mut offset = 0;
    for field in text.split(':') {
        fields.push((parse_entry(field, offset)?, offset));
        offset += field.len() + 1;
    }
    if fields.len() % 2 == 0 {
        return Err(Error::parse(text.len(), "block form needs an odd number of fields"));
    }
    let mut a = Vec::new();
    let mut c = Vec::new();
    for (i, (v, off)) in fields.into_iter().enumerate() {
        if i % 2 == 0 {
            a.push(v);
        } else {
            if v == 0 || v == 2 {
                return Err(Error::parse(off, format!("separator {v} is not allowed")));
            }
            c.push(v);
        }
    }
    BlockForm::new(a, c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bf(a: &[u32], c: &[u32]) -> BlockForm {
        BlockForm::new(a.to_vec(), c.to_vec()).unwrap()
    }

    #[test]
    fn expand_examples() {
        assert_eq!(bf(&[2], &[]).expand().entries(), &[2, 2]);
        assert_eq!(bf(&[1, 0], &[3]).expand().entries(), &[2, 3]);
        assert_eq!(bf(&[0, 1, 0], &[3, 1]).expand().entries(), &[3, 2, 1]);
        assert!(bf(&[0], &[]).expand().is_empty());
    }

    #[test]
    fn block_form_rejects_two() {
        assert!(BlockForm::new(vec![0, 0], vec![2]).is_err());
        assert!(BlockForm::new(vec![0], vec![3]).is_err());
        assert!(parse_blocks("1:2:0").is_err());
    }

    #[test]
    fn convergence_check() {
        assert!(bf(&[1, 0], &[1]).validate_convergent_star().ok);
        let v = bf(&[0, 0], &[1]).validate_convergent_star();
        assert!(!v.ok);
        assert_eq!(v.reason.as_deref(), Some("first entry 1"));
        assert!(bf(&[0, 0], &[3]).validate_convergent_star().ok);
    }

    #[test]
    fn delta_and_triangle_tables() {
        assert_eq!(delta_weight(0).unwrap(), 2);
        assert_eq!(delta_weight(1).unwrap(), 1);
        assert!(delta_weight(2).is_err());
        for c in 3..=10 {
            assert_eq!(delta_weight(c).unwrap(), 0);
        }
        for k in 0..=10u64 {
            for m in 0..=10u64 {
                assert_eq!(triangle(k, m), if k == m { 0 } else { 1 });
            }
        }
    }

    #[test]
    fn parse_examples() {
        assert_eq!(
            parse_index("3,2").unwrap(),
            ParsedIndex::Plain(Index::new(vec![3, 2]).unwrap())
        );
        let s = match parse_index("~3,2").unwrap() {
            ParsedIndex::Signed(s) => s,
            other => panic!("unexpected {other:?}"),
        };
        assert_eq!(s.signs(), &[Sign::Minus, Sign::Plus]);
        let s = parse_signed_index("2,~1").unwrap();
        assert_eq!(s.entries().entries(), &[2, 1]);
        assert_eq!(s.signs(), &[Sign::Plus, Sign::Minus]);
        assert_eq!(parse_index(" 3 , 2 ").unwrap(), parse_index("3,2").unwrap());
        assert_eq!(parse_index("").unwrap(), ParsedIndex::Plain(Index::empty()));
    }

    #[test]
    fn parse_errors_carry_offsets() {
        match parse_index("3,x") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 2),
            other => panic!("unexpected {other:?}"),
        }
        match parse_index("3,,2") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 2),
            other => panic!("unexpected {other:?}"),
        }
        match parse_index("3,~0") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 3),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_blocks("1:3").is_err());
        assert!("~3".parse::<Index>().is_err());
    }

    #[test]
    fn admissibility() {
        assert!(!parse_signed_index("1,2").unwrap().is_admissible());
        assert!(parse_signed_index("~1,2").unwrap().is_admissible());
        assert!(SignedIndex::default().is_admissible());
        assert!(!Index::new(vec![1]).unwrap().is_admissible());
    }

    proptest! {
        #[test]
        fn signed_round_trip(pairs in prop::collection::vec((1u32..20, any::<bool>()), 0..6)) {
            let s = SignedIndex::from_pairs(&pairs).unwrap();
            prop_assert_eq!(parse_signed_index(&s.to_string()).unwrap(), s);
        }

        #[test]
        fn plain_round_trip(v in prop::collection::vec(1u32..50, 0..6)) {
            let i = Index::new(v).unwrap();
            prop_assert_eq!(i.to_string().parse::<Index>().unwrap(), i);
        }

        #[test]
        fn blocks_round_trip_and_length(
            a in prop::collection::vec(0u32..4, 1..4),
            seps in prop::collection::vec(prop::sample::select(vec![1u32, 3, 4, 5, 7]), 3),
        ) {
            let c: Vec<u32> = seps[..a.len() - 1].to_vec();
            let b = BlockForm::new(a.clone(), c.clone()).unwrap();
            prop_assert_eq!(parse_blocks(&b.to_string()).unwrap(), b.clone());
            let len: u32 = a.iter().sum::<u32>() + c.len() as u32;
            prop_assert_eq!(b.expand().depth() as u32, len);
            let flat = b.expand();
            let ok = flat.is_empty() || flat.entries()[0] > 1;
            prop_assert_eq!(b.validate_convergent_star().ok, ok);
        }
    }
}
