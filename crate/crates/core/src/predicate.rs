//! Predicates `P ⊆ [q]^k` and the predicate-level moves used to reduce an
//! arbitrary non-odd predicate to a sub-predicate of not-all-equal.

use std::fmt;

use crate::error::{invalid, mismatch, Error, Result};

/// A tuple in `[q]^k`.
pub type Tuple = Vec<u8>;

/// Largest table `q^k` a predicate may index.
const MAX_TABLE: usize = 1 << 24;

/// A subset of `[q]^k`, stored sorted and duplicate-free.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Predicate {
    q: u8,
    k: usize,
    members: Vec<Tuple>,
    table: Vec<bool>,
}

/// Lexicographic rank of `t` in `[q]^k`.
#[inline]
pub fn tuple_index(q: u8, t: &[u8]) -> usize {
    t.iter().fold(0usize, |acc, &x| acc * q as usize + x as usize)
}

/// Inverse of [`tuple_index`].
pub fn tuple_at(q: u8, k: usize, mut index: usize) -> Tuple {
    let mut t = vec![0u8; k];
    for slot in t.iter_mut().rev() {
        *slot = (index % q as usize) as u8;
        index /= q as usize;
    }
    t
}

/// All of `[q]^k` in lexicographic order.
pub fn all_tuples(q: u8, k: usize) -> impl Iterator<Item = Tuple> {
    let n = (q as usize).pow(k as u32);
    (0..n).map(move |i| tuple_at(q, k, i))
}

/// Coordinatewise `a + b mod q`.
pub fn add_mod(q: u8, a: &[u8], b: &[u8]) -> Tuple {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| ((x as u16 + y as u16) % q as u16) as u8)
        .collect()
}

/// Coordinatewise `a - b mod q`.
pub fn sub_mod(q: u8, a: &[u8], b: &[u8]) -> Tuple {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| ((x as u16 + q as u16 - y as u16) % q as u16) as u8)
        .collect()
}

/// `x + b̄`: adds the constant `b` to every coordinate.
pub fn add_constant(q: u8, x: &[u8], b: u8) -> Tuple {
    x.iter().map(|&v| ((v as u16 + b as u16) % q as u16) as u8).collect()
}

/// Coordinatewise negation mod `q`.
pub fn negate(q: u8, h: &[u8]) -> Tuple {
    h.iter().map(|&v| ((q as u16 - v as u16) % q as u16) as u8).collect()
}

fn check_dims(q: u8, k: usize) -> Result<()> {
    if q < 2 {
        return Err(invalid(format!("alphabet size q={q} must be at least 2")));
    }
    if k < 1 {
        return Err(invalid("arity k must be at least 1"));
    }
    match (q as usize).checked_pow(k as u32) {
        Some(n) if n <= MAX_TABLE => Ok(()),
        _ => Err(invalid(format!("[{q}]^{k} is too large to tabulate"))),
    }
}

impl Predicate {
    pub fn new(q: u8, k: usize, members: impl IntoIterator<Item = Tuple>) -> Result<Self> {
        check_dims(q, k)?;
        let mut table = vec![false; (q as usize).pow(k as u32)];
        for t in members {
            if t.len() != k {
                return Err(mismatch(format!("tuple of length {} in a {k}-ary predicate", t.len())));
            }
            if let Some(&bad) = t.iter().find(|&&v| v >= q) {
                return Err(invalid(format!("symbol {bad} outside [{q}]")));
            }
            table[tuple_index(q, &t)] = true;
        }
        Ok(Self::from_table(q, k, table))
    }

    fn from_table(q: u8, k: usize, table: Vec<bool>) -> Self {
        let members = table
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| tuple_at(q, k, i))
            .collect();
        Predicate { q, k, members, table }
    }

    pub fn from_fn(q: u8, k: usize, accept: impl Fn(&[u8]) -> bool) -> Result<Self> {
        check_dims(q, k)?;
        let table = all_tuples(q, k).map(|t| accept(&t)).collect();
        Ok(Self::from_table(q, k, table))
    }

    /// `[q]^k` minus the constant tuples.
    pub fn nae(q: u8, k: usize) -> Result<Self> {
        if k < 2 {
            return Err(invalid("NAE needs arity at least 2"));
        }
        Self::from_fn(q, k, |t| t.iter().any(|&v| v != t[0]))
    }

    /// `k`-LIN: the odd-parity strings of `{0,1}^k`.
    pub fn lin(k: usize) -> Result<Self> {
        Self::from_fn(2, k, |t| t.iter().filter(|&&v| v == 1).count() % 2 == 1)
    }

    /// `k`-CNF: every string but all-zeros.
    pub fn cnf(k: usize) -> Result<Self> {
        Self::from_fn(2, k, |t| t.iter().any(|&v| v == 1))
    }

    pub fn full(q: u8, k: usize) -> Result<Self> {
        Self::from_fn(q, k, |_| true)
    }

    pub fn empty(q: u8, k: usize) -> Result<Self> {
        Self::from_fn(q, k, |_| false)
    }

    pub fn q(&self) -> u8 {
        self.q
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn members(&self) -> &[Tuple] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Membership; tuples of the wrong shape are never members.
    pub fn contains(&self, t: &[u8]) -> bool {
        t.len() == self.k && t.iter().all(|&v| v < self.q) && self.table[tuple_index(self.q, t)]
    }

    /// Membership by lexicographic rank.
    #[inline]
    pub fn contains_index(&self, index: usize) -> bool {
        self.table[index]
    }

    fn check_tuple(&self, h: &[u8]) -> Result<()> {
        if h.len() != self.k {
            return Err(mismatch(format!("tuple of length {} for arity {}", h.len(), self.k)));
        }
        if let Some(&bad) = h.iter().find(|&&v| v >= self.q) {
            return Err(invalid(format!("symbol {bad} outside [{}]", self.q)));
        }
        Ok(())
    }

    /// Every `x` has some translate `x + ā` inside the predicate.
    pub fn is_odd(&self) -> bool {
        self.find_non_odd_witness().is_none()
    }

    /// Lexicographically smallest `h` whose `q` constant translates all lie
    /// outside the predicate.
    pub fn find_non_odd_witness(&self) -> Option<Tuple> {
        all_tuples(self.q, self.k)
            .find(|h| (0..self.q).all(|b| !self.table[tuple_index(self.q, &add_constant(self.q, h, b))]))
    }

    /// `{x - h : x ∈ P}`.
    pub fn shift(&self, h: &[u8]) -> Result<Self> {
        self.check_tuple(h)?;
        Self::new(self.q, self.k, self.members.iter().map(|x| sub_mod(self.q, x, h)))
    }

    /// `{a + b̄ : a ∈ P, b ∈ [q]}`.
    pub fn translate_closure(&self) -> Self {
        let q = self.q;
        let mut table = vec![false; self.table.len()];
        for a in &self.members {
            for b in 0..q {
                table[tuple_index(q, &add_constant(q, a, b))] = true;
            }
        }
        Self::from_table(q, self.k, table)
    }

    /// `P + b̄ = P` for every constant `b`.
    pub fn is_translation_invariant(&self) -> bool {
        self.members
            .iter()
            .all(|a| (1..self.q).all(|b| self.table[tuple_index(self.q, &add_constant(self.q, a, b))]))
    }

    pub fn is_subset_of(&self, other: &Predicate) -> bool {
        self.q == other.q && self.k == other.k && self.members.iter().all(|t| other.contains(t))
    }

    pub fn union(&self, other: &Predicate) -> Result<Self> {
        if self.q != other.q || self.k != other.k {
            return Err(mismatch("predicates over different [q]^k"));
        }
        let table = self.table.iter().zip(&other.table).map(|(a, b)| *a || *b).collect();
        Ok(Self::from_table(self.q, self.k, table))
    }

    /// Header `q k` followed by one member per line as digits.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.q, self.k);
        for t in &self.members {
            out.push_str(&format_digits(t));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = content_lines(text);
        let header = lines.next().ok_or_else(|| Error::Parse("empty predicate".into()))?;
        let mut it = header.split_whitespace();
        let q: u8 = parse_field(it.next(), "q")?;
        let k: usize = parse_field(it.next(), "k")?;
        if it.next().is_some() {
            return Err(Error::Parse(format!("unexpected tokens in predicate header `{header}`")));
        }
        let members = lines.map(|l| parse_digits(l, q, k)).collect::<Result<Vec<_>>>()?;
        Self::new(q, k, members)
    }
}

impl fmt::Debug for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.members.iter().map(|t| format_digits(t)).collect();
        write!(f, "Predicate(q={}, k={}, {{{}}})", self.q, self.k, body.join(","))
    }
}

/// Renders a tuple as a digit string, e.g. `0110`.
pub fn format_digits(t: &[u8]) -> String {
    t.iter().map(|&v| char::from_digit(v as u32, 36).unwrap_or('?')).collect()
}

/// Parses a digit string of exactly `k` symbols from `[q]`.
pub fn parse_digits(s: &str, q: u8, k: usize) -> Result<Tuple> {
    let s = s.trim();
    let t: Tuple = s
        .chars()
        .map(|c| {
            c.to_digit(36)
                .filter(|&d| d < q as u32)
                .map(|d| d as u8)
                .ok_or_else(|| Error::Parse(format!("symbol `{c}` outside [{q}] in `{s}`")))
        })
        .collect::<Result<_>>()?;
    if t.len() != k {
        return Err(Error::Parse(format!("`{s}` has {} symbols, expected {k}", t.len())));
    }
    Ok(t)
}

/// Non-blank lines with `#` comments stripped.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
}

pub(crate) fn parse_field<T: std::str::FromStr>(tok: Option<&str>, name: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| Error::Parse(format!("missing field `{name}`")))?;
    tok.parse().map_err(|_| Error::Parse(format!("invalid value `{tok}` for `{name}`")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pred(q: u8, k: usize, members: &[&str]) -> Predicate {
        Predicate::new(q, k, members.iter().map(|s| parse_digits(s, q, k).unwrap())).unwrap()
    }

    /// Every predicate over `[q]^k`, as bitmask-indexed subsets.
    fn all_predicates(q: u8, k: usize) -> Vec<Predicate> {
        let n = (q as usize).pow(k as u32);
        (0u32..(1 << n))
            .map(|mask| Predicate::from_fn(q, k, |t| mask >> tuple_index(q, t) & 1 == 1).unwrap())
            .collect()
    }

    #[test]
    fn oddness_examples() {
        assert!(Predicate::lin(3).unwrap().is_odd());
        assert!(!Predicate::nae(2, 2).unwrap().is_odd());
        assert!(!Predicate::lin(4).unwrap().is_odd());
        assert!(Predicate::cnf(3).unwrap().is_odd());
    }

    #[test]
    fn nae_sizes() {
        assert_eq!(Predicate::nae(2, 2).unwrap(), pred(2, 2, &["01", "10"]));
        assert_eq!(Predicate::nae(2, 3).unwrap().len(), 6);
        assert_eq!(Predicate::nae(3, 2).unwrap().len(), 6);
        assert!(Predicate::nae(2, 1).is_err());
        assert!(Predicate::nae(1, 3).is_err());
    }

    #[test]
    fn witness_examples() {
        assert_eq!(pred(2, 2, &["01"]).find_non_odd_witness(), Some(vec![0, 0]));
        assert_eq!(Predicate::lin(3).unwrap().find_non_odd_witness(), None);
        assert_eq!(Predicate::lin(4).unwrap().find_non_odd_witness(), Some(vec![0, 0, 0, 0]));
    }

    #[test]
    fn shift_examples() {
        let p = pred(2, 2, &["01"]);
        assert_eq!(p.shift(&[0, 0]).unwrap(), p);
        assert_eq!(pred(2, 2, &["11", "10"]).shift(&[1, 0]).unwrap(), pred(2, 2, &["01", "00"]));
        assert!(p.shift(&[0, 0, 0]).is_err());
    }

    #[test]
    fn closure_examples() {
        assert_eq!(pred(2, 2, &["01"]).translate_closure(), pred(2, 2, &["01", "10"]));
        let nae = Predicate::nae(3, 3).unwrap();
        assert_eq!(nae.translate_closure(), nae);
    }

    #[test]
    fn exhaustive_small_predicates() {
        for k in 1..=3 {
            for p in all_predicates(2, k) {
                // witness absent iff odd, and the odd definition holds literally
                let odd_direct = all_tuples(2, k).all(|x| (0..2).any(|a| p.contains(&add_constant(2, &x, a))));
                assert_eq!(p.is_odd(), odd_direct, "{p:?}");
                assert_eq!(p.find_non_odd_witness().is_none(), p.is_odd());

                let c = p.translate_closure();
                assert!(p.is_subset_of(&c));
                assert_eq!(c.translate_closure(), c);
                assert!(c.is_translation_invariant());

                for h in all_tuples(2, k) {
                    let back = p.shift(&h).unwrap().shift(&negate(2, &h)).unwrap();
                    assert_eq!(back, p);
                }
                if let Some(h) = p.find_non_odd_witness() {
                    if k >= 2 {
                        let nae = Predicate::nae(2, k).unwrap();
                        let shifted = p.shift(&h).unwrap();
                        assert!(shifted.is_subset_of(&nae));
                        assert!(shifted.translate_closure().is_subset_of(&nae));
                    }
                }
            }
        }
    }

    #[test]
    fn exhaustive_ternary_oddness() {
        for p in all_predicates(3, 2) {
            let odd_direct = all_tuples(3, 2).all(|x| (0..3).any(|a| p.contains(&add_constant(3, &x, a))));
            assert_eq!(p.is_odd(), odd_direct);
        }
    }

    #[test]
    fn text_round_trip() {
        let p = Predicate::nae(3, 2).unwrap();
        let text = p.to_text();
        assert!(text.starts_with("3 2\n01\n"));
        assert_eq!(Predicate::from_text(&text).unwrap(), p);
        assert!(Predicate::from_text("2 2\n012\n").is_err());
        assert!(Predicate::from_text("2 2\n02\n").is_err());
        assert!(Predicate::from_text("").is_err());
    }
}
