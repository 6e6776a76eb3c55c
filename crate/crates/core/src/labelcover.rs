//! Label-Cover and Unique-Games instances: exact satisfiability,
//! coverability, smoothness and seeded synthetic generators.

use num::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, mismatch, precondition, Budget, Error, Result};
use crate::predicate::{content_lines, parse_field};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    /// `pi[j]` is the left label projected from right label `j`.
    pub pi: Vec<usize>,
}

/// Bipartite projection instance `(U, V, E, [L], [R], {π_e})`. Parallel
/// edges are allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelCoverInstance {
    left: usize,
    right: usize,
    l: usize,
    r: usize,
    unique: bool,
    edges: Vec<Edge>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Labeling {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

fn is_permutation(pi: &[usize]) -> bool {
    let mut seen = vec![false; pi.len()];
    pi.iter().all(|&x| x < pi.len() && !std::mem::replace(&mut seen[x], true))
}

impl LabelCoverInstance {
    /// `unique` asserts `L = R` and bijective projections; it is checked.
    pub fn new(left: usize, right: usize, l: usize, r: usize, unique: bool, edges: Vec<Edge>) -> Result<Self> {
        if l == 0 || r == 0 {
            return Err(invalid("alphabets must be nonempty"));
        }
        if unique && l != r {
            return Err(invalid("a unique instance needs L = R"));
        }
        for e in &edges {
            if e.u >= left || e.v >= right {
                return Err(invalid(format!("edge ({}, {}) out of range", e.u, e.v)));
            }
            if e.pi.len() != r {
                return Err(mismatch(format!("projection of length {} for R = {r}", e.pi.len())));
            }
            if e.pi.iter().any(|&x| x >= l) {
                return Err(invalid("projection value outside [L]"));
            }
            if unique && !is_permutation(&e.pi) {
                return Err(invalid("unique instance with a non-bijective projection"));
            }
        }
        Ok(LabelCoverInstance { left, right, l, r, unique, edges })
    }

    pub fn left_size(&self) -> usize {
        self.left
    }

    pub fn right_size(&self) -> usize {
        self.right
    }

    pub fn left_alphabet(&self) -> usize {
        self.l
    }

    pub fn right_alphabet(&self) -> usize {
        self.r
    }

    pub fn is_unique(&self) -> bool {
        self.unique
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edges_at_left(&self, u: usize) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(move |e| e.u == u)
    }

    pub fn edges_at_right(&self, v: usize) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(move |e| e.v == v)
    }

    /// `Some(d)` when every projection has exactly `d` preimages per left label.
    pub fn d_to_1(&self) -> Option<usize> {
        if self.r % self.l != 0 {
            return None;
        }
        let d = self.r / self.l;
        let ok = self.edges.iter().all(|e| {
            let mut count = vec![0usize; self.l];
            e.pi.iter().for_each(|&x| count[x] += 1);
            count.iter().all(|&c| c == d)
        });
        ok.then_some(d)
    }

    /// Left and right degrees when all vertices on each side agree.
    pub fn biregular_degrees(&self) -> Option<(usize, usize)> {
        let mut dl = vec![0usize; self.left];
        let mut dr = vec![0usize; self.right];
        for e in &self.edges {
            dl[e.u] += 1;
            dr[e.v] += 1;
        }
        let uniform = |d: &[usize]| d.windows(2).all(|w| w[0] == w[1]);
        (uniform(&dl) && uniform(&dr)).then(|| (dl.first().copied().unwrap_or(0), dr.first().copied().unwrap_or(0)))
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {} {} {}\n", self.left, self.right, self.l, self.r, u8::from(self.unique));
        for e in &self.edges {
            out.push_str(&format!("{} {}", e.u, e.v));
            for x in &e.pi {
                out.push_str(&format!(" {x}"));
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = content_lines(text);
        let header = lines.next().ok_or_else(|| Error::Parse("empty label-cover instance".into()))?;
        let mut it = header.split_whitespace();
        let left: usize = parse_field(it.next(), "|U|")?;
        let right: usize = parse_field(it.next(), "|V|")?;
        let l: usize = parse_field(it.next(), "L")?;
        let r: usize = parse_field(it.next(), "R")?;
        let unique: u8 = parse_field(it.next(), "unique flag")?;
        if unique > 1 {
            return Err(Error::Parse("unique flag must be 0 or 1".into()));
        }
        let mut edges = Vec::new();
        for line in lines {
            let nums = line
                .split_whitespace()
                .map(|t| parse_field(Some(t), "edge field"))
                .collect::<Result<Vec<usize>>>()?;
            if nums.len() != r + 2 {
                return Err(Error::Parse(format!("edge line `{line}` should have {} fields", r + 2)));
            }
            edges.push(Edge { u: nums[0], v: nums[1], pi: nums[2..].to_vec() });
        }
        LabelCoverInstance::new(left, right, l, r, unique == 1, edges)
    }

    fn check_labeling(&self, lab: &Labeling) -> Result<()> {
        if lab.left.len() != self.left || lab.right.len() != self.right {
            return Err(mismatch("partial labeling"));
        }
        if lab.left.iter().any(|&x| x >= self.l) || lab.right.iter().any(|&x| x >= self.r) {
            return Err(invalid("label out of range"));
        }
        Ok(())
    }

    /// Whether every edge at `u` is satisfied by `lab`.
    pub fn covers_left_vertex(&self, lab: &Labeling, u: usize) -> bool {
        self.edges_at_left(u).all(|e| e.pi[lab.right[e.v]] == lab.left[u])
    }
}

/// Fraction of edges with `π_e(ℓ(v)) = ℓ(u)`; vacuously 1 without edges.
pub fn satisfied_fraction(g: &LabelCoverInstance, lab: &Labeling) -> Result<Rational> {
    g.check_labeling(lab)?;
    if g.edges.is_empty() {
        return Ok(Rational::one());
    }
    let good = g.edges.iter().filter(|e| e.pi[lab.right[e.v]] == lab.left[e.u]).count();
    Ok(Rational::new(good as i64, g.edges.len() as i64))
}

/// Best left labels for fixed right labels: each left vertex independently
/// takes its most frequent projected label (smallest on ties).
fn best_left(g: &LabelCoverInstance, right: &[usize]) -> (usize, Vec<usize>) {
    let mut votes = vec![vec![0usize; g.l]; g.left];
    for e in &g.edges {
        votes[e.u][e.pi[right[e.v]]] += 1;
    }
    let mut total = 0;
    let left = votes
        .iter()
        .map(|row| {
            let (best, count) = row
                .iter()
                .enumerate()
                .fold((0, 0), |acc, (i, &c)| if c > acc.1 { (i, c) } else { acc });
            total += count;
            best
        })
        .collect();
    (total, left)
}

fn next_word(word: &mut [usize], radix: usize) -> bool {
    for x in word.iter_mut().rev() {
        *x += 1;
        if *x < radix {
            return true;
        }
        *x = 0;
    }
    false
}

/// Exact maximum satisfied fraction with an optimal labeling. Enumerates
/// right labelings; the left side is then optimised vertex by vertex.
pub fn max_satisfiable(g: &LabelCoverInstance, budget: &mut Budget) -> Result<(Rational, Labeling)> {
    budget.require((g.r as u128).saturating_pow(g.right as u32))?;
    let mut right = vec![0usize; g.right];
    let mut best: Option<(usize, Labeling)> = None;
    loop {
        budget.charge(1)?;
        let (count, left) = best_left(g, &right);
        if best.as_ref().map_or(true, |(c, _)| count > *c) {
            best = Some((count, Labeling { left, right: right.clone() }));
        }
        if !next_word(&mut right, g.r) {
            break;
        }
    }
    let (count, lab) = best.expect("at least one labeling");
    let value = if g.edges.is_empty() {
        Rational::one()
    } else {
        Rational::new(count as i64, g.edges.len() as i64)
    };
    Ok((value, lab))
}

struct CoverSearch<'a> {
    g: &'a LabelCoverInstance,
    c: usize,
    /// Left vertices whose largest neighbour is each right vertex.
    closing: Vec<Vec<usize>>,
    labels: Vec<Vec<usize>>,
    budget: &'a mut Budget,
}

impl CoverSearch<'_> {
    fn left_label(&self, i: usize, u: usize) -> Option<usize> {
        let mut it = self.g.edges_at_left(u).map(|e| e.pi[self.labels[i][e.v]]);
        let first = it.next()?;
        it.all(|x| x == first).then_some(first)
    }

    fn run(&mut self, v: usize, tied: &[bool]) -> Result<bool> {
        if v == self.g.right {
            return Ok(true);
        }
        let mut tuple = vec![0usize; self.c];
        let mut next_tied = vec![false; tied.len()];
        'tuples: loop {
            self.budget.charge(1)?;
            let mut ok = true;
            for i in 0..tied.len() {
                if tied[i] && tuple[i] > tuple[i + 1] {
                    ok = false;
                    break;
                }
                next_tied[i] = tied[i] && tuple[i] == tuple[i + 1];
            }
            if ok {
                for (i, &t) in tuple.iter().enumerate() {
                    self.labels[i][v] = t;
                }
                let covered = self.closing[v]
                    .iter()
                    .all(|&u| (0..self.c).any(|i| self.left_label(i, u).is_some()));
                if covered && self.run(v + 1, &next_tied.clone())? {
                    return Ok(true);
                }
            }
            if !next_word(&mut tuple, self.g.r) {
                break 'tuples;
            }
        }
        Ok(false)
    }
}

/// `c` labelings such that every left vertex has all incident edges
/// satisfied by one of them, or `None`.
pub fn is_c_coverable(g: &LabelCoverInstance, c: usize, budget: &mut Budget) -> Result<Option<Vec<Labeling>>> {
    if c == 0 {
        return Err(invalid("c must be at least 1"));
    }
    let mut closing = vec![Vec::new(); g.right];
    for u in 0..g.left {
        if let Some(last) = g.edges_at_left(u).map(|e| e.v).max() {
            closing[last].push(u);
        }
    }
    let mut search = CoverSearch { g, c, closing, labels: vec![vec![0; g.right]; c], budget };
    if !search.run(0, &vec![true; c - 1])? {
        return Ok(None);
    }
    let labelings = (0..c)
        .map(|i| Labeling {
            left: (0..g.left).map(|u| search.left_label(i, u).unwrap_or(0)).collect(),
            right: search.labels[i].clone(),
        })
        .collect();
    Ok(Some(labelings))
}

impl Labeling {
    /// `left labels | right labels` on one line.
    pub fn to_text(&self) -> String {
        let join = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
        format!("{} | {}", join(&self.left), join(&self.right))
    }

    pub fn from_text(line: &str) -> Result<Self> {
        let (l, r) = line.split_once('|').ok_or_else(|| Error::Parse(format!("labeling `{line}` lacks `|`")))?;
        let nums = |s: &str| s.split_whitespace().map(|t| parse_field(Some(t), "label")).collect::<Result<Vec<usize>>>();
        Ok(Labeling { left: nums(l)?, right: nums(r)? })
    }
}

/// One labeling per content line.
pub fn labelings_from_text(text: &str) -> Result<Vec<Labeling>> {
    content_lines(text).map(Labeling::from_text).collect()
}

/// Checks that `labelings` cover `g` in the coverability sense.
pub fn labelings_cover(g: &LabelCoverInstance, labelings: &[Labeling]) -> Result<bool> {
    for lab in labelings {
        g.check_labeling(lab)?;
    }
    Ok((0..g.left).all(|u| labelings.iter().any(|lab| g.covers_left_vertex(lab, u))))
}

/// `E_u[|π_uv(α)|⁻¹]` over the edges at `v`.
pub fn smoothness_profile(g: &LabelCoverInstance, v: usize, alpha: &[usize]) -> Result<Rational> {
    if alpha.is_empty() {
        return Err(invalid("alpha must be nonempty"));
    }
    if v >= g.right {
        return Err(invalid(format!("right vertex {v} out of range")));
    }
    if alpha.iter().any(|&j| j >= g.r) {
        return Err(invalid("alpha outside [R]"));
    }
    let mut sum = Rational::zero();
    let mut n = 0i64;
    for e in g.edges_at_right(v) {
        let mut image: Vec<usize> = alpha.iter().map(|&j| e.pi[j]).collect();
        image.sort_unstable();
        image.dedup();
        sum += Rational::new(1, image.len() as i64);
        n += 1;
    }
    if n == 0 {
        return Err(precondition(format!("right vertex {v} is isolated")));
    }
    Ok(sum / Rational::from(n))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SynthKind {
    /// Bijective projections consistent with one planted labeling.
    UniqueConsistent,
    /// Bijective projections, 2-coverable by two planted labelings, not 1-coverable.
    UniqueTwoCover,
    /// `d`-to-1 projections consistent with one planted labeling.
    DtoOneConsistent,
    /// Uniformly random `d`-to-1 projections.
    DtoOneRandom,
    /// Each random `d`-to-1 edge doubled with a shifted copy; value at most 1/2.
    DtoOneContradictory,
}

impl std::str::FromStr for SynthKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "unique-consistent" => SynthKind::UniqueConsistent,
            "unique-2-cover" => SynthKind::UniqueTwoCover,
            "dto1-consistent" => SynthKind::DtoOneConsistent,
            "dto1-random" => SynthKind::DtoOneRandom,
            "dto1-contradictory" => SynthKind::DtoOneContradictory,
            _ => return Err(Error::Parse(format!("unknown instance kind `{s}`"))),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SynthParams {
    pub left: usize,
    pub right: usize,
    /// Left alphabet size `L`.
    pub labels: usize,
    /// Projection multiplicity; `R = d·L`. Forced to 1 for unique kinds.
    pub d: usize,
    pub left_degree: usize,
}

/// A generated instance with the labelings its construction plants.
#[derive(Clone, Debug)]
pub struct Synthesized {
    pub instance: LabelCoverInstance,
    pub planted: Vec<Labeling>,
}

/// Bi-regular edge endpoints: right-vertex slots dealt out in shuffled order.
fn biregular_pairs(p: &SynthParams, rng: &mut ChaCha8Rng) -> Result<Vec<(usize, usize)>> {
    let total = p.left * p.left_degree;
    if total % p.right != 0 {
        return Err(invalid("|U|·degree must be divisible by |V| for a bi-regular graph"));
    }
    let mut slots: Vec<usize> = (0..p.right).flat_map(|v| std::iter::repeat(v).take(total / p.right)).collect();
    slots.shuffle(rng);
    Ok(slots.chunks(p.left_degree).enumerate().flat_map(|(u, vs)| vs.iter().map(move |&v| (u, v))).collect())
}

/// Random `d`-to-1 map `[dL] → [L]`, optionally forced to send `from` to `to`.
fn random_projection(l: usize, d: usize, fix: Option<(usize, usize)>, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut pi: Vec<usize> = (0..l).flat_map(|i| std::iter::repeat(i).take(d)).collect();
    pi.shuffle(rng);
    if let Some((from, to)) = fix {
        let swap = pi.iter().position(|&x| x == to).expect("every label has preimages");
        pi.swap(from, swap);
    }
    pi
}

fn planted(left: usize, right: usize, l: usize, r: usize, rng: &mut ChaCha8Rng) -> Labeling {
    Labeling {
        left: (0..left).map(|_| rng.gen_range(0..l)).collect(),
        right: (0..right).map(|_| rng.gen_range(0..r)).collect(),
    }
}

const MAX_REJECTIONS: usize = 1000;

/// Deterministic given `seed`.
pub fn synthesize(kind: SynthKind, params: SynthParams, seed: u64) -> Result<Synthesized> {
    let p = params;
    if p.left == 0 || p.right == 0 || p.labels == 0 || p.left_degree == 0 || p.d == 0 {
        return Err(invalid("synthesis parameters must be positive"));
    }
    let unique = matches!(kind, SynthKind::UniqueConsistent | SynthKind::UniqueTwoCover);
    let d = if unique { 1 } else { p.d };
    let (l, r) = (p.labels, p.labels * d);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match kind {
        SynthKind::UniqueConsistent | SynthKind::DtoOneConsistent => {
            let lab = planted(p.left, p.right, l, r, &mut rng);
            let edges = biregular_pairs(&p, &mut rng)?
                .into_iter()
                .map(|(u, v)| Edge { u, v, pi: random_projection(l, d, Some((lab.right[v], lab.left[u])), &mut rng) })
                .collect();
            let instance = LabelCoverInstance::new(p.left, p.right, l, r, unique, edges)?;
            Ok(Synthesized { instance, planted: vec![lab] })
        }
        SynthKind::DtoOneRandom | SynthKind::DtoOneContradictory => {
            if kind == SynthKind::DtoOneContradictory && l < 2 {
                return Err(invalid("contradictory instances need L >= 2"));
            }
            let mut edges = Vec::new();
            for (u, v) in biregular_pairs(&p, &mut rng)? {
                let pi = random_projection(l, d, None, &mut rng);
                if kind == SynthKind::DtoOneContradictory {
                    edges.push(Edge { u, v, pi: pi.iter().map(|&x| (x + 1) % l).collect() });
                }
                edges.push(Edge { u, v, pi });
            }
            let instance = LabelCoverInstance::new(p.left, p.right, l, r, false, edges)?;
            Ok(Synthesized { instance, planted: Vec::new() })
        }
        SynthKind::UniqueTwoCover => {
            if l < 2 || p.left_degree < 2 {
                return Err(invalid("a 2-cover source needs L >= 2 and left degree >= 2"));
            }
            for _ in 0..MAX_REJECTIONS {
                let first = planted(p.left, p.right, l, r, &mut rng);
                let second = planted(p.left, p.right, l, r, &mut rng);
                let side: Vec<bool> = (0..p.left).map(|_| rng.gen()).collect();
                let edges: Vec<Edge> = biregular_pairs(&p, &mut rng)?
                    .into_iter()
                    .map(|(u, v)| {
                        let lab = if side[u] { &second } else { &first };
                        Edge { u, v, pi: random_projection(l, 1, Some((lab.right[v], lab.left[u])), &mut rng) }
                    })
                    .collect();
                let instance = LabelCoverInstance::new(p.left, p.right, l, r, true, edges)?;
                if is_c_coverable(&instance, 1, &mut Budget::default())?.is_none() {
                    return Ok(Synthesized { instance, planted: vec![first, second] });
                }
            }
            Err(invalid("could not draw a source that is 2-coverable but not 1-coverable"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn params(left: usize, right: usize, labels: usize, d: usize, deg: usize) -> SynthParams {
        SynthParams { left, right, labels, d, left_degree: deg }
    }

    /// Independent oracle: enumerate every full labeling, left side outermost.
    fn brute_max(g: &LabelCoverInstance) -> Rational {
        let mut best = Rational::zero();
        let mut left = vec![0usize; g.left_size()];
        loop {
            let mut right = vec![0usize; g.right_size()];
            loop {
                let f = satisfied_fraction(g, &Labeling { left: left.clone(), right: right.clone() }).unwrap();
                best = best.max(f);
                if !next_word(&mut right, g.right_alphabet()) {
                    break;
                }
            }
            if !next_word(&mut left, g.left_alphabet()) {
                break;
            }
        }
        best
    }

    #[test]
    fn labeling_text_round_trip() {
        let lab = Labeling { left: vec![0, 2], right: vec![1, 1, 0] };
        assert_eq!(Labeling::from_text(&lab.to_text()).unwrap(), lab);
        let both = labelings_from_text("# two\n0 | 1\n1 | 0\n").unwrap();
        assert_eq!(both.len(), 2);
        assert!(Labeling::from_text("0 1").is_err());
    }

    #[test]
    fn fractions() {
        let g = LabelCoverInstance::new(1, 1, 2, 2, true, vec![Edge { u: 0, v: 0, pi: vec![1, 0] }]).unwrap();
        assert_eq!(satisfied_fraction(&g, &Labeling { left: vec![1], right: vec![0] }).unwrap(), q(1, 1));
        assert_eq!(satisfied_fraction(&g, &Labeling { left: vec![0], right: vec![0] }).unwrap(), q(0, 1));
        assert!(satisfied_fraction(&g, &Labeling { left: vec![], right: vec![0] }).is_err());

        let ident = LabelCoverInstance::new(
            2,
            2,
            3,
            3,
            true,
            (0..2).flat_map(|u| (0..2).map(move |v| Edge { u, v, pi: vec![0, 1, 2] })).collect(),
        )
        .unwrap();
        let lab = Labeling { left: vec![2, 2], right: vec![2, 2] };
        assert_eq!(satisfied_fraction(&ident, &lab).unwrap(), q(1, 1));
    }

    #[test]
    fn contradictory_parallel_edges() {
        let g = LabelCoverInstance::new(
            1,
            1,
            2,
            2,
            true,
            vec![Edge { u: 0, v: 0, pi: vec![0, 1] }, Edge { u: 0, v: 0, pi: vec![1, 0] }],
        )
        .unwrap();
        assert_eq!(max_satisfiable(&g, &mut Budget::default()).unwrap().0, q(1, 2));
        assert!(is_c_coverable(&g, 1, &mut Budget::default()).unwrap().is_none());
        assert!(is_c_coverable(&g, 2, &mut Budget::default()).unwrap().is_none());
    }

    #[test]
    fn validation() {
        assert!(LabelCoverInstance::new(1, 1, 2, 2, true, vec![Edge { u: 0, v: 0, pi: vec![0, 0] }]).is_err());
        assert!(LabelCoverInstance::new(1, 1, 2, 2, false, vec![Edge { u: 0, v: 0, pi: vec![0, 2] }]).is_err());
        assert!(LabelCoverInstance::new(1, 1, 2, 2, false, vec![Edge { u: 1, v: 0, pi: vec![0, 1] }]).is_err());
        assert!(LabelCoverInstance::new(1, 1, 2, 3, true, vec![]).is_err());
    }

    #[test]
    fn max_satisfiable_matches_full_enumeration() {
        for seed in 0..12 {
            let g = synthesize(SynthKind::DtoOneRandom, params(2, 2, 2, 1 + (seed as usize % 2), 2), seed)
                .unwrap()
                .instance;
            let (value, lab) = max_satisfiable(&g, &mut Budget::default()).unwrap();
            assert_eq!(value, brute_max(&g));
            assert_eq!(satisfied_fraction(&g, &lab).unwrap(), value);
        }
    }

    #[test]
    fn coverable_implies_satisfiable() {
        for seed in 0..10 {
            let s = synthesize(SynthKind::UniqueConsistent, params(2, 3, 3, 1, 3), seed).unwrap();
            let cover = is_c_coverable(&s.instance, 1, &mut Budget::default()).unwrap().unwrap();
            assert!(labelings_cover(&s.instance, &cover).unwrap());
            assert_eq!(max_satisfiable(&s.instance, &mut Budget::default()).unwrap().0, q(1, 1));
            assert_eq!(satisfied_fraction(&s.instance, &s.planted[0]).unwrap(), q(1, 1));
        }
    }

    #[test]
    fn two_cover_sources() {
        for seed in 0..8 {
            let s = synthesize(SynthKind::UniqueTwoCover, params(2, 2, 2, 1, 2), seed).unwrap();
            assert!(is_c_coverable(&s.instance, 1, &mut Budget::default()).unwrap().is_none());
            let found = is_c_coverable(&s.instance, 2, &mut Budget::default()).unwrap().unwrap();
            assert!(labelings_cover(&s.instance, &found).unwrap());
            assert!(labelings_cover(&s.instance, &s.planted).unwrap());
            assert_eq!(s.instance.biregular_degrees(), Some((2, 2)));
        }
    }

    #[test]
    fn dto1_shapes() {
        let s = synthesize(SynthKind::DtoOneRandom, params(3, 3, 2, 2, 2), 7).unwrap();
        assert_eq!(s.instance.d_to_1(), Some(2));
        for e in s.instance.edges() {
            for i in 0..2 {
                assert_eq!(e.pi.iter().filter(|&&x| x == i).count(), 2);
            }
        }
        let c = synthesize(SynthKind::DtoOneConsistent, params(2, 2, 2, 2, 2), 3).unwrap();
        assert_eq!(satisfied_fraction(&c.instance, &c.planted[0]).unwrap(), q(1, 1));
        let bad = synthesize(SynthKind::DtoOneContradictory, params(2, 2, 2, 1, 1), 5).unwrap();
        assert!(max_satisfiable(&bad.instance, &mut Budget::default()).unwrap().0 <= q(1, 2));
        assert!(synthesize(SynthKind::DtoOneRandom, params(3, 2, 2, 1, 1), 0).is_err());
    }

    #[test]
    fn synthesis_is_deterministic() {
        let a = synthesize(SynthKind::UniqueTwoCover, params(2, 2, 3, 1, 2), 42).unwrap();
        let b = synthesize(SynthKind::UniqueTwoCover, params(2, 2, 3, 1, 2), 42).unwrap();
        assert_eq!(a.instance, b.instance);
        assert_eq!(a.planted, b.planted);
    }

    #[test]
    fn relabeling_preserves_value() {
        for seed in 0..6 {
            let g = synthesize(SynthKind::UniqueTwoCover, params(2, 2, 3, 1, 2), seed).unwrap().instance;
            let sigma = [2usize, 0, 1];
            let mut inv = [0usize; 3];
            for (i, &s) in sigma.iter().enumerate() {
                inv[s] = i;
            }
            let edges = g
                .edges()
                .iter()
                .map(|e| Edge { u: e.u, v: e.v, pi: (0..3).map(|j| sigma[e.pi[inv[j]]]).collect() })
                .collect();
            let h = LabelCoverInstance::new(2, 2, 3, 3, true, edges).unwrap();
            let mut b = Budget::default();
            assert_eq!(max_satisfiable(&g, &mut b).unwrap().0, max_satisfiable(&h, &mut b).unwrap().0);
        }
    }

    #[test]
    fn smoothness() {
        let g = synthesize(SynthKind::UniqueConsistent, params(3, 3, 3, 1, 2), 1).unwrap().instance;
        assert_eq!(smoothness_profile(&g, 0, &[0, 1, 2]).unwrap(), q(1, 3));
        let constant = LabelCoverInstance::new(2, 1, 2, 4, false, vec![
            Edge { u: 0, v: 0, pi: vec![0, 0, 1, 1] },
            Edge { u: 1, v: 0, pi: vec![0, 1, 0, 1] },
        ])
        .unwrap();
        assert_eq!(smoothness_profile(&constant, 0, &[0, 1]).unwrap(), q(3, 4));
        assert_eq!(smoothness_profile(&constant, 0, &[0]).unwrap(), q(1, 1));
        let s = synthesize(SynthKind::DtoOneRandom, params(4, 2, 2, 2, 1), 9).unwrap().instance;
        for v in 0..2 {
            for alpha in [vec![0], vec![0, 1], vec![1, 2, 3], vec![0, 1, 2, 3]] {
                let p = smoothness_profile(&s, v, &alpha).unwrap();
                let direct: Vec<f64> = s
                    .edges_at_right(v)
                    .map(|e| {
                        let mut img: Vec<usize> = alpha.iter().map(|&j| e.pi[j]).collect();
                        img.sort();
                        img.dedup();
                        1.0 / img.len() as f64
                    })
                    .collect();
                let mean = direct.iter().sum::<f64>() / direct.len() as f64;
                assert!((p.to_f64() - mean).abs() < 1e-12);
                assert!(p >= Rational::new(1, alpha.len() as i64) && p <= q(1, 1));
            }
        }
        let isolated = LabelCoverInstance::new(1, 2, 2, 2, true, vec![Edge { u: 0, v: 0, pi: vec![0, 1] }]).unwrap();
        assert!(smoothness_profile(&isolated, 1, &[0]).is_err());
        assert!(smoothness_profile(&isolated, 0, &[]).is_err());
    }

    #[test]
    fn text_round_trip() {
        let g = synthesize(SynthKind::DtoOneRandom, params(2, 2, 2, 2, 2), 4).unwrap().instance;
        assert_eq!(LabelCoverInstance::from_text(&g.to_text()).unwrap(), g);
        assert!(LabelCoverInstance::from_text("1 1 2 2 1\n0 0 0 0\n").is_err());
        assert!(LabelCoverInstance::from_text("1 1 2 2 0\n0 0 0\n").is_err());
    }
}
