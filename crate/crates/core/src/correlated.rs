//! Finite correlated spaces `(Ω₁^k × Ω₂^k, μ)`: connectivity, Markov
//! operators, maximal correlation, and the invariance-principle checker.

use std::collections::{BTreeMap, VecDeque};

use nalgebra::{DMatrix, SymmetricEigen};
use num::{One, Zero};

use crate::boolanalysis::{efron_stein, Blocks, TabulatedFunction};
use crate::error::{invalid, mismatch, precondition, Budget, Error, Result};
use crate::predicate::{content_lines, format_digits, parse_digits, parse_field};
use crate::rational::Rational;

/// A joint distribution on pairs `(x, y) ∈ Ω₁^k × Ω₂^k`, stored on its
/// support. Zero-probability atoms are dropped on construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorrelatedSpace {
    k: usize,
    n1: usize,
    n2: usize,
    left: Vec<Vec<usize>>,
    right: Vec<Vec<usize>>,
    mu1: Vec<Rational>,
    mu2: Vec<Rational>,
    /// `(left index, right index, probability)`, sorted.
    atoms: Vec<(usize, usize, Rational)>,
}

pub type Atom = (Vec<usize>, Vec<usize>, Rational);

impl CorrelatedSpace {
    pub fn new(k: usize, n1: usize, n2: usize, atoms: impl IntoIterator<Item = Atom>) -> Result<Self> {
        if k == 0 || n1 == 0 || n2 == 0 {
            return Err(invalid("k, |Ω₁| and |Ω₂| must be positive"));
        }
        let mut merged: BTreeMap<(Vec<usize>, Vec<usize>), Rational> = BTreeMap::new();
        for (x, y, p) in atoms {
            if x.len() != k || y.len() != k {
                return Err(mismatch(format!("atom of length ({}, {}) for k = {k}", x.len(), y.len())));
            }
            if x.iter().any(|&a| a >= n1) || y.iter().any(|&b| b >= n2) {
                return Err(invalid("atom symbol out of range"));
            }
            if p.is_negative() {
                return Err(invalid("negative probability"));
            }
            *merged.entry((x, y)).or_insert_with(Rational::zero) += p;
        }
        merged.retain(|_, p| p.is_positive());
        let total: Rational = merged.values().sum();
        if merged.is_empty() {
            return Err(invalid("empty support"));
        }
        if total != Rational::one() {
            return Err(invalid(format!("probabilities sum to {total}, not 1")));
        }
        let mut left: Vec<Vec<usize>> = merged.keys().map(|(x, _)| x.clone()).collect();
        let mut right: Vec<Vec<usize>> = merged.keys().map(|(_, y)| y.clone()).collect();
        left.sort();
        left.dedup();
        right.sort();
        right.dedup();
        let mut mu1 = vec![Rational::zero(); left.len()];
        let mut mu2 = vec![Rational::zero(); right.len()];
        let atoms: Vec<(usize, usize, Rational)> = merged
            .into_iter()
            .map(|((x, y), p)| {
                let i = left.binary_search(&x).expect("collected");
                let j = right.binary_search(&y).expect("collected");
                mu1[i] += &p;
                mu2[j] += &p;
                (i, j, p)
            })
            .collect();
        Ok(CorrelatedSpace { k, n1, n2, left, right, mu1, mu2, atoms })
    }

    /// `μ₁ ⊗ μ₂` from two distributions on `Ω₁^k` and `Ω₂^k`.
    pub fn product(
        k: usize,
        n1: usize,
        n2: usize,
        left: &[(Vec<usize>, Rational)],
        right: &[(Vec<usize>, Rational)],
    ) -> Result<Self> {
        let atoms = left
            .iter()
            .flat_map(|(x, p)| right.iter().map(move |(y, r)| (x.clone(), y.clone(), p * r)));
        CorrelatedSpace::new(k, n1, n2, atoms)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn alphabet_sizes(&self) -> (usize, usize) {
        (self.n1, self.n2)
    }

    /// Support of `μ₁`, sorted.
    pub fn left_support(&self) -> &[Vec<usize>] {
        &self.left
    }

    pub fn right_support(&self) -> &[Vec<usize>] {
        &self.right
    }

    pub fn mu1(&self) -> &[Rational] {
        &self.mu1
    }

    pub fn mu2(&self) -> &[Rational] {
        &self.mu2
    }

    pub fn atoms(&self) -> impl Iterator<Item = Atom> + '_ {
        self.atoms.iter().map(|(i, j, p)| (self.left[*i].clone(), self.right[*j].clone(), p.clone()))
    }

    /// Smallest atom probability.
    pub fn min_atom(&self) -> Rational {
        self.atoms.iter().map(|a| a.2.clone()).min().expect("nonempty support")
    }

    /// The support viewed in `(Ω₁ × Ω₂)^k`: coordinate `i` is `x_i·|Ω₂| + y_i`.
    pub fn paired_support(&self) -> Vec<Vec<usize>> {
        self.atoms
            .iter()
            .map(|(i, j, _)| self.left[*i].iter().zip(&self.right[*j]).map(|(&a, &b)| a * self.n2 + b).collect())
            .collect()
    }

    /// Distribution of `(x_i, y_j)`.
    pub fn pair_marginal(&self, i: usize, j: usize) -> Vec<Vec<Rational>> {
        let mut m = vec![vec![Rational::zero(); self.n2]; self.n1];
        for (a, b, p) in &self.atoms {
            m[self.left[*a][i]][self.right[*b][j]] += p;
        }
        m
    }

    /// Distribution of the single coordinate `x_i` (left) or `y_i` (right).
    pub fn coordinate_marginal(&self, right: bool, i: usize) -> Vec<Rational> {
        let (n, support, mu) = if right { (self.n2, &self.right, &self.mu2) } else { (self.n1, &self.left, &self.mu1) };
        let mut m = vec![Rational::zero(); n];
        for (t, p) in support.iter().zip(mu) {
            m[t[i]] += p;
        }
        m
    }

    /// The joint as a single-coordinate space `(Ω₁^k) × (Ω₂^k)`, atoms
    /// renamed to their support indices.
    pub fn flatten(&self) -> CorrelatedSpace {
        let atoms = self.atoms.iter().map(|(i, j, p)| (vec![*i], vec![*j], p.clone()));
        CorrelatedSpace::new(1, self.left.len(), self.right.len(), atoms).expect("valid by construction")
    }

    /// Header `k |Ω₁| |Ω₂|`, then `left right num/den` per support atom.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.k, self.n1, self.n2);
        for (x, y, p) in self.atoms() {
            out.push_str(&format!("{} {} {}\n", digits(&x), digits(&y), p));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = content_lines(text);
        let header = lines.next().ok_or_else(|| Error::Parse("empty correlated space".into()))?;
        let mut it = header.split_whitespace();
        let k: usize = parse_field(it.next(), "k")?;
        let n1: usize = parse_field(it.next(), "|Ω₁|")?;
        let n2: usize = parse_field(it.next(), "|Ω₂|")?;
        if n1 > 10 || n2 > 10 {
            return Err(Error::Parse("text format supports alphabets up to 10".into()));
        }
        let mut atoms = Vec::new();
        for line in lines {
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != 3 {
                return Err(Error::Parse(format!("atom line `{line}` should have 3 fields")));
            }
            let x = parse_digits(toks[0], n1 as u8, k)?.into_iter().map(usize::from).collect();
            let y = parse_digits(toks[1], n2 as u8, k)?.into_iter().map(usize::from).collect();
            atoms.push((x, y, toks[2].parse()?));
        }
        CorrelatedSpace::new(k, n1, n2, atoms)
    }

    pub fn markov(&self) -> MarkovOperator {
        let mut table = vec![vec![Rational::zero(); self.right.len()]; self.left.len()];
        for (i, j, p) in &self.atoms {
            table[*i][*j] = p / &self.mu1[*i];
        }
        MarkovOperator { table }
    }
}

fn digits(t: &[usize]) -> String {
    format_digits(&t.iter().map(|&x| x as u8).collect::<Vec<u8>>())
}

/// `(Ug)(x) = E[g(Y) | X = x]` on the supports of `μ₁` and `μ₂`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkovOperator {
    /// `table[x][y] = μ(y | x)`.
    table: Vec<Vec<Rational>>,
}

impl MarkovOperator {
    pub fn table(&self) -> &[Vec<Rational>] {
        &self.table
    }

    /// `g` is indexed by right-support atoms; the result by left-support atoms.
    pub fn apply(&self, g: &[Rational]) -> Result<Vec<Rational>> {
        if self.table.first().map_or(0, Vec::len) != g.len() {
            return Err(mismatch("g must be indexed by the right support"));
        }
        Ok(self.table.iter().map(|row| row.iter().zip(g).map(|(p, v)| p * v).sum()).collect())
    }
}

/// `U g` for a single space.
pub fn markov_apply(space: &CorrelatedSpace, g: &[Rational]) -> Result<Vec<Rational>> {
    space.markov().apply(g)
}

/// True iff every single-coordinate-change path connects the support.
pub fn is_connected(support: &[Vec<usize>]) -> Result<bool> {
    if support.is_empty() {
        return Err(invalid("empty support"));
    }
    let mut pts = support.to_vec();
    pts.sort();
    pts.dedup();
    let mut seen = vec![false; pts.len()];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(a) = queue.pop_front() {
        for b in 0..pts.len() {
            if !seen[b] && pts[a].iter().zip(&pts[b]).filter(|(x, y)| x != y).count() == 1 {
                seen[b] = true;
                queue.push_back(b);
            }
        }
    }
    Ok(seen.into_iter().all(|s| s))
}

/// Every left/right coordinate pair `(x_i, y_j)` is exactly independent.
pub fn pairwise_product_check(space: &CorrelatedSpace) -> bool {
    (0..space.k).all(|i| {
        let a = space.coordinate_marginal(false, i);
        (0..space.k).all(|j| {
            let b = space.coordinate_marginal(true, j);
            let m = space.pair_marginal(i, j);
            m.iter().enumerate().all(|(x, row)| row.iter().enumerate().all(|(y, p)| *p == &a[x] * &b[y]))
        })
    })
}

fn sqrt_vec(v: &[Rational]) -> Vec<f64> {
    v.iter().map(|p| p.to_f64().sqrt()).collect()
}

/// Maximal correlation `ρ`: the top singular value of the normalised joint
/// matrix `μ(x,y)/√(μ₁(x)μ₂(y))` after removing its trivial
/// `√μ₁ √μ₂ᵀ` component (singular value 1).
pub fn correlation_rho(space: &CorrelatedSpace) -> f64 {
    let (s1, s2) = (sqrt_vec(&space.mu1), sqrt_vec(&space.mu2));
    let mut m = DMatrix::from_fn(s1.len(), s2.len(), |i, j| -s1[i] * s2[j]);
    for (i, j, p) in &space.atoms {
        m[(*i, *j)] += p.to_f64() / (s1[*i] * s2[*j]);
    }
    m.singular_values().max().clamp(0.0, 1.0)
}

/// `ρ` by maximising `E[(Ug)²]` over an orthonormal basis of mean-zero
/// right functions.
pub fn correlation_rho_markov(space: &CorrelatedSpace) -> f64 {
    let mu2: Vec<f64> = space.mu2.iter().map(Rational::to_f64).collect();
    let mu1: Vec<f64> = space.mu1.iter().map(Rational::to_f64).collect();
    let n = mu2.len();
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).zip(&mu2).map(|((x, y), w)| x * y * w).sum::<f64>();
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for y in 0..n {
        let mut g: Vec<f64> = (0..n).map(|z| if z == y { 1.0 } else { 0.0 } - mu2[y]).collect();
        for b in &basis {
            let c = dot(&g, b);
            g.iter_mut().zip(b).for_each(|(x, bb)| *x -= c * bb);
        }
        let norm = dot(&g, &g).sqrt();
        if norm > 1e-10 {
            basis.push(g.into_iter().map(|x| x / norm).collect());
        }
    }
    if basis.is_empty() {
        return 0.0;
    }
    let p: Vec<Vec<f64>> = space.markov().table.iter().map(|r| r.iter().map(Rational::to_f64).collect()).collect();
    let images: Vec<Vec<f64>> =
        basis.iter().map(|g| p.iter().map(|row| row.iter().zip(g).map(|(a, b)| a * b).sum()).collect()).collect();
    let d = basis.len();
    let q = DMatrix::from_fn(d, d, |a, b| images[a].iter().zip(&images[b]).zip(&mu1).map(|((x, y), w)| x * y * w).sum::<f64>());
    let top: f64 = SymmetricEigen::new(q).eigenvalues.max();
    top.max(0.0).sqrt().min(1.0)
}

/// A product of independent correlated blocks. Left and right functions
/// live on the product of block supports, one coordinate per block, under
/// `⊗ μ₁` and `⊗ μ₂`.
#[derive(Clone, Debug)]
pub struct BlockProduct {
    blocks: Vec<CorrelatedSpace>,
}

impl BlockProduct {
    pub fn new(blocks: Vec<CorrelatedSpace>) -> Result<Self> {
        if blocks.is_empty() || blocks.len() > 24 {
            return Err(invalid("between 1 and 24 blocks"));
        }
        Ok(BlockProduct { blocks })
    }

    pub fn blocks(&self) -> &[CorrelatedSpace] {
        &self.blocks
    }

    fn domain(&self, right: bool) -> (Vec<usize>, Vec<Vec<Rational>>) {
        self.blocks
            .iter()
            .map(|b| if right { (b.right.len(), b.mu2.clone()) } else { (b.left.len(), b.mu1.clone()) })
            .unzip()
    }

    pub fn right_function(&self, values: Vec<Rational>) -> Result<TabulatedFunction> {
        let (sizes, measures) = self.domain(true);
        TabulatedFunction::new(sizes, measures, values)
    }

    pub fn left_function(&self, values: Vec<Rational>) -> Result<TabulatedFunction> {
        let (sizes, measures) = self.domain(false);
        TabulatedFunction::new(sizes, measures, values)
    }

    /// The tensor-product Markov operator, applied block by block.
    pub fn apply(&self, g: &TabulatedFunction) -> Result<TabulatedFunction> {
        let (sizes, measures) = self.domain(true);
        if g.sizes() != sizes.as_slice() || g.measures() != measures.as_slice() {
            return Err(mismatch("g is not a right function of this product"));
        }
        let mut cur = g.clone();
        for (b, block) in self.blocks.iter().enumerate() {
            let p = block.markov();
            let mut new_sizes = cur.sizes().to_vec();
            let mut new_measures = cur.measures().to_vec();
            new_sizes[b] = block.left.len();
            new_measures[b] = block.mu1.clone();
            let src = &cur;
            cur = TabulatedFunction::from_fn(new_sizes, new_measures, |pt| {
                let mut q = pt.to_vec();
                (0..block.right.len())
                    .map(|y| {
                        q[b] = y;
                        &p.table[pt[b]][y] * src.at(&q)
                    })
                    .sum()
            })?;
        }
        Ok(cur)
    }

    fn rho_max(&self) -> f64 {
        self.blocks.iter().map(correlation_rho).fold(0.0, f64::max)
    }

    /// Worst exact deviation `max_S max_x |(Ug)_S − U(g_S)|`.
    pub fn commute_check(&self, g: &TabulatedFunction) -> Result<Rational> {
        let blocks = Blocks::singletons(self.blocks.len());
        let ug = efron_stein(&self.apply(g)?, &blocks)?;
        let gs = efron_stein(g, &blocks)?;
        let mut worst = Rational::zero();
        for s in 0..1u64 << self.blocks.len() {
            let lhs = ug.component(s);
            let rhs = self.apply(gs.component(s))?;
            for (a, b) in lhs.values().iter().zip(rhs.values()) {
                worst = worst.max((a - b).abs());
            }
        }
        Ok(worst)
    }

    /// `(S, ‖U(g_S)‖₂, ρ^{|S|}‖g_S‖₂)` for every block subset `S`, with `ρ`
    /// the largest block correlation.
    pub fn decay_check(&self, g: &TabulatedFunction) -> Result<Vec<(u64, f64, f64)>> {
        let rho = self.rho_max();
        let gs = efron_stein(g, &Blocks::singletons(self.blocks.len()))?;
        (0..1u64 << self.blocks.len())
            .map(|s| {
                let comp = gs.component(s);
                let lhs = self.apply(comp)?.norm_sq().to_f64().sqrt();
                let rhs = rho.powi(s.count_ones() as i32) * comp.norm_sq().to_f64().sqrt();
                Ok((s, lhs, rhs))
            })
            .collect()
    }
}

/// Outcome of [`invariance_gap`].
#[derive(Clone, Debug)]
pub struct InvarianceReport {
    /// `|E_{μ^{⊗L}}[Π F(x_i)G(y_i)] − E[Π F(x_i)]·E[Π G(y_i)]|`, exact.
    pub gap: Rational,
    pub tau: f64,
    pub gamma: f64,
    /// `2^{4k+1}·Γ·τ`.
    pub bound: f64,
}

impl InvarianceReport {
    pub fn holds(&self) -> bool {
        self.gap.to_f64() <= self.bound * (1.0 + 1e-12) + 1e-15
    }
}

fn uniform_side(space: &CorrelatedSpace, right: bool) -> Result<Vec<Rational>> {
    let first = space.coordinate_marginal(right, 0);
    if (1..space.k).any(|i| space.coordinate_marginal(right, i) != first) {
        return Err(precondition("rows must share one single-coordinate marginal on each side"));
    }
    Ok(first)
}

/// Exact gap between the correlated and decoupled expectations of
/// `Π_i F(x_i) G(y_i)` over `L` independent columns, against the bound
/// `2^{4k+1} Γ τ` (the hybrid argument's explicit constant).
pub fn invariance_gap(
    space: &CorrelatedSpace,
    l: usize,
    f: &[Rational],
    g: &[Rational],
    budget: &mut Budget,
) -> Result<InvarianceReport> {
    if !pairwise_product_check(space) {
        return Err(precondition("a left/right coordinate pair is not independent"));
    }
    let (n1, n2, k) = (space.n1, space.n2, space.k);
    if f.len() != n1.pow(l as u32) || g.len() != n2.pow(l as u32) {
        return Err(mismatch("F must have |Ω₁|^L values and G |Ω₂|^L values"));
    }
    let one = Rational::one();
    if f.iter().chain(g).any(|v| v.abs() > one) {
        return Err(precondition("F and G must take values in [-1, 1]"));
    }
    let nu1 = uniform_side(space, false)?;
    let nu2 = uniform_side(space, true)?;
    let support = space.atoms.len() as u128;
    budget.require(support.saturating_pow(l as u32) + (space.left.len() as u128).saturating_pow(l as u32))?;

    // Row r of the k×L matrix read as an index into Ω^L (column 0 least significant).
    let row_index = |cols: &[&Vec<usize>], r: usize, n: usize| cols.iter().rev().fold(0, |acc, c| acc * n + c[r]);

    let mut joint = Rational::zero();
    let mut cols = vec![0usize; l];
    loop {
        budget.charge(1)?;
        let p: Rational = cols.iter().map(|&c| &space.atoms[c].2).product();
        let xs: Vec<&Vec<usize>> = cols.iter().map(|&c| &space.left[space.atoms[c].0]).collect();
        let ys: Vec<&Vec<usize>> = cols.iter().map(|&c| &space.right[space.atoms[c].1]).collect();
        let val: Rational = (0..k).map(|r| &f[row_index(&xs, r, n1)] * &g[row_index(&ys, r, n2)]).product();
        joint += p * val;
        if !advance(&mut cols, space.atoms.len()) {
            break;
        }
    }
    let side = |support: &[Vec<usize>], mu: &[Rational], h: &[Rational], n: usize, budget: &mut Budget| -> Result<Rational> {
        let mut total = Rational::zero();
        let mut cols = vec![0usize; l];
        loop {
            budget.charge(1)?;
            let p: Rational = cols.iter().map(|&c| &mu[c]).product();
            let xs: Vec<&Vec<usize>> = cols.iter().map(|&c| &support[c]).collect();
            total += p * (0..k).map(|r| h[row_index(&xs, r, n)].clone()).product::<Rational>();
            if !advance(&mut cols, support.len()) {
                return Ok(total);
            }
        }
    };
    let ef = side(&space.left, &space.mu1, f, n1, budget)?;
    let eg = side(&space.right, &space.mu2, g, n2, budget)?;
    let gap = (joint - ef * eg).abs();

    let infl = |h: &[Rational], n: usize, nu: &[Rational]| -> Result<Vec<f64>> {
        let t = TabulatedFunction::new(vec![n; l], vec![nu.to_vec(); l], h.to_vec())?;
        let es = efron_stein(&t, &Blocks::singletons(l))?;
        Ok((0..l).map(|i| es.influence(i).to_f64()).collect())
    };
    let inf_f = infl(f, n1, &nu1)?;
    let inf_g = infl(g, n2, &nu2)?;
    let tau = inf_f.iter().zip(&inf_g).map(|(a, b)| a * b).sum::<f64>().sqrt();
    let gamma = inf_f.iter().sum::<f64>().sqrt().max(inf_g.iter().sum::<f64>().sqrt());
    let bound = 2f64.powi(4 * k as i32 + 1) * gamma * tau;
    Ok(InvarianceReport { gap, tau, gamma, bound })
}

fn advance(word: &mut [usize], radix: usize) -> bool {
    for x in word.iter_mut() {
        *x += 1;
        if *x < radix {
            return true;
        }
        *x = 0;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn bits(k: usize, x: usize) -> Vec<usize> {
        (0..k).map(|i| x >> (k - 1 - i) & 1).collect()
    }

    fn uniform_product(k: usize) -> CorrelatedSpace {
        let side: Vec<(Vec<usize>, Rational)> = (0..1 << k).map(|x| (bits(k, x), Rational::new(1, 1 << k))).collect();
        CorrelatedSpace::product(k, 2, 2, &side, &side).unwrap()
    }

    fn identical_bits() -> CorrelatedSpace {
        CorrelatedSpace::new(1, 2, 2, vec![(vec![0], vec![0], q(1, 2)), (vec![1], vec![1], q(1, 2))]).unwrap()
    }

    #[test]
    fn connectivity() {
        assert!(!is_connected(&[vec![0, 0], vec![1, 1]]).unwrap());
        let cube: Vec<Vec<usize>> = (0..8).map(|x| bits(3, x)).collect();
        assert!(is_connected(&cube).unwrap());
        assert!(is_connected(&[vec![2, 1]]).unwrap());
        assert!(is_connected(&[]).is_err());
    }

    #[test]
    fn pairwise() {
        assert!(pairwise_product_check(&uniform_product(2)));
        assert!(!pairwise_product_check(&identical_bits()));
    }

    #[test]
    fn rho_examples() {
        assert!(correlation_rho(&uniform_product(2)) < 1e-9);
        assert!((correlation_rho(&identical_bits()) - 1.0).abs() < 1e-9);
        assert!((correlation_rho_markov(&identical_bits()) - 1.0).abs() < 1e-9);
        // A noisy copy of a bit: ρ = 1 − 2p.
        let noisy = CorrelatedSpace::new(
            1,
            2,
            2,
            vec![
                (vec![0], vec![0], q(3, 8)),
                (vec![0], vec![1], q(1, 8)),
                (vec![1], vec![0], q(1, 8)),
                (vec![1], vec![1], q(3, 8)),
            ],
        )
        .unwrap();
        assert!((correlation_rho(&noisy) - 0.5).abs() < 1e-9);
        assert!((correlation_rho_markov(&noisy) - 0.5).abs() < 1e-9);
    }

    #[test]
    fn rho_zero_iff_product_on_small_tables() {
        // All distributions on 2×2 with denominators ≤ 8.
        for den in 1..=8i64 {
            for a in 0..=den {
                for b in 0..=den - a {
                    for c in 0..=den - a - b {
                        let d = den - a - b - c;
                        let ps = [a, b, c, d];
                        let atoms = (0..4).map(|i| (vec![i >> 1], vec![i & 1], q(ps[i], den)));
                        let s = CorrelatedSpace::new(1, 2, 2, atoms).unwrap();
                        let rho = correlation_rho(&s);
                        let alt = correlation_rho_markov(&s);
                        assert!((0.0..=1.0).contains(&rho));
                        assert!((rho - alt).abs() < 1e-8, "{ps:?}: {rho} vs {alt}");
                        let mu1 = s.coordinate_marginal(false, 0);
                        let mu2 = s.coordinate_marginal(true, 0);
                        let product = (0..4).all(|i| q(ps[i], den) == &mu1[i >> 1] * &mu2[i & 1]);
                        assert_eq!(rho < 1e-9, product, "{ps:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn markov_examples() {
        let s = identical_bits();
        let u = s.markov();
        assert_eq!(u.apply(&[q(1, 1), q(1, 1)]).unwrap(), vec![q(1, 1), q(1, 1)]);
        let p = uniform_product(1);
        assert_eq!(markov_apply(&p, &[q(3, 1), q(-1, 1)]).unwrap(), vec![q(1, 1), q(1, 1)]);
        let skew = CorrelatedSpace::new(
            1,
            3,
            2,
            vec![(vec![0], vec![0], q(1, 6)), (vec![1], vec![1], q(1, 3)), (vec![2], vec![0], q(1, 4)), (vec![2], vec![1], q(1, 4))],
        )
        .unwrap();
        let g = [q(2, 1), q(-5, 3)];
        let ug = markov_apply(&skew, &g).unwrap();
        let lhs: Rational = ug.iter().zip(skew.mu1()).map(|(a, b)| a * b).sum();
        let rhs: Rational = g.iter().zip(skew.mu2()).map(|(a, b)| a * b).sum();
        assert_eq!(lhs, rhs);
        assert!(markov_apply(&skew, &[q(1, 1)]).is_err());
    }

    #[test]
    fn block_product_checks() {
        let noisy = CorrelatedSpace::new(
            1,
            2,
            2,
            vec![
                (vec![0], vec![0], q(3, 8)),
                (vec![0], vec![1], q(1, 8)),
                (vec![1], vec![0], q(1, 8)),
                (vec![1], vec![1], q(3, 8)),
            ],
        )
        .unwrap();
        let single = BlockProduct::new(vec![noisy.clone()]).unwrap();
        let g = single.right_function(vec![q(1, 1), q(-2, 1)]).unwrap();
        assert!(single.commute_check(&g).unwrap().is_zero());

        let prod = BlockProduct::new(vec![noisy.clone(), uniform_product(1)]).unwrap();
        let g = prod.right_function(vec![q(1, 1), q(-2, 1), q(0, 1), q(5, 3)]).unwrap();
        assert!(prod.commute_check(&g).unwrap().is_zero());
        for (s, lhs, rhs) in prod.decay_check(&g).unwrap() {
            assert!(lhs <= rhs + 1e-9, "S = {s}: {lhs} > {rhs}");
        }
    }

    #[test]
    fn invariance_product_space_has_zero_gap() {
        let s = uniform_product(2);
        let f: Vec<Rational> = [1, -1, -1, 1].iter().map(|&v| q(v, 1)).collect();
        let g: Vec<Rational> = [1, 1, -1, 1].iter().map(|&v| q(v, 1)).collect();
        let r = invariance_gap(&s, 2, &f, &g, &mut Budget::default()).unwrap();
        assert!(r.gap.is_zero());
        assert!(r.holds());
        let constant = vec![q(1, 2); 4];
        let r = invariance_gap(&s, 2, &constant, &g, &mut Budget::default()).unwrap();
        assert_eq!(r.tau, 0.0);
        assert!(invariance_gap(&identical_bits(), 1, &vec![q(1, 1); 2], &vec![q(1, 1); 2], &mut Budget::default()).is_err());
        assert!(invariance_gap(&s, 2, &vec![q(2, 1); 4], &g, &mut Budget::default()).is_err());
    }

    #[test]
    fn text_round_trip() {
        let s = uniform_product(2);
        assert_eq!(CorrelatedSpace::from_text(&s.to_text()).unwrap(), s);
        assert!(CorrelatedSpace::from_text("1 2 2\n0 0 1/2\n").is_err());
    }
}
