use std::collections::BTreeMap;

use num::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{
    check_sums_to_one, check_tables, check_unit_interval, decoded, draw_element, draw_set, fourier_weights,
    heaviest_folded, left_neighbourhoods, positive, sampled_instance, Decoded, Fallback,
};
use crate::correlated::CorrelatedSpace;
use crate::csp::{Assignment, Constraint, CspInstance};
use crate::error::{invalid, mismatch, precondition, Budget, Result};
use crate::labelcover::{satisfied_fraction, LabelCoverInstance, Labeling};
use crate::predicate::{Predicate, Tuple};
use crate::rational::Rational;

/// The per-block part of 𝒯₂: column distributions `𝒫₀`, `𝒫₁` on `{0,1}^k`
/// and the noise rate `ε ∈ (0, 1/2]`.
#[derive(Clone, Debug)]
pub struct T2Gadget {
    k: usize,
    p0: Vec<(Tuple, Rational)>,
    p1: Vec<(Tuple, Rational)>,
    eps: Rational,
}

/// A block outcome: `2d` columns of `X` then `2d` columns of `Y`, each a
/// mask with bit `r` holding row `r`.
type Block = (Vec<u32>, Vec<u32>);

fn mask(t: &[u8]) -> u32 {
    t.iter().enumerate().fold(0, |acc, (r, &b)| acc | (b as u32) << r)
}

impl T2Gadget {
    pub fn new(p0: Vec<(Tuple, Rational)>, p1: Vec<(Tuple, Rational)>, eps: Rational) -> Result<Self> {
        let k = p0.first().map_or(0, |(t, _)| t.len());
        if k == 0 || k > 16 || p0.iter().chain(&p1).any(|(t, _)| t.len() != k || t.iter().any(|&b| b > 1)) {
            return Err(invalid("𝒫₀ and 𝒫₁ must live on one {0,1}^k"));
        }
        check_sums_to_one(&p0, "𝒫₀")?;
        check_sums_to_one(&p1, "𝒫₁")?;
        check_unit_interval(&eps, "ε", true, Rational::new(1, 2))?;
        let half = Rational::new(1, 2);
        for (name, d) in [("𝒫₀", &p0), ("𝒫₁", &p1)] {
            for r in 0..k {
                let ones: Rational = positive(d).filter(|(t, _)| t[r] == 1).map(|(_, p)| p).sum();
                if ones != half {
                    return Err(precondition(format!("{name} is not uniform on coordinate {r}")));
                }
            }
        }
        let parity = |t: &Tuple| t.iter().filter(|&&b| b == 1).count() % 2;
        if positive(&p0).any(|(t, _)| parity(t) != 0) {
            return Err(precondition("supp(𝒫₀) must have even parity"));
        }
        if positive(&p1).any(|(t, _)| parity(t) != 1) {
            return Err(precondition("supp(𝒫₁) must have odd parity"));
        }
        Ok(T2Gadget { k, p0, p1, eps })
    }

    /// `𝒫₀` uniform on even strings, `𝒫₁` uniform on odd strings.
    pub fn parity(k: usize, eps: Rational) -> Result<Self> {
        let (mut even, mut odd) = (Vec::new(), Vec::new());
        for t in crate::predicate::all_tuples(2, k) {
            if t.iter().filter(|&&b| b == 1).count() % 2 == 0 {
                even.push(t);
            } else {
                odd.push(t);
            }
        }
        let w = Rational::new(1, even.len() as i64);
        let weigh = |v: Vec<Tuple>| v.into_iter().map(|t| (t, w.clone())).collect();
        T2Gadget::new(weigh(even), weigh(odd), eps)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn eps(&self) -> &Rational {
        &self.eps
    }

    pub fn p0(&self) -> &[(Tuple, Rational)] {
        &self.p0
    }

    pub fn p1(&self) -> &[(Tuple, Rational)] {
        &self.p1
    }

    /// Exact joint law of one block `(X^i, Y^i)` with block width `d`.
    /// Columns `0..d` sit in `B(i)` and `d..2d` in `B'(i)`.
    pub fn block_distribution(&self, d: usize, budget: &mut Budget) -> Result<Vec<(Block, Rational)>> {
        if d == 0 {
            return Err(invalid("d must be positive"));
        }
        let (s0, s1) = (positive(&self.p0).count() as u128, positive(&self.p1).count() as u128);
        let fresh = 1u128.checked_shl((2 * self.k * d) as u32).unwrap_or(u128::MAX);
        budget.require((s0 * s1).saturating_pow(2 * d as u32).saturating_mul(1 + 2 * fresh))?;
        budget.require_support((s0 * s1).saturating_pow(2 * d as u32).saturating_mul(fresh))?;

        let col_law = |dist: &[(Tuple, Rational)]| -> Vec<(u32, Rational)> {
            positive(dist).map(|(t, p)| (mask(t), p.clone())).collect()
        };
        let laws = [col_law(&self.p0), col_law(&self.p1)];
        let star = Rational::one() - &self.eps * &Rational::from_integer(2);
        let half = Rational::new(1, 2);
        let uniform_block = Rational::from_integer(2).pow((2 * self.k * d) as u32).recip();
        let mut out: BTreeMap<Block, Rational> = BTreeMap::new();
        for c1 in 0..2 {
            let (lx, ly) = (&laws[c1], &laws[1 - c1]);
            let unperturbed = product_columns(lx, 2 * d)
                .into_iter()
                .flat_map(|(xc, px)| product_columns(ly, 2 * d).into_iter().map(move |(yc, py)| (xc.clone(), yc, &px * &py)));
            for (xc, yc, p) in unperturbed {
                budget.charge(1)?;
                let p = &p * &half;
                if !star.is_zero() {
                    *out.entry((xc.clone(), yc.clone())).or_insert_with(Rational::zero) += &p * &star;
                }
                // c₂ = 0 refreshes the B' half, c₂ = 1 the B half.
                let resampled = &p * &self.eps * &uniform_block;
                for range in [d..2 * d, 0..d] {
                    for fresh_x in 0..1u64 << (self.k * d) {
                        for fresh_y in 0..1u64 << (self.k * d) {
                            budget.charge(1)?;
                            let (mut x, mut y) = (xc.clone(), yc.clone());
                            fill(&mut x[range.clone()], fresh_x, self.k);
                            fill(&mut y[range.clone()], fresh_y, self.k);
                            *out.entry((x, y)).or_insert_with(Rational::zero) += &resampled;
                        }
                    }
                }
            }
        }
        Ok(out.into_iter().filter(|(_, p)| p.is_positive()).collect())
    }

    /// The block as a correlated space with `k` coordinates per side:
    /// coordinate `r` is row `r` of `X^i` (left) or `Y^i` (right), a
    /// `2d`-bit string.
    pub fn block_space(&self, d: usize, budget: &mut Budget) -> Result<CorrelatedSpace> {
        let n = 1usize << (2 * d);
        let atoms = self.block_distribution(d, budget)?.into_iter().map(|((x, y), p)| (row_view(&x, self.k), row_view(&y, self.k), p));
        CorrelatedSpace::new(self.k, n, n, atoms)
    }

    /// The block split as `(X^i, Y^i_{-k})` against the last row `Y^i_k`,
    /// each side a single coordinate.
    pub fn split_space(&self, d: usize, budget: &mut Budget) -> Result<CorrelatedSpace> {
        let k = self.k;
        let w = 2 * d;
        let left_bits = w * (2 * k - 1);
        if left_bits > 24 {
            return Err(invalid("block too large to split"));
        }
        let atoms = self.block_distribution(d, budget)?.into_iter().map(|((x, y), p)| {
            let xr = row_view(&x, k);
            let yr = row_view(&y, k);
            let left = xr.iter().chain(&yr[..k - 1]).rev().fold(0usize, |acc, &r| acc << w | r);
            (vec![left], vec![yr[k - 1]], p)
        });
        CorrelatedSpace::new(1, 1 << left_bits, 1 << w, atoms)
    }
}

/// Rows of a block as `2d`-bit strings (column `c` is bit `c`).
fn row_view(cols: &[u32], k: usize) -> Vec<usize> {
    (0..k).map(|r| cols.iter().enumerate().fold(0usize, |acc, (c, &m)| acc | ((m >> r & 1) as usize) << c)).collect()
}

fn fill(cols: &mut [u32], bits: u64, k: usize) {
    let all = (1u64 << k) - 1;
    for (j, c) in cols.iter_mut().enumerate() {
        *c = (bits >> (j * k) & all) as u32;
    }
}

fn product_columns(law: &[(u32, Rational)], width: usize) -> Vec<(Vec<u32>, Rational)> {
    let mut acc = vec![(Vec::with_capacity(width), Rational::one())];
    for _ in 0..width {
        acc = acc
            .into_iter()
            .flat_map(|(cols, p)| {
                law.iter().map(move |(m, q)| {
                    let mut c = cols.clone();
                    c.push(*m);
                    (c, &p * q)
                })
            })
            .collect();
    }
    acc
}

/// Test 𝒯₂ over a `d`-to-1 Label-Cover source with `R = dL`.
#[derive(Clone, Debug)]
pub struct T2Params {
    pub predicate: Predicate,
    pub gadget: T2Gadget,
    pub source: LabelCoverInstance,
}

impl T2Params {
    pub fn new(predicate: Predicate, gadget: T2Gadget, source: LabelCoverInstance) -> Result<Self> {
        let k = gadget.k;
        if predicate.q() != 2 || predicate.k() != 2 * k {
            return Err(mismatch("P must be a 2k-ary Boolean predicate"));
        }
        if !predicate.is_subset_of(&Predicate::lin(2 * k)?) {
            return Err(precondition("P must be contained in 2k-LIN"));
        }
        for (a, _) in positive(&gadget.p0) {
            for (b, _) in positive(&gadget.p1) {
                let ab: Tuple = a.iter().chain(b).copied().collect();
                let ba: Tuple = b.iter().chain(a).copied().collect();
                if !predicate.contains(&ab) || !predicate.contains(&ba) {
                    return Err(precondition("P must contain a·b and b·a for a ∈ supp 𝒫₀, b ∈ supp 𝒫₁"));
                }
            }
        }
        if source.d_to_1().is_none() {
            return Err(precondition("𝒯₂ needs a d-to-1 source with R = dL"));
        }
        Ok(T2Params { predicate, gadget, source })
    }

    pub fn d(&self) -> usize {
        self.source.d_to_1().expect("validated")
    }

    fn points(&self) -> usize {
        1usize << (2 * self.source.right_alphabet())
    }
}

/// `π⁻¹(i)` in increasing order, for every `i ∈ [L]`.
fn preimages(pi: &[usize], l: usize) -> Vec<Vec<usize>> {
    let mut b = vec![Vec::new(); l];
    for (j, &i) in pi.iter().enumerate() {
        b[i].push(j);
    }
    b
}

/// Writes block `i` into the rows of a `k × 2R` matrix.
fn place(rows: &mut [u64], cols: &[u32], pre: &[usize], r: usize) {
    let d = pre.len();
    for (m, &j) in pre.iter().enumerate() {
        for (row, x) in rows.iter_mut().enumerate() {
            *x |= ((cols[m] >> row & 1) as u64) << j;
            *x |= ((cols[d + m] >> row & 1) as u64) << (r + j);
        }
    }
}

/// The exact 𝒯₂ instance over variables `V × {0,1}^{2R}`.
pub fn generate_t2(p: &T2Params, budget: &mut Budget) -> Result<CspInstance> {
    let (k, l, r) = (p.gadget.k, p.source.left_alphabet(), p.source.right_alphabet());
    let block = p.gadget.block_distribution(p.d(), budget)?;
    let (nb, active) = left_neighbourhoods(&p.source)?;
    let points = p.points();
    let per_pair = (block.len() as u128).saturating_pow(l as u32);
    let pairs: u128 = active.iter().map(|&u| (nb[u].len() as u128).pow(2)).sum();
    budget.require(per_pair.saturating_mul(pairs))?;
    budget.require_support(per_pair.saturating_mul(pairs))?;

    let mut constraints = Vec::new();
    for &u in &active {
        let deg = nb[u].len() as i64;
        let base = (Rational::from_integer(active.len() as i64) * Rational::from_integer(deg * deg)).recip();
        for e1 in &nb[u] {
            let bv = preimages(&e1.pi, l);
            for e2 in &nb[u] {
                let bw = preimages(&e2.pi, l);
                let mut choice = vec![0usize; l];
                loop {
                    budget.charge(1)?;
                    let (mut xs, mut ys) = (vec![0u64; k], vec![0u64; k]);
                    let mut w = base.clone();
                    for (i, &c) in choice.iter().enumerate() {
                        let ((xc, yc), pr) = &block[c];
                        place(&mut xs, xc, &bv[i], r);
                        place(&mut ys, yc, &bw[i], r);
                        w *= pr;
                    }
                    let vars = xs
                        .iter()
                        .map(|&x| e1.v * points + x as usize)
                        .chain(ys.iter().map(|&y| e2.v * points + y as usize))
                        .collect();
                    constraints.push(Constraint::new(vars, vec![0; 2 * k], w));
                    if !next_word(&mut choice, block.len()) {
                        break;
                    }
                }
            }
        }
    }
    CspInstance::new(p.predicate.clone(), p.source.right_size() * points, constraints)
}

fn next_word(word: &mut [usize], radix: usize) -> bool {
    for x in word.iter_mut() {
        *x += 1;
        if *x < radix {
            return true;
        }
        *x = 0;
    }
    false
}

fn draw_column(rng: &mut ChaCha8Rng, law: &[(Tuple, Rational)]) -> u32 {
    let mut x: f64 = rng.gen();
    let support: Vec<&(Tuple, Rational)> = positive(law).collect();
    for (t, p) in &support {
        let p = p.to_f64();
        if x < p {
            return mask(t);
        }
        x -= p;
    }
    mask(&support.last().expect("nonempty law").0)
}

/// `n` seeded draws from 𝒯₂, weight `1/n` each. Not exact.
pub fn sample_t2(p: &T2Params, n: usize, seed: u64) -> Result<CspInstance> {
    let (k, l, r, d) = (p.gadget.k, p.source.left_alphabet(), p.source.right_alphabet(), p.d());
    let (nb, active) = left_neighbourhoods(&p.source)?;
    let points = p.points();
    let eps = p.gadget.eps.to_f64();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draws = Vec::with_capacity(n);
    for _ in 0..n {
        let u = active[rng.gen_range(0..active.len())];
        let e1 = nb[u][rng.gen_range(0..nb[u].len())];
        let e2 = nb[u][rng.gen_range(0..nb[u].len())];
        let (bv, bw) = (preimages(&e1.pi, l), preimages(&e2.pi, l));
        let (mut xs, mut ys) = (vec![0u64; k], vec![0u64; k]);
        for i in 0..l {
            let c1: bool = rng.gen();
            let (lx, ly) = if c1 { (&p.gadget.p1, &p.gadget.p0) } else { (&p.gadget.p0, &p.gadget.p1) };
            let mut xc: Vec<u32> = (0..2 * d).map(|_| draw_column(&mut rng, lx)).collect();
            let mut yc: Vec<u32> = (0..2 * d).map(|_| draw_column(&mut rng, ly)).collect();
            let c2: f64 = rng.gen();
            let range = if c2 < eps { Some(d..2 * d) } else if c2 < 2.0 * eps { Some(0..d) } else { None };
            if let Some(range) = range {
                for c in range {
                    xc[c] = rng.gen_range(0..1u32 << k);
                    yc[c] = rng.gen_range(0..1u32 << k);
                }
            }
            place(&mut xs, &xc, &bv[i], r);
            place(&mut ys, &yc, &bw[i], r);
        }
        let vars = xs
            .iter()
            .map(|&x| e1.v * points + x as usize)
            .chain(ys.iter().map(|&y| e2.v * points + y as usize))
            .collect();
        draws.push((vars, vec![0; 2 * k]));
    }
    sampled_instance(p.predicate.clone(), p.source.right_size() * points, draws)
}

/// Dictators `f_v(x) = x_{ℓ(v)}` and `g_v(x) = x_{R+ℓ(v)}` for a fully
/// satisfying labeling.
pub fn t2_completeness_witness(p: &T2Params, labeling: &Labeling) -> Result<(Assignment, Assignment)> {
    if satisfied_fraction(&p.source, labeling)? != Rational::one() {
        return Err(precondition("labeling does not satisfy every edge"));
    }
    Ok(binary_dictators(labeling, p.source.right_alphabet()))
}

pub(super) fn binary_dictators(labeling: &Labeling, r: usize) -> (Assignment, Assignment) {
    let points = 1usize << (2 * r);
    let dict = |shift: usize| {
        Assignment(
            labeling.right.iter().flat_map(|&j| (0..points).map(move |x| (x >> (j + shift) & 1) as u8)).collect(),
        )
    };
    (dict(0), dict(r))
}

/// Pointwise XOR, i.e. the product `f_S` in the `±1` convention.
pub fn xor_assignments(fs: &[&Assignment]) -> Result<Assignment> {
    let n = fs.first().map_or(0, |a| a.len());
    if fs.iter().any(|a| a.len() != n || a.values().iter().any(|&b| b > 1)) {
        return Err(mismatch("XOR needs binary assignments of equal length"));
    }
    Ok(Assignment((0..n).map(|i| fs.iter().fold(0, |acc, a| acc ^ a.values()[i])).collect()))
}

/// Both sides of the rejection arithmetization for `t` assignments.
#[derive(Clone, Debug)]
pub struct RejectionReport {
    pub t: usize,
    /// `E[Π_i ½(Π_j f_i(x_j) f_i(y_j) + 1)]`.
    pub lhs: Rational,
    /// `2^{-t} + 2^{-t} Σ_{S≠∅} E[Π_j f_S(x_j) f_S(y_j)]`.
    pub rhs: Rational,
    /// `|lhs − rhs|`.
    pub deviation: Rational,
    /// `(S, E[Π_j f_S(x_j) f_S(y_j)])` for every nonempty `S` as a bit mask.
    pub correlations: Vec<(u32, Rational)>,
    /// `−1/(2^t − 1)`.
    pub threshold: Rational,
    /// Weight of constraints no assignment satisfies under the instance predicate.
    pub all_rejected: Rational,
}

impl RejectionReport {
    /// Subsets whose correlation is at most the threshold.
    pub fn below_threshold(&self) -> Vec<u32> {
        self.correlations.iter().filter(|(_, c)| *c <= self.threshold).map(|(s, _)| *s).collect()
    }
}

/// `±1` sign of the whole constraint under `a`: `(−1)^{Σ_j a(var_j) + lit_j}`.
fn sign(a: &Assignment, c: &Constraint) -> i64 {
    let parity = c.vars.iter().zip(&c.literals).fold(0u8, |acc, (&v, &l)| acc ^ a.values()[v] ^ l);
    1 - 2 * parity as i64
}

/// Evaluates both sides of the rejection identity exactly on a Boolean
/// instance, whose weights define the test distribution.
pub fn rejection_identity_check(assignments: &[Assignment], inst: &CspInstance) -> Result<RejectionReport> {
    let t = assignments.len();
    if t == 0 || t > 3 {
        return Err(invalid("t must be 1, 2 or 3"));
    }
    if inst.q() != 2 {
        return Err(mismatch("rejection identity needs a Boolean instance"));
    }
    if assignments.iter().any(|a| a.len() != inst.num_vars() || a.values().iter().any(|&b| b > 1)) {
        return Err(mismatch("assignments must be binary and cover every variable"));
    }
    let total = inst.total_weight();
    if total.is_zero() {
        return Err(precondition("instance has no weight"));
    }
    let half = Rational::new(1, 2);
    let mut lhs = Rational::zero();
    let mut all_rejected = Rational::zero();
    for c in inst.constraints() {
        let term: Rational = assignments
            .iter()
            .map(|a| (Rational::from_integer(sign(a, c)) + Rational::one()) * &half)
            .product();
        lhs += &c.weight * &term;
        let values: Vec<&Assignment> = assignments.iter().collect();
        let rejected = values.iter().all(|a| {
            let idx = crate::csp::constraint_value_index(2, a.values(), c);
            !inst.predicate().contains_index(idx)
        });
        if rejected {
            all_rejected += &c.weight;
        }
    }
    lhs = lhs / &total;
    all_rejected = all_rejected / &total;

    let scale = Rational::new(1, 1 << t);
    let mut rhs = scale.clone();
    let mut correlations = Vec::new();
    for s in 1u32..1 << t {
        let members: Vec<&Assignment> = (0..t).filter(|&i| s >> i & 1 == 1).map(|i| &assignments[i]).collect();
        let corr: Rational = inst
            .constraints()
            .iter()
            .map(|c| &c.weight * &Rational::from_integer(members.iter().map(|a| sign(a, c)).product()))
            .sum::<Rational>()
            / &total;
        rhs += &scale * &corr;
        correlations.push((s, corr));
    }
    let deviation = (&lhs - &rhs).abs();
    let threshold = -Rational::new(1, (1 << t) - 1);
    Ok(RejectionReport { t, lhs, rhs, deviation, correlations, threshold, all_rejected })
}

/// The randomized labeling that draws `α ⊆ [2R]` with probability
/// `(1−γ)^{|α|} f̂_v(α)²` in the `±1` convention and folds labels `j ≥ R`
/// to `j − R`. Left vertices use a random neighbour `w` and project a label
/// of `β` through `π̃_uw`.
pub fn decode_t2(
    f: &[Vec<u8>],
    source: &LabelCoverInstance,
    gamma: &Rational,
    fallback: Fallback,
    seed: u64,
) -> Result<Decoded> {
    check_unit_interval(gamma, "γ", false, Rational::one())?;
    let g = gamma.to_f64();
    decode_fourier(f, source, fallback, seed, |alpha: u64| (1.0 - g).powi(alpha.count_ones() as i32), Projection::Tilde)
}

#[derive(Clone, Copy)]
pub(super) enum Projection {
    /// Left label `π(j mod R)` for a random `j ∈ β`.
    Tilde,
    /// Left label uniform in `π̃(α)`.
    TildeSet,
}

/// Shared body of the Fourier decoders. Right vertices go first, then left.
pub(super) fn decode_fourier(
    f: &[Vec<u8>],
    source: &LabelCoverInstance,
    fallback: Fallback,
    seed: u64,
    attenuation: impl Fn(u64) -> f64,
    projection: Projection,
) -> Result<Decoded> {
    let (l, r) = (source.left_alphabet(), source.right_alphabet());
    if 2 * r > 20 {
        return Err(invalid("R too large for exact Fourier tables"));
    }
    check_tables(f, source.right_size(), 1 << (2 * r))?;
    let weights: Vec<Vec<f64>> = f
        .iter()
        .map(|t| {
            let w = fourier_weights(t, 2 * r)?;
            Ok(w.iter().enumerate().map(|(a, x)| x * attenuation(a as u64)).collect())
        })
        .collect::<Result<_>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut right = Vec::with_capacity(f.len());
    for w in &weights {
        let label = match draw_set(&mut rng, w).filter(|&a| a != 0) {
            Some(alpha) => draw_element(&mut rng, alpha) % r,
            None => match fallback {
                Fallback::Uniform => rng.gen_range(0..r),
                Fallback::Heaviest => heaviest_folded(w, r),
            },
        };
        right.push(label);
    }
    let mut left = Vec::with_capacity(source.left_size());
    for u in 0..source.left_size() {
        let edges: Vec<_> = source.edges_at_left(u).collect();
        if edges.is_empty() {
            left.push(match fallback {
                Fallback::Uniform => rng.gen_range(0..l),
                Fallback::Heaviest => 0,
            });
            continue;
        }
        let e = edges[rng.gen_range(0..edges.len())];
        let w = &weights[e.v];
        let drawn = draw_set(&mut rng, w).filter(|&a| a != 0).map(|alpha| match projection {
            Projection::Tilde => e.pi[draw_element(&mut rng, alpha) % r],
            Projection::TildeSet => {
                let set = crate::boolanalysis::pi_tilde(alpha, &e.pi, l).expect("shape checked");
                draw_element(&mut rng, set)
            }
        });
        left.push(match drawn {
            Some(label) => label,
            None => match fallback {
                Fallback::Uniform => rng.gen_range(0..l),
                Fallback::Heaviest => e.pi[heaviest_folded(w, r)],
            },
        });
    }
    decoded(source, Labeling { left, right })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlated::{correlation_rho, pairwise_product_check};
    use crate::csp::{covered_fraction, CoverSet};
    use crate::labelcover::Edge;
    use crate::rational::q;

    fn single_edge() -> LabelCoverInstance {
        LabelCoverInstance::new(1, 1, 1, 1, true, vec![Edge { u: 0, v: 0, pi: vec![0] }]).unwrap()
    }

    fn params(eps: Rational, source: LabelCoverInstance) -> T2Params {
        T2Params::new(Predicate::lin(4).unwrap(), T2Gadget::parity(2, eps).unwrap(), source).unwrap()
    }

    #[test]
    fn gadget_validation() {
        let even = vec![(vec![0, 0], q(1, 2)), (vec![1, 1], q(1, 2))];
        let odd = vec![(vec![0, 1], q(1, 2)), (vec![1, 0], q(1, 2))];
        assert!(T2Gadget::new(even.clone(), odd.clone(), q(1, 4)).is_ok());
        assert!(T2Gadget::new(odd.clone(), even.clone(), q(1, 4)).is_err());
        assert!(T2Gadget::new(even.clone(), odd.clone(), q(3, 4)).is_err());
        let skew = vec![(vec![0, 0], q(3, 4)), (vec![1, 1], q(1, 4))];
        assert!(T2Gadget::new(skew, odd, q(1, 4)).is_err());
    }

    #[test]
    fn block_distribution_sums_and_marginals() {
        let g = T2Gadget::parity(2, q(1, 4)).unwrap();
        let block = g.block_distribution(1, &mut Budget::default()).unwrap();
        let total: Rational = block.iter().map(|(_, p)| p).sum();
        assert_eq!(total, Rational::one());
        // Every single row of X and of Y is uniform on {0,1}^2.
        for side in 0..2 {
            for r in 0..2 {
                let mut rows: BTreeMap<usize, Rational> = BTreeMap::new();
                for ((x, y), p) in &block {
                    let m = if side == 0 { x } else { y };
                    *rows.entry(row_view(m, 2)[r]).or_insert_with(Rational::zero) += p;
                }
                assert_eq!(rows.len(), 4);
                assert!(rows.values().all(|p| *p == q(1, 4)));
            }
        }
        let space = g.block_space(1, &mut Budget::default()).unwrap();
        assert!(pairwise_product_check(&space));
    }

    #[test]
    fn claim_rho_bound() {
        for eps in [q(1, 8), q(1, 4), q(1, 2)] {
            let g = T2Gadget::parity(2, eps.clone()).unwrap();
            let s = g.split_space(1, &mut Budget::default()).unwrap();
            let rho = correlation_rho(&s);
            assert!(rho <= (1.0 - eps.to_f64()).sqrt() + 1e-9, "ε = {eps}: ρ = {rho}");
        }
    }

    #[test]
    fn completeness_single_edge() {
        for eps in [q(1, 8), q(1, 4), q(1, 2)] {
            let p = params(eps.clone(), single_edge());
            let inst = generate_t2(&p, &mut Budget::default()).unwrap();
            assert_eq!(inst.total_weight(), Rational::one());
            let lab = Labeling { left: vec![0], right: vec![0] };
            let (f, g) = t2_completeness_witness(&p, &lab).unwrap();
            let bound = Rational::one() - &eps;
            assert!(covered_fraction(&CoverSet::single(f.clone()), &inst).unwrap() >= bound);
            assert!(covered_fraction(&CoverSet::single(g.clone()), &inst).unwrap() >= bound);
            let both = CoverSet::new(vec![f.clone(), g.clone()]).unwrap();
            assert_eq!(covered_fraction(&both, &inst).unwrap(), Rational::one());

            let rep = rejection_identity_check(&[f, g], &inst).unwrap();
            assert!(rep.deviation.is_zero());
            assert!(rep.lhs.is_zero());
            assert!(!rep.below_threshold().is_empty());
        }
    }

    #[test]
    fn wrong_labeling_rejected() {
        let g = LabelCoverInstance::new(1, 1, 2, 2, true, vec![Edge { u: 0, v: 0, pi: vec![1, 0] }]).unwrap();
        let p = params(q(1, 4), g);
        assert!(t2_completeness_witness(&p, &Labeling { left: vec![0], right: vec![0] }).is_err());
    }

    #[test]
    fn rejection_identity_single_assignment() {
        let p = params(q(1, 4), single_edge());
        let inst = generate_t2(&p, &mut Budget::default()).unwrap();
        let a = Assignment((0..4).map(|x| ((x * 7 + 3) % 5 % 2) as u8).collect());
        let rep = rejection_identity_check(&[a], &inst).unwrap();
        assert!(rep.deviation.is_zero());
        assert_eq!(rep.lhs, rep.all_rejected);
    }

    #[test]
    fn decode_dictators_and_determinism() {
        let g = LabelCoverInstance::new(
            1,
            2,
            1,
            2,
            false,
            vec![Edge { u: 0, v: 0, pi: vec![0, 0] }, Edge { u: 0, v: 1, pi: vec![0, 0] }],
        )
        .unwrap();
        let lab = Labeling { left: vec![0], right: vec![1, 0] };
        let (f, _) = binary_dictators(&lab, 2);
        let tables = super::super::vertex_tables(&f, 2, 16).unwrap();
        let a = decode_t2(&tables, &g, &q(1, 8), Fallback::Heaviest, 4).unwrap();
        let b = decode_t2(&tables, &g, &q(1, 8), Fallback::Heaviest, 4).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.value, Rational::one());
        let constant = vec![vec![0u8; 16]; 2];
        let c = decode_t2(&constant, &g, &q(1, 8), Fallback::Uniform, 1).unwrap();
        assert_eq!(c.value, Rational::one());
    }

    #[test]
    fn sampling_is_seeded() {
        let p = params(q(1, 4), single_edge());
        let a = sample_t2(&p, 40, 1).unwrap();
        assert_eq!(a.to_text(), sample_t2(&p, 40, 1).unwrap().to_text());
    }

    #[test]
    fn rejection_identity_with_literals() {
        let inst = CspInstance::new(
            Predicate::lin(2).unwrap(),
            3,
            vec![
                Constraint::new(vec![0, 1], vec![0, 1], q(1, 2)),
                Constraint::new(vec![1, 2], vec![1, 1], q(1, 3)),
                Constraint::new(vec![0, 2], vec![1, 0], q(1, 6)),
            ],
        )
        .unwrap();
        for bits in 0u32..64 {
            let a = Assignment((0..3).map(|i| (bits >> i & 1) as u8).collect());
            let b = Assignment((3..6).map(|i| (bits >> i & 1) as u8).collect());
            let rep = rejection_identity_check(&[a, b], &inst).unwrap();
            assert!(rep.deviation.is_zero(), "bits {bits:06b}");
        }
    }
}
