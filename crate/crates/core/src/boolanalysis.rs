//! Exact Fourier and Efron–Stein analysis on finite product spaces.
//!
//! Points are indexed in mixed radix with coordinate 0 least significant, so
//! on `{0,1}^n` bit `i` of the index is `x_i`. Subsets of coordinates (and of
//! blocks) are `u64` masks.

use num::{One, Zero};

use crate::error::{invalid, mismatch, Error, Result};
use crate::predicate::content_lines;
use crate::rational::Rational;

/// A real function on `Ω_0 × … × Ω_{n-1}` with a product measure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TabulatedFunction {
    sizes: Vec<usize>,
    measures: Vec<Vec<Rational>>,
    values: Vec<Rational>,
}

const MAX_POINTS: usize = 1 << 24;

fn uniform_measure(s: usize) -> Vec<Rational> {
    vec![Rational::new(1, s as i64); s]
}

impl TabulatedFunction {
    pub fn new(sizes: Vec<usize>, measures: Vec<Vec<Rational>>, values: Vec<Rational>) -> Result<Self> {
        if sizes.len() > 64 {
            return Err(invalid("at most 64 coordinates"));
        }
        if sizes.len() != measures.len() {
            return Err(mismatch("one measure per coordinate"));
        }
        let total = sizes
            .iter()
            .try_fold(1usize, |acc, &s| acc.checked_mul(s).filter(|&t| t <= MAX_POINTS))
            .ok_or_else(|| invalid("domain too large"))?;
        for (s, m) in sizes.iter().zip(&measures) {
            if *s == 0 || m.len() != *s {
                return Err(mismatch("coordinate measure has the wrong size"));
            }
            if m.iter().any(Rational::is_negative) || m.iter().sum::<Rational>() != Rational::one() {
                return Err(invalid("coordinate measure must be a probability distribution"));
            }
        }
        if values.len() != total {
            return Err(mismatch(format!("{} values for a domain of {total} points", values.len())));
        }
        Ok(TabulatedFunction { sizes, measures, values })
    }

    pub fn uniform(sizes: Vec<usize>, values: Vec<Rational>) -> Result<Self> {
        let measures = sizes.iter().map(|&s| uniform_measure(s.max(1))).collect();
        TabulatedFunction::new(sizes, measures, values)
    }

    /// A function on `{0,1}^n` under the uniform measure.
    pub fn binary(n: usize, values: Vec<Rational>) -> Result<Self> {
        TabulatedFunction::uniform(vec![2; n], values)
    }

    pub fn binary_from_fn(n: usize, f: impl Fn(u64) -> Rational) -> Result<Self> {
        TabulatedFunction::binary(n, (0..1u64 << n).map(f).collect())
    }

    pub fn from_fn(sizes: Vec<usize>, measures: Vec<Vec<Rational>>, f: impl Fn(&[usize]) -> Rational) -> Result<Self> {
        let total: usize = sizes.iter().product();
        let mut point = vec![0usize; sizes.len()];
        let mut values = Vec::with_capacity(total);
        for idx in 0..total {
            decode_point(&sizes, idx, &mut point);
            values.push(f(&point));
        }
        TabulatedFunction::new(sizes, measures, values)
    }

    pub fn constant(sizes: Vec<usize>, measures: Vec<Vec<Rational>>, c: Rational) -> Result<Self> {
        let total = sizes.iter().product();
        TabulatedFunction::new(sizes, measures, vec![c; total])
    }

    /// Same domain, new values.
    pub fn with_values(&self, values: Vec<Rational>) -> Result<Self> {
        if values.len() != self.values.len() {
            return Err(mismatch("value table has the wrong length"));
        }
        Ok(TabulatedFunction { values, ..self.clone() })
    }

    pub fn n(&self) -> usize {
        self.sizes.len()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn measures(&self) -> &[Vec<Rational>] {
        &self.measures
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn point(&self, idx: usize) -> Vec<usize> {
        let mut p = vec![0; self.n()];
        decode_point(&self.sizes, idx, &mut p);
        p
    }

    pub fn index(&self, point: &[usize]) -> usize {
        point.iter().zip(&self.sizes).rev().fold(0, |acc, (&x, &s)| acc * s + x)
    }

    pub fn at(&self, point: &[usize]) -> &Rational {
        &self.values[self.index(point)]
    }

    pub fn same_domain(&self, other: &TabulatedFunction) -> bool {
        self.sizes == other.sizes && self.measures == other.measures
    }

    pub fn is_binary_uniform(&self) -> bool {
        self.sizes.iter().all(|&s| s == 2) && self.measures.iter().all(|m| m[0] == m[1])
    }

    pub fn is_pm1(&self) -> bool {
        self.values.iter().all(|v| v.abs() == Rational::one())
    }

    /// Probability of every point under the product measure.
    pub fn point_weights(&self) -> Vec<Rational> {
        let mut w = vec![Rational::one()];
        for m in &self.measures {
            // Coordinate i is more significant than all earlier ones.
            w = m.iter().flat_map(|p| w.iter().map(move |x| x * p)).collect();
        }
        w
    }

    pub fn expectation(&self) -> Rational {
        self.point_weights().iter().zip(&self.values).map(|(w, v)| w * v).sum()
    }

    /// `E[f g]`.
    pub fn inner(&self, other: &TabulatedFunction) -> Result<Rational> {
        if !self.same_domain(other) {
            return Err(mismatch("functions on different domains"));
        }
        Ok(self
            .point_weights()
            .iter()
            .zip(self.values.iter().zip(&other.values))
            .map(|(w, (a, b))| w * a * b)
            .sum())
    }

    /// `‖f‖₂² = E[f²]`.
    pub fn norm_sq(&self) -> Rational {
        self.inner(self).expect("same domain")
    }

    /// `‖f‖_∞`.
    pub fn sup_norm(&self) -> Rational {
        self.values.iter().map(Rational::abs).max().unwrap_or_else(Rational::zero)
    }

    pub fn variance(&self) -> Rational {
        let m = self.expectation();
        self.norm_sq() - &m * &m
    }

    pub fn map(&self, f: impl Fn(&Rational) -> Rational) -> TabulatedFunction {
        TabulatedFunction { values: self.values.iter().map(f).collect(), ..self.clone() }
    }

    pub fn zip_with(&self, other: &TabulatedFunction, f: impl Fn(&Rational, &Rational) -> Rational) -> Result<Self> {
        if !self.same_domain(other) {
            return Err(mismatch("functions on different domains"));
        }
        Ok(TabulatedFunction {
            values: self.values.iter().zip(&other.values).map(|(a, b)| f(a, b)).collect(),
            ..self.clone()
        })
    }

    /// Replaces coordinate `i` by its average, leaving a function constant in `x_i`.
    fn average_out(&self, i: usize) -> Vec<Rational> {
        let stride: usize = self.sizes[..i].iter().product();
        let s = self.sizes[i];
        let mut out = self.values.clone();
        for base in (0..self.values.len()).filter(|idx| (idx / stride) % s == 0) {
            let avg: Rational = (0..s).map(|a| &self.measures[i][a] * &self.values[base + a * stride]).sum();
            for a in 0..s {
                out[base + a * stride] = avg.clone();
            }
        }
        out
    }

    /// `E[f | x_A]` for the coordinates in `keep`, as a function on the full domain.
    pub fn condition_on(&self, keep: u64) -> TabulatedFunction {
        let mut g = self.clone();
        for i in 0..self.n() {
            if keep >> i & 1 == 0 {
                g.values = g.average_out(i);
            }
        }
        g
    }

    /// Whether `f` ignores every coordinate outside `coords`.
    pub fn depends_only_on(&self, coords: u64) -> bool {
        self.condition_on(coords) == *self
    }

    /// Header `s n` followed by the `s^n` values (coordinate 0 least
    /// significant), uniform measure.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut toks = content_lines(text).flat_map(str::split_whitespace);
        let s: usize = toks
            .next()
            .ok_or_else(|| Error::Parse("empty function table".into()))?
            .parse()
            .map_err(|_| Error::Parse("bad alphabet size".into()))?;
        let n: usize = toks
            .next()
            .ok_or_else(|| Error::Parse("missing arity".into()))?
            .parse()
            .map_err(|_| Error::Parse("bad arity".into()))?;
        let values = toks.map(str::parse).collect::<Result<Vec<Rational>>>()?;
        TabulatedFunction::uniform(vec![s; n], values)
    }
}

fn decode_point(sizes: &[usize], mut idx: usize, out: &mut [usize]) {
    for (o, &s) in out.iter_mut().zip(sizes) {
        *o = idx % s;
        idx /= s;
    }
}

/// Walsh–Hadamard coefficients `f̂(α)` indexed by the mask `α`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FourierTable {
    n: usize,
    coeffs: Vec<Rational>,
}

impl FourierTable {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, alpha: u64) -> &Rational {
        &self.coeffs[alpha as usize]
    }

    /// `Σ_α f̂(α)²`.
    pub fn weight(&self) -> Rational {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    /// `Σ_α f̂(α) χ_α` restricted to the `α` accepted by `keep`.
    pub fn partial_inverse(&self, keep: impl Fn(u64) -> bool) -> TabulatedFunction {
        let mut v: Vec<Rational> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(a, c)| if keep(a as u64) { c.clone() } else { Rational::zero() })
            .collect();
        walsh_hadamard(&mut v);
        TabulatedFunction::binary(self.n, v).expect("binary domain")
    }

    pub fn inverse(&self) -> TabulatedFunction {
        self.partial_inverse(|_| true)
    }
}

/// Unnormalised in-place butterfly: `v[α] ← Σ_x v[x] (−1)^{|α∧x|}`.
fn walsh_hadamard<T>(v: &mut [T])
where
    T: Clone + std::ops::Add<Output = T> + std::ops::Sub<Output = T>,
{
    let mut h = 1;
    while h < v.len() {
        for block in v.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (a.clone(), b.clone());
                *a = x.clone() + y.clone();
                *b = x - y;
            }
        }
        h *= 2;
    }
}

/// Exact Fourier transform over the uniform measure on `{0,1}^n`.
pub fn fourier(f: &TabulatedFunction) -> Result<FourierTable> {
    if !f.is_binary_uniform() {
        return Err(invalid("Fourier transform needs a uniform binary domain"));
    }
    let n = f.n();
    let scale = Rational::new(1, 1i64 << n.min(62)) * Rational::new(1, 1i64 << n.saturating_sub(62));
    if let Some(mut ints) = f
        .values
        .iter()
        .map(|v| if v.is_integer() { i64::try_from(v.numer()).ok().map(i128::from) } else { None })
        .collect::<Option<Vec<i128>>>()
        .filter(|_| n <= 60)
    {
        walsh_hadamard(&mut ints);
        let coeffs = ints
            .into_iter()
            .map(|c| Rational::from_big(num::BigInt::from(c).into()) * &scale)
            .collect();
        return Ok(FourierTable { n, coeffs });
    }
    let mut v = f.values.clone();
    walsh_hadamard(&mut v);
    Ok(FourierTable { n, coeffs: v.into_iter().map(|c| c * &scale).collect() })
}

/// `χ_α` on `{0,1}^n` as a ±1 table.
pub fn character(n: usize, alpha: u64) -> TabulatedFunction {
    TabulatedFunction::binary_from_fn(n, |x| {
        if (x & alpha).count_ones() % 2 == 0 {
            Rational::one()
        } else {
            -Rational::one()
        }
    })
    .expect("binary domain")
}

/// `T_{1−γ} f = Σ_α (1−γ)^{|α|} f̂(α) χ_α`.
pub fn noise(f: &TabulatedFunction, gamma: &Rational) -> Result<TabulatedFunction> {
    if gamma.is_negative() || *gamma > Rational::one() {
        return Err(invalid("gamma must lie in [0, 1]"));
    }
    let ft = fourier(f)?;
    let rho = Rational::one() - gamma;
    let powers: Vec<Rational> = (0..=ft.n as u32).map(|k| rho.pow(k)).collect();
    let coeffs = ft
        .coeffs
        .iter()
        .enumerate()
        .map(|(a, c)| c * &powers[(a as u64).count_ones() as usize])
        .collect();
    Ok(FourierTable { n: ft.n, coeffs }.inverse())
}

/// A partition of the coordinates into blocks, as coordinate masks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Blocks(Vec<u64>);

impl Blocks {
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        if blocks.len() > 24 {
            return Err(invalid("at most 24 blocks"));
        }
        let mut seen = 0u64;
        let mut masks = Vec::with_capacity(blocks.len());
        for b in blocks {
            let mut m = 0u64;
            for i in b {
                if i >= n || (seen | m) >> i & 1 == 1 {
                    return Err(invalid("blocks must partition the coordinates"));
                }
                m |= 1 << i;
            }
            seen |= m;
            masks.push(m);
        }
        if seen != if n == 64 { u64::MAX } else { (1u64 << n) - 1 } {
            return Err(invalid("blocks must cover every coordinate"));
        }
        Ok(Blocks(masks))
    }

    /// One block per coordinate.
    pub fn singletons(n: usize) -> Self {
        Blocks((0..n).map(|i| 1u64 << i).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn masks(&self) -> &[u64] {
        &self.0
    }

    /// Coordinates covered by the blocks in `beta`.
    pub fn coords(&self, beta: u64) -> u64 {
        self.0.iter().enumerate().filter(|(i, _)| beta >> i & 1 == 1).fold(0, |acc, (_, m)| acc | m)
    }

    /// Blocks touched by the coordinates in `alpha`.
    pub fn touched(&self, alpha: u64) -> u64 {
        self.0.iter().enumerate().filter(|(_, &m)| m & alpha != 0).fold(0, |acc, (i, _)| acc | 1 << i)
    }
}

/// Components `f_β`, indexed by block masks `β`.
#[derive(Clone, Debug)]
pub struct EfronSteinDecomposition {
    blocks: Blocks,
    components: Vec<TabulatedFunction>,
}

impl EfronSteinDecomposition {
    pub fn blocks(&self) -> &Blocks {
        &self.blocks
    }

    pub fn component(&self, beta: u64) -> &TabulatedFunction {
        &self.components[beta as usize]
    }

    pub fn components(&self) -> &[TabulatedFunction] {
        &self.components
    }

    /// `‖f_β‖₂²` for every `β`.
    pub fn norms_sq(&self) -> Vec<Rational> {
        let w = self.components[0].point_weights();
        self.components
            .iter()
            .map(|c| w.iter().zip(&c.values).map(|(p, v)| p * v * v).sum())
            .collect()
    }

    /// `Σ_{β ∋ i} ‖f_β‖²`.
    pub fn influence(&self, block: usize) -> Rational {
        self.degree_d_influence(block, usize::MAX)
    }

    /// `Σ_{β ∋ i, |β| ≤ d} ‖f_β‖²`.
    pub fn degree_d_influence(&self, block: usize, d: usize) -> Rational {
        self.norms_sq()
            .into_iter()
            .enumerate()
            .filter(|(b, _)| b >> block & 1 == 1 && (b.count_ones() as usize) <= d)
            .map(|(_, n)| n)
            .sum()
    }

    /// Pointwise `Σ_β f_β`.
    pub fn sum(&self) -> TabulatedFunction {
        let first = &self.components[0];
        let values = (0..first.len()).map(|x| self.components.iter().map(|c| &c.values[x]).sum()).collect();
        first.with_values(values).expect("same domain")
    }
}

/// Components by Möbius inversion of the conditional expectations
/// `E[f | x_γ]` over block subsets `γ`.
pub fn efron_stein(f: &TabulatedFunction, blocks: &Blocks) -> Result<EfronSteinDecomposition> {
    if blocks.coords((1u64 << blocks.len()) - 1) != f.condition_mask() {
        return Err(mismatch("blocks do not partition the function's coordinates"));
    }
    let b = blocks.len();
    let mut comps: Vec<TabulatedFunction> = (0..1u64 << b).map(|g| f.condition_on(blocks.coords(g))).collect();
    for i in 0..b {
        for g in 0..1usize << b {
            if g >> i & 1 == 1 {
                let lower = comps[g ^ (1 << i)].values.clone();
                for (x, y) in comps[g].values.iter_mut().zip(lower) {
                    *x -= y;
                }
            }
        }
    }
    Ok(EfronSteinDecomposition { blocks: blocks.clone(), components: comps })
}

impl TabulatedFunction {
    fn condition_mask(&self) -> u64 {
        if self.n() == 64 {
            u64::MAX
        } else {
            (1u64 << self.n()) - 1
        }
    }
}

/// `Inf_i[f]` with every coordinate its own block.
pub fn influence(f: &TabulatedFunction, i: usize) -> Result<Rational> {
    degree_d_influence(f, i, usize::MAX)
}

/// `Inf_i^{≤d}[f]` with every coordinate its own block. On a uniform
/// binary domain this is `Σ_{α ∋ i, |α| ≤ d} f̂(α)²`.
pub fn degree_d_influence(f: &TabulatedFunction, i: usize, d: usize) -> Result<Rational> {
    if i >= f.n() {
        return Err(invalid(format!("coordinate {i} out of range")));
    }
    if f.is_binary_uniform() {
        let ft = fourier(f)?;
        return Ok(ft
            .coeffs
            .iter()
            .enumerate()
            .filter(|&(a, _)| a >> i & 1 == 1 && a.count_ones() as usize <= d)
            .map(|(_, c)| c * c)
            .sum());
    }
    Ok(efron_stein(f, &Blocks::singletons(f.n()))?.degree_d_influence(i, d))
}

/// `E_{x_rest} Var_{x_coords}[f]` computed directly from the definition.
pub fn influence_by_variance(f: &TabulatedFunction, coords: u64) -> Rational {
    let rest = f.condition_mask() & !coords;
    let mean_given_rest = f.condition_on(rest);
    let diff = f.zip_with(&mean_given_rest, |a, b| a - b).expect("same domain");
    diff.norm_sq()
}

fn check_projection(alpha: u64, pi: &[usize], l: usize) -> Result<()> {
    let r = pi.len();
    if 2 * r > 64 || 2 * l > 64 {
        return Err(invalid("alphabets too large for 64-bit index sets"));
    }
    if 2 * r < 64 && alpha >> (2 * r) != 0 {
        return Err(invalid("alpha has indices outside [2R]"));
    }
    if pi.iter().any(|&x| x >= l) {
        return Err(invalid("projection value outside [L]"));
    }
    Ok(())
}

/// `π̃(α) = { π(j) : j ∈ α or j+R ∈ α }`, as a mask over `[L]`.
pub fn pi_tilde(alpha: u64, pi: &[usize], l: usize) -> Result<u64> {
    check_projection(alpha, pi, l)?;
    let r = pi.len();
    Ok(pi
        .iter()
        .enumerate()
        .filter(|&(j, _)| alpha >> j & 1 == 1 || alpha >> (j + r) & 1 == 1)
        .fold(0, |acc, (_, &i)| acc | 1 << i))
}

/// `π^⊕(α)` over `[2L]`: `i < L` when an odd number of `j ∈ α ∩ [R]` map to
/// `i`, and `L + i` likewise for the second half.
pub fn pi_oplus(alpha: u64, pi: &[usize], l: usize) -> Result<u64> {
    check_projection(alpha, pi, l)?;
    let r = pi.len();
    let mut out = 0u64;
    for (j, &i) in pi.iter().enumerate() {
        if alpha >> j & 1 == 1 {
            out ^= 1 << i;
        }
        if alpha >> (j + r) & 1 == 1 {
            out ^= 1 << (i + l);
        }
    }
    Ok(out)
}

/// `(y∘π)(j) = y_{π(j)}` for `j < R` and `y_{π(j−R)+L}` otherwise.
pub fn compose_projection<T: Copy>(y: &[T], pi: &[usize]) -> Result<Vec<T>> {
    if y.len() % 2 != 0 {
        return Err(mismatch("string length must be 2L"));
    }
    let l = y.len() / 2;
    if pi.iter().any(|&x| x >= l) {
        return Err(invalid("projection value outside [L]"));
    }
    Ok(pi.iter().map(|&i| y[i]).chain(pi.iter().map(|&i| y[i + l])).collect())
}
