use num::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{decoded, left_neighbourhoods, sampled_instance, Decoded, Fallback};
use crate::boolanalysis::{efron_stein, Blocks, TabulatedFunction};
use crate::csp::{Assignment, Constraint, CoverSet, CspInstance};
use crate::error::{invalid, mismatch, precondition, Budget, Result};
use crate::labelcover::{labelings_cover, LabelCoverInstance, Labeling};
use crate::predicate::{add_constant, all_tuples, Predicate, Tuple};
use crate::rational::Rational;

/// Test 𝒯₁ over a Unique-Games source with `NAE ⊇ P ⊇ {a + b̄}`.
#[derive(Clone, Debug)]
pub struct T1Params {
    pub predicate: Predicate,
    pub a: Tuple,
    pub source: LabelCoverInstance,
}

impl T1Params {
    pub fn new(predicate: Predicate, a: Tuple, source: LabelCoverInstance) -> Result<Self> {
        let (q, k) = (predicate.q(), predicate.k());
        if !source.is_unique() {
            return Err(precondition("𝒯₁ needs a Unique-Games source"));
        }
        if a.len() != k || a.iter().any(|&x| x >= q) {
            return Err(invalid("a must be a tuple of the predicate's shape"));
        }
        if a.iter().all(|&x| x == a[0]) {
            return Err(precondition("a must be a NAE tuple"));
        }
        if (0..q).any(|b| !predicate.contains(&add_constant(q, &a, b))) {
            return Err(precondition("P must contain every translate a + b̄"));
        }
        if !predicate.is_subset_of(&Predicate::nae(q, k)?) {
            return Err(precondition("P must be contained in NAE"));
        }
        Ok(T1Params { predicate, a, source })
    }

    fn shape(&self) -> (u8, usize, usize) {
        (self.predicate.q(), self.predicate.k(), self.source.left_alphabet())
    }

    fn points(&self) -> usize {
        let (q, _, l) = self.shape();
        (q as usize).pow(2 * l as u32)
    }
}

/// The column-pair set `S = {(y, y') : y ∈ A ∨ y' ∈ A}` with
/// `A = {a + b̄ : b ∈ [q]}`, in lexicographic order.
pub fn t1_column_set(q: u8, a: &[u8]) -> Result<Vec<(Tuple, Tuple)>> {
    if q < 2 || a.is_empty() || a.iter().any(|&x| x >= q) {
        return Err(invalid("a must be a nonempty tuple over [q]"));
    }
    let k = a.len();
    let translates: Vec<Tuple> = (0..q).map(|b| add_constant(q, a, b)).collect();
    let mut s = Vec::new();
    for y in all_tuples(q, k) {
        for y2 in all_tuples(q, k) {
            if translates.contains(&y) || translates.contains(&y2) {
                s.push((y.clone(), y2));
            }
        }
    }
    Ok(s)
}

/// `S` viewed inside `([q]²)^k`: coordinate `i` is `y_i·q + y'_i`.
pub fn t1_paired_support(q: u8, a: &[u8]) -> Result<Vec<Vec<usize>>> {
    Ok(t1_column_set(q, a)?
        .into_iter()
        .map(|(y, y2)| y.iter().zip(&y2).map(|(&s, &t)| s as usize * q as usize + t as usize).collect())
        .collect())
}

fn point_index(q: u8, x: &[u8]) -> usize {
    x.iter().rev().fold(0, |acc, &v| acc * q as usize + v as usize)
}

fn point_digits(q: u8, n: usize, mut idx: usize) -> Vec<u8> {
    (0..n)
        .map(|_| {
            let d = (idx % q as usize) as u8;
            idx /= q as usize;
            d
        })
        .collect()
}

/// `x∘π` for a permutation `π` on `[L]`, acting on both halves.
fn compose_digits(x: &[u8], pi: &[usize]) -> Vec<u8> {
    let l = pi.len();
    let mut z = vec![0u8; 2 * l];
    for (i, &p) in pi.iter().enumerate() {
        z[i] = x[p];
        z[l + i] = x[l + p];
    }
    z
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

/// Rows of the `k × 2L` matrix whose column pairs `(X^i, X^{L+i})` are `cols`.
fn rows(cols: &[&(Tuple, Tuple)], k: usize) -> Vec<Vec<u8>> {
    let l = cols.len();
    (0..k)
        .map(|j| {
            let mut x = vec![0u8; 2 * l];
            for (i, (y, y2)) in cols.iter().enumerate() {
                x[i] = y[j];
                x[l + i] = y2[j];
            }
            x
        })
        .collect()
}

/// The exact 𝒯₁ instance over variables `V × [q]^{2L}`.
pub fn generate_t1(p: &T1Params, budget: &mut Budget) -> Result<CspInstance> {
    let (q, k, l) = p.shape();
    let s = t1_column_set(q, &p.a)?;
    let (nb, active) = left_neighbourhoods(&p.source)?;
    let points = p.points();
    let matrices = (s.len() as u128).saturating_pow(l as u32);
    let need: u128 = active.iter().map(|&u| (nb[u].len() as u128).saturating_pow(k as u32)).sum::<u128>();
    budget.require(need.saturating_mul(matrices))?;
    budget.require_support(need.saturating_mul(matrices))?;

    let mut constraints = Vec::new();
    for &u in &active {
        let deg = nb[u].len();
        let denom = Rational::from_integer(active.len() as i64)
            * Rational::from_integer(deg as i64).pow(k as u32)
            * Rational::from_integer(s.len() as i64).pow(l as u32);
        let weight = denom.recip();
        let mut cols = vec![0usize; l];
        loop {
            let chosen: Vec<&(Tuple, Tuple)> = cols.iter().map(|&c| &s[c]).collect();
            let xs = rows(&chosen, k);
            let mut picks = vec![0usize; k];
            loop {
                budget.charge(1)?;
                let vars = picks
                    .iter()
                    .zip(&xs)
                    .map(|(&e, x)| {
                        let edge = nb[u][e];
                        edge.v * points + point_index(q, &compose_digits(x, &edge.pi))
                    })
                    .collect();
                constraints.push(Constraint::new(vars, vec![0; k], weight.clone()));
                if !next_word(&mut picks, deg) {
                    break;
                }
            }
            if !next_word(&mut cols, s.len()) {
                break;
            }
        }
    }
    CspInstance::new(p.predicate.clone(), p.source.right_size() * points, constraints)
}

/// `n` seeded draws from 𝒯₁, weight `1/n` each. Not exact.
pub fn sample_t1(p: &T1Params, n: usize, seed: u64) -> Result<CspInstance> {
    let (q, k, l) = p.shape();
    let s = t1_column_set(q, &p.a)?;
    let (nb, active) = left_neighbourhoods(&p.source)?;
    let points = p.points();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draws = (0..n)
        .map(|_| {
            let u = active[rng.gen_range(0..active.len())];
            let chosen: Vec<&(Tuple, Tuple)> = (0..l).map(|_| &s[rng.gen_range(0..s.len())]).collect();
            let xs = rows(&chosen, k);
            let vars = xs
                .iter()
                .map(|x| {
                    let edge = nb[u][rng.gen_range(0..nb[u].len())];
                    edge.v * points + point_index(q, &compose_digits(x, &edge.pi))
                })
                .collect();
            (vars, vec![0; k])
        })
        .collect();
    sampled_instance(p.predicate.clone(), p.source.right_size() * points, draws)
}

/// The `2c` long codes `f^i_v(x) = x_{ℓ_i(v)}`, `g^i_v(x) = x_{L+ℓ_i(v)}`
/// built from a `c`-covering of the source.
pub fn t1_completeness_witness(p: &T1Params, labelings: &[Labeling]) -> Result<CoverSet> {
    if labelings.is_empty() || !labelings_cover(&p.source, labelings)? {
        return Err(precondition("labelings do not cover the source"));
    }
    let (q, _, l) = p.shape();
    let points = p.points();
    let dictator = |lab: &Labeling, shift: usize| {
        let values = lab
            .right
            .iter()
            .flat_map(|&label| (0..points).map(move |x| point_digits(q, 2 * l, x)[label + shift]))
            .collect();
        Assignment(values)
    };
    let assignments = labelings.iter().flat_map(|lab| [dictator(lab, 0), dictator(lab, l)]).collect();
    CoverSet::new(assignments)
}

/// Per-vertex indicators `1[f_v(x) = value]` on the uniform cube `[q]^{2L}`.
pub fn t1_vertex_functions(a: &Assignment, p: &T1Params, value: u8) -> Result<Vec<TabulatedFunction>> {
    let (q, _, l) = p.shape();
    let points = p.points();
    let tables = super::vertex_tables(a, p.source.right_size(), points)?;
    tables
        .into_iter()
        .map(|t| {
            let vals = t.iter().map(|&b| if b == value { Rational::one() } else { Rational::zero() }).collect();
            TabulatedFunction::uniform(vec![q as usize; 2 * l], vals)
        })
        .collect()
}

/// Output of [`decode_t1`].
#[derive(Clone, Debug)]
pub struct T1Decoded {
    pub decoded: Decoded,
    /// `Lab(u)` for each left vertex.
    pub lab_left: Vec<Vec<usize>>,
    /// `Lab(w)` for each right vertex.
    pub lab_right: Vec<Vec<usize>>,
    /// `2d/τ`.
    pub size_bound: Rational,
}

impl T1Decoded {
    pub fn sizes_within_bound(&self) -> bool {
        self.lab_left
            .iter()
            .chain(&self.lab_right)
            .all(|lab| Rational::from_integer(lab.len() as i64) <= self.size_bound)
    }
}

fn block_influences(f: &TabulatedFunction, l: usize, d: usize) -> Result<Vec<Rational>> {
    let blocks = Blocks::new(2 * l, (0..l).map(|i| vec![i, l + i]).collect())?;
    let es = efron_stein(f, &blocks)?;
    Ok((0..l).map(|i| es.degree_d_influence(i, d)).collect())
}

fn pick(rng: &mut ChaCha8Rng, lab: &[usize], infl: &[Rational], fallback: Fallback) -> usize {
    if !lab.is_empty() {
        return lab[rng.gen_range(0..lab.len())];
    }
    match fallback {
        Fallback::Uniform => rng.gen_range(0..infl.len()),
        Fallback::Heaviest => {
            let best = infl.iter().max().expect("L ≥ 1");
            infl.iter().position(|x| x == best).expect("present")
        }
    }
}

/// Labels drawn uniformly from `Lab(w) = {i : Inf_i^{≤d}(f_w) ≥ τ/2}` and
/// `Lab(u) = {i : Inf_i^{≤d}(f_u) ≥ τ}`, where coordinates `i` and `L+i`
/// form block `i` and `f_u(x) = E_w f_w(x∘π_uw)`.
pub fn decode_t1(
    f: &[TabulatedFunction],
    source: &LabelCoverInstance,
    tau: &Rational,
    d: usize,
    fallback: Fallback,
    seed: u64,
) -> Result<T1Decoded> {
    let l = source.left_alphabet();
    if source.right_alphabet() != l {
        return Err(precondition("𝒯₁ decoding needs L = R"));
    }
    if !tau.is_positive() || d == 0 {
        return Err(invalid("τ and d must be positive"));
    }
    if f.len() != source.right_size() {
        return Err(mismatch("one function per right vertex"));
    }
    let sizes = f.first().map(|t| t.sizes().to_vec()).unwrap_or_default();
    if f.iter().any(|t| t.n() != 2 * l || t.sizes() != sizes.as_slice() || t.measures() != f[0].measures()) {
        return Err(mismatch("functions must share the domain [q]^{2L}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let half = tau / &Rational::from_integer(2);

    let mut lab_right = Vec::with_capacity(f.len());
    let mut right = Vec::with_capacity(f.len());
    for fw in f {
        let infl = block_influences(fw, l, d)?;
        let lab: Vec<usize> = (0..l).filter(|&i| infl[i] >= half).collect();
        right.push(pick(&mut rng, &lab, &infl, fallback));
        lab_right.push(lab);
    }

    let mut lab_left = Vec::with_capacity(source.left_size());
    let mut left = Vec::with_capacity(source.left_size());
    for u in 0..source.left_size() {
        let edges: Vec<_> = source.edges_at_left(u).collect();
        let infl = if edges.is_empty() || f.is_empty() {
            vec![Rational::zero(); l]
        } else {
            let deg = Rational::from_integer(edges.len() as i64);
            let fu = TabulatedFunction::from_fn(f[0].sizes().to_vec(), f[0].measures().to_vec(), |x| {
                let x: Vec<u8> = x.iter().map(|&v| v as u8).collect();
                let total: Rational = edges
                    .iter()
                    .map(|e| {
                        let z: Vec<usize> = compose_digits(&x, &e.pi).into_iter().map(usize::from).collect();
                        f[e.v].at(&z).clone()
                    })
                    .sum();
                total / &deg
            })?;
            block_influences(&fu, l, d)?
        };
        let lab: Vec<usize> = (0..l).filter(|&i| infl[i] >= *tau).collect();
        left.push(pick(&mut rng, &lab, &infl, fallback));
        lab_left.push(lab);
    }

    let size_bound = Rational::from_integer(2 * d as i64) / tau;
    Ok(T1Decoded { decoded: decoded(source, Labeling { left, right })?, lab_left, lab_right, size_bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlated::is_connected;
    use crate::csp::{covered_fraction, is_cover};
    use crate::labelcover::{synthesize, Edge, SynthKind, SynthParams};

    fn nae22_params(source: LabelCoverInstance) -> T1Params {
        T1Params::new(Predicate::nae(2, 2).unwrap(), vec![0, 1], source).unwrap()
    }

    fn one_edge(l: usize) -> LabelCoverInstance {
        let pi = (0..l).rev().collect();
        LabelCoverInstance::new(1, 1, l, l, true, vec![Edge { u: 0, v: 0, pi }]).unwrap()
    }

    #[test]
    fn column_set_size() {
        assert_eq!(t1_column_set(2, &[0, 1]).unwrap().len(), 12);
        assert!(is_connected(&t1_paired_support(2, &[0, 1]).unwrap()).unwrap());
    }

    #[test]
    fn params_validation() {
        let g = one_edge(1);
        assert!(T1Params::new(Predicate::nae(2, 2).unwrap(), vec![0, 0], g.clone()).is_err());
        assert!(T1Params::new(Predicate::full(2, 2).unwrap(), vec![0, 1], g.clone()).is_err());
        let only = Predicate::new(2, 2, vec![vec![0, 1]]).unwrap();
        assert!(T1Params::new(only, vec![0, 1], g).is_err());
        let lc = LabelCoverInstance::new(1, 1, 1, 2, false, vec![Edge { u: 0, v: 0, pi: vec![0, 0] }]).unwrap();
        assert!(T1Params::new(Predicate::nae(2, 2).unwrap(), vec![0, 1], lc).is_err());
    }

    #[test]
    fn generated_weights_and_columns() {
        let p = nae22_params(one_edge(2));
        let inst = generate_t1(&p, &mut Budget::default()).unwrap();
        assert_eq!(inst.total_weight(), Rational::one());
        assert_eq!(inst.num_vars(), 16);
        // With one edge and π the swap on [2], each constraint reads two
        // rows of X∘π; recover the column pairs through π⁻¹ = π.
        let s = t1_column_set(2, &[0, 1]).unwrap();
        for c in inst.constraints() {
            let zs: Vec<Vec<u8>> = c.vars.iter().map(|&v| point_digits(2, 4, v % 16)).collect();
            let xs: Vec<Vec<u8>> = zs.iter().map(|z| compose_digits(z, &[1, 0])).collect();
            for i in 0..2 {
                let col = (vec![xs[0][i], xs[1][i]], vec![xs[0][2 + i], xs[1][2 + i]]);
                assert!(s.contains(&col));
            }
        }
    }

    #[test]
    fn completeness_single_edge() {
        let g = one_edge(1);
        let p = nae22_params(g);
        let inst = generate_t1(&p, &mut Budget::default()).unwrap();
        let lab = Labeling { left: vec![0], right: vec![0] };
        let cs = t1_completeness_witness(&p, &[lab]).unwrap();
        assert_eq!(cs.len(), 2);
        assert!(is_cover(&cs, &inst).unwrap());
        // The dictator alone misses the constraints whose first column is constant.
        let alone = CoverSet::single(cs.assignments()[0].clone());
        assert!(covered_fraction(&alone, &inst).unwrap() < Rational::one());
        let bad = Labeling { left: vec![0], right: vec![0] };
        let g2 = one_edge(2);
        let p2 = nae22_params(g2);
        assert!(t1_completeness_witness(&p2, &[bad]).is_err());
    }

    #[test]
    fn completeness_two_cover() {
        let params = SynthParams { left: 4, right: 4, labels: 2, d: 1, left_degree: 2 };
        let syn = synthesize(SynthKind::UniqueTwoCover, params, 5).unwrap();
        let p = nae22_params(syn.instance);
        let inst = generate_t1(&p, &mut Budget::default()).unwrap();
        let cs = t1_completeness_witness(&p, &syn.planted).unwrap();
        assert_eq!(cs.len(), 4);
        assert_eq!(covered_fraction(&cs, &inst).unwrap(), Rational::one());
    }

    #[test]
    fn budget_refusal_and_sampling() {
        let p = nae22_params(one_edge(2));
        assert!(generate_t1(&p, &mut Budget::new(10)).is_err());
        let a = sample_t1(&p, 50, 9).unwrap();
        let b = sample_t1(&p, 50, 9).unwrap();
        assert_eq!(a.to_text(), b.to_text());
        assert_eq!(a.total_weight(), Rational::one());
    }

    #[test]
    fn decode_dictators() {
        let params = SynthParams { left: 3, right: 3, labels: 2, d: 1, left_degree: 2 };
        let syn = synthesize(SynthKind::UniqueConsistent, params, 2).unwrap();
        let p = nae22_params(syn.instance.clone());
        let cs = t1_completeness_witness(&p, &syn.planted[..1]).unwrap();
        let f = t1_vertex_functions(&cs.assignments()[0], &p, 1).unwrap();
        let tau = Rational::new(1, 4);
        let out = decode_t1(&f, &syn.instance, &tau, 1, Fallback::Uniform, 0).unwrap();
        assert_eq!(out.decoded.value, Rational::one());
        assert!(out.lab_right.iter().all(|lab| lab.len() == 1));
        assert!(out.sizes_within_bound());

        let constant: Vec<TabulatedFunction> =
            (0..3).map(|_| TabulatedFunction::uniform(vec![2; 4], vec![Rational::one(); 16]).unwrap()).collect();
        let out = decode_t1(&constant, &syn.instance, &tau, 1, Fallback::Uniform, 0).unwrap();
        assert!(out.lab_left.iter().chain(&out.lab_right).all(Vec::is_empty));
    }
}
