use std::collections::BTreeMap;
use std::str::FromStr;

use num::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::t2::{binary_dictators, decode_fourier, Projection};
use super::{check_unit_interval, compose_bits, left_neighbourhoods, sampled_instance, Decoded, Fallback};
use crate::csp::{Assignment, Constraint, CspInstance};
use crate::error::{invalid, precondition, Budget, Error, Result};
use crate::labelcover::{satisfied_fraction, Edge, LabelCoverInstance, Labeling};
use crate::predicate::Predicate;
use crate::rational::Rational;

/// How the trailing `+1` of the acceptance equation is realised.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PlusOne {
    /// Literal vector `(0,0,0,1)`: the fourth value is flipped.
    #[default]
    Literal,
    /// The fourth query string is complemented, `f_w(x' + … + 1̄)`.
    Complement,
}

impl FromStr for PlusOne {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "literal" => Ok(PlusOne::Literal),
            "complement" => Ok(PlusOne::Complement),
            _ => Err(Error::Parse(format!("unknown +1 encoding `{s}` (literal | complement)"))),
        }
    }
}

/// Test 𝒯₃ over a Label-Cover source, producing a 4-LIN instance.
#[derive(Clone, Debug)]
pub struct T3Params {
    pub eps: Rational,
    pub source: LabelCoverInstance,
    pub plus_one: PlusOne,
}

impl T3Params {
    pub fn new(eps: Rational, source: LabelCoverInstance, plus_one: PlusOne) -> Result<Self> {
        check_unit_interval(&eps, "ε", true, Rational::new(1, 2))?;
        if 2 * source.right_alphabet() > 20 || 2 * source.left_alphabet() > 20 {
            return Err(invalid("alphabets too large for 𝒯₃ tables"));
        }
        Ok(T3Params { eps, source, plus_one })
    }

    fn points(&self) -> usize {
        1usize << (2 * self.source.right_alphabet())
    }

    fn literals(&self) -> Vec<u8> {
        match self.plus_one {
            PlusOne::Literal => vec![0, 0, 0, 1],
            PlusOne::Complement => vec![0; 4],
        }
    }

    fn complement(&self) -> u64 {
        match self.plus_one {
            PlusOne::Literal => 0,
            PlusOne::Complement => (1u64 << (2 * self.source.right_alphabet())) - 1,
        }
    }
}

/// Law of `(η_i, η_{L+i}, η'_i, η'_{L+i})` for one `i ∈ [L]`.
pub fn t3_eta_distribution(eps: &Rational) -> Result<Vec<([u8; 4], Rational)>> {
    check_unit_interval(eps, "ε", true, Rational::new(1, 2))?;
    let quiet = Rational::one() - eps * &Rational::from_integer(2);
    Ok(vec![([0, 0, 0, 0], quiet), ([1, 0, 1, 0], eps.clone()), ([0, 1, 0, 1], eps.clone())])
}

/// `η` and `η'` over `[2L]` for a choice of per-coordinate cases.
fn eta_masks(cases: &[usize], table: &[([u8; 4], Rational)], l: usize) -> (u64, u64) {
    cases.iter().enumerate().fold((0, 0), |(eta, eta2), (i, &c)| {
        let t = table[c].0;
        let e = (t[0] as u64) << i | (t[1] as u64) << (l + i);
        let e2 = (t[2] as u64) << i | (t[3] as u64) << (l + i);
        (eta | e, eta2 | e2)
    })
}

/// Subsets of `mask`, the empty set first.
fn submasks(mask: u64) -> impl Iterator<Item = u64> {
    let mut next = Some(0u64);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == mask { None } else { Some((cur | !mask).wrapping_add(1) & mask) };
        Some(cur)
    })
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

/// Exact law of the two shifts `(y∘π_uv + η∘π_uv·z, y∘π_uw + η'∘π_uw·z' [+ 1̄])`.
fn shift_law(p: &T3Params, e1: &Edge, e2: &Edge, budget: &mut Budget) -> Result<BTreeMap<(u64, u64), Rational>> {
    let l = p.source.left_alphabet();
    let table = t3_eta_distribution(&p.eps)?;
    let y_weight = Rational::from_integer(2).pow(2 * l as u32).recip();
    let flip = p.complement();
    let mut law = BTreeMap::new();
    let mut cases = vec![0usize; l];
    loop {
        let pc: Rational = cases.iter().map(|&c| &table[c].1).product();
        if pc.is_positive() {
            let (eta, eta2) = eta_masks(&cases, &table, l);
            let (m1, m2) = (compose_bits(eta, &e1.pi, l), compose_bits(eta2, &e2.pi, l));
            let z_weight = Rational::from_integer(2).pow(m1.count_ones() + m2.count_ones()).recip();
            let w = &pc * &y_weight * &z_weight;
            for y in 0..1u64 << (2 * l) {
                let (a, b) = (compose_bits(y, &e1.pi, l), compose_bits(y, &e2.pi, l));
                for z in submasks(m1) {
                    for z2 in submasks(m2) {
                        budget.charge(1)?;
                        *law.entry((a ^ z, b ^ z2 ^ flip)).or_insert_with(Rational::zero) += &w;
                    }
                }
            }
        }
        if !next_word(&mut cases, table.len()) {
            break;
        }
    }
    Ok(law)
}

/// The exact 𝒯₃ instance over variables `V × {0,1}^{2R}`.
pub fn generate_t3(p: &T3Params, budget: &mut Budget) -> Result<CspInstance> {
    let (l, r) = (p.source.left_alphabet(), p.source.right_alphabet());
    let (nb, active) = left_neighbourhoods(&p.source)?;
    let points = p.points();
    let pairs: u128 = active.iter().map(|&u| (nb[u].len() as u128).pow(2)).sum();
    let per_pair = (1u128 << (2 * l)) * 3u128.pow(l as u32) * (1u128 << (4 * r)) + (1u128 << (8 * r));
    budget.require(pairs.saturating_mul(per_pair))?;
    budget.require_support(pairs.saturating_mul(per_pair))?;
    let literals = p.literals();
    let xs_weight = Rational::from_integer(points as i64).pow(2).recip();

    let mut constraints = Vec::new();
    for &u in &active {
        let deg = nb[u].len() as i64;
        let base = (Rational::from_integer(active.len() as i64) * Rational::from_integer(deg * deg)).recip();
        for e1 in &nb[u] {
            for e2 in &nb[u] {
                for ((s1, s2), pr) in shift_law(p, e1, e2, budget)? {
                    let w = &base * &pr * &xs_weight;
                    for x in 0..points {
                        for x2 in 0..points {
                            budget.charge(1)?;
                            let vars = vec![
                                e1.v * points + x,
                                e1.v * points + (x ^ s1 as usize),
                                e2.v * points + x2,
                                e2.v * points + (x2 ^ s2 as usize),
                            ];
                            constraints.push(Constraint::new(vars, literals.clone(), w.clone()));
                        }
                    }
                }
            }
        }
    }
    CspInstance::new(Predicate::lin(4)?, p.source.right_size() * points, constraints)
}

/// `n` seeded draws from 𝒯₃, weight `1/n` each. Not exact.
pub fn sample_t3(p: &T3Params, n: usize, seed: u64) -> Result<CspInstance> {
    let (l, r) = (p.source.left_alphabet(), p.source.right_alphabet());
    let (nb, active) = left_neighbourhoods(&p.source)?;
    let points = p.points();
    let eps = p.eps.to_f64();
    let table = t3_eta_distribution(&p.eps)?;
    let full = (1u64 << (2 * r)) - 1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draws = (0..n)
        .map(|_| {
            let u = active[rng.gen_range(0..active.len())];
            let e1 = nb[u][rng.gen_range(0..nb[u].len())];
            let e2 = nb[u][rng.gen_range(0..nb[u].len())];
            let (x, x2, z, z2) = (rng.gen::<u64>() & full, rng.gen::<u64>() & full, rng.gen::<u64>() & full, rng.gen::<u64>() & full);
            let y = rng.gen::<u64>() & ((1u64 << (2 * l)) - 1);
            let cases: Vec<usize> = (0..l)
                .map(|_| {
                    let c: f64 = rng.gen();
                    if c < eps {
                        1
                    } else if c < 2.0 * eps {
                        2
                    } else {
                        0
                    }
                })
                .collect();
            let (eta, eta2) = eta_masks(&cases, &table, l);
            let s1 = compose_bits(y, &e1.pi, l) ^ (compose_bits(eta, &e1.pi, l) & z);
            let s2 = compose_bits(y, &e2.pi, l) ^ (compose_bits(eta2, &e2.pi, l) & z2) ^ p.complement();
            let vars = vec![
                e1.v * points + x as usize,
                e1.v * points + (x ^ s1) as usize,
                e2.v * points + x2 as usize,
                e2.v * points + (x2 ^ s2) as usize,
            ];
            (vars, p.literals())
        })
        .collect();
    sampled_instance(Predicate::lin(4)?, p.source.right_size() * points, draws)
}

/// Dictators `f_v(x) = x_{ℓ(v)}` and `g_v(x) = x_{R+ℓ(v)}` for a fully
/// satisfying labeling.
pub fn t3_completeness_witness(p: &T3Params, labeling: &Labeling) -> Result<(Assignment, Assignment)> {
    if satisfied_fraction(&p.source, labeling)? != Rational::one() {
        return Err(precondition("labeling does not satisfy every edge"));
    }
    Ok(binary_dictators(labeling, p.source.right_alphabet()))
}

/// Right vertices draw `β` with probability `f̂_w(β)²` and take a random
/// element folded into `[R]`; left vertices draw `α` from a random
/// neighbour and take a random element of `π̃_uv(α)`.
pub fn decode_t3(f: &[Vec<u8>], source: &LabelCoverInstance, fallback: Fallback, seed: u64) -> Result<Decoded> {
    decode_fourier(f, source, fallback, seed, |_| 1.0, Projection::TildeSet)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::csp::{covered_fraction, CoverSet};
    use crate::rational::q;

    fn single_edge(l: usize) -> LabelCoverInstance {
        LabelCoverInstance::new(1, 1, l, l, true, vec![Edge { u: 0, v: 0, pi: (0..l).collect() }]).unwrap()
    }

    #[test]
    fn eta_law() {
        for eps in [q(1, 8), q(1, 4), q(1, 2)] {
            let t = t3_eta_distribution(&eps).unwrap();
            let total: Rational = t.iter().map(|(_, p)| p).sum();
            assert_eq!(total, Rational::one());
            let quiet: Rational = t.iter().filter(|(c, _)| c[0] == 0 && c[2] == 0).map(|(_, p)| p).sum();
            assert_eq!(quiet, Rational::one() - &eps);
            for (c, _) in &t {
                if c[0] == 1 && c[2] == 1 {
                    assert_eq!((c[1], c[3]), (0, 0));
                }
            }
        }
        assert!(t3_eta_distribution(&q(3, 4)).is_err());
    }

    #[test]
    fn submask_enumeration() {
        let all: Vec<u64> = submasks(0b1010).collect();
        assert_eq!(all, vec![0, 0b0010, 0b1000, 0b1010]);
        assert_eq!(submasks(0).collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn completeness_both_encodings() {
        for plus in [PlusOne::Literal, PlusOne::Complement] {
            for eps in [q(1, 8), q(1, 4), q(1, 2)] {
                let p = T3Params::new(eps.clone(), single_edge(1), plus).unwrap();
                let inst = generate_t3(&p, &mut Budget::default()).unwrap();
                assert_eq!(inst.total_weight(), Rational::one());
                if plus == PlusOne::Literal {
                    assert!(inst.constraints().iter().all(|c| c.literals == vec![0, 0, 0, 1]));
                }
                let lab = Labeling { left: vec![0], right: vec![0] };
                let (f, g) = t3_completeness_witness(&p, &lab).unwrap();
                let bound = Rational::one() - &eps;
                assert!(covered_fraction(&CoverSet::single(f.clone()), &inst).unwrap() >= bound);
                assert!(covered_fraction(&CoverSet::single(g.clone()), &inst).unwrap() >= bound);
                let both = CoverSet::new(vec![f, g]).unwrap();
                assert_eq!(covered_fraction(&both, &inst).unwrap(), Rational::one());
            }
        }
    }

    #[test]
    fn wrong_labeling_rejected() {
        let g = LabelCoverInstance::new(1, 1, 2, 2, true, vec![Edge { u: 0, v: 0, pi: vec![0, 1] }]).unwrap();
        let p = T3Params::new(q(1, 4), g, PlusOne::Literal).unwrap();
        assert!(t3_completeness_witness(&p, &Labeling { left: vec![0], right: vec![1] }).is_err());
    }

    #[test]
    fn decode_dictator_and_parity() {
        let g = single_edge(2);
        let lab = Labeling { left: vec![1], right: vec![1] };
        let (f, _) = binary_dictators(&lab, 2);
        let tables = super::super::vertex_tables(&f, 1, 16).unwrap();
        let d = decode_t3(&tables, &g, Fallback::Uniform, 7).unwrap();
        assert_eq!(d.labeling, lab);
        assert_eq!(d.value, Rational::one());
        assert_eq!(d, decode_t3(&tables, &g, Fallback::Uniform, 7).unwrap());
        // x_0 + x_1: α = {0, 1}, so labels land in {0, 1}.
        let parity: Vec<u8> = (0..16u32).map(|x| ((x & 1) ^ (x >> 1 & 1)) as u8).collect();
        for seed in 0..10 {
            let d = decode_t3(&[parity.clone()], &g, Fallback::Uniform, seed).unwrap();
            assert!(d.labeling.right[0] < 2 && d.labeling.left[0] < 2);
        }
    }

    #[test]
    fn sampling_is_seeded() {
        let p = T3Params::new(q(1, 4), single_edge(1), PlusOne::Literal).unwrap();
        assert_eq!(sample_t3(&p, 30, 2).unwrap().to_text(), sample_t3(&p, 30, 2).unwrap().to_text());
    }
}
