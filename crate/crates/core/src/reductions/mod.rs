//! Long-code-test reductions from Label-Cover to CSP instances, their
//! completeness witnesses and the soundness-side decoders.
//!
//! Every generator has two modes. The exact mode enumerates the full test
//! support with rational weights and refuses once the budget is too small.
//! The sample mode draws `n` seeded tests with weight `1/n` each.
//!
//! Long codes are indexed by strings: the variable for vertex `v` and string
//! `x` is `v·q^n + Σ x_i q^i`, so coordinate 0 is least significant, as in
//! [`TabulatedFunction`](crate::boolanalysis::TabulatedFunction).

mod t1;
mod t2;
mod t3;

pub use t1::{
    decode_t1, generate_t1, sample_t1, t1_column_set, t1_completeness_witness, t1_paired_support,
    t1_vertex_functions, T1Decoded, T1Params,
};
pub use t2::{
    decode_t2, generate_t2, rejection_identity_check, sample_t2, t2_completeness_witness, xor_assignments,
    RejectionReport, T2Gadget, T2Params,
};
pub use t3::{decode_t3, generate_t3, sample_t3, t3_completeness_witness, t3_eta_distribution, PlusOne, T3Params};

use std::str::FromStr;

use num::Zero;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::boolanalysis::{fourier, TabulatedFunction};
use crate::csp::{Assignment, Constraint, CspInstance};
use crate::error::{invalid, mismatch, precondition, Error, Result};
use crate::labelcover::{satisfied_fraction, Edge, LabelCoverInstance, Labeling};
use crate::predicate::{Predicate, Tuple};
use crate::rational::Rational;

/// How a decoder labels a vertex when the random choice yields no label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Fallback {
    /// A uniformly random label.
    #[default]
    Uniform,
    /// The label carrying the most singleton weight (influence for 𝒯₁).
    Heaviest,
}

impl FromStr for Fallback {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(Fallback::Uniform),
            "heaviest" => Ok(Fallback::Heaviest),
            _ => Err(Error::Parse(format!("unknown fallback `{s}` (uniform | heaviest)"))),
        }
    }
}

/// A decoded labeling and the fraction of source edges it satisfies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decoded {
    pub labeling: Labeling,
    pub value: Rational,
}

fn decoded(source: &LabelCoverInstance, labeling: Labeling) -> Result<Decoded> {
    let value = satisfied_fraction(source, &labeling)?;
    Ok(Decoded { labeling, value })
}

/// Edges at each left vertex, and the left vertices that have any.
fn left_neighbourhoods(g: &LabelCoverInstance) -> Result<(Vec<Vec<&Edge>>, Vec<usize>)> {
    let mut nb: Vec<Vec<&Edge>> = vec![Vec::new(); g.left_size()];
    for e in g.edges() {
        nb[e.u].push(e);
    }
    let active: Vec<usize> = (0..g.left_size()).filter(|&u| !nb[u].is_empty()).collect();
    if active.is_empty() {
        return Err(precondition("source instance has no edges"));
    }
    Ok((nb, active))
}

/// `y∘π` on bit strings: `(y∘π)_i = y_{π(i)}` and `(y∘π)_{R+i} = y_{L+π(i)}`.
fn compose_bits(y: u64, pi: &[usize], l: usize) -> u64 {
    let r = pi.len();
    pi.iter().enumerate().fold(0u64, |acc, (i, &p)| acc | (y >> p & 1) << i | (y >> (l + p) & 1) << (r + i))
}

/// Splits a CSP assignment into per-vertex tables of `points` entries.
pub fn vertex_tables(a: &Assignment, vertices: usize, points: usize) -> Result<Vec<Vec<u8>>> {
    if a.len() != vertices * points {
        return Err(mismatch(format!("assignment has {} values, expected {}", a.len(), vertices * points)));
    }
    Ok(a.values().chunks(points).map(<[u8]>::to_vec).collect())
}

fn check_tables(f: &[Vec<u8>], vertices: usize, points: usize) -> Result<()> {
    if f.len() != vertices || f.iter().any(|t| t.len() != points || t.iter().any(|&b| b > 1)) {
        return Err(mismatch(format!("need {vertices} binary tables of {points} entries")));
    }
    Ok(())
}

/// Squared Fourier coefficients of `(-1)^{f}` as floats.
fn fourier_weights(bits: &[u8], n: usize) -> Result<Vec<f64>> {
    let t = TabulatedFunction::binary_from_fn(n, |x| {
        if bits[x as usize] == 0 {
            Rational::from_integer(1)
        } else {
            Rational::from_integer(-1)
        }
    })?;
    Ok(fourier(&t)?.coeffs().iter().map(|c| c.to_f64().powi(2)).collect())
}

/// Draws `α` with probability `weights[α]`; `None` for the leftover mass.
fn draw_set(rng: &mut ChaCha8Rng, weights: &[f64]) -> Option<u64> {
    let mut r: f64 = rng.gen();
    for (alpha, &w) in weights.iter().enumerate() {
        if r < w {
            return Some(alpha as u64);
        }
        r -= w;
    }
    None
}

/// A uniformly random element of the nonempty mask `alpha`.
fn draw_element(rng: &mut ChaCha8Rng, alpha: u64) -> usize {
    let members: Vec<usize> = (0..64).filter(|&i| alpha >> i & 1 == 1).collect();
    members[rng.gen_range(0..members.len())]
}

/// Label in `[R]` with the largest folded singleton weight `ŵ({j}) + ŵ({R+j})`.
fn heaviest_folded(weights: &[f64], r: usize) -> usize {
    (0..r)
        .map(|j| (j, weights[1 << j] + weights[1 << (r + j)]))
        .fold((0, f64::NEG_INFINITY), |best, (j, w)| if w > best.1 { (j, w) } else { best })
        .0
}

/// Assembles a sampled multiset of queries into an instance with weight
/// `1/n` per draw.
fn sampled_instance(
    predicate: Predicate,
    num_vars: usize,
    draws: Vec<(Vec<usize>, Tuple)>,
) -> Result<CspInstance> {
    if draws.is_empty() {
        return Err(invalid("sample size must be positive"));
    }
    let w = Rational::new(1, draws.len() as i64);
    CspInstance::new(predicate, num_vars, draws.into_iter().map(|(vars, lits)| Constraint::new(vars, lits, w.clone())))
}

fn check_unit_interval(x: &Rational, name: &str, open_low: bool, max: Rational) -> Result<()> {
    let low_ok = if open_low { x.is_positive() } else { !x.is_negative() };
    if !low_ok || *x > max {
        return Err(invalid(format!("{name} = {x} out of range")));
    }
    Ok(())
}

fn check_sums_to_one(d: &[(Tuple, Rational)], name: &str) -> Result<()> {
    let total: Rational = d.iter().map(|(_, p)| p).sum();
    if d.iter().any(|(_, p)| p.is_negative()) || total != Rational::from_integer(1) {
        return Err(invalid(format!("{name} is not a probability distribution")));
    }
    Ok(())
}

fn positive(d: &[(Tuple, Rational)]) -> impl Iterator<Item = &(Tuple, Rational)> {
    d.iter().filter(|(_, p)| !p.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_bits_matches_definition() {
        // L = 2, R = 2, π = [1, 0]; y = y0 y1 y2 y3 with y0 = 1, y3 = 1.
        let y = 0b1001;
        let s = compose_bits(y, &[1, 0], 2);
        // (y∘π)_0 = y_1 = 0, _1 = y_0 = 1, _2 = y_3 = 1, _3 = y_2 = 0.
        assert_eq!(s, 0b0110);
    }

    #[test]
    fn draw_set_respects_mass() {
        use rand::SeedableRng;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert_eq!(draw_set(&mut rng, &[0.0, 1.0]), Some(1));
        assert_eq!(draw_set(&mut rng, &[0.0, 0.0]), None);
    }

    #[test]
    fn fallback_parse() {
        assert_eq!("heaviest".parse::<Fallback>().unwrap(), Fallback::Heaviest);
        assert!("best".parse::<Fallback>().is_err());
    }
}
