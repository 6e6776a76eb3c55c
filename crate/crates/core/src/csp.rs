//! Weighted `P`-CSP instances, cover checking and exact solvers.
//!
//! Covering semantics ignore weights: a cover must hit every constraint of
//! positive weight. Weights only enter [`covered_fraction`].

use indexmap::IndexMap;
use num::{One, Zero};

use crate::error::{invalid, mismatch, precondition, Budget, Error, Result};
use crate::predicate::{
    add_constant, add_mod, content_lines, format_digits, parse_digits, parse_field, tuple_index, Predicate, Tuple,
};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub vars: Vec<usize>,
    pub literals: Tuple,
    pub weight: Rational,
}

impl Constraint {
    pub fn new(vars: Vec<usize>, literals: Tuple, weight: Rational) -> Self {
        Constraint { vars, literals, weight }
    }
}

/// A `P`-CSP instance: variables `0..num_vars`, weighted constraints with
/// literal vectors. Duplicate `(vars, literals)` pairs are merged by summing
/// weights, keeping first-occurrence order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CspInstance {
    predicate: Predicate,
    num_vars: usize,
    constraints: Vec<Constraint>,
}

/// A total map from variables to `[q]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Assignment(pub Vec<u8>);

impl Assignment {
    pub fn values(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `a + b̄`.
    pub fn translate(&self, q: u8, b: u8) -> Assignment {
        Assignment(add_constant(q, &self.0, b))
    }
}

/// A nonempty family of assignments over the same variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverSet {
    assignments: Vec<Assignment>,
}

impl CoverSet {
    pub fn new(assignments: Vec<Assignment>) -> Result<Self> {
        let first = assignments.first().ok_or_else(|| invalid("a cover set needs at least one assignment"))?;
        if assignments.iter().any(|a| a.len() != first.len()) {
            return Err(mismatch("assignments over different variable sets"));
        }
        Ok(CoverSet { assignments })
    }

    pub fn single(a: Assignment) -> Self {
        CoverSet { assignments: vec![a] }
    }

    pub fn assignments(&self) -> &[Assignment] {
        &self.assignments
    }

    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    /// One assignment per line as a digit string.
    pub fn to_text(&self) -> String {
        self.assignments.iter().map(|a| format_digits(&a.0) + "\n").collect()
    }

    pub fn from_text(text: &str, q: u8) -> Result<Self> {
        let rows: Vec<Assignment> = content_lines(text)
            .map(|l| parse_digits(l, q, l.trim().chars().count()).map(Assignment))
            .collect::<Result<_>>()?;
        CoverSet::new(rows)
    }
}

impl CspInstance {
    pub fn new(predicate: Predicate, num_vars: usize, constraints: impl IntoIterator<Item = Constraint>) -> Result<Self> {
        let (q, k) = (predicate.q(), predicate.k());
        let mut merged: IndexMap<(Vec<usize>, Tuple), Rational> = IndexMap::new();
        for c in constraints {
            if c.vars.len() != k || c.literals.len() != k {
                return Err(mismatch(format!("constraint of arity {} in a {k}-ary instance", c.vars.len())));
            }
            if let Some(&v) = c.vars.iter().find(|&&v| v >= num_vars) {
                return Err(invalid(format!("variable {v} out of range 0..{num_vars}")));
            }
            if c.literals.iter().any(|&l| l >= q) {
                return Err(invalid(format!("literal outside [{q}]")));
            }
            if c.weight.is_negative() {
                return Err(invalid("negative constraint weight"));
            }
            *merged.entry((c.vars, c.literals)).or_insert_with(Rational::zero) += c.weight;
        }
        let constraints: Vec<Constraint> =
            merged.into_iter().map(|((vars, literals), weight)| Constraint { vars, literals, weight }).collect();
        if !constraints.is_empty() && constraints.iter().all(|c| c.weight.is_zero()) {
            return Err(invalid("total constraint weight is zero"));
        }
        Ok(CspInstance { predicate, num_vars, constraints })
    }

    pub fn predicate(&self) -> &Predicate {
        &self.predicate
    }

    pub fn q(&self) -> u8 {
        self.predicate.q()
    }

    pub fn k(&self) -> usize {
        self.predicate.k()
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn total_weight(&self) -> Rational {
        self.constraints.iter().map(|c| &c.weight).sum()
    }

    fn active(&self) -> impl Iterator<Item = &Constraint> {
        self.constraints.iter().filter(|c| c.weight.is_positive())
    }

    fn check_assignment(&self, a: &Assignment) -> Result<()> {
        if a.len() != self.num_vars {
            return Err(mismatch(format!(
                "partial assignment: {} values for {} variables",
                a.len(),
                self.num_vars
            )));
        }
        if a.0.iter().any(|&v| v >= self.q()) {
            return Err(invalid(format!("assignment value outside [{}]", self.q())));
        }
        Ok(())
    }

    #[inline]
    fn satisfies(&self, values: &[u8], c: &Constraint) -> bool {
        let q = self.q() as usize;
        let idx = c
            .vars
            .iter()
            .zip(&c.literals)
            .fold(0usize, |acc, (&v, &l)| acc * q + (values[v] as usize + l as usize) % q);
        self.predicate.contains_index(idx)
    }

    /// Header `q k nvars nconstraints`, a `predicate m` line followed by the
    /// `m` member tuples, then one constraint per line:
    /// `v1 … vk literals num/den`.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {} {}\n", self.q(), self.k(), self.num_vars, self.constraints.len());
        out.push_str(&format!("predicate {}\n", self.predicate.len()));
        for t in self.predicate.members() {
            out.push_str(&format_digits(t));
            out.push('\n');
        }
        for c in &self.constraints {
            for v in &c.vars {
                out.push_str(&v.to_string());
                out.push(' ');
            }
            out.push_str(&format_digits(&c.literals));
            out.push(' ');
            out.push_str(&c.weight.to_string());
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = content_lines(text);
        let header = lines.next().ok_or_else(|| Error::Parse("empty instance".into()))?;
        let mut it = header.split_whitespace();
        let q: u8 = parse_field(it.next(), "q")?;
        let k: usize = parse_field(it.next(), "k")?;
        let nvars: usize = parse_field(it.next(), "nvars")?;
        let ncons: usize = parse_field(it.next(), "nconstraints")?;
        let pline = lines.next().ok_or_else(|| Error::Parse("missing `predicate m` line".into()))?;
        let mut it = pline.split_whitespace();
        if it.next() != Some("predicate") {
            return Err(Error::Parse(format!("expected `predicate m`, found `{pline}`")));
        }
        let m: usize = parse_field(it.next(), "predicate size")?;
        let mut members = Vec::with_capacity(m);
        for _ in 0..m {
            let l = lines.next().ok_or_else(|| Error::Parse("truncated predicate".into()))?;
            members.push(parse_digits(l, q, k)?);
        }
        let predicate = Predicate::new(q, k, members)?;
        let mut constraints = Vec::with_capacity(ncons);
        for l in lines {
            let toks: Vec<&str> = l.split_whitespace().collect();
            if toks.len() != k + 2 {
                return Err(Error::Parse(format!("constraint line `{l}` should have {} fields", k + 2)));
            }
            let vars = toks[..k].iter().map(|t| parse_field(Some(t), "variable")).collect::<Result<Vec<usize>>>()?;
            let literals = parse_digits(toks[k], q, k)?;
            let weight: Rational = toks[k + 1].parse()?;
            constraints.push(Constraint { vars, literals, weight });
        }
        if constraints.len() != ncons {
            return Err(Error::Parse(format!("header announces {ncons} constraints, found {}", constraints.len())));
        }
        CspInstance::new(predicate, nvars, constraints)
    }
}

pub fn covers_constraint(a: &Assignment, inst: &CspInstance, idx: usize) -> Result<bool> {
    inst.check_assignment(a)?;
    let c = inst
        .constraints
        .get(idx)
        .ok_or_else(|| invalid(format!("constraint index {idx} out of range")))?;
    Ok(inst.satisfies(&a.0, c))
}

/// Weight fraction of constraints covered by at least one assignment.
/// An instance without constraints counts as fully covered.
pub fn covered_fraction(cs: &CoverSet, inst: &CspInstance) -> Result<Rational> {
    for a in cs.assignments() {
        inst.check_assignment(a)?;
    }
    let total = inst.total_weight();
    if total.is_zero() {
        return Ok(Rational::one());
    }
    let covered: Rational = inst
        .constraints
        .iter()
        .filter(|c| cs.assignments().iter().any(|a| inst.satisfies(&a.0, c)))
        .map(|c| &c.weight)
        .sum();
    Ok(covered / total)
}

/// True iff every positive-weight constraint is covered.
pub fn is_cover(cs: &CoverSet, inst: &CspInstance) -> Result<bool> {
    for a in cs.assignments() {
        inst.check_assignment(a)?;
    }
    Ok(inst.active().all(|c| cs.assignments().iter().any(|a| inst.satisfies(&a.0, c))))
}

/// Indices of positive-weight constraints no assignment covers.
pub fn uncovered(cs: &CoverSet, inst: &CspInstance) -> Result<Vec<usize>> {
    for a in cs.assignments() {
        inst.check_assignment(a)?;
    }
    Ok(inst
        .constraints
        .iter()
        .enumerate()
        .filter(|(_, c)| c.weight.is_positive() && !cs.assignments().iter().any(|a| inst.satisfies(&a.0, c)))
        .map(|(i, _)| i)
        .collect())
}

/// Search order for variables touched by active constraints: greedily the
/// variable with most constraints into the already-placed set.
fn search_order(num_vars: usize, cons: &[&Constraint]) -> Vec<usize> {
    let mut degree = vec![0usize; num_vars];
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); num_vars];
    for (ci, c) in cons.iter().enumerate() {
        let mut seen = c.vars.clone();
        seen.sort_unstable();
        seen.dedup();
        for &v in &seen {
            degree[v] += 1;
            incident[v].push(ci);
        }
    }
    let mut placed = vec![false; num_vars];
    let mut links = vec![0usize; num_vars];
    let mut order = Vec::new();
    let candidates: Vec<usize> = (0..num_vars).filter(|&v| degree[v] > 0).collect();
    for _ in 0..candidates.len() {
        let &next = candidates
            .iter()
            .filter(|&&v| !placed[v])
            .max_by(|&&a, &&b| (links[a], degree[a]).cmp(&(links[b], degree[b])).then(b.cmp(&a)))
            .expect("candidate left");
        placed[next] = true;
        order.push(next);
        for &ci in &incident[next] {
            for &w in &cons[ci].vars {
                if !placed[w] {
                    links[w] += 1;
                }
            }
        }
    }
    order
}

struct CoverSearch<'a> {
    inst: &'a CspInstance,
    c: usize,
    order: Vec<usize>,
    /// Constraints whose last variable (in search order) sits at each position.
    closing: Vec<Vec<&'a Constraint>>,
    /// `values[i][v]`: assignment `i` at variable `v`.
    values: Vec<Vec<u8>>,
    fix_first: bool,
    budget: &'a mut Budget,
}

impl CoverSearch<'_> {
    fn run(&mut self, pos: usize, tied: &[bool]) -> Result<bool> {
        if pos == self.order.len() {
            return Ok(true);
        }
        let q = self.inst.q();
        let var = self.order[pos];
        let colors = (q as usize).pow(self.c as u32);
        let limit = if pos == 0 && self.fix_first { 1 } else { colors };
        let mut tuple = vec![0u8; self.c];
        let mut next_tied = vec![false; tied.len()];
        'colors: for color in 0..limit {
            self.budget.charge(1)?;
            let mut x = color;
            for slot in tuple.iter_mut().rev() {
                *slot = (x % q as usize) as u8;
                x /= q as usize;
            }
            // Columns stay lexicographically sorted: assignments are interchangeable.
            for i in 0..tied.len() {
                if tied[i] && tuple[i] > tuple[i + 1] {
                    continue 'colors;
                }
                next_tied[i] = tied[i] && tuple[i] == tuple[i + 1];
            }
            for (i, &t) in tuple.iter().enumerate() {
                self.values[i][var] = t;
            }
            let ok = self.closing[pos]
                .iter()
                .all(|con| self.values.iter().any(|vals| self.inst.satisfies(vals, con)));
            if ok && self.run(pos + 1, &next_tied.clone())? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Some `c` assignments covering every positive-weight constraint, if any.
pub fn find_cover(inst: &CspInstance, c: usize, budget: &mut Budget) -> Result<Option<CoverSet>> {
    if c == 0 {
        return Err(invalid("cover size must be at least 1"));
    }
    let cons: Vec<&Constraint> = inst.active().collect();
    let order = search_order(inst.num_vars, &cons);
    let mut position = vec![usize::MAX; inst.num_vars];
    for (p, &v) in order.iter().enumerate() {
        position[v] = p;
    }
    let mut closing: Vec<Vec<&Constraint>> = vec![Vec::new(); order.len()];
    for con in &cons {
        let last = con.vars.iter().map(|&v| position[v]).max().expect("arity >= 1");
        closing[last].push(con);
    }
    let mut search = CoverSearch {
        inst,
        c,
        order,
        closing,
        values: vec![vec![0u8; inst.num_vars]; c],
        // Translating any single assignment by a constant preserves what it
        // covers exactly when the predicate is closed under constant shifts.
        fix_first: inst.predicate.is_translation_invariant(),
        budget,
    };
    let found = search.run(0, &vec![true; c.saturating_sub(1)])?;
    Ok(found.then(|| CoverSet {
        assignments: search.values.into_iter().map(Assignment).collect(),
    }))
}

/// Exact covering number `ν`, or `None` if it exceeds `max_c`. An instance
/// with no positive-weight constraints has `ν = 0`.
pub fn covering_number(inst: &CspInstance, max_c: usize, budget: &mut Budget) -> Result<Option<usize>> {
    if max_c == 0 {
        return Err(invalid("max_c must be at least 1"));
    }
    if inst.active().next().is_none() {
        return Ok(Some(0));
    }
    for c in 1..=max_c {
        if find_cover(inst, c, budget)?.is_some() {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

/// The `q` constant translates of `a`; a cover whenever the predicate is odd.
pub fn trivial_odd_cover(inst: &CspInstance, a: &Assignment) -> Result<CoverSet> {
    if !inst.predicate.is_odd() {
        return Err(precondition("predicate is not odd"));
    }
    inst.check_assignment(a)?;
    let q = inst.q();
    Ok(CoverSet { assignments: (0..q).map(|b| a.translate(q, b)).collect() })
}

/// Maximum set of variables containing no positive-weight constraint
/// entirely, with the first optimal witness in include-first order.
pub fn max_independent_set(inst: &CspInstance, budget: &mut Budget) -> Result<(usize, Vec<usize>)> {
    let n = inst.num_vars;
    // Each constraint as a deduplicated variable set, filed under its largest variable.
    let mut closing: Vec<Vec<Vec<usize>>> = vec![Vec::new(); n];
    for c in inst.active() {
        let mut vs = c.vars.clone();
        vs.sort_unstable();
        vs.dedup();
        let last = *vs.last().expect("arity >= 1");
        vs.pop();
        closing[last].push(vs);
    }
    struct Mis<'a> {
        closing: &'a [Vec<Vec<usize>>],
        chosen: Vec<bool>,
        best: Vec<bool>,
        best_size: usize,
        budget: &'a mut Budget,
    }
    impl Mis<'_> {
        fn go(&mut self, v: usize, size: usize) -> Result<()> {
            self.budget.charge(1)?;
            let n = self.chosen.len();
            if v == n {
                if size > self.best_size || self.best_size == usize::MAX {
                    self.best_size = size;
                    self.best = self.chosen.clone();
                }
                return Ok(());
            }
            if self.best_size != usize::MAX && size + (n - v) <= self.best_size {
                return Ok(());
            }
            let blocked = self.closing[v].iter().any(|rest| rest.iter().all(|&w| self.chosen[w]));
            if !blocked {
                self.chosen[v] = true;
                self.go(v + 1, size + 1)?;
                self.chosen[v] = false;
            }
            self.go(v + 1, size)
        }
    }
    let mut mis = Mis { closing: &closing, chosen: vec![false; n], best: vec![false; n], best_size: usize::MAX, budget };
    mis.go(0, 0)?;
    let witness: Vec<usize> = (0..n).filter(|&v| mis.best[v]).collect();
    Ok((witness.len(), witness))
}

/// A vertex colouring with colours `0..num_colors`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coloring {
    pub colors: Vec<usize>,
    pub num_colors: usize,
}

impl Coloring {
    /// No positive-weight constraint is monochromatic.
    pub fn is_proper(&self, inst: &CspInstance) -> bool {
        inst.active().all(|c| c.vars.iter().any(|&v| self.colors[v] != self.colors[c.vars[0]]))
    }
}

/// Reads a `t`-cover of a negation-free NAE-type instance as a `q^t`
/// colouring: variable `v` gets colour `(f_1(v), …, f_t(v))`.
pub fn cover_to_coloring(cs: &CoverSet, inst: &CspInstance) -> Result<Coloring> {
    let (q, k) = (inst.q(), inst.k());
    if !inst.predicate.is_subset_of(&Predicate::nae(q, k)?) {
        return Err(precondition("predicate is not contained in NAE"));
    }
    if inst.constraints.iter().any(|c| c.literals.iter().any(|&l| l != 0)) {
        return Err(precondition("instance has nonzero literals"));
    }
    if !is_cover(cs, inst)? {
        return Err(precondition("assignments do not cover the instance"));
    }
    let t = cs.len() as u32;
    let num_colors = (q as usize)
        .checked_pow(t)
        .ok_or_else(|| invalid("q^t colours overflow"))?;
    let colors = (0..inst.num_vars)
        .map(|v| cs.assignments().iter().fold(0usize, |acc, a| acc * q as usize + a.0[v] as usize))
        .collect();
    Ok(Coloring { colors, num_colors })
}

/// Same constraint graph and literals under a weaker predicate.
pub fn weaken_predicate(inst: &CspInstance, superset: &Predicate) -> Result<CspInstance> {
    if !inst.predicate.is_subset_of(superset) {
        return Err(precondition("replacement predicate is not a superset"));
    }
    Ok(CspInstance { predicate: superset.clone(), ..inst.clone() })
}

/// Adds `h` to every literal vector. Paired with `shift(P, -h)` on the
/// predicate this leaves covering behaviour unchanged.
pub fn apply_literal_shift(inst: &CspInstance, h: &[u8]) -> Result<CspInstance> {
    if h.len() != inst.k() {
        return Err(mismatch(format!("shift of length {} for arity {}", h.len(), inst.k())));
    }
    if h.iter().any(|&v| v >= inst.q()) {
        return Err(invalid("shift symbol outside [q]"));
    }
    let q = inst.q();
    let constraints = inst
        .constraints
        .iter()
        .map(|c| Constraint { literals: add_mod(q, &c.literals, h), ..c.clone() });
    CspInstance::new(inst.predicate.clone(), inst.num_vars, constraints)
}

/// Convenience: a negation-free instance with unit weights.
pub fn unweighted(predicate: Predicate, num_vars: usize, edges: &[Vec<usize>]) -> Result<CspInstance> {
    let k = predicate.k();
    CspInstance::new(
        predicate,
        num_vars,
        edges.iter().map(|e| Constraint::new(e.clone(), vec![0; k], Rational::one())),
    )
}

/// Predicate-membership index of `(values on vars) + literals`, exposed for
/// callers evaluating constraints in bulk.
pub fn constraint_value_index(q: u8, values: &[u8], c: &Constraint) -> usize {
    let t: Tuple = c.vars.iter().zip(&c.literals).map(|(&v, &l)| ((values[v] as u16 + l as u16) % q as u16) as u8).collect();
    tuple_index(q, &t)
}
