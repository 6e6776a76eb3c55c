use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use covlab::boolanalysis::{fourier, TabulatedFunction};
use covlab::correlated::{
    correlation_rho, correlation_rho_markov, invariance_gap, is_connected, pairwise_product_check, CorrelatedSpace,
};
use covlab::csp::{covered_fraction, covering_number, find_cover, max_independent_set, CoverSet, CspInstance};
use covlab::error::{DEFAULT_BUDGET, DEFAULT_MAX_SUPPORT};
use covlab::labelcover::{
    is_c_coverable, labelings_from_text, max_satisfiable, smoothness_profile, synthesize, LabelCoverInstance,
    Labeling, SynthKind, SynthParams,
};
use covlab::predicate::{parse_digits, Predicate};
use covlab::reductions::{
    decode_t1, decode_t2, decode_t3, generate_t1, generate_t2, generate_t3, rejection_identity_check, sample_t1,
    sample_t2, sample_t3, t1_completeness_witness, t1_vertex_functions, t2_completeness_witness,
    t3_completeness_witness, vertex_tables, Fallback, PlusOne, T1Params, T2Gadget, T2Params, T3Params,
};
use covlab::{Budget, Error, Rational};

#[derive(Parser)]
#[command(name = "covlab", version, about = "Covering numbers, long-code reductions and correlated-space checks")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Maximum number of candidate evaluations.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Largest support an exact generator may materialise.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_SUPPORT)]
    max_support: u64,
    /// Seed for every randomized step; required where randomness is used.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Numeric tolerance for floating-point reports.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,
    /// Write generated files here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Human,
    Records,
}

#[derive(Subcommand)]
enum Command {
    /// Exact covering number of a CSP instance.
    Cover {
        instance: PathBuf,
        #[arg(long, default_value_t = 8)]
        max_c: usize,
    },
    /// Maximum independent set of a CSP instance.
    Mis { instance: PathBuf },
    /// Weight fraction covered by a set of assignments.
    Fraction { instance: PathBuf, cover: PathBuf },
    /// Exact maximum satisfiable fraction of a Label-Cover instance.
    LcSat { source: PathBuf },
    /// Decides c-coverability of a Label-Cover instance.
    LcCover {
        source: PathBuf,
        #[arg(long)]
        c: usize,
    },
    /// Smoothness profile of a right vertex and label set.
    LcSmooth {
        source: PathBuf,
        #[arg(long)]
        vertex: usize,
        #[arg(long, value_delimiter = ',')]
        alpha: Vec<usize>,
    },
    /// Seeded synthetic Label-Cover instance.
    LcGen {
        #[arg(long)]
        kind: String,
        #[arg(long)]
        left: usize,
        #[arg(long)]
        right: usize,
        #[arg(long)]
        labels: usize,
        #[arg(long, default_value_t = 1)]
        d: usize,
        #[arg(long)]
        degree: usize,
    },
    /// Walsh-Hadamard coefficients of a Boolean-cube function table.
    Fourier { function: PathBuf },
    /// Maximal correlation of a correlated space.
    Rho { space: PathBuf },
    /// Connectivity of a correlated space's support.
    Connected { space: PathBuf },
    /// Invariance gap and bound for functions F, G over L columns.
    Invariance {
        space: PathBuf,
        #[arg(long)]
        l: usize,
        /// Whitespace-separated values of F over Ω₁^L.
        #[arg(long)]
        f: PathBuf,
        /// Whitespace-separated values of G over Ω₂^L.
        #[arg(long)]
        g: PathBuf,
    },
    /// Generate the CSP instance of a long-code test.
    #[command(subcommand)]
    Reduce(Test<ReduceExtra>),
    /// Build completeness-witness assignments.
    #[command(subcommand)]
    Witness(Test<WitnessExtra>),
    /// Decode assignments into a Label-Cover labeling.
    #[command(subcommand)]
    Decode(Test<DecodeExtra>),
    /// Exact check of the rejection arithmetization.
    RejectId {
        instance: PathBuf,
        /// Assignment files; every line of every file is one assignment.
        #[arg(required = true)]
        assignments: Vec<PathBuf>,
    },
}

#[derive(Subcommand)]
enum Test<E: Args> {
    T1 {
        #[command(flatten)]
        test: T1Args,
        #[command(flatten)]
        extra: E,
    },
    T2 {
        #[command(flatten)]
        test: T2Args,
        #[command(flatten)]
        extra: E,
    },
    T3 {
        #[command(flatten)]
        test: T3Args,
        #[command(flatten)]
        extra: E,
    },
}

#[derive(Args)]
struct T1Args {
    source: PathBuf,
    #[arg(long, default_value_t = 2)]
    q: u8,
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// The NAE tuple `a` as digits.
    #[arg(long, default_value = "01")]
    a: String,
    /// Predicate file; NAE(q, k) by default.
    #[arg(long)]
    predicate: Option<PathBuf>,
}

#[derive(Args)]
struct T2Args {
    source: PathBuf,
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long)]
    eps: Rational,
    /// Predicate file; 2k-LIN by default.
    #[arg(long)]
    predicate: Option<PathBuf>,
}

#[derive(Args)]
struct T3Args {
    source: PathBuf,
    #[arg(long)]
    eps: Rational,
    #[arg(long, default_value = "literal")]
    plus_one: PlusOne,
}

#[derive(Args)]
struct ReduceExtra {
    /// Draw this many seeded tests instead of enumerating (not exact).
    #[arg(long)]
    sample: Option<usize>,
}

#[derive(Args)]
struct WitnessExtra {
    /// Labelings file; searched exhaustively when absent.
    #[arg(long)]
    labelings: Option<PathBuf>,
    /// Largest cover size tried when searching 𝒯₁ labelings.
    #[arg(long, default_value_t = 2)]
    max_c: usize,
}

#[derive(Args)]
struct DecodeExtra {
    /// Assignment file; line `index` is decoded.
    #[arg(long)]
    assignment: PathBuf,
    #[arg(long, default_value_t = 0)]
    index: usize,
    #[arg(long, default_value = "uniform")]
    fallback: Fallback,
    /// Noise for 𝒯₂ decoding.
    #[arg(long, default_value = "1/8")]
    gamma: Rational,
    /// Influence threshold for 𝒯₁ decoding.
    #[arg(long, default_value = "1/4")]
    tau: Rational,
    /// Degree cap for 𝒯₁ decoding.
    #[arg(long, default_value_t = 1)]
    d: usize,
    /// Long-code value whose indicator is decoded for 𝒯₁.
    #[arg(long, default_value_t = 1)]
    value: u8,
}

enum Failure {
    Lib(Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

/// Ordered `key = value` report lines.
struct Report {
    format: Format,
    lines: Vec<(String, String)>,
}

impl Report {
    fn new(format: Format, command: &str) -> Self {
        Report { format, lines: vec![("command".into(), command.into())] }
    }

    fn put(&mut self, key: impl Into<String>, value: impl Display) {
        self.lines.push((key.into(), value.to_string()));
    }

    fn render(&self) -> String {
        let sep = match self.format {
            Format::Human => " = ",
            Format::Records => "=",
        };
        self.lines.iter().map(|(k, v)| format!("{k}{sep}{v}\n")).collect()
    }
}

fn read(path: &Path) -> Outcome<String> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn snap(x: f64, tol: f64) -> f64 {
    if x.abs() < tol {
        0.0
    } else {
        x
    }
}

fn budget(g: &Global) -> Budget {
    Budget::new(g.budget).with_max_support(g.max_support)
}

fn require_seed(g: &Global) -> Outcome<u64> {
    g.seed.ok_or_else(|| Failure::Usage("this subcommand is randomized; pass --seed".into()))
}

/// Writes a generated file to `--out` (reporting a summary) or stdout.
fn emit(g: &Global, text: String, report: Report) -> Outcome<String> {
    match &g.out {
        Some(path) => {
            fs::write(path, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
            let mut report = report;
            report.put("out", path.display());
            Ok(report.render())
        }
        None => Ok(text),
    }
}

fn join<T: Display>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

fn rationals(text: &str) -> Outcome<Vec<Rational>> {
    text.split_whitespace().filter(|t| !t.starts_with('#')).map(|t| t.parse().map_err(Failure::Lib)).collect()
}

fn t1_params(a: &T1Args) -> Outcome<T1Params> {
    let source = LabelCoverInstance::from_text(&read(&a.source)?)?;
    let predicate = match &a.predicate {
        Some(p) => Predicate::from_text(&read(p)?)?,
        None => Predicate::nae(a.q, a.k)?,
    };
    let tuple = parse_digits(&a.a, predicate.q(), predicate.k())?;
    Ok(T1Params::new(predicate, tuple, source)?)
}

fn t2_params(a: &T2Args) -> Outcome<T2Params> {
    let source = LabelCoverInstance::from_text(&read(&a.source)?)?;
    let predicate = match &a.predicate {
        Some(p) => Predicate::from_text(&read(p)?)?,
        None => Predicate::lin(2 * a.k)?,
    };
    Ok(T2Params::new(predicate, T2Gadget::parity(a.k, a.eps.clone())?, source)?)
}

fn t3_params(a: &T3Args) -> Outcome<T3Params> {
    let source = LabelCoverInstance::from_text(&read(&a.source)?)?;
    Ok(T3Params::new(a.eps.clone(), source, a.plus_one)?)
}

fn reduce(g: &Global, test: &Test<ReduceExtra>) -> Outcome<String> {
    let mut budget = budget(g);
    let sample = match test {
        Test::T1 { extra, .. } | Test::T2 { extra, .. } | Test::T3 { extra, .. } => extra.sample,
    };
    let seed = if sample.is_some() { Some(require_seed(g)?) } else { None };
    let (name, inst) = match (test, sample, seed) {
        (Test::T1 { test, .. }, None, _) => ("t1", generate_t1(&t1_params(test)?, &mut budget)?),
        (Test::T1 { test, .. }, Some(n), Some(s)) => ("t1", sample_t1(&t1_params(test)?, n, s)?),
        (Test::T2 { test, .. }, None, _) => ("t2", generate_t2(&t2_params(test)?, &mut budget)?),
        (Test::T2 { test, .. }, Some(n), Some(s)) => ("t2", sample_t2(&t2_params(test)?, n, s)?),
        (Test::T3 { test, .. }, None, _) => ("t3", generate_t3(&t3_params(test)?, &mut budget)?),
        (Test::T3 { test, .. }, Some(n), Some(s)) => ("t3", sample_t3(&t3_params(test)?, n, s)?),
        _ => unreachable!("seed checked above"),
    };
    let mut report = Report::new(g.format, &format!("reduce {name}"));
    report.put("exact", sample.is_none());
    if let (Some(n), Some(s)) = (sample, seed) {
        report.put("sample", n);
        report.put("seed", s);
    }
    report.put("variables", inst.num_vars());
    report.put("constraints", inst.constraints().len());
    report.put("total_weight", inst.total_weight());
    let mut text = inst.to_text();
    if sample.is_some() {
        text.insert_str(0, "# sampled, not exact\n");
    }
    emit(g, text, report)
}

fn witness(g: &Global, test: &Test<WitnessExtra>) -> Outcome<String> {
    let mut budget = budget(g);
    let labelings = |source: &LabelCoverInstance, extra: &WitnessExtra, budget: &mut Budget| -> Outcome<Option<Vec<Labeling>>> {
        match &extra.labelings {
            Some(path) => Ok(Some(labelings_from_text(&read(path)?)?)),
            None => {
                for c in 1..=extra.max_c {
                    if let Some(found) = is_c_coverable(source, c, budget)? {
                        return Ok(Some(found));
                    }
                }
                Ok(None)
            }
        }
    };
    let satisfying = |source: &LabelCoverInstance, extra: &WitnessExtra, budget: &mut Budget| -> Outcome<Labeling> {
        match &extra.labelings {
            Some(path) => labelings_from_text(&read(path)?)?
                .into_iter()
                .next()
                .ok_or_else(|| Failure::Usage("labelings file is empty".into())),
            None => {
                let (value, lab) = max_satisfiable(source, budget)?;
                if value != Rational::from_integer(1) {
                    return Err(Failure::Lib(Error::Precondition(format!("source is only {value}-satisfiable"))));
                }
                Ok(lab)
            }
        }
    };
    let (name, cover, labs) = match test {
        Test::T1 { test, extra } => {
            let p = t1_params(test)?;
            let labs = labelings(&p.source, extra, &mut budget)?.ok_or_else(|| {
                Failure::Lib(Error::Precondition(format!("source is not {}-coverable", extra.max_c)))
            })?;
            ("t1", t1_completeness_witness(&p, &labs)?, labs)
        }
        Test::T2 { test, extra } => {
            let p = t2_params(test)?;
            let lab = satisfying(&p.source, extra, &mut budget)?;
            let (f, h) = t2_completeness_witness(&p, &lab)?;
            ("t2", CoverSet::new(vec![f, h])?, vec![lab])
        }
        Test::T3 { test, extra } => {
            let p = t3_params(test)?;
            let lab = satisfying(&p.source, extra, &mut budget)?;
            let (f, h) = t3_completeness_witness(&p, &lab)?;
            ("t3", CoverSet::new(vec![f, h])?, vec![lab])
        }
    };
    let mut report = Report::new(g.format, &format!("witness {name}"));
    for (i, lab) in labs.iter().enumerate() {
        report.put(format!("labeling[{i}]"), lab.to_text());
    }
    report.put("assignments", cover.len());
    emit(g, cover.to_text(), report)
}

fn decode(g: &Global, test: &Test<DecodeExtra>) -> Outcome<String> {
    let seed = require_seed(g)?;
    let pick = |extra: &DecodeExtra, q: u8| -> Outcome<covlab::csp::Assignment> {
        let set = CoverSet::from_text(&read(&extra.assignment)?, q)?;
        set.assignments()
            .get(extra.index)
            .cloned()
            .ok_or_else(|| Failure::Usage(format!("assignment file has no line {}", extra.index)))
    };
    let mut report;
    match test {
        Test::T1 { test, extra } => {
            let p = t1_params(test)?;
            let a = pick(extra, p.predicate.q())?;
            let f = t1_vertex_functions(&a, &p, extra.value)?;
            let out = decode_t1(&f, &p.source, &extra.tau, extra.d, extra.fallback, seed)?;
            report = Report::new(g.format, "decode t1");
            report.put("seed", seed);
            report.put("tau", &extra.tau);
            report.put("d", extra.d);
            report.put("labeling", out.decoded.labeling.to_text());
            report.put("value", &out.decoded.value);
            let max = out.lab_left.iter().chain(&out.lab_right).map(Vec::len).max().unwrap_or(0);
            report.put("max_lab_size", max);
            report.put("lab_size_bound", &out.size_bound);
            report.put("within_bound", out.sizes_within_bound());
        }
        Test::T2 { test, extra } => {
            let p = t2_params(test)?;
            let r = p.source.right_alphabet();
            let tables = vertex_tables(&pick(extra, 2)?, p.source.right_size(), 1 << (2 * r))?;
            let out = decode_t2(&tables, &p.source, &extra.gamma, extra.fallback, seed)?;
            report = Report::new(g.format, "decode t2");
            report.put("seed", seed);
            report.put("gamma", &extra.gamma);
            report.put("labeling", out.labeling.to_text());
            report.put("value", &out.value);
        }
        Test::T3 { test, extra } => {
            let p = t3_params(test)?;
            let r = p.source.right_alphabet();
            let tables = vertex_tables(&pick(extra, 2)?, p.source.right_size(), 1 << (2 * r))?;
            let out = decode_t3(&tables, &p.source, extra.fallback, seed)?;
            report = Report::new(g.format, "decode t3");
            report.put("seed", seed);
            report.put("labeling", out.labeling.to_text());
            report.put("value", &out.value);
        }
    }
    Ok(report.render())
}

fn run(cli: Cli) -> Outcome<String> {
    let g = &cli.global;
    if g.budget == 0 || g.max_support == 0 {
        return Err(Failure::Usage("--budget and --max-support must be positive".into()));
    }
    if !(g.tol > 0.0) {
        return Err(Failure::Usage("--tol must be positive".into()));
    }
    let mut budget = budget(g);
    match &cli.command {
        Command::Cover { instance, max_c } => {
            let inst = CspInstance::from_text(&read(instance)?)?;
            let nu = covering_number(&inst, *max_c, &mut budget)?;
            let mut r = Report::new(g.format, "cover");
            r.put("max_c", max_c);
            match nu {
                Some(nu) => {
                    r.put("nu", nu);
                    if nu > 0 {
                        let cover = find_cover(&inst, nu, &mut budget)?.expect("covering number witnessed");
                        for (i, a) in cover.assignments().iter().enumerate() {
                            r.put(format!("assignment[{i}]"), covlab::predicate::format_digits(a.values()));
                        }
                    }
                }
                None => r.put("nu", format!("> {max_c}")),
            }
            r.put("evaluations", budget.used());
            Ok(r.render())
        }
        Command::Mis { instance } => {
            let inst = CspInstance::from_text(&read(instance)?)?;
            let (size, set) = max_independent_set(&inst, &mut budget)?;
            let mut r = Report::new(g.format, "mis");
            r.put("size", size);
            r.put("fraction", Rational::new(size as i64, inst.num_vars().max(1) as i64));
            r.put("set", join(&set));
            Ok(r.render())
        }
        Command::Fraction { instance, cover } => {
            let inst = CspInstance::from_text(&read(instance)?)?;
            let cs = CoverSet::from_text(&read(cover)?, inst.q())?;
            let mut r = Report::new(g.format, "fraction");
            r.put("assignments", cs.len());
            for (i, a) in cs.assignments().iter().enumerate() {
                r.put(format!("fraction[{i}]"), covered_fraction(&CoverSet::single(a.clone()), &inst)?);
            }
            r.put("union", covered_fraction(&cs, &inst)?);
            Ok(r.render())
        }
        Command::LcSat { source } => {
            let lc = LabelCoverInstance::from_text(&read(source)?)?;
            let (value, lab) = max_satisfiable(&lc, &mut budget)?;
            let mut r = Report::new(g.format, "lc-sat");
            r.put("value", value);
            r.put("labeling", lab.to_text());
            Ok(r.render())
        }
        Command::LcCover { source, c } => {
            let lc = LabelCoverInstance::from_text(&read(source)?)?;
            let found = is_c_coverable(&lc, *c, &mut budget)?;
            let mut r = Report::new(g.format, "lc-cover");
            r.put("c", c);
            r.put("coverable", found.is_some());
            for (i, lab) in found.iter().flatten().enumerate() {
                r.put(format!("labeling[{i}]"), lab.to_text());
            }
            Ok(r.render())
        }
        Command::LcSmooth { source, vertex, alpha } => {
            let lc = LabelCoverInstance::from_text(&read(source)?)?;
            let mut r = Report::new(g.format, "lc-smooth");
            r.put("vertex", vertex);
            r.put("alpha", join(alpha));
            r.put("collision_probability", smoothness_profile(&lc, *vertex, alpha)?);
            Ok(r.render())
        }
        Command::LcGen { kind, left, right, labels, d, degree } => {
            let seed = require_seed(g)?;
            let kind: SynthKind = kind.parse()?;
            let params = SynthParams { left: *left, right: *right, labels: *labels, d: *d, left_degree: *degree };
            let syn = synthesize(kind, params, seed)?;
            let mut text = syn.instance.to_text();
            for lab in &syn.planted {
                text.push_str(&format!("# planted {}\n", lab.to_text()));
            }
            let mut r = Report::new(g.format, "lc-gen");
            r.put("seed", seed);
            r.put("edges", syn.instance.edges().len());
            emit(g, text, r)
        }
        Command::Fourier { function } => {
            let f = TabulatedFunction::from_text(&read(function)?)?;
            let table = fourier(&f)?;
            let mut r = Report::new(g.format, "fourier");
            r.put("n", table.n());
            for (alpha, c) in table.coeffs().iter().enumerate() {
                if !num::Zero::is_zero(c) {
                    r.put(format!("coeff[{alpha:0width$b}]", width = table.n()), c);
                }
            }
            r.put("weight", table.weight());
            Ok(r.render())
        }
        Command::Rho { space } => {
            let s = CorrelatedSpace::from_text(&read(space)?)?;
            let (a, b) = (correlation_rho(&s), correlation_rho_markov(&s));
            let mut r = Report::new(g.format, "rho");
            r.put("rho", format!("{:.12}", snap(a, g.tol)));
            r.put("rho_markov", format!("{:.12}", snap(b, g.tol)));
            r.put("paths_agree", (a - b).abs() <= g.tol.max(1e-8));
            r.put("pairwise_product", pairwise_product_check(&s));
            r.put("min_atom", s.min_atom());
            Ok(r.render())
        }
        Command::Connected { space } => {
            let s = CorrelatedSpace::from_text(&read(space)?)?;
            let mut r = Report::new(g.format, "connected");
            r.put("support", s.atoms().count());
            r.put("connected", is_connected(&s.paired_support())?);
            Ok(r.render())
        }
        Command::Invariance { space, l, f, g: gfile } => {
            let s = CorrelatedSpace::from_text(&read(space)?)?;
            let fv = rationals(&read(f)?)?;
            let gv = rationals(&read(gfile)?)?;
            let rep = invariance_gap(&s, *l, &fv, &gv, &mut budget)?;
            let mut r = Report::new(g.format, "invariance");
            r.put("l", l);
            r.put("gap", &rep.gap);
            r.put("tau", format!("{:.12}", rep.tau));
            r.put("gamma", format!("{:.12}", rep.gamma));
            r.put("bound", format!("{:.12}", rep.bound));
            r.put("holds", rep.holds());
            Ok(r.render())
        }
        Command::Reduce(test) => reduce(g, test),
        Command::Witness(test) => witness(g, test),
        Command::Decode(test) => decode(g, test),
        Command::RejectId { instance, assignments } => {
            let inst = CspInstance::from_text(&read(instance)?)?;
            let mut all = Vec::new();
            for path in assignments {
                all.extend(CoverSet::from_text(&read(path)?, 2)?.assignments().iter().cloned());
            }
            let rep = rejection_identity_check(&all, &inst)?;
            let mut r = Report::new(g.format, "reject-id");
            r.put("t", rep.t);
            r.put("lhs", &rep.lhs);
            r.put("rhs", &rep.rhs);
            r.put("deviation", &rep.deviation);
            r.put("all_rejected", &rep.all_rejected);
            for (s, c) in &rep.correlations {
                r.put(format!("correlation[{s:0width$b}]", width = rep.t), c);
            }
            r.put("threshold", &rep.threshold);
            r.put("below_threshold", join(&rep.below_threshold()));
            Ok(r.render())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(Failure::Lib(e @ (Error::BudgetExceeded { .. } | Error::SupportExceeded { .. }))) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
