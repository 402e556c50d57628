//! Verification suites, one per theorem, run over generated corpora.
//!
//! Every suite reports how many instances it checked and lists the ones
//! that failed. Expensive shared work (machine runs over the corpus, the
//! predictor sweep over pairs) is computed once per [`Verifier`].

use std::cell::OnceCell;
use std::time::{Duration, Instant};

use krivine_lab_core::corpus::{church, closed_normal_terms, closed_terms, delta, identity, named_terms, omega};
use krivine_lab_core::derivation::{check_derivation, check_state_derivation, Derivation, Inference};
use krivine_lab_core::engine::{extract_derivation_beta, extract_derivation_head, DerivationTable, SearchResult};
use krivine_lab_core::machine::{run, run_with, MachineKind, RunOptions, RunStatus, State};
use krivine_lab_core::semantics::{
    derivation_for_point, ground_points, interpret_in_env, step_bound, unify_multisets, PredictMode, Prediction,
    Predictor, SemEnv,
};
use krivine_lab_core::term::{alpha_eq, Name, Term};
use krivine_lab_core::types::{
    is_exact, multiset_size, parse_type, type_aux, type_size, typing_as_type, TypeExpr, TypeMultiset,
};
use krivine_lab_core::typing::is_one_typing;
use krivine_lab_core::parse;

use crate::report::trace_rows;

/// Suite names, in the order `verify all` runs them.
pub const SUITES: [&str; 11] = [
    "golden-example",
    "church-numerals",
    "theorem-head",
    "theorem-normal",
    "extraction",
    "qualitative",
    "semantic-bound",
    "predictor",
    "non-idempotency",
    "not-lambda-model",
    "size-function",
];

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    /// Largest closed term in the corpus, in AST nodes.
    pub corpus_size: usize,
    /// Machine fuel for corpus runs.
    pub fuel: usize,
    /// Derivation size up to which divergent terms must be untypable.
    pub bound: usize,
    /// Largest closed normal term used in predictor pairs.
    pub pair_size: usize,
    /// Largest point size the predictor escalates to.
    pub predictor_cap: usize,
    /// Unifiable pairs up to this cost are enumerated directly when
    /// checking the semantic bound.
    pub pair_cost: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            corpus_size: 9,
            fuel: 10_000,
            bound: 20,
            pair_size: 7,
            predictor_cap: 32,
            pair_cost: 10,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub suite: &'static str,
    pub passed: bool,
    pub checked: usize,
    pub summary: String,
    pub failures: Vec<String>,
    pub elapsed: Duration,
}

/// A corpus term with its machine step counts, `None` when out of fuel.
#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub term: Term,
    pub head: Option<usize>,
    pub beta: Option<usize>,
}

/// Predictions and machine runs for one pair `(v)u` in one mode.
#[derive(Clone, Debug)]
pub struct PairRecord {
    pub v: Term,
    pub u: Term,
    pub mode: PredictMode,
    pub prediction: Prediction,
    pub machine: Option<usize>,
}

pub struct Verifier {
    pub config: VerifyConfig,
    corpus: OnceCell<Vec<CorpusEntry>>,
    sweep: OnceCell<Vec<PairRecord>>,
}

impl Verifier {
    pub fn new(config: VerifyConfig) -> Verifier {
        Verifier {
            config,
            corpus: OnceCell::new(),
            sweep: OnceCell::new(),
        }
    }

    pub fn run(&self, suite: &str) -> Option<Outcome> {
        let start = Instant::now();
        let name = *SUITES.iter().find(|s| **s == suite)?;
        let mut c = Checks::default();
        match name {
            "golden-example" => self.golden_example(&mut c),
            "church-numerals" => self.church_numerals(&mut c),
            "theorem-head" => self.theorem(&mut c, MachineKind::Head),
            "theorem-normal" => self.theorem(&mut c, MachineKind::Beta),
            "extraction" => self.extraction(&mut c),
            "qualitative" => self.qualitative(&mut c),
            "semantic-bound" => self.semantic_bound(&mut c),
            "predictor" => self.predictor(&mut c),
            "non-idempotency" => self.non_idempotency(&mut c),
            "not-lambda-model" => self.not_lambda_model(&mut c),
            "size-function" => self.size_function(&mut c),
            _ => unreachable!("listed in SUITES"),
        }
        Some(c.finish(name, start.elapsed()))
    }

    /// All closed terms up to the corpus size, then the named terms not
    /// already present, with their head and β step counts.
    pub fn corpus(&self) -> &[CorpusEntry] {
        self.corpus.get_or_init(|| {
            let mut terms: Vec<(String, Term)> =
                closed_terms(self.config.corpus_size).into_iter().map(|t| (t.to_string(), t)).collect();
            for (name, t) in named_terms().into_iter().chain(extra_divergents()) {
                if t.is_closed() && !terms.iter().any(|(_, s)| alpha_eq(s, &t)) {
                    terms.push((name, t));
                }
            }
            terms
                .into_iter()
                .map(|(name, term)| {
                    let head = steps_within(&term, MachineKind::Head, self.config.fuel);
                    let beta = steps_within(&term, MachineKind::Beta, self.config.fuel);
                    CorpusEntry { name, term, head, beta }
                })
                .collect()
        })
    }

    /// Predictions and machine runs for every pair of closed normal terms up
    /// to the pair size, in both modes.
    pub fn sweep(&self) -> &[PairRecord] {
        self.sweep.get_or_init(|| {
            let normals = closed_normal_terms(self.config.pair_size);
            let mut predictor = Predictor::new(self.config.predictor_cap);
            let mut out = Vec::with_capacity(2 * normals.len() * normals.len());
            for v in &normals {
                for u in &normals {
                    let app = Term::app(v.clone(), u.clone());
                    for (mode, kind) in [(PredictMode::Head, MachineKind::Head), (PredictMode::Beta, MachineKind::Beta)] {
                        let prediction = predictor.predict(v, u, mode, 8).expect("closed normal terms");
                        out.push(PairRecord {
                            v: v.clone(),
                            u: u.clone(),
                            mode,
                            prediction,
                            machine: steps_within(&app, kind, self.config.fuel),
                        });
                    }
                }
            }
            out
        })
    }

    fn golden_example(&self, c: &mut Checks) {
        let t = parse("(\\x.(x)x)\\y.y").expect("well-formed");
        let opts = RunOptions {
            fuel: 20,
            trace: true,
            detect_cycles: false,
        };
        let r = run_with(&t, MachineKind::Head, &opts);
        c.check(r.status == RunStatus::Finished, || format!("status {:?}", r.status));
        c.check(r.steps == 9, || format!("{} steps, expected 9", r.steps));
        let nf = r.normal_form().map(|t| t.to_string());
        c.check(nf.as_deref() == Some("\\y.y"), || format!("final {nf:?}"));
        let rules: Vec<&str> = r.trace.iter().flatten().map(|e| e.rule.name()).collect();
        let expected = [
            "push",
            "bind",
            "push",
            "lookup",
            "bind",
            "lookup",
            "lookup",
            "under-lambda",
            "stuck-var",
        ];
        c.check(rules == expected, || format!("rules {rules:?}"));
        let rows = trace_rows(&r);
        let row8 = rows.get(8).map(|r| (r.output.as_str(), r.subterm.as_str(), r.env.as_str(), r.stack.as_str()));
        c.check(row8 == Some(("\\y.", "y", "∅", "ε")), || format!("row 8 {row8:?}"));
        let row9 = rows.get(9).map(|r| r.output.as_str());
        c.check(row9 == Some("\\y.y"), || format!("row 9 {row9:?}"));
        let time = fastest(5, || {
            run(&t, MachineKind::Head, 20);
        });
        c.check(time < Duration::from_millis(1), || format!("run took {time:?}"));
        c.note(format!("9 steps, final \\y.y, run in {time:?}"));
    }

    fn church_numerals(&self, c: &mut Checks) {
        let time = fastest(3, || {
            for n in 1..=6 {
                run(&Term::app(church(n), identity()), MachineKind::Head, 1000);
            }
        });
        for n in 1..=6 {
            let got = steps_within(&Term::app(church(n), identity()), MachineKind::Head, 1000);
            c.check(got == Some(4 * (n + 1)), || format!("n={n}: {got:?}, expected {}", 4 * (n + 1)));
        }
        c.check(time < Duration::from_millis(10), || format!("runs took {time:?}"));
        c.note(format!("l_h((n)I) = 4(n+1) for n = 1..6, runs in {time:?}"));
    }

    /// The least derivation size equals the step count: found at the step
    /// count, exhausted one below.
    fn theorem(&self, c: &mut Checks, kind: MachineKind) {
        let exact = kind == MachineKind::Beta;
        let mut table = DerivationTable::new();
        let mut terms = 0;
        for e in self.corpus() {
            let Some(l) = (if exact { e.beta } else { e.head }) else { continue };
            terms += 1;
            let at = table.min_derivation_size(&e.term, l, exact);
            c.check(at.size() == Some(l), || format!("{}: bound {l} gave {}", e.name, describe(&at)));
            let below = table.min_derivation_size(&e.term, l - 1, exact);
            c.check(matches!(below, SearchResult::Exhausted { bound, .. } if bound == l - 1), || {
                format!("{}: bound {} gave {}", e.name, l - 1, describe(&below))
            });
        }
        c.note(format!("{terms} terms stop within fuel {}", self.config.fuel));
    }

    fn extraction(&self, c: &mut Checks) {
        let fuel = self.config.fuel;
        for e in self.corpus() {
            match (e.head, extract_derivation_head(&e.term, fuel + 1)) {
                (Some(l), Some(x)) => {
                    c.check(x.size() == l, || format!("{} head: size {} != {l} steps", e.name, x.size()));
                    c.check_ok(check_derivation(&x.derivation, &x.term), &e.name);
                    c.check_ok(check_state_derivation(&x.state, &State::initial(x.term.clone())).map(|_| ()), &e.name);
                }
                (None, None) => {}
                (l, x) => c.fail(format!("{} head: machine {l:?}, extraction {:?}", e.name, x.map(|x| x.size()))),
            }
            match (e.beta, extract_derivation_beta(&e.term, fuel + 1)) {
                (Some(l), Some(x)) => {
                    c.check(x.size() == l, || format!("{} beta: size {} != {l} steps", e.name, x.size()));
                    c.check_ok(check_derivation(&x.derivation, &x.term), &e.name);
                    let nf = run(&e.term, MachineKind::Beta, fuel).normal_form().expect("finished before");
                    let one = is_one_typing(&nf, &x.derivation.ctx, &x.derivation.ty);
                    c.check(one == Ok(true), || {
                        format!("{} beta: {} is not a 1-typing of {nf}", e.name, x.derivation.ty)
                    });
                }
                (None, None) => {}
                (l, x) => c.fail(format!("{} beta: machine {l:?}, extraction {:?}", e.name, x.map(|x| x.size()))),
            }
        }
        c.note(format!("{} terms", self.corpus().len()));
    }

    fn qualitative(&self, c: &mut Checks) {
        let bound = self.config.bound;
        let mut table = DerivationTable::new();
        let mut divergent = Vec::new();
        for e in self.corpus() {
            match e.head {
                Some(l) => {
                    let r = table.min_derivation_size(&e.term, l, false);
                    c.check(r.size().is_some(), || format!("{}: untypable up to {l}", e.name));
                }
                None => {
                    divergent.push((e.name.clone(), e.term.clone()));
                    let r = table.min_derivation_size(&e.term, bound, false);
                    c.check(matches!(r, SearchResult::Exhausted { .. }), || {
                        format!("{}: diverges but {}", e.name, describe(&r))
                    });
                }
            }
        }
        for (name, t) in extra_divergents().into_iter().chain([("Omega".to_string(), omega())]) {
            c.check(divergent.iter().any(|(_, d)| alpha_eq(d, &t)), || {
                format!("{name} is not among the divergent terms")
            });
        }
        let names: Vec<String> = divergent.into_iter().map(|(n, _)| n).collect();
        c.note(format!(
            "{} divergent terms untypable up to {bound}: {}",
            names.len(),
            abbreviate(&names, 6)
        ));
    }

    fn semantic_bound(&self, c: &mut Checks) {
        let max_cost = self.config.pair_cost;
        let mut pairs = 0;
        // Predictor witnesses.
        for r in self.sweep() {
            let Some(w) = &r.prediction.witness else { continue };
            pairs += 1;
            let point = w.unifier.apply(&w.point);
            check_bound(c, r, &point);
        }
        // Every unifiable pair up to `max_cost`, enumerated directly.
        let normals = closed_normal_terms(self.config.pair_size);
        let points: Vec<Vec<TypeExpr>> = normals
            .iter()
            .map(|t| ground_points(t, max_cost).expect("closed normal"))
            .collect();
        let records = self.sweep();
        let mut idx = 0;
        for (i, _) in normals.iter().enumerate() {
            for (j, _) in normals.iter().enumerate() {
                for _ in 0..2 {
                    let r = &records[idx];
                    idx += 1;
                    for point in unifiable_points(&points[i], &points[j], r.mode, max_cost) {
                        pairs += 1;
                        check_bound(c, r, &point);
                    }
                }
            }
        }
        c.note(format!(
            "{pairs} unifiable pairs over {} term pairs, both machines",
            normals.len() * normals.len()
        ));
    }

    fn predictor(&self, c: &mut Checks) {
        let mut predictor = Predictor::new(self.config.predictor_cap);
        let p = predictor.predict(&delta(), &identity(), PredictMode::Head, 16).expect("normal");
        let sizes = p.witness.as_ref().map(|w| (type_size(&w.point), multiset_size(&w.args)));
        c.check(p.steps == Some(9), || format!("delta I: {:?}", p.steps));
        c.check(sizes == Some((4, 4)), || format!("delta I witness sizes {sizes:?}"));
        for n in 1..=3 {
            let p = predictor.predict(&church(n), &identity(), PredictMode::Head, 16).expect("normal");
            c.check(p.steps == Some(4 * (n + 1)), || format!("church{n} I: {:?}", p.steps));
        }
        let mut agree = 0;
        let mut beyond = 0;
        for r in self.sweep() {
            match (r.prediction.steps, r.machine) {
                (Some(k), Some(l)) => {
                    agree += usize::from(k == l);
                    c.check(k == l, || format!("{}: predicted {k}, machine {l}", pair_name(r)));
                }
                (None, Some(l)) => {
                    // No pair up to the searched cost, so the run must be longer.
                    beyond += 1;
                    c.check(l > r.prediction.searched_up_to, || {
                        format!(
                            "{}: nothing up to {}, machine {l}",
                            pair_name(r),
                            r.prediction.searched_up_to
                        )
                    });
                }
                (Some(k), None) => c.fail(format!("{}: predicted {k}, machine out of fuel", pair_name(r))),
                (None, None) => {}
            }
        }
        c.note(format!(
            "{agree} exact agreements, {beyond} runs beyond cap {}",
            self.config.predictor_cap
        ));
    }

    fn non_idempotency(&self, c: &mut Checks) {
        let t = parse("\\z.\\x.(z)x").expect("well-formed");
        let ty = |s: &str| parse_type(s).expect("well-formed");
        for s in ["([([γ0], γ0)], ([γ0], γ0))", "([([γ0, γ0], γ0)], ([γ0, γ0], γ0))"] {
            let d = derivation_for_point(&t, &ty(s), 10);
            c.check(d.is_some(), || format!("no derivation of {s}"));
            if let Some(d) = d {
                c.check_ok(check_derivation(&d, &t), s);
            }
        }
        let mixed = "([([γ0], γ0)], ([γ0, γ0], γ0))";
        let d = derivation_for_point(&t, &ty(mixed), 10);
        c.check(d.is_none(), || format!("found a derivation of {mixed}"));
        c.note(format!("{mixed} underivable up to size 10"));
    }

    fn not_lambda_model(&self, c: &mut Checks) {
        let ty = |s: &str| parse_type(s).expect("well-formed");
        let (x, y, z) = (Name::new("x"), Name::new("y"), Name::new("z"));
        let mut rho = SemEnv::new();
        rho.insert(y.clone(), vec![ty("([γ0], γ0)")]);
        rho.insert(z.clone(), vec![ty("([γ0, γ0], γ0)")]);
        let t1 = parse("(y)x").expect("well-formed");
        let t2 = parse("(z)x").expect("well-formed");
        let bound = 8;
        let pool = ["γ0", "γ1", "([γ0], γ0)", "([], γ0)", "([γ1], γ0)"].map(ty);
        for mask in 0..1u32 << pool.len() {
            let d: Vec<TypeExpr> = (0..pool.len()).filter(|i| mask >> i & 1 == 1).map(|i| pool[i].clone()).collect();
            let mut env = rho.clone();
            env.insert(x.clone(), d.clone());
            let s1 = interpret_in_env(&t1, &env, bound);
            let s2 = interpret_in_env(&t2, &env, bound);
            c.check(s1.same_points(&s2), || format!("d = {d:?}: {s1} vs {s2}"));
        }
        let a1 = interpret_in_env(&Term::abs("x", t1), &rho, bound);
        let a2 = interpret_in_env(&Term::abs("x", t2), &rho, bound);
        c.check(!a1.same_points(&a2), || format!("abstractions agree: {a1}"));
        c.note(format!(
            "{} environments agree; abstractions give {a1} and {a2}",
            1 << pool.len()
        ));
    }

    fn size_function(&self, c: &mut Checks) {
        let gamma = TypeExpr::atom(0);
        c.check(type_size(&gamma) == 1, || "|γ| != 1".into());
        let id = TypeExpr::arrow(TypeMultiset::singleton(gamma.clone()), gamma.clone());
        for n in 0..=5 {
            let t = TypeExpr::arrow(TypeMultiset::new(vec![id.clone(); n]), id.clone());
            c.check(type_size(&t) == 2 * n + 3, || format!("n={n}: |{t}| = {}", type_size(&t)));
        }
        let mut typings = 0;
        for e in self.corpus() {
            let extracted = [
                e.head.and_then(|_| extract_derivation_head(&e.term, self.config.fuel + 1)),
                e.beta.and_then(|_| extract_derivation_beta(&e.term, self.config.fuel + 1)),
            ];
            for x in extracted.into_iter().flatten() {
                each_node(&x.derivation, &mut |d| {
                    typings += 1;
                    let vars: Vec<Name> = d.ctx.domain().cloned().collect();
                    let whole = typing_as_type(&d.ctx, &vars, &d.ty);
                    c.check(type_size(&whole) == type_aux(&whole), || {
                        format!("{}: |{whole}| = {} but aux = {}", e.name, type_size(&whole), type_aux(&whole))
                    });
                });
            }
        }
        c.note(format!("|γ| = 1, 2n+3 for n = 0..5, size = aux on {typings} derived typings"));
    }
}

/// Divergent terms beyond the generated corpus: `Ω3` and `(λx.(x)x x)Ω`.
fn extra_divergents() -> Vec<(String, Term)> {
    let delta3 = parse("\\x.(x)x x").expect("well-formed");
    vec![
        ("Omega3".to_string(), Term::app(delta3.clone(), delta3.clone())),
        ("delta3-Omega".to_string(), Term::app(delta3, omega())),
    ]
}

fn steps_within(t: &Term, kind: MachineKind, fuel: usize) -> Option<usize> {
    let r = run(t, kind, fuel);
    (r.status == RunStatus::Finished).then_some(r.steps)
}

fn check_bound(c: &mut Checks, r: &PairRecord, point: &TypeExpr) {
    let Some(bound) = step_bound(point) else {
        c.fail(format!("{}: {point} is not an arrow", pair_name(r)));
        return;
    };
    c.check(r.machine.is_some_and(|l| l <= bound), || {
        format!("{}: {point} bounds by {bound}, machine {:?}", pair_name(r), r.machine)
    });
}

/// Instances `σ(a, α)` for every `(a, α)` among `vp`, every multiset `a'`
/// of points of `up` (renamed apart) and every most general unifier `σ` of
/// `a` and `a'`, with `|(a, α)| + |a'| + 1 ≤ max_cost`. In β mode `σ(α)`
/// must be exact.
pub fn unifiable_points(vp: &[TypeExpr], up: &[TypeExpr], mode: PredictMode, max_cost: usize) -> Vec<TypeExpr> {
    let mut out = Vec::new();
    for p in vp {
        let Some(arrow) = p.as_arrow() else { continue };
        let Some(rem) = max_cost.checked_sub(type_size(p) + 1) else { continue };
        let mut picks = Vec::new();
        multisets(up, arrow.arg.len(), 0, rem, &mut Vec::new(), &mut picks);
        for pick in picks {
            let mut offset = p.max_atom().map_or(0, |m| m + 1);
            let args: TypeMultiset = pick
                .iter()
                .map(|q| {
                    let q = q.shift_atoms(offset);
                    offset = q.max_atom().map_or(offset, |m| m + 1);
                    q
                })
                .collect();
            for sigma in unify_multisets(&arrow.arg, &args) {
                if mode == PredictMode::Beta && !is_exact(&sigma.apply(&arrow.res)) {
                    continue;
                }
                out.push(sigma.apply(p));
            }
        }
    }
    out
}

// Multisets of `n` elements of `pool` (nondecreasing indices) with total
// size at most `rem`.
fn multisets<'a>(
    pool: &'a [TypeExpr],
    n: usize,
    start: usize,
    rem: usize,
    cur: &mut Vec<&'a TypeExpr>,
    out: &mut Vec<Vec<&'a TypeExpr>>,
) {
    if cur.len() == n {
        out.push(cur.clone());
        return;
    }
    for (i, q) in pool.iter().enumerate().skip(start) {
        let s = type_size(q);
        if s <= rem {
            cur.push(q);
            multisets(pool, n, i, rem - s, cur, out);
            cur.pop();
        }
    }
}

fn each_node(d: &Derivation, f: &mut dyn FnMut(&Derivation)) {
    f(d);
    match &d.rule {
        Inference::Axiom(_) => {}
        Inference::Abs(_, p) => each_node(p, f),
        Inference::App { fun, args, .. } => {
            each_node(fun, f);
            for a in args {
                each_node(a, f);
            }
        }
    }
}

fn pair_name(r: &PairRecord) -> String {
    let mode = match r.mode {
        PredictMode::Head => "head",
        PredictMode::Beta => "beta",
    };
    format!("({})({}) [{mode}]", r.v, r.u)
}

fn describe(r: &SearchResult) -> String {
    match r {
        SearchResult::Found { size, .. } => format!("found size {size}"),
        SearchResult::Exhausted { bound, .. } => format!("exhausted up to {bound}"),
        SearchResult::GaveUp { size_reached, .. } => format!("gave up at {size_reached}"),
    }
}

fn abbreviate(names: &[String], keep: usize) -> String {
    let mut s = names.iter().take(keep).cloned().collect::<Vec<_>>().join(", ");
    if names.len() > keep {
        s.push_str(&format!(", … ({} more)", names.len() - keep));
    }
    s
}

fn fastest(reps: usize, mut f: impl FnMut()) -> Duration {
    (0..reps)
        .map(|_| {
            let start = Instant::now();
            f();
            start.elapsed()
        })
        .min()
        .unwrap_or_default()
}

/// Failures are capped so a broken build does not flood the output.
const MAX_FAILURES: usize = 20;

#[derive(Default)]
struct Checks {
    checked: usize,
    failed: usize,
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Checks {
    fn check(&mut self, ok: bool, why: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.record(why());
        }
    }

    fn check_ok<E: std::fmt::Display>(&mut self, r: Result<(), E>, what: &str) {
        self.checked += 1;
        if let Err(e) = r {
            self.record(format!("{what}: {e}"));
        }
    }

    fn fail(&mut self, why: String) {
        self.checked += 1;
        self.record(why);
    }

    fn record(&mut self, why: String) {
        self.failed += 1;
        if self.failures.len() < MAX_FAILURES {
            self.failures.push(why);
        }
    }

    fn note(&mut self, s: String) {
        self.notes.push(s);
    }

    fn finish(self, suite: &'static str, elapsed: Duration) -> Outcome {
        let mut summary = self.notes.join("; ");
        if self.failed > 0 {
            summary = format!("{} of {} checks failed; {summary}", self.failed, self.checked);
        }
        Outcome {
            suite,
            passed: self.failed == 0,
            checked: self.checked,
            summary,
            failures: self.failures,
            elapsed,
        }
    }
}

/// The outcomes as a table keyed by suite name.
pub fn outcome_table(outcomes: &[Outcome]) -> String {
    let width = outcomes.iter().map(|o| o.suite.len()).max().unwrap_or(0);
    let mut out = String::new();
    for o in outcomes {
        out.push_str(&format!(
            "{:<width$}  {}  {:>7} checks  {:>8.2?}  {}\n",
            o.suite,
            if o.passed { "PASS" } else { "FAIL" },
            o.checked,
            o.elapsed,
            o.summary
        ));
        for f in &o.failures {
            out.push_str(&format!("{:<width$}        - {f}\n", ""));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumerated_pairs_for_delta_identity() {
        let v = ground_points(&delta(), 8).unwrap();
        let u = ground_points(&identity(), 8).unwrap();
        let points = unifiable_points(&v, &u, PredictMode::Head, 9);
        assert!(!points.is_empty());
        assert!(points.iter().all(|p| step_bound(p).is_some_and(|b| b >= 9)));
        assert!(unifiable_points(&v, &u, PredictMode::Head, 8).is_empty());
    }

    #[test]
    fn unknown_suite() {
        assert!(Verifier::new(VerifyConfig::default()).run("nope").is_none());
    }
}
