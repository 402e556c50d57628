//! Krivine machines: the state machine on closures and stacks, the head
//! machine that goes under abstractions, and the β machine that also
//! descends into the arguments of a stuck variable.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::term::{ensure_variable_convention, fresh_name_where, nameless, Name, Term};

/// A persistent environment: a finite map from variables to closures.
#[derive(Clone, Default)]
pub struct Env(Option<Arc<EnvNode>>);

struct EnvNode {
    name: Name,
    closure: Closure,
    next: Env,
}

impl Env {
    pub fn empty() -> Env {
        Env(None)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_none()
    }

    /// `{(x, c)} ∪ self`
    pub fn bind(&self, x: Name, c: Closure) -> Env {
        Env(Some(Arc::new(EnvNode {
            name: x,
            closure: c,
            next: self.clone(),
        })))
    }

    pub fn lookup(&self, x: &Name) -> Option<&Closure> {
        self.iter().find(|(y, _)| *y == x).map(|(_, c)| c)
    }

    /// Bindings, most recent first.
    pub fn iter(&self) -> EnvIter<'_> {
        EnvIter(self.0.as_deref())
    }

    pub fn len(&self) -> usize {
        self.iter().count()
    }

    /// Nesting depth: 0 for the empty environment, otherwise one more than
    /// the deepest environment of a bound closure.
    pub fn depth(&self) -> usize {
        if self.is_empty() {
            return 0;
        }
        1 + self.iter().map(|(_, c)| c.env.depth()).max().unwrap_or(0)
    }
}

pub struct EnvIter<'a>(Option<&'a EnvNode>);

impl<'a> Iterator for EnvIter<'a> {
    type Item = (&'a Name, &'a Closure);
    fn next(&mut self) -> Option<Self::Item> {
        let node = self.0?;
        self.0 = node.next.0.as_deref();
        Some((&node.name, &node.closure))
    }
}

#[derive(Clone)]
pub struct Closure {
    pub term: Term,
    pub env: Env,
}

impl Closure {
    pub fn new(term: Term, env: Env) -> Closure {
        Closure { term, env }
    }

    pub fn closed(term: Term) -> Closure {
        Closure { term, env: Env::empty() }
    }

    /// The λ-term obtained by substituting, recursively, the realized
    /// closures of the environment for the free variables of the term.
    pub fn realize(&self) -> Term {
        let mut map = BTreeMap::new();
        for x in self.term.free_vars() {
            if let Some(c) = self.env.lookup(&x) {
                map.insert(x, c.realize());
            }
        }
        self.term.subst_many(&map)
    }
}

/// A closure applied to a stack of closures.
#[derive(Clone)]
pub struct State {
    pub head: Closure,
    // Top of the stack is the last element.
    rev_stack: Vec<Closure>,
}

impl State {
    /// `head · stack[0] · stack[1] · … · ε`
    pub fn new(head: Closure, stack: Vec<Closure>) -> State {
        let mut rev_stack = stack;
        rev_stack.reverse();
        State { head, rev_stack }
    }

    pub fn initial(t: Term) -> State {
        State::new(Closure::closed(t), Vec::new())
    }

    /// Stack elements, top first.
    pub fn stack(&self) -> impl DoubleEndedIterator<Item = &Closure> + ExactSizeIterator {
        self.rev_stack.iter().rev()
    }

    pub fn stack_len(&self) -> usize {
        self.rev_stack.len()
    }

    pub fn realize(&self) -> Term {
        Term::apps(self.head.realize(), self.stack().map(Closure::realize))
    }
}

/// Outcome of inspecting a state.
pub enum StateStep {
    Next(State, Rule),
    /// The head is a variable not bound in its environment.
    StuckVar,
    /// The head is an abstraction and the stack is empty.
    StuckAbs,
}

/// One step of the state machine.
pub fn state_transition(s: &State) -> StateStep {
    let Closure { term, env } = &s.head;
    match term {
        Term::Var(x) => match env.lookup(x) {
            Some(c) => StateStep::Next(
                State {
                    head: c.clone(),
                    rev_stack: s.rev_stack.clone(),
                },
                Rule::Lookup,
            ),
            None => StateStep::StuckVar,
        },
        Term::App(v, u) => {
            let mut rev_stack = s.rev_stack.clone();
            rev_stack.push(Closure::new((**u).clone(), env.clone()));
            StateStep::Next(
                State {
                    head: Closure::new((**v).clone(), env.clone()),
                    rev_stack,
                },
                Rule::Push,
            )
        }
        Term::Abs(x, u) => {
            let mut rev_stack = s.rev_stack.clone();
            match rev_stack.pop() {
                Some(c) => StateStep::Next(
                    State {
                        head: Closure::new((**u).clone(), env.bind(x.clone(), c)),
                        rev_stack,
                    },
                    Rule::Bind,
                ),
                None => StateStep::StuckAbs,
            }
        }
    }
}

/// One step of the state machine, or `None` when the state is stuck.
pub fn step_state(s: &State) -> Option<State> {
    match state_transition(s) {
        StateStep::Next(s2, _) => Some(s2),
        _ => None,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    Lookup,
    StuckVar,
    Bind,
    Push,
    UnderLambda,
    ArgDescent,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::Lookup => "lookup",
            Rule::StuckVar => "stuck-var",
            Rule::Bind => "bind",
            Rule::Push => "push",
            Rule::UnderLambda => "under-lambda",
            Rule::ArgDescent => "arg-descent",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MachineKind {
    Head,
    Beta,
}

/// A machine configuration: states, partially built output, or both.
#[derive(Clone)]
pub enum KForm {
    State(State),
    /// A λ-term already produced as output.
    Term(Term),
    Var(Name),
    App(Box<KForm>, Box<KForm>),
    Abs(Name, Box<KForm>),
}

impl KForm {
    pub fn initial(t: Term) -> KForm {
        KForm::State(State::initial(t))
    }

    pub fn realize(&self) -> Term {
        match self {
            KForm::State(s) => s.realize(),
            KForm::Term(t) => t.clone(),
            KForm::Var(x) => Term::Var(x.clone()),
            KForm::App(f, a) => Term::app(f.realize(), a.realize()),
            KForm::Abs(x, b) => Term::Abs(x.clone(), Arc::new(b.realize())),
        }
    }

    /// Whether no state remains inside.
    pub fn is_output(&self) -> bool {
        match self {
            KForm::State(_) => false,
            KForm::Term(_) | KForm::Var(_) => true,
            KForm::App(f, a) => f.is_output() && a.is_output(),
            KForm::Abs(_, b) => b.is_output(),
        }
    }

    fn collect_names(&self, out: &mut BTreeSet<Name>) {
        fn closure_names(c: &Closure, out: &mut BTreeSet<Name>) {
            c.term.collect_names(out);
            for (x, d) in c.env.iter() {
                out.insert(x.clone());
                closure_names(d, out);
            }
        }
        match self {
            KForm::State(s) => {
                closure_names(&s.head, out);
                for c in s.stack() {
                    closure_names(c, out);
                }
            }
            KForm::Term(t) => t.collect_names(out),
            KForm::Var(x) => {
                out.insert(x.clone());
            }
            KForm::App(f, a) => {
                f.collect_names(out);
                a.collect_names(out);
            }
            KForm::Abs(x, b) => {
                out.insert(x.clone());
                b.collect_names(out);
            }
        }
    }
}

/// A stepper for one run. `taken` holds the names of the source term, which
/// fresh output binders must avoid.
struct Stepper {
    kind: MachineKind,
    taken: BTreeSet<Name>,
}

impl Stepper {
    fn step(&self, k: &KForm, scope: &mut Vec<Name>) -> Option<(KForm, Rule)> {
        match k {
            KForm::State(s) => Some(self.step_at_state(s, scope)),
            KForm::Term(_) | KForm::Var(_) => None,
            KForm::Abs(x, b) => {
                scope.push(x.clone());
                let r = self.step(b, scope);
                scope.pop();
                r.map(|(b2, rule)| (KForm::Abs(x.clone(), Box::new(b2)), rule))
            }
            KForm::App(f, a) => {
                if let Some((f2, rule)) = self.step(f, scope) {
                    return Some((KForm::App(Box::new(f2), a.clone()), rule));
                }
                self.step(a, scope).map(|(a2, rule)| (KForm::App(f.clone(), Box::new(a2)), rule))
            }
        }
    }

    fn step_at_state(&self, s: &State, scope: &[Name]) -> (KForm, Rule) {
        match state_transition(s) {
            StateStep::Next(s2, rule) => (KForm::State(s2), rule),
            StateStep::StuckVar => {
                let Term::Var(x) = &s.head.term else { unreachable!() };
                let mut out = KForm::Var(x.clone());
                let q = s.stack_len();
                for c in s.stack() {
                    let arg = match self.kind {
                        MachineKind::Head => KForm::Term(c.realize()),
                        MachineKind::Beta => KForm::State(State::new(c.clone(), Vec::new())),
                    };
                    out = KForm::App(Box::new(out), Box::new(arg));
                }
                let rule = if self.kind == MachineKind::Beta && q > 0 {
                    Rule::ArgDescent
                } else {
                    Rule::StuckVar
                };
                (out, rule)
            }
            StateStep::StuckAbs => {
                let Term::Abs(x, u) = &s.head.term else { unreachable!() };
                // The output binder must not shadow an enclosing output binder
                // that closures in the environment may still refer to.
                let (y, body) = if scope.contains(x) {
                    let y = fresh_name_where(x, |n| self.taken.contains(n) || scope.contains(n));
                    let body = u.rename_free(x, &y);
                    (y, body)
                } else {
                    (x.clone(), (**u).clone())
                };
                let inner = State::new(Closure::new(body, s.head.env.clone()), Vec::new());
                (KForm::Abs(y, Box::new(KForm::State(inner))), Rule::UnderLambda)
            }
        }
    }
}

fn stepper_for(k: &KForm, kind: MachineKind) -> Stepper {
    let mut taken = BTreeSet::new();
    k.collect_names(&mut taken);
    Stepper { kind, taken }
}

/// One step of the head machine, or `None` when `k` is final.
pub fn step_h(k: &KForm) -> Option<KForm> {
    stepper_for(k, MachineKind::Head).step(k, &mut Vec::new()).map(|(k2, _)| k2)
}

/// One step of the β machine, or `None` when `k` is final.
pub fn step_beta(k: &KForm) -> Option<KForm> {
    stepper_for(k, MachineKind::Beta).step(k, &mut Vec::new()).map(|(k2, _)| k2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RunStatus {
    Finished,
    FuelExhausted,
    /// The realized term repeated after a contraction, so the run cannot end.
    Diverges,
}

#[derive(Clone)]
pub struct TraceEntry {
    /// 1-based step index.
    pub index: usize,
    pub rule: Rule,
    /// The configuration after the step.
    pub form: KForm,
}

#[derive(Clone)]
pub struct RunReport {
    pub initial: KForm,
    pub final_form: KForm,
    pub steps: usize,
    pub status: RunStatus,
    pub trace: Option<Vec<TraceEntry>>,
}

impl RunReport {
    /// The output term when the run finished.
    pub fn normal_form(&self) -> Option<Term> {
        (self.status == RunStatus::Finished).then(|| self.final_form.realize())
    }
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub fuel: usize,
    pub trace: bool,
    /// Compare realized terms after each contraction and stop with
    /// [`RunStatus::Diverges`] on a repeat.
    pub detect_cycles: bool,
}

impl RunOptions {
    pub fn fuel(fuel: usize) -> RunOptions {
        RunOptions {
            fuel,
            trace: false,
            detect_cycles: false,
        }
    }
}

/// Runs a machine from `(t, ∅) · ε`, renaming binders of `t` apart first.
pub fn run(t: &Term, kind: MachineKind, fuel: usize) -> RunReport {
    run_with(t, kind, &RunOptions::fuel(fuel))
}

pub fn run_with(t: &Term, kind: MachineKind, opts: &RunOptions) -> RunReport {
    let initial = KForm::initial(ensure_variable_convention(t));
    let stepper = stepper_for(&initial, kind);
    let mut cur = initial.clone();
    let mut steps = 0;
    let mut trace = opts.trace.then(Vec::new);
    let mut seen = BTreeSet::new();
    if opts.detect_cycles {
        seen.insert(nameless(&cur.realize()));
    }
    let status = loop {
        if steps == opts.fuel {
            break if stepper.step(&cur, &mut Vec::new()).is_some() {
                RunStatus::FuelExhausted
            } else {
                RunStatus::Finished
            };
        }
        let Some((next, rule)) = stepper.step(&cur, &mut Vec::new()) else {
            break RunStatus::Finished;
        };
        steps += 1;
        cur = next;
        if let Some(tr) = trace.as_mut() {
            tr.push(TraceEntry {
                index: steps,
                rule,
                form: cur.clone(),
            });
        }
        if opts.detect_cycles && rule == Rule::Bind && !seen.insert(nameless(&cur.realize())) {
            break RunStatus::Diverges;
        }
    };
    RunReport {
        initial,
        final_form: cur,
        steps,
        status,
        trace,
    }
}

/// The number of steps to the final configuration, if reached within `fuel`.
pub fn steps(t: &Term, kind: MachineKind, fuel: usize) -> Option<usize> {
    let r = run(t, kind, fuel);
    (r.status == RunStatus::Finished).then_some(r.steps)
}

impl fmt::Display for Env {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("∅");
        }
        f.write_str("{")?;
        for (i, (x, c)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x} ↦ {c}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Display for Closure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.term, self.env)
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.head)?;
        for c in self.stack() {
            write!(f, " · {c}")?;
        }
        f.write_str(" · ε")
    }
}

impl fmt::Display for KForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KForm::State(s) => write!(f, "⟨{s}⟩"),
            KForm::Term(t) => write!(f, "{t}"),
            KForm::Var(x) => write!(f, "{x}"),
            KForm::App(g, a) => write!(f, "({g}){a}"),
            KForm::Abs(x, b) => write!(f, "\\{x}.{b}"),
        }
    }
}
