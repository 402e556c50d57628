//! Derivations read off machine runs.
//!
//! Each machine step becomes one rule instance, so the extracted derivation
//! has exactly as many nodes as the run has steps. The construction follows
//! the run backwards: the derivation of a state is built from the
//! derivation of its successor.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::derivation::{ClosureDerivation, Derivation, StateDerivation};
use crate::machine::{Closure, MachineKind, State};
use crate::term::{ensure_variable_convention, Name, Term};
use crate::types::{TypeExpr, TypeMultiset};

/// A derivation extracted from a complete machine run.
#[derive(Clone, Debug)]
pub struct Extraction {
    /// The term after renaming binders apart; the derivation is for this term.
    pub term: Term,
    pub state: StateDerivation,
    pub derivation: Derivation,
}

impl Extraction {
    pub fn size(&self) -> usize {
        self.derivation.size()
    }
}

/// Derivation of size `l_h(t)`, or `None` if the head machine does not stop
/// within `fuel` steps.
pub fn extract_derivation_head(t: &Term, fuel: usize) -> Option<Extraction> {
    extract(t, MachineKind::Head, fuel)
}

/// Derivation of size `l_β(t)` whose typing is a 1-typing of the normal
/// form, or `None` if the β machine does not stop within `fuel` steps.
pub fn extract_derivation_beta(t: &Term, fuel: usize) -> Option<Extraction> {
    extract(t, MachineKind::Beta, fuel)
}

fn extract(t: &Term, kind: MachineKind, fuel: usize) -> Option<Extraction> {
    let term = ensure_variable_convention(t);
    let mut ex = Extractor { kind, next: 0, fuel };
    let state = ex.state(&State::initial(term.clone()))?;
    let derivation = state.head.root.clone();
    Some(Extraction {
        term,
        state,
        derivation,
    })
}

/// Extracts a state derivation for an arbitrary state whose run stops
/// within `fuel` steps.
pub fn extract_state_derivation(s: &State, kind: MachineKind, fuel: usize) -> Option<StateDerivation> {
    Extractor { kind, next: 0, fuel }.state(s)
}

struct Extractor {
    kind: MachineKind,
    next: u32,
    fuel: usize,
}

/// How to turn the derivation of a successor state into the derivation of
/// the state that stepped to it.
enum Frame {
    Lookup(Name),
    Push(Term),
    Bind(Name),
    UnderLambda(Name),
    /// β machine: the arguments of a stuck variable, run one after another.
    Args {
        x: Name,
        args: Vec<Closure>,
        done: Vec<ClosureDerivation>,
    },
}

impl Extractor {
    fn fresh(&mut self) -> TypeExpr {
        let a = TypeExpr::atom(self.next);
        self.next += 1;
        a
    }

    // Runs the machine forwards, recording frames, and builds derivations
    // on the way back. Iterative, since runs can be long.
    fn state(&mut self, s: &State) -> Option<StateDerivation> {
        let mut frames: Vec<Frame> = Vec::new();
        let mut cur = s.clone();
        loop {
            self.fuel = self.fuel.checked_sub(1)?;
            let Closure { term, env } = &cur.head;
            let stack: Vec<Closure> = cur.stack().cloned().collect();
            let mut result = match term {
                Term::Var(x) => match env.lookup(x) {
                    Some(c) => {
                        frames.push(Frame::Lookup(x.clone()));
                        cur = State::new(c.clone(), stack);
                        continue;
                    }
                    None => match self.kind {
                        MachineKind::Head => {
                            let gamma = self.fresh();
                            let ty = TypeExpr::curried(stack.iter().map(|_| TypeMultiset::empty()), gamma);
                            StateDerivation {
                                head: ClosureDerivation::plain(Derivation::axiom(x.clone(), ty)),
                                stack: vec![Vec::new(); stack.len()],
                            }
                        }
                        MachineKind::Beta if stack.is_empty() => {
                            let gamma = self.fresh();
                            StateDerivation {
                                head: ClosureDerivation::plain(Derivation::axiom(x.clone(), gamma)),
                                stack: Vec::new(),
                            }
                        }
                        MachineKind::Beta => {
                            let first = stack[0].clone();
                            frames.push(Frame::Args {
                                x: x.clone(),
                                args: stack,
                                done: Vec::new(),
                            });
                            cur = State::new(first, Vec::new());
                            continue;
                        }
                    },
                },
                Term::App(v, u) => {
                    let mut pushed = vec![Closure::new((**u).clone(), env.clone())];
                    pushed.extend(stack);
                    frames.push(Frame::Push((**u).clone()));
                    cur = State::new(Closure::new((**v).clone(), env.clone()), pushed);
                    continue;
                }
                Term::Abs(x, u) => {
                    if let Some((c, rest)) = stack.split_first() {
                        frames.push(Frame::Bind(x.clone()));
                        cur = State::new(Closure::new((**u).clone(), env.bind(x.clone(), c.clone())), rest.to_vec());
                    } else {
                        frames.push(Frame::UnderLambda(x.clone()));
                        cur = State::new(Closure::new((**u).clone(), env.clone()), Vec::new());
                    }
                    continue;
                }
            };
            // Unwind until a pending argument needs running, or the start is reached.
            loop {
                let Some(frame) = frames.pop() else { return Some(result) };
                match frame {
                    Frame::Args { x, args, mut done } => {
                        done.push(result.head);
                        if done.len() < args.len() {
                            cur = State::new(args[done.len()].clone(), Vec::new());
                            frames.push(Frame::Args { x, args, done });
                            break;
                        }
                        let gamma = self.fresh();
                        let ty = TypeExpr::curried(done.iter().map(|d| TypeMultiset::singleton(d.ty().clone())), gamma);
                        result = StateDerivation {
                            head: ClosureDerivation::plain(Derivation::axiom(x, ty)),
                            stack: done.into_iter().map(|d| vec![d]).collect(),
                        };
                    }
                    other => result = wrap(other, result),
                }
            }
        }
    }
}

fn wrap(frame: Frame, next: StateDerivation) -> StateDerivation {
    match frame {
        Frame::Lookup(x) => {
            let root = Derivation::axiom(x.clone(), next.head.ty().clone());
            let mut env = BTreeMap::new();
            env.insert(x, vec![next.head]);
            StateDerivation {
                head: ClosureDerivation { root, env },
                stack: next.stack,
            }
        }
        Frame::Push(u) => {
            let mut rest = next.stack.into_iter();
            let arg_ds = rest.next().expect("pushed closure present");
            let fun = next.head;
            let mut env_ds = fun.env;
            for d in &arg_ds {
                merge_env(&mut env_ds, &d.env);
            }
            let root = Derivation::app(fun.root, u, arg_ds.into_iter().map(|d| d.root).collect())
                .expect("successor derivation is consistent");
            StateDerivation {
                head: ClosureDerivation { root, env: env_ds },
                stack: rest.collect(),
            }
        }
        Frame::Bind(x) => {
            let mut env_ds = next.head.env;
            let bound = env_ds.remove(&x).unwrap_or_default();
            let root = Derivation::abs(x, next.head.root);
            let mut stack = vec![bound];
            stack.extend(next.stack);
            StateDerivation {
                head: ClosureDerivation { root, env: env_ds },
                stack,
            }
        }
        Frame::UnderLambda(x) => StateDerivation {
            head: ClosureDerivation {
                root: Derivation::abs(x, next.head.root),
                env: next.head.env,
            },
            stack: Vec::new(),
        },
        Frame::Args { .. } => unreachable!("handled by the caller"),
    }
}

fn merge_env(into: &mut BTreeMap<Name, Vec<ClosureDerivation>>, from: &BTreeMap<Name, Vec<ClosureDerivation>>) {
    for (x, ds) in from {
        into.entry(x.clone()).or_default().extend(ds.iter().cloned());
    }
}
