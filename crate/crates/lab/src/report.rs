//! Text and JSON renderings of runs, derivations, interpretations and
//! predictions.

use serde::Serialize;

use krivine_lab_core::derivation::{Derivation, Inference};
use krivine_lab_core::machine::{Closure, KForm, MachineKind, RunReport, RunStatus, State};
use krivine_lab_core::semantics::{Prediction, PredictionWitness, SemSet};
use krivine_lab_core::types::{type_size, Context, TypeExpr, TypeMultiset};

/// Marks the position of the running state in the output column.
const HOLE: &str = "□";

pub fn machine_name(kind: MachineKind) -> &'static str {
    match kind {
        MachineKind::Head => "head",
        MachineKind::Beta => "beta",
    }
}

pub fn status_name(status: RunStatus) -> &'static str {
    match status {
        RunStatus::Finished => "finished",
        RunStatus::FuelExhausted => "fuel_exhausted",
        RunStatus::Diverges => "diverges",
    }
}

/// One row of the trace table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceRow {
    pub step: usize,
    /// The output built so far, with the running state as a hole. A hole at
    /// the very end is left out.
    pub output: String,
    pub subterm: String,
    pub env: String,
    pub stack: String,
}

impl TraceRow {
    pub fn of(step: usize, k: &KForm) -> TraceRow {
        match active_state(k) {
            Some(s) => {
                let mut output = String::new();
                render_context(k, &mut output, &mut false);
                if let Some(stripped) = output.strip_suffix(HOLE) {
                    output.truncate(stripped.len());
                }
                let stack: Vec<String> = s.stack().map(Closure::to_string).collect();
                TraceRow {
                    step,
                    output,
                    subterm: s.head.term.to_string(),
                    env: s.head.env.to_string(),
                    stack: if stack.is_empty() { "ε".into() } else { stack.join(" · ") },
                }
            }
            None => TraceRow {
                step,
                output: k.realize().to_string(),
                subterm: String::new(),
                env: String::new(),
                stack: String::new(),
            },
        }
    }
}

/// The state the machines step next: leftmost, looking into an argument
/// only once the function part is finished.
pub fn active_state(k: &KForm) -> Option<&State> {
    match k {
        KForm::State(s) => Some(s),
        KForm::Term(_) | KForm::Var(_) => None,
        KForm::Abs(_, b) => active_state(b),
        KForm::App(f, a) => active_state(f).or_else(|| active_state(a)),
    }
}

fn render_context(k: &KForm, out: &mut String, placed: &mut bool) {
    match k {
        KForm::State(s) => {
            if *placed {
                out.push_str(&format!("⟨{s}⟩"));
            } else {
                *placed = true;
                out.push_str(HOLE);
            }
        }
        KForm::Term(t) => out.push_str(&t.to_string()),
        KForm::Var(x) => out.push_str(x.as_str()),
        KForm::App(f, a) => {
            out.push('(');
            render_context(f, out, placed);
            out.push(')');
            render_context(a, out, placed);
        }
        KForm::Abs(x, b) => {
            out.push('\\');
            out.push_str(x.as_str());
            out.push('.');
            render_context(b, out, placed);
        }
    }
}

/// Rows for the initial configuration and every step of a traced run.
pub fn trace_rows(r: &RunReport) -> Vec<TraceRow> {
    let mut rows = vec![TraceRow::of(0, &r.initial)];
    for e in r.trace.iter().flatten() {
        rows.push(TraceRow::of(e.index, &e.form));
    }
    rows
}

/// The trace as an aligned table with a header line.
pub fn trace_table(rows: &[TraceRow]) -> String {
    let header = ["step", "output", "current subterm", "environment", "stack"];
    let cells: Vec<[String; 5]> = rows
        .iter()
        .map(|r| [r.step.to_string(), r.output.clone(), r.subterm.clone(), r.env.clone(), r.stack.clone()])
        .collect();
    let mut widths = header.map(|h| h.chars().count());
    for row in &cells {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cols: &[&str]| {
        let padded: Vec<String> = cols
            .iter()
            .zip(widths)
            .map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
            .collect();
        padded.join(" | ").trim_end().to_string()
    };
    let mut out = line(&header);
    out.push('\n');
    for row in &cells {
        let cols: Vec<&str> = row.iter().map(String::as_str).collect();
        out.push_str(&line(&cols));
        out.push('\n');
    }
    out
}

#[derive(Serialize, Debug)]
pub struct TraceStepJson {
    pub step: usize,
    pub rule: &'static str,
    /// The realization of the configuration after the step.
    pub term: String,
}

#[derive(Serialize, Debug)]
pub struct RunJson {
    pub machine: &'static str,
    pub status: &'static str,
    pub steps: usize,
    pub initial: String,
    /// The normal form, when the run finished.
    #[serde(rename = "final")]
    pub final_term: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<TraceStepJson>>,
}

impl RunJson {
    pub fn of(kind: MachineKind, r: &RunReport) -> RunJson {
        RunJson {
            machine: machine_name(kind),
            status: status_name(r.status),
            steps: r.steps,
            initial: r.initial.realize().to_string(),
            final_term: r.normal_form().map(|t| t.to_string()),
            trace: r.trace.as_ref().map(|tr| {
                tr.iter()
                    .map(|e| TraceStepJson {
                        step: e.index,
                        rule: e.rule.name(),
                        term: e.form.realize().to_string(),
                    })
                    .collect()
            }),
        }
    }
}

/// Text summary of a run, with the trace table when recorded.
pub fn run_text(kind: MachineKind, r: &RunReport) -> String {
    let mut out = String::new();
    if r.trace.is_some() {
        out.push_str(&trace_table(&trace_rows(r)));
        out.push('\n');
    }
    out.push_str(&format!("machine: {}\n", machine_name(kind)));
    out.push_str(&format!("status: {}\n", status_name(r.status)));
    out.push_str(&format!("steps: {}\n", r.steps));
    if let Some(nf) = r.normal_form() {
        out.push_str(&format!("final: {nf}\n"));
    }
    out
}

#[derive(Serialize, Debug)]
pub struct DerivationJson {
    pub rule: &'static str,
    pub term: String,
    pub context: Vec<(String, Vec<String>)>,
    #[serde(rename = "type")]
    pub ty: String,
    pub size: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub premises: Vec<DerivationJson>,
}

impl DerivationJson {
    pub fn of(d: &Derivation) -> DerivationJson {
        let (rule, premises) = match &d.rule {
            Inference::Axiom(_) => ("ax", Vec::new()),
            Inference::Abs(_, p) => ("abs", vec![DerivationJson::of(p)]),
            Inference::App { fun, args, .. } => (
                "app",
                std::iter::once(&**fun).chain(args).map(DerivationJson::of).collect(),
            ),
        };
        DerivationJson {
            rule,
            term: d.term().to_string(),
            context: context_json(&d.ctx),
            ty: d.ty.to_string(),
            size: d.size(),
            premises,
        }
    }
}

pub fn context_json(ctx: &Context) -> Vec<(String, Vec<String>)> {
    ctx.iter()
        .map(|(x, a)| (x.to_string(), a.iter().map(TypeExpr::to_string).collect()))
        .collect()
}

/// A typing `Γ ⊢ α` as one line.
pub fn typing_text(ctx: &Context, ty: &TypeExpr) -> String {
    if ctx.is_empty() {
        format!("⊢ {ty}")
    } else {
        format!("{ctx} ⊢ {ty}")
    }
}

#[derive(Serialize, Debug)]
pub struct TypingJson {
    pub context: Vec<(String, Vec<String>)>,
    #[serde(rename = "type")]
    pub ty: String,
}

impl TypingJson {
    pub fn of(ctx: &Context, ty: &TypeExpr) -> TypingJson {
        TypingJson {
            context: context_json(ctx),
            ty: ty.to_string(),
        }
    }
}

#[derive(Serialize, Debug)]
pub struct SemSetJson {
    pub vars: Vec<String>,
    pub bound: usize,
    pub complete: bool,
    /// Points as type strings, sorted.
    pub points: Vec<String>,
}

impl SemSetJson {
    pub fn of(s: &SemSet) -> SemSetJson {
        let mut points: Vec<String> = s.iter().map(TypeExpr::to_string).collect();
        points.sort();
        SemSetJson {
            vars: s.vars.iter().map(|x| x.to_string()).collect(),
            bound: s.bound,
            complete: s.complete,
            points,
        }
    }
}

#[derive(Serialize, Debug)]
pub struct WitnessJson {
    pub point: String,
    pub point_size: usize,
    pub args: Vec<String>,
    pub args_size: usize,
    pub unifier: Vec<(String, String)>,
    pub cost: usize,
}

impl WitnessJson {
    pub fn of(w: &PredictionWitness) -> WitnessJson {
        WitnessJson {
            point: w.point.to_string(),
            point_size: type_size(&w.point),
            args: w.args.iter().map(TypeExpr::to_string).collect(),
            args_size: multiset_size(&w.args),
            unifier: w.unifier.iter().map(|(a, t)| (a.to_string(), t.to_string())).collect(),
            cost: w.cost,
        }
    }
}

#[derive(Serialize, Debug)]
pub struct PredictionJson {
    pub mode: &'static str,
    pub steps: Option<usize>,
    pub searched_up_to: usize,
    pub witness: Option<WitnessJson>,
}

impl PredictionJson {
    pub fn of(mode: &'static str, p: &Prediction) -> PredictionJson {
        PredictionJson {
            mode,
            steps: p.steps,
            searched_up_to: p.searched_up_to,
            witness: p.witness.as_ref().map(WitnessJson::of),
        }
    }
}

pub fn prediction_text(p: &Prediction) -> String {
    let mut out = String::new();
    match (p.steps, &p.witness) {
        (Some(n), Some(w)) => {
            out.push_str(&format!("steps: {n}\n"));
            out.push_str(&format!("point: {} (size {})\n", w.point, type_size(&w.point)));
            out.push_str(&format!("args: {} (size {})\n", w.args, multiset_size(&w.args)));
            out.push_str(&format!("unifier: {}\n", w.unifier));
        }
        _ => out.push_str(&format!("steps: none up to cost {}\n", p.searched_up_to)),
    }
    out
}

fn multiset_size(m: &TypeMultiset) -> usize {
    krivine_lab_core::types::multiset_size(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use krivine_lab_core::machine::{run_with, RunOptions};
    use krivine_lab_core::parse;

    #[test]
    fn running_example_rows() {
        let t = parse("(\\x.(x)x)\\y.y").unwrap();
        let opts = RunOptions {
            fuel: 20,
            trace: true,
            detect_cycles: false,
        };
        let r = run_with(&t, MachineKind::Head, &opts);
        let rows = trace_rows(&r);
        assert_eq!(rows.len(), 10);
        assert_eq!(rows[0].subterm, "(\\x.(x)x)\\y.y");
        assert_eq!(rows[0].env, "∅");
        assert_eq!(rows[0].stack, "ε");
        assert_eq!(rows[8].output, "\\y.");
        assert_eq!(rows[8].subterm, "y");
        assert_eq!(rows[9].output, "\\y.y");
        assert_eq!(rows[9].subterm, "");
        let table = trace_table(&rows);
        assert_eq!(table.lines().count(), 11);
    }
}
