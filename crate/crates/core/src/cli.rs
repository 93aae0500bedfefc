//! The command layer behind the `mustcheck` binary. Every command returns
//! a serializable document; the human format is rendered from it.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use rand::rngs::StdRng;
use rand::SeedableRng;
use serde::Serialize;

use crate::axioms::{check_axiom, check_class, Axiom, AxiomClass, AxiomReport, UnknownAxiom};
use crate::labels::{preset_abstraction, Calculus, Channel, LabelAbstraction, LabelError, Token, ValueDomain};
use crate::preorder::{alt_leq, must, must_leq_sample, trace_string, FailureReason, PreorderError};
use crate::semantics::{
    explore, fw_graph, mail_capacity, mail_universe, term_graph, DetState, FwLts, FwState, Graph, GraphDocument,
    Multiset, MultisetLts, SemanticsError, ToSetLts,
};
use crate::synthesis::{distinguish, test_battery, Synth, SynthesisError, TestKind};
use crate::syntax::{free_names, parse, parse_definitions, Definitions, Process, SyntaxError};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Label(#[from] LabelError),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
    #[error(transparent)]
    Preorder(#[from] PreorderError),
    #[error(transparent)]
    Synthesis(#[from] SynthesisError),
    #[error(transparent)]
    Axiom(#[from] UnknownAxiom),
    #[error("no definition named `{0}`")]
    UnknownName(String),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    /// 2 when a bound was hit, 1 for every other failure.
    pub fn exit_code(&self) -> i32 {
        let bounded = |e: &SemanticsError| matches!(e, SemanticsError::Incomplete { .. } | SemanticsError::Saturated(_));
        match self {
            CliError::Semantics(e) => {
                if bounded(e) {
                    2
                } else {
                    1
                }
            }
            CliError::Preorder(PreorderError::Semantics(e))
            | CliError::Synthesis(SynthesisError::Preorder(PreorderError::Semantics(e)))
                if bounded(e) => {
                    2
                }
            _ => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Human,
    Structured,
}

/// Settings shared by all commands.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub calculus: Calculus,
    pub values: ValueDomain,
    /// Maximal number of states per explored graph, and of pairs per
    /// product walk.
    pub bound: usize,
    pub abstraction: LabelAbstraction,
    /// Messages the environment may deposit in a forwarder's mail.
    pub mail: usize,
    pub format: Format,
}

impl RunConfig {
    pub fn new(calculus: Calculus) -> Self {
        RunConfig {
            calculus,
            values: calculus.default_values(),
            bound: 10_000,
            abstraction: preset_abstraction(calculus),
            mail: 3,
            format: Format::Human,
        }
    }

    /// `preset`, `identity`, `constant`, or a path to a table file.
    pub fn set_abstraction(&mut self, spec: &str) -> Result<(), CliError> {
        let h = self.calculus.nonblocking();
        self.abstraction = match spec {
            "preset" => preset_abstraction(self.calculus),
            "identity" => LabelAbstraction::identity(h),
            "constant" => LabelAbstraction::constant("y", h),
            path => LabelAbstraction::from_table(&read(Path::new(path))?)?,
        };
        Ok(())
    }

    fn synth(&self, terms: &[&Process]) -> Synth {
        Synth {
            calculus: self.calculus,
            values: self.values.clone(),
            abstraction: self.abstraction.clone(),
            channels: channels_of(terms),
        }
    }

    /// The forwarder lifting used when comparing `terms`.
    pub fn forwarder(&self, terms: &[&Process]) -> FwLts {
        let h = self.calculus.nonblocking();
        let universe = mail_universe(&h, terms.iter().copied(), &self.values);
        let capacity = if h.is_empty() { 0 } else { mail_capacity(self.mail, terms.iter().copied()) };
        FwLts::new(self.values.clone(), h, universe, capacity)
    }
}

fn channels_of(terms: &[&Process]) -> BTreeSet<Channel> {
    terms.iter().flat_map(|p| free_names(p)).collect()
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })
}

/// Reads and parses a definitions file.
pub fn load(path: &Path, cfg: &RunConfig) -> Result<Definitions, CliError> {
    Ok(parse_definitions(&read(path)?, cfg.calculus, &cfg.values)?)
}

/// A term given either as a definition name or inline.
pub fn resolve(defs: &Definitions, text: &str, cfg: &RunConfig) -> Result<Process, CliError> {
    match defs.get(text).ok() {
        Some(p) => Ok(p.clone()),
        None if is_identifier(text) => Err(CliError::UnknownName(text.to_string())),
        None => Ok(parse(text, cfg.calculus, &cfg.values)?),
    }
}

fn is_identifier(s: &str) -> bool {
    s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') && s.starts_with(|c: char| c.is_ascii_alphabetic())
}

/// Anything a command returns.
pub trait Document: Serialize {
    fn human(&self) -> String;

    fn render(&self, format: Format) -> String {
        match format {
            Format::Human => self.human(),
            Format::Structured => serde_json::to_string_pretty(self).expect("documents serialize") + "\n",
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Definition {
    pub name: String,
    pub canonical: String,
}

#[derive(Debug, Serialize)]
pub struct ParseDoc {
    pub schema_version: u32,
    pub command: &'static str,
    pub calculus: String,
    pub definitions: Vec<Definition>,
}

impl Document for ParseDoc {
    fn human(&self) -> String {
        let mut out = String::new();
        for d in &self.definitions {
            let _ = writeln!(out, "{} = {}", d.name, d.canonical);
        }
        out
    }
}

pub fn cmd_parse(defs: &Definitions, cfg: &RunConfig) -> ParseDoc {
    let definitions = defs
        .names()
        .map(|n| Definition {
            name: n.to_string(),
            canonical: crate::syntax::canonical(defs.get(n).expect("listed name")).to_string(),
        })
        .collect();
    ParseDoc { schema_version: SCHEMA_VERSION, command: "parse", calculus: cfg.calculus.to_string(), definitions }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Engine {
    Term,
    Fw,
    Multiset,
    Toset,
}

impl std::str::FromStr for Engine {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "term" => Ok(Engine::Term),
            "fw" => Ok(Engine::Fw),
            "multiset" => Ok(Engine::Multiset),
            "toset" => Ok(Engine::Toset),
            _ => Err(CliError::Usage(format!("unknown engine `{s}` (term, fw, multiset, toset)"))),
        }
    }
}

/// An explored graph of whichever engine, with display texts.
pub enum AnyGraph {
    Term(Graph<Process>),
    Fw(Graph<FwState>),
    Multiset(Graph<Multiset>),
    Toset(Graph<DetState>, Graph<Process>),
}

impl AnyGraph {
    pub fn build(engine: Engine, p: Option<&Process>, channels: &BTreeSet<Channel>, cfg: &RunConfig) -> Result<Self, CliError> {
        let need = || p.ok_or_else(|| CliError::Usage("this engine needs a process".into()));
        Ok(match engine {
            Engine::Term => AnyGraph::Term(term_graph(need()?, &cfg.values, cfg.bound)?),
            Engine::Fw => {
                let p = need()?;
                AnyGraph::Fw(fw_graph(&cfg.forwarder(&[p]), p, cfg.bound)?)
            }
            Engine::Multiset => {
                let h = cfg.calculus.nonblocking();
                let h = if h.is_empty() { crate::labels::NonBlockingSet::Outputs } else { h };
                let lts = MultisetLts::new(h.universe(channels, &cfg.values), Some(cfg.mail));
                AnyGraph::Multiset(explore(&lts, Multiset::new(), cfg.bound)?)
            }
            Engine::Toset => {
                let base = term_graph(need()?, &cfg.values, cfg.bound)?;
                base.require_complete()?;
                let set = explore(&ToSetLts { base: &base }, DetState(vec![base.root()]), cfg.bound)?;
                AnyGraph::Toset(set, base)
            }
        })
    }

    pub fn document(&self) -> GraphDocument {
        match self {
            AnyGraph::Term(g) => g.document(),
            AnyGraph::Fw(g) => g.document(),
            AnyGraph::Multiset(g) => g.document(),
            AnyGraph::Toset(g, base) => {
                let mut d = g.document();
                d.states = g.states().iter().map(|x| show_set(x, base)).collect();
                d
            }
        }
    }

    pub fn saturated(&self) -> Vec<usize> {
        match self {
            AnyGraph::Term(g) => g.ids().filter(|&i| g.is_saturated(i)).collect(),
            AnyGraph::Fw(g) => g.ids().filter(|&i| g.is_saturated(i)).collect(),
            AnyGraph::Multiset(g) => g.ids().filter(|&i| g.is_saturated(i)).collect(),
            AnyGraph::Toset(g, _) => g.ids().filter(|&i| g.is_saturated(i)).collect(),
        }
    }

    /// The non-blocking set the axioms are checked against.
    pub fn nonblocking(&self, cfg: &RunConfig) -> crate::labels::NonBlockingSet {
        match self {
            AnyGraph::Multiset(_) if cfg.calculus.nonblocking().is_empty() => crate::labels::NonBlockingSet::Outputs,
            _ => cfg.calculus.nonblocking(),
        }
    }

    pub fn check(&self, h: &crate::labels::NonBlockingSet, which: &AxiomSelection) -> Result<Vec<AxiomReport>, CliError> {
        fn run<S: Clone + Eq + std::hash::Hash>(
            g: &Graph<S>,
            h: &crate::labels::NonBlockingSet,
            which: &AxiomSelection,
        ) -> Result<Vec<AxiomReport>, SemanticsError> {
            match which {
                AxiomSelection::Class(c) => check_class(g, h, *c),
                AxiomSelection::One(a) => Ok(vec![check_axiom(g, h, *a)?]),
            }
        }
        Ok(match self {
            AnyGraph::Term(g) => run(g, h, which)?,
            AnyGraph::Fw(g) => run(g, h, which)?,
            AnyGraph::Multiset(g) => run(g, h, which)?,
            AnyGraph::Toset(g, _) => run(g, h, which)?,
        })
    }
}

fn show_set(x: &DetState, base: &Graph<Process>) -> String {
    let parts: Vec<String> = x.iter().map(|i| base.state(i).to_string()).collect();
    format!("{{{}}}", parts.join(", "))
}

#[derive(Debug, Serialize)]
pub struct LtsDoc {
    pub schema_version: u32,
    pub command: &'static str,
    pub engine: String,
    pub graph: GraphDocument,
    pub saturated: Vec<usize>,
}

impl Document for LtsDoc {
    fn human(&self) -> String {
        let g = &self.graph;
        let mut out = format!(
            "{} states, {} transitions, root {}{}\n",
            g.states.len(),
            g.transitions.len(),
            g.root,
            if g.complete { "" } else { " (truncated)" }
        );
        for (i, s) in g.states.iter().enumerate() {
            let mark = if self.saturated.contains(&i) { " [saturated]" } else { "" };
            let _ = writeln!(out, "  {i}: {s}{mark}");
        }
        for t in &g.transitions {
            let _ = writeln!(out, "  {t}");
        }
        out
    }
}

pub fn cmd_lts(p: Option<&Process>, engine: Engine, channels: &BTreeSet<Channel>, cfg: &RunConfig) -> Result<LtsDoc, CliError> {
    let g = AnyGraph::build(engine, p, channels, cfg)?;
    Ok(LtsDoc {
        schema_version: SCHEMA_VERSION,
        command: "lts",
        engine: format!("{engine:?}").to_lowercase(),
        graph: g.document(),
        saturated: g.saturated(),
    })
}

#[derive(Debug, Serialize)]
pub struct PathStep {
    pub server: String,
    pub client: String,
}

#[derive(Debug, Serialize)]
pub struct MustDoc {
    pub schema_version: u32,
    pub command: &'static str,
    pub server: String,
    pub test: String,
    pub holds: bool,
    pub failing_path: Vec<PathStep>,
    /// Index in `failing_path` where the final loop starts.
    pub cycle_start: Option<usize>,
}

impl Document for MustDoc {
    fn human(&self) -> String {
        let verdict = if self.holds { "passes" } else { "fails" };
        let mut out = format!("{} {verdict} {}\n", self.server, self.test);
        for (i, s) in self.failing_path.iter().enumerate() {
            let mark = if Some(i) == self.cycle_start { "  <- loop" } else { "" };
            let _ = writeln!(out, "  {} || {}{mark}", s.server, s.client);
        }
        if !self.holds && self.cycle_start.is_none() {
            out.push_str("  (stuck)\n");
        }
        out
    }
}

pub fn cmd_must(p: &Process, t: &Process, cfg: &RunConfig) -> Result<MustDoc, CliError> {
    let gp = term_graph(p, &cfg.values, cfg.bound)?;
    let gt = term_graph(t, &cfg.values, cfg.bound)?;
    let out = must(&gp, &gt, cfg.bound)?;
    Ok(MustDoc {
        schema_version: SCHEMA_VERSION,
        command: "must",
        server: p.to_string(),
        test: t.to_string(),
        holds: out.holds,
        failing_path: out
            .path
            .iter()
            .map(|(s, c)| PathStep { server: gp.state(*s).to_string(), client: gt.state(*c).to_string() })
            .collect(),
        cycle_start: out.cycle_start,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Alt,
    Test,
}

impl std::str::FromStr for Method {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "alt" => Ok(Method::Alt),
            "test" => Ok(Method::Test),
            _ => Err(CliError::Usage(format!("unknown method `{s}` (alt, test)"))),
        }
    }
}

#[derive(Debug, Serialize, Default)]
pub struct AcceptanceSets {
    pub left: Vec<Vec<String>>,
    pub right: Vec<Vec<String>>,
}

#[derive(Debug, Serialize)]
pub struct LeqDoc {
    pub schema_version: u32,
    pub command: &'static str,
    pub method: &'static str,
    pub calculus: String,
    pub abstraction: String,
    pub p: String,
    pub q: String,
    pub holds: bool,
    /// False when traces beyond the mail capacity were not examined.
    pub exhaustive: bool,
    pub witness_trace: Option<Vec<String>>,
    pub reason: Option<&'static str>,
    pub offending: Option<Vec<String>>,
    pub acceptance_sets: Option<AcceptanceSets>,
    pub witness_test: Option<String>,
    pub tests_run: Option<usize>,
}

impl Document for LeqDoc {
    fn human(&self) -> String {
        let rel = if self.holds { "⊑" } else { "⋢" };
        let mut out = format!("{} {rel} {}  [{} / {} / {}]\n", self.p, self.q, self.calculus, self.method, self.abstraction);
        if let Some(t) = &self.witness_trace {
            let s = if t.is_empty() { "ε".to_string() } else { t.join(".") };
            let _ = writeln!(out, "  trace: {s}");
        }
        if let Some(r) = self.reason {
            let _ = writeln!(out, "  reason: {r}");
        }
        if let Some(o) = &self.offending {
            let _ = writeln!(out, "  offending set: {{{}}}", o.join(", "));
        }
        if let Some(a) = &self.acceptance_sets {
            let show = |x: &Vec<Vec<String>>| {
                x.iter().map(|s| format!("{{{}}}", s.join(", "))).collect::<Vec<_>>().join(", ")
            };
            let _ = writeln!(out, "  left:  {{{}}}", show(&a.left));
            let _ = writeln!(out, "  right: {{{}}}", show(&a.right));
        }
        if let Some(t) = &self.witness_test {
            let _ = writeln!(out, "  test: {t}");
        }
        if let Some(n) = self.tests_run {
            let _ = writeln!(out, "  tests run: {n}");
        }
        if !self.exhaustive {
            out.push_str("  note: traces beyond the mail capacity were not examined\n");
        }
        out
    }
}

fn sets(a: &Option<crate::preorder::AcceptanceSet>) -> Vec<Vec<String>> {
    a.iter().flatten().map(|s| s.iter().map(Token::to_string).collect()).collect()
}

/// The graphs a comparison needs: forwarders for the characterisation, plain
/// term graphs for running tests.
pub struct Prepared {
    pub gp: Graph<FwState>,
    pub gq: Graph<FwState>,
    pub sp: Graph<Process>,
    pub sq: Graph<Process>,
    pub synth: Synth,
}

pub fn prepare(p: &Process, q: &Process, cfg: &RunConfig) -> Result<Prepared, CliError> {
    let fw = cfg.forwarder(&[p, q]);
    let gp = fw_graph(&fw, p, cfg.bound)?;
    let gq = fw_graph(&fw, q, cfg.bound)?;
    let sp = term_graph(p, &cfg.values, cfg.bound)?;
    let sq = term_graph(q, &cfg.values, cfg.bound)?;
    for g in [gp.require_complete(), gq.require_complete(), sp.require_complete(), sq.require_complete()] {
        g?;
    }
    Ok(Prepared { gp, gq, sp, sq, synth: cfg.synth(&[p, q]) })
}

/// Seeded random clients for `--method test`.
pub const TEST_SEED: u64 = 0x5eed;

pub fn cmd_leq(p: &Process, q: &Process, method: Method, tests: usize, cfg: &RunConfig) -> Result<LeqDoc, CliError> {
    let prep = prepare(p, q, cfg)?;
    let mut doc = LeqDoc {
        schema_version: SCHEMA_VERSION,
        command: "leq",
        method: match method {
            Method::Alt => "alt",
            Method::Test => "test",
        },
        calculus: cfg.calculus.to_string(),
        abstraction: cfg.abstraction.name.clone(),
        p: p.to_string(),
        q: q.to_string(),
        holds: true,
        exhaustive: true,
        witness_trace: None,
        reason: None,
        offending: None,
        acceptance_sets: None,
        witness_test: None,
        tests_run: None,
    };
    match method {
        Method::Alt => {
            let v = alt_leq(&prep.gp, &prep.gq, &cfg.abstraction, cfg.bound)?;
            doc.holds = v.holds;
            doc.exhaustive = v.exhaustive;
            if let Some(w) = v.witness {
                doc.witness_trace = Some(w.trace.iter().map(|a| a.to_string()).collect());
                match &w.reason {
                    FailureReason::ConvergenceFailure => doc.reason = Some("convergence-failure"),
                    FailureReason::AcceptanceFailure { offending } => {
                        doc.reason = Some("acceptance-failure");
                        doc.offending = Some(offending.iter().map(Token::to_string).collect());
                        doc.acceptance_sets = Some(AcceptanceSets { left: sets(&w.left), right: sets(&w.right) });
                    }
                }
                match distinguish(&prep.gp, &prep.gq, &prep.sp, &prep.sq, &prep.synth, cfg.bound, cfg.bound) {
                    Ok(Some(d)) => doc.witness_test = Some(d.test.to_string()),
                    Ok(None) => {}
                    // an abstraction that is not complete may yield no test
                    Err(SynthesisError::VerificationFailed { .. } | SynthesisError::TokenNotExpressible(_)) => {}
                    Err(e) => return Err(e.into()),
                }
            }
        }
        Method::Test => {
            let mut rng = StdRng::seed_from_u64(TEST_SEED);
            let battery = test_battery(&prep.synth, 2, tests, &mut rng)?;
            let graphs = battery
                .iter()
                .map(|t| term_graph(t, &cfg.values, cfg.bound))
                .collect::<Result<Vec<_>, _>>()?;
            let v = must_leq_sample(&prep.sp, &prep.sq, &graphs, cfg.bound)?;
            doc.holds = v.holds;
            doc.tests_run = Some(v.tests);
            doc.witness_test = v.counterexample.map(|i| battery[i].to_string());
        }
    }
    Ok(doc)
}

#[derive(Debug, Serialize)]
pub struct DistinguishDoc {
    pub schema_version: u32,
    pub command: &'static str,
    pub p: String,
    pub q: String,
    pub test: Option<String>,
    pub kind: Option<TestKind>,
    pub trace: Option<String>,
    pub must_p: Option<bool>,
    pub must_q: Option<bool>,
}

impl Document for DistinguishDoc {
    fn human(&self) -> String {
        match &self.test {
            None => format!("no distinguishing test: {} ⊑ {}\n", self.p, self.q),
            Some(t) => format!(
                "{t}\n  after trace {}: must({}) = {}, must({}) = {}\n",
                self.trace.as_deref().unwrap_or("ε"),
                self.p,
                self.must_p.unwrap_or_default(),
                self.q,
                self.must_q.unwrap_or_default()
            ),
        }
    }
}

pub fn cmd_distinguish(p: &Process, q: &Process, cfg: &RunConfig) -> Result<DistinguishDoc, CliError> {
    let prep = prepare(p, q, cfg)?;
    let d = distinguish(&prep.gp, &prep.gq, &prep.sp, &prep.sq, &prep.synth, cfg.bound, cfg.bound)?;
    Ok(DistinguishDoc {
        schema_version: SCHEMA_VERSION,
        command: "distinguish",
        p: p.to_string(),
        q: q.to_string(),
        test: d.as_ref().map(|d| d.test.to_string()),
        kind: d.as_ref().map(|d| d.spec.kind),
        trace: d.as_ref().map(|d| trace_string(&d.trace)),
        must_p: d.as_ref().map(|d| d.must_p),
        must_q: d.as_ref().map(|d| d.must_q),
    })
}

pub enum AxiomSelection {
    Class(AxiomClass),
    One(Axiom),
}

impl AxiomSelection {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        if let Ok(c) = s.parse::<AxiomClass>() {
            return Ok(AxiomSelection::Class(c));
        }
        Ok(AxiomSelection::One(s.parse()?))
    }
}

#[derive(Debug, Serialize)]
pub struct AxiomsDoc {
    pub schema_version: u32,
    pub command: &'static str,
    pub engine: String,
    pub states: usize,
    pub holds: bool,
    pub reports: Vec<AxiomReport>,
    /// Display texts of the states mentioned by witnesses.
    pub state_names: Vec<(usize, String)>,
}

impl Document for AxiomsDoc {
    fn human(&self) -> String {
        let mut out = format!("{} graph, {} states\n", self.engine, self.states);
        for r in &self.reports {
            let status = if r.holds { "holds" } else { "FAILS" };
            let waived = if r.waived > 0 { format!(" ({} waived at capacity)", r.waived) } else { String::new() };
            let _ = writeln!(out, "  {:<26} {status}{waived}", r.axiom.name());
            for w in r.witnesses.iter().take(3) {
                let parts: Vec<String> = w.transitions.iter().map(|t| t.to_string()).collect();
                let mut line = parts.join(", ");
                if let (Some(s), Some(a)) = (w.state, &w.action) {
                    line = format!("state {s}, {a}");
                }
                let _ = writeln!(out, "    witness: {line}");
            }
        }
        for (i, s) in &self.state_names {
            let _ = writeln!(out, "  {i}: {s}");
        }
        out
    }
}

pub fn cmd_axioms(
    p: Option<&Process>,
    engine: Engine,
    which: &AxiomSelection,
    channels: &BTreeSet<Channel>,
    cfg: &RunConfig,
) -> Result<AxiomsDoc, CliError> {
    let g = AnyGraph::build(engine, p, channels, cfg)?;
    let h = g.nonblocking(cfg);
    let reports = g.check(&h, which)?;
    let doc = g.document();
    let mut mentioned = BTreeSet::new();
    for r in &reports {
        for w in &r.witnesses {
            mentioned.extend(w.state);
            for t in &w.transitions {
                mentioned.insert(t.source);
                mentioned.insert(t.target);
            }
        }
    }
    Ok(AxiomsDoc {
        schema_version: SCHEMA_VERSION,
        command: "axioms",
        engine: format!("{engine:?}").to_lowercase(),
        states: doc.states.len(),
        holds: reports.iter().all(|r| r.holds),
        reports,
        state_names: mentioned.into_iter().map(|i| (i, doc.states[i].clone())).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vaccs() -> RunConfig {
        let mut cfg = RunConfig::new(Calculus::Vaccs);
        cfg.values = ValueDomain::binary();
        cfg
    }

    fn term(src: &str, cfg: &RunConfig) -> Process {
        parse(src, cfg.calculus, &cfg.values).unwrap()
    }

    #[test]
    fn copy_cat_against_nil() {
        let cfg = vaccs();
        let (id, nil) = (term("a?(x).a!x", &cfg), term("0", &cfg));
        assert!(cmd_leq(&id, &nil, Method::Alt, 0, &cfg).unwrap().holds);
        assert!(cmd_leq(&nil, &id, Method::Alt, 0, &cfg).unwrap().holds);
        let mut sync = RunConfig::new(Calculus::Vccs);
        sync.values = ValueDomain::binary();
        let (id, nil) = (term("a?(x).a!x.0", &sync), term("0", &sync));
        let doc = cmd_leq(&id, &nil, Method::Alt, 0, &sync).unwrap();
        assert!(!doc.holds);
        assert!(doc.witness_test.is_some());
    }

    #[test]
    fn structured_output_is_stable() {
        let cfg = vaccs();
        let p = term("a?(x).a!x", &cfg);
        let a = cmd_lts(Some(&p), Engine::Fw, &BTreeSet::new(), &cfg).unwrap().render(Format::Structured);
        let b = cmd_lts(Some(&p), Engine::Fw, &BTreeSet::new(), &cfg).unwrap().render(Format::Structured);
        assert_eq!(a, b);
        assert!(a.contains("\"schema_version\": 1"));
    }

    #[test]
    fn bound_errors_exit_with_two() {
        let mut cfg = RunConfig::new(Calculus::Ccs);
        cfg.bound = 5;
        let p = term("rec X.(a!().0 | tau.X)", &cfg);
        let err = cmd_must(&p, &Process::One, &cfg).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }
}
