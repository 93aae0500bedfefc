//! Actions, duality, the blocking / non-blocking partition and label
//! abstractions for the four calculi.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LabelError {
    #[error("invalid channel name `{0}`")]
    InvalidChannel(String),
    #[error("invalid value `{0}`")]
    InvalidValue(String),
    #[error("invalid action `{0}`")]
    InvalidAction(String),
    #[error("value domain must not be empty")]
    EmptyDomain,
    #[error("unknown calculus `{0}` (expected ccs, accs, vccs or vaccs)")]
    UnknownCalculus(String),
    #[error("action {0} is non-blocking; abstractions only apply to blocking actions")]
    NonBlocking(Action),
    #[error("abstraction table has no entry for {0}")]
    Unmapped(String),
    #[error("abstraction table line {line}: {message}")]
    Table { line: usize, message: String },
}

/// A channel name. Equality is syntactic.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Channel(String);

impl Channel {
    pub fn new(name: impl Into<String>) -> Result<Self, LabelError> {
        let name = name.into();
        let mut chars = name.chars();
        let ok = match chars.next() {
            Some(c) => (c.is_ascii_lowercase() || c == '_') && chars.all(|c| c.is_ascii_alphanumeric() || c == '_'),
            None => false,
        };
        if ok {
            Ok(Channel(name))
        } else {
            Err(LabelError::InvalidChannel(name))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl TryFrom<String> for Channel {
    type Error = LabelError;
    fn try_from(s: String) -> Result<Self, LabelError> {
        Channel::new(s)
    }
}

impl From<Channel> for String {
    fn from(c: Channel) -> String {
        c.0
    }
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A value from the configured finite domain. `Unit` is the only value of
/// the calculi without value passing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Unit,
    Int(i64),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Unit => f.write_str("unit"),
            Value::Int(n) => write!(f, "{n}"),
        }
    }
}

impl FromStr for Value {
    type Err = LabelError;
    fn from_str(s: &str) -> Result<Self, LabelError> {
        match s.trim() {
            "unit" | "()" => Ok(Value::Unit),
            t => t.parse::<i64>().map(Value::Int).map_err(|_| LabelError::InvalidValue(s.to_string())),
        }
    }
}

/// The finite set `Val`, kept sorted and duplicate free.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ValueDomain(Vec<Value>);

impl ValueDomain {
    pub fn new(values: impl IntoIterator<Item = Value>) -> Result<Self, LabelError> {
        let set: BTreeSet<Value> = values.into_iter().collect();
        if set.is_empty() {
            return Err(LabelError::EmptyDomain);
        }
        Ok(ValueDomain(set.into_iter().collect()))
    }

    pub fn unit() -> Self {
        ValueDomain(vec![Value::Unit])
    }

    /// `{0, 1}`, the default domain of the value-passing calculi.
    pub fn binary() -> Self {
        ValueDomain(vec![Value::Int(0), Value::Int(1)])
    }

    /// Parses a comma separated listing such as `0,1,2`.
    pub fn parse_list(text: &str) -> Result<Self, LabelError> {
        let values = text
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(Value::from_str)
            .collect::<Result<Vec<_>, _>>()?;
        ValueDomain::new(values)
    }

    pub fn contains(&self, v: &Value) -> bool {
        self.0.binary_search(v).is_ok()
    }

    pub fn values(&self) -> &[Value] {
        &self.0
    }

    pub fn least(&self) -> Value {
        self.0[0]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for ValueDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Polarity {
    Output,
    Input,
}

impl Polarity {
    pub fn flip(self) -> Polarity {
        match self {
            Polarity::Output => Polarity::Input,
            Polarity::Input => Polarity::Output,
        }
    }

    fn symbol(self) -> char {
        match self {
            Polarity::Output => '!',
            Polarity::Input => '?',
        }
    }
}

/// A visible action `a?v` or `a!v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Action {
    pub channel: Channel,
    pub polarity: Polarity,
    pub payload: Value,
}

impl Action {
    pub fn new(channel: Channel, polarity: Polarity, payload: Value) -> Self {
        Action { channel, polarity, payload }
    }

    pub fn input(channel: &Channel, payload: Value) -> Self {
        Action::new(channel.clone(), Polarity::Input, payload)
    }

    pub fn output(channel: &Channel, payload: Value) -> Self {
        Action::new(channel.clone(), Polarity::Output, payload)
    }

    pub fn is_input(&self) -> bool {
        self.polarity == Polarity::Input
    }

    pub fn is_output(&self) -> bool {
        self.polarity == Polarity::Output
    }
}

/// Swaps polarity, keeping channel and payload.
pub fn dual(a: &Action) -> Action {
    Action::new(a.channel.clone(), a.polarity.flip(), a.payload)
}

/// Pointwise dual of a trace.
pub fn dual_trace(s: &[Action]) -> Vec<Action> {
    s.iter().map(dual).collect()
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.payload {
            Value::Unit => write!(f, "{}{}", self.channel, self.polarity.symbol()),
            v => write!(f, "{}{}{}", self.channel, self.polarity.symbol(), v),
        }
    }
}

impl FromStr for Action {
    type Err = LabelError;
    fn from_str(s: &str) -> Result<Self, LabelError> {
        let t = s.trim();
        let pos = t.find(['!', '?']).ok_or_else(|| LabelError::InvalidAction(s.to_string()))?;
        let channel = Channel::new(&t[..pos]).map_err(|_| LabelError::InvalidAction(s.to_string()))?;
        let polarity = if t.as_bytes()[pos] == b'!' { Polarity::Output } else { Polarity::Input };
        let rest = &t[pos + 1..];
        let payload = if rest.is_empty() { Value::Unit } else { rest.parse()? };
        Ok(Action::new(channel, polarity, payload))
    }
}

impl Serialize for Action {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Either a visible action or the internal action.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Tau,
    Visible(Action),
}

impl Label {
    pub fn action(&self) -> Option<&Action> {
        match self {
            Label::Tau => None,
            Label::Visible(a) => Some(a),
        }
    }

    pub fn is_tau(&self) -> bool {
        matches!(self, Label::Tau)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Tau => f.write_str("tau"),
            Label::Visible(a) => a.fmt(f),
        }
    }
}

impl Serialize for Label {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// The set `H` of non-blocking actions. Every variant is closed under
/// changing the payload.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum NonBlockingSet {
    Empty,
    Outputs,
    OutputsOn(BTreeSet<Channel>),
}

impl NonBlockingSet {
    pub fn contains(&self, a: &Action) -> bool {
        match self {
            NonBlockingSet::Empty => false,
            NonBlockingSet::Outputs => a.is_output(),
            NonBlockingSet::OutputsOn(chs) => a.is_output() && chs.contains(&a.channel),
        }
    }

    pub fn is_empty(&self) -> bool {
        match self {
            NonBlockingSet::Empty => true,
            NonBlockingSet::Outputs => false,
            NonBlockingSet::OutputsOn(chs) => chs.is_empty(),
        }
    }

    /// All non-blocking actions over the given channels and values.
    pub fn universe(&self, channels: &BTreeSet<Channel>, values: &ValueDomain) -> Vec<Action> {
        let mut out = Vec::new();
        for c in channels {
            for pol in [Polarity::Output, Polarity::Input] {
                for v in values.values() {
                    let a = Action::new(c.clone(), pol, *v);
                    if self.contains(&a) {
                        out.push(a);
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for NonBlockingSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NonBlockingSet::Empty => f.write_str("none"),
            NonBlockingSet::Outputs => f.write_str("outputs"),
            NonBlockingSet::OutputsOn(chs) => {
                let names: Vec<&str> = chs.iter().map(|c| c.as_str()).collect();
                write!(f, "outputs on {{{}}}", names.join(","))
            }
        }
    }
}

pub fn is_blocking(a: &Action, h: &NonBlockingSet) -> bool {
    !h.contains(a)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Calculus {
    Ccs,
    Accs,
    Vccs,
    Vaccs,
}

impl Calculus {
    pub const ALL: [Calculus; 4] = [Calculus::Ccs, Calculus::Accs, Calculus::Vccs, Calculus::Vaccs];

    pub fn is_asynchronous(self) -> bool {
        matches!(self, Calculus::Accs | Calculus::Vaccs)
    }

    pub fn has_values(self) -> bool {
        matches!(self, Calculus::Vccs | Calculus::Vaccs)
    }

    pub fn nonblocking(self) -> NonBlockingSet {
        if self.is_asynchronous() {
            NonBlockingSet::Outputs
        } else {
            NonBlockingSet::Empty
        }
    }

    /// `{unit}` without value passing, `{0, 1}` otherwise.
    pub fn default_values(self) -> ValueDomain {
        if self.has_values() {
            ValueDomain::binary()
        } else {
            ValueDomain::unit()
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Calculus::Ccs => "ccs",
            Calculus::Accs => "accs",
            Calculus::Vccs => "vccs",
            Calculus::Vaccs => "vaccs",
        }
    }
}

impl fmt::Display for Calculus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Calculus {
    type Err = LabelError;
    fn from_str(s: &str) -> Result<Self, LabelError> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ccs" => Ok(Calculus::Ccs),
            "accs" => Ok(Calculus::Accs),
            "vccs" => Ok(Calculus::Vccs),
            "vaccs" => Ok(Calculus::Vaccs),
            other => Err(LabelError::UnknownCalculus(other.to_string())),
        }
    }
}

/// An abstract action, an element of `Y` or of `X`. Rendered as `a?`, `a!`,
/// `a?v` or `a!v`; equality is string equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Token(String);

impl Token {
    pub fn new(s: impl Into<String>) -> Self {
        Token(s.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Drops whatever follows the polarity marker: `a!0` becomes `a!`.
    fn strip_payload(&self) -> Token {
        match self.0.find(['!', '?']) {
            Some(pos) => Token(self.0[..=pos].to_string()),
            None => self.clone(),
        }
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// The map from blocking actions into `Y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PhiMap {
    Identity,
    /// `c?v ↦ c?`, outputs unchanged.
    CollapseInputPayload,
    Constant(Token),
    Table(BTreeMap<Action, Token>),
}

/// The map from `Y` into `X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DeltaMap {
    Identity,
    /// `c!v ↦ c!` and `c? ↦ c?`.
    CollapsePayload,
    Table(BTreeMap<Token, Token>),
}

/// A label abstraction `(phi, delta)` together with the non-blocking set it
/// is used with.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelAbstraction {
    pub name: String,
    pub phi: PhiMap,
    pub delta: DeltaMap,
    pub nonblocking: NonBlockingSet,
}

impl LabelAbstraction {
    pub fn identity(nonblocking: NonBlockingSet) -> Self {
        LabelAbstraction {
            name: "identity".into(),
            phi: PhiMap::Identity,
            delta: DeltaMap::Identity,
            nonblocking,
        }
    }

    /// `phi` maps every blocking action to the same token.
    pub fn constant(token: &str, nonblocking: NonBlockingSet) -> Self {
        LabelAbstraction {
            name: format!("constant({token})"),
            phi: PhiMap::Constant(Token::new(token)),
            delta: DeltaMap::Identity,
            nonblocking,
        }
    }

    pub fn phi(&self, a: &Action) -> Result<Token, LabelError> {
        if !is_blocking(a, &self.nonblocking) {
            return Err(LabelError::NonBlocking(a.clone()));
        }
        Ok(match &self.phi {
            PhiMap::Identity => Token(a.to_string()),
            PhiMap::CollapseInputPayload if a.is_input() => Token(format!("{}?", a.channel)),
            PhiMap::CollapseInputPayload => Token(a.to_string()),
            PhiMap::Constant(t) => t.clone(),
            PhiMap::Table(map) => map.get(a).cloned().ok_or_else(|| LabelError::Unmapped(a.to_string()))?,
        })
    }

    pub fn delta(&self, y: &Token) -> Result<Token, LabelError> {
        Ok(match &self.delta {
            DeltaMap::Identity => y.clone(),
            DeltaMap::CollapsePayload => y.strip_payload(),
            DeltaMap::Table(map) => map.get(y).cloned().ok_or_else(|| LabelError::Unmapped(y.to_string()))?,
        })
    }

    /// `delta(phi(a))`.
    pub fn abstract_action(&self, a: &Action) -> Result<Token, LabelError> {
        self.delta(&self.phi(a)?)
    }

    /// Parses a declarative table. Each non-comment line is
    /// `action -> y_token -> x_token`; an optional `nonblocking = none|outputs`
    /// line sets `H` (default: none).
    pub fn from_table(text: &str) -> Result<Self, LabelError> {
        let mut phi = BTreeMap::new();
        let mut delta: BTreeMap<Token, Token> = BTreeMap::new();
        let mut nonblocking = NonBlockingSet::Empty;
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("nonblocking") {
                let value = rest.trim_start().trim_start_matches('=').trim();
                nonblocking = match value {
                    "none" => NonBlockingSet::Empty,
                    "outputs" => NonBlockingSet::Outputs,
                    other => {
                        return Err(LabelError::Table { line: line_no, message: format!("unknown non-blocking set `{other}`") })
                    }
                };
                continue;
            }
            let parts: Vec<&str> = line.split("->").map(str::trim).collect();
            if parts.len() != 3 || parts.iter().any(|p| p.is_empty()) {
                return Err(LabelError::Table { line: line_no, message: "expected `action -> y -> x`".into() });
            }
            let action: Action =
                parts[0].parse().map_err(|e: LabelError| LabelError::Table { line: line_no, message: e.to_string() })?;
            let y = Token::new(parts[1]);
            let x = Token::new(parts[2]);
            if let Some(prev) = delta.get(&y) {
                if prev != &x {
                    return Err(LabelError::Table {
                        line: line_no,
                        message: format!("token {y} already maps to {prev}"),
                    });
                }
            }
            delta.insert(y.clone(), x);
            phi.insert(action, y);
        }
        for a in phi.keys() {
            if nonblocking.contains(a) {
                return Err(LabelError::NonBlocking(a.clone()));
            }
        }
        Ok(LabelAbstraction { name: "table".into(), phi: PhiMap::Table(phi), delta: DeltaMap::Table(delta), nonblocking })
    }
}

/// The Table 1 row for a calculus.
pub fn preset_abstraction(calculus: Calculus) -> LabelAbstraction {
    let (phi, delta) = match calculus {
        Calculus::Ccs | Calculus::Accs => (PhiMap::Identity, DeltaMap::Identity),
        Calculus::Vccs => (PhiMap::CollapseInputPayload, DeltaMap::CollapsePayload),
        Calculus::Vaccs => (PhiMap::CollapseInputPayload, DeltaMap::Identity),
    };
    LabelAbstraction { name: calculus.name().into(), phi, delta, nonblocking: calculus.nonblocking() }
}

/// Image of a set of blocking actions under `delta ∘ phi`.
pub fn co_ready_abstract(
    ready_dual: &BTreeSet<Action>,
    abstraction: &LabelAbstraction,
) -> Result<BTreeSet<Token>, LabelError> {
    ready_dual.iter().map(|a| abstraction.abstract_action(a)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn act(s: &str) -> Action {
        s.parse().unwrap()
    }

    #[test]
    fn duality_swaps_polarity() {
        assert_eq!(dual(&act("a!1")), act("a?1"));
        assert_eq!(dual(&act("b?1")), act("b!1"));
        assert_eq!(dual(&dual(&act("a?0"))), act("a?0"));
    }

    #[test]
    fn blocking_follows_table_rows() {
        let outs = Calculus::Vaccs.nonblocking();
        assert!(!is_blocking(&act("a!0"), &outs));
        assert!(is_blocking(&act("a?0"), &outs));
        assert!(is_blocking(&act("a!0"), &Calculus::Ccs.nonblocking()));
    }

    #[test]
    fn preset_tokens() {
        let vccs = preset_abstraction(Calculus::Vccs);
        assert_eq!(vccs.abstract_action(&act("c?7")).unwrap().as_str(), "c?");
        assert_eq!(vccs.abstract_action(&act("c!7")).unwrap().as_str(), "c!");
        let ccs = preset_abstraction(Calculus::Ccs);
        assert_eq!(ccs.abstract_action(&act("c?")).unwrap().as_str(), "c?");
        let vaccs = preset_abstraction(Calculus::Vaccs);
        assert_eq!(vaccs.abstract_action(&act("c?7")).unwrap().as_str(), "c?");
        assert!(vaccs.abstract_action(&act("c!7")).is_err());
    }

    #[test]
    fn co_ready_images() {
        let vaccs = preset_abstraction(Calculus::Vaccs);
        let set: BTreeSet<Action> = [act("a?0"), act("a?1")].into();
        let img = co_ready_abstract(&set, &vaccs).unwrap();
        assert_eq!(img, [Token::new("a?")].into());
        assert!(co_ready_abstract(&BTreeSet::new(), &vaccs).unwrap().is_empty());
        let vccs = preset_abstraction(Calculus::Vccs);
        let set: BTreeSet<Action> = [act("a?0"), act("b?0")].into();
        assert_eq!(co_ready_abstract(&set, &vccs).unwrap(), [Token::new("a?"), Token::new("b?")].into());
        let bad: BTreeSet<Action> = [act("a!0")].into();
        assert!(matches!(co_ready_abstract(&bad, &vaccs), Err(LabelError::NonBlocking(_))));
    }

    #[test]
    fn unit_actions_render_without_payload() {
        assert_eq!(act("a!").to_string(), "a!");
        assert_eq!(act("a!unit"), act("a!"));
        assert_eq!(act("a?3").to_string(), "a?3");
    }

    #[test]
    fn table_file() {
        let abs = LabelAbstraction::from_table(
            "# constant phi\n a! -> y -> y\n b! -> y -> y\n a? -> y -> y\n b? -> y -> y\n",
        )
        .unwrap();
        assert_eq!(abs.abstract_action(&act("a!")).unwrap(), abs.abstract_action(&act("b?")).unwrap());
        assert!(matches!(abs.abstract_action(&act("c!")), Err(LabelError::Unmapped(_))));
        let err = LabelAbstraction::from_table("a! -> y -> x\nb! -> y -> z\n").unwrap_err();
        assert!(matches!(err, LabelError::Table { line: 2, .. }));
        let err = LabelAbstraction::from_table("nonblocking = outputs\na!0 -> y -> x\n").unwrap_err();
        assert!(matches!(err, LabelError::NonBlocking(_)));
    }

    #[test]
    fn value_domain_parsing() {
        let d = ValueDomain::parse_list("1,0,1").unwrap();
        assert_eq!(d.values(), &[Value::Int(0), Value::Int(1)]);
        assert!(ValueDomain::parse_list("").is_err());
        assert!(ValueDomain::parse_list("x").is_err());
    }
}
