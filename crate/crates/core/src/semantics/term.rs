use super::graph::{explore, Graph, Lts};
use super::SemanticsError;
use crate::labels::{dual, Action, Label, ValueDomain};
use crate::syntax::{canonical, substitute_proc, substitute_value, Process};

/// The early-style LTS of processes. States are canonical forms.
#[derive(Clone, Debug)]
pub struct TermLts {
    pub values: ValueDomain,
}

impl TermLts {
    pub fn new(values: ValueDomain) -> Self {
        TermLts { values }
    }
}

impl Lts for TermLts {
    type State = Process;

    fn step(&self, p: &Process) -> Result<Vec<(Label, Process)>, SemanticsError> {
        term_step(p, &self.values)
    }
}

/// All transitions of `p`, targets in canonical form.
pub fn term_step(p: &Process, values: &ValueDomain) -> Result<Vec<(Label, Process)>, SemanticsError> {
    let mut out: Vec<(Label, Process)> =
        raw_step(p, values)?.into_iter().map(|(l, q)| (l, canonical(&q))).collect();
    out.sort();
    out.dedup();
    Ok(out)
}

fn raw_step(p: &Process, values: &ValueDomain) -> Result<Vec<(Label, Process)>, SemanticsError> {
    Ok(match p {
        Process::Nil | Process::One => Vec::new(),
        Process::Var(x) => return Err(SemanticsError::OpenTerm(format!("free process variable {x}"))),
        Process::Input(c, x, body) => values
            .values()
            .iter()
            .map(|v| (Label::Visible(Action::input(c, *v)), substitute_value(body, x, *v)))
            .collect(),
        Process::Output(c, e, body) => {
            let v = e.as_value().ok_or_else(|| SemanticsError::OpenTerm(format!("free value variable in {p}")))?;
            vec![(Label::Visible(Action::output(c, v)), (**body).clone())]
        }
        Process::Tau(body) => vec![(Label::Tau, (**body).clone())],
        Process::Rec(x, body) => vec![(Label::Tau, substitute_proc(body, x, p))],
        Process::If(be, l, r) => match be.eval() {
            Some(true) => raw_step(l, values)?,
            Some(false) => raw_step(r, values)?,
            None => return Err(SemanticsError::OpenTerm(format!("undecided condition {be}"))),
        },
        Process::Sum(l, r) => {
            let mut out = raw_step(l, values)?;
            out.extend(raw_step(r, values)?);
            out
        }
        Process::Par(l, r) => {
            let ls = raw_step(l, values)?;
            let rs = raw_step(r, values)?;
            let mut out = Vec::new();
            for (a, l2) in &ls {
                out.push((a.clone(), Process::par(l2.clone(), (**r).clone())));
            }
            for (b, r2) in &rs {
                out.push((b.clone(), Process::par((**l).clone(), r2.clone())));
            }
            for (a, l2) in &ls {
                let Label::Visible(a) = a else { continue };
                let co = Label::Visible(dual(a));
                for (b, r2) in &rs {
                    if *b == co {
                        out.push((Label::Tau, Process::par(l2.clone(), r2.clone())));
                    }
                }
            }
            out
        }
        Process::Restrict(c, body) => raw_step(body, values)?
            .into_iter()
            .filter(|(l, _)| l.action().is_none_or(|a| a.channel != *c))
            .map(|(l, q)| (l, Process::restrict(c, q)))
            .collect(),
    })
}

/// Explores the term LTS from the canonical form of `p`.
pub fn term_graph(p: &Process, values: &ValueDomain, bound: usize) -> Result<Graph<Process>, SemanticsError> {
    explore(&TermLts::new(values.clone()), canonical(p), bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::labels::Calculus;
    use crate::syntax::parse;

    fn vaccs(src: &str) -> Process {
        canonical(&parse(src, Calculus::Vaccs, &ValueDomain::binary()).unwrap())
    }

    fn steps(src: &str) -> Vec<(String, String)> {
        term_step(&vaccs(src), &ValueDomain::binary())
            .unwrap()
            .into_iter()
            .map(|(l, q)| (l.to_string(), q.to_string()))
            .collect()
    }

    #[test]
    fn early_input() {
        assert_eq!(steps("a?(x).a!x.0"), [("a?0".into(), "a!0.0".into()), ("a?1".into(), "a!1.0".into())]);
    }

    #[test]
    fn communication() {
        let s = steps("a!0 | a?(x).1");
        assert!(s.contains(&("tau".into(), "1".into())));
        assert!(s.contains(&("a!0".into(), "a?(x0).1".into())));
    }

    #[test]
    fn unfolding_is_a_tau_step() {
        assert_eq!(steps("rec X.X"), [("tau".into(), "rec X0.X0".into())]);
        let g = term_graph(&vaccs("rec X.X"), &ValueDomain::binary(), 10).unwrap();
        assert!(g.is_complete());
        assert_eq!(g.len(), 1);
        assert!(g.has_edge(0, &Label::Tau, 0));
    }

    #[test]
    fn restriction_hides_both_polarities() {
        assert!(steps("new a.(a!0 | b?(x).0)").iter().all(|(l, _)| !l.starts_with('a')));
        assert!(steps("new a.(a!0 | a?(x).1)").contains(&("tau".into(), "1".into())));
    }

    #[test]
    fn conditional_follows_branch() {
        let s = steps("a?(x).(if x = 0 then b!1 else 1)");
        assert!(s.contains(&("a?0".into(), "b!1.0".into())));
        assert!(s.contains(&("a?1".into(), "1".into())));
    }

    #[test]
    fn growth_is_reported_as_truncation() {
        let p = parse("rec X.(a!unit.0 | X)", Calculus::Ccs, &ValueDomain::unit()).unwrap();
        let g = term_graph(&p, &ValueDomain::unit(), 10).unwrap();
        assert!(!g.is_complete());
        let nil = term_graph(&Process::Nil, &ValueDomain::unit(), 10).unwrap();
        assert!(nil.is_complete() && nil.len() == 1 && nil.transition_count() == 0);
    }
}
