use std::collections::BTreeSet;
use std::fmt;

use crate::labels::{Channel, Value};

/// A value position: a literal or a bound variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ValueExpr {
    Lit(Value),
    Var(String),
}

impl ValueExpr {
    pub fn as_value(&self) -> Option<Value> {
        match self {
            ValueExpr::Lit(v) => Some(*v),
            ValueExpr::Var(_) => None,
        }
    }
}

impl fmt::Display for ValueExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValueExpr::Lit(v) => v.fmt(f),
            ValueExpr::Var(x) => f.write_str(x),
        }
    }
}

/// `lhs = rhs`, the only boolean expression of the language.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoolExpr {
    pub lhs: ValueExpr,
    pub rhs: ValueExpr,
}

impl BoolExpr {
    pub fn eq(lhs: ValueExpr, rhs: ValueExpr) -> Self {
        BoolExpr { lhs, rhs }
    }

    /// `None` while either side is still a variable.
    pub fn eval(&self) -> Option<bool> {
        Some(self.lhs.as_value()? == self.rhs.as_value()?)
    }
}

impl fmt::Display for BoolExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Process {
    Nil,
    One,
    Input(Channel, String, Box<Process>),
    Output(Channel, ValueExpr, Box<Process>),
    Tau(Box<Process>),
    Sum(Box<Process>, Box<Process>),
    Par(Box<Process>, Box<Process>),
    Restrict(Channel, Box<Process>),
    If(BoolExpr, Box<Process>, Box<Process>),
    Rec(String, Box<Process>),
    Var(String),
}

impl Process {
    pub fn input(c: &Channel, x: &str, body: Process) -> Process {
        Process::Input(c.clone(), x.to_string(), Box::new(body))
    }

    pub fn output(c: &Channel, v: ValueExpr, body: Process) -> Process {
        Process::Output(c.clone(), v, Box::new(body))
    }

    /// The output atom `c!v.0`.
    pub fn atom(c: &Channel, v: Value) -> Process {
        Process::Output(c.clone(), ValueExpr::Lit(v), Box::new(Process::Nil))
    }

    pub fn tau(body: Process) -> Process {
        Process::Tau(Box::new(body))
    }

    pub fn sum(l: Process, r: Process) -> Process {
        Process::Sum(Box::new(l), Box::new(r))
    }

    pub fn par(l: Process, r: Process) -> Process {
        Process::Par(Box::new(l), Box::new(r))
    }

    pub fn restrict(c: &Channel, body: Process) -> Process {
        Process::Restrict(c.clone(), Box::new(body))
    }

    pub fn if_then_else(be: BoolExpr, p: Process, q: Process) -> Process {
        Process::If(be, Box::new(p), Box::new(q))
    }

    pub fn rec(x: &str, body: Process) -> Process {
        Process::Rec(x.to_string(), Box::new(body))
    }

    /// Right-nested sum of the given guards; `0` when empty.
    pub fn sum_of(items: impl IntoIterator<Item = Process>) -> Process {
        let mut items: Vec<Process> = items.into_iter().collect();
        let Some(mut acc) = items.pop() else { return Process::Nil };
        while let Some(p) = items.pop() {
            acc = Process::sum(p, acc);
        }
        acc
    }

    /// Right-nested parallel composition; `0` when empty.
    pub fn par_of(items: impl IntoIterator<Item = Process>) -> Process {
        let mut items: Vec<Process> = items.into_iter().collect();
        let Some(mut acc) = items.pop() else { return Process::Nil };
        while let Some(p) = items.pop() {
            acc = Process::par(p, acc);
        }
        acc
    }

    /// Guards are the forms allowed as operands of `+`.
    pub fn is_guard(&self) -> bool {
        matches!(
            self,
            Process::Nil | Process::One | Process::Input(..) | Process::Output(..) | Process::Tau(_) | Process::Sum(..)
        )
    }

    pub fn is_closed(&self) -> bool {
        self.free_value_vars().is_empty() && self.free_process_vars().is_empty()
    }

    pub fn free_value_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        collect_free_value_vars(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn free_process_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        collect_free_process_vars(self, &mut Vec::new(), &mut out);
        out
    }

    /// All channel names of the term, bound or free.
    pub fn all_names(&self) -> BTreeSet<Channel> {
        let mut out = BTreeSet::new();
        self.visit(&mut |p| match p {
            Process::Input(c, ..) | Process::Output(c, ..) | Process::Restrict(c, _) => {
                out.insert(c.clone());
            }
            _ => {}
        });
        out
    }

    fn visit(&self, f: &mut impl FnMut(&Process)) {
        f(self);
        match self {
            Process::Nil | Process::One | Process::Var(_) => {}
            Process::Input(_, _, b) | Process::Output(_, _, b) | Process::Tau(b) | Process::Restrict(_, b) => b.visit(f),
            Process::Rec(_, b) => b.visit(f),
            Process::Sum(l, r) | Process::Par(l, r) | Process::If(_, l, r) => {
                l.visit(f);
                r.visit(f);
            }
        }
    }

    pub fn size(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }
}

fn collect_free_value_vars(p: &Process, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
    let note = |e: &ValueExpr, bound: &Vec<String>, out: &mut BTreeSet<String>| {
        if let ValueExpr::Var(x) = e {
            if !bound.contains(x) {
                out.insert(x.clone());
            }
        }
    };
    match p {
        Process::Nil | Process::One | Process::Var(_) => {}
        Process::Input(_, x, b) => {
            bound.push(x.clone());
            collect_free_value_vars(b, bound, out);
            bound.pop();
        }
        Process::Output(_, e, b) => {
            note(e, bound, out);
            collect_free_value_vars(b, bound, out);
        }
        Process::Tau(b) | Process::Restrict(_, b) | Process::Rec(_, b) => collect_free_value_vars(b, bound, out),
        Process::Sum(l, r) | Process::Par(l, r) => {
            collect_free_value_vars(l, bound, out);
            collect_free_value_vars(r, bound, out);
        }
        Process::If(be, l, r) => {
            note(&be.lhs, bound, out);
            note(&be.rhs, bound, out);
            collect_free_value_vars(l, bound, out);
            collect_free_value_vars(r, bound, out);
        }
    }
}

fn collect_free_process_vars(p: &Process, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
    match p {
        Process::Nil | Process::One => {}
        Process::Var(x) => {
            if !bound.contains(x) {
                out.insert(x.clone());
            }
        }
        Process::Rec(x, b) => {
            bound.push(x.clone());
            collect_free_process_vars(b, bound, out);
            bound.pop();
        }
        Process::Input(_, _, b) | Process::Output(_, _, b) | Process::Tau(b) | Process::Restrict(_, b) => {
            collect_free_process_vars(b, bound, out)
        }
        Process::Sum(l, r) | Process::Par(l, r) | Process::If(_, l, r) => {
            collect_free_process_vars(l, bound, out);
            collect_free_process_vars(r, bound, out);
        }
    }
}

/// Free channel names; `new a` binds `a`.
pub fn free_names(p: &Process) -> BTreeSet<Channel> {
    match p {
        Process::Nil | Process::One | Process::Var(_) => BTreeSet::new(),
        Process::Input(c, _, b) | Process::Output(c, _, b) => {
            let mut s = free_names(b);
            s.insert(c.clone());
            s
        }
        Process::Tau(b) | Process::Rec(_, b) => free_names(b),
        Process::Restrict(c, b) => {
            let mut s = free_names(b);
            s.remove(c);
            s
        }
        Process::Sum(l, r) | Process::Par(l, r) | Process::If(_, l, r) => {
            let mut s = free_names(l);
            s.extend(free_names(r));
            s
        }
    }
}

fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    (0..)
        .map(|i| format!("{base}_{i}"))
        .find(|n| !avoid.contains(n))
        .expect("unbounded supply of names")
}

fn subst_expr(e: &ValueExpr, x: &str, v: &ValueExpr) -> ValueExpr {
    match e {
        ValueExpr::Var(y) if y == x => v.clone(),
        other => other.clone(),
    }
}

/// Replaces free occurrences of the value variable `x` by `v`.
pub fn substitute_value(p: &Process, x: &str, v: Value) -> Process {
    substitute_value_expr(p, x, &ValueExpr::Lit(v))
}

fn substitute_value_expr(p: &Process, x: &str, v: &ValueExpr) -> Process {
    match p {
        Process::Nil | Process::One | Process::Var(_) => p.clone(),
        Process::Input(c, y, b) if y == x => Process::Input(c.clone(), y.clone(), b.clone()),
        Process::Input(c, y, b) => match v {
            ValueExpr::Var(z) if z == y => {
                // rename the binder so that `v` is not captured
                let mut avoid = b.free_value_vars();
                avoid.insert(z.clone());
                let y2 = fresh_name(y, &avoid);
                let renamed = substitute_value_expr(b, y, &ValueExpr::Var(y2.clone()));
                Process::Input(c.clone(), y2, Box::new(substitute_value_expr(&renamed, x, v)))
            }
            _ => Process::Input(c.clone(), y.clone(), Box::new(substitute_value_expr(b, x, v))),
        },
        Process::Output(c, e, b) => Process::Output(c.clone(), subst_expr(e, x, v), Box::new(substitute_value_expr(b, x, v))),
        Process::Tau(b) => Process::tau(substitute_value_expr(b, x, v)),
        Process::Sum(l, r) => Process::sum(substitute_value_expr(l, x, v), substitute_value_expr(r, x, v)),
        Process::Par(l, r) => Process::par(substitute_value_expr(l, x, v), substitute_value_expr(r, x, v)),
        Process::Restrict(c, b) => Process::restrict(c, substitute_value_expr(b, x, v)),
        Process::If(be, l, r) => Process::if_then_else(
            BoolExpr::eq(subst_expr(&be.lhs, x, v), subst_expr(&be.rhs, x, v)),
            substitute_value_expr(l, x, v),
            substitute_value_expr(r, x, v),
        ),
        Process::Rec(y, b) => Process::rec(y, substitute_value_expr(b, x, v)),
    }
}

/// Replaces free occurrences of the process variable `x` by `r`, renaming
/// binders of `p` that would capture free variables of `r`.
pub fn substitute_proc(p: &Process, x: &str, r: &Process) -> Process {
    let r_proc_fv = r.free_process_vars();
    let r_val_fv = r.free_value_vars();
    subst_proc(p, x, r, &r_proc_fv, &r_val_fv)
}

fn subst_proc(p: &Process, x: &str, r: &Process, pfv: &BTreeSet<String>, vfv: &BTreeSet<String>) -> Process {
    match p {
        Process::Nil | Process::One => p.clone(),
        Process::Var(y) if y == x => r.clone(),
        Process::Var(_) => p.clone(),
        Process::Rec(y, _) if y == x => p.clone(),
        Process::Rec(y, b) if pfv.contains(y) && b.free_process_vars().contains(x) => {
            let mut avoid = b.free_process_vars();
            avoid.extend(pfv.iter().cloned());
            let y2 = fresh_name(y, &avoid);
            let renamed = substitute_proc(b, y, &Process::Var(y2.clone()));
            Process::rec(&y2, subst_proc(&renamed, x, r, pfv, vfv))
        }
        Process::Rec(y, b) => Process::rec(y, subst_proc(b, x, r, pfv, vfv)),
        Process::Input(c, y, b) if vfv.contains(y) && b.free_process_vars().contains(x) => {
            let mut avoid = b.free_value_vars();
            avoid.extend(vfv.iter().cloned());
            let y2 = fresh_name(y, &avoid);
            let renamed = substitute_value_expr(b, y, &ValueExpr::Var(y2.clone()));
            Process::Input(c.clone(), y2, Box::new(subst_proc(&renamed, x, r, pfv, vfv)))
        }
        Process::Input(c, y, b) => Process::Input(c.clone(), y.clone(), Box::new(subst_proc(b, x, r, pfv, vfv))),
        Process::Output(c, e, b) => Process::Output(c.clone(), e.clone(), Box::new(subst_proc(b, x, r, pfv, vfv))),
        Process::Tau(b) => Process::tau(subst_proc(b, x, r, pfv, vfv)),
        Process::Sum(l, rr) => Process::sum(subst_proc(l, x, r, pfv, vfv), subst_proc(rr, x, r, pfv, vfv)),
        Process::Par(l, rr) => Process::par(subst_proc(l, x, r, pfv, vfv), subst_proc(rr, x, r, pfv, vfv)),
        Process::Restrict(c, b) => Process::restrict(c, subst_proc(b, x, r, pfv, vfv)),
        Process::If(be, l, rr) => {
            Process::if_then_else(be.clone(), subst_proc(l, x, r, pfv, vfv), subst_proc(rr, x, r, pfv, vfv))
        }
    }
}

/// Renames free occurrences of channel `from` to `to`.
pub(crate) fn rename_channel(p: &Process, from: &Channel, to: &Channel) -> Process {
    let go = |b: &Process| rename_channel(b, from, to);
    let swap = |c: &Channel| if c == from { to.clone() } else { c.clone() };
    match p {
        Process::Nil | Process::One | Process::Var(_) => p.clone(),
        Process::Restrict(c, _) if c == from => p.clone(),
        Process::Restrict(c, b) => Process::restrict(c, go(b)),
        Process::Input(c, x, b) => Process::Input(swap(c), x.clone(), Box::new(go(b))),
        Process::Output(c, e, b) => Process::Output(swap(c), e.clone(), Box::new(go(b))),
        Process::Tau(b) => Process::tau(go(b)),
        Process::Sum(l, r) => Process::sum(go(l), go(r)),
        Process::Par(l, r) => Process::par(go(l), go(r)),
        Process::If(be, l, r) => Process::if_then_else(be.clone(), go(l), go(r)),
        Process::Rec(x, b) => Process::rec(x, go(b)),
    }
}

/// The success predicate: `1` is good, restriction preserves it, `|` and
/// `+` are disjunctive, a conditional follows its selected branch.
pub fn good(p: &Process) -> bool {
    match p {
        Process::One => true,
        Process::Restrict(_, b) => good(b),
        Process::Par(l, r) | Process::Sum(l, r) => good(l) || good(r),
        Process::If(be, l, r) => match be.eval() {
            Some(true) => good(l),
            Some(false) => good(r),
            None => false,
        },
        _ => false,
    }
}

// Precedence levels used by the printer: 0 = `|`, 1 = `+`, 2 = prefix/atom.
fn write_at(p: &Process, level: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let own = match p {
        Process::Par(..) => 0,
        Process::Sum(..) => 1,
        _ => 2,
    };
    if own < level {
        f.write_str("(")?;
        write_at(p, own, f)?;
        return f.write_str(")");
    }
    match p {
        Process::Nil => f.write_str("0"),
        Process::One => f.write_str("1"),
        Process::Var(x) => f.write_str(x),
        Process::Input(c, x, b) => {
            write!(f, "{c}?({x}).")?;
            write_at(b, 2, f)
        }
        Process::Output(c, e, b) => {
            write!(f, "{c}!{e}.")?;
            write_at(b, 2, f)
        }
        Process::Tau(b) => {
            f.write_str("tau.")?;
            write_at(b, 2, f)
        }
        Process::Restrict(c, b) => {
            write!(f, "new {c}.")?;
            write_at(b, 2, f)
        }
        Process::Rec(x, b) => {
            write!(f, "rec {x}.")?;
            write_at(b, 2, f)
        }
        Process::If(be, l, r) => {
            write!(f, "if {be} then ")?;
            write_at(l, 0, f)?;
            f.write_str(" else ")?;
            write_at(r, 2, f)
        }
        Process::Sum(l, r) => {
            write_at(l, 2, f)?;
            f.write_str(" + ")?;
            write_at(r, 1, f)
        }
        Process::Par(l, r) => {
            write_at(l, 1, f)?;
            f.write_str(" | ")?;
            write_at(r, 0, f)
        }
    }
}

impl fmt::Display for Process {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_at(self, 0, f)
    }
}

impl serde::Serialize for Process {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ch(s: &str) -> Channel {
        Channel::new(s).unwrap()
    }

    fn var(x: &str) -> ValueExpr {
        ValueExpr::Var(x.into())
    }

    #[test]
    fn value_substitution() {
        let a = ch("a");
        let p = Process::output(&a, var("x"), Process::Nil);
        assert_eq!(substitute_value(&p, "x", Value::Int(1)), Process::atom(&a, Value::Int(1)));

        let bound = Process::input(&a, "x", p.clone());
        assert_eq!(substitute_value(&bound, "x", Value::Int(1)), bound);

        let cond = Process::if_then_else(
            BoolExpr::eq(var("x"), ValueExpr::Lit(Value::Int(0))),
            Process::One,
            Process::Nil,
        );
        let expected = Process::if_then_else(
            BoolExpr::eq(ValueExpr::Lit(Value::Int(0)), ValueExpr::Lit(Value::Int(0))),
            Process::One,
            Process::Nil,
        );
        assert_eq!(substitute_value(&cond, "x", Value::Int(0)), expected);
    }

    #[test]
    fn process_substitution() {
        let a = ch("a");
        assert_eq!(substitute_proc(&Process::Var("X".into()), "X", &Process::Nil), Process::Nil);
        assert_eq!(substitute_proc(&Process::Nil, "X", &Process::One), Process::Nil);

        let body = Process::input(&a, "x", Process::Var("X".into()));
        let rec = Process::rec("X", body.clone());
        let unfolded = substitute_proc(&body, "X", &rec);
        assert_eq!(unfolded, Process::input(&a, "x", rec.clone()));
        // shadowed binder left alone
        assert_eq!(substitute_proc(&rec, "X", &Process::Nil), rec);
    }

    #[test]
    fn capture_is_avoided() {
        let a = ch("a");
        // rec Y.(X | Y)[Y/X] must rename the inner binder
        let p = Process::rec("Y", Process::par(Process::Var("X".into()), Process::Var("Y".into())));
        let out = substitute_proc(&p, "X", &Process::Var("Y".into()));
        let Process::Rec(binder, body) = &out else { panic!() };
        assert_ne!(binder, "Y");
        assert!(body.free_process_vars().contains("Y"));
        // a?(y).X with X := a!y.0 must rename y
        let q = Process::input(&a, "y", Process::Var("X".into()));
        let out = substitute_proc(&q, "X", &Process::output(&a, var("y"), Process::Nil));
        assert_eq!(out.free_value_vars(), ["y".to_string()].into());
    }

    #[test]
    fn names() {
        let a = ch("a");
        let b = ch("b");
        assert_eq!(free_names(&Process::atom(&a, Value::Int(0))), [a.clone()].into());
        assert!(free_names(&Process::restrict(&a, Process::atom(&a, Value::Int(0)))).is_empty());
        let p = Process::input(&a, "x", Process::output(&b, var("x"), Process::Nil));
        assert_eq!(free_names(&p), [a, b].into());
    }

    #[test]
    fn good_clauses() {
        let a = ch("a");
        assert!(good(&Process::One));
        assert!(!good(&Process::input(&a, "x", Process::One)));
        assert!(good(&Process::sum(Process::Nil, Process::One)));
        assert!(good(&Process::restrict(&a, Process::par(Process::Nil, Process::One))));
        let t = BoolExpr::eq(ValueExpr::Lit(Value::Int(0)), ValueExpr::Lit(Value::Int(0)));
        assert!(good(&Process::if_then_else(t.clone(), Process::One, Process::Nil)));
        assert!(!good(&Process::if_then_else(t, Process::Nil, Process::One)));
        assert!(!good(&Process::tau(Process::One)));
    }

    #[test]
    fn printing_respects_precedence() {
        let a = ch("a");
        let p = Process::par(
            Process::sum(Process::tau(Process::One), Process::Nil),
            Process::input(&a, "x", Process::par(Process::Nil, Process::One)),
        );
        assert_eq!(p.to_string(), "tau.1 + 0 | a?(x).(0 | 1)");
    }
}
