//! Propositional formulas over named variables.
//!
//! Conjunction and disjunction are n-ary; an empty conjunction is true and an
//! empty disjunction is false. Negation is a unary node so arbitrary nesting
//! depth is representable as written.

mod parse;
mod print;

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

pub use parse::parse_formula;
pub(crate) use parse::FormulaParser;

/// Upper bound on the variables of a single formula for exhaustive
/// relevance and constancy checks.
pub const DEFAULT_RELEVANCE_CAP: usize = 20;

/// Name of a propositional variable. Equality is byte equality of the name.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(Arc<str>);

impl VarId {
    /// # Panics
    /// Panics if `name` is empty.
    pub fn new(name: impl AsRef<str>) -> Self {
        let name = name.as_ref();
        assert!(!name.is_empty(), "variable names must be nonempty");
        VarId(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// True when the name can be written without quotes.
    pub fn is_plain(&self) -> bool {
        crate::lex::is_ident(&self.0) && &*self.0 != "TRUE" && &*self.0 != "FALSE"
    }
}

impl From<&str> for VarId {
    fn from(s: &str) -> Self {
        VarId::new(s)
    }
}

impl From<String> for VarId {
    fn from(s: String) -> Self {
        VarId::new(s)
    }
}

impl fmt::Debug for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_plain() {
            f.write_str(&self.0)
        } else {
            f.write_str("\"")?;
            for c in self.0.chars() {
                if c == '"' || c == '\\' {
                    f.write_str("\\")?;
                }
                write!(f, "{c}")?;
            }
            f.write_str("\"")
        }
    }
}

/// Assignment of truth values to variables. Used both as a total valuation
/// and, for [`Formula::eval_partial`], as a partial one.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Valuation(BTreeMap<VarId, bool>);

impl Valuation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, var: VarId, value: bool) -> Option<bool> {
        self.0.insert(var, value)
    }

    pub fn get(&self, var: &VarId) -> Option<bool> {
        self.0.get(var).copied()
    }

    pub fn contains(&self, var: &VarId) -> bool {
        self.0.contains_key(var)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&VarId, bool)> {
        self.0.iter().map(|(k, v)| (k, *v))
    }

    /// Restriction to the given variables (those not mapped are skipped).
    pub fn restrict<'a>(&self, vars: impl IntoIterator<Item = &'a VarId>) -> Valuation {
        vars.into_iter()
            .filter_map(|v| self.get(v).map(|b| (v.clone(), b)))
            .collect()
    }
}

impl FromIterator<(VarId, bool)> for Valuation {
    fn from_iter<I: IntoIterator<Item = (VarId, bool)>>(iter: I) -> Self {
        Valuation(iter.into_iter().collect())
    }
}

impl<'a> FromIterator<(&'a str, bool)> for Valuation {
    fn from_iter<I: IntoIterator<Item = (&'a str, bool)>>(iter: I) -> Self {
        Valuation(iter.into_iter().map(|(k, v)| (VarId::new(k), v)).collect())
    }
}

/// Kleene strong three-valued truth.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThreeValued {
    True,
    False,
    Unknown,
}

impl From<bool> for ThreeValued {
    fn from(b: bool) -> Self {
        if b {
            ThreeValued::True
        } else {
            ThreeValued::False
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum FormulaError {
    #[error("variable `{0}` has no value")]
    UnmappedVariable(VarId),
    #[error("{count} variables exceed the exhaustive-check cap of {cap}")]
    CapExceeded { count: usize, cap: usize },
    #[error("truth table has {got} rows, expected {expected}")]
    TableLength { expected: usize, got: usize },
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Var(VarId),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => f.write_str("True"),
            Formula::False => f.write_str("False"),
            Formula::Var(v) => write!(f, "Var({v})"),
            Formula::Not(g) => write!(f, "Not({g:?})"),
            Formula::And(cs) => {
                f.write_str("And")?;
                f.debug_list().entries(cs).finish()
            }
            Formula::Or(cs) => {
                f.write_str("Or")?;
                f.debug_list().entries(cs).finish()
            }
        }
    }
}

impl Formula {
    pub fn var(name: impl Into<VarId>) -> Formula {
        Formula::Var(name.into())
    }

    pub fn constant(value: bool) -> Formula {
        if value {
            Formula::True
        } else {
            Formula::False
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    /// Negated variable.
    pub fn neg(name: impl Into<VarId>) -> Formula {
        Formula::not(Formula::var(name))
    }

    /// Conjunction of `items`; a single conjunct is returned as is.
    pub fn conjoin(items: impl IntoIterator<Item = Formula>) -> Formula {
        let mut items: Vec<Formula> = items.into_iter().collect();
        if items.len() == 1 {
            items.pop().unwrap()
        } else {
            Formula::And(items)
        }
    }

    pub fn as_constant(&self) -> Option<bool> {
        match self {
            Formula::True => Some(true),
            Formula::False => Some(false),
            _ => None,
        }
    }

    /// Classical evaluation. Every variable reached must be mapped.
    pub fn eval(&self, v: &Valuation) -> Result<bool, FormulaError> {
        self.eval_with(&|x| v.get(x))
    }

    pub fn eval_with(&self, lookup: &dyn Fn(&VarId) -> Option<bool>) -> Result<bool, FormulaError> {
        Ok(match self {
            Formula::True => true,
            Formula::False => false,
            Formula::Var(x) => lookup(x).ok_or_else(|| FormulaError::UnmappedVariable(x.clone()))?,
            Formula::Not(g) => !g.eval_with(lookup)?,
            Formula::And(cs) => {
                // evaluate all children so unmapped variables are always reported
                let mut acc = true;
                for c in cs {
                    acc &= c.eval_with(lookup)?;
                }
                acc
            }
            Formula::Or(cs) => {
                let mut acc = false;
                for c in cs {
                    acc |= c.eval_with(lookup)?;
                }
                acc
            }
        })
    }

    /// Kleene evaluation under a partial valuation.
    pub fn eval_partial(&self, pv: &Valuation) -> ThreeValued {
        match self {
            Formula::True => ThreeValued::True,
            Formula::False => ThreeValued::False,
            Formula::Var(x) => pv.get(x).map_or(ThreeValued::Unknown, ThreeValued::from),
            Formula::Not(g) => match g.eval_partial(pv) {
                ThreeValued::True => ThreeValued::False,
                ThreeValued::False => ThreeValued::True,
                ThreeValued::Unknown => ThreeValued::Unknown,
            },
            Formula::And(cs) => {
                let mut out = ThreeValued::True;
                for c in cs {
                    match c.eval_partial(pv) {
                        ThreeValued::False => return ThreeValued::False,
                        ThreeValued::Unknown => out = ThreeValued::Unknown,
                        ThreeValued::True => {}
                    }
                }
                out
            }
            Formula::Or(cs) => {
                let mut out = ThreeValued::False;
                for c in cs {
                    match c.eval_partial(pv) {
                        ThreeValued::True => return ThreeValued::True,
                        ThreeValued::Unknown => out = ThreeValued::Unknown,
                        ThreeValued::False => {}
                    }
                }
                out
            }
        }
    }

    /// Every variable that appears in the tree.
    pub fn occurring(&self) -> BTreeSet<VarId> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<VarId>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Var(x) => {
                out.insert(x.clone());
            }
            Formula::Not(g) => g.collect_vars(out),
            Formula::And(cs) | Formula::Or(cs) => cs.iter().for_each(|c| c.collect_vars(out)),
        }
    }

    pub fn mentions(&self, x: &VarId) -> bool {
        match self {
            Formula::True | Formula::False => false,
            Formula::Var(y) => y == x,
            Formula::Not(g) => g.mentions(x),
            Formula::And(cs) | Formula::Or(cs) => cs.iter().any(|c| c.mentions(x)),
        }
    }

    /// Truth table over `vars`; row `r` assigns `vars[k]` the bit
    /// `(r >> (len - 1 - k)) & 1`, so row 0 is all-false and `vars[0]` is the
    /// most significant column.
    pub fn truth_table(&self, vars: &[VarId], cap: usize) -> Result<Vec<bool>, FormulaError> {
        if vars.len() > cap || vars.len() >= 64 {
            return Err(FormulaError::CapExceeded { count: vars.len(), cap });
        }
        let m = vars.len();
        let index: BTreeMap<&VarId, usize> = vars.iter().enumerate().map(|(k, v)| (v, m - 1 - k)).collect();
        let node = Compiled::compile(self, &|x| index.get(x).copied())?;
        Ok((0..1u64 << m).map(|row| node.eval(row)).collect())
    }

    /// Variables whose value can change the formula's value under some
    /// assignment of the others, found by exhaustive enumeration.
    pub fn relevant(&self, cap: usize) -> Result<BTreeSet<VarId>, FormulaError> {
        let vars: Vec<VarId> = self.occurring().into_iter().collect();
        let table = self.truth_table(&vars, cap)?;
        let m = vars.len();
        Ok(vars
            .iter()
            .enumerate()
            .filter(|(k, _)| {
                let bit = 1usize << (m - 1 - k);
                (0..table.len()).any(|row| row & bit == 0 && table[row] != table[row | bit])
            })
            .map(|(_, v)| v.clone())
            .collect())
    }

    /// `Some(b)` iff the formula evaluates to `b` under every assignment.
    pub fn is_semantic_constant(&self, cap: usize) -> Result<Option<bool>, FormulaError> {
        let vars: Vec<VarId> = self.occurring().into_iter().collect();
        let table = self.truth_table(&vars, cap)?;
        let first = table[0];
        Ok(table.iter().all(|&b| b == first).then_some(first))
    }

    /// Replaces every occurrence of `x` by the constant `value`.
    pub fn substitute(&self, x: &VarId, value: bool) -> Formula {
        match self {
            Formula::Var(y) if y == x => Formula::constant(value),
            Formula::True | Formula::False | Formula::Var(_) => self.clone(),
            Formula::Not(g) => Formula::not(g.substitute(x, value)),
            Formula::And(cs) => Formula::And(cs.iter().map(|c| c.substitute(x, value)).collect()),
            Formula::Or(cs) => Formula::Or(cs.iter().map(|c| c.substitute(x, value)).collect()),
        }
    }

    /// Constant folding. The result is equivalent and either a single
    /// constant or free of constant leaves. Single-member junctions unwrap.
    pub fn simplify(&self) -> Formula {
        match self {
            Formula::True | Formula::False | Formula::Var(_) => self.clone(),
            Formula::Not(g) => match g.simplify() {
                Formula::True => Formula::False,
                Formula::False => Formula::True,
                s => Formula::not(s),
            },
            Formula::And(cs) => fold_junction(cs, true, Formula::And),
            Formula::Or(cs) => fold_junction(cs, false, Formula::Or),
        }
    }

    /// Full Shannon expansion of a truth table (row convention as in
    /// [`Formula::truth_table`]). Every listed variable occurs in the result.
    pub fn from_truth_table(vars: &[VarId], table: &[bool]) -> Result<Formula, FormulaError> {
        if vars.len() > DEFAULT_RELEVANCE_CAP {
            return Err(FormulaError::CapExceeded {
                count: vars.len(),
                cap: DEFAULT_RELEVANCE_CAP,
            });
        }
        let expected = 1usize << vars.len();
        if table.len() != expected {
            return Err(FormulaError::TableLength {
                expected,
                got: table.len(),
            });
        }
        Ok(shannon(vars, table))
    }
}

fn shannon(vars: &[VarId], table: &[bool]) -> Formula {
    match vars.split_first() {
        None => Formula::constant(table[0]),
        Some((x, rest)) => {
            let (low, high) = table.split_at(table.len() / 2);
            Formula::Or(vec![
                Formula::And(vec![Formula::Var(x.clone()), shannon(rest, high)]),
                Formula::And(vec![Formula::neg(x.clone()), shannon(rest, low)]),
            ])
        }
    }
}

fn fold_junction(children: &[Formula], neutral: bool, make: fn(Vec<Formula>) -> Formula) -> Formula {
    let mut kept = Vec::with_capacity(children.len());
    for c in children {
        let s = c.simplify();
        match s.as_constant() {
            Some(b) if b == neutral => {}
            Some(_) => return Formula::constant(!neutral),
            None => kept.push(s),
        }
    }
    match kept.len() {
        0 => Formula::constant(neutral),
        1 => kept.pop().unwrap(),
        _ => make(kept),
    }
}

/// Index-based formula for fast repeated evaluation; variable `i` is bit `i`
/// of the assignment word.
#[derive(Clone, Debug)]
pub(crate) enum Compiled {
    Const(bool),
    Var(u32),
    Not(Box<Compiled>),
    And(Vec<Compiled>),
    Or(Vec<Compiled>),
}

impl Compiled {
    pub(crate) fn compile(f: &Formula, index: &dyn Fn(&VarId) -> Option<usize>) -> Result<Compiled, FormulaError> {
        Ok(match f {
            Formula::True => Compiled::Const(true),
            Formula::False => Compiled::Const(false),
            Formula::Var(x) => Compiled::Var(index(x).ok_or_else(|| FormulaError::UnmappedVariable(x.clone()))? as u32),
            Formula::Not(g) => Compiled::Not(Box::new(Compiled::compile(g, index)?)),
            Formula::And(cs) => Compiled::And(
                cs.iter()
                    .map(|c| Compiled::compile(c, index))
                    .collect::<Result<_, _>>()?,
            ),
            Formula::Or(cs) => Compiled::Or(
                cs.iter()
                    .map(|c| Compiled::compile(c, index))
                    .collect::<Result<_, _>>()?,
            ),
        })
    }

    pub(crate) fn eval(&self, bits: u64) -> bool {
        match self {
            Compiled::Const(b) => *b,
            Compiled::Var(i) => bits >> i & 1 == 1,
            Compiled::Not(g) => !g.eval(bits),
            Compiled::And(cs) => cs.iter().all(|c| c.eval(bits)),
            Compiled::Or(cs) => cs.iter().any(|c| c.eval(bits)),
        }
    }
}
