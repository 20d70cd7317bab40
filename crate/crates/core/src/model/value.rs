use std::fmt;

use super::ModelError;

/// A variable name: a non-empty token of letters, digits, `_` and `.`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VariableId(String);

/// Whether `c` may appear in a variable or value token.
pub fn is_token_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '.'
}

fn check_token(s: &str) -> Result<(), ModelError> {
    if s.is_empty() || !s.chars().all(is_token_char) {
        return Err(ModelError::InvalidToken(s.to_string()));
    }
    Ok(())
}

impl VariableId {
    pub fn new(name: impl Into<String>) -> Result<Self, ModelError> {
        let name = name.into();
        check_token(&name)?;
        Ok(VariableId(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for VariableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A value that a variable may receive.
///
/// Sums read as disjunctions ("married + divorced") and complements as
/// "any value but" ("!white"). Terms are never simplified: `!!a` stays a
/// double complement so that printing and parsing round-trip exactly.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ValueTerm {
    Atom(String),
    Sum(Vec<ValueTerm>),
    Complement(Box<ValueTerm>),
}

impl ValueTerm {
    pub fn atom(token: impl Into<String>) -> Result<Self, ModelError> {
        let token = token.into();
        check_token(&token)?;
        Ok(ValueTerm::Atom(token))
    }

    /// Builds a sum; needs at least two members and rejects duplicates.
    pub fn sum(members: Vec<ValueTerm>) -> Result<Self, ModelError> {
        if members.len() < 2 {
            return Err(ModelError::ShortSum);
        }
        for (i, m) in members.iter().enumerate() {
            if members[..i].contains(m) {
                return Err(ModelError::DuplicateSumMember(m.to_string()));
            }
        }
        Ok(ValueTerm::Sum(members))
    }

    pub fn complement(inner: ValueTerm) -> Self {
        ValueTerm::Complement(Box::new(inner))
    }

    pub fn is_atom(&self) -> bool {
        matches!(self, ValueTerm::Atom(_))
    }

    /// Does an observed (atomic) cell value satisfy this term?
    pub fn matches(&self, observed: &str) -> bool {
        match self {
            ValueTerm::Atom(a) => a == observed,
            ValueTerm::Sum(members) => members.iter().any(|m| m.matches(observed)),
            ValueTerm::Complement(inner) => !inner.matches(observed),
        }
    }

    /// Every atom mentioned anywhere in the term.
    pub fn atoms(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            ValueTerm::Atom(a) => out.push(a),
            ValueTerm::Sum(ms) => ms.iter().for_each(|m| m.collect_atoms(out)),
            ValueTerm::Complement(inner) => inner.collect_atoms(out),
        }
    }
}

/// Free-function form of [`ValueTerm::matches`].
pub fn value_matches(term: &ValueTerm, observed: &str) -> bool {
    term.matches(observed)
}

impl fmt::Display for ValueTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValueTerm::Atom(a) => f.write_str(a),
            ValueTerm::Sum(members) => {
                for (i, m) in members.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" + ")?;
                    }
                    match m {
                        ValueTerm::Sum(_) => write!(f, "({m})")?,
                        _ => write!(f, "{m}")?,
                    }
                }
                Ok(())
            }
            ValueTerm::Complement(inner) => match **inner {
                ValueTerm::Sum(_) => write!(f, "!({inner})"),
                _ => write!(f, "!{inner}"),
            },
        }
    }
}

/// `var = value`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Attribution {
    pub var: VariableId,
    pub value: ValueTerm,
}

impl Attribution {
    pub fn new(var: VariableId, value: ValueTerm) -> Self {
        Attribution { var, value }
    }
}

impl fmt::Display for Attribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.var, self.value)
    }
}
