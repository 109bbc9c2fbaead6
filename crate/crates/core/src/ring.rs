use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::AlgebraError;
use crate::field::{Field, FieldKind};
use crate::monomial::{MonomialOrder, MAX_VARS};

/// Variables, coefficient field and term order of a polynomial ring.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RingDescriptor {
    variables: Vec<String>,
    field: FieldKind,
    order: MonomialOrder,
}

/// Shared handle to a ring; polynomials keep one each.
pub type Ring = Arc<RingDescriptor>;

impl RingDescriptor {
    /// Graded reverse lexicographic ring over the field `F`.
    pub fn new<F: Field, S: AsRef<str>>(variables: &[S]) -> Result<Ring, AlgebraError> {
        Self::with_order(variables, F::kind(), MonomialOrder::Grevlex)
    }

    pub fn with_order<S: AsRef<str>>(
        variables: &[S],
        field: FieldKind,
        order: MonomialOrder,
    ) -> Result<Ring, AlgebraError> {
        let variables: Vec<String> = variables.iter().map(|s| s.as_ref().to_string()).collect();
        if variables.is_empty() {
            return Err(AlgebraError::InvalidRing("no variables".into()));
        }
        if variables.len() > MAX_VARS {
            return Err(AlgebraError::InvalidRing(format!(
                "{} variables; at most {MAX_VARS} supported",
                variables.len()
            )));
        }
        for (i, v) in variables.iter().enumerate() {
            if !is_identifier(v) {
                return Err(AlgebraError::InvalidRing(format!("`{v}` is not an identifier")));
            }
            if variables[..i].contains(v) {
                return Err(AlgebraError::InvalidRing(format!("duplicate variable `{v}`")));
            }
        }
        if let MonomialOrder::Block { split } = order {
            if split == 0 || split >= variables.len() {
                return Err(AlgebraError::InvalidRing(format!("bad block split {split}")));
            }
        }
        Ok(Arc::new(RingDescriptor {
            variables,
            field,
            order,
        }))
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn nvars(&self) -> usize {
        self.variables.len()
    }

    pub fn field(&self) -> FieldKind {
        self.field
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v == name)
    }

    /// A fresh variable prepended and eliminated by a block order.
    pub(crate) fn with_elimination_variable(&self) -> Result<Ring, AlgebraError> {
        let mut name = String::from("t");
        while self.variables.contains(&name) {
            name.push('_');
        }
        let mut vars = vec![name];
        vars.extend(self.variables.iter().cloned());
        Self::with_order(&vars, self.field, MonomialOrder::Block { split: 1 })
    }
}

/// Two handles describe the same ring.
#[inline]
pub fn same_ring(a: &Ring, b: &Ring) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}
