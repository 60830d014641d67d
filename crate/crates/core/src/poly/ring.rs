use std::fmt;
use std::sync::Arc;

use super::{Field, MonomialOrder, PolyError};

/// A polynomial ring `κ[x_1..x_n]` together with the active monomial order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ring {
    vars: Vec<String>,
    field: Field,
    order: MonomialOrder,
}

impl Ring {
    pub fn new(vars: Vec<String>, field: Field, order: MonomialOrder) -> Result<Arc<Ring>, PolyError> {
        for (i, v) in vars.iter().enumerate() {
            if !is_identifier(v) {
                return Err(PolyError::BadVariable(v.clone()));
            }
            if vars[..i].contains(v) {
                return Err(PolyError::DuplicateVariable(v.clone()));
            }
        }
        Ok(Arc::new(Ring { vars, field, order }))
    }

    /// Convenience constructor for tests and examples; panics on bad names.
    pub fn with_vars(names: &[&str], field: Field, order: MonomialOrder) -> Arc<Ring> {
        Ring::new(names.iter().map(|s| s.to_string()).collect(), field, order)
            .expect("valid variable names")
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// Same variables and field, different order.
    pub fn with_order(&self, order: MonomialOrder) -> Arc<Ring> {
        Arc::new(Ring {
            vars: self.vars.clone(),
            field: self.field,
            order,
        })
    }

    /// Appends further variables after the existing ones.
    pub fn extend(&self, more: &[String]) -> Result<Arc<Ring>, PolyError> {
        let mut vars = self.vars.clone();
        vars.extend(more.iter().cloned());
        Ring::new(vars, self.field, self.order)
    }
}

pub(crate) fn same_ring(a: &Arc<Ring>, b: &Arc<Ring>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}] ({})", self.field, self.vars.join(", "), self.order)
    }
}
