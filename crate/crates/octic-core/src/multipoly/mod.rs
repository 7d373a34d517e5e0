//! Sparse multivariate polynomials over exact coefficient fields, with a
//! Gröbner-basis kernel (reduction, Buchberger, elimination, saturation,
//! radical membership).
//!
//! Coefficients are anything implementing [`Scalar`]; the two instances used
//! by the toolkit are arbitrary-precision rationals and [`crate::gf::Fq`].

mod groebner;
mod monomial;
mod order;
mod parse;
mod poly;
mod roots;
mod scalar;

pub use groebner::{
    buchberger, eliminate, ideal_membership, radical_membership, saturate_by, GroebnerBasis, Ideal,
};
pub use monomial::Monomial;
pub use order::MonomialOrder;
pub use parse::parse_rational_poly;
pub use poly::{Poly, QPoly};
pub use roots::{rational_roots, univariate_gcd, RationalRoots};
pub use scalar::{Rational, Scalar};

use std::sync::Arc;

/// An ordered list of variable names shared by all polynomials of a ring.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VarSet {
    names: Vec<String>,
}

/// Shared handle to a [`VarSet`].
pub type Vars = Arc<VarSet>;

impl VarSet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Vars {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        assert!(!names.is_empty(), "variable list must be nonempty");
        let mut seen = std::collections::HashSet::new();
        for n in &names {
            assert!(seen.insert(n.clone()), "duplicate variable {n}");
        }
        Arc::new(VarSet { names })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// New set with `fresh` prepended; used for the saturation/radical tricks.
    pub fn with_prefix(&self, fresh: &str) -> Vars {
        assert!(
            self.index_of(fresh).is_none(),
            "fresh variable {fresh} already present"
        );
        let mut names = vec![fresh.to_string()];
        names.extend(self.names.iter().cloned());
        Arc::new(VarSet { names })
    }

    /// Variables after dropping the first `k` names.
    pub fn suffix(&self, k: usize) -> Vars {
        assert!(k < self.names.len(), "cannot drop all variables");
        Arc::new(VarSet {
            names: self.names[k..].to_vec(),
        })
    }
}

/// Convenience constructor: `vars(["x", "y"])`.
pub fn vars<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Vars {
    VarSet::new(names)
}

/// Errors from polynomial and ideal operations.
#[derive(Debug, thiserror::Error)]
pub enum MultipolyError {
    #[error("variable lists differ: [{0}] vs [{1}]")]
    VarMismatch(String, String),
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("odd vanishing order: {poly} is not divisible by {var}^{power}")]
    NotDivisible {
        poly: String,
        var: String,
        power: u32,
    },
    #[error("the zero polynomial is not a valid input here")]
    ZeroPolynomial,
    #[error("expected a univariate polynomial, got one involving {0}")]
    NotUnivariate(String),
    #[error("coefficient too large for rational root search: {0}")]
    CoefficientTooLarge(String),
    #[error("cannot saturate by zero")]
    SaturateByZero,
    #[error("{0}")]
    Parse(String),
}

pub(crate) fn join_names(vs: &VarSet) -> String {
    vs.names().join(",")
}

pub(crate) fn check_same_vars(a: &Vars, b: &Vars) -> Result<(), MultipolyError> {
    if Arc::ptr_eq(a, b) || a == b {
        Ok(())
    } else {
        Err(MultipolyError::VarMismatch(join_names(a), join_names(b)))
    }
}
