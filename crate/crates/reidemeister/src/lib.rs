//! Reidemeister numbers and Reidemeister spectra of split metacyclic groups.
//!
//! The groups handled here are semidirect products `(C_n x C_(p^m)) : C_p`
//! with `p` prime, `gcd(n, p) = 1` and a non-trivial action of `C_p` on the
//! cyclic normal subgroup of order `N = n * p^m`. For an automorphism `phi`,
//! the Reidemeister number `R(phi)` counts the orbits of `x ~ g x phi(g)^-1`,
//! and the Reidemeister spectrum is the set of all `R(phi)`.
//!
//! Three independent routes to `R(phi)` are implemented and cross-checked:
//! twisted-conjugacy orbit counting, counting conjugacy classes fixed by
//! `phi`, and counting irreducible characters fixed by `phi`. Closed-form
//! spectra per action case live in [`spectrum`], with constructive witness
//! automorphisms realising every predicted value.

pub mod autos;
pub mod characters;
pub mod group;
pub mod modarith;
pub mod spectrum;

pub use autos::{Automorphism, TwistedClasses};
pub use group::{ConjugacyClasses, FixedPart, GroupElement, SmcGroup};
pub use spectrum::{CaseTag, Spectrum};

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// Parameters violate a documented precondition.
    #[error("invalid input: {0}")]
    Invalid(String),
    /// An enumeration would exceed the configured resource budget.
    #[error("{what} needs {needed}, exceeding the budget of {budget}")]
    BudgetExceeded {
        what: &'static str,
        needed: u64,
        budget: u64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

/// Resource limits for the exhaustive operations. Formula evaluation is
/// cheap; everything that walks a whole group or automorphism group checks
/// against these bounds first and fails with [`Error::BudgetExceeded`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Largest group order the element-wise operations will touch.
    pub max_group_order: u64,
    /// Largest automorphism count an enumeration may produce.
    pub max_automorphisms: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            max_group_order: 1_000_000,
            max_automorphisms: 100_000,
        }
    }
}

impl Budget {
    pub fn with_group_order(max_group_order: u64) -> Self {
        Self {
            max_group_order,
            ..Self::default()
        }
    }

    pub(crate) fn check_group(&self, order: u64, what: &'static str) -> Result<()> {
        if order > self.max_group_order {
            return Err(Error::BudgetExceeded {
                what,
                needed: order,
                budget: self.max_group_order,
            });
        }
        Ok(())
    }

    pub(crate) fn check_autos(&self, count: u64, what: &'static str) -> Result<()> {
        if count > self.max_automorphisms {
            return Err(Error::BudgetExceeded {
                what,
                needed: count,
                budget: self.max_automorphisms,
            });
        }
        Ok(())
    }
}
