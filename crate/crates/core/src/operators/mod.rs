//! Operator definitions and floating-point evaluation.

mod evaluator;
mod function;
mod positivity;
mod sequence;
pub mod weights;

use std::fmt;

pub use evaluator::{apply, quad_config_for, Evaluator};
pub use function::{corpus, RealFn, TestFunction, MAX_DERIVATIVE};
pub use positivity::{default_grid, empirical_positivity, PositivityScan};
pub use sequence::{RationalFn, SequenceSpec};
pub use weights::{mod1_weight, mod2_weight, split_weights};

/// Which operator to apply.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum OperatorKind {
    /// `V_n(f; x) = sum_k p_{n,k}(x) f(k/n)`.
    Baskakov,
    /// `(n-1) sum_k p_{n,k}(x) int p_{n,k}(t) f(t) dt`.
    BaskakovDurrmeyer,
    /// First-order modification with weights
    /// `a(x,n) p_{n+1,k} + b(x,n) p_{n+1,k-1}`.
    Mod1(SequenceSpec),
    /// Second-order modification with the fixed sequences.
    Mod2,
    /// `A_{n,1}`, the `a1`-part of the split `V_{n,1} = -A_{n,1} - B_{n,1}`.
    SplitA(SequenceSpec),
    /// `B_{n,1}`, the remaining part of the split.
    SplitB(SequenceSpec),
}

impl OperatorKind {
    pub fn label(&self) -> &'static str {
        match self {
            OperatorKind::Baskakov => "baskakov",
            OperatorKind::BaskakovDurrmeyer => "durrmeyer",
            OperatorKind::Mod1(_) => "mod1",
            OperatorKind::Mod2 => "mod2",
            OperatorKind::SplitA(_) => "split-a",
            OperatorKind::SplitB(_) => "split-b",
        }
    }

    pub fn sequences(&self) -> Option<&SequenceSpec> {
        match self {
            OperatorKind::Mod1(s) | OperatorKind::SplitA(s) | OperatorKind::SplitB(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_durrmeyer_type(&self) -> bool {
        !matches!(self, OperatorKind::Baskakov)
    }
}

impl fmt::Display for OperatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sequences() {
            Some(s) => write!(f, "{}({s})", self.label()),
            None => write!(f, "{}", self.label()),
        }
    }
}
