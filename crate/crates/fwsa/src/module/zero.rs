//! The zero module: every value is the zero vector space.

use crate::category::{Category, LabeledSet, Morphism};
use crate::linalg::ExactMatrix;

use super::{BasisLabel, ModuleKernel};

pub(crate) struct ZeroKernel {
    category: Category,
}

impl ZeroKernel {
    pub(crate) fn new(category: Category) -> Self {
        Self { category }
    }
}

impl ModuleKernel for ZeroKernel {
    fn category(&self) -> &Category {
        &self.category
    }

    fn exponent(&self) -> u64 {
        1
    }

    fn dim(&self, _x: &LabeledSet) -> usize {
        0
    }

    fn basis(&self, _x: &LabeledSet) -> Vec<BasisLabel> {
        Vec::new()
    }

    fn act(&self, _m: &Morphism, _src: &LabeledSet, _tgt: &LabeledSet) -> ExactMatrix {
        ExactMatrix::zero(0, 0, 1)
    }

    fn describe(&self) -> String {
        "zero".to_string()
    }
}
