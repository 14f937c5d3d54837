//! Restriction along the pointing-free inclusion: a module over the pointed
//! category becomes a module over the plain labeled surjection category by
//! forgetting that morphisms with nonzero pointing ever act.

use crate::category::{Category, CategoryTag, LabeledSet, Morphism};
use crate::linalg::ExactMatrix;
use crate::{Error, Result};

use super::{BasisLabel, Module, ModuleKernel};

pub(crate) struct RestrictFwsKernel {
    inner: Module,
    category: Category,
}

impl RestrictFwsKernel {
    pub(crate) fn new(inner: Module) -> Result<Self> {
        if inner.category().tag() != CategoryTag::Tws {
            return Err(Error::CategoryMismatch(
                "restriction requires a module over the pointed category".into(),
            ));
        }
        let category = Category::new(inner.group().clone(), CategoryTag::Fws);
        Ok(Self { inner, category })
    }
}

impl ModuleKernel for RestrictFwsKernel {
    fn category(&self) -> &Category {
        &self.category
    }

    fn exponent(&self) -> u64 {
        self.inner.exponent()
    }

    fn dim(&self, x: &LabeledSet) -> usize {
        self.inner.dim(x)
    }

    fn basis(&self, x: &LabeledSet) -> Vec<BasisLabel> {
        self.inner.basis(x)
    }

    fn act(&self, m: &Morphism, src: &LabeledSet, tgt: &LabeledSet) -> ExactMatrix {
        let mat = self
            .inner
            .act(m, src, tgt)
            .expect("pointing-free morphism acts on the inner module");
        (*mat).clone()
    }

    fn describe(&self) -> String {
        format!("restrict:{}", self.inner.describe())
    }
}
