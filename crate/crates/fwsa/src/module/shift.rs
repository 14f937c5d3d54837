//! Shift functors: precomposition with disjoint union by one labeled point.
//!
//! The shifted module evaluates the inner module at the object extended by
//! one point carrying the shift label, prepended at position 0. A morphism
//! extends by sending the new source point to the new target point with
//! pointing zero; the new fiber is the singleton star, so label sums still
//! match and functoriality is inherited verbatim.

use crate::category::{Category, LabeledSet, Morphism};
use crate::linalg::ExactMatrix;
use crate::{Error, Result};

use super::{BasisLabel, Module, ModuleKernel};

pub(crate) struct ShiftKernel {
    inner: Module,
    label: usize,
}

impl ShiftKernel {
    pub(crate) fn new(inner: Module, label: usize) -> Result<Self> {
        if label >= inner.group().order() {
            return Err(Error::Validation(format!(
                "shift label index {label} out of range"
            )));
        }
        if inner.category().tag().zero_labeled() && label != 0 {
            return Err(Error::Validation(
                "shifts over zero-labeled categories must use the zero label".into(),
            ));
        }
        Ok(Self { inner, label })
    }

    fn extend(&self, x: &LabeledSet) -> LabeledSet {
        let mut labels = Vec::with_capacity(x.size() + 1);
        labels.push(self.label);
        labels.extend_from_slice(x.labels());
        LabeledSet::new(labels)
    }
}

impl ModuleKernel for ShiftKernel {
    fn category(&self) -> &Category {
        self.inner.category()
    }

    fn exponent(&self) -> u64 {
        self.inner.exponent()
    }

    fn dim(&self, x: &LabeledSet) -> usize {
        self.inner.dim(&self.extend(x))
    }

    fn basis(&self, x: &LabeledSet) -> Vec<BasisLabel> {
        self.inner
            .basis(&self.extend(x))
            .into_iter()
            .map(|b| BasisLabel::Shifted(Box::new(b)))
            .collect()
    }

    fn act(&self, m: &Morphism, src: &LabeledSet, tgt: &LabeledSet) -> ExactMatrix {
        let ext = Morphism {
            map: std::iter::once(0)
                .chain(m.map.iter().map(|&y| y + 1))
                .collect(),
            pointing: std::iter::once(0)
                .chain(m.pointing.iter().copied())
                .collect(),
            tgt_size: m.tgt_size + 1,
        };
        let mat = self
            .inner
            .act(&ext, &self.extend(src), &self.extend(tgt))
            .expect("extended morphism is valid");
        (*mat).clone()
    }

    fn describe(&self) -> String {
        format!(
            "shift:{}:{}",
            self.inner.group().literal(self.label),
            self.inner.describe()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::super::Module;
    use crate::category::{Category, CategoryTag, LabeledSet, Morphism};
    use crate::group::FiniteAbelianGroup;
    use crate::linalg::ExactMatrix;

    fn z2() -> FiniteAbelianGroup {
        FiniteAbelianGroup::new(vec![2]).unwrap()
    }

    #[test]
    fn shift_evaluates_at_extended_object() {
        let m = Module::v0_tilde(z2()).shift(1).unwrap();
        // (1,0) extends to labels (1,1,0): size 3, sum zero, dim 4.
        assert_eq!(m.dim(&LabeledSet::new(vec![1, 0])), 4);
        assert_eq!(m.dim(&LabeledSet::new(vec![0, 0])), 0);
    }

    #[test]
    fn shift_of_zero_is_zero() {
        let g = z2();
        let zm = Module::zero(Category::new(g.clone(), CategoryTag::Tws));
        let s = zm.shift(1).unwrap();
        for n in 0..4usize {
            for x in Category::new(g.clone(), CategoryTag::Tws).objects_of_size(n) {
                assert_eq!(s.dim(&x), 0);
            }
        }
    }

    #[test]
    fn shift_identity_is_identity() {
        let g = z2();
        let m = Module::v0_bar(g.clone()).shift(0).unwrap();
        let x = LabeledSet::new(vec![1, 1, 0]);
        let d = m.dim(&x);
        assert!(d > 0);
        let id = Morphism::identity(&g, &x);
        assert_eq!(*m.act(&id, &x, &x).unwrap(), ExactMatrix::identity(d, 1));
    }

    #[test]
    fn shift_functoriality() {
        let g = z2();
        let m = Module::v0_bar(g.clone()).shift(1).unwrap();
        let cat = Category::new(g.clone(), CategoryTag::Tws);
        let x = LabeledSet::new(vec![1, 0, 0]);
        let y = LabeledSet::new(vec![1, 0]);
        let z = LabeledSet::new(vec![1]);
        for m1 in cat.hom(&x, &y) {
            for m2 in cat.hom(&y, &z) {
                let comp = crate::category::compose(&g, &m2, &m1).unwrap();
                let lhs = m.act(&comp, &x, &z).unwrap();
                let rhs = m
                    .act(&m1, &x, &y)
                    .unwrap()
                    .mul(&m.act(&m2, &y, &z).unwrap())
                    .unwrap();
                assert_eq!(*lhs, rhs);
            }
        }
    }

    #[test]
    fn rejects_bad_labels() {
        let m = Module::v0_bar(z2());
        assert!(m.shift(2).is_err());
        let fs = Module::zero(Category::new(
            FiniteAbelianGroup::new(vec![2]).unwrap(),
            CategoryTag::Fs,
        ));
        assert!(fs.shift(1).is_err());
        assert!(fs.shift(0).is_ok());
    }
}
