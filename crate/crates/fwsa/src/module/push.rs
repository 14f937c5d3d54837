//! Pushforward to plain finite sets.
//!
//! For a module M over the labeled surjection category, the pushforward
//! assigns to [n] the direct sum of M(n, l) over all labelings l of [n].
//! A surjection f: [n] -> [m] acts blockwise: the summand at a labeling l
//! of [n] receives from the unique labeling of [m] whose value at each
//! point is the sum of l over the fiber, which is exactly the labeling
//! making f a labeled morphism.

use crate::category::{all_vectors, Category, CategoryTag, LabeledSet, Morphism};
use crate::linalg::ExactMatrix;
use crate::{Error, Result};

use super::{BasisLabel, Module, ModuleKernel};

pub(crate) struct PushKernel {
    inner: Module,
    category: Category,
}

impl PushKernel {
    pub(crate) fn new(inner: Module) -> Result<Self> {
        if inner.category().tag() != CategoryTag::Fws {
            return Err(Error::CategoryMismatch(
                "pushforward requires a module over the labeled surjection category".into(),
            ));
        }
        let category = Category::new(inner.group().clone(), CategoryTag::Fs);
        Ok(Self { inner, category })
    }

    /// Summands at [n]: (labels, dimension, row offset), labelings in
    /// lexicographic order.
    fn blocks(&self, n: usize) -> Vec<(Vec<usize>, usize, usize)> {
        let order = self.inner.group().order();
        let mut out = Vec::new();
        let mut offset = 0;
        for labels in all_vectors(order, n) {
            let d = self.inner.dim(&LabeledSet::new(labels.clone()));
            out.push((labels, d, offset));
            offset += d;
        }
        out
    }
}

impl ModuleKernel for PushKernel {
    fn category(&self) -> &Category {
        &self.category
    }

    fn exponent(&self) -> u64 {
        self.inner.exponent()
    }

    fn dim(&self, x: &LabeledSet) -> usize {
        self.blocks(x.size()).iter().map(|(_, d, _)| d).sum()
    }

    fn basis(&self, x: &LabeledSet) -> Vec<BasisLabel> {
        let mut out = Vec::new();
        for (labels, _, _) in self.blocks(x.size()) {
            for b in self.inner.basis(&LabeledSet::new(labels.clone())) {
                out.push(BasisLabel::Component {
                    labels: labels.clone(),
                    inner: Box::new(b),
                });
            }
        }
        out
    }

    fn act(&self, m: &Morphism, src: &LabeledSet, tgt: &LabeledSet) -> ExactMatrix {
        let group = self.inner.group();
        let n = src.size();
        let mm = tgt.size();
        let src_blocks = self.blocks(n);
        let tgt_blocks = self.blocks(mm);
        let rows: usize = src_blocks.iter().map(|(_, d, _)| d).sum();
        let cols: usize = tgt_blocks.iter().map(|(_, d, _)| d).sum();
        let order = group.order();
        let mut out = ExactMatrix::zero(rows, cols, self.exponent());
        let mut columns = vec![Vec::new(); cols];
        for (lx, dx, soff) in &src_blocks {
            if *dx == 0 {
                continue;
            }
            let mut ly = vec![0usize; mm];
            for (i, &v) in lx.iter().enumerate() {
                ly[m.map[i]] = group.add(ly[m.map[i]], v);
            }
            // Radix index of the pushed labeling locates the target block.
            let tidx = ly.iter().fold(0usize, |acc, &d| acc * order + d);
            let (_, dy, toff) = &tgt_blocks[tidx];
            if *dy == 0 {
                continue;
            }
            let block = self
                .inner
                .act(m, &LabeledSet::new(lx.clone()), &LabeledSet::new(ly))
                .expect("pushed labeling makes the morphism labeled");
            for jb in 0..*dy {
                for (ib, v) in block.column(jb) {
                    columns[toff + jb].push((soff + ib, v.clone()));
                }
            }
        }
        for (j, col) in columns.into_iter().enumerate() {
            out.set_column(j, col);
        }
        out
    }

    fn describe(&self) -> String {
        format!("push:{}", self.inner.describe())
    }
}

#[cfg(test)]
mod tests {
    use super::super::Module;
    use crate::category::{Category, CategoryTag, LabeledSet};
    use crate::group::FiniteAbelianGroup;

    fn z2() -> FiniteAbelianGroup {
        FiniteAbelianGroup::new(vec![2]).unwrap()
    }

    #[test]
    fn trivial_group_pushforward_matches_inner() {
        let g = FiniteAbelianGroup::trivial();
        let inner = Module::v0_tilde(g.clone()).coinvariants().unwrap();
        let m = inner.pushforward().unwrap();
        for n in 0..=5usize {
            let x = LabeledSet::zero(n);
            assert_eq!(m.dim(&x), inner.dim(&x));
        }
    }

    #[test]
    fn pushforward_counts_zero_sum_labelings() {
        // Coinvariants of the transition module contribute one dimension per
        // zero-sum labeling, so the pushforward counts them: 2^(n-1).
        let m = Module::v0_bar(z2())
            .coinvariants()
            .unwrap()
            .pushforward()
            .unwrap();
        assert_eq!(m.dim(&LabeledSet::zero(1)), 1);
        assert_eq!(m.dim(&LabeledSet::zero(2)), 2);
        assert_eq!(m.dim(&LabeledSet::zero(3)), 4);
        assert_eq!(m.dim(&LabeledSet::zero(4)), 8);
    }

    #[test]
    fn pushforward_action_functorial() {
        let g = z2();
        let m = Module::v0_bar(g.clone())
            .coinvariants()
            .unwrap()
            .pushforward()
            .unwrap();
        let cat = Category::new(g.clone(), CategoryTag::Fs);
        let x = LabeledSet::zero(3);
        let y = LabeledSet::zero(2);
        let z = LabeledSet::zero(1);
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
    fn pushforward_of_zero_is_zero() {
        let g = z2();
        let m = Module::zero(Category::new(g.clone(), CategoryTag::Fws))
            .pushforward()
            .unwrap();
        for n in 0..=3usize {
            assert_eq!(m.dim(&LabeledSet::zero(n)), 0);
        }
    }

    #[test]
    fn rejects_pointed_input() {
        let m = Module::v0_bar(z2());
        assert!(m.pushforward().is_err());
    }
}
