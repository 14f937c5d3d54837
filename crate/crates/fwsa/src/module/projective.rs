//! Principal projective modules: the value at Y is the free vector space on
//! Hom(Y, apex), and a morphism m: X -> Y acts by precomposition
//! Hom(Y, apex) -> Hom(X, apex), f |-> f o m.

use std::collections::HashMap;

use crate::category::{compose, Category, LabeledSet, Morphism};
use crate::cyclo::Cyclo;
use crate::linalg::ExactMatrix;

use super::{BasisLabel, ModuleKernel};

pub(crate) struct ProjectiveKernel {
    category: Category,
    apex: LabeledSet,
}

impl ProjectiveKernel {
    pub(crate) fn new(category: Category, apex: LabeledSet) -> Self {
        Self { category, apex }
    }
}

impl ModuleKernel for ProjectiveKernel {
    fn category(&self) -> &Category {
        &self.category
    }

    fn exponent(&self) -> u64 {
        1
    }

    fn dim(&self, x: &LabeledSet) -> usize {
        self.category.hom(x, &self.apex).len()
    }

    fn basis(&self, x: &LabeledSet) -> Vec<BasisLabel> {
        self.category
            .hom(x, &self.apex)
            .into_iter()
            .map(BasisLabel::Hom)
            .collect()
    }

    fn act(&self, m: &Morphism, src: &LabeledSet, tgt: &LabeledSet) -> ExactMatrix {
        let src_hom = self.category.hom(src, &self.apex);
        let tgt_hom = self.category.hom(tgt, &self.apex);
        let index: HashMap<&Morphism, usize> =
            src_hom.iter().enumerate().map(|(i, f)| (f, i)).collect();
        let mut out = ExactMatrix::zero(src_hom.len(), tgt_hom.len(), 1);
        let group = self.category.group();
        for (j, f) in tgt_hom.iter().enumerate() {
            let composite = compose(group, f, m).expect("composable by construction");
            let i = *index
                .get(&composite)
                .expect("precomposition stays in the hom set");
            out.set_column(j, vec![(i, Cyclo::one(1))]);
        }
        out
    }

    fn describe(&self) -> String {
        format!("ppx:{}", self.apex.literal(self.category.group()))
    }
}

#[cfg(test)]
mod tests {
    use super::super::Module;
    use crate::category::{Category, CategoryTag, LabeledSet};
    use crate::group::FiniteAbelianGroup;

    #[test]
    fn one_point_apex_over_plain_sets() {
        let g = FiniteAbelianGroup::trivial();
        let cat = Category::new(g, CategoryTag::Fs);
        let p = Module::projective(cat, LabeledSet::zero(1)).unwrap();
        for n in 1..=5usize {
            assert_eq!(p.dim(&LabeledSet::zero(n)), 1);
        }
        assert_eq!(p.dim(&LabeledSet::zero(0)), 0);
    }

    #[test]
    fn two_point_apex_at_three_points() {
        let g = FiniteAbelianGroup::trivial();
        let cat = Category::new(g, CategoryTag::Fs);
        let p = Module::projective(cat, LabeledSet::zero(2)).unwrap();
        assert_eq!(p.dim(&LabeledSet::zero(3)), 6);
    }

    #[test]
    fn dim_matches_hom_count() {
        // Dimension agrees with the hom-set size everywhere, by definition.
        let g = FiniteAbelianGroup::new(vec![2]).unwrap();
        let cat = Category::new(g.clone(), CategoryTag::Tws);
        let apex = LabeledSet::new(vec![0]);
        let p = Module::projective(cat.clone(), apex.clone()).unwrap();
        for n in 0..=3usize {
            for y in cat.objects_of_size(n) {
                assert_eq!(p.dim(&y), cat.hom(&y, &apex).len());
            }
        }
        // One surjection [3] -> [1] with matching sums, 8 pointings.
        let y = LabeledSet::new(vec![1, 1, 0]);
        assert_eq!(p.dim(&y), 8);
    }

    #[test]
    fn action_is_a_permutation_of_basis() {
        let g = FiniteAbelianGroup::new(vec![2]).unwrap();
        let cat = Category::new(g.clone(), CategoryTag::Tws);
        let p = Module::projective(cat.clone(), LabeledSet::new(vec![0, 0])).unwrap();
        let x = LabeledSet::new(vec![0, 0, 0]);
        let y = LabeledSet::new(vec![0, 0]);
        for m in cat.hom(&x, &y) {
            let mat = p.act(&m, &x, &y).unwrap();
            // Precomposition by a fixed morphism is injective on hom sets.
            assert_eq!(mat.rank(), p.dim(&y));
            for j in 0..mat.cols() {
                assert_eq!(mat.column(j).len(), 1);
            }
        }
    }
}
