//! The two transition modules over the pointed surjection category.
//!
//! The orbit module assigns to (X, l) the free vector space on
//! A^X / A (functions h: X -> A modulo constant translation) when |X| >= 3
//! and the labels sum to zero, and zero otherwise; a morphism (f, g) sends
//! the orbit of h to the orbit of h o f + g.
//!
//! The transition-datum module assigns to (X, l) the free vector space on
//! (A/H)^X / (A/H), where H is the subgroup generated by the labels, for
//! every nonempty X whose labels sum to zero. A morphism (f, g) acts by
//! lifting a representative through the coset representatives of the target
//! quotient, precomposing with f, adding g, and reducing modulo the source
//! subgroup (which contains the target one, since target labels are fiber
//! sums of source labels).
//!
//! Orbit representatives are normalized to take value zero at position 0;
//! bases are ordered lexicographically on the remaining positions.

use crate::category::{Category, CategoryTag, LabeledSet, Morphism};
use crate::cyclo::Cyclo;
use crate::group::FiniteAbelianGroup;
use crate::linalg::ExactMatrix;

use super::{BasisLabel, ModuleKernel};

/// Mixed-radix rank of a digit string, first digit most significant.
fn radix_index(digits: &[usize], base: usize) -> usize {
    digits.iter().fold(0, |acc, &d| acc * base + d)
}

/// Normalized representatives: all vectors of the given length with first
/// coordinate zero, lexicographic order.
fn normalized_reps(base: usize, len: usize) -> Vec<Vec<usize>> {
    if len == 0 {
        return Vec::new();
    }
    crate::category::all_vectors(base, len - 1)
        .into_iter()
        .map(|tail| {
            let mut h = Vec::with_capacity(len);
            h.push(0);
            h.extend(tail);
            h
        })
        .collect()
}

pub(crate) struct V0TildeKernel {
    category: Category,
}

impl V0TildeKernel {
    pub(crate) fn new(group: FiniteAbelianGroup) -> Self {
        Self {
            category: Category::new(group, CategoryTag::Tws),
        }
    }

    fn group(&self) -> &FiniteAbelianGroup {
        self.category.group()
    }

    fn supported(&self, x: &LabeledSet) -> bool {
        x.size() >= 3 && x.total(self.group()) == 0
    }
}

impl ModuleKernel for V0TildeKernel {
    fn category(&self) -> &Category {
        &self.category
    }

    fn exponent(&self) -> u64 {
        1
    }

    fn dim(&self, x: &LabeledSet) -> usize {
        if self.supported(x) {
            self.group().order().pow((x.size() - 1) as u32)
        } else {
            0
        }
    }

    fn basis(&self, x: &LabeledSet) -> Vec<BasisLabel> {
        if !self.supported(x) {
            return Vec::new();
        }
        normalized_reps(self.group().order(), x.size())
            .into_iter()
            .map(BasisLabel::Orbit)
            .collect()
    }

    fn act(&self, m: &Morphism, src: &LabeledSet, tgt: &LabeledSet) -> ExactMatrix {
        let ds = self.dim(src);
        let dt = self.dim(tgt);
        let mut out = ExactMatrix::zero(ds, dt, 1);
        if ds == 0 || dt == 0 {
            return out;
        }
        let group = self.group();
        let order = group.order();
        for (j, h) in normalized_reps(order, tgt.size()).into_iter().enumerate() {
            // h o f + g, renormalized at position 0.
            let pulled: Vec<usize> = m
                .map
                .iter()
                .zip(&m.pointing)
                .map(|(&y, &g)| group.add(h[y], g))
                .collect();
            let c = pulled[0];
            let norm: Vec<usize> = pulled.iter().map(|&v| group.sub(v, c)).collect();
            let row = radix_index(&norm[1..], order);
            out.set_column(j, vec![(row, Cyclo::one(1))]);
        }
        out
    }

    fn describe(&self) -> String {
        "v0tilde".to_string()
    }
}

pub(crate) struct V0BarKernel {
    category: Category,
}

impl V0BarKernel {
    pub(crate) fn new(group: FiniteAbelianGroup) -> Self {
        Self {
            category: Category::new(group, CategoryTag::Tws),
        }
    }

    fn group(&self) -> &FiniteAbelianGroup {
        self.category.group()
    }

    fn supported(&self, x: &LabeledSet) -> bool {
        x.size() >= 1 && x.total(self.group()) == 0
    }
}

impl ModuleKernel for V0BarKernel {
    fn category(&self) -> &Category {
        &self.category
    }

    fn exponent(&self) -> u64 {
        1
    }

    fn dim(&self, x: &LabeledSet) -> usize {
        if !self.supported(x) {
            return 0;
        }
        let (_, quot) = self.group().subgroup_and_quotient(x.labels());
        quot.count().pow((x.size() - 1) as u32)
    }

    fn basis(&self, x: &LabeledSet) -> Vec<BasisLabel> {
        if !self.supported(x) {
            return Vec::new();
        }
        let (_, quot) = self.group().subgroup_and_quotient(x.labels());
        normalized_reps(quot.count(), x.size())
            .into_iter()
            .map(BasisLabel::Class)
            .collect()
    }

    fn act(&self, m: &Morphism, src: &LabeledSet, tgt: &LabeledSet) -> ExactMatrix {
        let ds = self.dim(src);
        let dt = self.dim(tgt);
        let mut out = ExactMatrix::zero(ds, dt, 1);
        if ds == 0 || dt == 0 {
            return out;
        }
        let group = self.group();
        let (_, q_src) = group.subgroup_and_quotient(src.labels());
        let (_, q_tgt) = group.subgroup_and_quotient(tgt.labels());
        let base = q_src.count();
        for (j, alpha) in normalized_reps(q_tgt.count(), tgt.size())
            .into_iter()
            .enumerate()
        {
            // Lift through target coset representatives, pull back along the
            // map, perturb by the pointing, reduce modulo the source
            // subgroup, renormalize at position 0.
            let pulled: Vec<usize> = m
                .map
                .iter()
                .zip(&m.pointing)
                .map(|(&y, &g)| q_src.coset_of[group.add(q_tgt.reps[alpha[y]], g)])
                .collect();
            let c = pulled[0];
            let norm: Vec<usize> = pulled.iter().map(|&v| q_src.sub(group, v, c)).collect();
            let row = radix_index(&norm[1..], base);
            out.set_column(j, vec![(row, Cyclo::one(1))]);
        }
        out
    }

    fn describe(&self) -> String {
        "v0bar".to_string()
    }
}

/// The quotient map from the orbit module to the transition-datum module at
/// one object: the orbit of h goes to the orbit of h reduced modulo the
/// subgroup generated by the labels. Returns a (transition dim) by
/// (orbit dim) matrix in canonical coordinates; it intertwines the two
/// actions.
pub fn v0_quotient_map(group: &FiniteAbelianGroup, x: &LabeledSet) -> ExactMatrix {
    let tilde = V0TildeKernel::new(group.clone());
    let bar = V0BarKernel::new(group.clone());
    let mut perm: Vec<usize> = (0..x.size()).collect();
    perm.sort_by_key(|&i| (x.label(i), i));
    let cx = x.select(&perm);
    let dt = tilde.dim(&cx);
    let db = bar.dim(&cx);
    let mut out = ExactMatrix::zero(db, dt, 1);
    if dt == 0 || db == 0 {
        return out;
    }
    let (_, quot) = group.subgroup_and_quotient(cx.labels());
    let base = quot.count();
    for (j, h) in normalized_reps(group.order(), cx.size())
        .into_iter()
        .enumerate()
    {
        let reduced: Vec<usize> = h.iter().map(|&v| quot.coset_of[v]).collect();
        let c = reduced[0];
        let norm: Vec<usize> = reduced.iter().map(|&v| quot.sub(group, v, c)).collect();
        let row = radix_index(&norm[1..], base);
        out.set_column(j, vec![(row, Cyclo::one(1))]);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::Module;
    use super::*;

    fn z(n: u64) -> FiniteAbelianGroup {
        FiniteAbelianGroup::new(vec![n]).unwrap()
    }

    #[test]
    fn orbit_module_dims() {
        let m = Module::v0_tilde(z(2));
        assert_eq!(m.dim(&LabeledSet::new(vec![0, 0, 0])), 4);
        assert_eq!(m.dim(&LabeledSet::new(vec![1, 1, 1])), 0);
        assert_eq!(m.dim(&LabeledSet::new(vec![0, 0])), 0);
        assert_eq!(m.dim(&LabeledSet::new(vec![1, 1, 1, 1])), 8);
    }

    #[test]
    fn transition_module_dims() {
        let m = Module::v0_bar(z(2));
        assert_eq!(m.dim(&LabeledSet::new(vec![1, 1, 0])), 1);
        assert_eq!(m.dim(&LabeledSet::new(vec![0, 0, 0])), 4);
        assert_eq!(m.dim(&LabeledSet::new(vec![1, 0, 0])), 0);
        assert_eq!(m.dim(&LabeledSet::new(vec![0])), 1);
        assert_eq!(m.dim(&LabeledSet::new(vec![1])), 0);
        assert_eq!(m.dim(&LabeledSet::new(vec![1, 1])), 1);

        let t = Module::v0_bar(FiniteAbelianGroup::trivial());
        for n in 1..=5usize {
            assert_eq!(t.dim(&LabeledSet::zero(n)), 1);
        }
    }

    #[test]
    fn orbit_action_composes() {
        let g = z(2);
        let m = Module::v0_tilde(g.clone());
        let cat = Category::new(g.clone(), CategoryTag::Tws);
        let x = LabeledSet::new(vec![0, 0, 1, 1]);
        let y = LabeledSet::new(vec![0, 0, 0]);
        let z3 = LabeledSet::new(vec![0, 0, 0]);
        let homxy = cat.hom(&x, &y);
        let homyz = cat.hom(&y, &z3);
        assert!(!homxy.is_empty() && !homyz.is_empty());
        for m1 in homxy.iter().take(6) {
            for m2 in homyz.iter().take(6) {
                let comp = crate::category::compose(&g, m2, m1).unwrap();
                let lhs = m.act(&comp, &x, &z3).unwrap();
                let rhs = m
                    .act(m1, &x, &y)
                    .unwrap()
                    .mul(&m.act(m2, &y, &z3).unwrap())
                    .unwrap();
                assert_eq!(*lhs, rhs);
            }
        }
    }

    #[test]
    fn quotient_map_intertwines() {
        let g = z(4);
        let tilde = Module::v0_tilde(g.clone());
        let bar = Module::v0_bar(g.clone());
        let cat = Category::new(g.clone(), CategoryTag::Tws);
        let x = LabeledSet::new(vec![0, 0, 2, 2]);
        let y = LabeledSet::new(vec![0, 0, 0]);
        let tau_x = v0_quotient_map(&g, &x);
        let tau_y = v0_quotient_map(&g, &y);
        for m in cat.hom(&x, &y).iter().take(20) {
            let lhs = tau_x.mul(&tilde.act(m, &x, &y).unwrap()).unwrap();
            let rhs = bar.act(m, &x, &y).unwrap().mul(&tau_y).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn transition_action_respects_quotients() {
        // Over Z/4 with labels generating the order-2 subgroup, the action
        // factors through cosets of size 2.
        let g = z(4);
        let m = Module::v0_bar(g.clone());
        let x = LabeledSet::new(vec![2, 2, 0]);
        assert_eq!(m.dim(&x), 4);
        let id = Morphism::identity(&g, &x);
        // A pointing inside the subgroup acts trivially.
        let inside = Morphism {
            pointing: vec![2, 0, 0],
            ..id.clone()
        };
        let mat = m.act(&inside, &x, &x).unwrap();
        assert_eq!(*mat, ExactMatrix::identity(4, 1));
        // A pointing outside the subgroup permutes the basis nontrivially.
        let outside = Morphism {
            pointing: vec![1, 0, 0],
            ..id
        };
        let mat = m.act(&outside, &x, &x).unwrap();
        assert_ne!(*mat, ExactMatrix::identity(4, 1));
        assert_eq!(mat.rank(), 4);
    }
}
