//! Fourier duality for modules on zero-labeled pointed sets.
//!
//! The pointing endomorphisms at a fixed [n] give a representation of A^n on
//! M([n]), which therefore decomposes into isotypic components indexed by
//! characters, i.e. by labelings of [n] in the dual group. The dual module
//! assigns to (X, l) the image of the isotypic projector
//!
//!   pi_l = (1/|A|^n) sum_g conj(chi_l(g)) act(id, g)
//!
//! inside M([n]). A pointing-free surjection f intertwines the pointing
//! actions along precomposition, so it maps the component at l to the sum of
//! components at labelings with fiber sums l; projecting back to the source
//! component therefore defines a functorial action over the labeled
//! surjection category on dual-group labels. Characters are indexed like
//! elements and multiply additively, so the dual category reuses the same
//! group object.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;

use crate::category::{all_vectors, Category, CategoryTag, LabeledSet, Morphism};
use crate::cyclo::Cyclo;
use crate::linalg::{ExactMatrix, Rref, SparseVec};
use crate::{Error, Result};

use super::{BasisLabel, Module, ModuleKernel};

pub(crate) struct FourierKernel {
    inner: Module,
    category: Category,
    e: u64,
    points: Mutex<HashMap<LabeledSet, Arc<FourierPoint>>>,
}

struct FourierPoint {
    /// The isotypic projector on the ambient value, verified idempotent.
    proj: ExactMatrix,
    /// Column basis of the projector image.
    rref: Rref,
}

impl FourierKernel {
    pub(crate) fn new(inner: Module) -> Result<Self> {
        if inner.category().tag() != CategoryTag::FsA {
            return Err(Error::CategoryMismatch(
                "fourier duality requires a module over pointed zero-labeled sets".into(),
            ));
        }
        let e = inner.exponent().lcm(&inner.group().exponent());
        let category = Category::new(inner.group().clone(), CategoryTag::Fws);
        Ok(Self {
            inner,
            category,
            e,
            points: Mutex::new(HashMap::new()),
        })
    }

    fn point(&self, x: &LabeledSet) -> Arc<FourierPoint> {
        if let Some(hit) = self.points.lock().unwrap().get(x) {
            return hit.clone();
        }
        let group = self.inner.group();
        let order = group.order();
        let n = x.size();
        let ambient = LabeledSet::zero(n);
        let d = self.inner.dim(&ambient);
        let chars = group.characters();
        let scale = BigRational::new(
            BigInt::from(1),
            BigInt::from(order).pow(n as u32),
        );
        let mut dense = vec![vec![Cyclo::zero(self.e); d]; d];
        for g in all_vectors(order, n) {
            let mut coeff = Cyclo::one(group.exponent());
            for (i, &gi) in g.iter().enumerate() {
                coeff = coeff
                    .try_mul(&chars[x.label(i)].eval_conj(group, gi))
                    .expect("same field");
            }
            let coeff = coeff.embed(self.e).expect("exponent divides lcm").scale(&scale);
            let mat = self
                .inner
                .act(
                    &Morphism {
                        map: (0..n).collect(),
                        pointing: g,
                        tgt_size: n,
                    },
                    &ambient,
                    &ambient,
                )
                .expect("pointing endomorphism is valid");
            for j in 0..d {
                for (i, v) in mat.column(j) {
                    let term = coeff
                        .try_mul(&v.embed(self.e).expect("exponent divides lcm"))
                        .expect("same field");
                    dense[j][*i] = dense[j][*i].try_add(&term).expect("same field");
                }
            }
        }
        let mut proj = ExactMatrix::zero(d, d, self.e);
        for (j, col) in dense.into_iter().enumerate() {
            let sparse: SparseVec = col
                .into_iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .collect();
            proj.set_column(j, sparse);
        }
        // Idempotence certifies the averaging really is a projector.
        for j in 0..d {
            assert_eq!(
                proj.apply(proj.column(j)),
                *proj.column(j),
                "isotypic averaging must be idempotent"
            );
        }
        let mut rref = Rref::new(d, self.e);
        for j in 0..d {
            rref.insert(proj.column(j));
        }
        let point = Arc::new(FourierPoint { proj, rref });
        self.points.lock().unwrap().insert(x.clone(), point.clone());
        point
    }
}

impl ModuleKernel for FourierKernel {
    fn category(&self) -> &Category {
        &self.category
    }

    fn exponent(&self) -> u64 {
        self.e
    }

    fn dim(&self, x: &LabeledSet) -> usize {
        self.point(x).rref.rank()
    }

    fn basis(&self, x: &LabeledSet) -> Vec<BasisLabel> {
        self.point(x)
            .rref
            .pivot_rows()
            .iter()
            .map(|&r| BasisLabel::Projected(r))
            .collect()
    }

    fn act(&self, m: &Morphism, src: &LabeledSet, tgt: &LabeledSet) -> ExactMatrix {
        let p_src = self.point(src);
        let p_tgt = self.point(tgt);
        let mat = self
            .inner
            .act(m, &LabeledSet::zero(src.size()), &LabeledSet::zero(tgt.size()))
            .expect("pointing-free surjection acts on the inner module");
        let mat = mat.embed(self.e).expect("exponent divides lcm");
        let rows = p_src.rref.rank();
        let cols = p_tgt.rref.rank();
        let mut out = ExactMatrix::zero(rows, cols, self.e);
        for j in 0..cols {
            let moved = mat.apply(&p_tgt.rref.columns()[j]);
            // The image decomposes over source components whose fiber sums
            // give the target labeling; keep the one at the source labels.
            let projected = p_src.proj.apply(&moved);
            let coords = p_src
                .rref
                .express(&projected)
                .expect("projection lands in the component");
            let sparse: SparseVec = coords
                .into_iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .collect();
            out.set_column(j, sparse);
        }
        out
    }

    fn describe(&self) -> String {
        format!("fourier:{}", self.inner.describe())
    }
}
