//! Coinvariants by the pointing action.
//!
//! For a module M over the pointed category, the value of the coinvariants
//! at (X, l) is the quotient of M(X, l) by the span of all differences
//! v - act(id, g)(v). Pointings supported at a single point generate the
//! full relation space, since act(id, -) is a homomorphism from A^X.
//! Pointing-free morphisms descend to the quotients, giving a module over
//! the plain labeled surjection category; descent is checked on every
//! action computation.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::category::{Category, CategoryTag, LabeledSet, Morphism};
use crate::cyclo::Cyclo;
use crate::linalg::{ExactMatrix, QuotientSpace, SparseVec};
use crate::{Error, Result};

use super::{BasisLabel, Module, ModuleKernel};

pub(crate) struct CoinvKernel {
    inner: Module,
    category: Category,
    points: Mutex<HashMap<LabeledSet, Arc<QuotientSpace>>>,
}

impl CoinvKernel {
    pub(crate) fn new(inner: Module) -> Result<Self> {
        if inner.category().tag() != CategoryTag::Tws {
            return Err(Error::CategoryMismatch(
                "coinvariants require a module over the pointed category".into(),
            ));
        }
        let category = Category::new(inner.group().clone(), CategoryTag::Fws);
        Ok(Self {
            inner,
            category,
            points: Mutex::new(HashMap::new()),
        })
    }

    fn point(&self, x: &LabeledSet) -> Arc<QuotientSpace> {
        if let Some(hit) = self.points.lock().unwrap().get(x) {
            return hit.clone();
        }
        let d = self.inner.dim(x);
        let e = self.inner.exponent();
        let order = self.inner.group().order();
        let n = x.size();
        let mut relations: Vec<SparseVec> = Vec::new();
        for p in 0..n {
            for a in 1..order {
                let mut pointing = vec![0usize; n];
                pointing[p] = a;
                let m = Morphism {
                    map: (0..n).collect(),
                    pointing,
                    tgt_size: n,
                };
                let mat = self
                    .inner
                    .act(&m, x, x)
                    .expect("pointing endomorphism is valid");
                for j in 0..d {
                    let mut col: SparseVec = vec![(j, Cyclo::one(e))];
                    for (i, v) in mat.column(j) {
                        match col.iter_mut().find(|(r, _)| r == i) {
                            Some((_, cur)) => {
                                *cur = cur.try_sub(v).expect("same field");
                            }
                            None => col.push((*i, v.neg())),
                        }
                    }
                    col.retain(|(_, v)| !v.is_zero());
                    col.sort_by_key(|(r, _)| *r);
                    if !col.is_empty() {
                        relations.push(col);
                    }
                }
            }
        }
        let q = Arc::new(QuotientSpace::from_relations(d, e, relations.iter()));
        self.points.lock().unwrap().insert(x.clone(), q.clone());
        q
    }
}

impl ModuleKernel for CoinvKernel {
    fn category(&self) -> &Category {
        &self.category
    }

    fn exponent(&self) -> u64 {
        self.inner.exponent()
    }

    fn dim(&self, x: &LabeledSet) -> usize {
        self.point(x).dim
    }

    fn basis(&self, x: &LabeledSet) -> Vec<BasisLabel> {
        self.point(x)
            .free_rows
            .iter()
            .map(|&r| BasisLabel::Projected(r))
            .collect()
    }

    fn act(&self, m: &Morphism, src: &LabeledSet, tgt: &LabeledSet) -> ExactMatrix {
        let q_src = self.point(src);
        let q_tgt = self.point(tgt);
        let mat = self
            .inner
            .act(m, src, tgt)
            .expect("pointing-free morphism acts on the inner module");
        // Descent: the action must carry target relations into source
        // relations; otherwise the quotient construction is inconsistent.
        for rel in q_tgt.relation_basis() {
            let image = mat.apply(rel);
            assert!(
                q_src.project(&image).is_empty(),
                "coinvariant action failed to descend to the quotient"
            );
        }
        q_src
            .projection()
            .mul(&mat)
            .and_then(|p| p.mul(q_tgt.section()))
            .expect("shapes agree by construction")
    }

    fn describe(&self) -> String {
        format!("coinv:{}", self.inner.describe())
    }
}
