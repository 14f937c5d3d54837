//! Functor modules over the surjection categories, with the constructions
//! used throughout the crate: principal projectives, the two transition
//! modules, shifts, Day convolution, coinvariants, pushforward to plain
//! sets, and Fourier duality.
//!
//! A module M assigns to every object X a based finite-dimensional vector
//! space M(X), and to every morphism m: X -> Y a matrix
//! act(m): M(Y) -> M(X) of shape dim M(X) by dim M(Y), such that
//! act(id) = I and act(m2 o m1) = act(m1) * act(m2).
//!
//! The `Module` handle canonicalizes evaluation points: an object is
//! replaced by its sorted-label representative and a morphism is conjugated
//! by the sorting bijections before reaching the kernel, so kernels only
//! ever see canonical endpoints and every result is memoized per canonical
//! class. Conjugation preserves composition, so functoriality of the kernel
//! on canonical data gives functoriality of the handle everywhere.

mod coinv;
mod conv;
mod fourier;
mod projective;
mod push;
mod restrict;
mod shift;
mod v0;
mod zero;

pub use v0::v0_quotient_map;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::category::{Category, LabeledSet, Morphism};
use crate::group::FiniteAbelianGroup;
use crate::linalg::ExactMatrix;
use crate::Result;

/// Descriptive name of one basis vector of a module value.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BasisLabel {
    /// Basis morphism of a principal projective.
    Hom(Morphism),
    /// Normalized translation-orbit representative, group element indices.
    Orbit(Vec<usize>),
    /// Normalized orbit representative in coset indices.
    Class(Vec<usize>),
    /// Basis vector of a shifted module, named at the extended object.
    Shifted(Box<BasisLabel>),
    /// Tensor basis vector of one decomposition block of a convolution; the
    /// mask records which positions belong to the left factor.
    Split {
        mask: u64,
        left: Box<BasisLabel>,
        right: Box<BasisLabel>,
    },
    /// Basis vector of one labeling component of a pushforward.
    Component {
        labels: Vec<usize>,
        inner: Box<BasisLabel>,
    },
    /// Coordinate of a quotient or image space, by ambient row index.
    Projected(usize),
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn join(v: &[usize]) -> String {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        }
        match self {
            BasisLabel::Hom(m) => {
                if m.pointing.iter().all(|&p| p == 0) {
                    write!(f, "f=[{}]", join(&m.map))
                } else {
                    write!(f, "f=[{}];g=[{}]", join(&m.map), join(&m.pointing))
                }
            }
            BasisLabel::Orbit(h) => write!(f, "h=({})", join(h)),
            BasisLabel::Class(c) => write!(f, "c=({})", join(c)),
            BasisLabel::Shifted(inner) => write!(f, "sh({inner})"),
            BasisLabel::Split { mask, left, right } => {
                write!(f, "split[{mask:b}]({left})({right})")
            }
            BasisLabel::Component { labels, inner } => {
                write!(f, "comp[{}]({inner})", join(labels))
            }
            BasisLabel::Projected(row) => write!(f, "e{row}"),
        }
    }
}

/// Implementation of one module construction. Kernels are only ever called
/// with canonical (sorted-label) endpoints and morphisms that have already
/// been validated against the kernel's category, and must return act
/// matrices of shape dim(src) by dim(tgt).
pub(crate) trait ModuleKernel: Send + Sync {
    fn category(&self) -> &Category;
    fn exponent(&self) -> u64;
    fn dim(&self, x: &LabeledSet) -> usize;
    fn basis(&self, x: &LabeledSet) -> Vec<BasisLabel>;
    fn act(&self, m: &Morphism, src: &LabeledSet, tgt: &LabeledSet) -> ExactMatrix;
    fn describe(&self) -> String;
}

struct Shared {
    kernel: Box<dyn ModuleKernel>,
    dims: Mutex<HashMap<LabeledSet, usize>>,
    acts: Mutex<HashMap<(LabeledSet, Morphism), Arc<ExactMatrix>>>,
}

/// A functor module: cheap to clone, memoized, safe to share.
#[derive(Clone)]
pub struct Module {
    inner: Arc<Shared>,
}

/// Stable sorting permutation: position i of the canonical object comes
/// from position perm[i] of the original.
fn sort_permutation(labels: &[usize]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..labels.len()).collect();
    idx.sort_by_key(|&i| (labels[i], i));
    idx
}

impl Module {
    fn from_kernel(kernel: Box<dyn ModuleKernel>) -> Self {
        Self {
            inner: Arc::new(Shared {
                kernel,
                dims: Mutex::new(HashMap::new()),
                acts: Mutex::new(HashMap::new()),
            }),
        }
    }

    pub fn category(&self) -> &Category {
        self.inner.kernel.category()
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        self.category().group()
    }

    /// Cyclotomic exponent of the scalar field all act matrices live in.
    pub fn exponent(&self) -> u64 {
        self.inner.kernel.exponent()
    }

    /// Canonical construction string, in the module expression grammar.
    pub fn describe(&self) -> String {
        self.inner.kernel.describe()
    }

    /// Dimension of the value at an object (any labeling order).
    pub fn dim(&self, x: &LabeledSet) -> usize {
        let perm = sort_permutation(x.labels());
        let cx = x.select(&perm);
        if let Some(&d) = self.inner.dims.lock().unwrap().get(&cx) {
            return d;
        }
        let d = self.inner.kernel.dim(&cx);
        self.inner.dims.lock().unwrap().insert(cx, d);
        d
    }

    /// Basis labels of the value, named at the canonical representative.
    pub fn basis(&self, x: &LabeledSet) -> Vec<BasisLabel> {
        let perm = sort_permutation(x.labels());
        self.inner.kernel.basis(&x.select(&perm))
    }

    /// Validated evaluation: dimension and basis labels.
    pub fn eval(&self, x: &LabeledSet) -> Result<(usize, Vec<BasisLabel>)> {
        self.category().validate_object(x)?;
        Ok((self.dim(x), self.basis(x)))
    }

    /// The action matrix of m: src -> tgt, mapping M(tgt) to M(src); shape
    /// dim(src) by dim(tgt) in canonical coordinates.
    pub fn act(&self, m: &Morphism, src: &LabeledSet, tgt: &LabeledSet) -> Result<Arc<ExactMatrix>> {
        self.category().validate_morphism(m, src, tgt)?;
        let px = sort_permutation(src.labels());
        let py = sort_permutation(tgt.labels());
        let csrc = src.select(&px);
        let ctgt = tgt.select(&py);
        let mut inv_py = vec![0usize; py.len()];
        for (k, &p) in py.iter().enumerate() {
            inv_py[p] = k;
        }
        let cm = Morphism {
            map: px.iter().map(|&i| inv_py[m.map[i]]).collect(),
            pointing: px.iter().map(|&i| m.pointing[i]).collect(),
            tgt_size: m.tgt_size,
        };
        let key = (csrc.clone(), cm.clone());
        if let Some(hit) = self.inner.acts.lock().unwrap().get(&key) {
            return Ok(hit.clone());
        }
        let mat = self.inner.kernel.act(&cm, &csrc, &ctgt);
        assert_eq!(mat.rows(), self.dim(&csrc), "act matrix row count");
        assert_eq!(mat.cols(), self.dim(&ctgt), "act matrix column count");
        let arc = Arc::new(mat);
        self.inner
            .acts
            .lock()
            .unwrap()
            .insert(key, arc.clone());
        Ok(arc)
    }

    /// The zero module over a category.
    pub fn zero(category: Category) -> Module {
        Self::from_kernel(Box::new(zero::ZeroKernel::new(category)))
    }

    /// The principal projective at an apex object: the value at Y is the
    /// free vector space on Hom(Y, apex), morphisms act by precomposition.
    pub fn projective(category: Category, apex: LabeledSet) -> Result<Module> {
        category.validate_object(&apex)?;
        Ok(Self::from_kernel(Box::new(projective::ProjectiveKernel::new(
            category, apex,
        ))))
    }

    /// The translation-orbit module on pointed labelings (nonzero only on
    /// zero-sum objects of size at least 3).
    pub fn v0_tilde(group: FiniteAbelianGroup) -> Module {
        Self::from_kernel(Box::new(v0::V0TildeKernel::new(group)))
    }

    /// The transition-datum module: orbits of labelings into the quotient by
    /// the subgroup generated by the object's labels.
    pub fn v0_bar(group: FiniteAbelianGroup) -> Module {
        Self::from_kernel(Box::new(v0::V0BarKernel::new(group)))
    }

    /// The shift by the group element with index `a`: precomposition with
    /// disjoint union by one a-labeled point.
    pub fn shift(&self, a: usize) -> Result<Module> {
        shift::ShiftKernel::new(self.clone(), a).map(|k| Self::from_kernel(Box::new(k)))
    }

    /// Day convolution with another module over the same category.
    pub fn convolve(&self, other: &Module) -> Result<Module> {
        conv::ConvKernel::new(self.clone(), other.clone()).map(|k| Self::from_kernel(Box::new(k)))
    }

    /// Coinvariants by the pointing action: quotient each value by the
    /// differences m - act(id, g)(m); carries a module structure over the
    /// pointing-free category.
    pub fn coinvariants(&self) -> Result<Module> {
        coinv::CoinvKernel::new(self.clone()).map(|k| Self::from_kernel(Box::new(k)))
    }

    /// Pushforward to plain finite sets: the value at [n] is the direct sum
    /// of the values at all labelings of [n].
    pub fn pushforward(&self) -> Result<Module> {
        push::PushKernel::new(self.clone()).map(|k| Self::from_kernel(Box::new(k)))
    }

    /// Fourier dual of a module on zero-labeled pointed sets: values are the
    /// isotypic images of the pointing action, indexed by character
    /// labelings.
    pub fn fourier(&self) -> Result<Module> {
        fourier::FourierKernel::new(self.clone()).map(|k| Self::from_kernel(Box::new(k)))
    }

    /// Restriction along the pointing-free inclusion: same values, action
    /// only through morphisms with zero pointing.
    pub fn restrict_fws(&self) -> Result<Module> {
        restrict::RestrictFwsKernel::new(self.clone()).map(|k| Self::from_kernel(Box::new(k)))
    }
}

impl fmt::Debug for Module {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Module({})", self.describe())
    }
}
