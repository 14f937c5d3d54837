//! Finite labeled sets and the surjection categories built on them.
//!
//! Fix a finite abelian group A. An object is a finite set X together with a
//! label function X -> A. Four categories share these objects:
//!
//! * `Fws`: morphisms are surjections f: X -> Y such that for every y in Y
//!   the labels of the fiber f^{-1}(y) sum to the label of y.
//! * `Tws`: morphisms are pairs (f, g) with f as in `Fws` and an arbitrary
//!   pointing g: X -> A; composition is (f2, g2) o (f1, g1) =
//!   (f2 o f1, g1 + g2 o f1).
//! * `Fs`: zero-labeled objects with all surjections (pointing zero).
//! * `FsA`: zero-labeled objects with all surjections and arbitrary
//!   pointings, i.e. the full subcategory of `Tws` on zero-labeled objects.
//!
//! Elements of X are 0..n; labels and pointings are group element indices.
//! Hom sets are returned in a deterministic order: lexicographic on the map
//! vector, then lexicographic on the pointing vector.

use crate::group::FiniteAbelianGroup;
use crate::{Error, Result};

/// Which surjection category the hom sets are taken in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CategoryTag {
    Fws,
    Tws,
    Fs,
    FsA,
}

impl CategoryTag {
    /// True when morphisms carry a free pointing component.
    pub fn has_pointing(self) -> bool {
        matches!(self, CategoryTag::Tws | CategoryTag::FsA)
    }

    /// True when objects must be zero-labeled.
    pub fn zero_labeled(self) -> bool {
        matches!(self, CategoryTag::Fs | CategoryTag::FsA)
    }

    pub fn name(self) -> &'static str {
        match self {
            CategoryTag::Fws => "fws",
            CategoryTag::Tws => "tws",
            CategoryTag::Fs => "fs",
            CategoryTag::FsA => "fsA",
        }
    }
}

impl std::str::FromStr for CategoryTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fws" => Ok(CategoryTag::Fws),
            "tws" => Ok(CategoryTag::Tws),
            "fs" => Ok(CategoryTag::Fs),
            "fsA" | "fsa" => Ok(CategoryTag::FsA),
            _ => Err(Error::Parse {
                field: "category",
                token: s.to_string(),
            }),
        }
    }
}

/// A finite set 0..n with group labels, stored as element indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabeledSet {
    labels: Vec<usize>,
}

impl LabeledSet {
    pub fn new(labels: Vec<usize>) -> Self {
        Self { labels }
    }

    /// The zero-labeled set of a given size.
    pub fn zero(size: usize) -> Self {
        Self {
            labels: vec![0; size],
        }
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> usize {
        self.labels[i]
    }

    pub fn is_zero_labeled(&self) -> bool {
        self.labels.iter().all(|&l| l == 0)
    }

    /// Sum of all labels.
    pub fn total(&self, group: &FiniteAbelianGroup) -> usize {
        self.labels.iter().fold(0, |acc, &l| group.add(acc, l))
    }

    /// The labeled subset at the given positions, in the order given.
    pub fn select(&self, positions: &[usize]) -> LabeledSet {
        LabeledSet {
            labels: positions.iter().map(|&p| self.labels[p]).collect(),
        }
    }

    /// Comma-separated label literals, e.g. `1,1,0` or `(1,0),(0,2)`.
    pub fn literal(&self, group: &FiniteAbelianGroup) -> String {
        self.labels
            .iter()
            .map(|&l| group.literal(l))
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// A morphism X -> Y in one of the surjection categories: a surjective map
/// together with a pointing (all zeros outside `Tws`/`FsA`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Morphism {
    /// map[i] is the image of i; surjective onto 0..tgt_size.
    pub map: Vec<usize>,
    /// pointing[i] is a group element index attached to i.
    pub pointing: Vec<usize>,
    pub tgt_size: usize,
}

impl Morphism {
    pub fn identity(group: &FiniteAbelianGroup, x: &LabeledSet) -> Self {
        let _ = group;
        Self {
            map: (0..x.size()).collect(),
            pointing: vec![0; x.size()],
            tgt_size: x.size(),
        }
    }

    pub fn src_size(&self) -> usize {
        self.map.len()
    }

    pub fn is_identity(&self) -> bool {
        self.tgt_size == self.map.len()
            && self.map.iter().enumerate().all(|(i, &m)| m == i)
            && self.pointing.iter().all(|&p| p == 0)
    }

    /// The fiber over a target point, ascending.
    pub fn fiber(&self, y: usize) -> Vec<usize> {
        (0..self.map.len()).filter(|&i| self.map[i] == y).collect()
    }
}

/// Composition second o first; first: X -> Y, second: Y -> Z. Pointings
/// combine as g1 + g2 o f1.
pub fn compose(
    group: &FiniteAbelianGroup,
    second: &Morphism,
    first: &Morphism,
) -> Result<Morphism> {
    if first.tgt_size != second.src_size() {
        return Err(Error::ComposeMismatch);
    }
    let map = first.map.iter().map(|&y| second.map[y]).collect();
    let pointing = first
        .map
        .iter()
        .zip(&first.pointing)
        .map(|(&y, &g1)| group.add(g1, second.pointing[y]))
        .collect();
    Ok(Morphism {
        map,
        pointing,
        tgt_size: second.tgt_size,
    })
}

/// A surjection category over a fixed group.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Category {
    group: FiniteAbelianGroup,
    tag: CategoryTag,
}

impl Category {
    pub fn new(group: FiniteAbelianGroup, tag: CategoryTag) -> Self {
        Self { group, tag }
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn tag(&self) -> CategoryTag {
        self.tag
    }

    /// Checks that an object is legal in this category.
    pub fn validate_object(&self, x: &LabeledSet) -> Result<()> {
        if x.labels.iter().any(|&l| l >= self.group.order()) {
            return Err(Error::Validation(format!(
                "label index out of range for group of order {}",
                self.group.order()
            )));
        }
        if self.tag.zero_labeled() && !x.is_zero_labeled() {
            return Err(Error::Validation(format!(
                "objects of {} must be zero-labeled",
                self.tag.name()
            )));
        }
        Ok(())
    }

    /// Checks that `m` is a morphism from `src` to `tgt` in this category.
    pub fn validate_morphism(&self, m: &Morphism, src: &LabeledSet, tgt: &LabeledSet) -> Result<()> {
        self.validate_object(src)?;
        self.validate_object(tgt)?;
        if m.map.len() != src.size() || m.pointing.len() != src.size() {
            return Err(Error::Validation("morphism length mismatch".into()));
        }
        if m.tgt_size != tgt.size() {
            return Err(Error::Validation("morphism target size mismatch".into()));
        }
        if m.map.iter().any(|&y| y >= tgt.size()) {
            return Err(Error::Validation("map value out of range".into()));
        }
        let mut hit = vec![false; tgt.size()];
        for &y in &m.map {
            hit[y] = true;
        }
        if hit.iter().any(|&h| !h) {
            return Err(Error::Validation("map is not surjective".into()));
        }
        // Fiber label sums must match target labels. This is automatic for
        // zero-labeled categories but checked uniformly.
        for y in 0..tgt.size() {
            let mut sum = 0usize;
            for (i, &fy) in m.map.iter().enumerate() {
                if fy == y {
                    sum = self.group.add(sum, src.label(i));
                }
            }
            if sum != tgt.label(y) {
                return Err(Error::Validation(format!(
                    "fiber over {} sums to {}, target label is {}",
                    y,
                    self.group.literal(sum),
                    self.group.literal(tgt.label(y))
                )));
            }
        }
        if !self.tag.has_pointing() && m.pointing.iter().any(|&p| p != 0) {
            return Err(Error::Validation(format!(
                "morphisms of {} carry no pointing",
                self.tag.name()
            )));
        }
        if m.pointing.iter().any(|&p| p >= self.group.order()) {
            return Err(Error::Validation("pointing value out of range".into()));
        }
        Ok(())
    }

    /// All morphisms src -> tgt, deterministically ordered: lexicographic on
    /// the map vector, then on the pointing vector.
    pub fn hom(&self, src: &LabeledSet, tgt: &LabeledSet) -> Vec<Morphism> {
        let maps: Vec<Vec<usize>> = surjections(src.size(), tgt.size())
            .into_iter()
            .filter(|map| self.fibers_match(map, src, tgt))
            .collect();
        let mut out = Vec::new();
        if self.tag.has_pointing() {
            for map in maps {
                for pointing in all_vectors(self.group.order(), src.size()) {
                    out.push(Morphism {
                        map: map.clone(),
                        pointing,
                        tgt_size: tgt.size(),
                    });
                }
            }
        } else {
            for map in maps {
                out.push(Morphism {
                    pointing: vec![0; map.len()],
                    map,
                    tgt_size: tgt.size(),
                });
            }
        }
        out
    }

    fn fibers_match(&self, map: &[usize], src: &LabeledSet, tgt: &LabeledSet) -> bool {
        if self.tag.zero_labeled() {
            return true;
        }
        let mut sums = vec![0usize; tgt.size()];
        for (i, &y) in map.iter().enumerate() {
            sums[y] = self.group.add(sums[y], src.label(i));
        }
        sums.iter().zip(tgt.labels()).all(|(s, l)| s == l)
    }

    /// Canonical objects of a given size: sorted label vectors for labeled
    /// categories, the single zero-labeled set otherwise. Ordered
    /// lexicographically on label indices.
    pub fn objects_of_size(&self, n: usize) -> Vec<LabeledSet> {
        if self.tag.zero_labeled() {
            return vec![LabeledSet::zero(n)];
        }
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(n);
        fn rec(order: usize, n: usize, lo: usize, cur: &mut Vec<usize>, out: &mut Vec<LabeledSet>) {
            if cur.len() == n {
                out.push(LabeledSet::new(cur.clone()));
                return;
            }
            for l in lo..order {
                cur.push(l);
                rec(order, n, l, cur, out);
                cur.pop();
            }
        }
        rec(self.group.order(), n, 0, &mut cur, &mut out);
        out
    }
}

/// All surjections [n] -> [m] as map vectors, lexicographic order.
pub fn surjections(n: usize, m: usize) -> Vec<Vec<usize>> {
    if m > n {
        return Vec::new();
    }
    if m == 0 {
        return if n == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(n: usize, m: usize, missing: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let left = n - cur.len();
        if missing > left {
            return;
        }
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for y in 0..m {
            let first_hit = !cur.contains(&y);
            cur.push(y);
            rec(n, m, if first_hit { missing - 1 } else { missing }, cur, out);
            cur.pop();
        }
    }
    rec(n, m, m, &mut cur, &mut out);
    out
}

/// All vectors in {0..order}^len, lexicographic, coordinate 0 most
/// significant. A zero-length request yields the single empty vector.
pub fn all_vectors(order: usize, len: usize) -> Vec<Vec<usize>> {
    let total = order.checked_pow(len as u32).expect("vector space too large");
    let mut out = Vec::with_capacity(total);
    let mut cur = vec![0usize; len];
    loop {
        out.push(cur.clone());
        let mut k = len;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            cur[k] += 1;
            if cur[k] < order {
                break;
            }
            cur[k] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteAbelianGroup;

    fn z(n: u64) -> FiniteAbelianGroup {
        FiniteAbelianGroup::new(vec![n]).unwrap()
    }

    #[test]
    fn object_counts() {
        let trivial = Category::new(FiniteAbelianGroup::trivial(), CategoryTag::Fws);
        assert_eq!(trivial.objects_of_size(5).len(), 1);
        let z2 = Category::new(z(2), CategoryTag::Fws);
        assert_eq!(z2.objects_of_size(3).len(), 4);
        let z3 = Category::new(z(3), CategoryTag::Fws);
        assert_eq!(z3.objects_of_size(2).len(), 6);
        // C(n + |A| - 1, |A| - 1) in general.
        let z4 = Category::new(z(4), CategoryTag::Fws);
        assert_eq!(z4.objects_of_size(3).len(), 20);
    }

    #[test]
    fn surjection_counts() {
        assert_eq!(surjections(3, 2).len(), 6);
        assert_eq!(surjections(3, 3).len(), 6);
        assert_eq!(surjections(2, 3).len(), 0);
        assert_eq!(surjections(0, 0).len(), 1);
        assert_eq!(surjections(2, 0).len(), 0);
        assert_eq!(surjections(4, 2).len(), 14);
    }

    #[test]
    fn hom_fws_counts() {
        let trivial = Category::new(FiniteAbelianGroup::trivial(), CategoryTag::Fws);
        let x3 = LabeledSet::zero(3);
        let x2 = LabeledSet::zero(2);
        assert_eq!(trivial.hom(&x3, &x2).len(), 6);

        let z2 = Category::new(z(2), CategoryTag::Fws);
        let src = LabeledSet::new(vec![1, 1, 0]);
        let tgt = LabeledSet::new(vec![0, 0]);
        assert_eq!(z2.hom(&src, &tgt).len(), 2);
        // A single 1-labeled point cannot map to a 0-labeled point.
        let one = LabeledSet::new(vec![1]);
        let zero = LabeledSet::new(vec![0]);
        assert_eq!(z2.hom(&one, &zero).len(), 0);
    }

    #[test]
    fn hom_tws_counts() {
        let z2 = Category::new(z(2), CategoryTag::Tws);
        let src = LabeledSet::new(vec![1, 1, 0]);
        let tgt = LabeledSet::new(vec![0, 0]);
        assert_eq!(z2.hom(&src, &tgt).len(), 16);

        // Over the trivial group the pointing is forced, so counts agree
        // with the plain surjection category.
        let t_fws = Category::new(FiniteAbelianGroup::trivial(), CategoryTag::Fws);
        let t_tws = Category::new(FiniteAbelianGroup::trivial(), CategoryTag::Tws);
        for n in 0..=4usize {
            for m in 0..=n {
                let xs = LabeledSet::zero(n);
                let ys = LabeledSet::zero(m);
                assert_eq!(t_fws.hom(&xs, &ys).len(), t_tws.hom(&xs, &ys).len());
            }
        }

        // Endomorphisms of a single labeled point: one map, |A| pointings.
        let z4 = Category::new(z(4), CategoryTag::Tws);
        for a in 0..4usize {
            let pt = LabeledSet::new(vec![a]);
            assert_eq!(z4.hom(&pt, &pt).len(), 4);
        }
    }

    #[test]
    fn identity_laws() {
        let g = z(4);
        let cat = Category::new(g.clone(), CategoryTag::Tws);
        let src = LabeledSet::new(vec![1, 3, 0]);
        let tgt = LabeledSet::new(vec![0]);
        for m in cat.hom(&src, &tgt) {
            cat.validate_morphism(&m, &src, &tgt).unwrap();
            let lhs = compose(&g, &Morphism::identity(&g, &tgt), &m).unwrap();
            let rhs = compose(&g, &m, &Morphism::identity(&g, &src)).unwrap();
            assert_eq!(lhs, m);
            assert_eq!(rhs, m);
        }
    }

    #[test]
    fn composition_associativity_sample() {
        let g = z(4);
        let cat = Category::new(g.clone(), CategoryTag::Tws);
        let x = LabeledSet::new(vec![1, 1, 2]);
        let y = LabeledSet::new(vec![2, 2]);
        let zz = LabeledSet::new(vec![0]);
        let hxy = cat.hom(&x, &y);
        let hyz = cat.hom(&y, &zz);
        let hzz = cat.hom(&zz, &zz);
        let mut count = 0usize;
        for m1 in &hxy {
            for m2 in &hyz {
                for m3 in &hzz {
                    let a = compose(&g, m3, &compose(&g, m2, m1).unwrap()).unwrap();
                    let b = compose(&g, &compose(&g, m3, m2).unwrap(), m1).unwrap();
                    assert_eq!(a, b);
                    cat.validate_morphism(&a, &x, &zz).unwrap();
                    count += 1;
                    if count >= 1000 {
                        return;
                    }
                }
            }
        }
        assert!(count > 0);
    }

    #[test]
    fn composition_pointing_formula() {
        let g = z(4);
        // first: 2 points -> 1 point, pointings 1 and 2; second: endo with
        // pointing 3. Composite pointing is g1 + g2 o f1 = (1+3, 2+3).
        let first = Morphism {
            map: vec![0, 0],
            pointing: vec![1, 2],
            tgt_size: 1,
        };
        let second = Morphism {
            map: vec![0],
            pointing: vec![3],
            tgt_size: 1,
        };
        let c = compose(&g, &second, &first).unwrap();
        assert_eq!(c.map, vec![0, 0]);
        assert_eq!(c.pointing, vec![0, 1]);
    }

    #[test]
    fn fs_and_fsa_homs() {
        let g = z(2);
        let fs = Category::new(g.clone(), CategoryTag::Fs);
        let fsa = Category::new(g.clone(), CategoryTag::FsA);
        let x = LabeledSet::zero(3);
        let y = LabeledSet::zero(2);
        assert_eq!(fs.hom(&x, &y).len(), 6);
        assert_eq!(fsa.hom(&x, &y).len(), 48);
        let labeled = LabeledSet::new(vec![1]);
        assert!(fs.validate_object(&labeled).is_err());
    }

    #[test]
    fn all_vectors_shapes() {
        assert_eq!(all_vectors(3, 0), vec![Vec::<usize>::new()]);
        assert_eq!(all_vectors(2, 2), vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn hom_relabeling_stability() {
        // Permuting source points permutes hom sets bijectively.
        let g = z(3);
        let cat = Category::new(g.clone(), CategoryTag::Fws);
        let src = LabeledSet::new(vec![1, 2, 0]);
        let perm = [2usize, 0, 1];
        let psrc = LabeledSet::new(perm.iter().map(|&i| src.label(i)).collect());
        let tgt = LabeledSet::new(vec![0]);
        let h1 = cat.hom(&src, &tgt);
        let h2 = cat.hom(&psrc, &tgt);
        assert_eq!(h1.len(), h2.len());
    }
}
