//! Finite abelian groups presented as explicit products of cyclic groups.
//!
//! A group is a product Z/n_1 x ... x Z/n_k with every n_i >= 2; the trivial
//! group is the empty product. Elements are identified with their mixed-radix
//! index in [0, |A|), coordinate 0 most significant, so lexicographic order on
//! coordinate vectors equals numeric order on indices. Most of the crate works
//! with indices; [`GroupElement`] is the coordinate-level view used at the
//! string boundary.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::cyclo::Cyclo;
use crate::{Error, Result};

/// A finite abelian group, an explicit product of cyclic factors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteAbelianGroup {
    orders: Vec<u64>,
    order: usize,
    exponent: u64,
    /// suffix[k] = product of orders[k..]; radix weights for index arithmetic.
    suffix: Vec<usize>,
}

/// An element of a [`FiniteAbelianGroup`] as a coordinate vector,
/// `coords[k]` in `[0, n_k)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement {
    pub coords: Vec<u64>,
}

impl FiniteAbelianGroup {
    /// Builds the product of the given cyclic orders. Every order must be
    /// at least 2; an empty list gives the trivial group.
    pub fn new(orders: Vec<u64>) -> Result<Self> {
        for &n in &orders {
            if n < 2 {
                return Err(Error::Validation(format!(
                    "cyclic factor {n} is smaller than 2"
                )));
            }
        }
        let order = orders.iter().product::<u64>() as usize;
        let exponent = orders.iter().fold(1u64, |acc, &n| num_integer::lcm(acc, n));
        let mut suffix = vec![1usize; orders.len() + 1];
        for k in (0..orders.len()).rev() {
            suffix[k] = suffix[k + 1] * orders[k] as usize;
        }
        Ok(Self {
            orders,
            order,
            exponent,
            suffix,
        })
    }

    /// The trivial group (empty product).
    pub fn trivial() -> Self {
        Self::new(Vec::new()).expect("empty product is valid")
    }

    pub fn is_trivial(&self) -> bool {
        self.orders.is_empty()
    }

    /// Cyclic factor orders, in presentation order.
    pub fn factors(&self) -> &[u64] {
        &self.orders
    }

    /// Group order |A|.
    pub fn order(&self) -> usize {
        self.order
    }

    /// Exponent e = lcm of the factor orders; 1 for the trivial group.
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// Decodes an element index into coordinates.
    pub fn element(&self, mut idx: usize) -> GroupElement {
        debug_assert!(idx < self.order);
        let mut coords = vec![0u64; self.orders.len()];
        for k in (0..self.orders.len()).rev() {
            let n = self.orders[k] as usize;
            coords[k] = (idx % n) as u64;
            idx /= n;
        }
        GroupElement { coords }
    }

    /// Encodes coordinates into an element index, validating ranges.
    pub fn index_of(&self, elem: &GroupElement) -> Result<usize> {
        if elem.coords.len() != self.orders.len() {
            return Err(Error::Validation(format!(
                "element has {} coordinates, group has {} factors",
                elem.coords.len(),
                self.orders.len()
            )));
        }
        let mut idx = 0usize;
        for (k, &c) in elem.coords.iter().enumerate() {
            if c >= self.orders[k] {
                return Err(Error::Validation(format!(
                    "coordinate {c} out of range for Z/{}",
                    self.orders[k]
                )));
            }
            idx = idx * self.orders[k] as usize + c as usize;
        }
        Ok(idx)
    }

    /// Sum of two elements by index.
    pub fn add(&self, a: usize, b: usize) -> usize {
        debug_assert!(a < self.order && b < self.order);
        let (mut a, mut b) = (a, b);
        let mut idx = 0usize;
        // Walk factors most significant first by peeling with suffix radices.
        for k in 0..self.orders.len() {
            let n = self.orders[k] as usize;
            let ca = a / self.suffix[k + 1];
            let cb = b / self.suffix[k + 1];
            a %= self.suffix[k + 1];
            b %= self.suffix[k + 1];
            idx = idx * n + (ca + cb) % n;
        }
        idx
    }

    /// Negation by index.
    pub fn neg(&self, a: usize) -> usize {
        debug_assert!(a < self.order);
        let mut a = a;
        let mut idx = 0usize;
        for k in 0..self.orders.len() {
            let n = self.orders[k] as usize;
            let ca = a / self.suffix[k + 1];
            a %= self.suffix[k + 1];
            idx = idx * n + (n - ca) % n;
        }
        idx
    }

    /// Difference a - b by index.
    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    /// Multiplicative order of the element with the given index.
    pub fn order_of(&self, a: usize) -> u64 {
        let mut acc = a;
        let mut k = 1u64;
        while acc != 0 {
            acc = self.add(acc, a);
            k += 1;
        }
        k
    }

    /// Renders an element index as a literal `c1.c2.....ck`; `0` for the
    /// trivial group.
    pub fn literal(&self, a: usize) -> String {
        if self.orders.is_empty() {
            return "0".to_string();
        }
        let e = self.element(a);
        e.coords
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(".")
    }

    /// Subgroup generated by the given element indices, by closure.
    pub fn subgroup(&self, gens: &[usize]) -> Subgroup {
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut stack = vec![0usize];
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = self.add(x, g);
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        let elements: Vec<usize> = (0..self.order).filter(|&i| seen[i]).collect();
        Subgroup {
            generators: gens.to_vec(),
            elements,
        }
    }

    /// Quotient A/H with deterministic coset indexing: cosets are numbered in
    /// order of their least element, so the identity coset has index 0 and
    /// every coset is represented by its lexicographically minimal member.
    pub fn quotient(&self, sub: &Subgroup) -> QuotientIndex {
        let mut coset_of = vec![usize::MAX; self.order];
        let mut reps = Vec::new();
        for a in 0..self.order {
            if coset_of[a] != usize::MAX {
                continue;
            }
            let id = reps.len();
            reps.push(a);
            for &h in &sub.elements {
                coset_of[self.add(a, h)] = id;
            }
        }
        QuotientIndex { coset_of, reps }
    }

    /// Subgroup generated by `gens` together with the quotient index for it.
    pub fn subgroup_and_quotient(&self, gens: &[usize]) -> (Subgroup, QuotientIndex) {
        let sub = self.subgroup(gens);
        let quot = self.quotient(&sub);
        (sub, quot)
    }

    /// All |A| characters, indexed like elements: character `c` sends the
    /// generator of the k-th factor to zeta_{n_k}^{c_k}.
    pub fn characters(&self) -> Vec<Character> {
        (0..self.order)
            .map(|c| Character {
                exponents: self.element(c).coords,
            })
            .collect()
    }
}

/// A subgroup listed by closure; always contains the identity and is closed
/// under addition and negation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    pub generators: Vec<usize>,
    /// Sorted element indices.
    pub elements: Vec<usize>,
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, a: usize) -> bool {
        self.elements.binary_search(&a).is_ok()
    }
}

/// Coset bookkeeping for a quotient A/H.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientIndex {
    /// Element index -> coset index.
    pub coset_of: Vec<usize>,
    /// Coset index -> lexicographically minimal representative.
    pub reps: Vec<usize>,
}

impl QuotientIndex {
    /// Number of cosets.
    pub fn count(&self) -> usize {
        self.reps.len()
    }

    /// Coset addition through representatives.
    pub fn add(&self, group: &FiniteAbelianGroup, a: usize, b: usize) -> usize {
        self.coset_of[group.add(self.reps[a], self.reps[b])]
    }

    /// Coset negation through representatives.
    pub fn neg(&self, group: &FiniteAbelianGroup, a: usize) -> usize {
        self.coset_of[group.neg(self.reps[a])]
    }

    /// Coset difference a - b.
    pub fn sub(&self, group: &FiniteAbelianGroup, a: usize, b: usize) -> usize {
        self.add(group, a, self.neg(group, b))
    }
}

/// A character of A, valued in roots of unity inside Q(zeta_e).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Character {
    /// Per cyclic factor, the exponent defining the image of that factor's
    /// generator as a power of zeta_{n_k}.
    pub exponents: Vec<u64>,
}

impl Character {
    /// Evaluates at an element index: a root of unity in Q(zeta_e).
    pub fn eval(&self, group: &FiniteAbelianGroup, a: usize) -> Cyclo {
        let e = group.exponent();
        let coords = group.element(a).coords;
        let mut total = 0u64;
        for (k, (&c, &x)) in self.exponents.iter().zip(coords.iter()).enumerate() {
            let n = group.factors()[k];
            total = (total + (e / n) * ((c * x) % n)) % e;
        }
        Cyclo::zeta_pow(e, total)
    }

    /// Evaluates the complex conjugate, i.e. the value at the negated element.
    pub fn eval_conj(&self, group: &FiniteAbelianGroup, a: usize) -> Cyclo {
        self.eval(group, group.neg(a))
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coords.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join("."))
    }
}

/// The multinomial coefficient |f|! / prod f(a)! for a multidegree f,
/// as an exact rational (always an integer value).
pub fn multinomial(counts: &[usize]) -> BigRational {
    let total: usize = counts.iter().sum();
    let mut num = BigRational::from_integer(BigInt::from(1));
    let fact = |n: usize| -> BigInt {
        let mut acc = BigInt::from(1);
        for i in 2..=n {
            acc *= BigInt::from(i);
        }
        acc
    };
    num *= BigRational::from_integer(fact(total));
    for &c in counts {
        num /= BigRational::from_integer(fact(c));
    }
    num
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::Cyclo;

    #[test]
    fn element_index_round_trip() {
        let g = FiniteAbelianGroup::new(vec![2, 4]).unwrap();
        assert_eq!(g.order(), 8);
        assert_eq!(g.exponent(), 4);
        for i in 0..g.order() {
            assert_eq!(g.index_of(&g.element(i)).unwrap(), i);
        }
        // Coordinate 0 is most significant: (1,0) sits at index 4.
        assert_eq!(
            g.index_of(&GroupElement {
                coords: vec![1, 0]
            })
            .unwrap(),
            4
        );
    }

    #[test]
    fn trivial_group() {
        let g = FiniteAbelianGroup::trivial();
        assert_eq!(g.order(), 1);
        assert_eq!(g.exponent(), 1);
        assert_eq!(g.add(0, 0), 0);
        assert_eq!(g.literal(0), "0");
    }

    #[test]
    fn rejects_small_factor() {
        assert!(FiniteAbelianGroup::new(vec![2, 1]).is_err());
        assert!(FiniteAbelianGroup::new(vec![0]).is_err());
    }

    #[test]
    fn addition_tables() {
        let g = FiniteAbelianGroup::new(vec![6]).unwrap();
        assert_eq!(g.exponent(), 6);
        for a in 0..6 {
            for b in 0..6 {
                assert_eq!(g.add(a, b), (a + b) % 6);
            }
            assert_eq!(g.add(a, g.neg(a)), 0);
        }
        let h = FiniteAbelianGroup::new(vec![2, 2]).unwrap();
        // (1,0)+(1,1) = (0,1): indices 2+3 -> 1.
        assert_eq!(h.add(2, 3), 1);
    }

    #[test]
    fn subgroup_quotient_z4() {
        // Z/4 with <2>: two cosets, identity coset first.
        let g = FiniteAbelianGroup::new(vec![4]).unwrap();
        let (sub, quot) = g.subgroup_and_quotient(&[2]);
        assert_eq!(sub.order(), 2);
        assert_eq!(sub.elements, vec![0, 2]);
        assert_eq!(quot.count(), 2);
        assert_eq!(quot.coset_of, vec![0, 1, 0, 1]);
        assert_eq!(quot.reps, vec![0, 1]);
    }

    #[test]
    fn subgroup_quotient_z2z2() {
        // Z/2 x Z/2 with <(1,0)>: two cosets.
        let g = FiniteAbelianGroup::new(vec![2, 2]).unwrap();
        let gen = g
            .index_of(&GroupElement {
                coords: vec![1, 0]
            })
            .unwrap();
        let (sub, quot) = g.subgroup_and_quotient(&[gen]);
        assert_eq!(sub.order(), 2);
        assert_eq!(quot.count(), 2);
        assert_eq!(quot.coset_of[0], 0);
    }

    #[test]
    fn subgroup_full_and_empty() {
        let g = FiniteAbelianGroup::new(vec![2]).unwrap();
        let (sub, quot) = g.subgroup_and_quotient(&[1]);
        assert_eq!(sub.order(), 2);
        assert_eq!(quot.count(), 1);
        let (sub0, quot0) = g.subgroup_and_quotient(&[]);
        assert_eq!(sub0.order(), 1);
        assert_eq!(quot0.count(), 2);
    }

    #[test]
    fn lagrange_exhaustive_small_groups() {
        // |<gens>| divides |A| for every generating set, |A| <= 16.
        for orders in [
            vec![],
            vec![2],
            vec![3],
            vec![4],
            vec![2, 2],
            vec![6],
            vec![2, 4],
            vec![3, 3],
            vec![12],
            vec![2, 2, 2],
            vec![16],
            vec![2, 8],
        ] {
            let g = FiniteAbelianGroup::new(orders).unwrap();
            let n = g.order();
            if n > 16 {
                continue;
            }
            for mask in 0..(1usize << n.min(10)) {
                let gens: Vec<usize> = (0..n.min(10)).filter(|i| mask >> i & 1 == 1).collect();
                let sub = g.subgroup(&gens);
                assert_eq!(n % sub.order(), 0, "Lagrange failed for |A|={n}");
            }
        }
    }

    #[test]
    fn characters_z2() {
        let g = FiniteAbelianGroup::new(vec![2]).unwrap();
        let chars = g.characters();
        assert_eq!(chars.len(), 2);
        let one = Cyclo::one(2);
        let minus_one = Cyclo::from_i64(2, -1);
        assert_eq!(chars[0].eval(&g, 0), one);
        assert_eq!(chars[0].eval(&g, 1), one);
        assert_eq!(chars[1].eval(&g, 0), one);
        assert_eq!(chars[1].eval(&g, 1), minus_one);
    }

    #[test]
    fn characters_z3_orthogonality() {
        // sum_a chi_i(a) conj(chi_j(a)) = 3 delta_ij over all 9 pairs.
        let g = FiniteAbelianGroup::new(vec![3]).unwrap();
        let chars = g.characters();
        assert_eq!(chars.len(), 3);
        for (i, ci) in chars.iter().enumerate() {
            for (j, cj) in chars.iter().enumerate() {
                let mut sum = Cyclo::zero(3);
                for a in 0..3 {
                    let term = ci.eval(&g, a).try_mul(&cj.eval_conj(&g, a)).unwrap();
                    sum = sum.try_add(&term).unwrap();
                }
                let expect = if i == j {
                    Cyclo::from_i64(3, 3)
                } else {
                    Cyclo::zero(3)
                };
                assert_eq!(sum, expect);
            }
        }
    }

    #[test]
    fn character_orthogonality_up_to_12() {
        // (1/|A|) sum_a chi(a) psi(-a) = [chi = psi].
        for orders in [vec![2], vec![3], vec![4], vec![2, 2], vec![6], vec![2, 4], vec![12]] {
            let g = FiniteAbelianGroup::new(orders).unwrap();
            let e = g.exponent();
            let chars = g.characters();
            let inv = Cyclo::from_rational(
                e,
                BigRational::new(BigInt::from(1), BigInt::from(g.order() as i64)),
            );
            for (i, ci) in chars.iter().enumerate() {
                for (j, cj) in chars.iter().enumerate() {
                    let mut sum = Cyclo::zero(e);
                    for a in 0..g.order() {
                        let term = ci.eval(&g, a).try_mul(&cj.eval(&g, g.neg(a))).unwrap();
                        sum = sum.try_add(&term).unwrap();
                    }
                    let got = sum.try_mul(&inv).unwrap();
                    let expect = if i == j { Cyclo::one(e) } else { Cyclo::zero(e) };
                    assert_eq!(got, expect, "group {:?} pair ({i},{j})", g.factors());
                }
            }
        }
    }

    #[test]
    fn element_order() {
        let g = FiniteAbelianGroup::new(vec![4]).unwrap();
        assert_eq!(g.order_of(0), 1);
        assert_eq!(g.order_of(1), 4);
        assert_eq!(g.order_of(2), 2);
    }

    #[test]
    fn multinomial_values() {
        assert_eq!(multinomial(&[2, 1]), BigRational::from_integer(BigInt::from(3)));
        assert_eq!(multinomial(&[0, 0]), BigRational::from_integer(BigInt::from(1)));
        assert_eq!(
            multinomial(&[2, 2]),
            BigRational::from_integer(BigInt::from(6))
        );
    }
}
