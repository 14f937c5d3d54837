//! Day convolution of two modules over the same category.
//!
//! The value at (X, l) is the direct sum over all decompositions X = S u T
//! (ordered pairs of complementary subsets, including the empty ones) of
//! M(S, l|S) tensor N(T, l|T). A morphism m: X -> Y carries the (T, T')
//! block of the value at Y into the (f^-1(T), f^-1(T')) block at X through
//! the restricted morphisms, acting as the Kronecker product of the two
//! restricted actions.
//!
//! Blocks are ordered by the subset bitmask of the left factor (bit i set
//! exactly when position i belongs to it), ascending; within a block the
//! tensor basis is row-major with the left factor most significant.

use num_integer::Integer;

use crate::category::{Category, LabeledSet, Morphism};
use crate::linalg::ExactMatrix;
use crate::{Error, Result};

use super::{BasisLabel, Module, ModuleKernel};

pub(crate) struct ConvKernel {
    left: Module,
    right: Module,
    e: u64,
}

/// Positions selected and omitted by a bitmask, both ascending.
fn split_positions(n: usize, mask: u64) -> (Vec<usize>, Vec<usize>) {
    let mut inside = Vec::new();
    let mut outside = Vec::new();
    for i in 0..n {
        if mask >> i & 1 == 1 {
            inside.push(i);
        } else {
            outside.push(i);
        }
    }
    (inside, outside)
}

/// The restriction of a morphism to the preimage of a set of target
/// positions, with both sides renumbered ascending.
fn restrict_morphism(m: &Morphism, tgt_positions: &[usize]) -> (Vec<usize>, Morphism) {
    let src_positions: Vec<usize> = (0..m.map.len())
        .filter(|&i| tgt_positions.binary_search(&m.map[i]).is_ok())
        .collect();
    let local = Morphism {
        map: src_positions
            .iter()
            .map(|&i| {
                tgt_positions
                    .binary_search(&m.map[i])
                    .expect("position selected by construction")
            })
            .collect(),
        pointing: src_positions.iter().map(|&i| m.pointing[i]).collect(),
        tgt_size: tgt_positions.len(),
    };
    (src_positions, local)
}

impl ConvKernel {
    pub(crate) fn new(left: Module, right: Module) -> Result<Self> {
        if left.category() != right.category() {
            return Err(Error::CategoryMismatch(format!(
                "convolution factors live over different categories: {} vs {}",
                left.category().tag().name(),
                right.category().tag().name()
            )));
        }
        let e = left.exponent().lcm(&right.exponent());
        Ok(Self { left, right, e })
    }

    /// Block data at an object: (mask, left dim, right dim, offset).
    fn blocks(&self, x: &LabeledSet) -> Vec<(u64, usize, usize, usize)> {
        let n = x.size();
        assert!(n < 64, "convolution objects limited to 63 points");
        let mut out = Vec::with_capacity(1 << n);
        let mut offset = 0;
        for mask in 0..(1u64 << n) {
            let (inside, outside) = split_positions(n, mask);
            let dl = self.left.dim(&x.select(&inside));
            let dr = self.right.dim(&x.select(&outside));
            out.push((mask, dl, dr, offset));
            offset += dl * dr;
        }
        out
    }
}

impl ModuleKernel for ConvKernel {
    fn category(&self) -> &Category {
        self.left.category()
    }

    fn exponent(&self) -> u64 {
        self.e
    }

    fn dim(&self, x: &LabeledSet) -> usize {
        self.blocks(x)
            .iter()
            .map(|(_, dl, dr, _)| dl * dr)
            .sum()
    }

    fn basis(&self, x: &LabeledSet) -> Vec<BasisLabel> {
        let n = x.size();
        let mut out = Vec::new();
        for (mask, dl, dr, _) in self.blocks(x) {
            if dl == 0 || dr == 0 {
                continue;
            }
            let (inside, outside) = split_positions(n, mask);
            let lbasis = self.left.basis(&x.select(&inside));
            let rbasis = self.right.basis(&x.select(&outside));
            for lb in &lbasis {
                for rb in &rbasis {
                    out.push(BasisLabel::Split {
                        mask,
                        left: Box::new(lb.clone()),
                        right: Box::new(rb.clone()),
                    });
                }
            }
        }
        out
    }

    fn act(&self, m: &Morphism, src: &LabeledSet, tgt: &LabeledSet) -> ExactMatrix {
        let src_blocks = self.blocks(src);
        let tgt_blocks = self.blocks(tgt);
        let ds: usize = src_blocks.iter().map(|(_, a, b, _)| a * b).sum();
        let dt: usize = tgt_blocks.iter().map(|(_, a, b, _)| a * b).sum();
        let mut out = ExactMatrix::zero(ds, dt, self.e);
        for &(tmask, tdl, tdr, toff) in &tgt_blocks {
            if tdl == 0 || tdr == 0 {
                continue;
            }
            let (t_in, t_out) = split_positions(tgt.size(), tmask);
            let (s_in, local_in) = restrict_morphism(m, &t_in);
            let (s_out, local_out) = restrict_morphism(m, &t_out);
            // The receiving source block is the preimage decomposition.
            let smask = s_in.iter().fold(0u64, |acc, &i| acc | 1 << i);
            let &(_, sdl, sdr, soff) = &src_blocks[smask as usize];
            if sdl == 0 || sdr == 0 {
                continue;
            }
            let a = self
                .left
                .act(&local_in, &src.select(&s_in), &tgt.select(&t_in))
                .expect("restricted morphism is valid")
                .embed(self.e)
                .expect("exponent divides the convolution field");
            let b = self
                .right
                .act(&local_out, &src.select(&s_out), &tgt.select(&t_out))
                .expect("restricted morphism is valid")
                .embed(self.e)
                .expect("exponent divides the convolution field");
            // Kronecker block: basis pairs are row-major, left factor most
            // significant on both sides.
            for ja in 0..a.cols() {
                for jb in 0..b.cols() {
                    let col = toff + ja * tdr + jb;
                    let mut entries = Vec::new();
                    for (ia, va) in a.column(ja) {
                        for (ib, vb) in b.column(jb) {
                            let row = soff + ia * sdr + ib;
                            entries.push((
                                row,
                                va.try_mul(vb).expect("same field"),
                            ));
                        }
                    }
                    entries.sort_by_key(|(r, _)| *r);
                    let mut full = out.column(col).to_vec();
                    full.extend(entries);
                    full.sort_by_key(|(r, _)| *r);
                    out.set_column(col, full);
                }
            }
        }
        out
    }

    fn describe(&self) -> String {
        format!("conv:{}:{}", self.left.describe(), self.right.describe())
    }
}
