//! Embedding irreversible functions into reversible ones.
//!
//! Circuit lines and permutation words share one packing: line `i` of an
//! `r`-line function is bit `r - 1 - i` of the word, so the inputs of an
//! embedding on lines `0..n` form the high bits of the word.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::limits::{bit_of, low_mask, mask_of, Limits};
use crate::logic::TruthTable;

/// Bijection on `r`-bit words.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    width: usize,
    images: Vec<u64>,
}

impl Permutation {
    pub fn new(width: usize, images: Vec<u64>) -> Result<Self> {
        if width >= 40 {
            return Err(Error::invalid("permutation", "width too large"));
        }
        if images.len() != 1usize << width {
            return Err(Error::invalid(
                "permutation",
                format!("expected {} images, got {}", 1usize << width, images.len()),
            ));
        }
        let mut seen = vec![false; images.len()];
        for &y in &images {
            let slot = seen
                .get_mut(y as usize)
                .ok_or_else(|| Error::invalid("permutation", format!("image {y} out of range")))?;
            if std::mem::replace(slot, true) {
                return Err(Error::invalid("permutation", format!("image {y} repeated")));
            }
        }
        Ok(Permutation { width, images })
    }

    pub fn identity(width: usize) -> Self {
        Permutation {
            width,
            images: (0..1u64 << width).collect(),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn images(&self) -> &[u64] {
        &self.images
    }

    pub fn apply(&self, x: u64) -> u64 {
        self.images[x as usize]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &y)| i as u64 == y)
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u64; self.images.len()];
        for (x, &y) in self.images.iter().enumerate() {
            inv[y as usize] = x as u64;
        }
        Permutation {
            width: self.width,
            images: inv,
        }
    }

    /// `self` applied first, then `after`.
    pub fn then(&self, after: &Permutation) -> Permutation {
        assert_eq!(self.width, after.width);
        Permutation {
            width: self.width,
            images: self.images.iter().map(|&y| after.apply(y)).collect(),
        }
    }

    pub fn into_images(self) -> Vec<u64> {
        self.images
    }
}

/// How an `n`-input, `m`-output function sits inside an `r`-line reversible one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding {
    pub num_inputs: usize,
    pub num_outputs: usize,
    pub width: usize,
    /// Line carrying input `i`.
    pub input_lines: Vec<usize>,
    /// Lines fed with a constant, and that constant.
    pub constant_inputs: Vec<(usize, bool)>,
    /// Line carrying output `j`.
    pub output_lines: Vec<usize>,
    /// Output lines whose values are discarded.
    pub garbage_lines: Vec<usize>,
}

impl Embedding {
    /// Initial `r`-bit state for input `x` (only for `r <= 64`).
    pub fn input_word(&self, x: u64) -> u64 {
        let mut word = 0u64;
        for (i, &line) in self.input_lines.iter().enumerate() {
            if bit_of(x, self.num_inputs, i) {
                word |= mask_of(self.width, line);
            }
        }
        for &(line, value) in &self.constant_inputs {
            if value {
                word |= mask_of(self.width, line);
            }
        }
        word
    }

    /// Output word read off the designated lines of an `r`-bit state.
    pub fn read_outputs(&self, word: u64) -> u64 {
        let m = self.num_outputs;
        self.output_lines
            .iter()
            .enumerate()
            .filter(|(_, &line)| bit_of(word, self.width, line))
            .fold(0, |acc, (j, _)| acc | mask_of(m, j))
    }

    fn check(&self) -> Result<()> {
        let r = self.width;
        let in_range = |l: &usize| *l < r;
        if self.input_lines.len() != self.num_inputs
            || self.output_lines.len() != self.num_outputs
            || !self.input_lines.iter().all(in_range)
            || !self.output_lines.iter().all(in_range)
            || !self.constant_inputs.iter().all(|(l, _)| *l < r)
            || self.input_lines.len() + self.constant_inputs.len() != r
        {
            return Err(Error::invalid("embedding", "inconsistent line assignment"));
        }
        Ok(())
    }
}

/// Minimum number of additional lines: `ceil(log2)` of the largest collision set.
pub fn min_additional_lines(tt: &TruthTable) -> usize {
    let mut counts: HashMap<u64, u64> = HashMap::new();
    let mut max = 0u64;
    for &y in tt.rows() {
        let c = counts.entry(y).or_insert(0);
        *c += 1;
        max = max.max(*c);
    }
    ceil_log2(max)
}

pub(crate) fn ceil_log2(v: u64) -> usize {
    if v <= 1 {
        0
    } else {
        (64 - (v - 1).leading_zeros()) as usize
    }
}

/// `(x, c) -> (x, c ^ f(x))` on `n + m` lines with zero constants.
pub fn bennett_embed(tt: &TruthTable, limits: &Limits) -> Result<(Permutation, Embedding)> {
    let (n, m) = (tt.num_inputs(), tt.num_outputs());
    let r = n + m;
    Error::check_limit("bennett embedding width", r, limits.perm_width)?;
    let images = (0..1u64 << r)
        .map(|word| {
            let x = word >> m;
            let c = word & low_mask(m);
            (x << m) | (c ^ tt.row(x))
        })
        .collect();
    let emb = Embedding {
        num_inputs: n,
        num_outputs: m,
        width: r,
        input_lines: (0..n).collect(),
        constant_inputs: (n..r).map(|l| (l, false)).collect(),
        output_lines: (n..r).collect(),
        garbage_lines: (0..n).collect(),
    };
    Ok((Permutation { width: r, images }, emb))
}

/// Embedding with the minimum number of additional lines.
///
/// Inputs sit on the first `n` lines, zero constants on the rest, outputs on
/// the last `m` lines. Each collision set gets garbage words 0, 1, 2, ... in
/// input order; points with nonzero constants fill the remaining codomain in
/// increasing order.
pub fn optimum_embed(tt: &TruthTable, limits: &Limits) -> Result<(Permutation, Embedding)> {
    let (n, m) = (tt.num_inputs(), tt.num_outputs());
    Error::check_limit("optimum embedding inputs", n, limits.optimum_inputs)?;
    let extra = min_additional_lines(tt);
    let r = n.max(m + extra);
    Error::check_limit("optimum embedding width", r, limits.perm_width)?;

    let size = 1usize << r;
    let const_bits = r - n;
    let mut images = vec![u64::MAX; size];
    let mut claimed = vec![false; size];
    let mut next_garbage: HashMap<u64, u64> = HashMap::new();
    for x in 0..1u64 << n {
        let y = tt.row(x);
        let g = next_garbage.entry(y).or_insert(0);
        let image = (*g << m) | y;
        *g += 1;
        images[(x << const_bits) as usize] = image;
        claimed[image as usize] = true;
    }
    let mut free = claimed
        .iter()
        .enumerate()
        .filter(|(_, &c)| !c)
        .map(|(w, _)| w as u64);
    for (word, slot) in images.iter_mut().enumerate() {
        if word & low_mask(const_bits) as usize != 0 {
            *slot = free
                .next()
                .expect("domain and codomain leftovers have equal size");
        }
    }
    debug_assert!(free.next().is_none());

    let emb = Embedding {
        num_inputs: n,
        num_outputs: m,
        width: r,
        input_lines: (0..n).collect(),
        constant_inputs: (n..r).map(|l| (l, false)).collect(),
        output_lines: (r - m..r).collect(),
        garbage_lines: (0..r - m).collect(),
    };
    Ok((Permutation { width: r, images }, emb))
}

/// Checks that reading the output lines of `perm` reproduces `tt` on every input.
pub fn verify_embedding(perm: &Permutation, emb: &Embedding, tt: &TruthTable) -> bool {
    if emb.check().is_err()
        || emb.width != perm.width()
        || emb.width > 63
        || emb.num_inputs != tt.num_inputs()
        || emb.num_outputs != tt.num_outputs()
    {
        return false;
    }
    (0..1u64 << tt.num_inputs())
        .all(|x| emb.read_outputs(perm.apply(emb.input_word(x))) == tt.row(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::oracle_reciprocal;

    fn and2() -> TruthTable {
        TruthTable::from_fn(2, 1, |x| (x == 3) as u64).unwrap()
    }

    fn intdiv(n: usize) -> TruthTable {
        TruthTable::from_fn(n, n, |x| oracle_reciprocal(n, x)).unwrap()
    }

    #[test]
    fn permutation_validation() {
        assert!(Permutation::new(1, vec![1, 0]).is_ok());
        assert!(Permutation::new(1, vec![1, 1]).is_err());
        assert!(Permutation::new(1, vec![0, 2]).is_err());
        assert!(Permutation::new(2, vec![0, 1]).is_err());
        let p = Permutation::new(2, vec![2, 0, 3, 1]).unwrap();
        assert!(p.then(&p.inverse()).is_identity());
    }

    #[test]
    fn additional_lines() {
        assert_eq!(
            min_additional_lines(&TruthTable::from_fn(3, 3, |x| x ^ 6).unwrap()),
            0
        );
        assert_eq!(min_additional_lines(&and2()), 2);
        assert_eq!(min_additional_lines(&intdiv(4)), 3);
    }

    #[test]
    fn bennett_and_is_toffoli() {
        let (p, emb) = bennett_embed(&and2(), &Limits::default()).unwrap();
        assert_eq!(p.images(), &[0, 1, 2, 3, 4, 5, 7, 6]);
        assert!(verify_embedding(&p, &emb, &and2()));
        assert_eq!(emb.garbage_lines, vec![0, 1]);
        assert_eq!(emb.output_lines, vec![2]);
    }

    #[test]
    fn bennett_identity_function() {
        let tt = TruthTable::from_fn(2, 2, |x| x).unwrap();
        let (p, _) = bennett_embed(&tt, &Limits::default()).unwrap();
        for x in 0..4u64 {
            for c in 0..4u64 {
                assert_eq!(p.apply((x << 2) | c), (x << 2) | (c ^ x));
            }
        }
    }

    #[test]
    fn bennett_intdiv() {
        let tt = intdiv(4);
        let (p, emb) = bennett_embed(&tt, &Limits::default()).unwrap();
        assert_eq!(p.width(), 8);
        assert!(verify_embedding(&p, &emb, &tt));
    }

    #[test]
    fn optimum_of_bijection_is_itself() {
        let tt = TruthTable::from_fn(3, 3, |x| (x * 5 + 3) & 7).unwrap();
        let (p, _) = optimum_embed(&tt, &Limits::default()).unwrap();
        assert_eq!(p.width(), 3);
        assert_eq!(p.images(), tt.rows());
    }

    #[test]
    fn optimum_and() {
        let (p, emb) = optimum_embed(&and2(), &Limits::default()).unwrap();
        assert_eq!(p.width(), 3);
        assert!(verify_embedding(&p, &emb, &and2()));
    }

    #[test]
    fn optimum_intdiv_widths() {
        for n in 4..=8 {
            let tt = intdiv(n);
            let (p, emb) = optimum_embed(&tt, &Limits::default()).unwrap();
            assert_eq!(p.width(), 2 * n - 1, "n={n}");
            assert!(verify_embedding(&p, &emb, &tt));
        }
    }

    #[test]
    fn swapped_image_fails_verification() {
        let tt = and2();
        let (p, emb) = bennett_embed(&tt, &Limits::default()).unwrap();
        let mut images = p.into_images();
        images.swap(0, 6);
        let bad = Permutation::new(3, images).unwrap();
        assert!(!verify_embedding(&bad, &emb, &tt));
    }

    #[test]
    fn limits() {
        let tight = Limits {
            perm_width: 2,
            optimum_inputs: 1,
            ..Limits::default()
        };
        assert!(bennett_embed(&and2(), &tight).is_err());
        assert!(optimum_embed(&and2(), &tight).is_err());
    }
}
