use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::limits::{bit_of, low_mask, mask_of};
use crate::logic::TruthTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarity {
    Positive,
    Negative,
}

/// Product term feeding a set of outputs.
///
/// `pos`/`neg` use the row packing of [`TruthTable`] (input 0 is the most
/// significant bit) so a cube fires on row `x` iff `x & pos == pos` and
/// `x & neg == 0`. `outputs` uses the output-word packing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Cube {
    pub pos: u64,
    pub neg: u64,
    pub outputs: u64,
}

impl Cube {
    pub fn from_literals(
        num_inputs: usize,
        literals: &[(usize, Polarity)],
        outputs: u64,
    ) -> Result<Self> {
        if outputs == 0 {
            return Err(Error::invalid("cube", "output mask is empty"));
        }
        let (mut pos, mut neg) = (0u64, 0u64);
        for &(i, pol) in literals {
            if i >= num_inputs {
                return Err(Error::invalid("cube", format!("input {i} out of range")));
            }
            let m = mask_of(num_inputs, i);
            if (pos | neg) & m != 0 {
                return Err(Error::invalid("cube", format!("input {i} appears twice")));
            }
            match pol {
                Polarity::Positive => pos |= m,
                Polarity::Negative => neg |= m,
            }
        }
        Ok(Cube { pos, neg, outputs })
    }

    #[inline]
    pub fn fires(&self, x: u64) -> bool {
        x & self.pos == self.pos && x & self.neg == 0
    }

    pub fn num_literals(&self) -> usize {
        (self.pos | self.neg).count_ones() as usize
    }

    /// Literals in ascending input order.
    pub fn literals(&self, num_inputs: usize) -> Vec<(usize, Polarity)> {
        (0..num_inputs)
            .filter_map(|i| {
                if bit_of(self.pos, num_inputs, i) {
                    Some((i, Polarity::Positive))
                } else if bit_of(self.neg, num_inputs, i) {
                    Some((i, Polarity::Negative))
                } else {
                    None
                }
            })
            .collect()
    }
}

/// Multi-output exclusive sum-of-products.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EsopForm {
    num_inputs: usize,
    num_outputs: usize,
    cubes: Vec<Cube>,
}

impl EsopForm {
    pub fn new(num_inputs: usize, num_outputs: usize, cubes: Vec<Cube>) -> Result<Self> {
        if num_inputs >= 64 || num_outputs > 64 {
            return Err(Error::invalid("esop", "dimensions exceed 64 bits"));
        }
        let in_mask = low_mask(num_inputs);
        let out_mask = low_mask(num_outputs);
        for (k, c) in cubes.iter().enumerate() {
            if c.outputs == 0 || c.outputs & !out_mask != 0 {
                return Err(Error::invalid(
                    "esop",
                    format!("cube {k} has a bad output mask"),
                ));
            }
            if (c.pos | c.neg) & !in_mask != 0 || c.pos & c.neg != 0 {
                return Err(Error::invalid("esop", format!("cube {k} has bad literals")));
            }
        }
        Ok(EsopForm {
            num_inputs,
            num_outputs,
            cubes,
        })
    }

    pub fn num_inputs(&self) -> usize {
        self.num_inputs
    }

    pub fn num_outputs(&self) -> usize {
        self.num_outputs
    }

    pub fn cubes(&self) -> &[Cube] {
        &self.cubes
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.cubes
            .iter()
            .filter(|c| c.fires(x))
            .fold(0, |acc, c| acc ^ c.outputs)
    }

    pub fn to_truth_table(&self) -> Result<TruthTable> {
        TruthTable::from_fn(self.num_inputs, self.num_outputs, |x| self.eval(x))
    }
}

/// Positive-polarity Reed-Muller expansion of every output.
///
/// The butterfly runs on whole output words, so monomials shared by several
/// outputs come out as one cube with a multi-bit mask.
pub fn esop_from_tt(tt: &TruthTable) -> EsopForm {
    let mut coeffs = tt.rows().to_vec();
    let len = coeffs.len();
    let mut step = 1;
    while step < len {
        for idx in 0..len {
            if idx & step != 0 {
                coeffs[idx] ^= coeffs[idx ^ step];
            }
        }
        step <<= 1;
    }
    let cubes = coeffs
        .iter()
        .enumerate()
        .filter(|(_, &w)| w != 0)
        .map(|(idx, &w)| Cube {
            pos: idx as u64,
            neg: 0,
            outputs: w,
        })
        .collect();
    EsopForm {
        num_inputs: tt.num_inputs(),
        num_outputs: tt.num_outputs(),
        cubes,
    }
}

/// Literal state of one input in a cube: 0 negative, 1 positive, 2 absent.
fn literal_state(c: &Cube, m: u64) -> u8 {
    if c.neg & m != 0 {
        0
    } else if c.pos & m != 0 {
        1
    } else {
        2
    }
}

/// Merges two cubes with equal output masks whose literals differ in exactly
/// one input; the merged position takes the remaining third state
/// (`x ^ !x = 1`, `x ^ 1 = !x`, `!x ^ 1 = x`).
fn merge_distance_one(a: &Cube, b: &Cube) -> Option<Cube> {
    if a.outputs != b.outputs {
        return None;
    }
    let diff = (a.pos ^ b.pos) | (a.neg ^ b.neg);
    if !diff.is_power_of_two() {
        return None;
    }
    let third = 3 - literal_state(a, diff) - literal_state(b, diff);
    let (mut pos, mut neg) = (a.pos & !diff, a.neg & !diff);
    match third {
        0 => neg |= diff,
        1 => pos |= diff,
        _ => {}
    }
    Some(Cube {
        pos,
        neg,
        outputs: a.outputs,
    })
}

/// Folds cubes with identical literals into one cube (output masks XOR),
/// dropping cubes whose mask cancels to zero. First-occurrence order is kept.
fn cancel_duplicates(cubes: &mut Vec<Cube>) -> bool {
    let mut index: HashMap<(u64, u64), usize> = HashMap::with_capacity(cubes.len());
    let mut merged: Vec<Cube> = Vec::with_capacity(cubes.len());
    for c in cubes.iter() {
        match index.get(&(c.pos, c.neg)) {
            Some(&k) => merged[k].outputs ^= c.outputs,
            None => {
                index.insert((c.pos, c.neg), merged.len());
                merged.push(*c);
            }
        }
    }
    merged.retain(|c| c.outputs != 0);
    let changed = merged.len() != cubes.len();
    *cubes = merged;
    changed
}

/// Heuristic ESOP minimization: XOR cancellation of identical cubes and
/// distance-1 merging, repeated until neither applies.
pub fn esop_minimize(esop: &EsopForm) -> EsopForm {
    let mut cubes = esop.cubes.clone();
    loop {
        let mut changed = cancel_duplicates(&mut cubes);
        let mut i = 0;
        while i < cubes.len() {
            let mut j = i + 1;
            while j < cubes.len() {
                if let Some(m) = merge_distance_one(&cubes[i], &cubes[j]) {
                    cubes[i] = m;
                    cubes.remove(j);
                    changed = true;
                    j = i + 1;
                } else {
                    j += 1;
                }
            }
            i += 1;
        }
        if !changed {
            break;
        }
    }
    EsopForm {
        num_inputs: esop.num_inputs,
        num_outputs: esop.num_outputs,
        cubes,
    }
}

#[cfg(test)]
mod tests {
    use super::Polarity::*;
    use super::*;

    fn and2() -> TruthTable {
        TruthTable::from_fn(2, 1, |x| (x == 3) as u64).unwrap()
    }

    #[test]
    fn pprm_of_and_is_single_cube() {
        let e = esop_from_tt(&and2());
        assert_eq!(e.cubes().len(), 1);
        assert_eq!(e.cubes()[0].literals(2), vec![(0, Positive), (1, Positive)]);
    }

    #[test]
    fn pprm_of_or() {
        let tt = TruthTable::new(2, 1, vec![0, 1, 1, 1]).unwrap();
        let e = esop_from_tt(&tt);
        let lits: Vec<_> = e.cubes().iter().map(|c| c.literals(2)).collect();
        assert_eq!(
            lits,
            vec![
                vec![(1, Positive)],
                vec![(0, Positive)],
                vec![(0, Positive), (1, Positive)]
            ]
        );
        assert_eq!(e.to_truth_table().unwrap(), tt);
    }

    #[test]
    fn constant_zero_output_gets_no_cube() {
        let tt = TruthTable::from_fn(3, 2, |x| (x & 1) << 1).unwrap();
        let e = esop_from_tt(&tt);
        assert!(e.cubes().iter().all(|c| c.outputs & 0b01 == 0));
        assert_eq!(e.to_truth_table().unwrap(), tt);
    }

    #[test]
    fn identical_cubes_cancel() {
        let a = Cube::from_literals(2, &[(0, Positive)], 1).unwrap();
        let e = EsopForm::new(2, 1, vec![a, a]).unwrap();
        assert!(esop_minimize(&e).cubes().is_empty());
    }

    #[test]
    fn distance_one_merge() {
        let ab = Cube::from_literals(2, &[(0, Positive), (1, Positive)], 1).unwrap();
        let abn = Cube::from_literals(2, &[(0, Positive), (1, Negative)], 1).unwrap();
        let e = EsopForm::new(2, 1, vec![ab, abn]).unwrap();
        let m = esop_minimize(&e);
        assert_eq!(m.cubes().len(), 1);
        assert_eq!(m.cubes()[0].literals(2), vec![(0, Positive)]);
        for x in 0..4 {
            assert_eq!(m.eval(x), e.eval(x));
        }
    }

    #[test]
    fn merge_with_absent_literal() {
        // a.b ^ a == a.!b
        let ab = Cube::from_literals(2, &[(0, Positive), (1, Positive)], 1).unwrap();
        let a = Cube::from_literals(2, &[(0, Positive)], 1).unwrap();
        let m = merge_distance_one(&ab, &a).unwrap();
        assert_eq!(m.literals(2), vec![(0, Positive), (1, Negative)]);
    }

    #[test]
    fn minimal_form_unchanged() {
        let c = Cube::from_literals(3, &[(0, Negative), (2, Positive)], 1).unwrap();
        let e = EsopForm::new(3, 1, vec![c]).unwrap();
        assert_eq!(esop_minimize(&e), e);
    }

    #[test]
    fn cube_validation() {
        assert!(Cube::from_literals(2, &[(0, Positive), (0, Negative)], 1).is_err());
        assert!(Cube::from_literals(2, &[(0, Positive)], 0).is_err());
        assert!(Cube::from_literals(2, &[(2, Positive)], 1).is_err());
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(40))]
        #[test]
        fn transforms_preserve_function(seed: u64, n in 0usize..=10, m in 1usize..=4) {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let tt = crate::testing::random_table(&mut rng, n, m);
            let pprm = esop_from_tt(&tt);
            proptest::prop_assert!(pprm.cubes().iter().all(|c| c.neg == 0));
            proptest::prop_assert_eq!(&pprm.to_truth_table().unwrap(), &tt);
            let min = esop_minimize(&pprm);
            proptest::prop_assert!(min.cubes().len() <= pprm.cubes().len());
            proptest::prop_assert_eq!(min.to_truth_table().unwrap(), tt);
        }
    }
}
