//! Word-level arithmetic emitted as MAJ/XOR logic. Words are LSB first.

use crate::logic::{Edge, XmgBuilder};

pub(crate) type Word = Vec<Edge>;

pub(crate) fn constant(value: u64, width: usize) -> Word {
    (0..width)
        .map(|i| {
            if (value >> i) & 1 == 1 {
                Edge::ONE
            } else {
                Edge::ZERO
            }
        })
        .collect()
}

pub(crate) fn sign_extend(word: &[Edge], width: usize) -> Word {
    let sign = *word.last().expect("empty word");
    let mut out = word.to_vec();
    out.resize(width, sign);
    out.truncate(width);
    out
}

/// Ripple-carry `a + b + carry_in` modulo `2^width`; returns the carry out.
pub(crate) fn add(b: &mut XmgBuilder, x: &[Edge], y: &[Edge], carry_in: Edge) -> (Word, Edge) {
    assert_eq!(x.len(), y.len());
    let mut carry = carry_in;
    let mut sum = Vec::with_capacity(x.len());
    for (&xi, &yi) in x.iter().zip(y) {
        let t = b.xor(xi, yi);
        sum.push(b.xor(t, carry));
        carry = b.maj(xi, yi, carry);
    }
    (sum, carry)
}

pub(crate) fn sub(b: &mut XmgBuilder, x: &[Edge], y: &[Edge]) -> Word {
    let not_y: Word = y.iter().map(|&e| !e).collect();
    add(b, x, &not_y, Edge::ONE).0
}

/// `x - y` with a borrow chain (`borrow' = MAJ(!x, y, borrow)`); the returned
/// flag is set iff `x < y` as unsigned words.
pub(crate) fn sub_borrow(b: &mut XmgBuilder, x: &[Edge], y: &[Edge]) -> (Word, Edge) {
    assert_eq!(x.len(), y.len());
    let mut borrow = Edge::ZERO;
    let mut diff = Vec::with_capacity(x.len());
    for (&xi, &yi) in x.iter().zip(y) {
        let t = b.xor(xi, yi);
        diff.push(b.xor(t, borrow));
        borrow = b.maj(!xi, yi, borrow);
    }
    (diff, borrow)
}

pub(crate) fn mux_word(b: &mut XmgBuilder, sel: Edge, then_: &[Edge], else_: &[Edge]) -> Word {
    then_
        .iter()
        .zip(else_)
        .map(|(&t, &e)| b.mux(sel, t, e))
        .collect()
}

/// Array multiplier keeping the low `width` product bits; operands must
/// already be `width` bits (sign-extend first for signed products).
pub(crate) fn mul_low(b: &mut XmgBuilder, x: &[Edge], y: &[Edge], width: usize) -> Word {
    assert!(x.len() == width && y.len() == width);
    let mut acc = constant(0, width);
    for (j, &yj) in y.iter().enumerate() {
        let partial: Word = x[..width - j].iter().map(|&xi| b.and(xi, yj)).collect();
        let (sum, _) = add(b, &acc[j..], &partial, Edge::ZERO);
        acc[j..].copy_from_slice(&sum);
    }
    acc
}

/// Left shift by a variable amount (`amount` is an LSB-first binary count)
/// into a `width`-bit result; vacated bits are zero.
pub(crate) fn shift_left(b: &mut XmgBuilder, word: &[Edge], amount: &[Edge], width: usize) -> Word {
    let mut cur: Word = word.to_vec();
    cur.resize(width, Edge::ZERO);
    cur.truncate(width);
    for (k, &s) in amount.iter().enumerate() {
        let step = 1usize << k;
        let shifted: Word = (0..width)
            .map(|i| if i >= step { cur[i - step] } else { Edge::ZERO })
            .collect();
        cur = mux_word(b, s, &shifted, &cur);
    }
    cur
}

/// Leading-zero normalization of an `n`-bit word: shifts left in stages of
/// `2^k` whenever the top `2^k` bits are zero. Returns the normalized word and
/// the shift amount as an LSB-first count. Undefined for a zero input.
pub(crate) fn normalize(b: &mut XmgBuilder, word: &[Edge]) -> (Word, Word) {
    let n = word.len();
    let mut stages = 0;
    while (1usize << stages) < n {
        stages += 1;
    }
    let mut cur = word.to_vec();
    let mut amount = vec![Edge::ZERO; stages];
    for k in (0..stages).rev() {
        let step = 1usize << k;
        let mut top_zero = Edge::ONE;
        for &e in &cur[n - step..] {
            top_zero = b.and(top_zero, !e);
        }
        let shifted: Word = (0..n)
            .map(|i| if i >= step { cur[i - step] } else { Edge::ZERO })
            .collect();
        cur = mux_word(b, top_zero, &shifted, &cur);
        amount[k] = top_zero;
    }
    (cur, amount)
}
