use crate::arith::design::{Design, DesignSpec};
use crate::arith::fixed::{FixedPointValue, INT_BITS};
use crate::arith::words::{self, Word};
use crate::error::{Error, Result};
use crate::logic::{Edge, Xmg, XmgBuilder};

/// Declares inputs `x1..xn` (`x1` most significant) and returns the value as
/// an LSB-first word.
fn declare_inputs(b: &mut XmgBuilder, n: usize) -> Word {
    let mut xs: Word = (1..=n).map(|i| b.input(format!("x{i}"))).collect();
    xs.reverse();
    xs
}

/// Declares outputs `y1..yn` from an LSB-first word (`y1` is its MSB).
fn declare_outputs(b: &mut XmgBuilder, y: &[Edge]) {
    for (j, &e) in y.iter().rev().enumerate() {
        b.output(e, format!("y{}", j + 1));
    }
}

/// Unrolled restoring division of the constant `2^n` by the zero-extended
/// input; the quotient MSB is dropped.
pub fn gen_intdiv_xmg(n: usize) -> Result<Xmg> {
    DesignSpec::intdiv(n).validate()?;
    let mut b = XmgBuilder::new();
    let x = declare_inputs(&mut b, n);
    let mut divisor = x.clone();
    divisor.push(Edge::ZERO);
    let mut rem = words::constant(0, n + 1);
    let mut quotient = Vec::with_capacity(n + 1);
    for step in (0..=n).rev() {
        let dividend_bit = if step == n { Edge::ONE } else { Edge::ZERO };
        let mut shifted = Vec::with_capacity(n + 1);
        shifted.push(dividend_bit);
        shifted.extend_from_slice(&rem[..n]);
        let (diff, borrow) = words::sub_borrow(&mut b, &shifted, &divisor);
        let q = !borrow;
        quotient.push(q);
        if step > 0 {
            rem = words::mux_word(&mut b, q, &diff, &shifted);
        }
    }
    // quotient holds q_n first; keep q_{n-1} .. q_0
    let y: Word = quotient[1..].iter().rev().copied().collect();
    declare_outputs(&mut b, &y);
    Ok(b.finish())
}

fn fxp_constant(v: FixedPointValue) -> Word {
    words::constant(v.bits(), (INT_BITS + v.frac_bits()) as usize)
}

/// Q3.`w1` x Q3.`w2` product truncated to Q3.`w`.
fn mul_trunc(b: &mut XmgBuilder, u: &[Edge], w1: u32, v: &[Edge], w2: u32, w: u32) -> Word {
    let wide = (INT_BITS + w1 + w2) as usize;
    let ue = words::sign_extend(u, wide);
    let ve = words::sign_extend(v, wide);
    let product = words::mul_low(b, &ue, &ve, wide);
    product[(w1 + w2 - w) as usize..].to_vec()
}

/// Newton-Raphson reciprocal datapath; bit-exact with
/// [`newton_model`](crate::arith::newton_model).
pub fn gen_newton_xmg(spec: &DesignSpec) -> Result<Xmg> {
    if spec.design != Design::Newton {
        return Err(Error::invalid(
            "design",
            "gen_newton_xmg needs a Newton design",
        ));
    }
    spec.validate()?;
    let n = spec.bitwidth;
    let nb = n as u32;
    let p = spec.precision();
    let mut b = XmgBuilder::new();
    let x = declare_inputs(&mut b, n);

    // x' = x / 2^e as Q3.n: the leading one moves to the top fractional bit
    let (norm, lzc) = words::normalize(&mut b, &x);
    let mut xp = norm;
    xp.extend(std::iter::repeat_n(Edge::ZERO, INT_BITS as usize));

    let c48 = fxp_constant(FixedPointValue::from_ratio(48, 17, p));
    let c32 = fxp_constant(FixedPointValue::from_ratio(32, 17, nb));
    let one = fxp_constant(FixedPointValue::one(p));

    let t = mul_trunc(&mut b, &c32, nb, &xp, nb, p);
    let mut xi = words::sub(&mut b, &c48, &t);
    for _ in 0..spec.iterations() {
        let t = mul_trunc(&mut b, &xp, nb, &xi, p, p);
        let err = words::sub(&mut b, &one, &t);
        let corr = mul_trunc(&mut b, &xi, p, &err, p, p);
        xi = words::add(&mut b, &xi, &corr, Edge::ZERO).0;
    }

    // y' = x_I >> e = (x_I << lzc) >> n, since e = n - lzc
    let width = n + p as usize;
    let wide = words::sign_extend(&xi, width);
    let shifted = words::shift_left(&mut b, &wide, &lzc, width);
    let frac = &shifted[n..];
    let drop = (p - nb) as usize;
    let mut y: Word = if drop == 0 {
        frac[..n].to_vec()
    } else {
        let half = words::constant(1 << (drop - 1), p as usize);
        let rounded = words::add(&mut b, frac, &half, Edge::ZERO).0;
        rounded[drop..].to_vec()
    };

    // x = 0 saturates to all ones
    let mut is_zero = Edge::ONE;
    for &e in &x {
        is_zero = b.and(is_zero, !e);
    }
    for e in y.iter_mut() {
        *e = b.or(*e, is_zero);
    }
    declare_outputs(&mut b, &y);
    Ok(b.finish())
}

/// Generator for either design.
pub fn gen_design_xmg(spec: &DesignSpec) -> Result<Xmg> {
    match spec.design {
        Design::IntDiv => gen_intdiv_xmg(spec.bitwidth),
        Design::Newton => gen_newton_xmg(spec),
    }
}
