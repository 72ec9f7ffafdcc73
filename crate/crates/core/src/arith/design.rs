use crate::arith::fixed::FixedPointValue;
use crate::error::{Error, Result};
use crate::limits::{low_mask, Limits};
use crate::logic::TruthTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Design {
    IntDiv,
    Newton,
}

impl Design {
    pub fn name(self) -> &'static str {
        match self {
            Design::IntDiv => "intdiv",
            Design::Newton => "newton",
        }
    }
}

impl std::str::FromStr for Design {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "intdiv" => Ok(Design::IntDiv),
            "newton" => Ok(Design::Newton),
            other => Err(Error::invalid(
                "design",
                format!("unknown design {other:?}"),
            )),
        }
    }
}

/// A reciprocal design instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DesignSpec {
    pub design: Design,
    pub bitwidth: usize,
    /// Fractional bits of the Newton iterates; defaults to `2n`.
    pub precision: Option<u32>,
    /// Number of Newton iterations; defaults to the convergence formula.
    pub iterations: Option<u32>,
}

impl DesignSpec {
    pub fn intdiv(bitwidth: usize) -> Self {
        DesignSpec {
            design: Design::IntDiv,
            bitwidth,
            precision: None,
            iterations: None,
        }
    }

    pub fn newton(bitwidth: usize) -> Self {
        DesignSpec {
            design: Design::Newton,
            ..DesignSpec::intdiv(bitwidth)
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.bitwidth < 2 {
            return Err(Error::invalid("design", "bitwidth must be at least 2"));
        }
        if self.bitwidth > 32 {
            return Err(Error::invalid(
                "design",
                "bitwidth above 32 is not supported",
            ));
        }
        if self.design == Design::Newton {
            let p = self.precision();
            if (p as usize) < self.bitwidth {
                return Err(Error::invalid(
                    "design",
                    format!("precision {p} is below the bitwidth {}", self.bitwidth),
                ));
            }
            // the seed product Q3.n x Q3.n cannot be widened past 2n bits
            if p > 2 * self.bitwidth as u32 {
                return Err(Error::invalid(
                    "design",
                    format!("precision {p} exceeds twice the bitwidth {}", self.bitwidth),
                ));
            }
        }
        Ok(())
    }

    pub fn precision(&self) -> u32 {
        self.precision.unwrap_or(2 * self.bitwidth as u32)
    }

    /// `ceil(log2((P + 1) / log2 17))` unless overridden.
    pub fn iterations(&self) -> u32 {
        self.iterations.unwrap_or_else(|| {
            let p = self.precision() as f64;
            let i = ((p + 1.0) / 17f64.log2()).log2().ceil();
            i.max(0.0) as u32
        })
    }
}

/// Low `n` bits of `floor(2^n / x)`; `x = 0` saturates to `2^n - 1`.
pub fn oracle_reciprocal(n: usize, x: u64) -> u64 {
    assert!((1..64).contains(&n) && x < 1u64 << n);
    if x == 0 {
        return low_mask(n);
    }
    ((1u64 << n) / x) & low_mask(n)
}

/// Intermediate values of one Newton run.
#[derive(Debug, Clone)]
pub struct NewtonTrace {
    /// Normalization exponent: `x' = x / 2^e` lies in `[1/2, 1)`.
    pub exponent: u32,
    /// Normalized input, Q3.n.
    pub normalized: FixedPointValue,
    /// `x_0 ..= x_I` at the computation precision.
    pub iterates: Vec<FixedPointValue>,
    pub output: u64,
}

/// Bit-exact software model of the Newton-Raphson reciprocal datapath.
///
/// `x' = x / 2^e` (Q3.n), `x_0 = 48/17 - 32/17 * x'`,
/// `x_i = x_{i-1} + x_{i-1} * (1 - x' * x_{i-1})` with truncating products at
/// `P` fractional bits, `y' = x_I >> e`, and the output is `y'` rounded to its
/// `n` most significant fractional bits.
pub fn newton_trace(spec: &DesignSpec, x: u64) -> Option<NewtonTrace> {
    let n = spec.bitwidth;
    if x == 0 {
        return None;
    }
    let p = spec.precision();
    let nb = n as u32;
    let e = 64 - x.leading_zeros();
    let normalized = FixedPointValue::from_raw(nb, (x << (nb - e)) as i64);
    let c48 = FixedPointValue::from_ratio(48, 17, p);
    let c32 = FixedPointValue::from_ratio(32, 17, nb);
    let one = FixedPointValue::one(p);
    let mut xi = c48 - c32.mul_trunc(normalized, p);
    let mut iterates = vec![xi];
    for _ in 0..spec.iterations() {
        let err = one - normalized.mul_trunc(xi, p);
        xi = xi + xi.mul_trunc(err, p);
        iterates.push(xi);
    }
    let shifted = xi.raw() >> e;
    let drop = p - nb;
    let rounded = if drop == 0 {
        shifted
    } else {
        (shifted + (1i64 << (drop - 1))) >> drop
    };
    Some(NewtonTrace {
        exponent: e,
        normalized,
        iterates,
        output: (rounded as u64) & low_mask(n),
    })
}

pub fn newton_model(spec: &DesignSpec, x: u64) -> u64 {
    match newton_trace(spec, x) {
        Some(t) => t.output,
        None => low_mask(spec.bitwidth),
    }
}

/// Reference truth table of a design, straight from the software models.
pub fn design_table(spec: &DesignSpec, limits: &Limits) -> Result<TruthTable> {
    spec.validate()?;
    let n = spec.bitwidth;
    Error::check_limit("truth table inputs", n, limits.tt_inputs)?;
    match spec.design {
        Design::IntDiv => TruthTable::from_fn(n, n, |x| oracle_reciprocal(n, x)),
        Design::Newton => TruthTable::from_fn(n, n, |x| newton_model(spec, x)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_reciprocal_of_22() {
        let y = oracle_reciprocal(8, 22);
        assert_eq!(y, 0b0000_1011);
        assert_eq!(y as f64 / 256.0, 0.04296875);
    }

    #[test]
    fn reciprocal_of_one_drops_to_zero() {
        for n in 2..20 {
            assert_eq!(oracle_reciprocal(n, 1), 0);
            assert_eq!(oracle_reciprocal(n, 0), (1 << n) - 1);
        }
        assert_eq!(oracle_reciprocal(4, 3), 0b0101);
    }

    #[test]
    fn iteration_count_formula() {
        assert_eq!(DesignSpec::newton(8).precision(), 16);
        assert_eq!(DesignSpec::newton(8).iterations(), 3);
        assert_eq!(DesignSpec::newton(4).iterations(), 2);
        let spec = DesignSpec {
            iterations: Some(5),
            ..DesignSpec::newton(4)
        };
        assert_eq!(spec.iterations(), 5);
    }

    #[test]
    fn newton_x_one_is_zero() {
        for n in 2..=12 {
            assert_eq!(newton_model(&DesignSpec::newton(n), 1), 0, "n={n}");
        }
    }

    #[test]
    fn newton_within_one_ulp() {
        for n in 2..=12 {
            let spec = DesignSpec::newton(n);
            for x in 1..1u64 << n {
                let got = newton_model(&spec, x) as i64;
                let want = oracle_reciprocal(n, x) as i64;
                assert!((got - want).abs() <= 1, "n={n} x={x} got={got} want={want}");
            }
        }
    }

    /// Exact distance `|x_i - 1/x'|` in units of `2^-P / x'_raw`.
    fn scaled_error(t: &NewtonTrace, xi: FixedPointValue, n: u32) -> i128 {
        let xr = t.normalized.raw() as i128;
        let p = xi.frac_bits();
        (xi.raw() as i128 * xr - (1i128 << (n + p))).abs()
    }

    /// Once the iterate sits within a few ulps the truncating products can
    /// wobble it by an ulp or two, so growth is only allowed inside that floor.
    #[test]
    fn newton_error_never_grows() {
        for n in 2..=8u32 {
            let spec = DesignSpec::newton(n as usize);
            for x in 1..1u64 << n {
                let t = newton_trace(&spec, x).unwrap();
                let errs: Vec<i128> = t.iterates.iter().map(|&v| scaled_error(&t, v, n)).collect();
                let floor = 4 * t.normalized.raw() as i128;
                assert!(
                    errs.windows(2).all(|w| w[1] <= w[0].max(floor)),
                    "n={n} x={x} {errs:?}"
                );
                assert!(*errs.last().unwrap() <= floor, "n={n} x={x} {errs:?}");
            }
        }
    }

    #[test]
    fn validation() {
        assert!(DesignSpec::intdiv(1).validate().is_err());
        assert!(DesignSpec::intdiv(2).validate().is_ok());
        let low = DesignSpec {
            precision: Some(3),
            ..DesignSpec::newton(4)
        };
        assert!(low.validate().is_err());
        let high = DesignSpec {
            precision: Some(9),
            ..DesignSpec::newton(4)
        };
        assert!(high.validate().is_err());
    }

    #[test]
    fn design_names_parse() {
        assert_eq!("INTDIV".parse::<Design>().unwrap(), Design::IntDiv);
        assert_eq!("newton".parse::<Design>().unwrap(), Design::Newton);
        assert!("foo".parse::<Design>().is_err());
    }
}
