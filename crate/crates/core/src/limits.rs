use crate::error::{Error, Result};

/// Name of the environment variable that overrides [`Limits::tt_inputs`].
pub const TT_LIMIT_ENV: &str = "REVFLOW_TT_LIMIT";

/// Enumeration bounds shared by every explicit (table-based) operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of truth-table inputs (2^n rows are materialized).
    pub tt_inputs: usize,
    /// Maximum width of an explicit permutation.
    pub perm_width: usize,
    /// Maximum number of inputs accepted by the optimum embedding.
    pub optimum_inputs: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            tt_inputs: 20,
            perm_width: 24,
            optimum_inputs: 16,
        }
    }
}

impl Limits {
    /// Defaults, with the truth-table limit taken from `REVFLOW_TT_LIMIT` when set.
    pub fn from_env() -> Result<Self> {
        let mut limits = Limits::default();
        if let Ok(value) = std::env::var(TT_LIMIT_ENV) {
            let parsed: usize = value.trim().parse().map_err(|_| {
                Error::invalid("limit", format!("{TT_LIMIT_ENV}={value:?} is not a count"))
            })?;
            if parsed > 32 {
                return Err(Error::invalid(
                    "limit",
                    format!("{TT_LIMIT_ENV}={parsed} exceeds the hard cap of 32 inputs"),
                ));
            }
            limits.tt_inputs = parsed;
        }
        Ok(limits)
    }
}

/// Most-significant-first bit packing used for every word in the crate:
/// element `i` of a `width`-element word lives at bit `width - 1 - i`, so the
/// word reads like a binary numeral with element 0 on the left.
#[inline]
pub(crate) fn mask_of(width: usize, i: usize) -> u64 {
    debug_assert!(i < width);
    1u64 << (width - 1 - i)
}

#[inline]
pub(crate) fn bit_of(word: u64, width: usize, i: usize) -> bool {
    word & mask_of(width, i) != 0
}

#[inline]
pub(crate) fn low_mask(width: usize) -> u64 {
    if width >= 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}
