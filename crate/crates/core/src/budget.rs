//! Enumeration caps.
//!
//! The default group-order cap is 4096. The environment variable
//! `FUSIONKIT_BUDGET` overrides it; the remaining caps scale with it.

use crate::error::{Error, Result};

/// Default cap on the order of a group whose subgroups are enumerated.
pub const DEFAULT_GROUP_ORDER_CAP: usize = 4096;

/// Caps applied by enumeration and search routines.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Largest group order accepted by subgroup enumeration and table construction.
    pub group_order: usize,
    /// Largest number of subgroups an enumeration may produce.
    pub subgroups: usize,
    /// Largest size of a generator-image search space in `injective_homs`.
    pub search: usize,
}

impl Budget {
    /// Builds a budget from a group-order cap, deriving the other caps from it.
    pub fn with_group_order(cap: usize) -> Self {
        Budget {
            group_order: cap,
            subgroups: cap.saturating_mul(32).max(1024),
            search: cap.saturating_mul(cap).max(1 << 20),
        }
    }

    /// Reads `FUSIONKIT_BUDGET` if set, otherwise uses the default caps.
    pub fn from_env() -> Self {
        match std::env::var("FUSIONKIT_BUDGET").ok().and_then(|v| v.trim().parse::<usize>().ok()) {
            Some(cap) if cap > 0 => Budget::with_group_order(cap),
            _ => Budget::default(),
        }
    }

    /// Fails with [`Error::Budget`] when `size` exceeds the group-order cap.
    pub fn check_group_order(&self, size: usize) -> Result<()> {
        if size > self.group_order {
            return Err(Error::Budget { what: "group order".into(), size, cap: self.group_order });
        }
        Ok(())
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::with_group_order(DEFAULT_GROUP_ORDER_CAP)
    }
}
