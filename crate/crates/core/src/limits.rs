use crate::error::{Error, Result};

/// Largest n handled by default wherever all of S_n is enumerated.
pub const DEFAULT_GROUP_CAP: usize = 10;
/// Largest n reachable with the explicit override.
pub const LARGE_GROUP_CAP: usize = 11;
/// Conjugacy classes of S_n are cycle types and need no enumeration.
pub const FULL_CLASS_CAP: usize = 12;
/// Explicit n! x n! matrices are a test oracle only.
pub const EXPLICIT_MATRIX_CAP: usize = 6;
pub const SDP_CAP: usize = 5;
pub const SEARCH_CAP: usize = 5;

/// Resource caps shared by every expensive entry point.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Limits {
    /// Allow n = 11 for group enumeration, class decompositions and the LP.
    pub allow_large: bool,
}

impl Limits {
    pub fn new(allow_large: bool) -> Self {
        Limits { allow_large }
    }

    pub fn group_cap(&self) -> usize {
        if self.allow_large {
            LARGE_GROUP_CAP
        } else {
            DEFAULT_GROUP_CAP
        }
    }

    pub fn check_group(&self, what: &'static str, n: usize) -> Result<()> {
        let cap = self.group_cap();
        if n > cap {
            return Err(Error::ResourceLimit {
                what,
                n,
                cap,
                hint: if self.allow_large { "" } else { " (override available for n = 11)" },
            });
        }
        Ok(())
    }
}

pub(crate) fn check_cap(what: &'static str, n: usize, cap: usize) -> Result<()> {
    if n > cap {
        return Err(Error::ResourceLimit { what, n, cap, hint: "" });
    }
    Ok(())
}
