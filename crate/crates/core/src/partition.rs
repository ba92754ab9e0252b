//! Integer partitions, used both as cycle types and as labels of irreducible
//! characters of the symmetric group.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

/// A partition of `n`: weakly decreasing positive parts.
///
/// The total order is reverse-lexicographic, so `[n]` sorts first and
/// `[1, 1, ..., 1]` sorts last.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Partition {
    parts: Vec<u8>,
}

impl Partition {
    /// Builds a partition from arbitrary positive parts (they are sorted).
    pub fn new(mut parts: Vec<u8>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    pub fn parts(&self) -> &[u8] {
        &self.parts
    }

    pub fn size(&self) -> usize {
        self.parts.iter().map(|&p| p as usize).sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Size of the conjugacy class of S_n with this cycle type: n! / z_mu.
    pub fn class_size(&self) -> u64 {
        let n = self.size();
        let mut z: u64 = 1;
        let mut i = 0;
        while i < self.parts.len() {
            let part = self.parts[i] as u64;
            let mut mult = 0u64;
            while i < self.parts.len() && self.parts[i] as u64 == part {
                mult += 1;
                i += 1;
            }
            z *= part.pow(mult as u32) * factorial_u64(mult as usize);
        }
        factorial_u64(n) / z
    }
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        // reverse-lexicographic: larger leading parts first
        other.parts.cmp(&self.parts)
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, p) in self.parts.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

/// All partitions of `n` in canonical (reverse-lexicographic) order.
pub fn partitions(n: usize) -> Vec<Partition> {
    fn rec(rem: usize, max: usize, cur: &mut Vec<u8>, out: &mut Vec<Partition>) {
        if rem == 0 {
            out.push(Partition { parts: cur.clone() });
            return;
        }
        for k in (1..=rem.min(max)).rev() {
            cur.push(k as u8);
            rec(rem - k, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

pub(crate) fn factorial_u64(n: usize) -> u64 {
    (1..=n as u64).product()
}
