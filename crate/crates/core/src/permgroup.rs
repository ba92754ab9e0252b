//! Permutations of {1..n}, the longest element, and the subgroups Psi_n and Theta_n.
//!
//! Permutations are stored as zero-based image arrays but every public
//! constructor and accessor speaks one-line notation over {1..n}. The
//! canonical element order is lexicographic on one-line arrays, and the
//! position of a permutation in that order is its [`Permutation::rank`].

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::partition::{factorial_u64, Partition};

pub type CycleType = Partition;

/// Largest n supported by the u128 bitmask fast paths.
const MASK_BITS: usize = 128;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    images: Vec<u8>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { images: (0..n as u8).collect() }
    }

    /// Builds a permutation from one-line notation over {1..n}.
    pub fn from_one_line(one_line: &[usize]) -> Result<Self> {
        let n = one_line.len();
        let invalid = || Error::InvalidPermutation { n, images: one_line.to_vec() };
        if n > u8::MAX as usize {
            return Err(invalid());
        }
        let mut seen = vec![false; n];
        let mut images = Vec::with_capacity(n);
        for &x in one_line {
            if x == 0 || x > n || seen[x - 1] {
                return Err(invalid());
            }
            seen[x - 1] = true;
            images.push((x - 1) as u8);
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation from disjoint cycles written over {1..n}, e.g.
    /// `from_cycles(3, &[&[1, 2, 3]])` is (123) with 1 -> 2 -> 3 -> 1.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut one_line: Vec<usize> = (1..=n).collect();
        let mut touched = vec![false; n];
        for cycle in cycles {
            for (k, &x) in cycle.iter().enumerate() {
                if x == 0 || x > n || touched[x - 1] {
                    return Err(Error::InvalidArgument(format!(
                        "cycles {cycles:?} are not disjoint cycles over 1..{n}"
                    )));
                }
                touched[x - 1] = true;
                one_line[x - 1] = cycle[(k + 1) % cycle.len()];
            }
        }
        Permutation::from_one_line(&one_line)
    }

    pub(crate) fn from_images_unchecked(images: Vec<u8>) -> Self {
        debug_assert!(is_bijection(&images));
        Permutation { images }
    }

    /// Inverse of [`Permutation::rank`].
    pub fn unrank(n: usize, rank: usize) -> Self {
        let mut images = vec![0u8; n];
        unrank_into(rank, &mut images);
        Permutation { images }
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    /// g(i) for i in {1..n}.
    pub fn image(&self, i: usize) -> usize {
        self.images[i - 1] as usize + 1
    }

    pub fn one_line(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x as usize + 1).collect()
    }

    pub(crate) fn images(&self) -> &[u8] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    /// (self * other)(i) = self(other(i)).
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.n() != other.n() {
            return Err(Error::SizeMismatch { left: self.n(), right: other.n() });
        }
        Ok(Permutation { images: other.images.iter().map(|&i| self.images[i as usize]).collect() })
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u8; self.n()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x as usize] = i as u8;
        }
        Permutation { images }
    }

    /// beta * self * beta^-1.
    pub fn conjugate_by(&self, beta: &Permutation) -> Result<Permutation> {
        if self.n() != beta.n() {
            return Err(Error::SizeMismatch { left: self.n(), right: beta.n() });
        }
        let mut out = vec![0u8; self.n()];
        conjugate_into(&self.images, &beta.images, &mut out);
        Ok(Permutation { images: out })
    }

    /// Number of inversions, which is the Coxeter length.
    pub fn inversions(&self) -> usize {
        inversions_of(&self.images)
    }

    /// Number of points i with g(i) != i.
    pub fn moved_points(&self) -> usize {
        self.images.iter().enumerate().filter(|&(i, &x)| i != x as usize).count()
    }

    pub fn cycle_type(&self) -> CycleType {
        Partition::new(cycle_lengths(&self.images))
    }

    /// Position of this permutation in the lexicographic order of S_n.
    pub fn rank(&self) -> usize {
        rank_of(&self.images)
    }

    /// Cycle notation over {1..n}; the identity prints as `e`.
    pub fn cycle_notation(&self) -> String {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = String::new();
        for start in 0..n {
            if seen[start] || self.images[start] as usize == start {
                continue;
            }
            out.push('(');
            let mut j = start;
            let mut first = true;
            while !seen[j] {
                seen[j] = true;
                if !first && n >= 10 {
                    out.push(' ');
                }
                out.push_str(&(j + 1).to_string());
                first = false;
                j = self.images[j] as usize;
            }
            out.push(')');
        }
        if out.is_empty() {
            out.push('e');
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, x) in self.images.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", *x as usize + 1)?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;

    fn try_from(one_line: Vec<usize>) -> Result<Self> {
        Permutation::from_one_line(&one_line)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.one_line()
    }
}

/// The subgroup Z whose conjugation action defines a coherent configuration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SubgroupKind {
    /// Z = S_n: the conjugacy configuration.
    Full,
    /// Z = {e, w0}: the length configuration.
    Psi,
    /// Z = centralizer of w0.
    Theta,
}

impl SubgroupKind {
    pub fn name(&self) -> &'static str {
        match self {
            SubgroupKind::Full => "full",
            SubgroupKind::Psi => "psi",
            SubgroupKind::Theta => "theta",
        }
    }
}

impl fmt::Display for SubgroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub fn compose(g: &Permutation, h: &Permutation) -> Result<Permutation> {
    g.compose(h)
}

pub fn inverse(g: &Permutation) -> Permutation {
    g.inverse()
}

pub fn inversions(g: &Permutation) -> usize {
    g.inversions()
}

pub fn cycle_type(g: &Permutation) -> CycleType {
    g.cycle_type()
}

/// The reversal i -> n+1-i, the unique element of length n(n-1)/2.
pub fn longest_element(n: usize) -> Permutation {
    Permutation { images: (0..n as u8).rev().collect() }
}

/// All n! permutations in lexicographic order (index 0 is the identity).
pub fn enumerate_group(n: usize, limits: &Limits) -> Result<Vec<Permutation>> {
    limits.check_group("enumerate_group", n)?;
    let total = factorial_u64(n) as usize;
    Ok((0..total).map(|r| Permutation::unrank(n, r)).collect())
}

/// {e, w0}.
pub fn psi_subgroup(n: usize) -> Vec<Permutation> {
    let w0 = longest_element(n);
    if n < 2 {
        vec![w0]
    } else {
        vec![Permutation::identity(n), w0]
    }
}

/// The centralizer of w0: permute the floor(n/2) pairs {i, n+1-i} and flip
/// within any of them, leaving the middle point fixed for odd n. Returned in
/// lexicographic order.
pub fn theta_subgroup(n: usize) -> Vec<Permutation> {
    let m = n / 2;
    let mut out = Vec::with_capacity((1usize << m) * factorial_u64(m) as usize);
    for pr in 0..factorial_u64(m) as usize {
        let mut pair_perm = vec![0u8; m];
        unrank_into(pr, &mut pair_perm);
        for flips in 0..(1usize << m) {
            let mut images: Vec<u8> = (0..n as u8).collect();
            for (k, &target) in pair_perm.iter().enumerate() {
                let (lo, hi) = (target as usize, n - 1 - target as usize);
                let (a, b) = if flips >> k & 1 == 1 { (hi, lo) } else { (lo, hi) };
                images[k] = a as u8;
                images[n - 1 - k] = b as u8;
            }
            out.push(Permutation { images });
        }
    }
    out.sort();
    out
}

pub fn subgroup(n: usize, kind: SubgroupKind, limits: &Limits) -> Result<Vec<Permutation>> {
    match kind {
        SubgroupKind::Full => enumerate_group(n, limits),
        SubgroupKind::Psi => Ok(psi_subgroup(n)),
        SubgroupKind::Theta => Ok(theta_subgroup(n)),
    }
}

/// A generating set of the subgroup, enough to compute conjugation orbits.
pub fn generators(n: usize, kind: SubgroupKind) -> Vec<Permutation> {
    let mut gens = Vec::new();
    match kind {
        SubgroupKind::Full => {
            for i in 0..n.saturating_sub(1) {
                let mut images: Vec<u8> = (0..n as u8).collect();
                images.swap(i, i + 1);
                gens.push(Permutation { images });
            }
        }
        SubgroupKind::Psi => {
            if n >= 2 {
                gens.push(longest_element(n));
            }
        }
        SubgroupKind::Theta => {
            let m = n / 2;
            if m >= 1 {
                // flip the outermost pair
                let mut images: Vec<u8> = (0..n as u8).collect();
                images.swap(0, n - 1);
                gens.push(Permutation { images });
            }
            // swap neighbouring pairs, preserving orientation
            for k in 0..m.saturating_sub(1) {
                let mut images: Vec<u8> = (0..n as u8).collect();
                images.swap(k, k + 1);
                images.swap(n - 1 - k, n - 2 - k);
                gens.push(Permutation { images });
            }
        }
    }
    gens
}

pub(crate) fn is_bijection(images: &[u8]) -> bool {
    let mut seen = vec![false; images.len()];
    images.iter().all(|&x| {
        let x = x as usize;
        x < seen.len() && !std::mem::replace(&mut seen[x], true)
    })
}

pub(crate) fn inversions_of(p: &[u8]) -> usize {
    if p.len() <= MASK_BITS {
        // scan right to left, counting smaller values already seen
        let mut seen: u128 = 0;
        let mut count = 0;
        for &x in p.iter().rev() {
            count += (seen & ((1u128 << x) - 1)).count_ones() as usize;
            seen |= 1u128 << x;
        }
        count
    } else {
        let mut count = 0;
        for i in 0..p.len() {
            for j in i + 1..p.len() {
                if p[i] > p[j] {
                    count += 1;
                }
            }
        }
        count
    }
}

pub(crate) fn cycle_lengths(p: &[u8]) -> Vec<u8> {
    let mut seen = vec![false; p.len()];
    let mut lens = Vec::new();
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0u8;
        let mut j = start;
        while !seen[j] {
            seen[j] = true;
            j = p[j] as usize;
            len += 1;
        }
        lens.push(len);
    }
    lens
}

/// out = beta * x * beta^-1, all as zero-based image arrays.
#[inline]
pub(crate) fn conjugate_into(x: &[u8], beta: &[u8], out: &mut [u8]) {
    // (beta x beta^-1)(beta(i)) = beta(x(i))
    for i in 0..x.len() {
        out[beta[i] as usize] = beta[x[i] as usize];
    }
}

#[inline]
pub(crate) fn compose_into(g: &[u8], h: &[u8], out: &mut [u8]) {
    for i in 0..h.len() {
        out[i] = g[h[i] as usize];
    }
}

#[inline]
pub(crate) fn invert_into(g: &[u8], out: &mut [u8]) {
    for (i, &x) in g.iter().enumerate() {
        out[x as usize] = i as u8;
    }
}

const FACTORIALS: [usize; 21] = {
    let mut f = [1usize; 21];
    let mut i = 1;
    while i < 21 {
        f[i] = f[i - 1] * i;
        i += 1;
    }
    f
};

/// Lexicographic rank via the Lehmer code.
#[inline]
pub(crate) fn rank_of(p: &[u8]) -> usize {
    let n = p.len();
    assert!(n <= 20, "rank only defined for n <= 20");
    let mut used: u32 = 0;
    let mut r = 0;
    for (i, &x) in p.iter().enumerate() {
        let smaller_unused = x as u32 - (used & ((1u32 << x) - 1)).count_ones();
        r += smaller_unused as usize * FACTORIALS[n - 1 - i];
        used |= 1 << x;
    }
    r
}

#[inline]
pub(crate) fn unrank_into(mut r: usize, out: &mut [u8]) {
    let n = out.len();
    let mut avail: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    for i in 0..n {
        let f = FACTORIALS[n - 1 - i];
        let mut k = r / f;
        r %= f;
        // k-th set bit of avail
        let mut bits = avail;
        while k > 0 {
            bits &= bits - 1;
            k -= 1;
        }
        let x = bits.trailing_zeros();
        out[i] = x as u8;
        avail &= !(1u32 << x);
    }
}
