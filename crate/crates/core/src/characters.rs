//! Irreducible characters of S_n and the spectral data of the conjugacy
//! class sums: p[i][j] is the eigenvalue of class sum i on the isotypic block
//! of irreducible j.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::{factorial_u64, partitions, Partition};
use crate::permgroup::longest_element;

/// Memoized Murnaghan-Nakayama evaluation.
#[derive(Default)]
pub struct CharacterCache {
    memo: HashMap<(Vec<u8>, Vec<u8>), i64>,
}

impl CharacterCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// chi_lambda evaluated on the class of cycle type mu.
    pub fn character(&mut self, lambda: &Partition, mu: &Partition) -> Result<i64> {
        if lambda.size() != mu.size() {
            return Err(Error::SizeMismatch { left: lambda.size(), right: mu.size() });
        }
        Ok(self.eval(lambda.parts(), mu.parts()))
    }

    fn eval(&mut self, lambda: &[u8], mu: &[u8]) -> i64 {
        let Some((&k, rest)) = mu.split_first() else {
            return i64::from(lambda.is_empty());
        };
        let key = (lambda.to_vec(), mu.to_vec());
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        // beta-numbers: removing a border strip of length k moves one bead
        // from b to b - k; the sign counts the beads jumped over
        let len = lambda.len();
        let beta: Vec<i32> =
            lambda.iter().enumerate().map(|(i, &x)| x as i32 + (len - 1 - i) as i32).collect();
        let k = k as i32;
        let mut total = 0i64;
        for &b in &beta {
            let target = b - k;
            if target < 0 || beta.contains(&target) {
                continue;
            }
            let jumped = beta.iter().filter(|&&x| target < x && x < b).count();
            let mut moved: Vec<i32> = beta.iter().map(|&x| if x == b { target } else { x }).collect();
            moved.sort_unstable_by(|a, b| b.cmp(a));
            let reduced: Vec<u8> = moved
                .iter()
                .enumerate()
                .map(|(i, &x)| (x - (len - 1 - i) as i32) as u8)
                .filter(|&x| x > 0)
                .collect();
            let sign = if jumped % 2 == 0 { 1 } else { -1 };
            total += sign * self.eval(&reduced, rest);
        }
        self.memo.insert(key, total);
        total
    }
}

/// chi_lambda(mu) without a shared cache.
pub fn character(lambda: &Partition, mu: &Partition) -> Result<i64> {
    CharacterCache::new().character(lambda, mu)
}

/// Rows are irreducibles, columns are cycle types, both in `order`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterTable {
    pub n: usize,
    pub order: Vec<Partition>,
    pub chi: Vec<Vec<i64>>,
    pub dims: Vec<i64>,
}

impl CharacterTable {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("n must be at least 1".into()));
        }
        let order = partitions(n);
        let mut cache = CharacterCache::new();
        let chi: Vec<Vec<i64>> = order
            .iter()
            .map(|lambda| order.iter().map(|mu| cache.eval(lambda.parts(), mu.parts())).collect())
            .collect();
        // the identity class is the last partition, 1^n
        let dims = chi.iter().map(|row| *row.last().unwrap()).collect();
        Ok(CharacterTable { n, order, chi, dims })
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn index_of(&self, shape: &Partition) -> Option<usize> {
        self.order.iter().position(|p| p == shape)
    }
}

/// Eigenvalues of class sums on isotypic blocks, with rows i over cycle types
/// and columns j over irreducibles, both in the table's partition order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectralData {
    pub n: usize,
    pub order: Vec<Partition>,
    pub class_sizes: Vec<u64>,
    pub dims: Vec<i64>,
    pub p: Vec<Vec<i64>>,
    /// eigenvalue of J on block j
    pub c: Vec<i64>,
    /// chi_lambda on the cycle type of the reversal
    pub chi_w0: Vec<i64>,
    pub m1_nonzero: Vec<bool>,
    pub m2_nonzero: Vec<bool>,
}

impl SpectralData {
    /// Rank of the projector onto the w0-symmetric part of block j.
    pub fn m1_rank(&self, j: usize) -> i64 {
        self.dims[j] * (self.dims[j] + self.chi_w0[j]) / 2
    }

    /// Rank of the projector onto the w0-antisymmetric part of block j.
    pub fn m2_rank(&self, j: usize) -> i64 {
        self.dims[j] * (self.dims[j] - self.chi_w0[j]) / 2
    }
}

pub fn spectral_data(n: usize) -> Result<SpectralData> {
    spectral_data_from(&CharacterTable::new(n)?)
}

pub fn spectral_data_from(table: &CharacterTable) -> Result<SpectralData> {
    let n = table.n;
    let d = table.len();
    let class_sizes: Vec<u64> = table.order.iter().map(Partition::class_size).collect();
    let mut p = vec![vec![0i64; d]; d];
    for (i, &size) in class_sizes.iter().enumerate() {
        for j in 0..d {
            let num = size as i128 * table.chi[j][i] as i128;
            let f = table.dims[j] as i128;
            if num % f != 0 {
                return Err(Error::Solver(format!(
                    "central character not integral at class {} irreducible {}",
                    table.order[i], table.order[j]
                )));
            }
            p[i][j] = (num / f) as i64;
        }
    }
    let c: Vec<i64> = (0..d).map(|j| (0..d).map(|i| p[i][j]).sum()).collect();
    debug_assert_eq!(c[0], factorial_u64(n) as i64);
    let w0_type = longest_element(n).cycle_type();
    let w = table.index_of(&w0_type).expect("cycle type is a partition");
    let chi_w0: Vec<i64> = (0..d).map(|j| table.chi[j][w]).collect();
    let m1_nonzero = (0..d).map(|j| chi_w0[j] != -table.dims[j]).collect();
    let m2_nonzero = (0..d).map(|j| chi_w0[j] != table.dims[j]).collect();
    Ok(SpectralData {
        n,
        order: table.order.clone(),
        class_sizes,
        dims: table.dims.clone(),
        p,
        c,
        chi_w0,
        m1_nonzero,
        m2_nonzero,
    })
}
