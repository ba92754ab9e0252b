//! Oracles shared by the structural suites and the acceptance harness. Each
//! check returns a description of the first violation it finds.
#![allow(dead_code)]

use std::collections::HashSet;

use kendall_bounds::characters::{spectral_data, CharacterTable};
use kendall_bounds::coherent::{
    class_decomposition, explicit_matrices, right_action_matrix, symmetrized_matrices, t_coefficients,
    w_matrix,
};
use kendall_bounds::linalg::{symmetric_eigen, DenseMatrix};
use kendall_bounds::partition::partitions;
use kendall_bounds::permgroup::{enumerate_group, longest_element, theta_subgroup};
use kendall_bounds::{Limits, Permutation, SubgroupKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Check = Result<(), String>;

pub const KINDS: [SubgroupKind; 3] = [SubgroupKind::Full, SubgroupKind::Psi, SubgroupKind::Theta];

pub fn lim() -> Limits {
    Limits::default()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn sum_all(mats: &[&DenseMatrix], order: usize) -> DenseMatrix {
    let mut acc = DenseMatrix::zeros(order, order);
    for m in mats {
        acc.add_scaled(1.0, m);
    }
    acc
}

/// Reference class counts (n, symmetrized length classes, conjugacy classes,
/// symmetrized Theta classes).
pub const REFERENCE_CLASS_COUNTS: [(usize, usize, usize, usize); 8] = [
    (4, 13, 5, 8),
    (5, 45, 7, 21),
    (6, 230, 11, 34),
    (7, 1388, 15, 122),
    (8, 10558, 22, 171),
    (9, 92126, 30, 860),
    (10, 912908, 42, 1052),
    (11, 9998008, 56, 7578),
];

/// Reference LP bounds (n, dmin, bound) for n = 3..7.
#[rustfmt::skip]
pub const REFERENCE_LP: &[(usize, usize, u64)] = &[
    (3, 1, 6), (3, 2, 3), (3, 3, 2),
    (4, 3, 24), (4, 4, 12), (4, 5, 4), (4, 6, 2),
    (5, 6, 120), (5, 7, 10), (5, 8, 5), (5, 9, 2), (5, 10, 2),
    (6, 8, 720), (6, 9, 120), (6, 11, 27), (6, 12, 13), (6, 13, 6), (6, 14, 4), (6, 15, 2),
    (7, 10, 5040), (7, 11, 630), (7, 12, 543), (7, 15, 140), (7, 16, 75),
    (7, 17, 14), (7, 18, 7), (7, 19, 3), (7, 20, 2), (7, 21, 2),
];

/// Reference LP bounds for n = 8.
#[rustfmt::skip]
pub const REFERENCE_LP_8: &[(usize, usize, u64)] = &[
    (8, 12, 40320), (8, 13, 5040), (8, 14, 4135), (8, 19, 896), (8, 21, 384), (8, 22, 192),
    (8, 23, 41), (8, 24, 21), (8, 25, 8), (8, 26, 5), (8, 27, 2), (8, 28, 2),
];

/// Reference dual SDP values, floored, per n for dmin = 1, 2, ...
pub const REFERENCE_SDP: &[(usize, &[u64])] =
    &[(3, &[6, 3, 2]), (4, &[24, 12, 5, 3, 2, 2]), (5, &[120, 60, 22, 14, 7, 5, 3, 2, 2, 2])];

/// Reference largest-code sizes (n, dmin, size).
#[rustfmt::skip]
pub const REFERENCE_SEARCH: &[(usize, usize, usize)] = &[
    (3, 1, 6), (3, 2, 3), (3, 3, 2),
    (4, 1, 24), (4, 2, 12), (4, 3, 5), (4, 4, 3), (4, 5, 2), (4, 6, 2),
    (5, 1, 120), (5, 6, 3), (5, 7, 2), (5, 8, 2), (5, 9, 2), (5, 10, 2),
];

/// Reference Singleton bounds (n, dmin, SB) for n = 3..11.
#[rustfmt::skip]
pub const REFERENCE_SB: &[(usize, usize, u64)] = &[
    (3, 1, 6), (3, 2, 6), (3, 3, 2),
    (4, 1, 24), (4, 2, 24), (4, 3, 24), (4, 4, 6), (4, 5, 6), (4, 6, 2),
    (5, 1, 120), (5, 2, 120), (5, 3, 120), (5, 4, 120), (5, 5, 24),
    (5, 6, 24), (5, 7, 24), (5, 8, 6), (5, 9, 6), (5, 10, 2),
    (6, 8, 120), (6, 9, 120), (6, 11, 24), (6, 12, 24), (6, 13, 6), (6, 14, 6), (6, 15, 2),
    (7, 10, 720), (7, 11, 720), (7, 12, 120), (7, 15, 120), (7, 16, 24),
    (7, 17, 24), (7, 18, 24), (7, 19, 6), (7, 20, 6), (7, 21, 2),
    (8, 12, 5040), (8, 13, 5040), (8, 14, 720), (8, 19, 120), (8, 21, 120), (8, 22, 120),
    (8, 23, 24), (8, 24, 24), (8, 25, 24), (8, 26, 6), (8, 27, 6), (8, 28, 2),
    (9, 14, 40320), (9, 15, 40320), (9, 16, 5040), (9, 23, 720), (9, 25, 720), (9, 27, 120),
    (9, 29, 120), (9, 30, 120), (9, 31, 24), (9, 32, 24), (9, 33, 24), (9, 34, 6), (9, 35, 6), (9, 36, 2),
    (10, 16, 362880), (10, 17, 362880), (10, 18, 40320), (10, 27, 5040), (10, 29, 5040),
    (10, 31, 720), (10, 35, 720), (10, 36, 120), (10, 37, 120), (10, 38, 120), (10, 39, 120),
    (10, 40, 24), (10, 41, 24), (10, 42, 24), (10, 43, 6), (10, 44, 6), (10, 45, 2),
    (11, 18, 3628800), (11, 19, 3628800), (11, 31, 40320), (11, 33, 40320), (11, 34, 40320),
    (11, 35, 5040), (11, 37, 5040), (11, 41, 720), (11, 42, 720), (11, 43, 720), (11, 44, 720),
    (11, 45, 720), (11, 46, 120), (11, 47, 120), (11, 48, 120), (11, 49, 120), (11, 50, 24),
    (11, 51, 24), (11, 52, 24), (11, 53, 6), (11, 54, 6), (11, 55, 2),
];

/// Reference Hamming bounds (n, dmin, HB) for n = 3..8.
#[rustfmt::skip]
pub const REFERENCE_HB: &[(usize, usize, u64)] = &[
    (3, 1, 6), (3, 2, 6), (3, 3, 2),
    (4, 1, 24), (4, 2, 24), (4, 3, 6), (4, 4, 6), (4, 5, 2), (4, 6, 2),
    (5, 1, 120), (5, 2, 120), (5, 3, 24), (5, 4, 24), (5, 5, 8),
    (5, 6, 8), (5, 7, 4), (5, 8, 4), (5, 9, 2), (5, 10, 2),
    (6, 8, 14), (6, 9, 7), (6, 11, 4), (6, 12, 4), (6, 13, 2), (6, 14, 2), (6, 15, 2),
    (7, 10, 28), (7, 11, 14), (7, 12, 14), (7, 15, 5), (7, 16, 5),
    (7, 17, 3), (7, 18, 3), (7, 19, 2), (7, 20, 2), (7, 21, 2),
    (8, 12, 64), (8, 13, 32), (8, 14, 32), (8, 19, 7), (8, 21, 5), (8, 22, 5),
    (8, 23, 3), (8, 24, 3), (8, 25, 2), (8, 26, 2), (8, 27, 2), (8, 28, 2),
];

/// Adjacency matrices of a coherent configuration: the first is I, they sum
/// to J, the set is closed under transposition, and every product is a
/// non-negative integer combination of the set.
pub fn cc_axioms(n: usize, kind: SubgroupKind) -> Check {
    let mats = explicit_matrices(n, kind, &lim()).map_err(|e| e.to_string())?;
    let order = mats[0].rows();
    ensure(mats[0] == DenseMatrix::identity(order), || format!("n={n} {kind}: first matrix is not I"))?;
    let all: Vec<&DenseMatrix> = mats.iter().collect();
    ensure(sum_all(&all, order) == DenseMatrix::filled(order, order, 1.0), || {
        format!("n={n} {kind}: matrices do not sum to J")
    })?;
    // support label of each entry
    let mut label = vec![usize::MAX; order * order];
    for (k, m) in mats.iter().enumerate() {
        for x in 0..order {
            for y in 0..order {
                if m[(x, y)] == 1.0 {
                    label[x * order + y] = k;
                }
            }
        }
    }
    for (i, a) in mats.iter().enumerate() {
        let t = a.transpose();
        ensure(mats.iter().any(|m| *m == t), || format!("n={n} {kind}: transpose of A_{i} missing"))?;
        for (j, b) in mats.iter().enumerate() {
            let prod = a.matmul(b);
            let mut coef = vec![f64::NAN; mats.len()];
            for x in 0..order {
                for y in 0..order {
                    let k = label[x * order + y];
                    let v = prod[(x, y)];
                    if coef[k].is_nan() {
                        coef[k] = v;
                    } else if coef[k] != v {
                        return Err(format!("n={n} {kind}: A_{i} A_{j} not constant on A_{k}"));
                    }
                }
            }
            ensure(coef.iter().all(|&c| c >= 0.0 && c.fract() == 0.0), || {
                format!("n={n} {kind}: A_{i} A_{j} has a non-integral coefficient")
            })?;
        }
    }
    Ok(())
}

/// Each adjacency matrix is the sum of rho(beta) over its class.
pub fn adjacency_is_class_sum(n: usize, kind: SubgroupKind) -> Check {
    let dec = class_decomposition(n, kind, &lim()).map_err(|e| e.to_string())?;
    let mats = explicit_matrices(n, kind, &lim()).map_err(|e| e.to_string())?;
    let order = mats[0].rows();
    let mut sums = vec![DenseMatrix::zeros(order, order); dec.len()];
    for beta in enumerate_group(n, &lim()).unwrap() {
        let rho = right_action_matrix(&beta).unwrap();
        sums[dec.class_of(&beta)].add_scaled(1.0, &rho);
    }
    for (i, (a, s)) in mats.iter().zip(&sums).enumerate() {
        ensure(a == s, || format!("n={n} {kind}: A_{i} differs from its class sum"))?;
    }
    Ok(())
}

/// Class-sum matrices A_i and A_i W rebuilt from the symmetrized Theta
/// matrices through the 0-1 t coefficients.
pub fn theta_basis_reconstructs(n: usize) -> Check {
    let t = t_coefficients(n, &lim()).map_err(|e| e.to_string())?;
    let theta = symmetrized_matrices(n, SubgroupKind::Theta, &lim()).map_err(|e| e.to_string())?;
    let full = explicit_matrices(n, SubgroupKind::Full, &lim()).map_err(|e| e.to_string())?;
    let w = w_matrix(n).unwrap();
    ensure(t.rows.len() == theta.len(), || format!("n={n}: row count mismatch"))?;
    let order = w.rows();
    for i in 0..t.d {
        let mut plain = DenseMatrix::zeros(order, order);
        let mut shifted = DenseMatrix::zeros(order, order);
        for (l, m) in theta.iter().enumerate() {
            plain.add_scaled(t.coefficient(l, i) as f64, m);
            shifted.add_scaled(t.coefficient(l, t.d + i) as f64, m);
        }
        ensure(plain == full[i], || format!("n={n}: A_{i} not reconstructed"))?;
        ensure(shifted == full[i].matmul(&w), || format!("n={n}: A_{i} W not reconstructed"))?;
    }
    Ok(())
}

/// W commutes with every symmetrized length matrix.
pub fn w_commutes(n: usize) -> Check {
    let w = w_matrix(n).unwrap();
    let mats = symmetrized_matrices(n, SubgroupKind::Psi, &lim()).map_err(|e| e.to_string())?;
    for (j, m) in mats.iter().enumerate() {
        ensure(w.matmul(m) == m.matmul(&w), || format!("n={n}: W does not commute with A~_{j}"))?;
    }
    Ok(())
}

/// One isotypic block found numerically: its projector and the irreducible
/// (partition index) it was matched to.
pub struct Block {
    pub projector: DenseMatrix,
    pub irreducible: usize,
}

/// Splits R^{S_n} into the common eigenspaces of the class sums by
/// diagonalizing a random combination of them, then matches each block to
/// the irreducible whose eigenvalue column reproduces Tr(A_i P) / Tr(P).
pub fn isotypic_blocks(n: usize) -> Result<Vec<Block>, String> {
    let full = explicit_matrices(n, SubgroupKind::Full, &lim()).map_err(|e| e.to_string())?;
    let spectra = spectral_data(n).map_err(|e| e.to_string())?;
    let dec = class_decomposition(n, SubgroupKind::Full, &lim()).unwrap();
    let types = dec.cycle_types();
    let order = full[0].rows();
    let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
    let mut mix = DenseMatrix::zeros(order, order);
    for a in &full {
        mix.add_scaled(rng.gen_range(0.5..1.5), a);
    }
    let eig = symmetric_eigen(&mix).map_err(|e| e.to_string())?;
    let mut blocks = Vec::new();
    let mut start = 0;
    while start < order {
        let mut end = start + 1;
        while end < order && (eig.values[end] - eig.values[start]).abs() < 1e-6 {
            end += 1;
        }
        let mut p = DenseMatrix::zeros(order, order);
        for k in start..end {
            let v = eig.vector(k);
            for x in 0..order {
                for y in 0..order {
                    p[(x, y)] += v[x] * v[y];
                }
            }
        }
        let dim = (end - start) as f64;
        let irreducible = (0..spectra.order.len())
            .find(|&j| {
                (spectra.dims[j] * spectra.dims[j]) as f64 == dim
                    && full.iter().enumerate().all(|(i, a)| {
                        let row = spectra.order.iter().position(|s| *s == types[i]).unwrap();
                        (a.matmul(&p).trace() / dim - spectra.p[row][j] as f64).abs() < 1e-6
                    })
            })
            .ok_or_else(|| format!("n={n}: eigenspace of dimension {dim} matches no irreducible"))?;
        blocks.push(Block { projector: p, irreducible });
        start = end;
    }
    let mut seen: Vec<usize> = blocks.iter().map(|b| b.irreducible).collect();
    seen.sort();
    seen.dedup();
    ensure(seen.len() == spectra.order.len() && blocks.len() == seen.len(), || {
        format!("n={n}: blocks do not match the irreducibles one to one")
    })?;
    Ok(blocks)
}

/// Every class-sum eigenvalue multiset equals {p[i][j] with multiplicity f_j^2}.
pub fn class_sum_spectra(n: usize) -> Check {
    let full = explicit_matrices(n, SubgroupKind::Full, &lim()).map_err(|e| e.to_string())?;
    let spectra = spectral_data(n).map_err(|e| e.to_string())?;
    let dec = class_decomposition(n, SubgroupKind::Full, &lim()).unwrap();
    for (i, (a, shape)) in full.iter().zip(dec.cycle_types()).enumerate() {
        let row = spectra.order.iter().position(|s| *s == shape).unwrap();
        let mut expected: Vec<f64> = Vec::new();
        for j in 0..spectra.order.len() {
            for _ in 0..spectra.dims[j] * spectra.dims[j] {
                expected.push(spectra.p[row][j] as f64);
            }
        }
        expected.sort_by(f64::total_cmp);
        let got = symmetric_eigen(a).map_err(|e| e.to_string())?.values;
        ensure(got.len() == expected.len(), || format!("n={n}: wrong eigenvalue count"))?;
        for (g, e) in got.iter().zip(&expected) {
            ensure((g - e).abs() <= 1e-8, || format!("n={n}: class {i} eigenvalue {g} vs {e}"))?;
        }
    }
    Ok(())
}

fn is_projector(m: &DenseMatrix) -> bool {
    m.max_abs_diff(&m.transpose()) < 1e-9 && m.matmul(m).max_abs_diff(m) < 1e-9
}

/// The projectors M1_j = P_j (I + W) / 2 and M2_j = P_j (I - W) / 2 are
/// symmetric, idempotent, mutually orthogonal and sum to I; their ranks equal
/// the closed form used by the LP and are nonzero exactly when flagged.
pub fn split_projector_claims(n: usize) -> Check {
    let blocks = isotypic_blocks(n)?;
    let spectra = spectral_data(n).map_err(|e| e.to_string())?;
    let w = w_matrix(n).unwrap();
    let order = w.rows();
    let eye = DenseMatrix::identity(order);
    let plus = eye.add(&w).scale(0.5);
    let minus = eye.sub(&w).scale(0.5);
    let mut total = DenseMatrix::zeros(order, order);
    for b in &blocks {
        let j = b.irreducible;
        let m1 = b.projector.matmul(&plus);
        let m2 = b.projector.matmul(&minus);
        ensure(is_projector(&m1) && is_projector(&m2), || {
            format!("n={n}: block {j} is not a projector pair")
        })?;
        ensure(m1.matmul(&m2).frobenius_norm() < 1e-9, || format!("n={n}: M1 M2 != 0 on block {j}"))?;
        let (r1, r2) = (m1.trace().round() as i64, m2.trace().round() as i64);
        ensure(r1 == spectra.m1_rank(j) && r2 == spectra.m2_rank(j), || {
            format!("n={n}: block {j} ranks ({r1}, {r2}) vs ({}, {})", spectra.m1_rank(j), spectra.m2_rank(j))
        })?;
        ensure((r1 > 0) == spectra.m1_nonzero[j] && (r2 > 0) == spectra.m2_nonzero[j], || {
            format!("n={n}: nonzero flags disagree on block {j}")
        })?;
        total.add_scaled(1.0, &m1);
        total.add_scaled(1.0, &m2);
    }
    ensure(total.max_abs_diff(&eye) < 1e-9, || format!("n={n}: projectors do not sum to I"))
}

/// Integer character identities: sum f^2 = n!, row and column orthogonality,
/// integral central characters with column sums c.
pub fn character_identities(n: usize) -> Check {
    let table = CharacterTable::new(n).map_err(|e| e.to_string())?;
    let order: i128 = (1..=n as i128).product();
    let sizes: Vec<i128> = table.order.iter().map(|m| m.class_size() as i128).collect();
    ensure(table.dims.iter().map(|&f| (f as i128).pow(2)).sum::<i128>() == order, || {
        format!("n={n}: sum of f^2 is not n!")
    })?;
    let d = table.len();
    for a in 0..d {
        for b in 0..d {
            let rows: i128 =
                (0..d).map(|m| sizes[m] * table.chi[a][m] as i128 * table.chi[b][m] as i128).sum();
            let cols: i128 = (0..d).map(|l| table.chi[l][a] as i128 * table.chi[l][b] as i128).sum();
            ensure(rows == if a == b { order } else { 0 }, || format!("n={n}: rows {a},{b} not orthogonal"))?;
            ensure(cols == if a == b { order / sizes[a] } else { 0 }, || {
                format!("n={n}: columns {a},{b} not orthogonal")
            })?;
        }
    }
    let spectra = spectral_data(n).map_err(|e| e.to_string())?;
    for j in 0..d {
        let c: i128 = (0..d).map(|i| spectra.p[i][j] as i128).sum();
        ensure(c == spectra.c[j] as i128 && c == if j == 0 { order } else { 0 }, || {
            format!("n={n}: column {j} of p sums to {c}")
        })?;
    }
    ensure(partitions(n).len() == d, || format!("n={n}: table size"))
}

fn involutions(n: usize) -> u64 {
    let mut a = [1u64, 1];
    for k in 2..=n as u64 {
        a = [a[1], a[1] + (k - 1) * a[0]];
    }
    if n == 0 {
        1
    } else {
        a[1]
    }
}

/// Class counts by orbit counting instead of enumeration: conjugacy classes
/// are cycle types seen over S_n; symmetrized length classes are orbits of
/// the four-element group generated by w0-conjugation and inversion;
/// symmetrized Theta classes come from Burnside over Theta x {id, inversion}.
pub fn orbit_count_oracle(n: usize) -> (usize, usize, usize) {
    let group = enumerate_group(n, &lim()).unwrap();
    let conj: HashSet<_> = group.iter().map(|g| g.cycle_type()).collect();
    let fact = group.len() as u64;
    let theta = theta_subgroup(n);
    let len = (fact + theta.len() as u64 + 2 * involutions(n)) / 4;
    let mut fixed = 0u64;
    for beta in &theta {
        let bi = beta.inverse();
        for x in &group {
            let c = bi.compose(x).unwrap().compose(beta).unwrap();
            if c == *x {
                fixed += 1;
            }
            if c == x.inverse() {
                fixed += 1;
            }
        }
    }
    (conj.len(), len as usize, (fixed / (2 * theta.len() as u64)) as usize)
}

/// The reversal as a permutation of n, for convenience in tests.
pub fn w0(n: usize) -> Permutation {
    longest_element(n)
}
