//! Class decompositions behind the three coherent configurations.
//!
//! For a subgroup Z of S_n, the orbitals of S_n x Z acting on pairs are in
//! bijection with the orbits of Z acting on S_n by conjugation: the pair
//! (x, y) lies in the orbital labelled by the class of x^-1 y. Everything
//! here works with those conjugation classes; explicit n! x n! matrices are
//! only built for small n as a test oracle.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits::{check_cap, Limits, EXPLICIT_MATRIX_CAP, FULL_CLASS_CAP};
use crate::linalg::DenseMatrix;
use crate::partition::{factorial_u64, partitions, Partition};
use crate::permgroup::{
    compose_into, conjugate_into, cycle_lengths, generators, inversions_of, invert_into, longest_element,
    rank_of, unrank_into, Permutation, SubgroupKind,
};

const UNASSIGNED: u32 = u32::MAX;

/// One orbit of the conjugation action. Index 0 is always the identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjClass {
    pub index: usize,
    /// Lexicographically smallest member.
    pub representative: Permutation,
    pub size: u64,
}

#[derive(Clone, Debug)]
enum ClassMap {
    /// S_n classes are cycle types.
    CycleType(HashMap<Partition, u32>),
    /// class index for each element, by lexicographic rank
    Explicit(Vec<u32>),
}

/// The conjugation orbits of Z on S_n, ordered by representative.
#[derive(Clone, Debug)]
pub struct ClassDecomposition {
    n: usize,
    kind: SubgroupKind,
    classes: Vec<ConjClass>,
    map: ClassMap,
}

impl ClassDecomposition {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> SubgroupKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn classes(&self) -> &[ConjClass] {
        &self.classes
    }

    pub fn class(&self, index: usize) -> &ConjClass {
        &self.classes[index]
    }

    /// Index of the class containing `g`.
    pub fn class_of(&self, g: &Permutation) -> usize {
        self.class_of_images(g.images())
    }

    pub(crate) fn class_of_images(&self, images: &[u8]) -> usize {
        match &self.map {
            ClassMap::CycleType(index) => index[&Partition::new(cycle_lengths(images))] as usize,
            ClassMap::Explicit(map) => map[rank_of(images)] as usize,
        }
    }

    /// Class index for each element rank, when the decomposition was built by
    /// enumeration.
    pub fn element_classes(&self) -> Option<&[u32]> {
        match &self.map {
            ClassMap::Explicit(map) => Some(map),
            ClassMap::CycleType(_) => None,
        }
    }

    /// Cycle type of each class, for the S_n decomposition.
    pub fn cycle_types(&self) -> Vec<Partition> {
        self.classes.iter().map(|c| c.representative.cycle_type()).collect()
    }
}

/// Lexicographically smallest permutation of a given cycle type: fixed points
/// first, then cycles of increasing length on consecutive points.
fn minimal_representative(shape: &Partition) -> Permutation {
    let n = shape.size();
    let mut images: Vec<u8> = (0..n as u8).collect();
    let mut start = 0usize;
    for &len in shape.parts().iter().rev() {
        let len = len as usize;
        for k in 0..len {
            images[start + k] = (start + (k + 1) % len) as u8;
        }
        start += len;
    }
    Permutation::from_images_unchecked(images)
}

/// Orbits of x -> beta x beta^-1 for beta in Z, with indices ordered by
/// lexicographic representative (so the identity class is index 0).
pub fn class_decomposition(n: usize, kind: SubgroupKind, limits: &Limits) -> Result<ClassDecomposition> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    match kind {
        SubgroupKind::Full => {
            check_cap("class_decomposition(full)", n, FULL_CLASS_CAP)?;
            let mut classes: Vec<ConjClass> = partitions(n)
                .into_iter()
                .map(|shape| ConjClass {
                    index: 0,
                    size: shape.class_size(),
                    representative: minimal_representative(&shape),
                })
                .collect();
            classes.sort_by(|a, b| a.representative.cmp(&b.representative));
            let mut index = HashMap::new();
            for (k, c) in classes.iter_mut().enumerate() {
                c.index = k;
                index.insert(c.representative.cycle_type(), k as u32);
            }
            Ok(ClassDecomposition { n, kind, classes, map: ClassMap::CycleType(index) })
        }
        SubgroupKind::Psi | SubgroupKind::Theta => {
            limits.check_group("class_decomposition", n)?;
            Ok(orbit_decomposition(n, kind))
        }
    }
}

/// Orbit traversal over element ranks using a generating set of Z. Ranks are
/// visited in increasing order, so the first element seen in each orbit is
/// its lexicographic minimum and class indices come out sorted.
fn orbit_decomposition(n: usize, kind: SubgroupKind) -> ClassDecomposition {
    let total = factorial_u64(n) as usize;
    let gens: Vec<Vec<u8>> = generators(n, kind).iter().map(|g| g.images().to_vec()).collect();
    let mut map = vec![UNASSIGNED; total];
    let mut classes = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    let mut x = vec![0u8; n];
    let mut y = vec![0u8; n];

    for start in 0..total {
        if map[start] != UNASSIGNED {
            continue;
        }
        let id = classes.len() as u32;
        map[start] = id;
        stack.push(start);
        let mut size = 0u64;
        while let Some(r) = stack.pop() {
            size += 1;
            unrank_into(r, &mut x);
            for g in &gens {
                conjugate_into(&x, g, &mut y);
                let s = rank_of(&y);
                if map[s] == UNASSIGNED {
                    map[s] = id;
                    stack.push(s);
                }
            }
        }
        classes.push(ConjClass { index: id as usize, representative: Permutation::unrank(n, start), size });
    }
    ClassDecomposition { n, kind, classes, map: ClassMap::Explicit(map) }
}

/// A class merged with the class of its inverses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymClass {
    pub index: usize,
    /// One class, or two classes exchanged by inversion (smaller index first).
    pub member_classes: Vec<usize>,
    pub representative: Permutation,
    pub size: u64,
    /// Kendall distance carried by every pair in the orbital (length configuration).
    pub delta: Option<u32>,
    /// Largest Kendall distance over the members (Theta configuration).
    pub gamma: Option<u32>,
}

#[derive(Clone, Debug)]
pub struct SymmetrizedClasses {
    pub n: usize,
    pub kind: SubgroupKind,
    pub classes: Vec<SymClass>,
    /// sym index for each class index
    pub class_to_sym: Vec<usize>,
}

impl SymmetrizedClasses {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn sym_of(&self, decomposition: &ClassDecomposition, g: &Permutation) -> usize {
        self.class_to_sym[decomposition.class_of(g)]
    }

    /// Sym index for each element rank; requires an enumerated decomposition.
    pub fn element_syms(&self, decomposition: &ClassDecomposition) -> Option<Vec<u32>> {
        decomposition
            .element_classes()
            .map(|map| map.iter().map(|&c| self.class_to_sym[c as usize] as u32).collect())
    }
}

/// Pairs each class with the class of its inverses. For the length
/// configuration each symmetrized class carries its orbit-distance, for the
/// Theta configuration its maximum distance.
pub fn symmetrize(decomposition: &ClassDecomposition) -> SymmetrizedClasses {
    let k = decomposition.len();
    let mut class_to_sym = vec![usize::MAX; k];
    let mut classes = Vec::new();
    for c in decomposition.classes() {
        if class_to_sym[c.index] != usize::MAX {
            continue;
        }
        let partner = decomposition.class_of(&c.representative.inverse());
        let sym = classes.len();
        let mut members = vec![c.index];
        let mut size = c.size;
        class_to_sym[c.index] = sym;
        if partner != c.index {
            members.push(partner);
            size += decomposition.class(partner).size;
            class_to_sym[partner] = sym;
        }
        let delta = (decomposition.kind() == SubgroupKind::Psi).then(|| c.representative.inversions() as u32);
        classes.push(SymClass {
            index: sym,
            member_classes: members,
            representative: c.representative.clone(),
            size,
            delta,
            gamma: None,
        });
    }
    let mut out =
        SymmetrizedClasses { n: decomposition.n(), kind: decomposition.kind(), classes, class_to_sym };
    if decomposition.kind() == SubgroupKind::Theta {
        if let Some(gammas) = max_inversions_per_sym(decomposition, &out) {
            for (s, g) in out.classes.iter_mut().zip(gammas) {
                s.gamma = Some(g);
            }
        }
    }
    out
}

/// One pass over S_n recording the largest inversion count in each symmetrized class.
fn max_inversions_per_sym(decomposition: &ClassDecomposition, sym: &SymmetrizedClasses) -> Option<Vec<u32>> {
    let map = decomposition.element_classes()?;
    let n = decomposition.n();
    let mut best = vec![0u32; sym.len()];
    let mut x = vec![0u8; n];
    for (r, &c) in map.iter().enumerate() {
        unrank_into(r, &mut x);
        let s = sym.class_to_sym[c as usize];
        best[s] = best[s].max(inversions_of(&x) as u32);
    }
    Some(best)
}

/// Gamma of a Theta-symmetrized class computed from the length configuration:
/// the largest orbit-distance among the Psi-symmetrized classes it contains.
pub fn gamma(
    theta: &ClassDecomposition,
    theta_sym: &SymmetrizedClasses,
    theta_index: usize,
    psi: &ClassDecomposition,
    psi_sym: &SymmetrizedClasses,
) -> u32 {
    debug_assert_eq!(psi.kind(), SubgroupKind::Psi);
    psi_sym
        .classes
        .iter()
        .filter(|j| theta_sym.sym_of(theta, &j.representative) == theta_index)
        .filter_map(|j| j.delta)
        .max()
        .unwrap_or(0)
}

/// Conjugacy-class pair attached to one Theta-symmetrized class: the class of
/// its members and the class of its members times w0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TRow {
    pub representative: Permutation,
    pub size: u64,
    pub gamma: u32,
    pub i_plain: usize,
    pub i_shifted: usize,
}

/// 0-1 coefficients expressing each conjugacy-class matrix A_i and each
/// product A_i W in the symmetrized Theta basis. Row l has exactly one 1 in
/// the first d columns (at `i_plain`) and one in the last d (at `d + i_shifted`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TCoefficients {
    pub n: usize,
    /// number of conjugacy classes
    pub d: usize,
    /// conjugacy classes in index order, as cycle types
    pub class_types: Vec<Partition>,
    pub rows: Vec<TRow>,
}

impl TCoefficients {
    /// t_{l, i} for i in 0..2d.
    pub fn coefficient(&self, row: usize, i: usize) -> u8 {
        let r = &self.rows[row];
        u8::from(i == r.i_plain || i == self.d + r.i_shifted)
    }

    /// Number of Theta-symmetrized classes (besides the identity) with
    /// maximum distance at least `dmin`.
    pub fn rows_with_gamma_at_least(&self, dmin: usize) -> usize {
        self.rows.iter().skip(1).filter(|r| r.gamma as usize >= dmin).count()
    }

    /// Histogram of Gamma over the Theta-symmetrized classes.
    pub fn gamma_histogram(&self) -> Vec<usize> {
        let mut hist = vec![0; self.n * (self.n - 1) / 2 + 1];
        for r in &self.rows {
            hist[r.gamma as usize] += 1;
        }
        hist
    }
}

/// Builds the t coefficients and Gamma values from the Theta decomposition.
/// Checks along the way that every symmetrized Theta class lies inside one
/// conjugacy class and inside one shifted set {beta w0 : beta in C_i}.
pub fn t_coefficients(n: usize, limits: &Limits) -> Result<TCoefficients> {
    if n < 2 {
        return Err(Error::InvalidArgument("t coefficients need n >= 2".into()));
    }
    let full = class_decomposition(n, SubgroupKind::Full, limits)?;
    let theta = class_decomposition(n, SubgroupKind::Theta, limits)?;
    let sym = symmetrize(&theta);
    t_coefficients_from(&full, &theta, &sym)
}

pub fn t_coefficients_from(
    full: &ClassDecomposition,
    theta: &ClassDecomposition,
    sym: &SymmetrizedClasses,
) -> Result<TCoefficients> {
    let n = full.n();
    let map = theta
        .element_classes()
        .ok_or_else(|| Error::InvalidArgument("Theta decomposition must be enumerated".into()))?;
    let w0 = longest_element(n);
    let w0i = w0.images();

    let mut plain = vec![usize::MAX; sym.len()];
    let mut shifted = vec![usize::MAX; sym.len()];
    let mut x = vec![0u8; n];
    let mut xw = vec![0u8; n];
    for (r, &c) in map.iter().enumerate() {
        unrank_into(r, &mut x);
        compose_into(&x, w0i, &mut xw);
        let s = sym.class_to_sym[c as usize];
        let p = full.class_of_images(&x);
        let q = full.class_of_images(&xw);
        for (slot, value, what) in [(&mut plain[s], p, "C_i"), (&mut shifted[s], q, "C_i w0")] {
            if *slot == usize::MAX {
                *slot = value;
            } else if *slot != value {
                return Err(Error::Solver(format!(
                    "Theta class {s} is not contained in a single {what} (n = {n})"
                )));
            }
        }
    }

    let rows = sym
        .classes
        .iter()
        .map(|s| TRow {
            representative: s.representative.clone(),
            size: s.size,
            gamma: s.gamma.expect("Theta classes carry gamma"),
            i_plain: plain[s.index],
            i_shifted: shifted[s.index],
        })
        .collect();
    Ok(TCoefficients { n, d: full.len(), class_types: full.cycle_types(), rows })
}

/// The serializable part of a decomposition: classes in index order plus
/// the number of classes left after merging each class with its inverses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassSummary {
    pub n: usize,
    pub kind: SubgroupKind,
    pub classes: Vec<ConjClass>,
    pub symmetrized: usize,
}

impl ClassSummary {
    pub fn new(decomposition: &ClassDecomposition) -> Self {
        ClassSummary {
            n: decomposition.n(),
            kind: decomposition.kind(),
            classes: decomposition.classes().to_vec(),
            symmetrized: symmetrize(decomposition).len(),
        }
    }

    pub fn compute(n: usize, kind: SubgroupKind, limits: &Limits) -> Result<Self> {
        Ok(Self::new(&class_decomposition(n, kind, limits)?))
    }
}

/// Counts reported for one n: conjugacy classes, symmetrized length classes,
/// symmetrized Theta classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCounts {
    pub conj: usize,
    pub len: usize,
    pub theta_sym: usize,
}

impl ClassCounts {
    pub fn from_summaries(full: &ClassSummary, psi: &ClassSummary, theta: &ClassSummary) -> Self {
        ClassCounts { conj: full.classes.len(), len: psi.symmetrized, theta_sym: theta.symmetrized }
    }
}

pub fn class_counts(n: usize, limits: &Limits) -> Result<ClassCounts> {
    let conj = class_decomposition(n, SubgroupKind::Full, limits)?.len();
    let psi = class_decomposition(n, SubgroupKind::Psi, limits)?;
    let len = symmetrize(&psi).len();
    drop(psi);
    let theta = class_decomposition(n, SubgroupKind::Theta, limits)?;
    let theta_sym = symmetrize(&theta).len();
    Ok(ClassCounts { conj, len, theta_sym })
}

/// Sym index of x^-1 y for every pair of element ranks, the common backbone of
/// all explicit matrices. Row-major over (x, y).
pub(crate) fn pair_labels(n: usize, element_label: impl Fn(&[u8]) -> u32) -> Vec<u32> {
    let total = factorial_u64(n) as usize;
    let elems: Vec<Vec<u8>> = (0..total)
        .map(|r| {
            let mut x = vec![0u8; n];
            unrank_into(r, &mut x);
            x
        })
        .collect();
    let mut labels = Vec::with_capacity(total * total);
    let mut xi = vec![0u8; n];
    let mut g = vec![0u8; n];
    for x in &elems {
        invert_into(x, &mut xi);
        for y in &elems {
            compose_into(&xi, y, &mut g);
            labels.push(element_label(&g));
        }
    }
    labels
}

fn check_explicit(n: usize) -> Result<usize> {
    check_cap("explicit matrices", n, EXPLICIT_MATRIX_CAP)?;
    Ok(factorial_u64(n) as usize)
}

fn indicator_matrices(n: usize, count: usize, labels: &[u32]) -> Vec<DenseMatrix> {
    let total = factorial_u64(n) as usize;
    let mut mats = vec![DenseMatrix::zeros(total, total); count];
    for x in 0..total {
        for y in 0..total {
            mats[labels[x * total + y] as usize][(x, y)] = 1.0;
        }
    }
    mats
}

/// Adjacency matrices A_i with (A_i)_{x,y} = 1 iff x^-1 y is in class i, rows
/// and columns in lexicographic element order.
pub fn explicit_matrices(n: usize, kind: SubgroupKind, limits: &Limits) -> Result<Vec<DenseMatrix>> {
    check_explicit(n)?;
    let dec = class_decomposition(n, kind, limits)?;
    let labels = pair_labels(n, |g| dec.class_of_images(g) as u32);
    Ok(indicator_matrices(n, dec.len(), &labels))
}

/// Symmetrized adjacency matrices A~_j.
pub fn symmetrized_matrices(n: usize, kind: SubgroupKind, limits: &Limits) -> Result<Vec<DenseMatrix>> {
    check_explicit(n)?;
    let dec = class_decomposition(n, kind, limits)?;
    let sym = symmetrize(&dec);
    let labels = pair_labels(n, |g| sym.class_to_sym[dec.class_of_images(g)] as u32);
    Ok(indicator_matrices(n, sym.len(), &labels))
}

/// rho(beta): (rho(beta))_{x,y} = 1 iff y beta^-1 = x.
pub fn right_action_matrix(beta: &Permutation) -> Result<DenseMatrix> {
    let n = beta.n();
    let total = check_explicit(n)?;
    let mut m = DenseMatrix::zeros(total, total);
    let binv = beta.inverse();
    let mut x = vec![0u8; n];
    for y in 0..total {
        unrank_into(y, &mut x);
        let mut prod = vec![0u8; n];
        compose_into(&x, binv.images(), &mut prod);
        m[(rank_of(&prod), y)] = 1.0;
    }
    Ok(m)
}

/// W = rho(w0).
pub fn w_matrix(n: usize) -> Result<DenseMatrix> {
    right_action_matrix(&longest_element(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permgroup::{enumerate_group, theta_subgroup};

    fn lim() -> Limits {
        Limits::default()
    }

    fn cyc(n: usize, cycles: &[&[usize]]) -> Permutation {
        Permutation::from_cycles(n, cycles).unwrap()
    }

    /// Orbits computed by conjugating with every subgroup element.
    fn brute_orbits(n: usize, z: &[Permutation]) -> Vec<Vec<Permutation>> {
        let group = enumerate_group(n, &lim()).unwrap();
        let mut seen = vec![false; group.len()];
        let mut orbits = Vec::new();
        for (r, g) in group.iter().enumerate() {
            if seen[r] {
                continue;
            }
            let mut orbit: Vec<Permutation> = z.iter().map(|b| g.conjugate_by(b).unwrap()).collect();
            orbit.sort();
            orbit.dedup();
            for h in &orbit {
                seen[h.rank()] = true;
            }
            orbits.push(orbit);
        }
        orbits
    }

    #[test]
    fn psi_classes_for_s3() {
        let dec = class_decomposition(3, SubgroupKind::Psi, &lim()).unwrap();
        assert_eq!(dec.len(), 4);
        let expect: Vec<Vec<Permutation>> = vec![
            vec![Permutation::identity(3)],
            vec![cyc(3, &[&[1, 2]]), cyc(3, &[&[2, 3]])],
            vec![cyc(3, &[&[1, 2, 3]]), cyc(3, &[&[1, 3, 2]])],
            vec![cyc(3, &[&[1, 3]])],
        ];
        for (k, members) in expect.iter().enumerate() {
            for m in members {
                assert_eq!(dec.class_of(m), k);
            }
            assert_eq!(dec.class(k).size as usize, members.len());
        }
        let sym = symmetrize(&dec);
        let deltas: Vec<u32> = sym.classes.iter().map(|s| s.delta.unwrap()).collect();
        assert_eq!(deltas, vec![0, 1, 2, 3]);
    }

    #[test]
    fn decompositions_match_brute_force() {
        for n in 1..=6 {
            for (kind, z) in [
                (SubgroupKind::Full, enumerate_group(n, &lim()).unwrap()),
                (SubgroupKind::Psi, crate::permgroup::psi_subgroup(n)),
                (SubgroupKind::Theta, theta_subgroup(n)),
            ] {
                let dec = class_decomposition(n, kind, &lim()).unwrap();
                let orbits = brute_orbits(n, &z);
                assert_eq!(dec.len(), orbits.len(), "n = {n}, {kind}");
                for (k, orbit) in orbits.iter().enumerate() {
                    let c = dec.class(k);
                    assert_eq!(c.representative, orbit[0]);
                    assert_eq!(c.size as usize, orbit.len());
                    assert!(orbit.iter().all(|g| dec.class_of(g) == k));
                }
                assert!(dec.class(0).representative.is_identity());
                assert_eq!(dec.class(0).size, 1);
            }
        }
    }

    #[test]
    fn full_classes_are_cycle_types() {
        assert_eq!(class_decomposition(4, SubgroupKind::Full, &lim()).unwrap().len(), 5);
        assert_eq!(class_decomposition(7, SubgroupKind::Full, &lim()).unwrap().len(), 15);
        assert_eq!(class_decomposition(12, SubgroupKind::Full, &lim()).unwrap().len(), 77);
        let dec = class_decomposition(3, SubgroupKind::Full, &lim()).unwrap();
        let types: Vec<Vec<u8>> = dec.cycle_types().iter().map(|p| p.parts().to_vec()).collect();
        assert_eq!(types, vec![vec![1, 1, 1], vec![2, 1], vec![3]]);
    }

    #[test]
    fn caps_enforced() {
        assert!(matches!(
            class_decomposition(11, SubgroupKind::Psi, &lim()),
            Err(Error::ResourceLimit { .. })
        ));
        assert!(matches!(
            class_decomposition(13, SubgroupKind::Full, &lim()),
            Err(Error::ResourceLimit { .. })
        ));
        assert!(matches!(explicit_matrices(7, SubgroupKind::Psi, &lim()), Err(Error::ResourceLimit { .. })));
    }

    #[test]
    fn class_counts_small() {
        let four = class_counts(4, &lim()).unwrap();
        assert_eq!(four, ClassCounts { conj: 5, len: 13, theta_sym: 8 });
        let two = class_counts(2, &lim()).unwrap();
        assert_eq!(two, ClassCounts { conj: 2, len: 2, theta_sym: 2 });
        let psi4 = class_decomposition(4, SubgroupKind::Psi, &lim()).unwrap();
        assert_eq!(psi4.len(), 16);
    }

    #[test]
    fn delta_constant_on_length_classes() {
        for n in 2..=6 {
            let dec = class_decomposition(n, SubgroupKind::Psi, &lim()).unwrap();
            let sym = symmetrize(&dec);
            for g in enumerate_group(n, &lim()).unwrap() {
                let s = sym.sym_of(&dec, &g);
                assert_eq!(Some(g.inversions() as u32), sym.classes[s].delta);
            }
        }
    }

    #[test]
    fn gamma_two_routes_agree() {
        for n in 2..=6 {
            let theta = class_decomposition(n, SubgroupKind::Theta, &lim()).unwrap();
            let tsym = symmetrize(&theta);
            let psi = class_decomposition(n, SubgroupKind::Psi, &lim()).unwrap();
            let psym = symmetrize(&psi);
            for s in &tsym.classes {
                assert_eq!(s.gamma, Some(gamma(&theta, &tsym, s.index, &psi, &psym)));
            }
            assert_eq!(tsym.classes[0].gamma, Some(0));
            let top = tsym.classes.iter().filter_map(|s| s.gamma).max().unwrap();
            assert_eq!(top as usize, n * (n - 1) / 2);
        }
        // Theta_3 = Psi_3, so Gamma coincides with delta
        let theta = class_decomposition(3, SubgroupKind::Theta, &lim()).unwrap();
        let gammas: Vec<u32> = symmetrize(&theta).classes.iter().map(|s| s.gamma.unwrap()).collect();
        assert_eq!(gammas, vec![0, 1, 2, 3]);
    }

    #[test]
    fn t_coefficients_for_s3() {
        let t = t_coefficients(3, &lim()).unwrap();
        assert_eq!(t.d, 3);
        // conjugacy classes: 0 = e, 1 = transpositions, 2 = 3-cycles
        assert_eq!((t.rows[0].i_plain, t.rows[0].i_shifted), (0, 1));
        assert_eq!((t.rows[3].i_plain, t.rows[3].i_shifted), (1, 0));
        assert_eq!((t.rows[1].i_plain, t.rows[1].i_shifted), (1, 2));
        assert_eq!((t.rows[2].i_plain, t.rows[2].i_shifted), (2, 1));
        for l in 0..t.rows.len() {
            assert_eq!((0..t.d).map(|i| t.coefficient(l, i)).sum::<u8>(), 1);
            assert_eq!((t.d..2 * t.d).map(|i| t.coefficient(l, i)).sum::<u8>(), 1);
        }
    }

    #[test]
    fn t_coefficients_cover_classes() {
        for n in 2..=7 {
            let t = t_coefficients(n, &lim()).unwrap();
            let full = class_decomposition(n, SubgroupKind::Full, &lim()).unwrap();
            for i in 0..t.d {
                let plain: u64 = t.rows.iter().filter(|r| r.i_plain == i).map(|r| r.size).sum();
                let shifted: u64 = t.rows.iter().filter(|r| r.i_shifted == i).map(|r| r.size).sum();
                assert_eq!(plain, full.class(i).size);
                assert_eq!(shifted, full.class(i).size);
            }
        }
    }

    #[test]
    fn refinement_chain() {
        for n in 2..=8 {
            let full = class_decomposition(n, SubgroupKind::Full, &lim()).unwrap();
            let theta = class_decomposition(n, SubgroupKind::Theta, &lim()).unwrap();
            let psi = class_decomposition(n, SubgroupKind::Psi, &lim()).unwrap();
            let tmap = theta.element_classes().unwrap();
            let mut psi_to_theta = vec![u32::MAX; psi.len()];
            let mut theta_to_full = vec![usize::MAX; theta.len()];
            let mut x = vec![0u8; n];
            for (r, &p) in psi.element_classes().unwrap().iter().enumerate() {
                let t = tmap[r];
                let slot = &mut psi_to_theta[p as usize];
                assert!(*slot == u32::MAX || *slot == t);
                *slot = t;
                unrank_into(r, &mut x);
                let f = full.class_of_images(&x);
                let slot = &mut theta_to_full[t as usize];
                assert!(*slot == usize::MAX || *slot == f);
                *slot = f;
            }
        }
    }

    /// Reference element order for S_3: e, (12), (23), (123), (132), (13).
    fn reference_order() -> Vec<usize> {
        [
            Permutation::identity(3),
            cyc(3, &[&[1, 2]]),
            cyc(3, &[&[2, 3]]),
            cyc(3, &[&[1, 2, 3]]),
            cyc(3, &[&[1, 3, 2]]),
            cyc(3, &[&[1, 3]]),
        ]
        .iter()
        .map(Permutation::rank)
        .collect()
    }

    fn reorder(m: &DenseMatrix, order: &[usize]) -> Vec<Vec<u8>> {
        order.iter().map(|&x| order.iter().map(|&y| m[(x, y)] as u8).collect()).collect()
    }

    #[test]
    fn s3_matrices_match_reference() {
        let order = reference_order();
        let psi = explicit_matrices(3, SubgroupKind::Psi, &lim()).unwrap();
        let b2 = vec![
            vec![0, 1, 1, 0, 0, 0],
            vec![1, 0, 0, 1, 0, 0],
            vec![1, 0, 0, 0, 1, 0],
            vec![0, 1, 0, 0, 0, 1],
            vec![0, 0, 1, 0, 0, 1],
            vec![0, 0, 0, 1, 1, 0],
        ];
        assert_eq!(reorder(&psi[1], &order), b2);
        let full = explicit_matrices(3, SubgroupKind::Full, &lim()).unwrap();
        let a2 = vec![
            vec![0, 1, 1, 0, 0, 1],
            vec![1, 0, 0, 1, 1, 0],
            vec![1, 0, 0, 1, 1, 0],
            vec![0, 1, 1, 0, 0, 1],
            vec![0, 1, 1, 0, 0, 1],
            vec![1, 0, 0, 1, 1, 0],
        ];
        assert_eq!(reorder(&full[1], &order), a2);
        let j = DenseMatrix::filled(6, 6, 1.0);
        let i = DenseMatrix::identity(6);
        assert_eq!(full[2], j.sub(&i).sub(&full[1]));
        // B3 = A3 and B4 = A2 - B2
        assert_eq!(psi[2], full[2]);
        assert_eq!(psi[3], full[1].sub(&psi[1]));
    }

    #[test]
    fn w_matrix_properties() {
        for n in 1..=5 {
            let w = w_matrix(n).unwrap();
            let total = w.rows();
            assert_eq!(w.matmul(&w), DenseMatrix::identity(total));
            assert_eq!(w.transpose(), w);
            for r in 0..total {
                assert_eq!(w.row(r).iter().sum::<f64>(), 1.0);
            }
        }
    }
}
