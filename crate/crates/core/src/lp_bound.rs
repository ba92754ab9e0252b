//! The LP bound: a linear program over 2d variables (d = number of conjugacy
//! classes) whose optimum upper-bounds the dual SDP value, and hence the size
//! of any code with the given minimum Kendall distance.
//!
//! Variables a_i, a_{d+i} weight the class sums A_i and A_i W. For each
//! symmetrized Theta class l the combination z_l = a_{plain(l)} + a_{d+shifted(l)}
//! is the coefficient of that class in the resulting dual matrix, so the
//! sign constraints of the SDP become z_l <= 0 for classes at distance at
//! least dmin, and positive semidefiniteness reduces to one inequality per
//! irreducible and per eigenspace of W.

use serde::{Deserialize, Serialize};

use crate::characters::{spectral_data, SpectralData};
use crate::coherent::{class_decomposition, pair_labels, symmetrize, t_coefficients, TCoefficients};
use crate::error::{check_dmin, Error, Result};
use crate::limits::{check_cap, Limits, EXPLICIT_MATRIX_CAP};
use crate::linalg::{symmetric_eigen, DenseMatrix};
use crate::lp::{solve_lp, LinearProgram, LpStatus, Relation};
use crate::partition::factorial_u64;
use crate::permgroup::{longest_element, rank_of, SubgroupKind};

/// Added before flooring a real optimum to an integer bound.
pub const FLOOR_GUARD: f64 = 1e-6;

pub fn floor_bound(raw: f64) -> u64 {
    (raw + FLOOR_GUARD).floor().max(0.0) as u64
}

/// Everything the LP needs for one n, independent of dmin.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemData {
    pub t: TCoefficients,
    pub spectral: SpectralData,
}

impl ProblemData {
    pub fn compute(n: usize, limits: &Limits) -> Result<Self> {
        Ok(ProblemData { t: t_coefficients(n, limits)?, spectral: spectral_data(n)? })
    }

    pub fn n(&self) -> usize {
        self.t.n
    }

    /// Position of each conjugacy class (t coefficient order) in the
    /// partition order used by the spectral data.
    fn spectral_index(&self) -> Result<Vec<usize>> {
        self.t
            .class_types
            .iter()
            .map(|shape| {
                self.spectral
                    .order
                    .iter()
                    .position(|p| p == shape)
                    .ok_or_else(|| Error::InvalidArgument(format!("unknown cycle type {shape}")))
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralRow {
    /// irreducible index in partition order
    pub block: usize,
    /// +1 for the w0-symmetric part, -1 for the antisymmetric part
    pub sign: i8,
    pub coefficients: Vec<f64>,
    pub rhs: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LpBoundInstance {
    pub n: usize,
    pub dmin: usize,
    pub d: usize,
    /// the two variables in the objective
    pub objective_support: (usize, usize),
    /// Theta classes l >= 1 with Gamma_l >= dmin
    pub nonpositive_classes: Vec<usize>,
    pub spectral_rows: Vec<SpectralRow>,
    pub t: TCoefficients,
}

impl LpBoundInstance {
    pub fn num_vars(&self) -> usize {
        2 * self.d
    }

    pub fn constraint_count(&self) -> usize {
        self.nonpositive_classes.len() + self.spectral_rows.len()
    }

    /// z_l for every symmetrized Theta class.
    pub fn z_values(&self, a: &[f64]) -> Vec<f64> {
        self.t.rows.iter().map(|r| a[r.i_plain] + a[self.d + r.i_shifted]).collect()
    }

    /// The LP handed to the solver; identical sign rows are merged.
    pub fn to_linear_program(&self) -> LinearProgram {
        let k = self.num_vars();
        let mut objective = vec![0.0; k];
        objective[self.objective_support.0] += 1.0;
        objective[self.objective_support.1] += 1.0;
        let mut lp = LinearProgram::new(objective);
        let mut seen = Vec::new();
        for &l in &self.nonpositive_classes {
            let r = &self.t.rows[l];
            let key = (r.i_plain, r.i_shifted);
            if seen.contains(&key) {
                continue;
            }
            seen.push(key);
            let mut row = vec![0.0; k];
            row[r.i_plain] += 1.0;
            row[self.d + r.i_shifted] += 1.0;
            lp.add_constraint(row, Relation::Le, 0.0);
        }
        for s in &self.spectral_rows {
            lp.add_constraint(s.coefficients.clone(), Relation::Ge, s.rhs);
        }
        lp
    }
}

pub fn build_instance(n: usize, dmin: usize, limits: &Limits) -> Result<LpBoundInstance> {
    check_dmin(n, dmin)?;
    build_instance_from(&ProblemData::compute(n, limits)?, dmin)
}

pub fn build_instance_from(data: &ProblemData, dmin: usize) -> Result<LpBoundInstance> {
    let n = data.n();
    check_dmin(n, dmin)?;
    let d = data.t.d;
    let t = &data.t;
    let sp = &data.spectral;

    let identity = &t.rows[0];
    if !identity.representative.is_identity() {
        return Err(Error::InvalidArgument("first Theta class must be the identity".into()));
    }
    let objective_support = (identity.i_plain, d + identity.i_shifted);
    let w0_type = longest_element(n).cycle_type();
    if identity.i_plain != 0 || t.class_types[identity.i_shifted] != w0_type {
        return Err(Error::Solver(format!(
            "objective support {objective_support:?} is not (identity, class of w0)"
        )));
    }

    let nonpositive_classes = (1..t.rows.len()).filter(|&l| t.rows[l].gamma as usize >= dmin).collect();

    let index = data.spectral_index()?;
    let mut spectral_rows = Vec::new();
    for j in 0..sp.order.len() {
        for (sign, wanted) in [(1i8, sp.m1_nonzero[j]), (-1i8, sp.m2_nonzero[j])] {
            if !wanted {
                continue;
            }
            let mut coefficients = vec![0.0; 2 * d];
            for i in 0..d {
                let p = sp.p[index[i]][j] as f64;
                coefficients[i] = p;
                coefficients[d + i] = f64::from(sign) * p;
            }
            spectral_rows.push(SpectralRow { block: j, sign, coefficients, rhs: sp.c[j] as f64 });
        }
    }

    Ok(LpBoundInstance { n, dmin, d, objective_support, nonpositive_classes, spectral_rows, t: t.clone() })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LpOutcome {
    pub raw: f64,
    pub bound: u64,
    pub a: Vec<f64>,
    pub max_violation: f64,
    pub pivots: usize,
}

/// Solves the instance; anything but an optimal solve is a solver failure
/// carrying the serialized instance.
pub fn solve_instance(instance: &LpBoundInstance) -> Result<LpOutcome> {
    let lp = instance.to_linear_program();
    let sol = solve_lp(&lp)?;
    if sol.status != LpStatus::Optimal {
        return Err(Error::Solver(format!(
            "LP for n = {}, dmin = {} returned {:?}",
            instance.n, instance.dmin, sol.status
        )));
    }
    if sol.max_violation > 1e-7 {
        return Err(Error::Solver(format!(
            "LP for n = {}, dmin = {} violates constraints by {:e}",
            instance.n, instance.dmin, sol.max_violation
        )));
    }
    Ok(LpOutcome {
        raw: sol.objective_value,
        bound: floor_bound(sol.objective_value),
        a: sol.values,
        max_violation: sol.max_violation,
        pivots: sol.pivots,
    })
}

pub fn lp_bound(n: usize, dmin: usize, limits: &Limits) -> Result<BoundReport> {
    let outcome = solve_instance(&build_instance(n, dmin, limits)?)?;
    let mut report = BoundReport::new(n, dmin);
    report.lp_raw = Some(outcome.raw);
    report.lp = Some(outcome.bound);
    Ok(report)
}

/// One row of bounds for a given (n, dmin). Absent fields were not requested.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub n: usize,
    pub dmin: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lp: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lp_raw: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", with = "opt_decimal")]
    pub sb: Option<num_bigint::BigUint>,
    #[serde(skip_serializing_if = "Option::is_none", with = "opt_decimal")]
    pub hb: Option<num_bigint::BigUint>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sdp: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sdp_raw: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub search: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub search_exact: Option<bool>,
}

impl BoundReport {
    pub fn new(n: usize, dmin: usize) -> Self {
        BoundReport { n, dmin, ..Default::default() }
    }

    /// search <= sdp <= lp over whichever values are present.
    pub fn chain_holds(&self) -> bool {
        let ok = |lo: Option<u64>, hi: Option<u64>| match (lo, hi) {
            (Some(a), Some(b)) => a <= b,
            _ => true,
        };
        ok(self.search, self.sdp) && ok(self.sdp, self.lp) && ok(self.search, self.lp)
    }
}

/// Big integers appear in JSON as plain numbers when they fit in u64.
mod opt_decimal {
    use num_bigint::BigUint;
    use num_traits::ToPrimitive;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<BigUint>, s: S) -> Result<S::Ok, S::Error> {
        match v.as_ref().and_then(ToPrimitive::to_u64) {
            Some(x) => s.serialize_u64(x),
            None => match v {
                Some(big) => s.serialize_str(&big.to_string()),
                None => s.serialize_none(),
            },
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigUint>, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(u64),
            Text(String),
        }
        Ok(match Option::<Repr>::deserialize(d)? {
            None => None,
            Some(Repr::Num(x)) => Some(BigUint::from(x)),
            Some(Repr::Text(s)) => Some(s.parse().map_err(serde::de::Error::custom)?),
        })
    }
}

/// The dual-SDP point implied by an LP solution.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReconstructedDual {
    /// z_l per symmetrized Theta class
    pub z: Vec<f64>,
    /// b_j per symmetrized length class
    pub b: Vec<f64>,
    /// Kendall distance of each length class
    pub delta: Vec<u32>,
}

/// Copies z_l onto every symmetrized length class inside Theta class l.
pub fn reconstruct_dual(instance: &LpBoundInstance, a: &[f64], limits: &Limits) -> Result<ReconstructedDual> {
    let n = instance.n;
    let z = instance.z_values(a);
    let theta = class_decomposition(n, SubgroupKind::Theta, limits)?;
    let theta_sym = symmetrize(&theta);
    let psi = class_decomposition(n, SubgroupKind::Psi, limits)?;
    let psi_sym = symmetrize(&psi);
    let b = psi_sym.classes.iter().map(|j| z[theta_sym.sym_of(&theta, &j.representative)]).collect();
    let delta = psi_sym.classes.iter().map(|j| j.delta.unwrap_or(0)).collect();
    Ok(ReconstructedDual { z, b, delta })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualCheck {
    pub n: usize,
    pub dmin: usize,
    pub b1: f64,
    pub min_eigenvalue: f64,
    /// largest b_j over length classes j >= 1 with delta_j >= dmin (should be <= 0)
    pub max_sign_residual: f64,
    pub feasible: bool,
}

/// Minimum eigenvalue of sum_j b_j A~_j - J, assembled explicitly.
pub fn dual_matrix_min_eigenvalue(n: usize, b: &[f64], limits: &Limits) -> Result<f64> {
    check_cap("dual feasibility check", n, EXPLICIT_MATRIX_CAP)?;
    let psi = class_decomposition(n, SubgroupKind::Psi, limits)?;
    let sym = symmetrize(&psi);
    if b.len() != sym.len() {
        return Err(Error::SizeMismatch { left: b.len(), right: sym.len() });
    }
    let map = sym.element_syms(&psi).expect("length classes are enumerated");
    let labels = pair_labels(n, |g| map[rank_of(g)]);
    let total = factorial_u64(n) as usize;
    let s = DenseMatrix::from_fn(total, total, |x, y| b[labels[x * total + y] as usize] - 1.0);
    Ok(symmetric_eigen(&s)?.min_value())
}

pub fn verify_dual_feasible(
    n: usize,
    dmin: usize,
    b: &[f64],
    delta: &[u32],
    limits: &Limits,
) -> Result<DualCheck> {
    check_dmin(n, dmin)?;
    let min_eigenvalue = dual_matrix_min_eigenvalue(n, b, limits)?;
    let max_sign_residual = b
        .iter()
        .zip(delta)
        .skip(1)
        .filter(|(_, &dl)| dl as usize >= dmin)
        .map(|(&v, _)| v)
        .fold(f64::NEG_INFINITY, f64::max);
    let scale = factorial_u64(n) as f64;
    let feasible = min_eigenvalue >= -1e-6 * scale && max_sign_residual <= 1e-6 * scale;
    Ok(DualCheck { n, dmin, b1: b[0], min_eigenvalue, max_sign_residual, feasible })
}

/// lp_bound, then reconstruct the dual point and check it.
pub fn certify(n: usize, dmin: usize, limits: &Limits) -> Result<DualCheck> {
    check_cap("dual feasibility check", n, EXPLICIT_MATRIX_CAP)?;
    let instance = build_instance(n, dmin, limits)?;
    let outcome = solve_instance(&instance)?;
    let dual = reconstruct_dual(&instance, &outcome.a, limits)?;
    verify_dual_feasible(n, dmin, &dual.b, &dual.delta, limits)
}
