//! The dual SDP over the symmetrized length configuration, solved by Kelley
//! cutting planes: an LP master over b and eigenvector cuts from
//! `sum_j b_j A~_j - J`. Also evaluates primal candidates and embeds codes.

use serde::{Deserialize, Serialize};

use crate::coherent::{class_decomposition, pair_labels, symmetrize};
use crate::error::{check_dmin, Error, Result};
use crate::limits::{check_cap, Limits, SDP_CAP};
pub use crate::linalg::{symmetric_eigen, DenseMatrix, SymmetricEigen};
use crate::lp::{solve_lp, LinearProgram, LpStatus, Relation};
use crate::metrics::kendall_distance;
use crate::partition::factorial_u64;
use crate::permgroup::{rank_of, Permutation, SubgroupKind};

/// The symmetrized length classes of S_n with their pair labels.
#[derive(Clone, Debug)]
pub struct DualSdpInstance {
    pub n: usize,
    pub dmin: usize,
    /// Kendall distance of each class; class 0 is the identity
    pub delta: Vec<u32>,
    /// number of ordered pairs in each class
    pub sizes: Vec<u64>,
    /// b_j <= 0 is required for class j
    pub nonpositive: Vec<bool>,
    /// class of x^-1 y, row-major over element ranks
    labels: Vec<u32>,
}

impl DualSdpInstance {
    pub fn new(n: usize, dmin: usize, limits: &Limits) -> Result<Self> {
        check_cap("SDP", n, SDP_CAP)?;
        check_dmin(n, dmin)?;
        let psi = class_decomposition(n, SubgroupKind::Psi, limits)?;
        let sym = symmetrize(&psi);
        let map = sym.element_syms(&psi).expect("length classes are enumerated");
        let labels = pair_labels(n, |g| map[rank_of(g)]);
        let delta: Vec<u32> = sym.classes.iter().map(|c| c.delta.unwrap_or(0)).collect();
        let nonpositive = delta.iter().enumerate().map(|(j, &d)| j > 0 && d as usize >= dmin).collect();
        let order = factorial_u64(n);
        let sizes = sym.classes.iter().map(|c| c.size * order).collect();
        Ok(DualSdpInstance { n, dmin, delta, sizes, nonpositive, labels })
    }

    /// n!
    pub fn order(&self) -> usize {
        factorial_u64(self.n) as usize
    }

    pub fn num_classes(&self) -> usize {
        self.delta.len()
    }

    pub fn label(&self, x: usize, y: usize) -> usize {
        self.labels[x * self.order() + y] as usize
    }

    /// The 0-1 matrices A~_j.
    pub fn matrices(&self) -> Vec<DenseMatrix> {
        let total = self.order();
        let mut mats = vec![DenseMatrix::zeros(total, total); self.num_classes()];
        for x in 0..total {
            for y in 0..total {
                mats[self.label(x, y)][(x, y)] = 1.0;
            }
        }
        mats
    }

    /// sum_j b_j A~_j - J.
    pub fn slack_matrix(&self, b: &[f64]) -> DenseMatrix {
        let total = self.order();
        DenseMatrix::from_fn(total, total, |x, y| b[self.label(x, y)] - 1.0)
    }

    /// v^T A~_j v for every j.
    pub fn quadratic_forms(&self, v: &[f64]) -> Vec<f64> {
        let total = self.order();
        let mut q = vec![0.0; self.num_classes()];
        for x in 0..total {
            for y in 0..total {
                q[self.label(x, y)] += v[x] * v[y];
            }
        }
        q
    }

    /// Tr(A~_j M) for every j.
    pub fn traces(&self, m: &DenseMatrix) -> Vec<f64> {
        let total = self.order();
        let mut t = vec![0.0; self.num_classes()];
        for x in 0..total {
            for y in 0..total {
                t[self.label(x, y)] += m[(y, x)];
            }
        }
        t
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SdpOptions {
    /// stop once the minimum eigenvalue is at least -tol * n!
    pub tolerance: f64,
    pub max_rounds: usize,
}

impl Default for SdpOptions {
    fn default() -> Self {
        SdpOptions { tolerance: 1e-7, max_rounds: 500 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualSdpSolution {
    pub n: usize,
    pub dmin: usize,
    /// optimum of the last master LP, a lower estimate of b_1*
    pub value: f64,
    /// b_1 plus the eigenvalue deficit, so that value_upper * I dominates the
    /// remaining negative part: a certified upper bound on the code size
    pub value_upper: f64,
    pub b: Vec<f64>,
    pub min_eigenvalue: f64,
    pub rounds: usize,
    pub cuts: usize,
}

pub fn solve_dual_sdp(n: usize, dmin: usize, limits: &Limits) -> Result<DualSdpSolution> {
    solve_dual_sdp_with(n, dmin, &SdpOptions::default(), limits)
}

pub fn solve_dual_sdp_with(
    n: usize,
    dmin: usize,
    options: &SdpOptions,
    limits: &Limits,
) -> Result<DualSdpSolution> {
    let inst = DualSdpInstance::new(n, dmin, limits)?;
    let total = inst.order();
    let k = inst.num_classes();
    let scale = total as f64;
    let box_bound = 10.0 * scale;

    let mut objective = vec![0.0; k];
    objective[0] = 1.0;
    let mut master = LinearProgram::new(objective);
    for j in 0..k {
        let hi = if inst.nonpositive[j] { 0.0 } else { box_bound };
        master.set_bounds(j, Some(-box_bound), Some(hi));
    }
    let add_cut = |master: &mut LinearProgram, v: &[f64]| {
        let mut q = inst.quadratic_forms(v);
        // round-off in v^T A~_j v for classes orthogonal to v
        let largest = q.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        for x in &mut q {
            if x.abs() < 1e-12 * largest {
                *x = 0.0;
            }
        }
        let s: f64 = v.iter().sum();
        master.add_constraint(q, Relation::Ge, s * s);
    };
    // every coordinate vector yields the same cut b_1 >= 1
    let mut unit = vec![0.0; total];
    unit[0] = 1.0;
    add_cut(&mut master, &unit);
    add_cut(&mut master, &vec![1.0 / scale.sqrt(); total]);

    let mut last: Option<(f64, f64, Vec<f64>)> = None;
    for round in 1..=options.max_rounds {
        let sol = solve_lp(&master)?;
        if sol.status != LpStatus::Optimal {
            return Err(Error::Solver(format!(
                "SDP master for n = {n}, dmin = {dmin} returned {:?} in round {round}",
                sol.status
            )));
        }
        let mut b = sol.values;
        for (v, &neg) in b.iter_mut().zip(&inst.nonpositive) {
            if neg {
                *v = v.min(0.0);
            }
        }
        let eig = symmetric_eigen(&inst.slack_matrix(&b))?;
        let lambda = eig.min_value();
        if lambda >= -options.tolerance * scale {
            if b.iter().any(|v| v.abs() >= box_bound * (1.0 - 1e-9)) {
                return Err(Error::Solver(format!(
                    "SDP box bound active at the optimum for n = {n}, dmin = {dmin}"
                )));
            }
            return Ok(DualSdpSolution {
                n,
                dmin,
                value: sol.objective_value,
                value_upper: b[0] + (-lambda).max(0.0),
                b,
                min_eigenvalue: lambda,
                rounds: round,
                cuts: master.constraints.len(),
            });
        }
        for (t, &value) in eig.values.iter().enumerate() {
            if value >= -options.tolerance * scale {
                break;
            }
            add_cut(&mut master, &eig.vector(t));
        }
        last = Some((sol.objective_value, lambda, b));
    }
    let (last_objective, last_min_eigenvalue, last_iterate) =
        last.unwrap_or((f64::NAN, f64::NAN, Vec::new()));
    Err(Error::Convergence { rounds: options.max_rounds, last_objective, last_min_eigenvalue, last_iterate })
}

/// A point of the primal SDP: either M = sum_j x_j A~_j or the normalized
/// indicator of a code.
#[derive(Clone, Debug, PartialEq)]
pub enum PrimalCandidate {
    Invariant { coefficients: Vec<f64> },
    Code { members: Vec<Permutation> },
}

impl PrimalCandidate {
    pub fn matrix(&self, inst: &DualSdpInstance) -> Result<DenseMatrix> {
        let total = inst.order();
        match self {
            PrimalCandidate::Invariant { coefficients } => {
                if coefficients.len() != inst.num_classes() {
                    return Err(Error::SizeMismatch { left: coefficients.len(), right: inst.num_classes() });
                }
                Ok(DenseMatrix::from_fn(total, total, |x, y| coefficients[inst.label(x, y)]))
            }
            PrimalCandidate::Code { members } => {
                let mut indicator = vec![0.0; total];
                for g in members {
                    if g.n() != inst.n {
                        return Err(Error::SizeMismatch { left: g.n(), right: inst.n });
                    }
                    indicator[g.rank()] = 1.0;
                }
                let w = 1.0 / members.len().max(1) as f64;
                Ok(DenseMatrix::from_fn(total, total, |x, y| w * indicator[x] * indicator[y]))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrimalReport {
    /// Tr(JM)
    pub objective: f64,
    pub trace: f64,
    pub min_eigenvalue: f64,
    /// Tr(A~_j M) for every class
    pub class_traces: Vec<f64>,
    /// most negative Tr(A~_j M), or 0
    pub sign_violation: f64,
    /// largest |Tr(A~_j M)| over classes j > 0 closer than dmin
    pub equality_violation: f64,
    pub feasible: bool,
}

pub fn evaluate_primal(
    n: usize,
    dmin: usize,
    candidate: &PrimalCandidate,
    limits: &Limits,
) -> Result<PrimalReport> {
    let inst = DualSdpInstance::new(n, dmin, limits)?;
    let m = candidate.matrix(&inst)?;
    let class_traces = inst.traces(&m);
    let min_eigenvalue = symmetric_eigen(&m)?.min_value();
    let sign_violation = class_traces.iter().fold(0.0f64, |acc, &t| acc.min(t));
    let equality_violation = class_traces
        .iter()
        .zip(&inst.delta)
        .skip(1)
        .filter(|(_, &d)| (d as usize) < dmin)
        .fold(0.0f64, |acc, (t, _)| acc.max(t.abs()));
    let trace = m.trace();
    let tol = 1e-9;
    let feasible = min_eigenvalue >= -tol
        && (trace - 1.0).abs() <= tol
        && sign_violation >= -tol
        && equality_violation <= tol;
    Ok(PrimalReport {
        objective: m.sum(),
        trace,
        min_eigenvalue,
        class_traces,
        sign_violation,
        equality_violation,
        feasible,
    })
}

/// The primal point (1/|V|) b b^T of a code V; fails on the first pair
/// closer than dmin.
pub fn embed_code(members: &[Permutation], dmin: usize) -> Result<PrimalCandidate> {
    if members.is_empty() {
        return Err(Error::InvalidArgument("a code needs at least one element".into()));
    }
    for (i, g) in members.iter().enumerate() {
        for h in &members[i + 1..] {
            let distance = kendall_distance(g, h)?;
            if distance < dmin {
                return Err(Error::NotACode { first: g.to_string(), second: h.to_string(), distance, dmin });
            }
        }
    }
    Ok(PrimalCandidate::Code { members: members.to_vec() })
}
