//! Runs any mix of the bound methods for one (n, dmin) and collects the
//! results in a [`BoundReport`].

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cache::Cache;
use crate::error::{check_dmin, Error, Result};
use crate::limits::{check_cap, Limits, SDP_CAP, SEARCH_CAP};
use crate::lp_bound::{build_instance_from, floor_bound, solve_instance, BoundReport, ProblemData};
use crate::metrics::{hamming_bound, singleton_bound};
use crate::sdp::solve_dual_sdp;
use crate::search::{max_code_with, SearchOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Lp,
    Sb,
    Hb,
    Sdp,
    Search,
}

impl Method {
    pub const ALL: [Method; 5] = [Method::Lp, Method::Sb, Method::Hb, Method::Sdp, Method::Search];

    pub fn name(&self) -> &'static str {
        match self {
            Method::Lp => "lp",
            Method::Sb => "sb",
            Method::Hb => "hb",
            Method::Sdp => "sdp",
            Method::Search => "search",
        }
    }

    /// Rejects n beyond what the method is allowed to attempt.
    pub fn check_cap(&self, n: usize, limits: &Limits) -> Result<()> {
        match self {
            Method::Lp => limits.check_group("lp", n),
            Method::Sdp => check_cap("sdp", n, SDP_CAP),
            Method::Search => check_cap("search", n, SEARCH_CAP),
            Method::Sb | Method::Hb => Ok(()),
        }
    }

    /// The method's value in a report, as text.
    pub fn cell(&self, report: &BoundReport) -> Option<String> {
        match self {
            Method::Lp => report.lp.map(|v| v.to_string()),
            Method::Sb => report.sb.as_ref().map(|v| v.to_string()),
            Method::Hb => report.hb.as_ref().map(|v| v.to_string()),
            Method::Sdp => report.sdp.map(|v| v.to_string()),
            Method::Search => report.search.map(|v| v.to_string()),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL.into_iter().find(|m| m.name() == s.trim().to_ascii_lowercase()).ok_or_else(|| {
            Error::InvalidArgument(format!("unknown method {s:?} (expected lp, sb, hb, sdp or search)"))
        })
    }
}

/// Parses a comma-separated method list, keeping the given order and
/// dropping repeats.
pub fn parse_methods(list: &str) -> Result<Vec<Method>> {
    let mut out = Vec::new();
    for part in list.split(',').filter(|p| !p.trim().is_empty()) {
        let m: Method = part.parse()?;
        if !out.contains(&m) {
            out.push(m);
        }
    }
    if out.is_empty() {
        return Err(Error::InvalidArgument("no methods requested".into()));
    }
    Ok(out)
}

#[derive(Clone, Debug, Default)]
pub struct BoundOptions {
    pub limits: Limits,
    pub search: SearchOptions,
    /// where LP instances that fail to solve are written
    pub dump_dir: Option<PathBuf>,
}

/// Checks every cap and the distance range before running anything.
pub fn check_request(n: usize, dmin: usize, methods: &[Method], options: &BoundOptions) -> Result<()> {
    for m in methods {
        m.check_cap(n, &options.limits)?;
    }
    check_dmin(n, dmin)
}

pub fn compute_bounds(
    n: usize,
    dmin: usize,
    methods: &[Method],
    cache: Option<&Cache>,
    options: &BoundOptions,
) -> Result<BoundReport> {
    check_request(n, dmin, methods, options)?;
    let mut report = BoundReport::new(n, dmin);
    for m in methods {
        match m {
            Method::Lp => {
                let data = match cache {
                    Some(cache) => cache.problem_data(n, &options.limits)?,
                    None => ProblemData::compute(n, &options.limits)?,
                };
                let instance = build_instance_from(&data, dmin)?;
                let outcome = solve_instance(&instance).map_err(|e| dump_failure(e, &instance, options))?;
                report.lp_raw = Some(outcome.raw);
                report.lp = Some(outcome.bound);
            }
            Method::Sb => report.sb = Some(singleton_bound(n, dmin)?),
            Method::Hb => report.hb = Some(hamming_bound(n, dmin)?),
            Method::Sdp => {
                let sol = solve_dual_sdp(n, dmin, &options.limits)?;
                report.sdp_raw = Some(sol.value);
                // value_upper is certified, value is only a lower estimate
                report.sdp = Some(floor_bound(sol.value_upper));
            }
            Method::Search => {
                let result = max_code_with(n, dmin, &options.search)?;
                report.search = Some(result.size as u64);
                report.search_exact = Some(result.exact);
            }
        }
    }
    Ok(report)
}

fn dump_failure<T: Serialize>(err: Error, instance: &T, options: &BoundOptions) -> Error {
    let (Error::Solver(msg), Some(dir)) = (&err, &options.dump_dir) else {
        return err;
    };
    let value = match serde_json::to_value(instance) {
        Ok(v) => v,
        Err(_) => return err,
    };
    let n = value["n"].as_u64().unwrap_or(0);
    let dmin = value["dmin"].as_u64().unwrap_or(0);
    let path = dir.join(format!("failed_lp_n{n}_d{dmin}.json"));
    let written = std::fs::create_dir_all(dir).and_then(|_| std::fs::write(&path, value.to_string())).is_ok();
    if written {
        Error::Solver(format!("{msg}; instance written to {}", path.display()))
    } else {
        err
    }
}
