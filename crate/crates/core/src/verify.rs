//! Self-checks of the bound engine over a degree range.

use std::fmt;

use num_traits::Signed;
use serde::Serialize;

use crate::bounds::{
    budget, classify, covering_numerics, curve_data, derived_bound, g0, g1, half_degree,
    rank_l_minus, sigma_plus_l_plus, Parity, Rational, Source, Status,
};
use crate::error::Result;
use crate::par::{map_range, Execution};

/// Largest degree for which the lattice-level budget identity is checked.
pub const BUDGET_D_MAX: i64 = 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub d_max: i64,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            writeln!(f, "{tag} {}: {}", c.name, c.detail)?;
        }
        if self.passed() {
            write!(f, "OK: derived bounds match G0 for d=2..{}", self.d_max)
        } else {
            write!(f, "FAILED")
        }
    }
}

fn check(name: &'static str, failures: Vec<String>, ok: String) -> Check {
    match failures.first() {
        None => Check {
            name,
            passed: true,
            detail: ok,
        },
        Some(first) => Check {
            name,
            passed: false,
            detail: format!("{} failure(s), first: {first}", failures.len()),
        },
    }
}

fn collect(results: Vec<Result<Option<String>>>) -> Vec<String> {
    results
        .into_iter()
        .filter_map(|r| match r {
            Ok(v) => v,
            Err(e) => Some(e.to_string()),
        })
        .collect()
}

pub fn threshold_rederivation(d_max: i64, exec: Execution) -> Check {
    let fails = collect(map_range(exec, 2..=d_max, |d| {
        let derived = derived_bound(d)?;
        let expected = g0(d).floor().to_integer();
        Ok((derived != expected).then(|| format!("d={d}: derived {derived}, floor G0 {expected}")))
    }));
    check("threshold", fails, format!("derived_bound(d) = floor G0(d) for d=2..{d_max}"))
}

pub fn g0_below_g1(d_max: i64, exec: Execution) -> Check {
    let fails = collect(map_range(exec, 1..=d_max, |d| {
        let k = half_degree(d);
        let bound = -Rational::new((k - 1) * (k - 1), 3);
        let diff = g0(d) - g1(d);
        let ok = diff <= bound && bound <= Rational::from_integer(0);
        Ok((!ok).then(|| format!("d={d}: G0-G1 = {diff}, bound {bound}")))
    }));
    check("g0-below-g1", fails, format!("G0-G1 <= -(k-1)^2/3 <= 0 for d=1..{d_max}"))
}

pub fn asymptotics(d_max: i64, exec: Execution) -> Check {
    let limit = Rational::from_integer(2);
    let fails = collect(map_range(exec, 1..=d_max, |d| {
        let dq = Rational::from_integer(d);
        let e0 = (g0(d) - dq * dq / 4).abs() / dq;
        let e1 = (g1(d) - dq * dq / 3).abs() / dq;
        Ok((e0 > limit || e1 > limit).then(|| format!("d={d}: {e0}, {e1}")))
    }));
    check("asymptotics", fails, format!("|G0-d^2/4|/d, |G1-d^2/3|/d <= 2 for d=1..{d_max}"))
}

/// `(g, d, splits)`: a constructible even-case pair and the `(r, s)` node
/// splits checked for it.
pub type GridPoint = (i64, i64, Vec<(i64, i64)>);

/// Pairs `(g, d)` of the even-case budget grid, each with its splits.
pub fn budget_grid(d_max: i64) -> Vec<GridPoint> {
    let mut out = Vec::new();
    for d in (4..=d_max.min(BUDGET_D_MAX)).step_by(2) {
        for g in 0.. {
            let Ok(cd) = curve_data(g, d) else { break };
            let mut splits = vec![(cd.n, 0)];
            if cd.n >= 2 {
                splits.push((cd.n - 2, 1));
            }
            out.push((g, d, splits));
        }
    }
    out
}

/// `ℓ₃(discr S⁻) = c` through the lattice stack, on the even-case grid.
pub fn budget_identity(d_max: i64, exec: Execution) -> Check {
    let grid = budget_grid(d_max);
    let fails = collect(crate::par::map_slice(exec, &grid, |(g, d, splits)| {
        let cd = curve_data(*g, *d)?;
        for &(r, s) in splits {
            let b = budget(&cd.with_split(r, s)?, Parity::Even)?;
            if b.ell3_s as i64 != cd.c {
                return Ok(Some(format!("(g,d)=({g},{d}) split ({r},{s}): ell3 {} != c {}", b.ell3_s, cd.c)));
            }
        }
        Ok(None)
    }));
    let points = grid.len();
    check("budget", fails, format!("ell3(discr S-) = c on {points} even grid points, d<={}", d_max.min(BUDGET_D_MAX)))
}

pub fn genus_conservation(d_max: i64, exec: Execution) -> Check {
    let fails = collect(map_range(exec, 2..=d_max, |d| {
        for g in 0.. {
            match curve_data(g, d) {
                Ok(cd) if !cd.satisfies_genus_formula() => {
                    return Ok(Some(format!("(g,d)=({g},{d})")))
                }
                Ok(_) => {}
                Err(_) => break,
            }
        }
        Ok(None)
    }));
    check("genus-formula", fails, format!("g + c + n = (d-1)^2 for d=2..{d_max}"))
}

pub fn classifier_monotonicity(d_max: i64, exec: Execution) -> Check {
    let fails = collect(map_range(exec, 1..=d_max, |d| {
        let top = g1(d).ceil().to_integer().max(0) + 2;
        for g in 0..=top {
            let here = classify(g, d)?.sources.contains(&Source::G0Bound);
            let next = classify(g + 1, d)?.sources.contains(&Source::G0Bound);
            if here && !next {
                return Ok(Some(format!("(g,d)=({g},{d})")));
            }
        }
        Ok(None)
    }));
    check("monotonicity", fails, format!("G0 coverage is upward closed in g for d=1..{d_max}"))
}

pub fn known_cases(d_max: i64) -> Check {
    let mut fails = Vec::new();
    for d in 1..=d_max.clamp(1, 20) {
        match classify(0, d) {
            Ok(v) if v.sources.contains(&Source::GZero) => {}
            other => fails.push(format!("(0,{d}): {other:?}")),
        }
    }
    for d in 1..=4 {
        for g in 0..=20 {
            match classify(g, d) {
                Ok(v) if v.sources.contains(&Source::SmallDegree) => {}
                other => fails.push(format!("({g},{d}): {other:?}")),
            }
        }
    }
    if d_max >= 5 {
        match classify(1, 5) {
            Ok(v) if v.status == Status::Open => {}
            other => fails.push(format!("(1,5): {other:?}")),
        }
    }
    check("known-cases", fails, "g=0 and d<=4 covered, (1,5) open".into())
}

pub fn covering_identities(k_max: i64, exec: Execution) -> Check {
    let fails = collect(map_range(exec, 1..=k_max, |k| {
        let cov = covering_numerics(k)?;
        let ok_values = cov.b2 == 8 * k * k - 8 * k + 6
            && cov.sigma == -4 * k * k
            && cov.sigma_plus == 2 * k * k - 4 * k + 3
            && (cov.b2 + cov.sigma) == 2 * cov.sigma_plus;
        let ok_rank = [0, 1, k, 3 * k + 7]
            .iter()
            .map(|&x| rank_l_minus(k, x).map(|r| r + sigma_plus_l_plus(k) + x == cov.b2))
            .collect::<Result<Vec<bool>>>()?
            .into_iter()
            .all(|b| b);
        Ok((!(ok_values && ok_rank)).then(|| format!("k={k}")))
    }));
    check("covering", fails, format!("b2, sigma, sigma+ and rank L- identities for k=1..{k_max}"))
}

pub fn verify(d_max: i64, exec: Execution) -> Result<VerifyReport> {
    if d_max < 2 {
        return Err(crate::Error::InvalidArgument(format!("d_max must be >= 2, got {d_max}")));
    }
    let checks = vec![
        threshold_rederivation(d_max, exec),
        g0_below_g1(d_max, exec),
        asymptotics(d_max, exec),
        budget_identity(d_max, exec),
        genus_conservation(d_max, exec),
        classifier_monotonicity(d_max, exec),
        known_cases(d_max),
        covering_identities(d_max, exec),
    ];
    Ok(VerifyReport { d_max, checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verify_small_range_passes() {
        let report = verify(12, Execution::Sequential).unwrap();
        assert!(report.passed(), "{report}");
        assert!(report.to_string().ends_with("OK: derived bounds match G0 for d=2..12"));
    }

    #[test]
    fn grid_splits() {
        let grid = budget_grid(4);
        // d = 4: g = 0 (n = 3) and g = 1 (n = 0)
        assert_eq!(grid, vec![(0, 4, vec![(3, 0), (1, 1)]), (1, 4, vec![(0, 0)])]);
    }
}
