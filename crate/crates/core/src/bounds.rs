//! Genus bounds for cuspidal real curves on the ellipsoid.
//!
//! A degree-`d` map with real simple critical points on a genus-`g` curve
//! yields a real curve of bi-degree `(d, d)` with `c = 2d + 2g - 2` real
//! ordinary cusps and `n = (d-1)^2 - g - c` nodes. The double covering of
//! the quadric ramified along it has eigenlattices `L±`; the resolution
//! classes of the singular points give a sublattice `S⁻ ⊂ L⁻` whose rank,
//! together with a lower bound on `rank S⊥`, must fit into `rank L⁻`. The
//! resulting slack is negative exactly when no such curve exists, which is
//! what produces the threshold `G0(d)`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::abelian::is_prime;
use crate::discriminant::{discriminant_group, rank_perp_lower_bound};
use crate::error::{Error, Result};
use crate::lattice::{Lattice, Signature};
use crate::par::{map_range, Execution};

pub type Rational = Ratio<i64>;

/// Largest degree accepted by the bound functions; keeps all intermediate
/// values well inside `i64`.
pub const MAX_DEGREE: i64 = 1_000_000;

fn check_degree(d: i64) -> Result<()> {
    if d > MAX_DEGREE {
        return Err(Error::InvalidArgument(format!("degree {d} exceeds {MAX_DEGREE}")));
    }
    Ok(())
}

/// Node count formula. Only [`NodeCount::GenusFormula`] is used by the
/// pipeline; the other variant exists to show that it does not reproduce
/// the even-case conclusion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeCount {
    /// `n = (d-1)^2 - g - c = d^2 - 4d + 3 - 3g`
    GenusFormula,
    /// `n = d^2 - 4d - 1 - 3g`, off by 4 from the genus formula.
    ShiftedByFour,
}

impl NodeCount {
    pub fn nodes(self, d: i64, g: i64) -> i64 {
        match self {
            NodeCount::GenusFormula => (d - 1) * (d - 1) - g - cusps(d, g),
            NodeCount::ShiftedByFour => d * d - 4 * d - 1 - 3 * g,
        }
    }
}

/// `c = 2d + 2g - 2`
pub fn cusps(d: i64, g: i64) -> i64 {
    2 * d + 2 * g - 2
}

/// Singular-point record of a cuspidal curve of bi-degree `(d, d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveData {
    pub d: i64,
    pub g: i64,
    /// real ordinary cusps
    pub c: i64,
    /// real nodes
    pub r: i64,
    /// pairs of complex conjugate nodes
    pub s: i64,
    /// `r + 2s`
    pub n: i64,
}

pub fn curve_data(g: i64, d: i64) -> Result<CurveData> {
    curve_data_with(g, d, NodeCount::GenusFormula)
}

pub fn curve_data_with(g: i64, d: i64, formula: NodeCount) -> Result<CurveData> {
    if d < 2 || g < 0 {
        return Err(Error::InvalidArgument(format!(
            "curve data needs d >= 2 and g >= 0, got g = {g}, d = {d}"
        )));
    }
    check_degree(d)?;
    let c = cusps(d, g);
    let n = formula.nodes(d, g);
    if n < 0 {
        return Err(Error::Unconstructible { g, d, n });
    }
    Ok(CurveData { d, g, c, r: n, s: 0, n })
}

impl CurveData {
    /// Same curve with `n = r + 2s` split explicitly.
    pub fn with_split(self, r: i64, s: i64) -> Result<CurveData> {
        if r < 0 || s < 0 || r + 2 * s != self.n {
            return Err(Error::InvalidArgument(format!(
                "split r = {r}, s = {s} does not satisfy r + 2s = {}",
                self.n
            )));
        }
        Ok(CurveData { r, s, ..self })
    }

    /// `g + c + n = (d-1)^2`
    pub fn satisfies_genus_formula(&self) -> bool {
        self.g + self.c + self.n == (self.d - 1) * (self.d - 1)
    }
}

/// Topology of the double covering `X` of the quadric ramified along a curve
/// of bi-degree `(2k, 2k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoveringNumerics {
    pub b2: i64,
    pub sigma: i64,
    pub sigma_plus: i64,
}

pub fn covering_numerics(k: i64) -> Result<CoveringNumerics> {
    if k < 1 {
        return Err(Error::InvalidArgument(format!("k must be >= 1, got {k}")));
    }
    check_degree(2 * k)?;
    let b2 = 8 * k * k - 8 * k + 6;
    let sigma = -4 * k * k;
    let sigma_plus = 2 * k * k - 4 * k + 3;
    debug_assert_eq!((b2 + sigma) / 2, sigma_plus);
    Ok(CoveringNumerics {
        b2,
        sigma,
        sigma_plus,
    })
}

/// `σ₊(L⁺) = (k-1)^2`
pub fn sigma_plus_l_plus(k: i64) -> i64 {
    (k - 1) * (k - 1)
}

/// `rank L⁻ = 7k^2 - 6k + 5 - σ₋(L⁺)`.
pub fn rank_l_minus(k: i64, sigma_minus_l_plus: i64) -> Result<i64> {
    if k < 0 || sigma_minus_l_plus < 0 {
        return Err(Error::InvalidArgument("rank_l_minus needs k, σ₋(L⁺) >= 0".into()));
    }
    Ok(7 * k * k - 6 * k + 5 - sigma_minus_l_plus)
}

/// Ranks of the `(±1)`-eigenspaces of the Alexander module of the free group
/// on `d - 1` generators, tensored with `Z_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlexanderShape {
    pub plus_rank: i64,
    pub minus_rank: i64,
    pub p: i64,
    /// The kernel `K` has no 2-torsion.
    pub two_torsion_free: bool,
}

pub fn alexander_shape(d: i64, p: i64) -> Result<AlexanderShape> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("d must be >= 2, got {d}")));
    }
    if p == 2 {
        return Err(Error::EvenPrime);
    }
    if !is_prime(&BigInt::from(p)) {
        return Err(Error::NotPrime(p.to_string()));
    }
    Ok(AlexanderShape {
        plus_rank: 1,
        minus_rank: d - 2,
        p,
        two_torsion_free: true,
    })
}

/// Upper bound `ℓ_p(K) <= d - 2` for an odd prime `p`.
pub fn alexander_bound(d: i64, p: i64) -> Result<i64> {
    Ok(alexander_shape(d, p)?.minus_rank)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(d: i64) -> Parity {
        if d.is_even() {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// Rank bookkeeping of the resolution classes, without building lattices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BudgetCounts {
    pub rank_sigma_minus: i64,
    pub rank_s_minus: i64,
    /// rank of the negative definite classes in `L⁺`; a lower bound for `σ₋(L⁺)`
    pub sigma_plus_definite_rank: i64,
}

impl BudgetCounts {
    pub fn new(cd: &CurveData, parity: Parity) -> BudgetCounts {
        let CurveData { d, c, r, s, .. } = *cd;
        let (extra_minus, extra_plus) = match parity {
            Parity::Even => (0, 0),
            // (d-1) conjugate node pairs from the two generatrices, plus A3
            // and [-4] from the triple point.
            Parity::Odd => ((d - 1) + 3, (d - 1) + 1),
        };
        let rank_sigma_minus = 2 * c + r + s + extra_minus;
        BudgetCounts {
            rank_sigma_minus,
            rank_s_minus: rank_sigma_minus + 1,
            sigma_plus_definite_rank: s + 1 + extra_plus,
        }
    }
}

/// The lattices `Σ⁻` and `S⁻ = Σ⁻ ⊕ [4]` assembled from the singular points,
/// with `ℓ₃(discr S⁻)` computed from the lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EigenlatticeBudget {
    pub curve: CurveData,
    pub parity: Parity,
    pub sigma_minus: Lattice,
    pub sigma_plus_definite_rank: i64,
    pub s_minus: Lattice,
    pub ell3_s: usize,
}

pub fn budget(cd: &CurveData, parity: Parity) -> Result<EigenlatticeBudget> {
    if cd.n < 0 || !cd.satisfies_genus_formula() || cd.r + 2 * cd.s != cd.n {
        return Err(Error::Unconstructible {
            g: cd.g,
            d: cd.d,
            n: cd.n,
        });
    }
    if Parity::of(cd.d) != parity {
        return Err(Error::InvalidArgument(format!(
            "{parity:?} budget requested for d = {}",
            cd.d
        )));
    }
    let a1 = Lattice::a(1);
    let a2 = Lattice::a(2);
    let a3 = Lattice::a(3);
    let m4 = Lattice::rank1(-4);
    let mut parts: Vec<&Lattice> = Vec::new();
    parts.extend(std::iter::repeat_n(&a2, cd.c as usize));
    parts.extend(std::iter::repeat_n(&a1, cd.r as usize));
    parts.extend(std::iter::repeat_n(&m4, cd.s as usize));
    if parity == Parity::Odd {
        parts.extend(std::iter::repeat_n(&m4, (cd.d - 1) as usize));
        parts.push(&a3);
    }
    let sigma_minus = Lattice::direct_sum_all(parts);
    let s_minus = sigma_minus.direct_sum(&Lattice::rank1(4));
    let ell3_s = discriminant_group(&s_minus)?.ell_p(&BigInt::from(3))?;
    let counts = BudgetCounts::new(cd, parity);
    Ok(EigenlatticeBudget {
        curve: *cd,
        parity,
        sigma_minus,
        sigma_plus_definite_rank: counts.sigma_plus_definite_rank,
        s_minus,
        ell3_s,
    })
}

impl EigenlatticeBudget {
    pub fn counts(&self) -> BudgetCounts {
        BudgetCounts::new(&self.curve, self.parity)
    }

    /// `Σ⁻` negative definite and `S⁻` of signature `(1, rank - 1, 0)`.
    pub fn signatures_ok(&self) -> bool {
        let r = self.s_minus.rank();
        self.sigma_minus.is_negative_definite()
            && self.s_minus.signature() == Signature::new(1, r - 1, 0)
    }
}

/// `k` with `d = 2k` or `d = 2k - 1`.
pub fn half_degree(d: i64) -> i64 {
    Integer::div_floor(&(d + 1), &2)
}

/// Even case `d = 2k`: `(7k^2 - 6k + 5) - (2c + n + 2 + rank S⊥)` with
/// `rank S⊥ >= ℓ₃(S⁻) - 2 ℓ₃(K)`, `ℓ₃(S⁻) = c`, `ℓ₃(K) <= d - 2`.
/// Negative slack means no such curve exists.
pub fn even_case_slack(k: i64, g: i64) -> Result<Rational> {
    even_case_slack_with(k, g, NodeCount::GenusFormula)
}

pub fn even_case_slack_with(k: i64, g: i64, formula: NodeCount) -> Result<Rational> {
    if k < 1 {
        return Err(Error::InvalidArgument(format!("k must be >= 1, got {k}")));
    }
    let d = 2 * k;
    let cd = curve_data_with(g, d, formula)?;
    let counts = BudgetCounts::new(&cd, Parity::Even);
    let ell3_k = alexander_bound(d, 3)?;
    let perp = rank_perp_lower_bound(cd.c as usize, ell3_k as usize) as i64;
    let rank_l_minus = rank_l_minus(k, counts.sigma_plus_definite_rank)?;
    Ok(Rational::from_integer(rank_l_minus - counts.rank_s_minus - perp))
}

/// The even-case inequality after substituting the bounds:
/// `3c + n - 2(d-2) <= 7k^2 - 6k + 3`, returned as `(lhs, rhs)`.
pub fn even_case_reduced(k: i64, g: i64) -> Result<(i64, i64)> {
    let d = 2 * k;
    let cd = curve_data(g, d)?;
    Ok((3 * cd.c + cd.n - 2 * (d - 2), 7 * k * k - 6 * k + 3))
}

/// Odd case `d = 2k - 1`, via the curve augmented by the two generatrices
/// through a real point: `(7k^2 - 6k + 5) - (2c + n + 2(d-1) + 6 + rank S⊥)`
/// with `rank S⊥ >= c`. The bound `rank S⊥ >= c` rests on `ℓ₃(K) = 0` for
/// the augmented curve, which is taken as given.
pub fn odd_case_slack(k: i64, g: i64) -> Result<Rational> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("odd case needs k >= 2, got {k}")));
    }
    let d = 2 * k - 1;
    let cd = curve_data(g, d)?;
    let counts = BudgetCounts::new(&cd, Parity::Odd);
    let perp = rank_perp_lower_bound(cd.c as usize, 0) as i64;
    let rank_l_minus = rank_l_minus(k, counts.sigma_plus_definite_rank)?;
    Ok(Rational::from_integer(rank_l_minus - counts.rank_s_minus - perp))
}

/// Slack for the pair `(g, d)` by parity of `d`.
pub fn slack(g: i64, d: i64) -> Result<Rational> {
    let k = half_degree(d);
    match Parity::of(d) {
        Parity::Even => even_case_slack(k, g),
        Parity::Odd => odd_case_slack(k, g),
    }
}

/// `G0(d) = k^2 - 2k` for `d = 2k`, `k^2 - 10k/3 + 7/3` for `d = 2k - 1`.
pub fn g0(d: i64) -> Rational {
    let k = half_degree(d);
    if d.is_even() {
        Rational::from_integer(k * k - 2 * k)
    } else {
        Rational::new(3 * k * k - 10 * k + 7, 3)
    }
}

/// `G1(d) = (d^2 - 4d + 3) / 3`
pub fn g1(d: i64) -> Rational {
    Rational::new(d * d - 4 * d + 3, 3)
}

/// Largest `g` whose curve is constructible with nonnegative slack, or `-1`
/// when there is none. Scans `g` upward from 0.
pub fn derived_bound(d: i64) -> Result<i64> {
    derived_bound_with(d, NodeCount::GenusFormula)
}

pub fn derived_bound_with(d: i64, formula: NodeCount) -> Result<i64> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("d must be >= 2, got {d}")));
    }
    check_degree(d)?;
    let k = half_degree(d);
    let mut best = -1;
    for g in 0.. {
        let s = match Parity::of(d) {
            Parity::Even => even_case_slack_with(k, g, formula),
            Parity::Odd => odd_case_slack(k, g),
        };
        match s {
            Ok(s) if !s.is_negative() => best = g,
            Ok(_) => {}
            Err(Error::Unconstructible { .. }) => break,
            Err(e) => return Err(e),
        }
    }
    Ok(best)
}

/// Why a pair is known to have the total reality property.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Source {
    /// `g = 0`
    GZero,
    /// `d <= 4`
    SmallDegree,
    /// `g > G1(d)`
    G1Bound,
    /// `g > G0(d)`
    G0Bound,
}

impl Source {
    pub const ALL: [Source; 4] = [Source::GZero, Source::SmallDegree, Source::G1Bound, Source::G0Bound];

    pub fn key(self) -> &'static str {
        match self {
            Source::GZero => "g-zero",
            Source::SmallDegree => "small-degree",
            Source::G1Bound => "G1-bound",
            Source::G0Bound => "G0-bound",
        }
    }

    pub fn reference(self) -> &'static str {
        match self {
            Source::GZero => "EG",
            Source::SmallDegree => "ESS/DShapiro",
            Source::G1Bound => "ESS",
            Source::G0Bound => "G0",
        }
    }

    pub fn from_key(key: &str) -> Option<Source> {
        Source::ALL.into_iter().find(|s| s.key() == key)
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.key(), self.reference())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Covered,
    Open,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Covered => write!(f, "Covered"),
            Status::Open => write!(f, "Open"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    /// All applicable sources, in [`Source::ALL`] order. Empty iff open.
    pub sources: Vec<Source>,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.status)?;
        if !self.sources.is_empty() {
            let s: Vec<String> = self.sources.iter().map(ToString::to_string).collect();
            write!(f, " [{}]", s.join("; "))?;
        }
        Ok(())
    }
}

pub fn classify(g: i64, d: i64) -> Result<Verdict> {
    if d < 1 || g < 0 {
        return Err(Error::InvalidArgument(format!(
            "classify needs d >= 1 and g >= 0, got g = {g}, d = {d}"
        )));
    }
    check_degree(d)?;
    let gq = Rational::from_integer(g);
    let sources: Vec<Source> = Source::ALL
        .into_iter()
        .filter(|s| match s {
            Source::GZero => g == 0,
            Source::SmallDegree => d <= 4,
            Source::G1Bound => gq > g1(d),
            Source::G0Bound => gq > g0(d),
        })
        .collect();
    let status = if sources.is_empty() {
        Status::Open
    } else {
        Status::Covered
    };
    Ok(Verdict { status, sources })
}

/// One row of the per-degree bound table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsRow {
    pub d: i64,
    #[serde(rename = "G0", with = "fraction")]
    pub g0: Rational,
    #[serde(rename = "G1", with = "fraction")]
    pub g1: Rational,
    pub derived: i64,
}

impl BoundsRow {
    /// `derived` equals the integral threshold `floor(G0)`.
    pub fn is_consistent(&self) -> bool {
        self.derived == self.g0.floor().to_integer()
    }
}

pub fn bounds_row(d: i64) -> Result<BoundsRow> {
    Ok(BoundsRow {
        d,
        g0: g0(d),
        g1: g1(d),
        derived: derived_bound(d)?,
    })
}

pub fn bounds_table(d_max: i64, exec: Execution) -> Result<Vec<BoundsRow>> {
    if d_max < 2 {
        return Err(Error::InvalidArgument(format!("d_max must be >= 2, got {d_max}")));
    }
    check_degree(d_max)?;
    map_range(exec, 2..=d_max, bounds_row).into_iter().collect()
}

/// Everything known about a pair `(g, d)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub d: i64,
    pub g: i64,
    pub status: Status,
    #[serde(with = "source_list")]
    pub sources: Vec<Source>,
    #[serde(rename = "G0", with = "fraction")]
    pub g0: Rational,
    #[serde(rename = "G1", with = "fraction")]
    pub g1: Rational,
    pub c: i64,
    pub n: i64,
    #[serde(with = "optional_fraction")]
    pub slack_even: Option<Rational>,
    #[serde(with = "optional_fraction")]
    pub slack_odd: Option<Rational>,
}

/// Structured form of a record, with the `ℓ₃` data of the even/odd pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructuredRecord {
    #[serde(flatten)]
    pub record: ReportRecord,
    /// `ℓ₃(discr S⁻)` as used by the pipeline (equals `c`), when constructible.
    pub ell3_s: Option<i64>,
    /// Upper bound on `ℓ₃(K)` (`d - 2` for even `d`, 0 for odd `d`).
    pub ell3_kernel_bound: Option<i64>,
}

pub fn report(g: i64, d: i64) -> Result<ReportRecord> {
    let verdict = classify(g, d)?;
    let c = cusps(d, g);
    let n = NodeCount::GenusFormula.nodes(d, g);
    let k = half_degree(d);
    let slack_if = |parity: Parity| -> Result<Option<Rational>> {
        if d < 2 || n < 0 || Parity::of(d) != parity {
            return Ok(None);
        }
        match parity {
            Parity::Even => even_case_slack(k, g).map(Some),
            Parity::Odd if k >= 2 => odd_case_slack(k, g).map(Some),
            Parity::Odd => Ok(None),
        }
    };
    Ok(ReportRecord {
        d,
        g,
        status: verdict.status,
        sources: verdict.sources,
        g0: g0(d),
        g1: g1(d),
        c,
        n,
        slack_even: slack_if(Parity::Even)?,
        slack_odd: slack_if(Parity::Odd)?,
    })
}

pub fn structured_report(g: i64, d: i64) -> Result<StructuredRecord> {
    let record = report(g, d)?;
    let constructible = d >= 2 && record.n >= 0;
    let kernel = match Parity::of(d) {
        Parity::Even if d >= 2 => Some(alexander_bound(d, 3)?),
        Parity::Odd if d >= 3 => Some(0),
        _ => None,
    };
    Ok(StructuredRecord {
        ell3_s: constructible.then_some(record.c),
        ell3_kernel_bound: kernel,
        record,
    })
}

/// Records for `1 <= d <= d_max`, `0 <= g <= g_max`, ordered by `(d, g)`.
pub fn report_table(d_max: i64, g_max: i64, exec: Execution) -> Result<Vec<ReportRecord>> {
    if d_max < 1 || g_max < 0 {
        return Err(Error::InvalidArgument("report table needs d_max >= 1, g_max >= 0".into()));
    }
    check_degree(d_max)?;
    let rows = map_range(exec, 1..=d_max, |d| {
        (0..=g_max).map(|g| report(g, d)).collect::<Result<Vec<_>>>()
    });
    Ok(rows.into_iter().collect::<Result<Vec<_>>>()?.concat())
}

/// `p/q` strings for exact rationals (`p` alone when integral).
pub mod fraction {
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    use super::Rational;

    pub fn format(r: &Rational) -> String {
        if r.is_integer() {
            r.numer().to_string()
        } else {
            format!("{}/{}", r.numer(), r.denom())
        }
    }

    pub fn parse(s: &str) -> Result<Rational, String> {
        let s = s.trim();
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: i64 = n.parse().map_err(|_| format!("bad numerator in {s:?}"))?;
        let d: i64 = d.parse().map_err(|_| format!("bad denominator in {s:?}"))?;
        if d == 0 {
            return Err(format!("zero denominator in {s:?}"));
        }
        Ok(Rational::new(n, d))
    }

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse(&s).map_err(D::Error::custom)
    }
}

mod optional_fraction {
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    use super::{fraction, Rational};

    pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.as_ref().map(fraction::format).unwrap_or_default())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        let s = String::deserialize(d)?;
        if s.trim().is_empty() {
            return Ok(None);
        }
        fraction::parse(&s).map(Some).map_err(D::Error::custom)
    }
}

mod source_list {
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    use super::Source;

    pub fn serialize<S: Serializer>(v: &[Source], s: S) -> Result<S::Ok, S::Error> {
        let keys: Vec<&str> = v.iter().map(|x| x.key()).collect();
        s.serialize_str(&keys.join(";"))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Source>, D::Error> {
        let s = String::deserialize(d)?;
        s.split(';')
            .filter(|t| !t.is_empty())
            .map(|t| Source::from_key(t).ok_or_else(|| D::Error::custom(format!("unknown source {t:?}"))))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn curve_records() {
        let cd = curve_data(1, 4).unwrap();
        assert_eq!((cd.c, cd.n), (8, 0));
        assert!(matches!(curve_data(0, 2), Err(Error::Unconstructible { n: -1, .. })));
        let cd = curve_data(0, 3).unwrap();
        assert_eq!((cd.c, cd.n), (4, 0));
        assert!(curve_data(0, 1).is_err());
        assert!(curve_data(-1, 5).is_err());
    }

    #[test]
    fn splits() {
        let cd = curve_data(0, 4).unwrap();
        assert_eq!(cd.n, 3);
        let sp = cd.with_split(1, 1).unwrap();
        assert_eq!((sp.r, sp.s), (1, 1));
        assert!(cd.with_split(2, 1).is_err());
        assert!(cd.with_split(-1, 2).is_err());
    }

    #[test]
    fn covering_values() {
        let k1 = covering_numerics(1).unwrap();
        assert_eq!((k1.b2, k1.sigma, k1.sigma_plus), (6, -4, 1));
        let k2 = covering_numerics(2).unwrap();
        assert_eq!((k2.b2, k2.sigma, k2.sigma_plus), (22, -16, 3));
        assert!(covering_numerics(0).is_err());
    }

    #[test]
    fn rank_l_minus_values() {
        assert_eq!(rank_l_minus(2, 0).unwrap(), 21);
        assert_eq!(rank_l_minus(1, 0).unwrap(), 6);
        assert!(rank_l_minus(1, -1).is_err());
    }

    #[test]
    fn alexander() {
        assert_eq!(alexander_bound(2, 3).unwrap(), 0);
        assert_eq!(alexander_bound(6, 3).unwrap(), 4);
        assert_eq!(alexander_bound(5, 3).unwrap(), 3);
        assert_eq!(alexander_bound(5, 2), Err(Error::EvenPrime));
        assert!(matches!(alexander_bound(5, 9), Err(Error::NotPrime(_))));
        let shape = alexander_shape(7, 5).unwrap();
        assert_eq!((shape.plus_rank, shape.minus_rank), (1, 5));
        assert!(shape.two_torsion_free);
    }

    #[test]
    fn thresholds() {
        assert_eq!(g0(4), q(0, 1));
        assert_eq!(g1(4), q(1, 1));
        assert_eq!(g0(5), q(4, 3));
        assert_eq!(g0(6), q(3, 1));
        assert_eq!(g0(2), q(-1, 1));
        assert_eq!(g0(3), q(-1, 3));
        assert_eq!(g0(7), q(5, 1));
        assert_eq!(g0(1), q(0, 1));
    }

    #[test]
    fn even_slack_values() {
        // (1,4): c = 8, n = 0, lhs 16 + 0 + 2 + (8 - 4) = 22 vs rank L⁻ = 21
        assert_eq!(even_case_slack(2, 1).unwrap(), q(-1, 1));
        assert_eq!(even_case_slack(2, 0).unwrap(), q(2, 1));
        assert!(matches!(even_case_slack(1, 0), Err(Error::Unconstructible { .. })));
        assert_eq!(even_case_reduced(2, 1).unwrap(), (20, 19));
    }

    #[test]
    fn odd_slack_values() {
        assert_eq!(odd_case_slack(2, 0).unwrap(), q(-1, 1));
        assert_eq!(odd_case_slack(3, 1).unwrap(), q(1, 1));
        assert_eq!(odd_case_slack(4, 5).unwrap(), q(0, 1));
        assert_eq!(odd_case_slack(4, 6).unwrap(), q(-3, 1));
        assert!(odd_case_slack(1, 0).is_err());
    }

    #[test]
    fn derived_bounds_small() {
        assert_eq!(derived_bound(2).unwrap(), -1);
        assert_eq!(derived_bound(3).unwrap(), -1);
        assert_eq!(derived_bound(4).unwrap(), 0);
        assert_eq!(derived_bound(5).unwrap(), 1);
        assert_eq!(derived_bound(6).unwrap(), 3);
        assert_eq!(derived_bound(7).unwrap(), 5);
        assert!(derived_bound(1).is_err());
    }

    #[test]
    fn classifier_examples() {
        let v = classify(0, 7).unwrap();
        assert_eq!(v.sources, vec![Source::GZero]);
        assert_eq!(classify(1, 5).unwrap().status, Status::Open);
        assert_eq!(classify(1, 5).unwrap().to_string(), "Open");
        assert_eq!(classify(2, 5).unwrap().sources, vec![Source::G0Bound]);
        assert_eq!(classify(0, 9).unwrap().to_string(), "Covered [g-zero: EG]");
        assert_eq!(
            classify(0, 3).unwrap().sources,
            vec![Source::GZero, Source::SmallDegree, Source::G0Bound]
        );
        assert!(classify(0, 0).is_err());
    }

    #[test]
    fn budget_even_3_6() {
        let cd = curve_data(3, 6).unwrap();
        assert_eq!((cd.c, cd.n), (16, 6));
        let b = budget(&cd, Parity::Even).unwrap();
        assert_eq!(b.s_minus.rank(), 39);
        assert_eq!(b.ell3_s, 16);
        assert_eq!(b.sigma_plus_definite_rank, 1);
        assert!(b.signatures_ok());
        assert_eq!(b.counts().rank_s_minus, 39);
    }

    #[test]
    fn budget_odd_extra_summands() {
        let cd = curve_data(1, 5).unwrap();
        let even_like = BudgetCounts::new(&cd, Parity::Even);
        let b = budget(&cd, Parity::Odd).unwrap();
        let extra_minus = b.sigma_minus.rank() as i64 - even_like.rank_sigma_minus;
        let extra_plus = b.sigma_plus_definite_rank - even_like.sigma_plus_definite_rank;
        assert_eq!((extra_minus, extra_plus), (7, 5));
        assert_eq!(extra_minus + extra_plus, 2 * (5 - 1) + 1 + 3);
        assert_eq!(b.ell3_s, cd.c as usize);
        assert!(b.signatures_ok());
        assert!(budget(&cd, Parity::Even).is_err());
    }

    #[test]
    fn fraction_strings() {
        assert_eq!(fraction::format(&q(4, 3)), "4/3");
        assert_eq!(fraction::format(&q(-1, 1)), "-1");
        assert_eq!(fraction::parse("-1/3").unwrap(), q(-1, 3));
        assert_eq!(fraction::parse("6/2").unwrap(), q(3, 1));
        assert!(fraction::parse("1/0").is_err());
    }

    #[test]
    fn records() {
        let r = report(1, 4).unwrap();
        assert_eq!((r.c, r.n), (8, 0));
        assert_eq!(r.slack_even, Some(q(-1, 1)));
        assert_eq!(r.slack_odd, None);
        let r = report(0, 2).unwrap();
        assert_eq!(r.n, -1);
        assert_eq!(r.slack_even, None);
        let s = structured_report(3, 6).unwrap();
        assert_eq!(s.ell3_s, Some(16));
        assert_eq!(s.ell3_kernel_bound, Some(4));
        let json = serde_json::to_string(&s).unwrap();
        assert!(json.contains("\"G0\":\"3\""), "{json}");
        let back: StructuredRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
    }
}
