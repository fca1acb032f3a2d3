//! Parameter regions under which each target topology uniquely emerges,
//! as executable interval predicates: membership tests, L/M/H level
//! sampling inside a region, controlled deviation beyond a region bound,
//! and per-entry-index parameter schedules.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::topology::TopologyTarget;
use crate::utility::{BenefitFn, UtilityParams};

/// Comparison slack for region membership and pinned-value tests; far above
/// accumulated rounding noise, far below any meaningful parameter move.
pub const PARAM_EPS: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum ConditionsError {
    #[error("no condition region is defined for target {0}")]
    UnsupportedTarget(TopologyTarget),
    #[error("the 2-star region with free gamma needs sigma, the bound on how many nodes may enter")]
    MissingSigma,
    #[error("region is empty at gamma = {gamma}")]
    EmptyRegion { gamma: f64 },
    #[error("parameter {parameter} has no {side} bound to deviate beyond")]
    DeviationUndefined {
        parameter: &'static str,
        side: &'static str,
    },
    #[error("invalid benefit sequence: {0}")]
    BadBenefit(String),
}

/// One-dimensional interval with endpoint openness. `binding` marks bounds
/// stated by the topology's conditions (the ones a deviation can violate),
/// as opposed to implicit non-negativity or `gamma < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
    pub hi_closed: bool,
    pub lo_binding: bool,
    pub hi_binding: bool,
}

impl Interval {
    fn new(lo: f64, hi: f64, lo_closed: bool, hi_closed: bool) -> Self {
        Interval {
            lo,
            hi,
            lo_closed,
            hi_closed,
            lo_binding: true,
            hi_binding: true,
        }
    }

    fn free_lo(mut self) -> Self {
        self.lo_binding = false;
        self
    }

    fn free_hi(mut self) -> Self {
        self.hi_binding = false;
        self
    }

    pub fn singleton(x: f64) -> Self {
        Interval::new(x, x, true, true)
    }

    pub fn is_singleton(&self) -> bool {
        self.lo == self.hi && self.lo_closed && self.hi_closed
    }

    pub fn is_empty(&self) -> bool {
        if self.is_singleton() {
            return false;
        }
        self.hi - self.lo <= PARAM_EPS
    }

    pub fn length(&self) -> f64 {
        (self.hi - self.lo).max(0.0)
    }

    pub fn contains(&self, x: f64) -> bool {
        let above = if self.lo_closed {
            x >= self.lo - PARAM_EPS
        } else {
            x > self.lo + PARAM_EPS
        };
        let below = if self.hi_closed {
            x <= self.hi + PARAM_EPS
        } else {
            x < self.hi - PARAM_EPS
        };
        above && below
    }

    /// Point at the given fraction of the interval length from the lower end.
    pub fn at_fraction(&self, fraction: f64) -> f64 {
        self.lo + fraction * self.length()
    }
}

/// L/M/H labels: around the lower 10%, the 50% mark, and the higher 10%
/// of a parameter's range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Level {
    L,
    M,
    H,
}

impl Level {
    pub fn fraction(&self) -> f64 {
        match self {
            Level::L => 0.1,
            Level::M => 0.5,
            Level::H => 0.9,
        }
    }
}

impl std::fmt::Display for Level {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Level::L => write!(f, "L"),
            Level::M => write!(f, "M"),
            Level::H => write!(f, "H"),
        }
    }
}

impl std::str::FromStr for Level {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "L" | "l" | "low" => Ok(Level::L),
            "M" | "m" | "moderate" => Ok(Level::M),
            "H" | "h" | "high" => Ok(Level::H),
            other => Err(format!("unknown level {other:?} (expected L, M, or H)")),
        }
    }
}

/// A level per free parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelPoint {
    pub gamma: Level,
    pub c: Level,
    pub c0: Level,
}

impl LevelPoint {
    pub fn moderate() -> Self {
        LevelPoint {
            gamma: Level::M,
            c: Level::M,
            c0: Level::M,
        }
    }

    pub fn label(&self) -> String {
        format!("g{}-c{}-c0{}", self.gamma, self.c, self.c0)
    }
}

/// Which cost parameter a deviation pushes outside the region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeviationParameter {
    C,
    C0,
}

impl std::fmt::Display for DeviationParameter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DeviationParameter::C => write!(f, "c"),
            DeviationParameter::C0 => write!(f, "c0"),
        }
    }
}

/// Deviation side: negative goes below the lower bound, positive above the
/// upper bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeviationSign {
    Negative,
    Positive,
}

impl std::fmt::Display for DeviationSign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DeviationSign::Negative => write!(f, "negative"),
            DeviationSign::Positive => write!(f, "positive"),
        }
    }
}

enum RegionKind {
    Star,
    DiameterAtMost(u32),
    Complete,
    Turan,
    TwoStarBounded { lambda: f64 },
    TwoStarRentFree,
    KStar,
}

/// Sufficient-condition region for one target: a gamma range plus c and c0
/// ranges that may depend on the chosen gamma.
pub struct ConditionRegion {
    pub target: TopologyTarget,
    pub benefit: BenefitFn,
    pub sigma: Option<usize>,
    kind: RegionKind,
    b: [f64; 4],
}

/// Region of parameters under which `target` uniquely emerges. For the
/// 2-star, passing `sigma` selects the bounded-population conditions with
/// free gamma; omitting it selects the rent-free (gamma = 0) variant.
pub fn region_for(
    target: TopologyTarget,
    benefit: &BenefitFn,
    sigma: Option<usize>,
) -> Result<ConditionRegion, ConditionsError> {
    benefit
        .validate()
        .map_err(|e| ConditionsError::BadBenefit(e.to_string()))?;
    let b = [
        benefit.at(1),
        benefit.at(2),
        benefit.at(3),
        benefit.at(4),
    ];
    if b[3] <= 0.0 {
        return Err(ConditionsError::BadBenefit(
            "benefits through distance four must be positive".into(),
        ));
    }
    let kind = match target {
        TopologyTarget::Star => RegionKind::Star,
        TopologyTarget::Complete => RegionKind::Complete,
        TopologyTarget::DiameterAtMost(d) => RegionKind::DiameterAtMost(d),
        TopologyTarget::BipartiteTuran => RegionKind::Turan,
        TopologyTarget::TwoStar => match sigma {
            Some(sigma) => {
                let half = (sigma as f64 / 2.0 - 1.0).ceil();
                RegionKind::TwoStarBounded {
                    lambda: half * (2.0 * b[1] - b[2]),
                }
            }
            None => RegionKind::TwoStarRentFree,
        },
        TopologyTarget::KStar(k) => {
            TopologyTarget::KStar(k)
                .validate()
                .map_err(|_| ConditionsError::UnsupportedTarget(target))?;
            RegionKind::KStar
        }
    };
    Ok(ConditionRegion {
        target,
        benefit: benefit.clone(),
        sigma,
        kind,
        b,
    })
}

impl ConditionRegion {
    fn b1(&self) -> f64 {
        self.b[0]
    }
    fn b2(&self) -> f64 {
        self.b[1]
    }
    fn b3(&self) -> f64 {
        self.b[2]
    }
    fn b4(&self) -> f64 {
        self.b[3]
    }

    /// Feasible range of the rent fraction.
    pub fn gamma_range(&self) -> Interval {
        let (b2, b3) = (self.b2(), self.b3());
        match &self.kind {
            RegionKind::Star | RegionKind::Complete | RegionKind::DiameterAtMost(_) => {
                Interval::new(0.0, 1.0, true, false).free_lo().free_hi()
            }
            RegionKind::Turan => {
                Interval::new(0.0, (b2 - b3) / (3.0 * b2 - b3), true, false).free_lo()
            }
            RegionKind::TwoStarBounded { lambda } => {
                let branch_split = (b2 - b3) / (lambda - b3);
                let cap_a = b3 / (b2 + b3);
                let cap_b = b2 / (lambda + b2);
                let hi = if branch_split >= cap_a {
                    cap_a
                } else {
                    branch_split.max(cap_a.min(cap_b))
                };
                Interval::new(0.0, hi, true, false).free_lo()
            }
            RegionKind::TwoStarRentFree | RegionKind::KStar => Interval::singleton(0.0),
        }
    }

    /// Range of the link cost `c` at the given rent fraction.
    pub fn c_range(&self, gamma: f64) -> Interval {
        let (b1, b2, b3) = (self.b1(), self.b2(), self.b3());
        match &self.kind {
            RegionKind::Star => Interval::new(b1 - b2 + gamma * b2, b1, true, false),
            RegionKind::Complete => Interval::new(0.0, b1 - b2, true, false).free_lo(),
            RegionKind::DiameterAtMost(d) => {
                Interval::new(0.0, b1 - self.benefit.at(d + 1), true, false).free_lo()
            }
            RegionKind::Turan => {
                Interval::new(b1 - b2 + gamma * (3.0 * b2 - b3), b1 - b3, false, false)
            }
            RegionKind::TwoStarBounded { lambda } => {
                let branch_split = (b2 - b3) / (lambda - b3);
                let lo = if gamma < branch_split {
                    b1 - b3 + gamma * (b2 + b3)
                } else {
                    b1 - b2 + gamma * b2 + gamma * lambda
                };
                Interval::new(lo, b1, true, false)
            }
            RegionKind::TwoStarRentFree => Interval::new(b1 - b3, b1, true, false),
            RegionKind::KStar => Interval::singleton(b1 - b3),
        }
    }

    /// Range of the entry factor `c0` at the given rent fraction.
    pub fn c0_range(&self, gamma: f64) -> Interval {
        let (b2, b3, b4) = (self.b2(), self.b3(), self.b4());
        let keep = 1.0 - gamma;
        match &self.kind {
            RegionKind::Star => Interval::new(0.0, keep * (b2 - b3), false, false).free_lo(),
            RegionKind::Complete | RegionKind::DiameterAtMost(_) => {
                Interval::new(0.0, keep * b2, false, true).free_lo()
            }
            RegionKind::Turan => Interval::new(keep * (b2 - b3), keep * b2, false, true),
            RegionKind::TwoStarBounded { .. } => {
                Interval::new(keep * (b2 - b3), keep * (b2 - b4), false, false)
            }
            RegionKind::TwoStarRentFree | RegionKind::KStar => {
                Interval::new(b2 - b3, b2 - b4, false, false)
            }
        }
    }

    pub fn feasible_at(&self, gamma: f64) -> bool {
        self.gamma_range().contains(gamma)
            && !self.c_range(gamma).is_empty()
            && !self.c0_range(gamma).is_empty()
    }

    /// Parameters at the requested levels of each range; pinned parameters
    /// come back exactly.
    pub fn sample_levels(&self, levels: LevelPoint) -> Result<UtilityParams, ConditionsError> {
        let gr = self.gamma_range();
        let gamma = if gr.is_singleton() {
            gr.lo
        } else {
            gr.at_fraction(levels.gamma.fraction())
        };
        if !self.feasible_at(gamma) {
            return Err(ConditionsError::EmptyRegion { gamma });
        }
        let cr = self.c_range(gamma);
        let c = if cr.is_singleton() {
            cr.lo
        } else {
            cr.at_fraction(levels.c.fraction())
        };
        let c0r = self.c0_range(gamma);
        let c0 = if c0r.is_singleton() {
            c0r.lo
        } else {
            c0r.at_fraction(levels.c0.fraction())
        };
        Ok(UtilityParams::new(self.benefit.clone(), c, c0, gamma))
    }

    /// Moves one cost parameter just past the violated region bound:
    /// `fraction` of the range length beyond it, or an absolute 0.01 for
    /// pinned (singleton) ranges.
    pub fn deviate(
        &self,
        params: &UtilityParams,
        which: DeviationParameter,
        sign: DeviationSign,
        fraction: f64,
    ) -> Result<UtilityParams, ConditionsError> {
        let gamma = params.rent_fraction;
        let (range, name) = match which {
            DeviationParameter::C => (self.c_range(gamma), "c"),
            DeviationParameter::C0 => (self.c0_range(gamma), "c0"),
        };
        let value = if range.is_singleton() {
            match sign {
                DeviationSign::Negative => range.lo - 0.01,
                DeviationSign::Positive => range.lo + 0.01,
            }
        } else {
            match sign {
                DeviationSign::Negative => {
                    if !range.lo_binding {
                        return Err(ConditionsError::DeviationUndefined {
                            parameter: name,
                            side: "lower",
                        });
                    }
                    range.lo - fraction * range.length()
                }
                DeviationSign::Positive => {
                    if !range.hi_binding {
                        return Err(ConditionsError::DeviationUndefined {
                            parameter: name,
                            side: "upper",
                        });
                    }
                    range.hi + fraction * range.length()
                }
            }
        };
        let mut out = params.clone();
        match which {
            DeviationParameter::C => out.link_cost = value,
            DeviationParameter::C0 => out.entry_factor = value,
        }
        Ok(out)
    }

    /// Endpoint-aware membership test.
    pub fn satisfies(&self, params: &UtilityParams) -> bool {
        let gamma = params.rent_fraction;
        self.gamma_range().contains(gamma)
            && self.c_range(gamma).contains(params.link_cost)
            && self.c0_range(gamma).contains(params.entry_factor)
    }

    /// Report evaluated at a concrete gamma, for the CLI.
    pub fn report(&self, gamma: f64) -> RegionReport {
        RegionReport {
            target: self.target.to_string(),
            gamma: self.gamma_range().into(),
            c: self.c_range(gamma).into(),
            c0: self.c0_range(gamma).into(),
            feasible: self.feasible_at(gamma),
        }
    }
}

/// Necessary conditions for the whole k-star family (any k >= 3) to be
/// pairwise stable: zero rents and link cost pinned at `b1 - b3`.
pub fn kstar_necessary(params: &UtilityParams, benefit: &BenefitFn) -> bool {
    params.rent_fraction.abs() <= PARAM_EPS
        && (params.link_cost - (benefit.at(1) - benefit.at(3))).abs() <= PARAM_EPS
}

/// Interval rendered as `[lo, hi, "[)"]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IntervalReport(pub f64, pub f64, pub String);

impl From<Interval> for IntervalReport {
    fn from(i: Interval) -> Self {
        let open_close = format!(
            "{}{}",
            if i.lo_closed { "[" } else { "(" },
            if i.hi_closed { "]" } else { ")" }
        );
        IntervalReport(i.lo, i.hi, open_close)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RegionReport {
    pub target: String,
    pub gamma: IntervalReport,
    pub c: IntervalReport,
    pub c0: IntervalReport,
    pub feasible: bool,
}

/// Per-entry-index utility parameters: a base setting plus overrides that
/// take effect from their entry index onward.
#[derive(Debug, Clone)]
pub struct ConditionSchedule {
    base: UtilityParams,
    overrides: Vec<(u32, UtilityParams)>,
}

impl ConditionSchedule {
    pub fn constant(base: UtilityParams) -> Self {
        ConditionSchedule {
            base,
            overrides: Vec::new(),
        }
    }

    pub fn with_overrides(base: UtilityParams, mut overrides: Vec<(u32, UtilityParams)>) -> Self {
        overrides.sort_by_key(|(idx, _)| *idx);
        ConditionSchedule { base, overrides }
    }

    /// Parameters in force for the given entry index: the latest override at
    /// or before it, else the base.
    pub fn at(&self, entry_index: u32) -> &UtilityParams {
        self.overrides
            .iter()
            .rev()
            .find(|(idx, _)| *idx <= entry_index)
            .map(|(_, p)| p)
            .unwrap_or(&self.base)
    }

    /// Whether any override begins strictly after the given entry index
    /// (a node that stayed out retries when this is true).
    pub fn changes_after(&self, entry_index: u32) -> bool {
        self.overrides.iter().any(|(idx, _)| *idx > entry_index)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn delta8() -> BenefitFn {
        BenefitFn::geometric(0.8)
    }

    #[test]
    fn star_region_at_gamma_zero() {
        let r = region_for(TopologyTarget::Star, &delta8(), None).unwrap();
        let c = r.c_range(0.0);
        assert_relative_eq!(c.lo, 0.16, epsilon = 1e-9);
        assert_relative_eq!(c.hi, 0.8, epsilon = 1e-12);
        assert!(c.lo_closed && !c.hi_closed);
        let c0 = r.c0_range(0.0);
        assert_relative_eq!(c0.hi, 0.128, epsilon = 1e-9);
        assert!(!c0.lo_closed && !c0.hi_closed);
        assert!(!c0.lo_binding);
    }

    #[test]
    fn complete_region() {
        let r = region_for(TopologyTarget::Complete, &delta8(), None).unwrap();
        assert_relative_eq!(r.c_range(0.0).hi, 0.16, epsilon = 1e-9);
        let c0 = r.c0_range(0.25);
        assert_relative_eq!(c0.hi, 0.75 * 0.64, epsilon = 1e-9);
        assert!(c0.hi_closed);
    }

    #[test]
    fn kstar_region_is_pinned() {
        let r = region_for(TopologyTarget::KStar(3), &delta8(), None).unwrap();
        assert!(r.gamma_range().is_singleton());
        let c = r.c_range(0.0);
        assert!(c.is_singleton());
        assert_relative_eq!(c.lo, 0.288, epsilon = 1e-9);
        let c0 = r.c0_range(0.0);
        assert_relative_eq!(c0.lo, 0.128, epsilon = 1e-9);
        assert_relative_eq!(c0.hi, 0.2304, epsilon = 1e-9);
    }

    #[test]
    fn satisfies_respects_endpoints() {
        let r = region_for(TopologyTarget::Star, &delta8(), None).unwrap();
        let p = |c: f64| UtilityParams::geometric(0.8, c, 0.05, 0.0);
        assert!(r.satisfies(&p(0.16)));
        assert!(!r.satisfies(&p(0.8)));
        assert!(r.satisfies(&p(0.5)));
        assert!(!r.satisfies(&p(0.1)));
    }

    #[test]
    fn turan_gamma_bound() {
        let r = region_for(TopologyTarget::BipartiteTuran, &delta8(), None).unwrap();
        let g = r.gamma_range();
        assert_relative_eq!(g.hi, 0.128 / 1.408, epsilon = 1e-9);
        assert!(!r.feasible_at(0.2));
        assert!(r.feasible_at(0.05));
    }

    #[test]
    fn level_sampling() {
        let r = region_for(TopologyTarget::Star, &delta8(), None).unwrap();
        let m = r
            .sample_levels(LevelPoint {
                gamma: Level::L,
                c: Level::M,
                c0: Level::M,
            })
            .unwrap();
        assert_relative_eq!(m.rent_fraction, 0.1, epsilon = 1e-12);

        // Pinned-gamma view of the derived examples: gamma = 0.
        let rent_free = region_for(TopologyTarget::TwoStar, &delta8(), None).unwrap();
        let p = rent_free.sample_levels(LevelPoint::moderate()).unwrap();
        assert_eq!(p.rent_fraction, 0.0);

        let kstar = region_for(TopologyTarget::KStar(3), &delta8(), None).unwrap();
        for level in [Level::L, Level::M, Level::H] {
            let p = kstar
                .sample_levels(LevelPoint {
                    gamma: Level::M,
                    c: level,
                    c0: Level::M,
                })
                .unwrap();
            assert_relative_eq!(p.link_cost, 0.288, epsilon = 1e-9);
        }
    }

    #[test]
    fn star_levels_at_gamma_zero_match_arithmetic() {
        let r = region_for(TopologyTarget::Star, &delta8(), None).unwrap();
        let c = r.c_range(0.0);
        assert_relative_eq!(c.at_fraction(0.5), 0.48, epsilon = 1e-9);
        assert_relative_eq!(c.at_fraction(0.1), 0.224, epsilon = 1e-9);
    }

    #[test]
    fn deviation_arithmetic() {
        let star = region_for(TopologyTarget::Star, &delta8(), None).unwrap();
        let base = UtilityParams::geometric(0.8, 0.48, 0.064, 0.0);
        let dev = star
            .deviate(&base, DeviationParameter::C, DeviationSign::Negative, 0.02)
            .unwrap();
        assert_relative_eq!(dev.link_cost, 0.1472, epsilon = 1e-9);

        let kstar = region_for(TopologyTarget::KStar(3), &delta8(), None).unwrap();
        let kbase = kstar.sample_levels(LevelPoint::moderate()).unwrap();
        let kdev = kstar
            .deviate(&kbase, DeviationParameter::C, DeviationSign::Positive, 0.02)
            .unwrap();
        assert_relative_eq!(kdev.link_cost, 0.298, epsilon = 1e-9);

        let complete = region_for(TopologyTarget::Complete, &delta8(), None).unwrap();
        let cbase = complete.sample_levels(LevelPoint::moderate()).unwrap();
        let err = complete.deviate(&cbase, DeviationParameter::C, DeviationSign::Negative, 0.02);
        assert!(matches!(
            err,
            Err(ConditionsError::DeviationUndefined { .. })
        ));
    }

    #[test]
    fn kstar_necessary_is_pinned_equality() {
        let b = delta8();
        let ok = UtilityParams::geometric(0.8, 0.288, 0.2, 0.0);
        assert!(kstar_necessary(&ok, &b));
        let wrong_gamma = UtilityParams::geometric(0.8, 0.288, 0.2, 0.01);
        assert!(!kstar_necessary(&wrong_gamma, &b));
        let wrong_cost = UtilityParams::geometric(0.8, 0.287, 0.2, 0.0);
        assert!(!kstar_necessary(&wrong_cost, &b));
    }

    #[test]
    fn schedule_lookup() {
        let base = UtilityParams::geometric(0.8, 0.48, 0.064, 0.0);
        let mut dev = base.clone();
        dev.link_cost = 0.1472;
        let schedule =
            ConditionSchedule::with_overrides(base.clone(), vec![(8, base.clone()), (7, dev)]);
        assert_eq!(schedule.at(2).link_cost, 0.48);
        assert_relative_eq!(schedule.at(7).link_cost, 0.1472);
        assert_eq!(schedule.at(8).link_cost, 0.48);
        assert_eq!(schedule.at(20).link_cost, 0.48);
        assert!(schedule.changes_after(7));
        assert!(!schedule.changes_after(8));
    }

    #[test]
    fn two_star_bounded_region_branches() {
        let b = delta8();
        let r = region_for(TopologyTarget::TwoStar, &b, Some(20)).unwrap();
        // sigma = 20: lambda = ceil(9) * (2 b2 - b3) = 9 * 0.768 = 6.912.
        let g = r.gamma_range();
        assert!(g.hi > 0.0 && g.hi < 0.2);
        let c0 = r.c0_range(0.0);
        assert_relative_eq!(c0.lo, 0.128, epsilon = 1e-9);
        assert_relative_eq!(c0.hi, 0.2304, epsilon = 1e-9);
        // Branch (i) applies at small gamma.
        let c = r.c_range(0.01);
        assert_relative_eq!(c.lo, 0.8 - 0.512 + 0.01 * (0.64 + 0.512), epsilon = 1e-6);
    }
}
