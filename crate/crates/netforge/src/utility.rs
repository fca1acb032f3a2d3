//! Per-node payoff evaluation: direct benefits net of link costs, decayed
//! indirect benefits, intermediation rents paid to essential nodes,
//! bridging benefits collected by essential nodes, and the one-time entry
//! fee proportional to the first target's degree.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{GraphError, Network};

#[derive(Debug, Error)]
pub enum UtilityError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("entrant {entrant} must have exactly one neighbor, its entry target {target}")]
    InvalidEntryContext { entrant: usize, target: usize },
    #[error("invalid link alteration for node {actor}: {reason}")]
    InvalidAlteration { actor: usize, reason: String },
    #[error("invalid utility parameters: {0}")]
    InvalidParams(String),
}

/// Distance-indexed benefit sequence; must decay strictly with distance.
#[derive(Debug, Clone, PartialEq)]
pub enum BenefitFn {
    /// `b_i = delta^i` with `delta` in (0, 1).
    Geometric { delta: f64 },
    /// Hand-set `b_1, b_2, ...`; zero beyond the end of the table.
    Table { values: Vec<f64> },
}

impl BenefitFn {
    pub fn geometric(delta: f64) -> Self {
        BenefitFn::Geometric { delta }
    }

    /// Benefit from a node at the given finite distance (>= 1).
    pub fn at(&self, distance: u32) -> f64 {
        debug_assert!(distance >= 1);
        match self {
            BenefitFn::Geometric { delta } => delta.powi(distance as i32),
            BenefitFn::Table { values } => {
                values.get(distance as usize - 1).copied().unwrap_or(0.0)
            }
        }
    }

    pub fn validate(&self) -> Result<(), UtilityError> {
        match self {
            BenefitFn::Geometric { delta } => {
                if !(*delta > 0.0 && *delta < 1.0) {
                    return Err(UtilityError::InvalidParams(format!(
                        "geometric decay factor must lie in (0, 1), got {delta}"
                    )));
                }
            }
            BenefitFn::Table { values } => {
                if values.is_empty() {
                    return Err(UtilityError::InvalidParams(
                        "benefit table must not be empty".into(),
                    ));
                }
                for w in values.windows(2) {
                    if !(w[1] < w[0]) {
                        return Err(UtilityError::InvalidParams(format!(
                            "benefit table must decay strictly, got {:?}",
                            values
                        )));
                    }
                }
                if values.iter().any(|b| *b <= 0.0) {
                    return Err(UtilityError::InvalidParams(
                        "benefit table entries must be positive".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Parameters of the payoff function.
#[derive(Debug, Clone, PartialEq)]
pub struct UtilityParams {
    pub benefit: BenefitFn,
    /// Cost per maintained link (`c`).
    pub link_cost: f64,
    /// Network entry factor (`c0`): fee per unit of the entry target's degree.
    pub entry_factor: f64,
    /// Fraction of indirect benefits paid as rent to essential nodes (`gamma`).
    pub rent_fraction: f64,
}

impl UtilityParams {
    pub fn new(benefit: BenefitFn, link_cost: f64, entry_factor: f64, rent_fraction: f64) -> Self {
        UtilityParams {
            benefit,
            link_cost,
            entry_factor,
            rent_fraction,
        }
    }

    pub fn geometric(delta: f64, link_cost: f64, entry_factor: f64, rent_fraction: f64) -> Self {
        UtilityParams::new(BenefitFn::geometric(delta), link_cost, entry_factor, rent_fraction)
    }

    pub fn validate(&self) -> Result<(), UtilityError> {
        self.benefit.validate()?;
        if !(0.0..1.0).contains(&self.rent_fraction) {
            return Err(UtilityError::InvalidParams(format!(
                "rent fraction must lie in [0, 1), got {}",
                self.rent_fraction
            )));
        }
        if self.link_cost < 0.0 || self.entry_factor < 0.0 {
            return Err(UtilityError::InvalidParams(
                "link cost and entry factor must be non-negative".into(),
            ));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&ParamsJson::from(self)).expect("params serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, UtilityError> {
        let raw: ParamsJson = serde_json::from_str(text)
            .map_err(|e| UtilityError::InvalidParams(e.to_string()))?;
        let params = UtilityParams::try_from(raw)?;
        params.validate()?;
        Ok(params)
    }
}

/// Wire format: `{"delta": f | "b": [b1, b2, ...], "c": f, "c0": f, "gamma": f}`.
/// An explicit `b` list takes precedence over `delta`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ParamsJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    b: Option<Vec<f64>>,
    c: f64,
    c0: f64,
    gamma: f64,
}

impl From<&UtilityParams> for ParamsJson {
    fn from(p: &UtilityParams) -> Self {
        let (delta, b) = match &p.benefit {
            BenefitFn::Geometric { delta } => (Some(*delta), None),
            BenefitFn::Table { values } => (None, Some(values.clone())),
        };
        ParamsJson {
            delta,
            b,
            c: p.link_cost,
            c0: p.entry_factor,
            gamma: p.rent_fraction,
        }
    }
}

impl TryFrom<ParamsJson> for UtilityParams {
    type Error = UtilityError;

    fn try_from(raw: ParamsJson) -> Result<Self, UtilityError> {
        let benefit = match (raw.b, raw.delta) {
            (Some(values), _) => BenefitFn::Table { values },
            (None, Some(delta)) => BenefitFn::Geometric { delta },
            (None, None) => {
                return Err(UtilityError::InvalidParams(
                    "params need either \"delta\" or \"b\"".into(),
                ))
            }
        };
        Ok(UtilityParams::new(benefit, raw.c, raw.c0, raw.gamma))
    }
}

/// Marks `entrant` as a newly entering node whose first link goes to
/// `target`; the entry fee is charged against the target's degree before
/// that link is counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EntryContext {
    pub entrant: usize,
    pub target: usize,
}

/// One-link change relative to a fixed actor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinkAlteration {
    Add { peer: usize },
    Delete { peer: usize },
    Keep,
}

/// Additive decomposition of a node's payoff.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UtilityBreakdown {
    pub entry_fee: f64,
    pub direct: f64,
    pub indirect: f64,
    pub rents_paid: f64,
    pub bridging: f64,
}

impl UtilityBreakdown {
    pub fn total(&self) -> f64 {
        self.direct + self.indirect + self.bridging - self.rents_paid - self.entry_fee
    }
}

struct EssentialPair {
    y: u32,
    z: u32,
    members: Vec<u32>,
}

/// Distance table plus essential-node structure for one graph snapshot.
/// Queries against it are read-only, so one analysis serves every payoff
/// evaluation on the same graph.
pub struct NetworkAnalysis {
    n: usize,
    dist: Vec<i32>,
    degree: Vec<u32>,
    ess_pairs: Vec<EssentialPair>,
    ess_nonempty: Vec<bool>,
    has_essential: bool,
}

impl NetworkAnalysis {
    /// Full analysis: distances and essential sets for every pair.
    pub fn new(g: &Network) -> Self {
        Self::build(g, true)
    }

    /// Analysis specialized to the given parameters: when the rent fraction
    /// is zero the payoff does not depend on essential-node structure, so
    /// its computation is skipped.
    pub fn for_params(g: &Network, params: &UtilityParams) -> Self {
        Self::build(g, params.rent_fraction != 0.0)
    }

    fn build(g: &Network, with_essential: bool) -> Self {
        let n = g.node_count();
        let mut dist = vec![-1i32; n * n];
        for v in 0..n {
            let row = g.shortest_distances(v).expect("node in range");
            for (w, d) in row.into_iter().enumerate() {
                if let Some(d) = d {
                    dist[v * n + w] = d as i32;
                }
            }
        }
        let degree = (0..n).map(|v| g.neighbors(v).len() as u32).collect();
        let pair_count = n * (n - 1) / 2;
        let mut ess_nonempty = vec![false; pair_count];
        let mut ess_pairs = Vec::new();
        if with_essential {
            let mut members: Vec<Vec<u32>> = vec![Vec::new(); pair_count];
            let mut comp = vec![usize::MAX; n];
            for v in g.articulation_points() {
                // Label connected components of the graph with v removed.
                comp.iter_mut().for_each(|c| *c = usize::MAX);
                let mut label = 0;
                let mut queue = std::collections::VecDeque::new();
                for start in 0..n {
                    if start == v || comp[start] != usize::MAX {
                        continue;
                    }
                    comp[start] = label;
                    queue.push_back(start);
                    while let Some(u) = queue.pop_front() {
                        for &w in g.neighbors(u) {
                            if w != v && comp[w] == usize::MAX {
                                comp[w] = label;
                                queue.push_back(w);
                            }
                        }
                    }
                    label += 1;
                }
                for y in 0..n {
                    if y == v {
                        continue;
                    }
                    for z in (y + 1)..n {
                        if z == v || dist[y * n + z] < 0 || comp[y] == comp[z] {
                            continue;
                        }
                        members[pair_index(n, y, z)].push(v as u32);
                    }
                }
            }
            for y in 0..n {
                for z in (y + 1)..n {
                    let idx = pair_index(n, y, z);
                    if !members[idx].is_empty() {
                        ess_nonempty[idx] = true;
                        ess_pairs.push(EssentialPair {
                            y: y as u32,
                            z: z as u32,
                            members: std::mem::take(&mut members[idx]),
                        });
                    }
                }
            }
        }
        NetworkAnalysis {
            n,
            dist,
            degree,
            ess_pairs,
            ess_nonempty,
            has_essential: with_essential,
        }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn distance(&self, y: usize, z: usize) -> Option<u32> {
        let d = self.dist[y * self.n + z];
        (d >= 0).then_some(d as u32)
    }

    /// Payoff breakdown for node `j`. The caller guarantees that `j` is in
    /// range and, when an entry context names `j`, that its sole neighbor
    /// is the context target (`utility` checks both).
    pub fn breakdown(
        &self,
        params: &UtilityParams,
        j: usize,
        ctx: Option<EntryContext>,
    ) -> UtilityBreakdown {
        let n = self.n;
        let gamma = params.rent_fraction;
        debug_assert!(gamma == 0.0 || self.has_essential);
        let b1 = params.benefit.at(1);
        let direct = self.degree[j] as f64 * (b1 - params.link_cost);
        let mut indirect = 0.0;
        let mut rents_paid = 0.0;
        for w in 0..n {
            if w == j {
                continue;
            }
            let d = self.dist[j * n + w];
            if d > 1 {
                let b = params.benefit.at(d as u32);
                indirect += b;
                if gamma != 0.0 && self.ess_nonempty[pair_index(n, j.min(w), j.max(w))] {
                    rents_paid += gamma * b;
                }
            }
        }
        let mut bridging = 0.0;
        if gamma != 0.0 {
            let j32 = j as u32;
            for pair in &self.ess_pairs {
                if pair.members.contains(&j32) {
                    let d = self.dist[pair.y as usize * n + pair.z as usize];
                    bridging += (gamma / pair.members.len() as f64)
                        * 2.0
                        * params.benefit.at(d as u32);
                }
            }
        }
        let mut entry_fee = 0.0;
        if let Some(ctx) = ctx {
            if ctx.entrant == j {
                // Degree of the target before the entrant's link is counted.
                entry_fee = params.entry_factor * (self.degree[ctx.target].saturating_sub(1)) as f64;
            }
        }
        UtilityBreakdown {
            entry_fee,
            direct,
            indirect,
            rents_paid,
            bridging,
        }
    }

    pub fn utility(&self, params: &UtilityParams, j: usize, ctx: Option<EntryContext>) -> f64 {
        self.breakdown(params, j, ctx).total()
    }
}

fn pair_index(n: usize, y: usize, z: usize) -> usize {
    debug_assert!(y < z && z < n);
    y * (2 * n - y - 1) / 2 + (z - y - 1)
}

fn check_entry_context(g: &Network, ctx: Option<EntryContext>) -> Result<(), UtilityError> {
    if let Some(ctx) = ctx {
        if !g.contains(ctx.entrant) {
            return Err(GraphError::UnknownNode(ctx.entrant).into());
        }
        if !g.contains(ctx.target) {
            return Err(GraphError::UnknownNode(ctx.target).into());
        }
        if g.neighbors(ctx.entrant) != [ctx.target] {
            return Err(UtilityError::InvalidEntryContext {
                entrant: ctx.entrant,
                target: ctx.target,
            });
        }
    }
    Ok(())
}

/// Payoff of node `j` in `g`. A node outside any network has payoff zero;
/// this evaluates the in-network side of that comparison.
pub fn utility(
    g: &Network,
    j: usize,
    params: &UtilityParams,
    ctx: Option<EntryContext>,
) -> Result<f64, UtilityError> {
    Ok(utility_breakdown(g, j, params, ctx)?.total())
}

pub fn utility_breakdown(
    g: &Network,
    j: usize,
    params: &UtilityParams,
    ctx: Option<EntryContext>,
) -> Result<UtilityBreakdown, UtilityError> {
    if !g.contains(j) {
        return Err(GraphError::UnknownNode(j).into());
    }
    check_entry_context(g, ctx)?;
    let analysis = NetworkAnalysis::for_params(g, params);
    Ok(analysis.breakdown(params, j, ctx))
}

/// Change in `j`'s payoff from applying a single link alteration.
pub fn utility_delta(
    g: &Network,
    j: usize,
    alteration: LinkAlteration,
    params: &UtilityParams,
    ctx: Option<EntryContext>,
) -> Result<f64, UtilityError> {
    if !g.contains(j) {
        return Err(GraphError::UnknownNode(j).into());
    }
    let mut altered = g.clone();
    match alteration {
        LinkAlteration::Keep => return Ok(0.0),
        LinkAlteration::Add { peer } => {
            altered
                .add_edge(j, peer)
                .map_err(|e| UtilityError::InvalidAlteration {
                    actor: j,
                    reason: e.to_string(),
                })?;
        }
        LinkAlteration::Delete { peer } => {
            altered
                .remove_edge(j, peer)
                .map_err(|e| UtilityError::InvalidAlteration {
                    actor: j,
                    reason: e.to_string(),
                })?;
        }
    }
    Ok(utility(&altered, j, params, ctx)? - utility(g, j, params, ctx)?)
}
