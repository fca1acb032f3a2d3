//! Target topology families: exact recognizers, canonical instances, and
//! the clique-plus-pendants base graph that seeds k-star formation.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Network;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TopologyError {
    #[error("k-star requires k >= 3, got {0} (use TwoStar for k = 2)")]
    InvalidK(usize),
    #[error("diameter bound must be >= 1")]
    InvalidDiameter,
    #[error("{target} has no canonical instance on {n} nodes")]
    IncompatibleSize { target: String, n: usize },
    #[error("unknown topology target {0:?}")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TopologyTarget {
    Star,
    Complete,
    BipartiteTuran,
    TwoStar,
    KStar(usize),
    DiameterAtMost(u32),
}

impl TopologyTarget {
    pub fn validate(&self) -> Result<(), TopologyError> {
        match *self {
            TopologyTarget::KStar(k) if k < 3 => Err(TopologyError::InvalidK(k)),
            TopologyTarget::DiameterAtMost(d) if d < 1 => Err(TopologyError::InvalidDiameter),
            _ => Ok(()),
        }
    }

    /// Number of hub nodes for the interconnected-centers families.
    pub fn center_count(&self) -> Option<usize> {
        match *self {
            TopologyTarget::TwoStar => Some(2),
            TopologyTarget::KStar(k) => Some(k),
            _ => None,
        }
    }
}

impl fmt::Display for TopologyTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            TopologyTarget::Star => write!(f, "star"),
            TopologyTarget::Complete => write!(f, "complete"),
            TopologyTarget::BipartiteTuran => write!(f, "turan"),
            TopologyTarget::TwoStar => write!(f, "2star"),
            TopologyTarget::KStar(k) => write!(f, "kstar:{k}"),
            TopologyTarget::DiameterAtMost(d) => write!(f, "diam:{d}"),
        }
    }
}

impl FromStr for TopologyTarget {
    type Err = TopologyError;

    fn from_str(s: &str) -> Result<Self, TopologyError> {
        let target = match s {
            "star" => TopologyTarget::Star,
            "complete" => TopologyTarget::Complete,
            "turan" => TopologyTarget::BipartiteTuran,
            "2star" => TopologyTarget::TwoStar,
            other => {
                if let Some(k) = other.strip_prefix("kstar:") {
                    let k: usize = k.parse().map_err(|_| TopologyError::Parse(s.into()))?;
                    TopologyTarget::KStar(k)
                } else if let Some(d) = other.strip_prefix("diam:") {
                    let d: u32 = d.parse().map_err(|_| TopologyError::Parse(s.into()))?;
                    TopologyTarget::DiameterAtMost(d)
                } else {
                    return Err(TopologyError::Parse(s.into()));
                }
            }
        };
        target.validate()?;
        Ok(target)
    }
}

/// Exact membership test for the target family.
pub fn recognize(g: &Network, target: TopologyTarget) -> bool {
    let n = g.node_count();
    if n == 0 {
        return false;
    }
    match target {
        TopologyTarget::Star => is_star(g),
        TopologyTarget::Complete => g.edge_count() == n * (n - 1) / 2,
        TopologyTarget::BipartiteTuran => is_balanced_complete_bipartite(g),
        TopologyTarget::TwoStar => is_k_star(g, 2),
        TopologyTarget::KStar(k) => is_k_star(g, k),
        TopologyTarget::DiameterAtMost(d) => match g.diameter() {
            Some(diam) => diam <= d,
            None => false,
        },
    }
}

fn is_star(g: &Network) -> bool {
    let n = g.node_count();
    if n == 1 {
        return g.edge_count() == 0;
    }
    if g.edge_count() != n - 1 {
        return false;
    }
    let mut hubs = 0;
    for v in 0..n {
        match g.neighbors(v).len() {
            d if d == n - 1 => hubs += 1,
            1 => {}
            _ => return false,
        }
    }
    // n = 2 is a star with either endpoint as center.
    hubs >= 1
}

/// Splits a complete bipartite graph into its parts, if it is one.
/// Single nodes count as (1, 0).
pub fn complete_bipartite_parts(g: &Network) -> Option<(usize, usize)> {
    let n = g.node_count();
    if n == 0 {
        return None;
    }
    if n == 1 {
        return (g.edge_count() == 0).then_some((1, 0));
    }
    if !g.is_connected() {
        return None;
    }
    // Nodes in node 0's part are exactly its non-neighbors.
    let part_b: Vec<usize> = g.neighbors(0).to_vec();
    let part_a: Vec<usize> = (0..n).filter(|v| !g.has_edge(0, *v) && *v != 0).collect();
    let part_a: Vec<usize> = std::iter::once(0).chain(part_a).collect();
    if part_a.len() * part_b.len() != g.edge_count() {
        return None;
    }
    for &a in &part_a {
        for &b in &part_b {
            if !g.has_edge(a, b) {
                return None;
            }
        }
    }
    // Edge count already rules out intra-part edges.
    Some((part_a.len().max(part_b.len()), part_a.len().min(part_b.len())))
}

fn is_balanced_complete_bipartite(g: &Network) -> bool {
    let n = g.node_count();
    match complete_bipartite_parts(g) {
        Some((big, small)) => big == n.div_ceil(2) && small == n / 2,
        None => false,
    }
}

/// Centers form a clique, every other node hangs off exactly one center,
/// and per-center leaf counts differ by at most one. With no leaf nodes at
/// all (n <= 2k) the clique-plus-pendants shape is still required; for the
/// 2-star the one- and two-node prefixes of the skeleton count as well.
fn is_k_star(g: &Network, k: usize) -> bool {
    let n = g.node_count();
    if n <= 2 {
        // Skeleton prefixes: a lone node, or two interconnected centers.
        return if n == 1 {
            g.edge_count() == 0
        } else {
            g.edge_count() == 1
        };
    }
    if k == 2 && n == 3 {
        // Two centers plus the first leaf: a path.
        let degrees: Vec<usize> = (0..3).map(|v| g.neighbors(v).len()).collect();
        let mut sorted = degrees;
        sorted.sort_unstable();
        return g.edge_count() == 2 && sorted == [1, 1, 2];
    }
    if n < k {
        return false;
    }
    // The center clique plus one edge per leaf.
    let expected = k * (k - 1) / 2 + (n - k);
    if g.edge_count() != expected {
        return false;
    }
    // Leaves have degree 1; centers have degree k-1+m >= 2 for k >= 3, and
    // for k = 2 any center with degree 1 only occurs at n = 3 (handled above).
    let centers: Vec<usize> = (0..n).filter(|&v| g.neighbors(v).len() > 1).collect();
    if centers.len() != k {
        return false;
    }
    for (i, &a) in centers.iter().enumerate() {
        for &b in &centers[i + 1..] {
            if !g.has_edge(a, b) {
                return false;
            }
        }
    }
    let mut leaf_counts = vec![0usize; k];
    for v in 0..n {
        if centers.contains(&v) {
            continue;
        }
        let nb = g.neighbors(v);
        if nb.len() != 1 {
            return false;
        }
        match centers.iter().position(|&c| c == nb[0]) {
            Some(i) => leaf_counts[i] += 1,
            None => return false,
        }
    }
    let max = leaf_counts.iter().max().copied().unwrap_or(0);
    let min = leaf_counts.iter().min().copied().unwrap_or(0);
    max - min <= 1
}

/// Canonical family member on `n` nodes with lowest-id centers.
pub fn build_canonical(target: TopologyTarget, n: usize) -> Result<Network, TopologyError> {
    target.validate()?;
    let incompatible = || TopologyError::IncompatibleSize {
        target: target.to_string(),
        n,
    };
    if n == 0 {
        return Err(incompatible());
    }
    let mut g = Network::with_nodes(n);
    match target {
        TopologyTarget::Star => {
            for leaf in 1..n {
                g.add_edge(0, leaf).unwrap();
            }
        }
        TopologyTarget::Complete => {
            for u in 0..n {
                for v in (u + 1)..n {
                    g.add_edge(u, v).unwrap();
                }
            }
        }
        TopologyTarget::BipartiteTuran => {
            let big = n.div_ceil(2);
            for a in 0..big {
                for b in big..n {
                    g.add_edge(a, b).unwrap();
                }
            }
        }
        TopologyTarget::TwoStar => {
            if n >= 2 {
                g.add_edge(0, 1).unwrap();
            }
            for leaf in 2..n {
                g.add_edge(leaf, (leaf - 2) % 2).unwrap();
            }
        }
        TopologyTarget::KStar(k) => {
            if n < 2 * k {
                return Err(incompatible());
            }
            for u in 0..k {
                for v in (u + 1)..k {
                    g.add_edge(u, v).unwrap();
                }
            }
            for leaf in k..n {
                g.add_edge(leaf, (leaf - k) % k).unwrap();
            }
        }
        TopologyTarget::DiameterAtMost(_) => return Err(incompatible()),
    }
    Ok(g)
}

/// Base graph for k-star formation: a complete network on the k centers
/// with one leaf node connected to each center (2k nodes in total).
pub fn kstar_base_graph(k: usize) -> Result<Network, TopologyError> {
    if k < 3 {
        return Err(TopologyError::InvalidK(k));
    }
    build_canonical(TopologyTarget::KStar(k), 2 * k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Network {
        let mut g = Network::with_nodes(n);
        for v in 0..n {
            g.add_edge(v, (v + 1) % n).unwrap();
        }
        g
    }

    #[test]
    fn recognizes_four_star() {
        // Fig-style 4-star: 4-clique centers with balanced leaves.
        let g = build_canonical(TopologyTarget::KStar(4), 12).unwrap();
        assert!(recognize(&g, TopologyTarget::KStar(4)));
        assert!(!recognize(&g, TopologyTarget::KStar(3)));
        assert!(!recognize(&g, TopologyTarget::Star));
    }

    #[test]
    fn cycle_is_not_a_star() {
        assert!(!recognize(&cycle(5), TopologyTarget::Star));
    }

    #[test]
    fn complete_iff_diameter_one() {
        let g = build_canonical(TopologyTarget::Complete, 4).unwrap();
        assert!(recognize(&g, TopologyTarget::DiameterAtMost(1)));
        assert!(recognize(&g, TopologyTarget::Complete));
        let h = cycle(5);
        assert_eq!(
            recognize(&h, TopologyTarget::Complete),
            recognize(&h, TopologyTarget::DiameterAtMost(1))
        );
    }

    #[test]
    fn canonical_star_and_turan() {
        let g = build_canonical(TopologyTarget::Star, 5).unwrap();
        assert_eq!(g.neighbors(0).len(), 4);
        assert!(recognize(&g, TopologyTarget::Star));

        let t = build_canonical(TopologyTarget::BipartiteTuran, 5).unwrap();
        assert_eq!(t.edge_count(), 6); // K_{3,2}
        assert!(recognize(&t, TopologyTarget::BipartiteTuran));
        assert_eq!(complete_bipartite_parts(&t), Some((3, 2)));
    }

    #[test]
    fn base_graph_shape() {
        let g = kstar_base_graph(3).unwrap();
        assert_eq!(g.node_count(), 6);
        assert_eq!(g.edge_count(), 6);
        assert!(recognize(&g, TopologyTarget::KStar(3)));

        let g4 = kstar_base_graph(4).unwrap();
        assert_eq!(g4.node_count(), 8);
        assert_eq!(g4.edge_count(), 10);

        assert_eq!(kstar_base_graph(2), Err(TopologyError::InvalidK(2)));
    }

    #[test]
    fn canonical_members_recognized_up_to_50() {
        for n in 1..=50 {
            for target in [
                TopologyTarget::Star,
                TopologyTarget::Complete,
                TopologyTarget::BipartiteTuran,
                TopologyTarget::TwoStar,
            ] {
                let g = build_canonical(target, n).unwrap();
                assert!(recognize(&g, target), "{target} on {n} nodes");
            }
            for k in [3, 4, 5] {
                if n >= 2 * k {
                    let g = build_canonical(TopologyTarget::KStar(k), n).unwrap();
                    assert!(recognize(&g, TopologyTarget::KStar(k)), "kstar:{k} on {n}");
                }
            }
        }
    }

    #[test]
    fn star_is_not_two_star_beyond_three_nodes() {
        for n in 4..10 {
            let g = build_canonical(TopologyTarget::Star, n).unwrap();
            assert!(!recognize(&g, TopologyTarget::TwoStar), "n={n}");
        }
    }

    #[test]
    fn trivial_sizes_classify_into_multiple_families() {
        let mut pair = Network::with_nodes(2);
        pair.add_edge(0, 1).unwrap();
        for target in [
            TopologyTarget::Star,
            TopologyTarget::TwoStar,
            TopologyTarget::BipartiteTuran,
        ] {
            assert!(recognize(&pair, target));
        }
        let lone = Network::singleton();
        assert!(recognize(&lone, TopologyTarget::Star));
        assert!(recognize(&lone, TopologyTarget::TwoStar));
    }

    #[test]
    fn unbalanced_leaves_rejected() {
        // 3-star with leaf counts (2, 0, 1) violates the balance rule.
        let mut g = Network::with_nodes(6);
        g.add_edge(0, 1).unwrap();
        g.add_edge(0, 2).unwrap();
        g.add_edge(1, 2).unwrap();
        g.add_edge(0, 3).unwrap();
        g.add_edge(0, 4).unwrap();
        g.add_edge(2, 5).unwrap();
        assert!(!recognize(&g, TopologyTarget::KStar(3)));
    }

    #[test]
    fn parse_targets() {
        assert_eq!("star".parse::<TopologyTarget>().unwrap(), TopologyTarget::Star);
        assert_eq!(
            "kstar:4".parse::<TopologyTarget>().unwrap(),
            TopologyTarget::KStar(4)
        );
        assert_eq!(
            "diam:2".parse::<TopologyTarget>().unwrap(),
            TopologyTarget::DiameterAtMost(2)
        );
        assert_eq!(
            "2star".parse::<TopologyTarget>().unwrap(),
            TopologyTarget::TwoStar
        );
        assert!("kstar:2".parse::<TopologyTarget>().is_err());
        assert!("blob".parse::<TopologyTarget>().is_err());
    }
}
