//! Strategic network formation toolkit: a recursive entry-and-evolution
//! engine driven by myopic best responses under a generalized connections
//! payoff, parameter regions under which specific topologies (star,
//! complete, bipartite Turán, 2-star, k-star) uniquely emerge as pairwise
//! stable networks, exact graph edit distances to those targets, welfare
//! accounting, and a deviation-and-restoration experiment harness.

pub mod conditions;
pub mod dynamics;
pub mod experiments;
pub mod ged;
pub mod graph;
pub mod topology;
pub mod utility;
pub mod welfare;

pub use graph::{EssentialSet, GraphError, Network};
pub use topology::{build_canonical, kstar_base_graph, recognize, TopologyTarget};
pub use utility::{BenefitFn, EntryContext, UtilityParams};
