//! Exact clustering and classification of p-adic data.
//!
//! Data are finite digit words in a p-adic field. Their dendrogram is built
//! by radix partition, and every quantity derived from it is computed
//! exactly, including the energies `Σ A_j p^(−j/e)` of ramified fields:
//!
//! * [`dendrogram`]: the tree of disks of a dataset, and trees realized by data.
//! * [`energy`]: cluster energies and the drop caused by splitting a vertex.
//! * [`clustering`]: greedy split search for verticial and quasi-verticial
//!   clusterings under a cluster budget.
//! * [`centers`]: members minimizing the summed distance to their cluster.
//! * [`pranking`]: how the order of energy drops depends on the prime.
//! * [`learning`]: classifiers that absorb new data one point at a time.
//!
//! ```
//! use padic_lbg::{FieldParams, PAdicValue, Dendrogram};
//!
//! let f = FieldParams::rational(3).unwrap();
//! let data = [0u64, 1, 3, 9].iter().map(|&n| PAdicValue::from_u64(n, f)).collect();
//! let d = Dendrogram::build(data).unwrap();
//! assert_eq!(d.tree().vertex_count(), 3);
//! ```

pub mod centers;
pub mod clustering;
pub mod dendrogram;
pub mod energy;
pub mod error;
pub mod fixtures;
pub mod learning;
pub mod padic;
pub mod partition;
pub mod poly;
pub mod pranking;
pub mod primes;
pub mod tree;

pub use centers::{brute_force_centers, center_candidates, epsilon_energy, CenterResult};
pub use clustering::{
    quasi_verticial_clustering, split_lbg, verticial_clustering, ClusteringFamily, ClusteringOptions, Diagnostic,
};
pub use dendrogram::{realize, synthesize, Dendrogram, ExtendedDendrogram};
pub use energy::{delta, EnergyDelta, EnergyValue, Threshold};
pub use error::{Error, Result};
pub use learning::{adaptive_learn, learn, verify_classifier, Classification, Classifier};
pub use padic::{FieldParams, NormValue, PAdicValue};
pub use partition::Clustering;
pub use poly::GradientPolynomial;
pub use pranking::{asymptotic_ranking, p_ranking, ranking_table, stabilization_bound, Ranking};
pub use tree::{AbstractDendrogram, Node, Tree, VertexId};
