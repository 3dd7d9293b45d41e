//! Small named trees used throughout the tests, the guide and the CLI.

use num_rational::BigRational;

use crate::tree::{AbstractDendrogram, VertexId};

/// `a` far from the pair `b, c`.
pub const NESTED_TRIPLE: &str = "(0 L (1 L L))";

/// Three pairwise equidistant points (needs `q ≥ 3`).
pub const EQUIDISTANT_TRIPLE: &str = "(0 L L L)";

/// A tight pair `a, b` at level 4 next to a looser pair `c, d` at level 1.
pub const TIGHT_AND_LOOSE_PAIRS: &str = "(0 (4 L L) (1 L L))";

/// Pairs `a, b` (level 2) and `c, d` (level 1).
pub const TWO_PAIRS: &str = "(0 (2 L L) (1 L L))";

/// Thirteen points over four levels; the largest vertex has three children.
pub const THIRTEEN_POINTS: &str = "(0 (1 (2 L L) (2 L L)) (1 (2 L L) (2 (3 L L)(3 L L)(3 L L L))))";

pub fn parse(text: &str) -> AbstractDendrogram {
    AbstractDendrogram::parse(text).expect("fixture trees are well formed")
}

/// The four named vertices of [`THIRTEEN_POINTS`]: the root `a`, its
/// children `b` (four points) and `c` (nine points), and `d`, the
/// seven-point vertex below `c`.
pub const THIRTEEN_POINT_NAMES: [(char, VertexId); 4] =
    [('a', VertexId(0)), ('b', VertexId(1)), ('c', VertexId(4)), ('d', VertexId(6))];

/// A published table of energy drops for [`THIRTEEN_POINTS`] at
/// `p = 2, 3, 5`, as `(vertex, prime, numerator, denominator)`.
pub const PUBLISHED_THIRTEEN_POINT_DELTAS: [(char, u64, i64, i64); 12] = [
    ('a', 2, 11, 2),
    ('c', 2, 9, 4),
    ('b', 2, 2, 1),
    ('d', 2, 2, 1),
    ('a', 3, 22, 3),
    ('c', 3, 17, 9),
    ('b', 3, 7, 9),
    ('d', 3, 16, 27),
    ('a', 5, 44, 5),
    ('c', 5, 44, 25),
    ('b', 5, 13, 25),
    ('d', 5, 26, 225),
];

/// Reference cells keyed by vertex id.
pub fn published_thirteen_point_reference() -> Vec<ReferenceCell> {
    PUBLISHED_THIRTEEN_POINT_DELTAS
        .iter()
        .map(|&(name, prime, n, d)| {
            let vertex = THIRTEEN_POINT_NAMES.iter().find(|(c, _)| *c == name).unwrap().1;
            ReferenceCell { name: name.to_string(), vertex, prime, value: BigRational::new(n.into(), d.into()) }
        })
        .collect()
}

/// One externally supplied energy drop to check a ranking table against.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReferenceCell {
    pub name: String,
    pub vertex: VertexId,
    pub prime: u64,
    pub value: BigRational,
}
