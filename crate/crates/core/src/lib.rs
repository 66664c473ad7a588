//! λ-model with three spin values on the Cayley tree: ground states, Gibbs
//! measures built from boundary fields, and fixed points of the recursion.

pub mod error;
pub mod format;
pub mod gibbs;
pub mod ground;
pub mod model;
pub mod poly;
pub mod solver;
pub mod tree;

pub use error::{Error, Result};
pub use gibbs::{BoundaryFields, FieldRatios, FiniteVolumeMeasure, Interaction};
pub use model::{Configuration, LambdaParams, Region, RegionReport, Spin};
pub use solver::{BoltzmannWeights, CanonicalParams, FixedPointReport, PeriodicReport, Regime};
pub use tree::{TreeCoord, TreeShape};
