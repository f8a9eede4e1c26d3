//! Lines on quintic threefolds: normal forms, the local index `<det A>`,
//! the Gauss map and its double points, and the Type of a line.

pub mod enumerate;
pub mod mpoly;
pub mod normal;
pub mod oracle;
pub mod planted;
pub mod quintic;

pub use enumerate::{enumerate_lines, Enumeration, FoundLine};
pub use normal::{
    jacobian_at_origin, local_index_simple, local_section, normalize_line, LineNormalForm, LinePlane, LocalSection,
};
pub use oracle::{segre_degree, DoublePointOrbit, DoublePoints, Oracle};
pub use planted::{planted_line, PlantedLine};
pub use quintic::Quintic;
