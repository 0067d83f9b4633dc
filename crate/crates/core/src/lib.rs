//! Kazhdan–Lusztig combinatorics of the Brauer and walled Brauer algebras:
//! weight diagrams, cap and curl diagrams, decomposition polynomials
//! `d_λμ(q)`, resolution polynomials `p_λμ(q)` and their block matrices.

pub mod arcdiagrams;
pub mod blockmatrix;
pub mod decomp;
pub mod klpoly;
pub mod qpoly;
pub mod sweep;
pub mod weights;

pub use arcdiagrams::{build_arc_diagram, diagram_degree, is_oriented, ArcDiagram};
pub use decomp::{d_poly, d_poly_recursive};
pub use klpoly::{p_poly, p_poly_recursive};
pub use qpoly::QPoly;
pub use weights::{Family, Label, Partition, Shape, WeightDiagram};
