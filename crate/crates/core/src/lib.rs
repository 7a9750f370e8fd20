//! Strata of moduli of sigma-invariant real genus-zero curves, their graph
//! complex, mod-2 homology and wall-crossing presentations of pi_1.

pub mod decorated_trees;
pub mod enumeration;
pub mod gf2;
pub mod graph_complex;
pub mod homology;
pub mod pi1;
