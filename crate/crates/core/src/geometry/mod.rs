//! Orthogonal decomposition into strongly transitive and cyclic parts, and
//! the four-item region catalogue.

mod cycles;
mod region4;

pub use cycles::{
    dot, m_minus_h_reduction, project_components, t_basis, threecycle_basis, CycleVector,
    ReductionRecord, REDUCTION_TOL,
};
pub use region4::{
    classify_region4, classify_region4_with, f_basis4, f_values, permutahedron_check4,
    tropical_closed_form4, tropical_closed_form4_with, Classification, Facet, Inequality,
    PermutahedronRecord, Region4, RegionId, BOUNDARY_MARGIN,
};
