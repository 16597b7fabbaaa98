//! Hyperbolic plane geometry: Möbius transformations, pants and their
//! Fenchel-Nielsen gluings, short closed geodesics, heat kernels and the
//! periodized heat sums of hyperbolic cylinders.

mod geodesics;
mod heat;
mod mobius;
mod pants;

pub use geodesics::{
    collar_width, pants_crossing_lower_bound, short_geodesics, write_geodesics_csv, GeodesicKind, GeodesicSearch,
    ShortGeodesic,
};
pub use heat::{
    cylinder_orbit_distance, f_t_cylinder, f_t_cylinder_sum, gaussian_prefactor, heat_kernel, heat_shape_constant,
    thin_part_report, HeatQuery, HyperbolicCylinder, OrbitSum, ThinPartReport,
};
pub use mobius::{projective_distance, translation_length, upper_half_plane_distance, MobiusTransform, M2};
pub use pants::{
    build_pants, glue_forest, write_coordinates_csv, write_tree, FenchelNielsen, PantsSurface, Slot, TreeEdge,
    TreePortion,
};
