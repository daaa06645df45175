//! Euclidean predicates: minimum enclosing balls, fixed-radius neighbor
//! graphs, and the grid oracle for vacant components of the Boolean model.

mod meb;
mod neighbors;
mod vacancy;

pub use meb::{cech_simplex_test, min_enclosing_ball, min_enclosing_ball_with_support, Ball, SupportedBall, MAX_DIM};
pub(crate) use meb::dist2;
pub use neighbors::{build_neighbor_graph, NeighborGraph};
pub(crate) use neighbors::neighbor_graph_of;
pub use vacancy::{vacant_component_count, VacancyGrid, VacantComponents, MAX_VACANCY_DIM, MIN_CELLS_PER_RADIUS};
