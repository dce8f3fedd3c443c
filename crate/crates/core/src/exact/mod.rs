//! Exact arithmetic in Q and real quadratic fields, directions and the matrix action.

mod mat2;
mod parse;
mod scalar;

pub use mat2::{apply_ta, direction_image, integer_entries, rho_sq, sin_sq, Direction, Mat2, Vec2};
pub use parse::{parse_matrix, parse_scalar};
pub use scalar::{is_squarefree, Scalar};
