//! Colour distributions on parameterised game trees and the counterexample
//! showing that the abstract game need not refine the concrete one.

pub mod fig3;
pub mod poly;
pub mod psi;
pub mod tree;

pub use psi::{check_psi, check_psi_prime, replay, Certificate, Formula};
pub use tree::{Affine, NodeKind, ParamTreeGame, TreeNode};
