//! Numerical building blocks shared by the solvers.

pub mod bessel;
pub mod eigen;
pub mod fit;
pub mod linalg;
pub mod quad;
pub mod roots;

pub use num_complex::Complex64 as C64;

pub use bessel::{bessel_i, bessel_ik, bessel_k, ik01, BesselIK, IK01};
pub use eigen::eigenvalues_small;
pub use fit::{fit_anchored, fit_expansion, FitResult};
pub use linalg::{smallest_singular, CMatrix, Lu, SmallestSingular};
pub use roots::{find_root_complex, find_root_with, Root, RootOptions};
