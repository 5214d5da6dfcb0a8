//! Dense complex linear algebra with exact operation counting.

mod decomp;
mod matrix;
mod ops;

pub use decomp::{
    hermitian_eigen, inverse_residual, invert, orthonormal_basis, unitarity_defect, unitarize,
    PIVOT_TOL,
};
pub use matrix::{BlockDiagMatrix, CMatrix, C64, ONE, ZERO};
pub use ops::{
    accumulate, accumulate_scaled, batch_sandwich, kron, kron_counted, matmul, sum_counted,
    MatMulBackend, OpCounter,
};
