//! Irreducible representations, the Fourier-side layout and the naive
//! transform used as the reference for every engine.

mod fourier;
mod io;
mod irrep;
mod verify;

pub use fourier::{convolve, inverse_dft, naive_dft, FourierBlockVector, GroupAlgebraElement};
pub use io::{export_irreps, import_irreps, irreps_from_str, irreps_to_string};
pub use irrep::{extend_from_generators, Irrep, IrrepSet, RepData, TABLE_SCALAR_CAP};
pub use verify::{verify_irrep_set, VerifyReport, Violation, ViolationKind, CHAR_TOL, REP_TOL};
