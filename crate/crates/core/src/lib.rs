//! Exact point counting on superelliptic curves `y^m = f(x)` over finite
//! fields, L-polynomial reconstruction, Newton polygons, and Frobenius data
//! for cyclic CM fields. Used to check explicit families of supersingular
//! curves prime by prime.

pub mod count;
pub mod curves;
pub mod ff;
pub mod galois;
pub mod newton;
pub mod verify;
pub mod zeta;

use thiserror::Error;

pub use count::{count_points, count_sequence, CountOptions, PointCounts, ResidueStrategy};
pub use curves::{
    builtin_catalog, family_of, make_curve, CatalogEntry, FamilyLabel, SuperellipticCurve,
};
pub use ff::{make_extension, FpPoly, FqContext, FqElement, PrimeModulus};
pub use galois::{field_specs, CyclicFieldSpec};
pub use newton::{is_supersingular, newton_polygon, p_rank, NewtonPolygon, Slope};
pub use verify::{Verdict, VerificationReport, VerifyOptions};
pub use zeta::{l_polynomial, validate_weil, LPolynomial};

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Field(#[from] ff::FieldError),
    #[error(transparent)]
    Curve(#[from] curves::CurveError),
    #[error(transparent)]
    Count(#[from] count::CountError),
    #[error(transparent)]
    Zeta(#[from] zeta::ZetaError),
    #[error(transparent)]
    Galois(#[from] galois::GaloisError),
    #[error("catalog: {0}")]
    Catalog(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
