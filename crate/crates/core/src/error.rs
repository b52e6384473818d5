use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: n = {left} vs n = {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("half-dimension n = {n} outside the supported range 1..={max}")]
    DimensionCap { n: usize, max: usize },

    #[error("invalid blade: {0}")]
    InvalidBlade(String),

    #[error("invalid reference volume: {0}")]
    InvalidVolume(String),

    #[error("matrix has wrong shape: expected {expected}x{expected}, got {rows}x{cols}")]
    Shape { expected: usize, rows: usize, cols: usize },

    #[error("matrix is not antisymmetric (residual {residual:e})")]
    NotAntisymmetric { residual: f64 },

    #[error("degenerate two-form: pivot magnitude {pivot:e} below threshold {threshold:e}")]
    Degenerate { pivot: f64, threshold: f64 },

    #[error("matrix is not a complex structure: |J^2 + I| = {residual:e}")]
    NotComplexStructure { residual: f64 },

    #[error(
        "complex structure is not compatible: symmetric residual {symmetric_residual:e}, \
         min eigenvalue {min_eigenvalue:e}"
    )]
    Incompatible { symmetric_residual: f64, min_eigenvalue: f64 },

    #[error("multivector is not homogeneous (grades {grades:?})")]
    NotHomogeneous { grades: Vec<usize> },

    #[error("grade {k} out of range (max {max})")]
    GradeOutOfRange { k: usize, max: usize },

    #[error("form is not primitive (relative residual {residual:e})")]
    NotPrimitive { residual: f64 },

    #[error("form is not of pure bidegree (off-bidegree mass {off_mass:e})")]
    MixedBidegree { off_mass: f64 },

    #[error("linear solve failed: {0}")]
    SingularSolve(String),

    #[error("parameter t = {t} outside the validity interval [{t_min}, {t_max}]")]
    OutsideInterval { t: f64, t_min: f64, t_max: f64 },

    #[error("family degenerates near t = {t} (|pfaffian| = {pfaffian:e})")]
    DegenerateFamily { t: f64, pfaffian: f64 },

    #[error("form #{index} is invalid: {reason}")]
    InvalidForm { index: usize, reason: String },

    #[error("form is not in the image of T (relative distance {distance:e})")]
    NotInImage { distance: f64 },

    #[error("numerical rank {found} differs from the expected {expected}")]
    RankDeficient { expected: usize, found: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),
}
