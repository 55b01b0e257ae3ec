use thiserror::Error;

/// Errors raised by cone construction, subdivision and function evaluation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("cone is not strongly convex: it contains a line")]
    NotStronglyConvex,

    #[error("cone is not full-dimensional: generators span rank {rank} < {dim}")]
    NotFullDimensional { rank: usize, dim: usize },

    #[error("face of codimension {codim} has {normals} incident normals")]
    NonSimpleFace { codim: usize, normals: usize },

    #[error("cone is not good: incident normals {normals:?} do not complete to SL_r(Z)")]
    NotGood { normals: Vec<usize> },

    #[error("degenerate generator matrix (determinant zero)")]
    Degenerate,

    #[error("ray {ray:?} has {normals} incident normals, expected {expected}")]
    NonSimpleRay {
        ray: Vec<i64>,
        normals: usize,
        expected: usize,
    },

    #[error("ray {0:?} is a generator of the cone")]
    RayIsGenerator(Vec<i64>),

    #[error("ray {0:?} does not lie in the cone")]
    RayOutsideCone(Vec<i64>),

    #[error("invalid subdivision: {0}")]
    InvalidSubdivision(String),

    #[error("no subdivision avoiding ray {0:?} was found within the search bound")]
    NoAvoidingSubdivision(Vec<i64>),

    #[error("integer overflow in exact arithmetic")]
    Overflow,

    #[error("fractional linear action is singular (denominator {0:e})")]
    SingularAction(f64),

    #[error("evaluation too close to a pole along ray {ray:?} (genuine: {genuine})")]
    NearPole { ray: Vec<i64>, genuine: bool },

    #[error("lattice sum diverges: Re(omega) is not in the interior of the dual cone")]
    DivergentRegion,

    #[error("zero period")]
    ZeroPeriod,

    #[error("parameter {index} is too close to the unit circle")]
    OnUnitCircle { index: usize },

    #[error("product does not converge within the factor budget ({0})")]
    NonConvergent(String),

    #[error("outside the domain of definition: {0}")]
    OutsideDomain(String),

    #[error("degenerate period ratios at ray {ray:?}")]
    DegenerateRatios { ray: Vec<i64> },

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("unknown identity {0:?}")]
    UnknownIdentity(String),
}

pub type Result<T> = std::result::Result<T, Error>;
