use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("register `{0}` is not part of the layout")]
    UnknownRegister(String),
    #[error("register `{0}` appears more than once")]
    DuplicateRegister(String),
    #[error("register `{0}` has dimension zero")]
    ZeroDimension(String),
    #[error("register `{0}` was not assigned a basis index")]
    MissingAssignment(String),
    #[error("index {index} out of range for register `{register}` of dimension {dim}")]
    IndexOutOfRange { register: String, index: usize, dim: usize },
    #[error("layout mismatch: {0}")]
    LayoutMismatch(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("operator is not unitary (deviation {0:.3e})")]
    NotUnitary(f64),
    #[error("operator is not a projector (deviation {0:.3e})")]
    NotProjector(f64),
    #[error("operator kind does not support this operation: {0}")]
    WrongKind(&'static str),
    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),
    #[error("phase {0} does not have unit modulus")]
    NotUnitModulus(num_complex::Complex64),
    #[error("invalid density operator: {0}")]
    InvalidDensity(String),
    #[error("the set of kept registers is empty")]
    EmptyKeep,
    #[error("dimension must be at least one")]
    ZeroDim,
    #[error("{what} too large: {size} exceeds {limit}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    #[error("vertex count {0} is outside the supported range 1..=6")]
    VertexCountOutOfRange(usize),
    #[error("permutation sizes differ ({0} vs {1})")]
    SizeMismatch(usize, usize),
    #[error("not a permutation: {0:?}")]
    NotBijection(Vec<usize>),
    #[error("invalid edge ({0}, {1})")]
    InvalidEdge(usize, usize),
    #[error("graph code {code} out of range for {n} vertices")]
    CodeOutOfRange { code: u64, n: usize },
    #[error("cannot parse graph literal `{0}`")]
    GraphLiteral(String),
    #[error("the graphs are not isomorphic")]
    NotIsomorphic,
    #[error("witness does not map G0 onto G1")]
    BadWitness,
    #[error("success probability depends on the auxiliary input (deviation {0:.3e})")]
    NotLambdaUniform(f64),
    #[error("success probability {0} leaves no two-dimensional subspace")]
    DegenerateLambda(f64),
    #[error("no phases achieve exact amplification for lambda = {lambda} with {iterations} iteration(s)")]
    Infeasible { lambda: f64, iterations: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
