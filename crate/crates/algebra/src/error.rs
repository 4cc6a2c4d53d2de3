use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("modules live over different ground rings")]
    GroundMismatch,
    #[error("carrier of size {size} exceeds the cap {cap}")]
    TooLarge { size: u128, cap: u128 },
    #[error("module is infinite")]
    Infinite,
    #[error("not well defined: {0}")]
    NotWellDefined(String),
    #[error("axiom fails: {0}")]
    Axiom(String),
    #[error("middle algebras differ: {left} vs {right}")]
    MiddleMismatch { left: String, right: String },
    #[error("algebra map is not unital: {0}")]
    NotUnital(String),
    #[error("presheaf is not Segal: {0}")]
    NotSegal(String),
    #[error("incompatible data at {0}")]
    Incompatible(String),
    #[error(transparent)]
    Combinat(#[from] ncat_combinat::CombinatError),
}

pub type Result<T> = std::result::Result<T, AlgebraError>;
