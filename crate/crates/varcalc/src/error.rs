use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("coordinate error: {0}")]
    Coords(String),
    #[error("section error: {0}")]
    Section(String),
    #[error("bidegree error: {0}")]
    Bidegree(String),
    #[error("jet order error: {0}")]
    Order(String),
    #[error("not exact: {0}")]
    NotExact(String),
    #[error("ansatz exhausted (order bound {order}, degree bound {degree})")]
    AnsatzExhausted { order: usize, degree: u32 },
    #[error("not a symmetry of the Lagrangian")]
    NotASymmetry,
    #[error("supplied witness does not satisfy d A = L_xi L")]
    BadWitness,
    #[error("invalid Hamiltonian pair: {0}")]
    InvalidPair(String),
    #[error("vector field is not symplectic: {0}")]
    NotSymplectic(String),
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("bracket data error: {0}")]
    Brackets(String),
    #[error("json error: {0}")]
    Json(String),
}
