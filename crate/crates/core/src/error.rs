use thiserror::Error;

use crate::graph::{GraphKind, VertexAddress};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrogError {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("address {address:?} is not a vertex of {graph:?}")]
    InvalidAddress {
        graph: GraphKind,
        address: VertexAddress,
    },

    #[error("cannot move {mv} from {address:?}")]
    Navigation { address: VertexAddress, mv: String },

    #[error("vertex index overflow below {0:?}")]
    AddressOverflow(VertexAddress),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("malformed rational {0:?}")]
    ParseRational(String),
}

pub type Result<T> = std::result::Result<T, FrogError>;
