use thiserror::Error as ThisError;

#[derive(Debug, Clone, PartialEq, Eq, ThisError)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("invalid graph: {}", .0.join("; "))]
    InvalidGraph(Vec<String>),
    #[error("unknown id: {0}")]
    UnknownId(String),
    #[error("not a multitree")]
    NotMultitree,
    #[error("not a chain")]
    NotChain,
    #[error("not edge-reduced")]
    NotEdgeReduced,
    #[error("not integral")]
    NotIntegral,
    #[error("not a section: {0}")]
    NotSection(String),
    #[error("unsatisfiable: {0}")]
    Unsatisfiable(String),
    #[error("degree {0} exceeds the rank cap {1}")]
    DegreeCap(i64, i64),
    #[error("rank is {0}, expected {1}")]
    RankMismatch(i64, i64),
    #[error("hypotheses fail: {0}")]
    Hypotheses(String),
    #[error("no effective representative")]
    NoEffective,
    #[error("not vertex avoiding ({0})")]
    NotVertexAvoiding(String),
    #[error("condition (I) violated: {0}")]
    ConditionI(String),
    #[error("uncertified regime: {0}")]
    Uncertified(String),
    #[error("inconsistent data: {0}")]
    Inconsistent(String),
}

impl Error {
    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Malformed(_) => "malformed",
            Error::InvalidGraph(_) => "invalid_graph",
            Error::UnknownId(_) => "unknown_id",
            Error::NotMultitree => "not_multitree",
            Error::NotChain => "not_chain",
            Error::NotEdgeReduced => "not_edge_reduced",
            Error::NotIntegral => "not_integral",
            Error::NotSection(_) => "not_section",
            Error::Unsatisfiable(_) => "unsatisfiable",
            Error::DegreeCap(..) => "degree_cap",
            Error::RankMismatch(..) => "rank_mismatch",
            Error::Hypotheses(_) => "hypotheses",
            Error::NoEffective => "no_effective",
            Error::NotVertexAvoiding(_) => "not_vertex_avoiding",
            Error::ConditionI(_) => "condition_i",
            Error::Uncertified(_) => "uncertified",
            Error::Inconsistent(_) => "inconsistent",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
