use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown hyperedge `{0}`")]
    UnknownEdge(String),
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("id `{0}` is used both as a vertex and as a hyperedge")]
    IdClash(String),
    #[error("red vertex `{0}` has no blue neighbour")]
    IsolatedRed(String),
    #[error("vertex `{0}` is not fresh")]
    NotFresh(String),
    #[error("vertex `{vertex}` is not in the content of `{edge}`")]
    NotInEdge { vertex: String, edge: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid forest: {0}")]
    InvalidForest(String),
    #[error("search budget exceeded: {0}")]
    Budget(String),
    #[error("instance exceeds size cap: {0}")]
    SizeCap(String),
    #[error("label error: {0}")]
    Label(String),
    #[error("side condition violated: {0}")]
    SideCondition(String),
    #[error("unassigned free variable {0}")]
    Unassigned(String),
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
