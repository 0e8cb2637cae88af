use thiserror::Error;

/// Errors produced anywhere in the pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("format error: {0}")]
    Format(String),
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("size error: {0}")]
    Size(String),
    #[error("capacity error: {0}")]
    Capacity(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("huffman error: {0}")]
    Huffman(String),
    #[error("truncated stream: {0}")]
    Truncation(String),
    #[error("block ({row}, {col}) has no recovered neighbour")]
    NoNeighbor { row: usize, col: usize },
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
