use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("field width m={0} is outside the supported range 3..=16")]
    UnsupportedWidth(u32),
    #[error("polynomial {poly:#x} is not primitive for m={m}")]
    NotPrimitive { m: u32, poly: u32 },
    #[error("division by zero in GF(2^m)")]
    DivisionByZero,

    #[error("invalid code parameters: {0}")]
    InvalidParams(String),
    #[error("group of {k_hat} symbols x {m} bits cannot hold a {crc_width}-bit CRC")]
    GroupTooSmall { k_hat: usize, m: u32, crc_width: u32 },
    #[error("payload of {payload_len} bytes needs {expected} groups, got {actual}")]
    LengthMismatch { payload_len: u64, expected: usize, actual: usize },
    #[error("malformed shard: {0}")]
    ShardFormat(String),

    #[error("position {0} appears twice")]
    DuplicatePosition(usize),
    #[error("expected {expected} positions, got {actual}")]
    WrongCount { expected: usize, actual: usize },
    #[error("position {0} is out of range or not an erased position")]
    PositionNotErased(usize),
    #[error("fewer than two un-accessed positions remain")]
    ExhaustedPositions,
    #[error("interpolation points are not distinct")]
    SingularSystem,

    #[error("{live} live nodes cannot supply {needed} symbols")]
    InsufficientLiveNodes { live: usize, needed: usize },
    #[error("argument out of range: {0}")]
    OutOfRange(String),
}
