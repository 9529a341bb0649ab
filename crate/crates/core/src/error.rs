use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid embedding: {0}")]
    InvalidEmbedding(String),

    #[error("series too short: {len} samples, need at least {required}")]
    SeriesTooShort { len: usize, required: usize },

    #[error("non-finite sample {value} at index {index}")]
    NonFiniteSample { index: usize, value: f64 },

    #[error("not a permutation of 0..{len}: {ranks:?}")]
    InvalidPermutation { len: usize, ranks: Vec<usize> },

    #[error("empty symbol sequence")]
    EmptySequence,

    #[error("symbol {symbol} at index {index} outside alphabet of size {alphabet}")]
    SymbolOutOfRange {
        index: usize,
        symbol: u64,
        alphabet: u64,
    },

    #[error("complexity upper bound undefined for T = {length}, alphabet = {alphabet}")]
    BoundUndefined { length: usize, alphabet: u64 },

    #[error("unknown map `{0}`")]
    UnknownMap(String),

    #[error(
        "orbit of map {map_id} left its safety box at iteration {iteration} (state {state:?})"
    )]
    DivergedOrbit {
        map_id: u32,
        iteration: usize,
        state: Vec<f64>,
    },

    #[error("orbit of map {map_id} collapsed onto a fixed point at iteration {iteration}")]
    DegenerateOrbit { map_id: u32, iteration: usize },

    #[error("map catalog: {0}")]
    Catalog(String),

    #[error("invalid length {0}")]
    InvalidLength(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(
        "circulant embedding not positive semidefinite: eigenvalue {eigenvalue} at index {index}"
    )]
    EmbeddingNotPsd { index: usize, eigenvalue: f64 },

    #[error("spectral synthesis left an imaginary residue of {0:e} (relative)")]
    ImaginaryResidue(f64),

    #[error("need at least 2 noise points with distinct entropy, got {0}")]
    InsufficientPoints(usize),

    #[error("entropy {h} outside noise-line domain [{lo}, {hi}]")]
    OutOfDomain { h: f64, lo: f64, hi: f64 },

    #[error("degenerate covariance; stddev bars h = {sd_h}, c = {sd_c}")]
    DegenerateCovariance { sd_h: f64, sd_c: f64 },

    #[error("source `{source_label}`: {error}")]
    Source {
        source_label: String,
        #[source]
        error: Box<Error>,
    },

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures that indicate a broken internal invariant rather
    /// than bad input data.
    pub fn is_internal(&self) -> bool {
        match self {
            Error::EmbeddingNotPsd { .. } | Error::ImaginaryResidue(_) => true,
            Error::Source { error, .. } => error.is_internal(),
            _ => false,
        }
    }
}
