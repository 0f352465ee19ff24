use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("qubit count {0} outside the supported range 1..=12")]
    QubitCount(usize),

    #[error("Kronecker chain needs at least one factor")]
    EmptyChain,

    #[error("factor {index} is {rows}x{cols}, expected 2x2")]
    NotSingleQubit {
        index: usize,
        rows: usize,
        cols: usize,
    },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("qubit {qubit} outside register of {n} qubits")]
    QubitOutOfRange { qubit: usize, n: usize },

    #[error("parity-phase support must be nonempty")]
    EmptySupport,

    #[error("entry {index} is {value}, expected +1 or -1")]
    NotASignVector { index: usize, value: f64 },

    #[error("support {0:?} appears more than once")]
    DuplicateSupport(Vec<usize>),

    #[error("truth table has {len} entries, expected 2^{n}")]
    TableLength { len: usize, n: usize },

    #[error("construction needs n >= {min}, got {n}")]
    TooFewQubits { n: usize, min: usize },

    #[error("{id} fails its {class} trace test (trace {trace})")]
    TraceTest {
        id: String,
        class: String,
        trace: i64,
    },

    #[error("unknown reference transformation `{0}` (expected f1..f9)")]
    UnknownOracle(String),

    #[error("unknown spin label `{0}`")]
    UnknownSpin(String),

    #[error("spins {0} and {1} are not adjacent in the coupling chain")]
    NotAdjacent(usize, usize),

    #[error("J matrix is asymmetric at ({0},{1})")]
    AsymmetricCoupling(usize, usize),

    #[error("J matrix has a nonzero diagonal entry at spin {0}")]
    SelfCoupling(usize),

    #[error("adjacent spins {0} and {1} have zero J coupling")]
    ZeroAdjacentCoupling(usize, usize),

    #[error("J matrix is {rows}x{cols} but there are {spins} spins")]
    CouplingShape {
        rows: usize,
        cols: usize,
        spins: usize,
    },

    #[error("duplicate spin label `{0}`")]
    DuplicateLabel(String),

    #[error("spin `{label}` has multiplicity {multiplicity}, must be >= 1")]
    Multiplicity { label: String, multiplicity: u32 },

    #[error("spin system has no spins")]
    NoSpins,

    #[error("malformed spin-system document: {0}")]
    Parse(String),

    #[error("function is neither constant nor balanced; the Deutsch-Jozsa verdict is undefined")]
    NeitherClass,

    #[error("line on spin {spin} has mixed phase under ideal pulses")]
    MixedUnderIdealPulses { spin: String },

    #[error("pulse-angle scale {0} outside (-0.5, 0.5)")]
    ImperfectionRange(f64),

    #[error("pulse sequence line {line}: {message}")]
    SequenceFormat { line: usize, message: String },

    #[error("bad truth-table hex: {0}")]
    Hex(String),
}

pub type Result<T> = std::result::Result<T, Error>;
