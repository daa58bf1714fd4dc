use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("operator size mismatch: {0} vs {1} qubits")]
    SizeMismatch(usize, usize),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("generators do not pairwise commute (generators {0} and {1})")]
    NonCommuting(usize, usize),

    #[error("group generates -identity: inconsistent signs")]
    MinusIdentity,

    #[error("group phase left residue i^{0}; non-Hermitian product")]
    NonHermitianProduct(u8),

    #[error("stabilizer group rank {rank} < {n}: state not unique")]
    NotFullRank { rank: usize, n: usize },

    #[error("stabilizer group is inconsistent: no joint eigenstate")]
    InconsistentGroup,

    #[error("sector-constraint audit failed: {0}")]
    SectorAudit(String),

    #[error("lattice of {rows}x{cols} hexagons is not three-colorable")]
    NotThreeColorable { rows: usize, cols: usize },

    #[error("no trapezoid shading satisfies the row property for {rows}x{cols}")]
    ShadingInfeasible { rows: usize, cols: usize },

    #[error("loop routing failed: {0}")]
    RoutingFailed(String),

    #[error("rectangle {height}x{width} does not fit without self-wrap")]
    DoesNotFit { height: usize, width: usize },

    #[error("bad row index {0}")]
    BadRow(usize),

    #[error("inadmissible torus: {0}")]
    Inadmissible(String),

    #[error("both couplings zero")]
    ZeroCouplings,

    #[error("state-vector cap exceeded: {n} qubits > cap {cap}")]
    CapExceeded { n: usize, cap: usize },

    #[error("Hamiltonian has no real matrix representation (term {0})")]
    NotReal(usize),

    #[error("eigensolver did not converge: {0} of {1} pairs after {2} iterations")]
    NonConvergence(usize, usize, usize),

    #[error("chain length {0} exceeds dense cap {1}")]
    ChainCap(usize, usize),

    #[error("requested {k} levels but sector dimension is {dim}")]
    KTooLarge { k: usize, dim: u128 },

    #[error("ensemble dimension audit failed: counted 2^{got:.2}, expected 2^{expected}")]
    EnsembleAudit { got: f64, expected: u32 },

    #[error("instance file error: {0}")]
    InstanceFile(String),

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
