use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("unsupported ring: {0}")]
    UnsupportedRing(String),
    #[error("invalid ring descriptor {0:?}")]
    BadRingString(String),
    #[error("{0} is not a unit")]
    NotUnit(u32),
    #[error("index {index} out of range 0..={max}")]
    OutOfRange { index: u32, max: u32 },
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("polynomial degree {degree} exceeds factorization cap {cap}")]
    DegreeCap { degree: usize, cap: usize },
    #[error("matrix is not regular")]
    NotRegular,
    #[error("matrix is not upper unitriangular")]
    NotUnipotent,
    #[error("SL_{n} over residue characteristic {p}: prediction requires p not dividing n")]
    SlCharacteristic { n: usize, p: u32 },
    #[error("group of order {order} exceeds cap {cap}")]
    CapExceeded { order: u64, cap: u64 },
    #[error("mixed cyclotomic moduli {0} and {1}")]
    MixedModulus(u32, u32),
    #[error("cyclotomic number is not rational")]
    NotRational,
    #[error("internal integrality fault: {0}")]
    Integrality(String),
    #[error("character table computation failed: {0}")]
    CharTable(String),
    #[error("duality character requires i >= ceil(l/2), got i = {i} with l = {ell}")]
    NonAbelianCongruence { i: u32, ell: u32 },
    #[error("operands live over different rings")]
    RingMismatch,
    #[error("cache: {0}")]
    Cache(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
