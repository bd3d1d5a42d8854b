use alloc::string::String;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("malformed table: {0}")]
    Malformed(String),
    #[error("not associative: ({0}*{1})*{2} != {0}*({1}*{2})")]
    NotAssociative(usize, usize, usize),
    #[error("no two-sided identity element")]
    NoIdentity,
    #[error("row or column {0} is not a permutation")]
    NotCancellative(usize),
    #[error("subgroup is not normal: conjugating {0} by {1} leaves it")]
    NotNormal(usize, usize),
    #[error("automorphism does not map the subgroup onto itself")]
    NotInvariant,
    #[error("order {0} is not a prime power")]
    NotPGroup(usize),
    #[error("group is not nilpotent")]
    NotNilpotent,
    #[error("given elements do not generate the group")]
    NotGenerating,
    #[error("enumeration exceeded the cap of {0}")]
    CapExceeded(usize),
    #[error("not an automorphism: {0}")]
    NotAutomorphism(String),
    #[error("group of order {0} exceeds the table limit {1}")]
    TooLarge(usize, usize),
    #[error("group is not abelian")]
    NotAbelian,
    #[error("{0} is not an odd prime")]
    BadPrime(u64),
    #[error("{0} is not a quadratic non-residue")]
    BadResidue(u64),
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("polynomial is reducible")]
    ReduciblePolynomial,
    #[error("row {0} is not a permutation")]
    RowNotBijective(usize),
    #[error("partition is not a congruence: {0}~{1} and {2}~{3} but products differ")]
    NotCongruence(usize, usize, usize, usize),
    #[error("quandle is not connected")]
    NotConnected,
    #[error("quandle is not latin")]
    NotLatin,
    #[error("subgroup is not contained in Fix(f)")]
    HNotFixed,
    #[error("subgroup is not contained in the displacement group")]
    NotInDis,
    #[error("cocycle condition fails at ({0},{1},{2})")]
    CCViolation(usize, usize, usize),
    #[error("cocycle is not normalized at {0}")]
    QCViolation(usize),
    #[error("not a quandle morphism at ({0},{1})")]
    NotMorphism(usize, usize),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("no prime bound available; supply primes explicitly")]
    PrimesUnbounded,
    #[error("unsupported size: {0}")]
    UnsupportedSize(String),
}

pub type Result<T> = core::result::Result<T, Error>;
