use thiserror::Error;

/// Errors raised by group construction and the analyses built on top of it.
///
/// Element indices in the payloads refer to the (normalized) labelling of
/// the group the operation was called on.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("table is malformed: {0}")]
    BadTable(String),
    #[error("operation is not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("no two-sided identity element in table")]
    NoIdentity,
    #[error("element {element} has no two-sided inverse")]
    MissingInverse { element: usize },
    #[error("group of order {order} exceeds the order guard {guard}")]
    OrderGuard { order: usize, guard: usize },
    #[error("parameter out of range: {0}")]
    ParamOutOfRange(String),
    #[error("action is not a homomorphism into the automorphisms: {0}")]
    BadAction(String),
    #[error("subgroups belong to different parent groups")]
    DifferentParents,
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("codomain of the first map is not the domain of the second")]
    DomainMismatch,
    #[error("not a homomorphism: f({x}*{y}) != f({x})*f({y})")]
    NotAHomomorphism { x: usize, y: usize },
    #[error("map is not an automorphism")]
    NotAutomorphism,
    #[error("element set is not a subgroup")]
    NotSubgroup,
    #[error("generators {left} and {right} do not commute")]
    NonCommutative { left: usize, right: usize },
    #[error("search budget of {budget} nodes exceeded")]
    SearchBudgetExceeded { budget: usize },
    #[error("prime set must contain {missing:?}, the primes of |H : Core_H(image)|")]
    PreconditionPrimes { missing: Vec<u64> },
    #[error("subgroup `{0}` is not invariant")]
    NotInvariant(String),
    #[error("endomorphism {0} is not surjective on the complement")]
    NotSurjectiveOnH(usize),
    #[error("coherence square fails at level {level}, element {element}")]
    CoherenceViolation { level: usize, element: usize },
    #[error("map is not injective")]
    NotInjective,
    #[error("{0}")]
    Unsupported(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
