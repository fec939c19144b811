use alloc::string::String;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("subset {mask:#b} is not contained in a space of {size} points")]
    SubsetOutOfRange { mask: u32, size: usize },
    #[error("ground space of {size} points exceeds the limit of {limit}")]
    SpaceTooLarge { size: usize, limit: usize },
    #[error("variation needs exhaustive enumeration; {size} points exceeds the guard of {limit}")]
    CapacityTooLarge { size: usize, limit: usize },
    #[error("invalid capacity: {0}")]
    InvalidCapacity(String),
    #[error("invalid set function on [0, inf): {0}")]
    InvalidAlpha(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("invalid step function: {0}")]
    InvalidStep(String),
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
    #[error("could not generate a {kind} capacity on {size} points (seed {seed})")]
    Generation { kind: &'static str, size: usize, seed: u64 },
    #[error("unsupported: {0}")]
    Unsupported(String),
}
