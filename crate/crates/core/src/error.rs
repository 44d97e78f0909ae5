use crate::exchange::{Price, Side, TraderId};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("trader {0} has no current assignment")]
    NoAssignment(TraderId),

    #[error("trader {trader} is assigned to {assigned:?} but quoted on the {quoted:?} side")]
    WrongSide {
        trader: TraderId,
        assigned: Side,
        quoted: Side,
    },

    #[error("price {price:?} outside the quotable range [1, {max:?}]")]
    PriceOutOfRange { price: Price, max: Price },

    #[error("strategy value {0} outside [-1, 1]")]
    StrategyOutOfRange(f64),

    #[error("sample {index} has dimension {found}, expected {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Toml(#[from] toml::de::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
