use alloc::string::String;
use core::fmt;

/// Errors raised by the algorithms in this crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A model or argument failed validation.
    Invalid(String),
    /// First-order evaluation did not settle under horizon doubling.
    Unstable,
    UnknownShorthand(String),
    /// Monoid generation exceeded the element cap.
    MonoidBlowup(usize),
    /// The word is outside the machine's domain.
    NotInDomain,
    /// The output graph requires a 1-bounded transducer.
    NotOneBounded,
    /// A star over behaviour matrices did not stabilise.
    NoStabilization,
    AmbiguousLabel {
        copy: usize,
        position: usize,
    },
    /// The order formulas of an FO transducer do not describe a string.
    NotStringShaped(String),
    /// The FO run could not certify `k` output letters within its window cap.
    WindowExhausted,
    RecursionDivergence,
    /// A construction exceeded its state cap.
    StateBlowup(usize),
    /// Two transitions are enabled at once.
    Nondeterministic(String),
    /// Guard states do not partition the realisable contexts.
    GuardsNotPartition(String),
    /// An internal consistency check failed.
    Internal(String),
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Invalid(m) => write!(f, "invalid model: {m}"),
            Error::Unstable => write!(f, "formula value is not stable under horizon doubling"),
            Error::UnknownShorthand(s) => write!(f, "unknown shorthand `{s}`"),
            Error::MonoidBlowup(cap) => write!(f, "monoid exceeds the cap of {cap} elements"),
            Error::NotInDomain => write!(f, "word is not in the domain"),
            Error::NotOneBounded => write!(f, "transducer is not 1-bounded"),
            Error::NoStabilization => write!(f, "matrix star did not stabilise"),
            Error::AmbiguousLabel { copy, position } => {
                write!(f, "node ({position}, copy {copy}) has more than one label")
            }
            Error::NotStringShaped(m) => write!(f, "output is not string-shaped: {m}"),
            Error::WindowExhausted => write!(f, "window cap reached before the prefix settled"),
            Error::RecursionDivergence => write!(f, "state-function recursion diverged"),
            Error::StateBlowup(cap) => write!(f, "construction exceeds the cap of {cap} states"),
            Error::Nondeterministic(m) => write!(f, "nondeterministic transitions: {m}"),
            Error::GuardsNotPartition(m) => write!(f, "guards do not form a partition: {m}"),
            Error::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

impl core::error::Error for Error {}
