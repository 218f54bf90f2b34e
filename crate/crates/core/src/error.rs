use crate::geometry::ElementIndex;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("RIS dimensions must be odd, got {rows}x{cols}")]
    EvenDimension { rows: usize, cols: usize },

    #[error("element spacing must be positive and finite, got {0} m")]
    NonPositiveSpacing(f64),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error(
        "{endpoint} at distance {distance_m} m lies outside the near-field bound of {bound_m} m"
    )]
    OutsideNearField {
        endpoint: &'static str,
        distance_m: f64,
        bound_m: f64,
    },

    #[error("endpoint sits at the RIS origin")]
    EndpointAtOrigin,

    #[error("path set is empty")]
    EmptyPathSet,

    #[error("element {0} is not part of the RIS")]
    UnknownIndex(ElementIndex),

    #[error("channel has zero energy")]
    ZeroChannel,

    #[error("length mismatch: prefilter has {prefilter} taps, channel has {channel}")]
    LengthMismatch { prefilter: usize, channel: usize },

    #[error("tap {tap} out of range 1..={taps}")]
    TapOutOfRange { tap: usize, taps: usize },

    #[error("config parse error: {0}")]
    Parse(String),

    #[error("config schema error: {0}")]
    Schema(String),

    #[error("config unit error: {0}")]
    Unit(String),

    #[error("no reference tap counts at {bandwidth_hz} Hz")]
    NoReference { bandwidth_hz: f64 },

    #[error("tap counts differ from the reference table in {} cell(s): {}", .0.len(), .0.join(", "))]
    ReplicationMismatch(Vec<String>),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
