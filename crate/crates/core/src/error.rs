use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("series inversion needs constant term 1, found {0}")]
    NonUnitConstant(String),
    #[error("invalid index: {0}")]
    InvalidIndex(&'static str),
    #[error("{name} = {value} is outside {domain}")]
    OutOfDomain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },
    #[error("annulus needs 0 < delta0 < delta < 1, got delta0 = {delta0}, delta = {delta}")]
    InvalidAnnulus { delta0: f64, delta: f64 },
    #[error("zero near contour: min |theta| / max |theta| = {ratio:e} on radius {radius:e}")]
    ZeroNearContour { radius: f64, ratio: f64 },
    #[error("contour count did not converge with {points} quadrature points")]
    NoConvergence { points: usize },
    #[error("continuation stalled at |q| = {modulus}")]
    ContinuationStalled { modulus: f64 },
    #[error("Newton iteration diverged from seed {seed}")]
    NewtonDiverged { seed: usize },
    #[error("|u| underflows the working precision on the circle")]
    Degenerate,
    #[error("cannot separate {what} at {bits} bits")]
    Inseparable { what: &'static str, bits: usize },
    #[error("no threshold found below n = {cap}")]
    ThresholdCap { cap: usize },
}
