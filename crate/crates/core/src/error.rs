use thiserror::Error;

/// Errors produced by the library.
///
/// The `Inconsistent*` variants are numerical-consistency traps: they fire
/// when a quantity that theory pins down (a bracketed sign change, the
/// propagator initial condition, a real-valued propagator) comes out wrong,
/// which indicates a bug or an invalid parameter regime rather than a user
/// mistake.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("four-vector {0:?} is not a valid effect")]
    InvalidEffect([f64; 4]),

    #[error("matrix is not a proper rotation: {0}")]
    InvalidRotation(String),

    #[error("parameter out of range: {0}")]
    InvalidParameter(String),

    #[error("compatibility radicand {0:.3e} below tolerance; inputs are not valid effects")]
    NegativeRadicand(f64),

    #[error("non-finite argument to erf")]
    NonFiniteArgument,

    #[error("density matrix violates X-state constraints: {0}")]
    InvalidXState(String),

    #[error("no sign change of the compatibility function on [0, 1/2]; C(1/2) = {0:.3e}")]
    InconsistentBracket(f64),

    #[error("propagator initial condition violated: |G(0) - 1| = {0:.3e}")]
    InconsistentInitialCondition(f64),

    #[error("propagator should be real: |Im G| = {0:.3e}")]
    InconsistentImaginaryPart(f64),

    #[error("propagator grew past unit modulus: |G| = {0}")]
    InconsistentModulus(f64),

    #[error("cubic roots nearly degenerate: |b_{0} - b_{1}| = {2:.3e}")]
    DegenerateRoots(usize, usize, f64),

    #[error("invalid scenario configuration: {0}")]
    Config(String),

    #[error("scenario evaluation failed at t = {t}: {source}")]
    AtTime {
        t: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("failed to write {path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    /// Attach the failing time (or noise parameter) to an error bubbling out
    /// of a sweep.
    pub fn at_time(self, t: f64) -> Error {
        Error::AtTime {
            t,
            source: Box::new(self),
        }
    }

    /// True for the numerical-consistency traps that the CLI maps to exit
    /// code 2 (everything else non-I/O is a configuration problem, exit 1).
    pub fn is_numerical_trap(&self) -> bool {
        match self {
            Error::InconsistentBracket(_)
            | Error::InconsistentInitialCondition(_)
            | Error::InconsistentImaginaryPart(_)
            | Error::InconsistentModulus(_)
            | Error::NegativeRadicand(_) => true,
            Error::AtTime { source, .. } => source.is_numerical_trap(),
            _ => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trap_classification_survives_time_wrapping() {
        let trap = Error::InconsistentInitialCondition(0.3).at_time(1.5);
        assert!(trap.is_numerical_trap());
        assert!(trap.to_string().contains("t = 1.5"));

        let config = Error::Config("bad".into()).at_time(0.2);
        assert!(!config.is_numerical_trap());
        assert!(!Error::DegenerateRoots(1, 2, 1e-15).is_numerical_trap());
    }
}
