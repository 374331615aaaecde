//! Exit codes: 0 all checks pass, 1 a check failed, 2 invalid input, 3 resource guardrail.

use fillin_core::matrix::MatrixError;
use fillin_core::reduction::ReductionError;
use fillin_core::solvers::SolverError;
use fillin_core::transfer::TransferError;

pub const CHECK_FAILED: u8 = 1;
pub const INVALID_INPUT: u8 = 2;
pub const GUARDRAIL: u8 = 3;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn invalid(message: impl Into<String>) -> Self {
        Failure {
            code: INVALID_INPUT,
            message: message.into(),
        }
    }

    pub fn check(message: impl Into<String>) -> Self {
        Failure {
            code: CHECK_FAILED,
            message: message.into(),
        }
    }
}

impl From<SolverError> for Failure {
    fn from(e: SolverError) -> Self {
        Failure {
            code: GUARDRAIL,
            message: e.to_string(),
        }
    }
}

impl From<ReductionError> for Failure {
    fn from(e: ReductionError) -> Self {
        let code = match &e {
            ReductionError::TooLarge { .. } | ReductionError::Solver(_) => GUARDRAIL,
            ReductionError::Falsified(_) => CHECK_FAILED,
            _ => INVALID_INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<TransferError> for Failure {
    fn from(e: TransferError) -> Self {
        match e {
            TransferError::Reduction(r) => r.into(),
            TransferError::InvalidFillIn { .. } | TransferError::NotSupergraph { .. } => Failure::check(e.to_string()),
            other => Failure::invalid(other.to_string()),
        }
    }
}

impl From<MatrixError> for Failure {
    fn from(e: MatrixError) -> Self {
        Failure::invalid(e.to_string())
    }
}

impl From<fillin_core::dimacs::ParseError> for Failure {
    fn from(e: fillin_core::dimacs::ParseError) -> Self {
        Failure::invalid(e.to_string())
    }
}

impl From<fillin_core::GraphError> for Failure {
    fn from(e: fillin_core::GraphError) -> Self {
        Failure::invalid(e.to_string())
    }
}

impl From<fillin_core::generate::GenerateError> for Failure {
    fn from(e: fillin_core::generate::GenerateError) -> Self {
        Failure::invalid(e.to_string())
    }
}
