//! Errors raised by checks, game evaluation, and exemplar construction.

use crate::model::{AuditId, ExecutionId, InputId, VariantId};

/// Failure modes for operations on an already-validated model.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EngineError {
    #[error("unknown variant {0:?}")]
    UnknownVariant(VariantId),
    #[error("unknown input {0:?}")]
    UnknownInput(InputId),
    #[error("unknown audit {0:?}")]
    UnknownAudit(AuditId),
    #[error("unknown execution {0:?}")]
    UnknownExecution(ExecutionId),
    #[error(
        "audit {audit:?} is unsound: it rejects ideal execution {execution:?} \
         on input {input:?} with positive probability"
    )]
    UnsoundAudit {
        audit: AuditId,
        input: InputId,
        execution: ExecutionId,
    },
    #[error("model has no sound audit")]
    NoSoundAudit,
    #[error("variant {0:?} is a context mutation, not a feasible attack strategy")]
    InvalidAttack(VariantId),
    #[error("model has no verification audit (audit id starting with \"verify_\")")]
    NoVerificationAudits,
    #[error("threshold {0} is not a probability in [0, 1]")]
    InvalidThreshold(crate::rational::Rational),
    #[error("conditioning event has probability zero")]
    ZeroConditioner,
    #[error("invalid exemplar parameters: {0}")]
    InvalidExemplarParams(String),
}
