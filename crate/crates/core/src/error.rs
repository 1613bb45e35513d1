use thiserror::Error;

/// Failures raised by the numerical core.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not a traceless anti-Hermitian element of su(3) (defect {defect:.3e})")]
    InvalidAlgebraElement { defect: f64 },

    #[error("matrix is not special unitary (unitarity defect {unitarity:.3e}, det defect {det:.3e})")]
    NotSpecialUnitary { unitarity: f64, det: f64 },

    #[error("element is not regular: minimal eigenvalue gap {gap:.3e} is below {threshold:.1e}")]
    NonRegular { gap: f64, threshold: f64 },

    #[error("matrix drifted {deviation:.3e} away from the unitary group; refusing to project")]
    DriftExplosion { deviation: f64 },

    #[error("fiber residual {residual:.3e} exceeds tolerance {tolerance:.1e}")]
    FiberDrift { residual: f64, tolerance: f64 },

    #[error("trace {re}+{im}i lies outside the trace domain (defect {defect:.3e})")]
    OutsideTraceDomain { re: f64, im: f64, defect: f64 },

    #[error("the boundary curve has constant trace on every fiber; its twist flow is trivial")]
    TrivialFlow,

    #[error("central_fiber_point needs k in {{1, 2}}; k = 0 is the abelian fiber, use abelian_point")]
    AbelianFiberRequested,

    #[error("word is not hyperbolic: |trace| = {trace} <= 2")]
    NotHyperbolic { trace: i64 },

    #[error("start points lie on different fibers (distance {distance:.3e})")]
    FiberMismatch { distance: f64 },

    #[error("fiber label is central; use the central fiber operations (central_fiber_rigidity or abelian_hyperbolic_test)")]
    CentralFiber,

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
