//! Numerical certification of plurisubharmonicity and admissibility.

mod certify;
mod hessian;
mod submean;

pub use certify::{certify_admissible, CertifyConfig, PshCertificate, MIN_CERTIFY_SAMPLES};
pub use hessian::{fd_complex_hessian, fd_complex_hessian_richardson};
pub use submean::{probe_directions, submean_test, SUBMEAN_SLACK};
