//! Special functions: log-gamma, generalized hypergeometric series and
//! Meijer G-functions of type G^{q,0}_{p,q}.

pub mod gamma;
pub mod hypergeometric;
pub mod meijer;

pub use gamma::{digamma, gamma, ln_gamma, ln_gamma_complex, ln_gamma_ratio, ln_gamma_signed, trigamma};
pub use hypergeometric::{pfq, pfq_real, PfqTerms, SeriesResult};
pub use meijer::{meijer_g_q0, meijer_g_q0_complement, ContourConfig, MeijerGSpec};
