//! Size limits for the exhaustive verifiers.
//!
//! Above a cap, verifiers either switch to a documented reduced mode or refuse;
//! they never sample silently.

use crate::defect::DEFAULT_DEGREE_CAP;
use crate::ring::DEFAULT_ELEMENT_CAP;

/// Environment variable overriding [`Caps::elements`].
pub const ELEMENT_CAP_ENV: &str = "HEISENRIG_CAP_ELEMS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Caps {
    /// Largest ring (and group) that may be enumerated.
    pub elements: usize,
    /// Largest group order for exhaustive pair checks (homomorphism, Weyl).
    pub exhaustive_group: usize,
    /// Largest additive degree searched for.
    pub degree: usize,
    /// Largest representation dimension handed to the linear solvers.
    pub dimension: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            elements: DEFAULT_ELEMENT_CAP,
            exhaustive_group: 4096,
            degree: DEFAULT_DEGREE_CAP,
            dimension: 256,
        }
    }
}

impl Caps {
    /// Defaults with the element cap taken from the environment when set.
    pub fn from_env() -> Self {
        let mut caps = Caps::default();
        if let Some(v) = std::env::var(ELEMENT_CAP_ENV).ok().and_then(|v| v.trim().parse().ok()) {
            caps.elements = v;
        }
        caps
    }
}
