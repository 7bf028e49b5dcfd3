//! Deterministic low-discrepancy points for the audits.

/// Additive recurrence `frac(0.5 + k α)` with α built from the d-dimensional
/// generalized golden ratio (Roberts' R_d sequence).
#[derive(Debug, Clone)]
pub struct Rd<const D: usize> {
    alpha: [f64; D],
    k: u64,
}

impl<const D: usize> Rd<D> {
    pub fn new() -> Self {
        // root of x^(D+1) = x + 1
        let mut phi = 2.0_f64;
        for _ in 0..64 {
            phi = libm::pow(1.0 + phi, 1.0 / (D as f64 + 1.0));
        }
        let mut alpha = [0.0; D];
        let mut p = 1.0;
        for a in alpha.iter_mut() {
            p /= phi;
            *a = p;
        }
        Self { alpha, k: 0 }
    }
}

impl<const D: usize> Default for Rd<D> {
    fn default() -> Self {
        Self::new()
    }
}

impl<const D: usize> Iterator for Rd<D> {
    type Item = [f64; D];

    fn next(&mut self) -> Option<[f64; D]> {
        self.k += 1;
        let k = self.k as f64;
        Some(self.alpha.map(|a| {
            let v = 0.5 + k * a;
            v - libm::floor(v)
        }))
    }
}
