/// Quintic smoothstep `6t⁵ - 15t⁴ + 10t³`, clamped to `[0, 1]`; C² with
/// vanishing first and second derivatives at both ends.
pub fn smoothstep5(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        t * t * t * (t * (6.0 * t - 15.0) + 10.0)
    }
}

/// Nested radial cutoffs in chart coordinates.
///
/// `chi1 = 1` on `|u| ≤ r1` and vanishes for `|u| ≥ r2`; `chi2 = 1` on
/// `|u| ≤ r2` and vanishes for `|u| ≥ r3`. Because `chi2` is exactly 1
/// wherever `chi1` is nonzero, `chi1·chi2 = chi1` holds bit for bit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CutoffPair {
    r1: f64,
    r2: f64,
    r3: f64,
}

impl CutoffPair {
    pub fn new(r1: f64, r2: f64, r3: f64) -> crate::Result<Self> {
        if !(0.0 < r1 && r1 < r2 && r2 < r3) {
            return Err(crate::Error::Config(alloc::format!(
                "cutoff radii must satisfy 0 < r1 < r2 < r3, got {r1}, {r2}, {r3}"
            )));
        }
        Ok(Self { r1, r2, r3 })
    }

    pub fn radii(&self) -> [f64; 3] {
        [self.r1, self.r2, self.r3]
    }

    pub fn chi1(&self, u: [f64; 2]) -> f64 {
        1.0 - smoothstep5((libm::hypot(u[0], u[1]) - self.r1) / (self.r2 - self.r1))
    }

    pub fn chi2(&self, u: [f64; 2]) -> f64 {
        1.0 - smoothstep5((libm::hypot(u[0], u[1]) - self.r2) / (self.r3 - self.r2))
    }
}
