use super::State;

/// Default rounding precision (decimal digits) for duplicate detection.
pub const DEFAULT_KEY_DIGITS: u32 = 6;

/// Canonical, hashable key of a state at a fixed decimal precision.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StateKey {
    bools: Vec<bool>,
    nums: Vec<u64>,
}

/// Rounds every numeric value half-away-from-zero to `decimal_digits`
/// digits and keeps Boolean values exactly.
pub fn state_key(s: &State, decimal_digits: u32) -> StateKey {
    let scale = 10f64.powi(decimal_digits.min(i32::MAX as u32) as i32);
    let nums = s
        .nums
        .iter()
        .map(|&v| {
            let r = (v * scale).round();
            // -0.0 and 0.0 must collide
            if r == 0.0 { 0u64 } else { r.to_bits() }
        })
        .collect();
    StateKey { bools: s.bools.clone(), nums }
}
