//! Certified constants of the pipeline, each derived from the previous ones.

/// Outerstring refinement bound (30 + 10 + 30).
pub const OUTERSTRING_REFINED: u32 = 70;
/// Layered outerplanar impression.
pub const OUTERPLANAR_X: u32 = 11;
pub const OUTERPLANAR_Y: u32 = 9;
pub const OUTERSTRING_X: u32 = OUTERPLANAR_X * OUTERSTRING_REFINED;

pub const ENCIRCLE_A: u32 = 3 * OUTERSTRING_REFINED;
pub const ENFORCED_A: u32 = 4 * ENCIRCLE_A;
pub const SURROUND_C: u32 = 4;
pub const CAGE_D: u32 = 7;
pub const ENCASE_A: u32 = OUTERPLANAR_X * ENFORCED_A;
pub const ENCASE_B: u32 = OUTERPLANAR_Y;

/// Fortification width.
pub const FORTIFY_K: u32 = 2 * SURROUND_C;
pub const STRING_X: u32 = ENCASE_A + 2;
/// Chain of at most `CAGE_D + 1` sets of IM weak diameter `ENCASE_B`, joined
/// by `CAGE_D` touching steps.
pub const CAGE_CHAIN: u32 = CAGE_D + (CAGE_D + 1) * ENCASE_B;
/// Certified IM parameter of the recursion; rounds `CAGE_CHAIN` up.
pub const STRING_Y: u32 = 80;
const _: () = assert!(CAGE_CHAIN <= STRING_Y);

pub const TRANSFER_X: u32 = FORTIFY_K * STRING_X;
pub const QUASI_X1: u64 = TRANSFER_X as u64 + FORTIFY_K as u64;
pub const QUASI_X2: u64 = TRANSFER_X as u64;
pub const QUASI_X3: u64 = 2 * STRING_Y as u64;
pub const QUASI_X4: u64 = STRING_Y as u64;

/// Final bounds: `d_S / LOWER_DIVISOR <= d_out <= UPPER_FACTOR * d_S`.
pub const LOWER_DIVISOR: u64 = 2 * QUASI_X4 * (QUASI_X1 + QUASI_X2);
pub const UPPER_FACTOR: u64 = QUASI_X3 + 2;
/// Metric front end halves distances once more.
pub const METRIC_LOWER_DIVISOR: u64 = 2 * LOWER_DIVISOR;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_chain() {
        assert_eq!(OUTERSTRING_X, 770);
        assert_eq!(ENCIRCLE_A, 210);
        assert_eq!(ENFORCED_A, 840);
        assert_eq!(ENCASE_A, 9240);
        assert_eq!(STRING_X, 9242);
        assert_eq!(TRANSFER_X, 73936);
        assert_eq!(QUASI_X1, 73944);
        assert_eq!(QUASI_X3, 160);
        assert_eq!(UPPER_FACTOR, 162);
        assert_eq!(CAGE_CHAIN, 79);
        assert_eq!(STRING_Y, 80);
        assert_eq!(LOWER_DIVISOR, 23_660_800);
        assert_eq!(METRIC_LOWER_DIVISOR, 47_321_600);
    }
}
