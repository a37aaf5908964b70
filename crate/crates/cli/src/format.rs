//! Floating-point formatting for the CSV artifacts.

/// Format a float with its shortest round-trip representation, padded with
/// zeros to at least 12 fractional digits.
///
/// Full precision keeps serialized lattices bit-for-bit reloadable; the
/// padding keeps columns of zeros and integers visually aligned with the
/// fractional values next to them. Zeros are canonicalized (no `-0`).
pub fn fmt_float(x: f64) -> String {
    debug_assert!(x.is_finite());
    let x = if x == 0.0 { 0.0 } else { x };
    let s = x.to_string();
    match s.find('.') {
        Some(dot) => {
            let fractional = s.len() - dot - 1;
            if fractional < 12 {
                format!("{s}{}", "0".repeat(12 - fractional))
            } else {
                s
            }
        }
        None => format!("{s}.{}", "0".repeat(12)),
    }
}
