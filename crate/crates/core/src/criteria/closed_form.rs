use crate::error::{Error, Result};

/// `num/den`, taking the limit 0 when the numerator vanishes. The only
/// vanishing denominators on the simplex occur at corners where the matching
/// numerator is also zero.
fn ratio(num: f64, den: f64) -> f64 {
    if num == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// Margin of the signed Pauli criterion on
/// `((1−x−y)/8) I + x|GHZ⟩⟨GHZ| + y|W⟩⟨W|`:
///
/// ```text
/// f(x,y) = 16x²/(1+3x−y) + 524y²/(9(1+3y−x)) + 12(x−y)²/(1+3x+3y) − 10
/// ```
pub fn closed_form_f(x: f64, y: f64) -> Result<f64> {
    const TOL: f64 = 1e-12;
    if !(x >= -TOL && y >= -TOL && x + y <= 1.0 + TOL) {
        return Err(Error::param(format!(
            "(x, y) = ({x}, {y}) lies outside the simplex"
        )));
    }
    let (x, y) = (x.max(0.0), y.max(0.0));
    Ok(ratio(16.0 * x * x, 1.0 + 3.0 * x - y)
        + ratio(524.0 * y * y, 9.0 * (1.0 + 3.0 * y - x))
        + ratio(12.0 * (x - y) * (x - y), 1.0 + 3.0 * x + 3.0 * y)
        - 10.0)
}

/// Margin of the full Gell-Mann criterion on white-noise GHZ states of three
/// qudits:
///
/// ```text
/// g(d,p) = 6p²d²(d−1)(d+3)/(2+(d³−2)p) − 2(d−1)(3d+4)/d
/// ```
pub fn closed_form_g(d: usize, p: f64) -> Result<f64> {
    if d < 2 {
        return Err(Error::param(format!("d must be at least 2, got {d}")));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::param(format!("p = {p} outside [0, 1]")));
    }
    let d = d as f64;
    let d3 = d * d * d;
    Ok(
        6.0 * p * p * d * d * (d - 1.0) * (d + 3.0) / (2.0 + (d3 - 2.0) * p)
            - 2.0 * (d - 1.0) * (3.0 * d + 4.0) / d,
    )
}
