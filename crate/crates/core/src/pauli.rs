//! Pauli matrices, ordered (x, y, z).

use crate::linalg::{CMat, C64};

pub fn identity() -> CMat {
    CMat::identity(2)
}

pub fn sigma_x() -> CMat {
    CMat::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0])
}

pub fn sigma_y() -> CMat {
    CMat::from_row_major(
        2,
        2,
        vec![
            C64::new(0.0, 0.0),
            C64::new(0.0, -1.0),
            C64::new(0.0, 1.0),
            C64::new(0.0, 0.0),
        ],
    )
    .expect("finite entries")
}

pub fn sigma_z() -> CMat {
    CMat::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0])
}

pub fn sigmas() -> [CMat; 3] {
    [sigma_x(), sigma_y(), sigma_z()]
}

/// n̂·σ for a real 3-vector.
pub fn dot(n: [f64; 3]) -> CMat {
    let [x, y, z] = n;
    CMat::from_row_major(
        2,
        2,
        vec![
            C64::new(z, 0.0),
            C64::new(x, -y),
            C64::new(x, y),
            C64::new(-z, 0.0),
        ],
    )
    .expect("finite Bloch vector")
}

/// Qubit state ½(I + a·σ).
pub fn bloch_state(a: [f64; 3]) -> CMat {
    (&identity() + &dot(a)).scale(0.5)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dot_matches_explicit_sum() {
        let n = [0.3, -0.4, 0.5];
        let [sx, sy, sz] = sigmas();
        let explicit = &(&sx.scale(n[0]) + &sy.scale(n[1])) + &sz.scale(n[2]);
        assert!((&dot(n) - &explicit).max_abs() < 1e-15);
    }

    #[test]
    fn paulis_square_to_identity() {
        for s in sigmas() {
            assert!((&(&s * &s) - &identity()).max_abs() < 1e-15);
        }
    }
}
