use crate::error::{Error, Result};
use crate::geom::SphericalDirection;

/// Yaw/pitch/roll in degrees, stored canonically:
/// yaw in `[0, 360)`, pitch and roll in `[-180, 180)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationAngles {
    yaw: f64,
    pitch: f64,
    roll: f64,
}

fn wrap_half_open(v: f64, lo: f64, hi: f64) -> f64 {
    let span = hi - lo;
    let w = (v - lo).rem_euclid(span) + lo;
    // rem_euclid can return exactly `span` when v is a tiny negative number.
    if w >= hi {
        lo
    } else {
        w
    }
}

impl RotationAngles {
    /// Canonicalizes the angles; errors if any is non-finite.
    pub fn new(yaw: f64, pitch: f64, roll: f64) -> Result<Self> {
        if !(yaw.is_finite() && pitch.is_finite() && roll.is_finite()) {
            return Err(Error::NonFinite("rotation angles".into()));
        }
        Ok(RotationAngles {
            yaw: wrap_half_open(yaw, 0.0, 360.0),
            pitch: wrap_half_open(pitch, -180.0, 180.0),
            roll: wrap_half_open(roll, -180.0, 180.0),
        })
    }

    pub fn identity() -> Self {
        RotationAngles { yaw: 0.0, pitch: 0.0, roll: 0.0 }
    }

    /// Yaw-only rotation.
    pub fn yaw_only(yaw: f64) -> Result<Self> {
        Self::new(yaw, 0.0, 0.0)
    }

    pub fn yaw(&self) -> f64 {
        self.yaw
    }

    pub fn pitch(&self) -> f64 {
        self.pitch
    }

    pub fn roll(&self) -> f64 {
        self.roll
    }

    pub fn is_identity(&self) -> bool {
        self.yaw == 0.0 && self.pitch == 0.0 && self.roll == 0.0
    }
}

/// A proper orthonormal 3x3 rotation matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationMatrix {
    m: [[f64; 3]; 3],
}

impl RotationMatrix {
    pub fn identity() -> Self {
        RotationMatrix { m: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]] }
    }

    /// Rotation about the up axis (`z`); adds the angle to longitude.
    pub fn about_z(degrees: f64) -> Self {
        let (s, c) = degrees.to_radians().sin_cos();
        RotationMatrix { m: [[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]] }
    }

    /// Rotation about the lateral axis (`y`).
    pub fn about_y(degrees: f64) -> Self {
        let (s, c) = degrees.to_radians().sin_cos();
        RotationMatrix { m: [[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]] }
    }

    /// Rotation about the forward axis (`x`).
    pub fn about_x(degrees: f64) -> Self {
        let (s, c) = degrees.to_radians().sin_cos();
        RotationMatrix { m: [[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]] }
    }

    pub fn matrix(&self) -> [[f64; 3]; 3] {
        self.m
    }

    pub fn at(&self, row: usize, col: usize) -> f64 {
        self.m[row][col]
    }

    /// `self * other` (apply `other` first, then `self`).
    pub fn compose(&self, other: &RotationMatrix) -> RotationMatrix {
        let a = &self.m;
        let b = &other.m;
        let mut m = [[0.0; 3]; 3];
        for (r, row) in m.iter_mut().enumerate() {
            for (c, v) in row.iter_mut().enumerate() {
                *v = a[r][0] * b[0][c] + a[r][1] * b[1][c] + a[r][2] * b[2][c];
            }
        }
        RotationMatrix { m }
    }

    /// The inverse rotation; for an orthonormal matrix this is the transpose.
    pub fn inverse(&self) -> RotationMatrix {
        let m = &self.m;
        RotationMatrix {
            m: [
                [m[0][0], m[1][0], m[2][0]],
                [m[0][1], m[1][1], m[2][1]],
                [m[0][2], m[1][2], m[2][2]],
            ],
        }
    }

    pub fn apply(&self, v: [f64; 3]) -> [f64; 3] {
        let m = &self.m;
        [
            m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
            m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
            m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
        ]
    }

    pub fn apply_direction(&self, d: SphericalDirection) -> SphericalDirection {
        SphericalDirection::from_unit(self.apply(d.components()))
    }

    pub fn det(&self) -> f64 {
        let m = &self.m;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    /// Max-abs entry of `R * R^T - I`.
    pub fn orthonormality_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for r in 0..3 {
            for c in 0..3 {
                let dot: f64 = (0..3).map(|k| self.m[r][k] * self.m[c][k]).sum();
                let target = if r == c { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }
}

/// Builds `R = R_x(roll) * R_y(pitch) * R_z(yaw)`, applied to directions as
/// `v' = R * v`. A yaw-only rotation therefore adds yaw to longitude.
pub fn rotation_matrix(angles: RotationAngles) -> RotationMatrix {
    RotationMatrix::about_x(angles.roll())
        .compose(&RotationMatrix::about_y(angles.pitch()))
        .compose(&RotationMatrix::about_z(angles.yaw()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_angles_give_identity_matrix() {
        let r = rotation_matrix(RotationAngles::identity());
        assert_eq!(r, RotationMatrix::identity());
    }

    #[test]
    fn quarter_yaw_turns_x_into_y() {
        let r = rotation_matrix(RotationAngles::new(90.0, 0.0, 0.0).unwrap());
        let v = r.apply([1.0, 0.0, 0.0]);
        assert!((v[0]).abs() < 1e-15);
        assert!((v[1] - 1.0).abs() < 1e-15);
        assert!((v[2]).abs() < 1e-15);
    }

    #[test]
    fn angles_wrap_to_canonical_ranges() {
        let a = RotationAngles::new(360.0, 180.0, -180.0).unwrap();
        assert_eq!(a.yaw(), 0.0);
        assert_eq!(a.pitch(), -180.0);
        assert_eq!(a.roll(), -180.0);
        let a = RotationAngles::new(-90.0, 190.0, -190.0).unwrap();
        assert_eq!(a.yaw(), 270.0);
        assert_eq!(a.pitch(), -170.0);
        assert_eq!(a.roll(), 170.0);
        assert!(RotationAngles::new(f64::INFINITY, 0.0, 0.0).is_err());
    }

    #[test]
    fn random_matrices_are_orthonormal() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let a = RotationAngles::new(
                rng.random_range(-720.0..720.0),
                rng.random_range(-720.0..720.0),
                rng.random_range(-720.0..720.0),
            )
            .unwrap();
            let r = rotation_matrix(a);
            assert!(r.orthonormality_error() < 1e-12);
            assert!((r.det() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn inverse_is_transpose_and_round_trips_vectors() {
        let r = rotation_matrix(RotationAngles::new(33.0, -14.0, 121.0).unwrap());
        let v = [0.2, -0.7, 0.684];
        let w = r.inverse().apply(r.apply(v));
        for k in 0..3 {
            assert!((w[k] - v[k]).abs() < 1e-12);
        }
    }
}
