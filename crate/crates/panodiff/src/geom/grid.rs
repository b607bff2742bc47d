use crate::error::{Error, Result};

/// Dimensions of an equirectangular pixel grid.
///
/// Construction enforces the 2:1 aspect ratio (`width == 2 * height`), which
/// every panorama, latent, and feature map in this crate shares.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ErpGrid {
    height: usize,
    width: usize,
}

impl ErpGrid {
    pub fn new(height: usize, width: usize) -> Result<Self> {
        if height == 0 {
            return Err(Error::invalid("ErpGrid height must be >= 1"));
        }
        if width != 2 * height {
            return Err(Error::invalid(format!(
                "ErpGrid requires width = 2*height, got {width}x{height}"
            )));
        }
        Ok(ErpGrid { height, width })
    }

    /// Grid from its height alone; width is `2 * height`.
    pub fn with_height(height: usize) -> Result<Self> {
        Self::new(height, 2 * height)
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn pixels(&self) -> usize {
        self.height * self.width
    }

    /// Degrees of longitude spanned by one column.
    pub fn degrees_per_column(&self) -> f64 {
        360.0 / self.width as f64
    }
}

/// A unit vector on the sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalDirection {
    v: [f64; 3],
}

impl SphericalDirection {
    /// Normalizes the given components. Errors on a zero or non-finite vector.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        if !(x.is_finite() && y.is_finite() && z.is_finite()) {
            return Err(Error::NonFinite("direction components".into()));
        }
        let n = (x * x + y * y + z * z).sqrt();
        if n == 0.0 {
            return Err(Error::invalid("zero vector has no direction"));
        }
        Ok(SphericalDirection { v: [x / n, y / n, z / n] })
    }

    /// Wraps components that are already unit length (trig identities make
    /// [`pixel_to_direction`] exact; no renormalization needed).
    pub(crate) fn from_unit(v: [f64; 3]) -> Self {
        SphericalDirection { v }
    }

    pub fn components(&self) -> [f64; 3] {
        self.v
    }

    pub fn x(&self) -> f64 {
        self.v[0]
    }

    pub fn y(&self) -> f64 {
        self.v[1]
    }

    pub fn z(&self) -> f64 {
        self.v[2]
    }
}

/// Continuous ERP coordinates of a direction plus the nearest pixel index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuousPixel {
    /// Continuous row; `-0.5` is the top edge, `H - 0.5` the bottom edge.
    pub row: f64,
    /// Continuous column; wraps modulo `W`.
    pub col: f64,
    /// Nearest pixel, longitude wrapped and latitude clamped.
    pub nearest: (usize, usize),
}

/// Direction of the center of pixel `(i, j)`.
///
/// Longitude `phi = (j + 0.5)/W * 360 - 180` degrees, latitude
/// `theta = 90 - (i + 0.5)/H * 180` degrees.
pub fn pixel_to_direction(grid: ErpGrid, i: usize, j: usize) -> Result<SphericalDirection> {
    if i >= grid.height() || j >= grid.width() {
        return Err(Error::invalid(format!(
            "pixel ({i},{j}) outside {}x{} grid",
            grid.height(),
            grid.width()
        )));
    }
    let lon = ((j as f64 + 0.5) / grid.width() as f64 * 360.0 - 180.0).to_radians();
    let lat = (90.0 - (i as f64 + 0.5) / grid.height() as f64 * 180.0).to_radians();
    let (sin_lat, cos_lat) = lat.sin_cos();
    let (sin_lon, cos_lon) = lon.sin_cos();
    Ok(SphericalDirection::from_unit([cos_lat * cos_lon, cos_lat * sin_lon, sin_lat]))
}

/// Inverse of [`pixel_to_direction`]: continuous grid coordinates of a
/// direction, with the nearest pixel index (ties round away from zero,
/// longitude wraps, latitude clamps).
pub fn direction_to_pixel(grid: ErpGrid, dir: SphericalDirection) -> ContinuousPixel {
    let [x, y, z] = dir.components();
    let lon = y.atan2(x).to_degrees();
    let lat = z.clamp(-1.0, 1.0).asin().to_degrees();
    let col = (lon + 180.0) / 360.0 * grid.width() as f64 - 0.5;
    let row = (90.0 - lat) / 180.0 * grid.height() as f64 - 0.5;
    let nearest_col = (col.round() as i64).rem_euclid(grid.width() as i64) as usize;
    let nearest_row = (row.round() as i64).clamp(0, grid.height() as i64 - 1) as usize;
    ContinuousPixel { row, col, nearest: (nearest_row, nearest_col) }
}
