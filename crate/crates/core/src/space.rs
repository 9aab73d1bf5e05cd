use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpaceError {
    #[error("parameter space needs at least one dimension")]
    Empty,
    #[error("lower has {lower} entries but upper has {upper}")]
    DimensionMismatch { lower: usize, upper: usize },
    #[error("dimension {dim}: lower bound {lower} is not below upper bound {upper}")]
    InvertedBounds { dim: usize, lower: f64, upper: f64 },
    #[error("grid_points_per_dim must be positive")]
    EmptyGrid,
    #[error("point has {got} coordinates, space has {expected}")]
    WrongArity { expected: usize, got: usize },
    #[error("point {point:?} lies outside the parameter space")]
    OutOfBounds { point: Vec<f64> },
}

/// The discretized search domain: a box with the same number of grid points
/// along every axis.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamSpace {
    lower: Vec<f64>,
    upper: Vec<f64>,
    grid_points_per_dim: usize,
}

impl ParamSpace {
    pub fn new(
        lower: Vec<f64>,
        upper: Vec<f64>,
        grid_points_per_dim: usize,
    ) -> Result<Self, SpaceError> {
        if lower.is_empty() {
            return Err(SpaceError::Empty);
        }
        if lower.len() != upper.len() {
            return Err(SpaceError::DimensionMismatch {
                lower: lower.len(),
                upper: upper.len(),
            });
        }
        for (dim, (&lo, &hi)) in lower.iter().zip(&upper).enumerate() {
            if !(lo < hi) {
                return Err(SpaceError::InvertedBounds {
                    dim,
                    lower: lo,
                    upper: hi,
                });
            }
        }
        if grid_points_per_dim == 0 {
            return Err(SpaceError::EmptyGrid);
        }
        Ok(Self {
            lower,
            upper,
            grid_points_per_dim,
        })
    }

    pub fn dims(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn grid_points_per_dim(&self) -> usize {
        self.grid_points_per_dim
    }

    pub fn width(&self, dim: usize) -> f64 {
        self.upper[dim] - self.lower[dim]
    }

    /// Number of candidates in the grid.
    pub fn len(&self) -> usize {
        self.grid_points_per_dim.pow(self.dims() as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Coordinate of grid index `k` along `dim`. A one-point grid sits at the
    /// midpoint of the interval.
    fn axis_value(&self, dim: usize, k: usize) -> f64 {
        let n = self.grid_points_per_dim;
        if n == 1 {
            return 0.5 * (self.lower[dim] + self.upper[dim]);
        }
        if k == n - 1 {
            return self.upper[dim];
        }
        self.lower[dim] + self.width(dim) * k as f64 / (n - 1) as f64
    }

    /// The candidate at flat index `index`, row-major (last dimension fastest).
    pub fn candidate(&self, index: usize) -> Vec<f64> {
        let n = self.grid_points_per_dim;
        let d = self.dims();
        let mut point = vec![0.0; d];
        let mut rest = index;
        for dim in (0..d).rev() {
            point[dim] = self.axis_value(dim, rest % n);
            rest /= n;
        }
        point
    }

    /// All candidates in enumeration order.
    pub fn candidates(&self) -> Vec<Vec<f64>> {
        (0..self.len()).map(|i| self.candidate(i)).collect()
    }

    pub fn contains(&self, point: &[f64]) -> bool {
        point.len() == self.dims()
            && point
                .iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(&x, (&lo, &hi))| x >= lo && x <= hi)
    }

    pub fn check_point(&self, point: &[f64]) -> Result<(), SpaceError> {
        if point.len() != self.dims() {
            return Err(SpaceError::WrongArity {
                expected: self.dims(),
                got: point.len(),
            });
        }
        if !self.contains(point) {
            return Err(SpaceError::OutOfBounds {
                point: point.to_vec(),
            });
        }
        Ok(())
    }
}

/// One evaluated `(theta, y)` pair.
#[derive(Debug, Clone, PartialEq)]
pub struct Observation {
    pub theta: Vec<f64>,
    pub y: f64,
}

impl Observation {
    pub fn new(theta: Vec<f64>, y: f64) -> Self {
        Self { theta, y }
    }
}
