use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Spatial dimension of the domain. Only the unit interval and the unit ball
/// in three dimensions are supported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Dim {
    One,
    Three,
}

impl Dim {
    pub fn n(self) -> usize {
        match self {
            Dim::One => 1,
            Dim::Three => 3,
        }
    }

    pub fn from_usize(d: usize) -> Result<Self> {
        match d {
            1 => Ok(Dim::One),
            3 => Ok(Dim::Three),
            other => Err(Error::UnsupportedDimension {
                expected: 3,
                got: other,
            }),
        }
    }

    /// Number of boundary functionals `d + 1`.
    pub fn n_functionals(self) -> usize {
        self.n() + 1
    }
}

/// A point of the closed domain.
///
/// For `Dim::One` the domain is `[0, 1]` and only `coords[0]` is used; for
/// `Dim::Three` it is the closed unit ball centred at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    coords: [f64; 3],
    dim: Dim,
}

impl Point {
    pub fn new(coords: &[f64]) -> Result<Self> {
        let dim = Dim::from_usize(coords.len())?;
        let mut c = [0.0; 3];
        c[..coords.len()].copy_from_slice(coords);
        let p = Point { coords: c, dim };
        if !p.in_closed_domain() {
            return Err(Error::OutsideDomain(coords.to_vec()));
        }
        Ok(p)
    }

    /// Point without the domain check; used for quadrature nodes that are
    /// known to be inside.
    pub(crate) fn raw(dim: Dim, coords: [f64; 3]) -> Self {
        Point { coords, dim }
    }

    pub fn on_line(x: f64) -> Result<Self> {
        Self::new(&[x])
    }

    pub fn in_ball(x: [f64; 3]) -> Result<Self> {
        Self::new(&x)
    }

    /// A puncture must be strictly interior.
    pub fn puncture(coords: &[f64]) -> Result<Self> {
        let p = Self::new(coords)?;
        if p.distance_to_boundary() <= 0.0 {
            return Err(Error::PunctureNotInterior(coords.to_vec()));
        }
        Ok(p)
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.coords[..self.dim.n()]
    }

    pub fn coords3(&self) -> [f64; 3] {
        self.coords
    }

    pub fn norm_sq(&self) -> f64 {
        self.as_slice().iter().map(|c| c * c).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn distance_to_boundary(&self) -> f64 {
        match self.dim {
            Dim::One => self.coords[0].min(1.0 - self.coords[0]),
            Dim::Three => 1.0 - self.norm(),
        }
    }

    fn in_closed_domain(&self) -> bool {
        const SLACK: f64 = 1e-12;
        match self.dim {
            Dim::One => (-SLACK..=1.0 + SLACK).contains(&self.coords[0]),
            Dim::Three => self.norm() <= 1.0 + SLACK,
        }
    }

    pub fn distance(&self, other: &Point) -> f64 {
        self.as_slice()
            .iter()
            .zip(other.as_slice())
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    /// `self + t * dir`, unchecked.
    pub fn offset(&self, t: f64, dir: &[f64]) -> Point {
        let mut c = self.coords;
        for (ci, di) in c.iter_mut().zip(dir) {
            *ci += t * di;
        }
        Point::raw(self.dim, c)
    }

    pub fn x(&self) -> f64 {
        self.coords[0]
    }
}
