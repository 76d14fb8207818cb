//! One-dimensional particle discretisation of a finite interval.
//!
//! The interval `[a, b]` is partitioned into subintervals with edges
//! `x_0 = a < x_1 < ... < x_N = b`; one particle sits at the centre of each
//! subinterval and carries the subinterval width as its volume. Optional
//! boundary (ghost) particles continue the outermost spacing past each end.

use crate::error::{QsphError, Result};

/// A closed interval `[a, b]` with `a < b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain {
    a: f64,
    b: f64,
}

impl Domain {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(QsphError::InvalidDomain { a, b });
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn length(&self) -> f64 {
        self.b - self.a
    }

    /// `n` evaluation points spaced uniformly over `[a, b]`, both endpoints
    /// included. These are query points, not particle positions.
    pub fn sample_points(&self, n: usize) -> Result<Vec<f64>> {
        if n < 2 {
            return Err(QsphError::TooFewPoints(n));
        }
        let step = self.length() / (n - 1) as f64;
        let mut points: Vec<f64> = (0..n).map(|j| self.a + j as f64 * step).collect();
        points[n - 1] = self.b;
        Ok(points)
    }
}

/// Particle positions and widths for a partition of a [`Domain`].
///
/// Particles are stored in ascending position order: the left boundary
/// particles, then the interior particles, then the right boundary
/// particles.
#[derive(Debug, Clone, PartialEq)]
pub struct ParticleDiscretisation {
    domain: Domain,
    edges: Vec<f64>,
    positions: Vec<f64>,
    widths: Vec<f64>,
    n_boundary_each_end: usize,
}

impl ParticleDiscretisation {
    /// Uniform partition of `domain` into `num_particles` subintervals with
    /// `n_boundary_each_end` extra particles past each end.
    pub fn uniform(domain: Domain, num_particles: usize, n_boundary_each_end: usize) -> Result<Self> {
        if num_particles == 0 {
            return Err(QsphError::NoParticles);
        }
        let step = domain.length() / num_particles as f64;
        let mut edges: Vec<f64> = (0..=num_particles)
            .map(|k| domain.a() + k as f64 * step)
            .collect();
        edges[num_particles] = domain.b();
        Self::from_edges(edges, n_boundary_each_end)
    }

    /// General (possibly non-uniform) partition given by its edges.
    ///
    /// Boundary particles repeat the width of the outermost interior
    /// subinterval on each side.
    pub fn from_edges(edges: Vec<f64>, n_boundary_each_end: usize) -> Result<Self> {
        if edges.len() < 2 {
            return Err(QsphError::NoParticles);
        }
        if edges.iter().any(|x| !x.is_finite()) || edges.windows(2).any(|w| w[1] <= w[0]) {
            return Err(QsphError::InvalidEdges);
        }
        let n = edges.len() - 1;
        let domain = Domain::new(edges[0], edges[n])?;

        let first_width = edges[1] - edges[0];
        let last_width = edges[n] - edges[n - 1];
        let total = n + 2 * n_boundary_each_end;
        let mut positions = Vec::with_capacity(total);
        let mut widths = Vec::with_capacity(total);

        for j in (0..n_boundary_each_end).rev() {
            positions.push(domain.a() - 0.5 * first_width - j as f64 * first_width);
            widths.push(first_width);
        }
        for w in edges.windows(2) {
            positions.push(0.5 * (w[1] + w[0]));
            widths.push(w[1] - w[0]);
        }
        for j in 0..n_boundary_each_end {
            positions.push(domain.b() + 0.5 * last_width + j as f64 * last_width);
            widths.push(last_width);
        }

        Ok(Self {
            domain,
            edges,
            positions,
            widths,
            n_boundary_each_end,
        })
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    /// Interior partition edges `x_0..x_N`.
    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    /// All particle positions, boundary particles included.
    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    /// All particle widths, boundary particles included.
    pub fn widths(&self) -> &[f64] {
        &self.widths
    }

    pub fn interior_positions(&self) -> &[f64] {
        &self.positions[self.n_boundary_each_end..self.n_boundary_each_end + self.num_interior()]
    }

    pub fn interior_widths(&self) -> &[f64] {
        &self.widths[self.n_boundary_each_end..self.n_boundary_each_end + self.num_interior()]
    }

    pub fn num_interior(&self) -> usize {
        self.edges.len() - 1
    }

    pub fn n_boundary_each_end(&self) -> usize {
        self.n_boundary_each_end
    }

    pub fn total_count(&self) -> usize {
        self.positions.len()
    }

    /// Whether particle `k` (in storage order) lies outside the domain.
    pub fn is_boundary(&self, k: usize) -> bool {
        k < self.n_boundary_each_end || k >= self.n_boundary_each_end + self.num_interior()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dom(a: f64, b: f64) -> Domain {
        Domain::new(a, b).unwrap()
    }

    #[test]
    fn uniform_midpoints() {
        let d = ParticleDiscretisation::uniform(dom(-1.0, 1.0), 4, 0).unwrap();
        assert_eq!(d.positions(), &[-0.75, -0.25, 0.25, 0.75]);
        assert!(d.widths().iter().all(|&w| w == 0.5));
        assert_eq!(d.total_count(), 4);
    }

    #[test]
    fn boundary_particles_continue_grid() {
        let d = ParticleDiscretisation::uniform(dom(-1.0, 1.0), 2, 1).unwrap();
        assert_eq!(d.positions(), &[-1.5, -0.5, 0.5, 1.5]);
        assert!(d.widths().iter().all(|&w| w == 1.0));
        assert_eq!(d.total_count(), 4);
        assert!(d.is_boundary(0) && d.is_boundary(3));
        assert!(!d.is_boundary(1) && !d.is_boundary(2));
        assert_eq!(d.interior_positions(), &[-0.5, 0.5]);
    }

    #[test]
    fn four_boundary_particles_each_end() {
        let d = ParticleDiscretisation::uniform(dom(-1.0, 1.0), 16, 4).unwrap();
        assert_eq!(d.total_count(), 24);
        let p = d.positions();
        assert_eq!(p[0], -1.0 - 0.0625 - 3.0 * 0.125);
        assert_eq!(p[23], 1.0 + 0.0625 + 3.0 * 0.125);
    }

    #[test]
    fn widths_telescope() {
        let d = ParticleDiscretisation::uniform(dom(0.0, 1.0), 8, 0).unwrap();
        assert_eq!(d.widths().iter().sum::<f64>(), 1.0);
    }

    #[test]
    fn non_uniform_edges() {
        let d = ParticleDiscretisation::from_edges(vec![0.0, 0.1, 0.5, 1.0], 2).unwrap();
        let expected = [-0.15, -0.05, 0.05, 0.3, 0.75, 1.25, 1.75];
        for (got, want) in d.positions().iter().zip(expected) {
            assert!((got - want).abs() < 1e-15, "{got} vs {want}");
        }
        assert_eq!(d.widths()[0], 0.1);
        assert_eq!(d.widths()[6], 0.5);
        for (k, w) in d.edges().windows(2).enumerate() {
            assert!(d.interior_positions()[k] > w[0] && d.interior_positions()[k] < w[1]);
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(Domain::new(1.0, 1.0), Err(QsphError::InvalidDomain { .. })));
        assert!(matches!(Domain::new(2.0, -1.0), Err(QsphError::InvalidDomain { .. })));
        assert!(Domain::new(f64::NAN, 1.0).is_err());
        assert!(matches!(
            ParticleDiscretisation::uniform(dom(0.0, 1.0), 0, 3),
            Err(QsphError::NoParticles)
        ));
        assert!(matches!(
            ParticleDiscretisation::from_edges(vec![0.0, 0.5, 0.5, 1.0], 0),
            Err(QsphError::InvalidEdges)
        ));
    }

    #[test]
    fn sample_points_linspace() {
        assert_eq!(dom(-1.0, 1.0).sample_points(3).unwrap(), vec![-1.0, 0.0, 1.0]);
        assert_eq!(
            dom(0.0, 2.0).sample_points(5).unwrap(),
            vec![0.0, 0.5, 1.0, 1.5, 2.0]
        );
        let p = dom(-1.0, 1.0).sample_points(300).unwrap();
        assert_eq!(p.len(), 300);
        assert_eq!(p[0], -1.0);
        assert_eq!(p[299], 1.0);
        assert!((p[1] - p[0] - 2.0 / 299.0).abs() < 1e-15);
        assert!(matches!(dom(0.0, 1.0).sample_points(1), Err(QsphError::TooFewPoints(1))));
    }

    proptest::proptest! {
        #[test]
        fn uniform_invariants(a in -5.0f64..5.0, len in 0.01f64..10.0, n in 1usize..300, nb in 0usize..6) {
            let d = ParticleDiscretisation::uniform(dom(a, a + len), n, nb).unwrap();
            proptest::prop_assert_eq!(d.total_count(), n + 2 * nb);
            proptest::prop_assert!(d.positions().windows(2).all(|w| w[0] < w[1]));
            let e = d.edges();
            proptest::prop_assert_eq!(e[0], a);
            proptest::prop_assert_eq!(e[n], a + len);
            for (k, (&r, &w)) in d.interior_positions().iter().zip(d.interior_widths()).enumerate() {
                proptest::prop_assert!(e[k] < r && r < e[k + 1]);
                proptest::prop_assert!((r - 0.5 * w - e[k]).abs() <= 1e-14 * (1.0 + e[k].abs()));
            }
            let total: f64 = d.interior_widths().iter().sum();
            proptest::prop_assert!((total - len).abs() <= 1e-12 * len.max(1.0));
        }
    }
}
