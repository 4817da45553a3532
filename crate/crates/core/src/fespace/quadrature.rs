use crate::error::{Error, Result};

/// Quadrature on the reference triangle `{x, y >= 0, x + y <= 1}`.
///
/// Weights are positive and sum to the reference area 1/2.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadRule {
    pub degree: usize,
    pub points: Vec<[f64; 2]>,
    pub weights: Vec<f64>,
}

impl QuadRule {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = ([f64; 2], f64)> + '_ {
        self.points.iter().copied().zip(self.weights.iter().copied())
    }
}

/// Symmetric orbit generators: (barycentric coordinate pattern, weight
/// relative to the triangle area).
enum Orbit {
    Centroid(f64),
    /// `(a, b, b)` and permutations, 3 points.
    Three(f64, f64),
    /// `(a, b, c)` and permutations, 6 points.
    Six(f64, f64, f64),
}

fn expand(orbits: &[Orbit], degree: usize) -> QuadRule {
    let mut points = Vec::new();
    let mut weights = Vec::new();
    // barycentric (l0, l1, l2) -> reference (x, y) = (l1, l2)
    let mut push = |l: [f64; 3], w: f64| {
        points.push([l[1], l[2]]);
        weights.push(0.5 * w);
    };
    for orbit in orbits {
        match *orbit {
            Orbit::Centroid(w) => push([1.0 / 3.0; 3], w),
            Orbit::Three(a, w) => {
                let b = 0.5 * (1.0 - a);
                push([a, b, b], w);
                push([b, a, b], w);
                push([b, b, a], w);
            }
            Orbit::Six(a, b, w) => {
                let c = 1.0 - a - b;
                for l in [[a, b, c], [a, c, b], [b, a, c], [b, c, a], [c, a, b], [c, b, a]] {
                    push(l, w);
                }
            }
        }
    }
    QuadRule { degree, points, weights }
}

/// Returns a rule exact for polynomials of total degree `degree` (1..=6).
pub fn quadrature_rule(degree: usize) -> Result<QuadRule> {
    use Orbit::*;
    let rule = match degree {
        1 => expand(&[Centroid(1.0)], 1),
        2 => expand(&[Three(2.0 / 3.0, 1.0 / 3.0)], 2),
        // Strang-Fix / Dunavant 6-point rule, exact to degree 4.
        3 | 4 => expand(
            &[Three(0.108_103_018_168_070, 0.223_381_589_678_011), Three(0.816_847_572_980_459, 0.109_951_743_655_322)],
            degree,
        ),
        5 => expand(
            &[
                Centroid(0.225),
                Three(0.059_715_871_789_770, 0.132_394_152_788_506),
                Three(0.797_426_985_353_087, 0.125_939_180_544_827),
            ],
            5,
        ),
        6 => expand(
            &[
                Three(0.501_426_509_658_179, 0.116_786_275_726_379),
                Three(0.873_821_971_016_996, 0.050_844_906_370_207),
                Six(0.053_145_049_844_817, 0.310_352_451_033_784, 0.082_851_075_618_374),
            ],
            6,
        ),
        _ => return Err(Error::InvalidArgument(format!("quadrature degree {degree} not supported (1..=6)"))),
    };
    Ok(rule)
}

/// Gauss-Legendre points and weights on `[0, 1]`; `n` in 1..=3.
pub fn gauss_legendre_unit(n: usize) -> Vec<(f64, f64)> {
    match n {
        1 => vec![(0.5, 1.0)],
        2 => {
            let d = 0.5 / 3f64.sqrt();
            vec![(0.5 - d, 0.5), (0.5 + d, 0.5)]
        }
        3 => {
            let d = 0.5 * (0.6f64).sqrt();
            vec![(0.5 - d, 5.0 / 18.0), (0.5, 8.0 / 18.0), (0.5 + d, 5.0 / 18.0)]
        }
        _ => panic!("gauss_legendre_unit supports 1..=3 points"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factorial(n: u32) -> f64 {
        (1..=n).map(f64::from).product()
    }

    /// Closed form of the monomial integral over the reference triangle.
    fn monomial_exact(a: u32, b: u32) -> f64 {
        factorial(a) * factorial(b) / factorial(a + b + 2)
    }

    #[test]
    fn constant_integrates_to_half() {
        let r = quadrature_rule(1).unwrap();
        let s: f64 = r.weights.iter().sum();
        assert_eq!(s, 0.5);
    }

    #[test]
    fn weights_positive_and_sum_to_area() {
        for d in 1..=6 {
            let r = quadrature_rule(d).unwrap();
            assert!(r.weights.iter().all(|&w| w > 0.0));
            assert!((r.weights.iter().sum::<f64>() - 0.5).abs() < 1e-14);
            for p in &r.points {
                assert!(p[0] >= 0.0 && p[1] >= 0.0 && p[0] + p[1] <= 1.0 + 1e-15);
            }
        }
    }

    #[test]
    fn x2y2_with_degree_five() {
        let r = quadrature_rule(5).unwrap();
        let v: f64 = r.iter().map(|(p, w)| w * p[0].powi(2) * p[1].powi(2)).sum();
        assert!((v - 1.0 / 180.0).abs() < 1e-14);
    }

    #[test]
    fn monomial_exactness_all_degrees() {
        for d in 1..=6u32 {
            let r = quadrature_rule(d as usize).unwrap();
            for a in 0..=d {
                for b in 0..=(d - a) {
                    let v: f64 = r.iter().map(|(p, w)| w * p[0].powi(a as i32) * p[1].powi(b as i32)).sum();
                    let exact = monomial_exact(a, b);
                    assert!((v - exact).abs() < 1e-13, "degree {d}: x^{a} y^{b}: {v} vs {exact}");
                }
            }
        }
    }

    #[test]
    fn unsupported_degree() {
        assert!(quadrature_rule(0).is_err());
        assert!(quadrature_rule(7).is_err());
    }

    #[test]
    fn gauss_legendre_exactness() {
        for n in 1..=3 {
            let r = gauss_legendre_unit(n);
            for k in 0..(2 * n) as i32 {
                let v: f64 = r.iter().map(|(s, w)| w * s.powi(k)).sum();
                assert!((v - 1.0 / (k as f64 + 1.0)).abs() < 1e-15);
            }
        }
    }
}
