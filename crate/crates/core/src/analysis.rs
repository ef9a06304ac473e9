//! Hölder-type step bounds for the two schemes and the Dirichlet benchmark
//! `-Δu + q u = f` with a harmonic exact solution.

use std::cmp::Ordering;

use num_traits::Float;

use crate::error::{Error, Result};
use crate::geometry::check_level;
use crate::harmonic::{sample_harmonic, BoundaryData};
use crate::laplacian::{
    laplacian_matrix, renormalization, renormalized_laplacian, TridiagonalMatrix,
};
use crate::scalar::{max_norm, max_norm_diff, Scalar};

/// Reaction coefficient of the reference benchmark.
pub const DEFAULT_Q: f64 = 2.0;

/// `|u(t,X) - u(t,Y)| <= c |X - Y|^alpha` with constant `c`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HolderParams<T> {
    pub alpha: T,
    pub c: T,
}

impl<T: Float> HolderParams<T> {
    pub fn new(alpha: T, c: T) -> Result<Self> {
        let p = HolderParams { alpha, c };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        if self.alpha.partial_cmp(&T::zero()) != Some(Ordering::Greater) || !self.alpha.is_finite()
        {
            return Err(Error::invalid(
                "Hölder exponent must be positive (the bound diverges at alpha = 0)",
            ));
        }
        if self.c.partial_cmp(&T::zero()) != Some(Ordering::Greater) || !self.c.is_finite() {
            return Err(Error::invalid("Hölder constant must be positive"));
        }
        Ok(())
    }

    /// `1 / (1 - 4^-alpha)`, the geometric sum over edge lengths `4^-p`.
    fn series(&self) -> T {
        let four = T::from(4.0).expect("float");
        T::one() / (T::one() - four.powf(-self.alpha))
    }
}

fn check_h<T: Float>(h: T) -> Result<()> {
    if h.partial_cmp(&T::zero()) != Some(Ordering::Greater) || !h.is_finite() {
        return Err(Error::invalid("time step must be positive"));
    }
    Ok(())
}

fn sixty_four_pow<T: Float>(m: u32) -> T {
    T::from(64.0).expect("float").powi(m as i32)
}

/// `64^m h c / (1 - 4^-alpha)`: bound on `|u((k+1)h,X) - u(kh,X)|`.
pub fn heat_holder_bound<T: Float>(p: &HolderParams<T>, m: u32, h: T) -> Result<T> {
    p.validate()?;
    check_h(h)?;
    Ok(sixty_four_pow::<T>(m) * h * p.c * p.series())
}

/// `64^m h^2 c / (1 - 4^-alpha)`: bound on the second time difference.
pub fn wave_holder_bound<T: Float>(p: &HolderParams<T>, m: u32, h: T) -> Result<T> {
    p.validate()?;
    check_h(h)?;
    Ok(sixty_four_pow::<T>(m) * h * h * p.c * p.series())
}

#[derive(Clone, Debug, PartialEq)]
pub struct DirichletProblem<T> {
    pub level: u32,
    pub q: T,
    /// Boundary values of the harmonic exact solution.
    pub boundary: BoundaryData<T>,
}

impl<T: Scalar> DirichletProblem<T> {
    pub fn new(level: u32, q: T, boundary: BoundaryData<T>) -> Self {
        DirichletProblem { level, q, boundary }
    }

    /// `(A, F)` with `A = 64^m MatL + q I` on interior rows and identity rows
    /// at `P_0`, `P_1`; `F = q u` inside and the boundary values at the ends.
    pub fn system(&self) -> Result<(TridiagonalMatrix<T>, Vec<T>)> {
        check_level(self.level)?;
        if self.q.partial_cmp(&T::zero()) != Some(Ordering::Greater) || !self.q.is_finite_value() {
            return Err(Error::invalid("reaction coefficient q must be positive"));
        }
        let mut a = renormalized_laplacian::<T>(self.level)?.shifted(&self.q, &T::one());
        let last = a.dim() - 1;
        a.set_identity_row(0);
        a.set_identity_row(last);
        let exact = sample_harmonic(&self.boundary, self.level)?;
        let mut f: Vec<T> = exact.iter().map(|u| self.q.clone() * u.clone()).collect();
        f[0] = self.boundary.a.clone();
        f[last] = self.boundary.b.clone();
        Ok((a, f))
    }

    pub fn exact(&self) -> Result<Vec<T>> {
        sample_harmonic(&self.boundary, self.level)
    }

    /// The action of the system matrix, evaluated as
    /// `q u_i + 64^m (2 u_i - u_{i-1} - u_{i+1})` on interior rows so the
    /// neighbour differences are taken before the large scale factor.
    pub fn apply_operator(&self, u: &[T]) -> Result<Vec<T>> {
        check_level(self.level)?;
        let lap = laplacian_matrix::<T>(self.level)?.apply(u)?;
        let scale = renormalization::<T>(self.level);
        let last = u.len() - 1;
        Ok(u.iter()
            .zip(lap)
            .enumerate()
            .map(|(i, (ui, li))| {
                if i == 0 || i == last {
                    ui.clone()
                } else {
                    self.q.clone() * ui.clone() + scale.clone() * li
                }
            })
            .collect())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DirichletSolution<T> {
    pub values: Vec<T>,
    /// `||A u_m - F||_inf`.
    pub residual: T,
    /// `||F||_inf`.
    pub rhs_norm: T,
}

/// Solve the benchmark system by tridiagonal elimination.
///
/// The boundary values are lifted with their discrete harmonic extension
/// `g`, and the elimination solves `A v = F - A g` with homogeneous
/// boundary rows; the result is `g + v`.
pub fn solve_dirichlet<T: Scalar>(p: &DirichletProblem<T>) -> Result<DirichletSolution<T>> {
    let (a, f) = p.system()?;
    let lift = sample_harmonic(&p.boundary, p.level)?;
    let lifted = p.apply_operator(&lift)?;
    let rhs: Vec<T> = f
        .iter()
        .zip(&lifted)
        .map(|(x, y)| x.clone() - y.clone())
        .collect();
    let correction = a.solve(&rhs)?;
    let values: Vec<T> = lift
        .into_iter()
        .zip(correction)
        .map(|(g, v)| g + v)
        .collect();
    let residual = max_norm_diff(&p.apply_operator(&values)?, &f);
    Ok(DirichletSolution {
        values,
        residual,
        rhs_norm: max_norm(&f),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct DirichletReport<T> {
    pub level: u32,
    pub q: T,
    pub boundary: BoundaryData<T>,
    /// `E_m = ||u - u_m||_inf` over all vertices.
    pub error: T,
    pub residual: T,
}

pub fn dirichlet_error<T: Scalar>(p: &DirichletProblem<T>) -> Result<DirichletReport<T>> {
    let sol = solve_dirichlet(p)?;
    let exact = p.exact()?;
    Ok(DirichletReport {
        level: p.level,
        q: p.q.clone(),
        boundary: p.boundary.clone(),
        error: max_norm_diff(&sol.values, &exact),
        residual: sol.residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn rel_close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs()
    }

    #[test]
    fn heat_bound_examples() {
        let p = HolderParams::new(1.0, 1.0).unwrap();
        assert!(rel_close(
            heat_holder_bound(&p, 0, 1.0).unwrap(),
            4.0 / 3.0,
            1e-15
        ));
        let b = heat_holder_bound(&p, 3, 1e-6).unwrap();
        assert!(rel_close(b, 262_144.0e-6 / 0.75, 1e-12));
        assert!((b - 0.3495).abs() < 1e-4);
        let mut last = 0.0;
        for m in 0..6 {
            let b = heat_holder_bound(&p, m, 1e-6).unwrap();
            assert!(b > last);
            last = b;
        }
    }

    #[test]
    fn wave_bound_examples() {
        let p = HolderParams::new(1.0, 1.0).unwrap();
        assert!(rel_close(
            wave_holder_bound(&p, 0, 1.0).unwrap(),
            4.0 / 3.0,
            1e-15
        ));
        let b = wave_holder_bound(&p, 2, 1e-2).unwrap();
        assert!(rel_close(b, 4096.0e-4 / 0.75, 1e-12));
        assert!((b - 0.546).abs() < 1e-3);
        for (m, h) in [(0, 0.5), (3, 1e-3), (5, 2e-7)] {
            let heat = heat_holder_bound(&p, m, h).unwrap();
            assert!(rel_close(
                wave_holder_bound(&p, m, h).unwrap(),
                heat * h,
                1e-14
            ));
        }
    }

    #[test]
    fn bound_parameter_errors() {
        assert!(HolderParams::new(0.0, 1.0).is_err());
        assert!(HolderParams::new(-1.0, 1.0).is_err());
        assert!(HolderParams::new(1.0, 0.0).is_err());
        let bad = HolderParams { alpha: 0.0, c: 1.0 };
        assert!(heat_holder_bound(&bad, 1, 0.1).is_err());
        let p = HolderParams::new(0.5f32, 2.0).unwrap();
        assert!(wave_holder_bound(&p, 1, 0.0).is_err());
        assert!(heat_holder_bound(&p, 1, 0.1).unwrap() > 0.0);
    }

    #[test]
    fn homogeneous_problem_is_zero() {
        let p = DirichletProblem::new(2, 2.0, BoundaryData::new(0.0, 0.0));
        let r = dirichlet_error(&p).unwrap();
        assert_eq!(r.error, 0.0);
        assert_eq!(r.residual, 0.0);
    }

    #[test]
    fn harmonic_data_exact_in_rationals() {
        // Dense-free oracle: exact arithmetic must reproduce the harmonic sample.
        for m in 0..=2 {
            let bd = BoundaryData::new(BigRational::from_i64(0), BigRational::from_i64(1));
            let p = DirichletProblem::new(m, BigRational::from_i64(2), bd);
            let r = dirichlet_error(&p).unwrap();
            assert_eq!(r.error, BigRational::from_i64(0));
            assert_eq!(r.residual, BigRational::from_i64(0));
        }
    }

    #[test]
    fn harmonic_data_f64() {
        for m in 0..=6 {
            let p = DirichletProblem::new(m, 2.0, BoundaryData::new(0.0, 1.0));
            let sol = solve_dirichlet(&p).unwrap();
            assert!(sol.residual <= 1e-10 * sol.rhs_norm.max(1.0));
            let r = dirichlet_error(&p).unwrap();
            assert!(r.error <= 1e-10, "m={m} E={}", r.error);
        }
    }

    #[test]
    fn structured_apply_matches_matrix() {
        let p = DirichletProblem::new(2, 2.0, BoundaryData::new(0.5, -1.0));
        let (a, _) = p.system().unwrap();
        let u: Vec<f64> = (0..65)
            .map(|i| ((i * 37 % 11) as f64 - 5.0) / 7.0)
            .collect();
        let dense = a.apply(&u).unwrap();
        let structured = p.apply_operator(&u).unwrap();
        assert!(max_norm_diff(&dense, &structured) <= 1e-12 * max_norm(&dense));
    }

    #[test]
    fn non_harmonic_rhs_against_rational_oracle() {
        // Solve with a perturbed right-hand side in f64 and exactly; the lifted
        // elimination must agree with the exact solution.
        let m = 2;
        let pf = DirichletProblem::new(m, 2.0, BoundaryData::new(1.0, 3.0));
        let (af, mut ff) = pf.system().unwrap();
        ff[7] += 0.5;
        let got = af.solve(&ff).unwrap();

        type Q = BigRational;
        let pq = DirichletProblem::new(
            m,
            Q::from_i64(2),
            BoundaryData::new(Q::from_i64(1), Q::from_i64(3)),
        );
        let (aq, mut fq) = pq.system().unwrap();
        fq[7] = fq[7].clone() + Q::ratio(1, 2);
        let exact = aq.solve(&fq).unwrap();
        for (g, e) in got.iter().zip(&exact) {
            assert!((g - Scalar::to_f64(e)).abs() <= 1e-12);
        }
    }

    #[test]
    fn rejects_nonpositive_q() {
        let p = DirichletProblem::new(1, 0.0, BoundaryData::new(0.0, 1.0));
        assert!(solve_dirichlet(&p).is_err());
    }
}
