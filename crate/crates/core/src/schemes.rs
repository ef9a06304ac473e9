//! Explicit time stepping for the heat and wave equations on `V_m` with
//! homogeneous Dirichlet conditions at `P_0` and `P_1`.
//!
//! Heat: `U(k+1) = (I - h L) U(k)`. Wave: `U(k+1) = (2I - h^2 L) U(k) - U(k-1)`.
//! Here `L = 64^m MatL[m]`. The full `8^m + 1` vector is stepped and the two
//! boundary entries are overwritten with zero after every step.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::geometry::{cell_count, check_level, vertex_count};
use crate::harmonic::{sample_harmonic, BoundaryData};
use crate::laplacian::{
    laplacian_matrix, max_eigenvalue, renormalization, renormalized_laplacian, TridiagonalMatrix,
    EIGEN_TOL,
};
use crate::scalar::{max_norm, Scalar};

/// Spectral stability threshold for `h * lambda_max`.
pub const HEAT_SPECTRAL_LIMIT: f64 = 2.0;
/// Spectral stability threshold for `h^2 * lambda_max`.
pub const WAVE_SPECTRAL_LIMIT: f64 = 4.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scheme {
    Heat,
    Wave,
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::Heat => "heat",
            Scheme::Wave => "wave",
        })
    }
}

/// Initial displacement or velocity.
#[derive(Clone, Debug, PartialEq)]
pub enum InitialCondition<T> {
    Zero,
    /// Value 1 at chain index `j`, 0 elsewhere.
    Impulse(usize),
    /// Harmonic function with the given boundary values.
    Harmonic {
        a: T,
        b: T,
    },
    /// `sin(pi * frequency * param)`.
    ParameterSine {
        frequency: T,
    },
    /// Explicit values, one per vertex.
    Samples(Vec<T>),
}

impl<T: Scalar> InitialCondition<T> {
    /// Values on `V_m`, boundary entries projected to zero.
    pub fn evaluate(&self, m: u32) -> Result<Vec<T>> {
        check_level(m)?;
        let n = vertex_count(m);
        let mut v = match self {
            InitialCondition::Zero => vec![T::zero(); n],
            InitialCondition::Impulse(j) => {
                if *j >= n {
                    return Err(Error::invalid(format!(
                        "impulse index {j} outside 0..{n} at level {m}"
                    )));
                }
                let mut v = vec![T::zero(); n];
                v[*j] = T::one();
                v
            }
            InitialCondition::Harmonic { a, b } => {
                sample_harmonic(&BoundaryData::new(a.clone(), b.clone()), m)?
            }
            InitialCondition::ParameterSine { frequency } => {
                let f = frequency.to_f64();
                let cells = cell_count(m) as f64;
                (0..n)
                    .map(|i| T::from_f64((std::f64::consts::PI * f * i as f64 / cells).sin()))
                    .collect()
            }
            InitialCondition::Samples(values) => {
                if values.len() != n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        found: values.len(),
                    });
                }
                values.clone()
            }
        };
        clamp_boundary(&mut v);
        Ok(v)
    }

    /// Short textual descriptor, e.g. `impulse:256`.
    pub fn descriptor(&self) -> String {
        match self {
            InitialCondition::Zero => "zero".into(),
            InitialCondition::Impulse(j) => format!("impulse:{j}"),
            InitialCondition::Harmonic { a, b } => {
                format!("harmonic:{},{}", a.to_f64(), b.to_f64())
            }
            InitialCondition::ParameterSine { frequency } => format!("sine:{}", frequency.to_f64()),
            InitialCondition::Samples(v) => format!("samples[{}]", v.len()),
        }
    }
}

fn clamp_boundary<T: Scalar>(v: &mut [T]) {
    if let Some(first) = v.first_mut() {
        *first = T::zero();
    }
    if let Some(last) = v.last_mut() {
        *last = T::zero();
    }
}

fn check_finite<T: Scalar>(v: &[T], step: usize) -> Result<()> {
    if v.iter().all(Scalar::is_finite_value) {
        Ok(())
    } else {
        Err(Error::Diverged { step })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SchemeConfig<T> {
    pub level: u32,
    /// Horizon `T`.
    pub horizon: T,
    /// Number of steps `N`; `h = T / N`.
    pub steps: usize,
    pub initial: InitialCondition<T>,
    /// Initial velocity, used by the wave scheme only.
    pub velocity: InitialCondition<T>,
    /// Step indices to record. Step 0 is always recorded.
    pub snapshots: Vec<usize>,
    /// Abort with [`Error::Diverged`] once the max-norm exceeds this factor
    /// times `max(||U(0)||, 1)`. Non-finite values always abort.
    pub growth_limit: Option<T>,
}

impl<T: Scalar> SchemeConfig<T> {
    pub fn new(level: u32, horizon: T, steps: usize, initial: InitialCondition<T>) -> Self {
        SchemeConfig {
            level,
            horizon,
            steps,
            initial,
            velocity: InitialCondition::Zero,
            snapshots: vec![0, steps],
            growth_limit: None,
        }
    }

    pub fn with_growth_limit(mut self, limit: Option<T>) -> Self {
        self.growth_limit = limit;
        self
    }

    pub fn with_velocity(mut self, velocity: InitialCondition<T>) -> Self {
        self.velocity = velocity;
        self
    }

    pub fn with_snapshots(mut self, snapshots: Vec<usize>) -> Self {
        self.snapshots = snapshots;
        self
    }

    pub fn step_size(&self) -> T {
        self.horizon.clone() / T::from_usize(self.steps)
    }

    fn validate(&self) -> Result<Vec<usize>> {
        check_level(self.level)?;
        if self.steps == 0 {
            return Err(Error::invalid("number of steps must be at least 1"));
        }
        if self.horizon.partial_cmp(&T::zero()) != Some(Ordering::Greater)
            || !self.horizon.is_finite_value()
        {
            return Err(Error::invalid("horizon must be positive and finite"));
        }
        if let Some(limit) = &self.growth_limit {
            if limit.partial_cmp(&T::one()) != Some(Ordering::Greater) {
                return Err(Error::invalid("growth limit must exceed 1"));
            }
        }
        let mut snaps = self.snapshots.clone();
        snaps.push(0);
        snaps.sort_unstable();
        snaps.dedup();
        if let Some(&last) = snaps.last() {
            if last > self.steps {
                return Err(Error::invalid(format!(
                    "snapshot step {last} exceeds N = {}",
                    self.steps
                )));
            }
        }
        Ok(snaps)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolutionSnapshot<T> {
    pub step: usize,
    pub time: T,
    pub values: Vec<T>,
}

fn check_step<T: Scalar>(h: &T) -> Result<()> {
    if *h < T::zero() || !h.is_finite_value() {
        return Err(Error::invalid("time step must be non-negative and finite"));
    }
    Ok(())
}

/// `I - h * 64^m * MatL[m]`.
pub fn heat_step_matrix<T: Scalar>(m: u32, h: &T) -> Result<TridiagonalMatrix<T>> {
    check_step(h)?;
    let coef = h.clone() * renormalization::<T>(m);
    Ok(laplacian_matrix::<T>(m)?.shifted(&T::one(), &-coef))
}

/// `2I - h^2 * 64^m * MatL[m]`.
pub fn wave_step_matrix<T: Scalar>(m: u32, h: &T) -> Result<TridiagonalMatrix<T>> {
    check_step(h)?;
    let coef = h.clone() * h.clone() * renormalization::<T>(m);
    Ok(laplacian_matrix::<T>(m)?.shifted(&T::from_i64(2), &-coef))
}

/// Forward Euler heat stepper.
#[derive(Clone, Debug)]
pub struct HeatIntegrator<T> {
    matrix: TridiagonalMatrix<T>,
    state: Vec<T>,
    scratch: Vec<T>,
    step: usize,
}

impl<T: Scalar> HeatIntegrator<T> {
    pub fn new(m: u32, h: &T, mut initial: Vec<T>) -> Result<Self> {
        let matrix = heat_step_matrix(m, h)?;
        if initial.len() != matrix.dim() {
            return Err(Error::DimensionMismatch {
                expected: matrix.dim(),
                found: initial.len(),
            });
        }
        clamp_boundary(&mut initial);
        let scratch = vec![T::zero(); initial.len()];
        Ok(HeatIntegrator {
            matrix,
            state: initial,
            scratch,
            step: 0,
        })
    }

    pub fn from_config(cfg: &SchemeConfig<T>) -> Result<Self> {
        Self::new(
            cfg.level,
            &cfg.step_size(),
            cfg.initial.evaluate(cfg.level)?,
        )
    }

    pub fn step(&mut self) -> Result<()> {
        self.matrix.apply_into(&self.state, &mut self.scratch)?;
        std::mem::swap(&mut self.state, &mut self.scratch);
        clamp_boundary(&mut self.state);
        self.step += 1;
        check_finite(&self.state, self.step)
    }

    pub fn state(&self) -> &[T] {
        &self.state
    }

    pub fn step_index(&self) -> usize {
        self.step
    }
}

/// Three-term leapfrog wave stepper. Holds `(U(k-1), U(k))`.
#[derive(Clone, Debug)]
pub struct WaveIntegrator<T> {
    matrix: TridiagonalMatrix<T>,
    prev: Vec<T>,
    curr: Vec<T>,
    scratch: Vec<T>,
    step: usize,
}

impl<T: Scalar> WaveIntegrator<T> {
    /// Starts from `U(0)` and the Taylor value
    /// `U(1) = U(0) + h V(0) - (h^2/2) L U(0)`; the integrator is at step 1.
    pub fn new(m: u32, h: &T, mut initial: Vec<T>, mut velocity: Vec<T>) -> Result<Self> {
        let matrix = wave_step_matrix(m, h)?;
        let n = matrix.dim();
        for v in [&initial, &velocity] {
            if v.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: v.len(),
                });
            }
        }
        clamp_boundary(&mut initial);
        clamp_boundary(&mut velocity);
        let lap_u0 = renormalized_laplacian::<T>(m)?.apply(&initial)?;
        let half_h2 = h.clone() * h.clone() * T::half();
        let mut first: Vec<T> = initial
            .iter()
            .zip(&velocity)
            .zip(&lap_u0)
            .map(|((u, v), l)| u.clone() + h.clone() * v.clone() - half_h2.clone() * l.clone())
            .collect();
        clamp_boundary(&mut first);
        check_finite(&first, 1)?;
        Ok(WaveIntegrator {
            matrix,
            prev: initial,
            curr: first,
            scratch: vec![T::zero(); n],
            step: 1,
        })
    }

    pub fn from_config(cfg: &SchemeConfig<T>) -> Result<Self> {
        Self::new(
            cfg.level,
            &cfg.step_size(),
            cfg.initial.evaluate(cfg.level)?,
            cfg.velocity.evaluate(cfg.level)?,
        )
    }

    /// `U(k+1) = A U(k) - U(k-1)`.
    pub fn step(&mut self) -> Result<()> {
        self.matrix.apply_into(&self.curr, &mut self.scratch)?;
        for (s, p) in self.scratch.iter_mut().zip(&self.prev) {
            *s = s.clone() - p.clone();
        }
        clamp_boundary(&mut self.scratch);
        // prev <- curr, curr <- next
        std::mem::swap(&mut self.prev, &mut self.curr);
        std::mem::swap(&mut self.curr, &mut self.scratch);
        self.step += 1;
        check_finite(&self.curr, self.step)
    }

    /// `U(k-2) = A U(k-1) - U(k)`: moves the window one step back.
    pub fn step_back(&mut self) -> Result<()> {
        if self.step == 0 {
            return Err(Error::invalid("cannot step back before U(0)"));
        }
        self.matrix.apply_into(&self.prev, &mut self.scratch)?;
        for (s, c) in self.scratch.iter_mut().zip(&self.curr) {
            *s = s.clone() - c.clone();
        }
        clamp_boundary(&mut self.scratch);
        std::mem::swap(&mut self.curr, &mut self.prev);
        std::mem::swap(&mut self.prev, &mut self.scratch);
        self.step -= 1;
        check_finite(&self.prev, self.step)
    }

    /// `U(k)`.
    pub fn state(&self) -> &[T] {
        &self.curr
    }

    /// `U(k-1)`.
    pub fn previous(&self) -> &[T] {
        &self.prev
    }

    pub fn step_index(&self) -> usize {
        self.step
    }
}

/// Runaway-growth detector for [`SchemeConfig::growth_limit`].
struct GrowthGuard<T> {
    ceiling: Option<T>,
}

impl<T: Scalar> GrowthGuard<T> {
    fn new(limit: &Option<T>, initial: &[T]) -> Self {
        let reference = T::max_of(max_norm(initial), T::one());
        GrowthGuard {
            ceiling: limit.clone().map(|l| l * reference),
        }
    }

    fn check(&self, state: &[T], step: usize) -> Result<()> {
        match &self.ceiling {
            Some(c) if max_norm(state) > *c => Err(Error::Diverged { step }),
            _ => Ok(()),
        }
    }
}

fn snapshot<T: Scalar>(step: usize, h: &T, values: &[T]) -> SolutionSnapshot<T> {
    SolutionSnapshot {
        step,
        time: T::from_usize(step) * h.clone(),
        values: values.to_vec(),
    }
}

/// Run the heat scheme for `N` steps and return the requested snapshots.
pub fn heat_solve<T: Scalar>(cfg: &SchemeConfig<T>) -> Result<Vec<SolutionSnapshot<T>>> {
    let wanted = cfg.validate()?;
    let h = cfg.step_size();
    let mut run = HeatIntegrator::from_config(cfg)?;
    let guard = GrowthGuard::new(&cfg.growth_limit, run.state());
    let last = *wanted.last().expect("step 0 is always present");
    let mut out = Vec::with_capacity(wanted.len());
    let mut next = wanted.iter().peekable();
    loop {
        let k = run.step_index();
        if next.peek() == Some(&&k) {
            out.push(snapshot(k, &h, run.state()));
            next.next();
        }
        if k >= last {
            break;
        }
        run.step()?;
        guard.check(run.state(), run.step_index())?;
    }
    Ok(out)
}

/// Run the wave scheme for `N` steps and return the requested snapshots.
pub fn wave_solve<T: Scalar>(cfg: &SchemeConfig<T>) -> Result<Vec<SolutionSnapshot<T>>> {
    let wanted = cfg.validate()?;
    let h = cfg.step_size();
    let mut run = WaveIntegrator::from_config(cfg)?;
    let guard = GrowthGuard::new(&cfg.growth_limit, run.previous());
    guard.check(run.state(), 1)?;
    let last = *wanted.last().expect("step 0 is always present");
    let mut out = Vec::with_capacity(wanted.len());
    let mut next = wanted.iter().peekable();
    if next.peek() == Some(&&0) {
        out.push(snapshot(0, &h, run.previous()));
        next.next();
    }
    loop {
        let k = run.step_index();
        if next.peek() == Some(&&k) {
            out.push(snapshot(k, &h, run.state()));
            next.next();
        }
        if k >= last {
            break;
        }
        run.step()?;
        guard.check(run.state(), run.step_index())?;
    }
    Ok(out)
}

/// Max-norm error in `U(0)` after `N` forward and `N` backward leapfrog steps.
pub fn wave_reversal_error<T: Scalar>(cfg: &SchemeConfig<T>) -> Result<T> {
    cfg.validate()?;
    let mut run = WaveIntegrator::from_config(cfg)?;
    let u0 = run.previous().to_vec();
    for _ in 0..cfg.steps {
        run.step()?;
    }
    for _ in 0..cfg.steps {
        run.step_back()?;
    }
    Ok(crate::scalar::max_norm_diff(run.previous(), &u0))
}

#[derive(Clone, Debug, PartialEq)]
pub struct StabilityReport<T> {
    pub scheme: Scheme,
    /// `h * 64^m` (heat) or `h^2 * 64^m` (wave).
    pub ratio: T,
    /// `h * lambda_max` (heat) or `h^2 * lambda_max` (wave) of `64^m MatL[m]`.
    pub spectral_bound: T,
    pub stable: bool,
}

/// Report the step ratio and the spectral stability criterion.
pub fn stability_check<T: Scalar>(scheme: Scheme, m: u32, h: &T) -> Result<StabilityReport<T>> {
    check_step(h)?;
    let lap = renormalized_laplacian::<T>(m)?;
    let lambda = max_eigenvalue(&lap, &T::from_f64(EIGEN_TOL))?;
    let factor = match scheme {
        Scheme::Heat => h.clone(),
        Scheme::Wave => h.clone() * h.clone(),
    };
    let limit = match scheme {
        Scheme::Heat => HEAT_SPECTRAL_LIMIT,
        Scheme::Wave => WAVE_SPECTRAL_LIMIT,
    };
    let spectral_bound = factor.clone() * lambda;
    Ok(StabilityReport {
        scheme,
        ratio: factor * renormalization::<T>(m),
        stable: spectral_bound <= T::from_f64(limit),
        spectral_bound,
    })
}
