//! Dormand-Prince 5(4) integrator for autonomous systems `y' = f(y)` on complex vectors.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::{Cplx, Real};

#[derive(Debug, Clone, Copy)]
pub struct OdeOptions<T> {
    pub rtol: T,
    /// Absolute tolerance relative to `‖y(0)‖∞`.
    pub atol_rel: T,
    pub max_steps: usize,
    /// Consecutive guard rejections tolerated before giving up.
    pub max_guard_rejections: usize,
}

impl<T: Real> Default for OdeOptions<T> {
    fn default() -> Self {
        Self { rtol: T::lit(1e-8), atol_rel: T::lit(1e-12), max_steps: 5_000_000, max_guard_rejections: 10 }
    }
}

/// Verdict of a step guard on a candidate state.
pub enum Guard {
    Accept,
    Reject(Error),
}

const A: [&[f64]; 6] = [
    &[0.2],
    &[3.0 / 40.0, 9.0 / 40.0],
    &[44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0],
    &[19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0],
    &[9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0],
    &[35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

pub struct Dopri5<T, F> {
    f: F,
    t: T,
    y: Vec<Cplx<T>>,
    k: [Vec<Cplx<T>>; 7],
    ynew: Vec<Cplx<T>>,
    h: T,
    atol: T,
    opts: OdeOptions<T>,
    steps: usize,
}

impl<T: Real, F: FnMut(&[Cplx<T>], &mut [Cplx<T>])> Dopri5<T, F> {
    pub fn new(mut f: F, t0: T, y0: Vec<Cplx<T>>, opts: OdeOptions<T>) -> Self {
        let n = y0.len();
        let mut k: [Vec<Cplx<T>>; 7] = std::array::from_fn(|_| vec![Complex::zero(); n]);
        f(&y0, &mut k[0]);
        let ymax = y0.iter().map(|z| z.norm()).fold(T::zero(), T::max);
        let fmax = k[0].iter().map(|z| z.norm()).fold(T::zero(), T::max);
        let h = if fmax > T::zero() && ymax > T::zero() { T::lit(0.01) * ymax / fmax } else { T::lit(1e-3) };
        let atol = (opts.atol_rel * ymax).max(T::min_positive_value());
        Self { f, t: t0, y: y0, k, ynew: vec![Complex::zero(); n], h, atol, opts, steps: 0 }
    }

    pub fn t(&self) -> T {
        self.t
    }

    pub fn y(&self) -> &[Cplx<T>] {
        &self.y
    }

    /// Takes one accepted step, never past `t_limit`.
    pub fn step(&mut self, t_limit: T, mut guard: impl FnMut(T, &[Cplx<T>]) -> Guard) -> Result<()> {
        let mut guard_rejections = 0;
        loop {
            self.steps += 1;
            if self.steps > self.opts.max_steps {
                return Err(Error::StepSizeCollapse { step: self.h.to_f64().unwrap_or(f64::NAN), time: self.t.to_f64().unwrap_or(f64::NAN) });
            }
            let mut h = self.h;
            let clipped = self.t + h >= t_limit;
            if clipped {
                h = t_limit - self.t;
            }
            if h <= T::epsilon() * T::lit(16.0) * self.t.abs().max(T::one()) && !clipped {
                return Err(Error::StepSizeCollapse { step: h.to_f64().unwrap_or(f64::NAN), time: self.t.to_f64().unwrap_or(f64::NAN) });
            }
            let err = self.trial(h);
            if !(err.is_finite()) || err > T::one() {
                let fac = if err.is_finite() { (T::lit(0.9) * err.powf(T::lit(-0.2))).max(T::lit(0.2)) } else { T::lit(0.2) };
                self.h = h * fac;
                continue;
            }
            let t_new = if clipped { t_limit } else { self.t + h };
            match guard(t_new, &self.ynew) {
                Guard::Accept => {}
                Guard::Reject(e) => {
                    guard_rejections += 1;
                    if guard_rejections > self.opts.max_guard_rejections {
                        return Err(e);
                    }
                    self.h = h * T::lit(0.5);
                    continue;
                }
            }
            std::mem::swap(&mut self.y, &mut self.ynew);
            // First-same-as-last: the last stage is f at the new point.
            self.k.swap(0, 6);
            self.t = t_new;
            let fac = if err > T::zero() { (T::lit(0.9) * err.powf(T::lit(-0.2))).min(T::lit(5.0)).max(T::lit(0.2)) } else { T::lit(5.0) };
            // A step clipped to the target says little about the natural size.
            self.h = if clipped { self.h.max(h * fac) } else { h * fac };
            return Ok(());
        }
    }

    /// Computes the stages and `ynew` for step `h`; returns the scaled error norm.
    fn trial(&mut self, h: T) -> T {
        let n = self.y.len();
        let mut tmp = vec![Complex::zero(); n];
        for s in 0..6 {
            for i in 0..n {
                let mut acc = self.y[i];
                for (j, &a) in A[s].iter().enumerate() {
                    if a != 0.0 {
                        acc += self.k[j][i] * (T::lit(a) * h);
                    }
                }
                tmp[i] = acc;
            }
            (self.f)(&tmp, &mut self.k[s + 1]);
        }
        // Stage 6 evaluated f at the fifth-order solution, which is `tmp`.
        self.ynew.copy_from_slice(&tmp);
        let mut sum = T::zero();
        for i in 0..n {
            let mut e = Complex::zero();
            for (j, &ej) in E.iter().enumerate() {
                if ej != 0.0 {
                    e += self.k[j][i] * T::lit(ej);
                }
            }
            let e = (e * h).norm();
            let sc = self.atol + self.opts.rtol * self.y[i].norm().max(self.ynew[i].norm());
            sum += (e / sc) * (e / sc);
        }
        (sum / T::from_usize_lossy(n.max(1))).sqrt()
    }
}
