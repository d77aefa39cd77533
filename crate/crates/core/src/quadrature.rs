//! Gauss rules and adaptive Gauss-Kronrod integration.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Nodes and weights of the `n`-point Gauss-Laguerre rule,
/// `∫₀^∞ e^{−x} f(x) dx ≈ Σ wᵢ f(xᵢ)`.
pub fn gauss_laguerre<T: Real>(n: usize) -> (Vec<T>, Vec<T>) {
    assert!(n >= 1);
    let nf = n as f64;
    let mut x = vec![0.0f64; n];
    let mut w = vec![0.0f64; n];
    let mut z = 0.0f64;
    for i in 0..n {
        // Asymptotic starting guesses, then Newton on the three-term recurrence.
        z = match i {
            0 => 3.0 / (1.0 + 2.4 * nf),
            1 => z + 15.0 / (1.0 + 2.5 * nf),
            _ => {
                let ai = (i - 1) as f64;
                z + (1.0 + 2.55 * ai) / (1.9 * ai) * (z - x[i - 2])
            }
        };
        let laguerre = |z: f64| {
            let mut p1 = 1.0;
            let mut p2 = 0.0;
            for j in 1..=n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = ((2.0 * jf - 1.0 - z) * p2 - (jf - 1.0) * p3) / jf;
            }
            (p1, p2, (nf * p1 - nf * p2) / z)
        };
        for _ in 0..100 {
            let (p1, _, pp) = laguerre(z);
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= 1e-15 * z.abs() {
                break;
            }
        }
        let (_, p2, pp) = laguerre(z);
        x[i] = z;
        w[i] = -1.0 / (pp * nf * p2);
    }
    (x.into_iter().map(T::lit).collect(), w.into_iter().map(T::lit).collect())
}

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[−1, 1]`.
pub fn gauss_legendre<T: Real>(n: usize) -> (Vec<T>, Vec<T>) {
    assert!(n >= 1);
    let nf = n as f64;
    let mut x = vec![0.0f64; n];
    let mut w = vec![0.0f64; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut pp = 0.0;
        for _ in 0..100 {
            let mut p1 = 1.0;
            let mut p2 = 0.0;
            for j in 1..=n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = ((2.0 * jf - 1.0) * z * p2 - (jf - 1.0) * p3) / jf;
            }
            pp = nf * (z * p1 - p2) / (z * z - 1.0);
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
    (x.into_iter().map(T::lit).collect(), w.into_iter().map(T::lit).collect())
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// One 15-point Kronrod panel: (integral, error estimate).
fn gk15<T: Real, F: FnMut(T) -> T>(f: &mut F, a: T, b: T) -> (T, T) {
    let half = T::lit(0.5);
    let center = half * (a + b);
    let hl = half * (b - a);
    let fc = f(center);
    let mut kronrod = fc * T::lit(WGK[7]);
    let mut gauss = fc * T::lit(WG[3]);
    for k in 0..7 {
        let dx = hl * T::lit(XGK[k]);
        let s = f(center - dx) + f(center + dx);
        kronrod += T::lit(WGK[k]) * s;
        if k % 2 == 1 {
            gauss += T::lit(WG[k / 2]) * s;
        }
    }
    (kronrod * hl, ((kronrod - gauss) * hl).abs())
}

/// Globally adaptive Gauss-Kronrod integration of `f` over `[a, b]`.
///
/// Bisects the panel with the largest error estimate until the total
/// estimate falls below `max(abs_tol, rel_tol·|I|)`.
pub fn integrate<T: Real, F: FnMut(T) -> T>(mut f: F, a: T, b: T, abs_tol: T, rel_tol: T) -> Result<T> {
    let (i0, e0) = gk15(&mut f, a, b);
    let mut panels = vec![(a, b, i0, e0)];
    let mut total = i0;
    let mut err = e0;
    for _ in 0..2000 {
        if err <= abs_tol.max(rel_tol * total.abs()) {
            return Ok(total);
        }
        let (k, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.partial_cmp(&y.1 .3).unwrap_or(std::cmp::Ordering::Equal))
            .expect("non-empty");
        let (pa, pb, pi, pe) = panels.swap_remove(k);
        let mid = T::lit(0.5) * (pa + pb);
        let (l, le) = gk15(&mut f, pa, mid);
        let (r, re) = gk15(&mut f, mid, pb);
        total += l + r - pi;
        err += le + re - pe;
        panels.push((pa, mid, l, le));
        panels.push((mid, pb, r, re));
    }
    // Recompute the sums to avoid drift from the running updates.
    let err: T = panels.iter().map(|p| p.3).sum();
    let total: T = panels.iter().map(|p| p.2).sum();
    if err <= abs_tol.max(rel_tol * total.abs()) {
        Ok(total)
    } else {
        Err(Error::QuadratureFailed { estimate: err.to_f64().unwrap_or(f64::NAN) })
    }
}

/// Composite trapezoid rule on an arbitrary increasing grid.
pub fn trapezoid<T: Real>(t: &[T], y: &[T]) -> T {
    assert_eq!(t.len(), y.len());
    t.windows(2)
        .zip(y.windows(2))
        .map(|(tw, yw)| T::lit(0.5) * (tw[1] - tw[0]) * (yw[0] + yw[1]))
        .sum()
}
