//! Gauss-Kronrod 7/15 rule and its tensor product, summed in log form.

use super::{IntegrandSample, QuadValue};

// Abscissae of the 15-point Kronrod rule on [-1, 1]; odd entries (index 1, 3,
// 5, 7) are the 7-point Gauss nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

pub(crate) const POINTS: usize = 15;

/// The 15 nodes on [-1, 1] with Kronrod and Gauss weights (Gauss weight 0
/// for Kronrod-only nodes).
pub(crate) fn nodes() -> [(f64, f64, f64); POINTS] {
    let mut out = [(0.0, 0.0, 0.0); POINTS];
    for i in 0..7 {
        let wg = if i % 2 == 1 { WG[i / 2] } else { 0.0 };
        out[i] = (-XGK[i], WGK[i], wg);
        out[POINTS - 1 - i] = (XGK[i], WGK[i], wg);
    }
    out[7] = (0.0, WGK[7], WG[3]);
    out
}

/// Rule output for one region, relative to `exp(shift)`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Estimate<V> {
    pub shift: f64,
    pub value: V,
    pub error: f64,
    /// `int |f|`, the scale against which roundoff is judged.
    pub magnitude: f64,
    /// Axis along which the Gauss/Kronrod disagreement is largest.
    pub split_axis: usize,
}

impl<V: QuadValue> Estimate<V> {
    fn empty() -> Self {
        Estimate {
            shift: f64::NEG_INFINITY,
            value: V::zero(),
            error: 0.0,
            magnitude: 0.0,
            split_axis: 0,
        }
    }
}

fn max_finite(samples: impl Iterator<Item = f64>) -> f64 {
    samples.filter(|x| !x.is_nan()).fold(f64::NEG_INFINITY, f64::max)
}

/// 1D rule on `[a, b]`.
pub(crate) fn segment<V: QuadValue>(f: &impl Fn(f64) -> IntegrandSample<V>, a: f64, b: f64) -> Estimate<V> {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let samples: Vec<(IntegrandSample<V>, f64, f64)> = nodes()
        .iter()
        .map(|&(x, wk, wg)| (f(centre + half * x), wk, wg))
        .collect();
    let shift = max_finite(samples.iter().map(|s| s.0.log_weight));
    if shift == f64::NEG_INFINITY {
        return Estimate::empty();
    }
    let mut kronrod = V::zero();
    let mut gauss = V::zero();
    let mut magnitude = 0.0;
    for (s, wk, wg) in &samples {
        if s.log_weight == f64::NEG_INFINITY {
            continue;
        }
        let term = s.value * (s.log_weight - shift).exp();
        kronrod = kronrod + term * *wk;
        magnitude += term.norm() * *wk;
        if *wg != 0.0 {
            gauss = gauss + term * *wg;
        }
    }
    let value = kronrod * half;
    let error = (kronrod - gauss).norm() * half.abs();
    Estimate {
        shift,
        value,
        error: if value.is_finite() { error } else { f64::NAN },
        magnitude: magnitude * half.abs(),
        split_axis: 0,
    }
}

/// Tensor-product rule on a rectangle.
pub(crate) fn rectangle<V: QuadValue>(
    f: &impl Fn(f64, f64) -> IntegrandSample<V>,
    x: (f64, f64),
    y: (f64, f64),
) -> Estimate<V> {
    let nodes = nodes();
    let (cx, hx) = (0.5 * (x.0 + x.1), 0.5 * (x.1 - x.0));
    let (cy, hy) = (0.5 * (y.0 + y.1), 0.5 * (y.1 - y.0));
    let mut samples = Vec::with_capacity(POINTS * POINTS);
    for &(u, _, _) in &nodes {
        for &(v, _, _) in &nodes {
            samples.push(f(cx + hx * u, cy + hy * v));
        }
    }
    let shift = max_finite(samples.iter().map(|s| s.log_weight));
    if shift == f64::NEG_INFINITY {
        return Estimate::empty();
    }
    // Kronrod/Kronrod, Gauss/Kronrod, Kronrod/Gauss and Gauss/Gauss sums.
    let mut kk = V::zero();
    let mut gk = V::zero();
    let mut kg = V::zero();
    let mut gg = V::zero();
    let mut magnitude = 0.0;
    for (i, &(_, wkx, wgx)) in nodes.iter().enumerate() {
        for (j, &(_, wky, wgy)) in nodes.iter().enumerate() {
            let s = &samples[i * POINTS + j];
            if s.log_weight == f64::NEG_INFINITY {
                continue;
            }
            let term = s.value * (s.log_weight - shift).exp();
            kk = kk + term * (wkx * wky);
            magnitude += term.norm() * (wkx * wky);
            if wgx != 0.0 {
                gk = gk + term * (wgx * wky);
            }
            if wgy != 0.0 {
                kg = kg + term * (wkx * wgy);
            }
            if wgx != 0.0 && wgy != 0.0 {
                gg = gg + term * (wgx * wgy);
            }
        }
    }
    let area = (hx * hy).abs();
    let value = kk * (hx * hy);
    let error_x = (kk - gk).norm();
    let error_y = (kk - kg).norm();
    let error = (kk - gg).norm().max(error_x).max(error_y) * area;
    Estimate {
        shift,
        value,
        error: if value.is_finite() { error } else { f64::NAN },
        magnitude: magnitude * area,
        split_axis: usize::from(error_y > error_x),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two() {
        let n = nodes();
        let k: f64 = n.iter().map(|x| x.1).sum();
        let g: f64 = n.iter().map(|x| x.2).sum();
        assert!((k - 2.0).abs() < 1e-15);
        assert!((g - 2.0).abs() < 1e-15);
    }

    #[test]
    fn exact_for_polynomials() {
        // Kronrod is exact to degree 22, Gauss to degree 13.
        let f = |x: f64| IntegrandSample::from(x.powi(12) + 1.0);
        let e = segment(&f, 0.0, 1.0);
        let got = e.value * e.shift.exp();
        assert!((got - (1.0 / 13.0 + 1.0)).abs() < 1e-14);
        assert!(e.error < 1e-13);
    }
}
