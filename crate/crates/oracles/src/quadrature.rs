//! Adaptive Gauss–Kronrod (7/15) quadrature with recursive bisection.

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
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

/// One G7/K15 panel: (kronrod estimate, |kronrod - gauss|).
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Integrates `f` over `[a, b]` to an absolute error estimate below `tol`.
///
/// Panics if the refinement depth is exhausted; the oracle is only used on
/// integrands that are smooth on the closed interval.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    let mut total = 0.0;
    let mut stack = vec![(a, b, tol, 0u32)];
    while let Some((lo, hi, eps, depth)) = stack.pop() {
        let (value, err) = gk15(&f, lo, hi);
        if err <= eps.max(1e-15 * value.abs()) {
            total += value;
        } else {
            assert!(depth < 60, "quadrature failed to converge on [{lo}, {hi}]");
            let mid = 0.5 * (lo + hi);
            stack.push((lo, mid, 0.5 * eps, depth + 1));
            stack.push((mid, hi, 0.5 * eps, depth + 1));
        }
    }
    total
}

/// `∫_{u1}^{2} du / (u sqrt(1 - u²/4))` by quadrature.
///
/// The inverse square-root endpoint singularity at `u = 2` is removed with
/// `u = 2 - w²`, which turns the integrand into `4 / ((2 - w²) sqrt(4 - w²))`
/// on `w ∈ [0, sqrt(2 - u1)]`. The integration variable is the distance
/// `s = sqrt(2 - u1) - w` to the upper end, so that `2 - w² = u1 + s(2 sqrt(2 - u1) - s)`
/// is free of cancellation when `u1` is small.
pub fn fiber_time_integral(u1: f64, tol: f64) -> f64 {
    assert!(u1 > 0.0 && u1 <= 2.0);
    let upper = (2.0 - u1).sqrt();
    integrate(
        |s| {
            let gap = u1 + s * (2.0 * upper - s);
            4.0 / (gap * (2.0 + gap).sqrt())
        },
        0.0,
        upper,
        tol,
    )
}
