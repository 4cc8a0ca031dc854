//! Adaptive Gauss-Kronrod quadrature (G10/K21) and a bracketing root finder.

#![allow(clippy::excessive_precision)]

use alloc::vec::Vec;
use core::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};
use num_complex::Complex64;

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_067_413_211,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Values that can be integrated: reals and complex numbers.
pub trait QuadValue: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(self) -> f64 {
        self.norm()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_segments: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions { abs_tol: 1e-12, rel_tol: 1e-10, max_segments: 20_000 }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadResult<T> {
    pub value: T,
    pub abs_error: f64,
    pub segments: usize,
}

struct Segment<T> {
    a: f64,
    b: f64,
    value: T,
    error: f64,
}

fn kronrod<T: QuadValue, F: FnMut(f64) -> T>(f: &mut F, a: f64, b: f64) -> (T, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[10];
    let mut g = T::zero();
    for i in 0..10 {
        let dx = h * XGK[i];
        let s = f(c - dx) + f(c + dx);
        k = k + s * WGK[i];
        if i % 2 == 1 {
            g = g + s * WG[i / 2];
        }
    }
    let k = k * h;
    let g = g * h;
    (k, (k - g).magnitude())
}

/// Integrate `f` over consecutive intervals given by the sorted `points`.
pub fn integrate<T, F>(mut f: F, points: &[f64], opts: QuadOptions) -> Result<QuadResult<T>>
where
    T: QuadValue,
    F: FnMut(f64) -> T,
{
    assert!(points.len() >= 2, "need at least one interval");
    let mut segs: Vec<Segment<T>> = Vec::new();
    for w in points.windows(2) {
        if w[1] > w[0] {
            let (value, error) = kronrod(&mut f, w[0], w[1]);
            segs.push(Segment { a: w[0], b: w[1], value, error });
        }
    }
    if segs.is_empty() {
        return Ok(QuadResult { value: T::zero(), abs_error: 0.0, segments: 0 });
    }
    loop {
        let mut total = T::zero();
        let mut err = 0.0;
        let mut worst = 0;
        for (i, s) in segs.iter().enumerate() {
            total = total + s.value;
            err += s.error;
            if s.error > segs[worst].error {
                worst = i;
            }
        }
        let target = opts.abs_tol.max(opts.rel_tol * total.magnitude());
        if err <= target {
            return Ok(QuadResult { value: total, abs_error: err, segments: segs.len() });
        }
        let s = &segs[worst];
        let (a, b) = (s.a, s.b);
        let m = 0.5 * (a + b);
        if segs.len() >= opts.max_segments || !(m > a && m < b) {
            return Err(Error::Quadrature { achieved: err, requested: target });
        }
        let (v1, e1) = kronrod(&mut f, a, m);
        let (v2, e2) = kronrod(&mut f, m, b);
        segs[worst] = Segment { a, b: m, value: v1, error: e1 };
        segs.push(Segment { a: m, b, value: v2, error: e2 });
    }
}

/// Bisection root finder on a sign-changing bracket [a, b].
pub fn bisect<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64, tol: f64) -> Result<f64> {
    let mut fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Domain(alloc::format!("no sign change on [{a}, {b}]")));
    }
    while (b - a).abs() > tol {
        let m = 0.5 * (a + b);
        if m <= a.min(b) || m >= a.max(b) {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}
