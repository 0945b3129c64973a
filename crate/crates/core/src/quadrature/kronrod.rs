use super::QuadValue;
use crate::error::{Error, Result};

// 21-point Kronrod extension of the 10-point Gauss rule.
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

const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

pub(crate) const EVALS_PER_RULE: usize = 21;

#[derive(Debug, Clone, Copy)]
pub(crate) struct RuleOutput<T> {
    pub value: T,
    pub error: f64,
}

fn eval<T: QuadValue, F: FnMut(f64) -> T>(f: &mut F, x: f64) -> Result<T> {
    let v = f(x);
    if v.is_finite_value() {
        Ok(v)
    } else {
        Err(Error::NonFinite { abscissa: x })
    }
}

/// Apply the 21-point rule on `[a, b]`, with the QUADPACK error heuristic.
pub(crate) fn gk21<T: QuadValue, F: FnMut(f64) -> T>(
    f: &mut F,
    a: f64,
    b: f64,
) -> Result<RuleOutput<T>> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let mut fv1 = [T::default(); 10];
    let mut fv2 = [T::default(); 10];

    let fc = eval(f, center)?;
    let mut res_g = T::default();
    let mut res_k = fc * WGK[10];
    let mut res_abs = fc.magnitude() * WGK[10];

    for j in 0..5 {
        let jtw = 2 * j + 1;
        let dx = half * XGK[jtw];
        let f1 = eval(f, center - dx)?;
        let f2 = eval(f, center + dx)?;
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        let sum = f1 + f2;
        res_g = res_g + sum * WG[j];
        res_k = res_k + sum * WGK[jtw];
        res_abs += WGK[jtw] * (f1.magnitude() + f2.magnitude());
    }
    for j in 0..5 {
        let jtwm1 = 2 * j;
        let dx = half * XGK[jtwm1];
        let f1 = eval(f, center - dx)?;
        let f2 = eval(f, center + dx)?;
        fv1[jtwm1] = f1;
        fv2[jtwm1] = f2;
        res_k = res_k + (f1 + f2) * WGK[jtwm1];
        res_abs += WGK[jtwm1] * (f1.magnitude() + f2.magnitude());
    }

    let mean = res_k * 0.5;
    let mut res_asc = WGK[10] * (fc - mean).magnitude();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).magnitude() + (fv2[j] - mean).magnitude());
    }

    let h = half.abs();
    let value = res_k * half;
    res_abs *= h;
    res_asc *= h;
    let raw = ((res_k - res_g) * half).magnitude();

    let mut error = raw;
    if res_asc != 0.0 && error != 0.0 {
        let scale = (200.0 * error / res_asc).powf(1.5);
        error = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    Ok(RuleOutput { value, error })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two() {
        let k: f64 = 2.0 * WGK[..10].iter().sum::<f64>() + WGK[10];
        let g: f64 = 2.0 * WG.iter().sum::<f64>();
        assert!((k - 2.0).abs() < 1e-15);
        assert!((g - 2.0).abs() < 1e-15);
    }

    #[test]
    fn exact_for_high_degree_polynomials() {
        // Kronrod-21 integrates degree 31 exactly.
        let mut f = |x: f64| x.powi(30);
        let r = gk21(&mut f, -1.0, 1.0).unwrap();
        assert!((r.value - 2.0 / 31.0).abs() < 1e-15);
    }

    #[test]
    fn nan_names_abscissa() {
        let mut f = |x: f64| if x > 0.5 { f64::NAN } else { 1.0 };
        match gk21(&mut f, 0.0, 1.0) {
            Err(Error::NonFinite { abscissa }) => assert!(abscissa > 0.5),
            other => panic!("unexpected {other:?}"),
        }
    }
}
