//! Adaptive Gauss-Kronrod quadrature on `[0, 1]` and the Durrmeyer
//! coefficients `I_{n,k}(f) = (n-1) * int_0^inf p_{n,k}(t) f(t) dt`.
//!
//! The semi-infinite integral is mapped to the unit interval with
//! `u = t / (1 + t)`. The Baskakov weight then becomes the Beta density
//! `u^k (1-u)^(n-2) / B(k+1, n-1)`, so the infinite tail is removed
//! analytically and only the peak near `u* = k / (n + k - 2)` needs
//! resolving.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::operators::TestFunction;
use crate::sum::{compensated, CompensatedSum};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Maximum number of bisections applied to any one panel.
    pub max_depth: u32,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self { abs_tol: 1e-12, rel_tol: 1e-10, max_depth: 40 }
    }
}

impl QuadConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) || !(self.rel_tol > 0.0) || self.max_depth < 1 {
            return Err(Error::Domain(format!("invalid quadrature configuration {self:?}")));
        }
        Ok(())
    }

    fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub panels: usize,
    pub converged: bool,
}

/// Hard cap on the number of live panels, on top of `max_depth`.
const MAX_PANELS: usize = 1 << 14;

// 21-point Kronrod extension of the 10-point Gauss rule. Odd entries of
// `XGK` are the Gauss nodes; `XGK[10]` is the centre.
#[allow(clippy::excessive_precision)]
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
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];
#[allow(clippy::excessive_precision)]
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

/// One application of the embedded pair on `[a, b]`: (Kronrod value, error).
fn gauss_kronrod_21<G: Fn(f64) -> f64>(g: &G, a: f64, b: f64) -> (f64, f64) {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut fv = [0.0f64; 21];
    fv[20] = g(centre);
    for j in 0..10 {
        let dx = half * XGK[j];
        fv[2 * j] = g(centre - dx);
        fv[2 * j + 1] = g(centre + dx);
    }
    let mut kronrod = CompensatedSum::new();
    let mut gauss = CompensatedSum::new();
    kronrod.add(WGK[10] * fv[20]);
    for j in 0..10 {
        let pair = fv[2 * j] + fv[2 * j + 1];
        kronrod.add(WGK[j] * pair);
        if j % 2 == 1 {
            gauss.add(WG[j / 2] * pair);
        }
    }
    let resk = kronrod.value();
    let mean = 0.5 * resk;
    let mut resasc = WGK[10] * (fv[20] - mean).abs();
    for j in 0..10 {
        resasc += WGK[j] * ((fv[2 * j] - mean).abs() + (fv[2 * j + 1] - mean).abs());
    }
    let resasc = resasc * half.abs();
    let mut err = ((resk - gauss.value()) * half).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    (resk * half, err)
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    depth: u32,
    value: f64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    // Largest error first; ties go to the leftmost panel.
    fn cmp(&self, other: &Self) -> Ordering {
        self.err
            .total_cmp(&other.err)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

/// Globally adaptive bisection over the panels delimited by `breaks`
/// (sorted, first 0 and last 1 for the unit interval). The returned value is
/// summed in left-to-right panel order.
pub(crate) fn integrate_panels<G: Fn(f64) -> f64>(
    g: &G,
    breaks: &[f64],
    cfg: &QuadConfig,
) -> QuadResult {
    let mut heap = BinaryHeap::new();
    let mut frozen: Vec<Panel> = Vec::new();
    for w in breaks.windows(2) {
        let (value, err) = gauss_kronrod_21(g, w[0], w[1]);
        heap.push(Panel { a: w[0], b: w[1], depth: 0, value, err });
    }
    let totals = |heap: &BinaryHeap<Panel>, frozen: &[Panel]| {
        let mut panels: Vec<&Panel> = heap.iter().chain(frozen.iter()).collect();
        panels.sort_by(|p, q| p.a.total_cmp(&q.a));
        (
            compensated(panels.iter().map(|p| p.value)),
            compensated(panels.iter().map(|p| p.err)),
        )
    };
    let (mut value, mut err) = totals(&heap, &frozen);
    let mut converged = err <= cfg.target(value);
    while !converged {
        if heap.len() + frozen.len() >= MAX_PANELS {
            break;
        }
        let Some(worst) = heap.pop() else { break };
        if worst.depth >= cfg.max_depth {
            frozen.push(worst);
            continue;
        }
        let mid = 0.5 * (worst.a + worst.b);
        let (lv, le) = gauss_kronrod_21(g, worst.a, mid);
        let (rv, re) = gauss_kronrod_21(g, mid, worst.b);
        let depth = worst.depth + 1;
        heap.push(Panel { a: worst.a, b: mid, depth, value: lv, err: le });
        heap.push(Panel { a: mid, b: worst.b, depth, value: rv, err: re });
        value += lv + rv - worst.value;
        err += le + re - worst.err;
        if err <= cfg.target(value) {
            // Confirm with an order-fixed recount before stopping.
            (value, err) = totals(&heap, &frozen);
            converged = err <= cfg.target(value);
        }
    }
    let (value, err) = totals(&heap, &frozen);
    QuadResult {
        value,
        error_estimate: err,
        panels: heap.len() + frozen.len(),
        converged: err <= cfg.target(value),
    }
}

/// Adaptive quadrature of `int_0^1 g(u) du`, starting from a single panel.
pub fn integrate_unit_interval<G: Fn(f64) -> f64>(g: G, cfg: &QuadConfig) -> Result<QuadResult> {
    cfg.validate()?;
    Ok(integrate_panels(&g, &[0.0, 1.0], cfg))
}

/// `ln[(n-1) C(n+k-1, k)] = -ln B(k+1, n-1)`.
fn ln_kernel_norm(n: u64, k: u64) -> f64 {
    let (nf, kf) = (n as f64, k as f64);
    libm::lgamma(nf + kf) - libm::lgamma(kf + 1.0) - libm::lgamma(nf - 1.0)
}

/// Initial breakpoints clustered around the peak of `u^k (1-u)^(n-2)`.
fn peak_breaks(n: u64, k: u64) -> Vec<f64> {
    let (nf, kf) = (n as f64, k as f64);
    let peak = kf / (nf + kf - 2.0);
    let (alpha, beta) = (kf + 1.0, nf - 1.0);
    let sd = (alpha * beta / ((alpha + beta).powi(2) * (alpha + beta + 1.0))).sqrt();
    let mut breaks = vec![0.0];
    for c in [-8.0, -4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0, 8.0] {
        let u = peak + c * sd;
        if u > 1e-12 && u < 1.0 - 1e-12 && u - breaks[breaks.len() - 1] > 1e-12 {
            breaks.push(u);
        }
    }
    breaks.push(1.0);
    breaks
}

/// `(n-1) int_0^inf p_{n,k}(t) f(t) dt` for a plain closure `f`.
pub fn durrmeyer_integral<F: Fn(f64) -> f64>(
    n: u64,
    k: u64,
    f: F,
    cfg: &QuadConfig,
) -> Result<QuadResult> {
    if n < 3 {
        return Err(Error::Domain(format!("Durrmeyer coefficients need n >= 3, got {n}")));
    }
    cfg.validate()?;
    let ln_norm = ln_kernel_norm(n, k);
    let (kf, tail_power) = (k as f64, (n - 2) as f64);
    let integrand = |u: f64| {
        if u <= 0.0 {
            return if k == 0 { (ln_norm.exp()) * f(0.0) } else { 0.0 };
        }
        if u >= 1.0 {
            return 0.0;
        }
        let weight = (ln_norm + kf * u.ln() + tail_power * (-u).ln_1p()).exp();
        if weight == 0.0 {
            return 0.0;
        }
        weight * f(u / (1.0 - u))
    };
    Ok(integrate_panels(&integrand, &peak_breaks(n, k), cfg))
}

/// Durrmeyer coefficient `I_{n,k}(f)` for a registered function.
pub fn durrmeyer_coefficient(
    n: u64,
    k: u64,
    f: &TestFunction,
    cfg: &QuadConfig,
) -> Result<QuadResult> {
    durrmeyer_integral(n, k, |t| f.eval(t), cfg)
}
