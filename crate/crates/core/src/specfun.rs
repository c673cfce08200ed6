//! Integer-order Bessel functions of the first kind and the photon-sum
//! weights J_m(x)².
//!
//! All orders are produced together by Miller's backward recurrence,
//! normalized with J_0² + 2·Σ J_k² = 1. Starting far enough above both the
//! requested order and the turning point m ≈ x keeps every returned value
//! within a few ulp of the true function for |x| up to the 1e6 guard.

/// Default bound on the discarded tail 1 − Σ_{|m|≤M} J_m².
pub const DEFAULT_TAIL_TOL: f64 = 1e-12;

// Squares of the unnormalized sequence must stay finite.
const RESCALE_ABOVE: f64 = 1e100;
const RESCALE_BY: f64 = 1e-100;

/// J_0(x) .. J_n(x).
pub fn bessel_j_orders(n: usize, x: f64) -> Vec<f64> {
    if x.is_nan() {
        return vec![f64::NAN; n + 1];
    }
    let mut out = vec![0.0; n + 1];
    if x == 0.0 {
        out[0] = 1.0;
        return out;
    }
    let ax = x.abs();
    let seq = MillerSequence::new(n, ax);
    let norm = seq.sum_of_squares.sqrt().copysign(seq.even_sum);
    for (o, v) in out.iter_mut().zip(&seq.values) {
        *o = v / norm;
    }
    if x < 0.0 {
        for v in out.iter_mut().skip(1).step_by(2) {
            *v = -*v;
        }
    }
    out
}

/// J_m(x) for any integer order.
pub fn bessel_j(m: i64, x: f64) -> f64 {
    let n = m.unsigned_abs() as usize;
    let v = bessel_j_orders(n, x)[n];
    if m < 0 && n % 2 == 1 {
        -v
    } else {
        v
    }
}

/// Σ with Neumaier compensation.
pub(crate) fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Unnormalized backward-recurrence sequence proportional to J_k(x).
struct MillerSequence {
    values: Vec<f64>,
    /// j_0 + 2·Σ j_2k, which carries the sign of the normalizer.
    even_sum: f64,
    /// j_0² + 2·Σ j_k², the normalizer squared. Unlike the even-order sum it
    /// has no cancellation at large x.
    sum_of_squares: f64,
}

impl MillerSequence {
    fn new(n: usize, ax: f64) -> Self {
        let turning = ax + 15.0 * ax.cbrt();
        let start = (n as f64).max(turning).ceil() as usize + 40;
        let start = start + start % 2;

        let mut seq = vec![0.0; start + 2];
        seq[start] = 1.0;
        let two_over_x = 2.0 / ax;
        for k in (1..=start).rev() {
            seq[k - 1] = k as f64 * two_over_x * seq[k] - seq[k + 1];
            if seq[k - 1].abs() > RESCALE_ABOVE {
                for v in &mut seq[k - 1..] {
                    *v *= RESCALE_BY;
                }
            }
        }
        let even_sum = seq[0] + 2.0 * seq[2..].iter().step_by(2).sum::<f64>();
        let sum_of_squares = squares_total(&seq);
        seq.truncate(n.max(1) + 1);
        Self {
            values: seq,
            even_sum,
            sum_of_squares,
        }
    }
}

/// v_0² + 2·Σ_{k≥1} v_k².
fn squares_total(v: &[f64]) -> f64 {
    let rest = compensated_sum(v[1..].iter().rev().map(|a| 2.0 * a * a));
    compensated_sum([rest, v[0] * v[0]])
}

/// Smallest photon order M whose discarded tail 2·Σ_{m>M} J_m(x)² is at most
/// `tail_tol`, starting from the Airy-decay floor ⌈|x| + 10|x|^{1/3} + 10⌉.
/// Returns 0 for x = 0, where only m = 0 contributes.
pub fn truncation_order(x: f64, tail_tol: f64) -> usize {
    weights_for_tail(x, tail_tol).0
}

/// J_k(x)² for k = 0..=n, normalized directly against the sum of squares.
fn squared_orders(n: usize, ax: f64) -> Vec<f64> {
    if ax == 0.0 {
        let mut w = vec![0.0; n + 1];
        w[0] = 1.0;
        return w;
    }
    let seq = MillerSequence::new(n, ax);
    seq.values[..=n]
        .iter()
        .map(|v| v * v / seq.sum_of_squares)
        .collect()
}

fn weights_for_tail(x: f64, tail_tol: f64) -> (usize, Vec<f64>) {
    let ax = x.abs();
    if ax == 0.0 {
        return (0, vec![1.0]);
    }
    let floor = (ax + 10.0 * ax.cbrt() + 10.0).ceil() as usize;
    let mut reach = 2 * floor + 20;
    loop {
        let mut w = squared_orders(reach, ax);
        // tails[m] = 2·Σ_{m<k≤reach} J_k²; beyond `reach` the terms are far
        // below the tolerance by construction of the starting order.
        let mut tails = vec![0.0; reach + 1];
        for m in (0..reach).rev() {
            tails[m] = tails[m + 1] + 2.0 * w[m + 1];
        }
        if let Some(m) = (floor..reach).find(|&m| tails[m] <= tail_tol) {
            w.truncate(m + 1);
            return (m, w);
        }
        reach *= 2;
    }
}

/// Squared Bessel weights J_m(x)² for m = −M..M.
#[derive(Debug, Clone, PartialEq)]
pub struct BesselWeights {
    x: f64,
    order: usize,
    // J_m² for m = 0..=order; negative orders mirror these.
    half: Vec<f64>,
}

impl BesselWeights {
    /// Weights truncated by [`truncation_order`].
    pub fn new(x: f64, tail_tol: f64) -> Self {
        let (order, half) = weights_for_tail(x, tail_tol);
        Self { x, order, half }
    }

    /// Weights for an explicitly chosen order.
    pub fn with_order(x: f64, order: usize) -> Self {
        let half = squared_orders(order, x.abs());
        Self { x, order, half }
    }

    /// Keeps only |m| ≤ `max_abs_m`.
    pub fn capped(mut self, max_abs_m: usize) -> Self {
        if max_abs_m < self.order {
            self.order = max_abs_m;
            self.half.truncate(max_abs_m + 1);
        }
        self
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    /// Truncation order M.
    pub fn order(&self) -> usize {
        self.order
    }

    /// J_m(x)², zero outside −M..M.
    pub fn weight(&self, m: i64) -> f64 {
        self.half
            .get(m.unsigned_abs() as usize)
            .copied()
            .unwrap_or(0.0)
    }

    /// (m, J_m²) for m = −M..M in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        let order = self.order as i64;
        (-order..=order).map(move |m| (m, self.weight(m)))
    }

    /// J_m² for m = 0..=M.
    pub fn nonnegative(&self) -> &[f64] {
        &self.half
    }

    /// Σ_{|m|≤M} J_m², summed from the smallest terms up.
    pub fn total(&self) -> f64 {
        squares_total_of_weights(&self.half)
    }
}

fn squares_total_of_weights(w: &[f64]) -> f64 {
    let rest = compensated_sum(w[1..].iter().rev().map(|a| 2.0 * a));
    compensated_sum([rest, w[0]])
}

/// Convenience wrapper matching [`BesselWeights::new`].
pub fn bessel_weights(x: f64, tail_tol: f64) -> BesselWeights {
    BesselWeights::new(x, tail_tol)
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Trapezoid rule on the periodic integral representation
    /// J_m(x) = (1/2π) ∫_0^{2π} cos(mτ − x sin τ) dτ, exact to rounding once
    /// the node count exceeds |m| + |x| by a margin.
    fn integral_oracle(m: i64, x: f64) -> f64 {
        let nodes = 2048;
        let h = std::f64::consts::TAU / nodes as f64;
        (0..nodes)
            .map(|k| {
                let t = k as f64 * h;
                (m as f64 * t - x * t.sin()).cos()
            })
            .sum::<f64>()
            / nodes as f64
    }

    fn power_series_j1(x: f64) -> f64 {
        let mut term = x / 2.0;
        let mut sum = term;
        for k in 1..30 {
            term *= -(x * x / 4.0) / (k as f64 * (k + 1) as f64);
            sum += term;
        }
        sum
    }

    #[test]
    fn trivial_values() {
        assert_eq!(bessel_j(0, 0.0), 1.0);
        for m in [1, 2, -3, 17] {
            assert_eq!(bessel_j(m, 0.0), 0.0);
        }
    }

    #[test]
    fn j1_at_one_matches_power_series() {
        let want = power_series_j1(1.0);
        assert!((want - 0.440_050_585_744_933_55).abs() < 1e-16);
        assert!((bessel_j(1, 1.0) - want).abs() <= 1e-13 * want.abs().max(1.0));
    }

    #[test]
    fn frozen_reference_values() {
        // 20-digit values from an arbitrary-precision library.
        let cases = [
            (0, 1.0, 0.765_197_686_557_966_55),
            (2, 5.0, 0.046_565_116_277_752_216),
            (5, 10.0, -0.234_061_528_186_793_64),
            (10, 10.0, 0.207_486_106_633_358_86),
            (0, 40.0, 0.007_366_890_584_237_289_6),
            (1, 40.0, 0.126_038_318_037_585),
            (39, 39.0, 0.131_888_454_491_210_16),
            (50, 40.0, 6.818_524_353_176_831e-4),
            (3, 0.1, 2.082_031_575_475_626_5e-5),
            (20, 1.0, 3.873_503_008_524_658e-25),
            (7, 123.4, 0.020_559_647_841_190_444),
            (100, 39.08, 2.809_701_565_176_678e-31),
        ];
        for (m, x, want) in cases {
            let got = bessel_j(m, x);
            assert!(
                (got - want).abs() <= 1e-13 * f64::max(1.0, want.abs()),
                "J_{m}({x}) = {got}, want {want}"
            );
            // small values should also be relatively accurate
            assert!(
                (got - want).abs() <= 1e-12 * want.abs(),
                "J_{m}({x}) relative"
            );
        }
    }

    #[test]
    fn agrees_with_integral_representation() {
        for x in [0.1, 0.7, 1.0, 3.3, 5.0, 10.0, 25.5, 39.08, 40.0, 99.0] {
            for m in [0i64, 1, 2, 5, 9, 20, 38, 41, 60] {
                let want = integral_oracle(m, x);
                let got = bessel_j(m, x);
                assert!((got - want).abs() <= 1e-13, "J_{m}({x}): {got} vs {want}");
            }
        }
    }

    #[test]
    fn completeness_at_reference_arguments() {
        for x in [0.1, 1.0, 5.0, 10.0, 40.0] {
            let w = bessel_weights(x, DEFAULT_TAIL_TOL);
            let s = w.total();
            assert!((1.0 - 1e-12..=1.0).contains(&s), "x={x}: {s}");
        }
    }

    #[test]
    fn zero_argument_keeps_only_m0() {
        let w = bessel_weights(0.0, DEFAULT_TAIL_TOL);
        assert_eq!(w.order(), 0);
        assert_eq!(w.total(), 1.0);
        assert_eq!(w.weight(0), 1.0);
        assert_eq!(w.weight(3), 0.0);
    }

    #[test]
    fn truncation_order_floor_and_tail() {
        let m = truncation_order(10.0, 1e-12);
        let floor = (10.0 + 10.0 * 10f64.cbrt() + 10.0f64).ceil() as usize;
        assert!(m >= floor);
        // independent high-order reference sum
        let j = bessel_j_orders(400, 10.0);
        let kept: f64 = j[0] * j[0] + 2.0 * j[1..=m].iter().map(|v| v * v).sum::<f64>();
        assert!(kept >= 1.0 - 1e-12);

        let m39 = truncation_order(39.0, 1e-12);
        assert!(m39 >= 39);
        let j = bessel_j_orders(600, 39.0);
        let tail: f64 = 2.0 * j[m39 + 1..].iter().map(|v| v * v).sum::<f64>();
        assert!(tail <= 1e-12);
    }

    #[test]
    fn capped_weights() {
        let w = bessel_weights(5.0, DEFAULT_TAIL_TOL).capped(2);
        assert_eq!(w.order(), 2);
        assert_eq!(w.iter().count(), 5);
        assert_eq!(w.weight(3), 0.0);
    }

    proptest! {
        #[test]
        fn parity(x in -60.0f64..60.0, m in 0i64..=50) {
            let pos = bessel_j(m, x);
            let neg = bessel_j(-m, x);
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            prop_assert!((neg - sign * pos).abs() <= 1e-13);
            let w = bessel_weights(x, DEFAULT_TAIL_TOL);
            for (k, wk) in w.iter() {
                prop_assert_eq!(wk, w.weight(-k));
                prop_assert!(wk >= 0.0);
            }
        }

        #[test]
        fn three_term_recurrence(x in 0.01f64..80.0, m in 1usize..100) {
            let j = bessel_j_orders(m + 1, x);
            let r = j[m - 1] + j[m + 1] - 2.0 * m as f64 / x * j[m];
            prop_assert!(r.abs() <= 1e-10, "residual {r}");
        }

        #[test]
        fn completeness(x in 0.0f64..200.0) {
            let s = bessel_weights(x, DEFAULT_TAIL_TOL).total();
            prop_assert!((1.0 - 1e-12..=1.0 + f64::EPSILON).contains(&s));
        }
    }
}
