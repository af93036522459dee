//! Species richness, dominance, and evenness indices.
//!
//! All seven indices are pure functions of a [`SpeciesHistogram`]: S is the
//! number of species (distinct gray levels), N the number of individuals
//! (pixels), n_i the abundance of species i, p_i = n_i/N. Logarithms are
//! natural throughout.

use crate::ecosystem::SpeciesHistogram;
use crate::error::{Error, Result};

/// Value reported by [`fisher_alpha`] when every individual is its own
/// species (S = N), where the defining relation has no finite solution.
pub const FISHER_ALPHA_SATURATED: f64 = 1e6;

/// The seven index values for one histogram, in canonical order
/// (d_mg, d_mn, d_bp, d_f, d_kt, e_m, d_sw).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiodiversityIndices {
    pub d_mg: f64,
    pub d_mn: f64,
    pub d_bp: f64,
    pub d_f: f64,
    pub d_kt: f64,
    pub e_m: f64,
    pub d_sw: f64,
}

impl BiodiversityIndices {
    pub const COUNT: usize = 7;

    /// Computes all seven indices. Requires N >= 2 (the Margalef denominator
    /// ln N must be positive).
    pub fn compute(hist: &SpeciesHistogram) -> Result<Self> {
        Ok(BiodiversityIndices {
            d_mg: margalef(hist)?,
            d_mn: menhinick(hist),
            d_bp: berger_parker(hist),
            d_f: fisher_alpha(hist)?,
            d_kt: kempton_taylor(hist),
            e_m: mcintosh_evenness(hist),
            d_sw: shannon_wiener(hist),
        })
    }

    pub fn to_array(self) -> [f64; Self::COUNT] {
        [
            self.d_mg, self.d_mn, self.d_bp, self.d_f, self.d_kt, self.e_m, self.d_sw,
        ]
    }
}

/// Margalef richness: (S - 1)/ln N. Returns 0 for a single species.
/// Requires N >= 2.
pub fn margalef(hist: &SpeciesHistogram) -> Result<f64> {
    let n = hist.total();
    if n < 2 {
        return Err(Error::invalid("margalef requires at least two individuals"));
    }
    let s = hist.richness();
    if s == 1 {
        return Ok(0.0);
    }
    Ok((s as f64 - 1.0) / (n as f64).ln())
}

/// Menhinick richness, here the plain ratio S/N.
pub fn menhinick(hist: &SpeciesHistogram) -> f64 {
    hist.richness() as f64 / hist.total() as f64
}

/// Berger-Parker dominance: Nmax/N, the share of the most abundant species.
/// Always in (0, 1].
pub fn berger_parker(hist: &SpeciesHistogram) -> f64 {
    hist.max_count() as f64 / hist.total() as f64
}

fn fisher_residual(alpha: f64, s: f64, n: f64) -> f64 {
    alpha * (1.0 + n / alpha).ln() - s
}

/// Fisher's alpha: the root of S = alpha * ln(1 + N/alpha), found by
/// bisection on [1e-6, 1e6] (upper bound expanded if needed). The residual of
/// the returned value is below 1e-6 * max(1, S).
///
/// When S = N the relation has no finite root (alpha diverges); the sentinel
/// [`FISHER_ALPHA_SATURATED`] is returned so descriptors stay finite. The
/// condition is recoverable from the histogram via `richness == total`.
pub fn fisher_alpha(hist: &SpeciesHistogram) -> Result<f64> {
    fisher_alpha_from_counts(hist.richness() as u64, hist.total())
}

/// [`fisher_alpha`] on raw richness/abundance counts, for callers without a
/// histogram (S need not fit in 256 gray levels here).
pub fn fisher_alpha_from_counts(species: u64, individuals: u64) -> Result<f64> {
    if species == 0 || individuals == 0 || species > individuals {
        return Err(Error::invalid(format!(
            "fisher alpha needs 1 <= S <= N, got S = {species}, N = {individuals}"
        )));
    }
    if species == individuals {
        return Ok(FISHER_ALPHA_SATURATED);
    }
    let s = species as f64;
    let n = individuals as f64;

    let mut lo = 1e-6;
    let mut hi = 1e6;
    if fisher_residual(lo, s, n) > 0.0 {
        return Err(Error::NumericFailure(
            "fisher alpha: residual positive at lower bracket".into(),
        ));
    }
    let mut expansions = 0;
    while fisher_residual(hi, s, n) < 0.0 {
        if expansions == 8 {
            return Err(Error::NumericFailure(
                "fisher alpha: no sign change in bracket after expansion".into(),
            ));
        }
        hi *= 10.0;
        expansions += 1;
    }

    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if fisher_residual(mid, s, n) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let alpha = 0.5 * (lo + hi);
    let tol = 1e-6 * s.max(1.0);
    if fisher_residual(alpha, s, n).abs() < tol {
        Ok(alpha)
    } else {
        Err(Error::NumericFailure(
            "fisher alpha: bisection did not meet residual tolerance".into(),
        ))
    }
}

fn quartile_abundances(hist: &SpeciesHistogram) -> (u64, u64) {
    let s = hist.richness();
    let mut counts: Vec<u64> = hist.entries().iter().map(|&(_, c)| c).collect();
    counts.sort_unstable();
    // 1-based ranks ceil(S/4) and ceil(3S/4) on the abundance-sorted species.
    let r1 = counts[s.div_ceil(4) - 1];
    let r2 = counts[(3 * s).div_ceil(4) - 1];
    (r1, r2)
}

/// True when the two quartile abundances coincide, in which case the
/// interquartile slope is undefined and [`kempton_taylor`] returns 0.
pub fn kempton_is_degenerate(hist: &SpeciesHistogram) -> bool {
    let (r1, r2) = quartile_abundances(hist);
    r1 == r2
}

/// Kempton-Taylor Q: interquartile slope of the cumulative species abundance
/// curve,
///
///   Q = (n_R1/2 + sum of n_r for R1 < r < R2 + n_R2/2) / ln(R2/R1)
///
/// where R1, R2 are the abundances at ranks ceil(S/4) and ceil(3S/4) of the
/// abundance-sorted species list and n_r counts the species of abundance r.
/// Returns 0 in the degenerate case R1 = R2.
pub fn kempton_taylor(hist: &SpeciesHistogram) -> f64 {
    let (r1, r2) = quartile_abundances(hist);
    if r1 == r2 {
        return 0.0;
    }
    let mut at_r1 = 0u64;
    let mut at_r2 = 0u64;
    let mut between = 0u64;
    for &(_, c) in hist.entries() {
        if c == r1 {
            at_r1 += 1;
        } else if c == r2 {
            at_r2 += 1;
        } else if c > r1 && c < r2 {
            between += 1;
        }
    }
    let numerator = 0.5 * at_r1 as f64 + between as f64 + 0.5 * at_r2 as f64;
    numerator / (r2 as f64 / r1 as f64).ln()
}

/// McIntosh evenness: sqrt( sum(n_i^2) / ((N - S + 1)^2 + S - 1) ).
/// Equals 1 both for a single species and for the all-distinct case.
pub fn mcintosh_evenness(hist: &SpeciesHistogram) -> f64 {
    let mut sum_sq: u128 = 0;
    for &(_, c) in hist.entries() {
        sum_sq += (c as u128) * (c as u128);
    }
    let n = hist.total() as u128;
    let s = hist.richness() as u128;
    let denom = (n - s + 1) * (n - s + 1) + s - 1;
    ((sum_sq as f64) / (denom as f64)).sqrt()
}

/// Shannon-Wiener entropy: -sum(p_i ln p_i), in [0, ln S].
pub fn shannon_wiener(hist: &SpeciesHistogram) -> f64 {
    let n = hist.total() as f64;
    let mut acc = 0.0;
    for &(_, c) in hist.entries() {
        let p = c as f64 / n;
        acc += p * p.ln();
    }
    let h = -acc;
    // A single-species histogram accumulates an exact 0 whose negation would
    // print as -0.
    if h == 0.0 {
        0.0
    } else {
        h
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn hist(counts: &[(u8, u64)]) -> SpeciesHistogram {
        SpeciesHistogram::from_counts(counts.iter().copied()).unwrap()
    }

    /// 5 black / 5 mid-gray / 6 white, the hand-worked 16-pixel ecosystem.
    fn toy() -> SpeciesHistogram {
        hist(&[(0, 5), (128, 5), (255, 6)])
    }

    #[test]
    fn margalef_values() {
        assert_relative_eq!(
            margalef(&toy()).unwrap(),
            2.0 / 16f64.ln(),
            max_relative = 1e-12
        );
        assert_eq!(margalef(&hist(&[(9, 4)])).unwrap(), 0.0);
        assert_relative_eq!(
            margalef(&hist(&[(1, 2), (2, 2)])).unwrap(),
            1.0 / 4f64.ln(),
            max_relative = 1e-12
        );
        assert!(margalef(&hist(&[(0, 1)])).is_err());
    }

    #[test]
    fn menhinick_values() {
        assert_eq!(menhinick(&toy()), 3.0 / 16.0);
        assert_eq!(menhinick(&hist(&[(9, 8)])), 1.0 / 8.0);
        let distinct = hist(&[(6, 1), (75, 1), (117, 1), (141, 1), (230, 1)]);
        assert_eq!(menhinick(&distinct), 1.0);
    }

    #[test]
    fn berger_parker_values() {
        assert_eq!(berger_parker(&toy()), 6.0 / 16.0);
        assert_eq!(berger_parker(&hist(&[(3, 7)])), 1.0);
        let uniform = hist(&[(0, 10), (1, 10), (2, 10), (3, 10)]);
        assert_eq!(berger_parker(&uniform), 0.25);
    }

    #[test]
    fn fisher_alpha_toy() {
        // Root of 3 = a*ln(1+16/a), cross-checked with an independent Brent
        // solver: 1.089986662105136.
        let a = fisher_alpha(&toy()).unwrap();
        assert_relative_eq!(a, 1.089986662105136, max_relative = 1e-10);
        assert!(fisher_residual(a, 3.0, 16.0).abs() < 1e-6 * 3.0);
    }

    #[test]
    fn fisher_alpha_single_species() {
        // Root of 1 = a*ln(1+16/a), independent solver: 0.23644611579425595.
        let a = fisher_alpha(&hist(&[(42, 16)])).unwrap();
        assert_relative_eq!(a, 0.23644611579425595, max_relative = 1e-10);
    }

    #[test]
    fn fisher_alpha_saturated() {
        let distinct = hist(&[(1, 1), (2, 1), (3, 1)]);
        assert_eq!(fisher_alpha(&distinct).unwrap(), FISHER_ALPHA_SATURATED);
    }

    #[test]
    fn kempton_taylor_values() {
        // Abundances [1,2,4,8]: quartile ranks 1 and 3 give R1=1, R2=4, one
        // species strictly between.
        let h = hist(&[(10, 1), (20, 2), (30, 4), (40, 8)]);
        assert_relative_eq!(kempton_taylor(&h), 2.0 / 4f64.ln(), max_relative = 1e-12);
        assert!(!kempton_is_degenerate(&h));

        let uniform = hist(&[(0, 5), (1, 5), (2, 5), (3, 5)]);
        assert_eq!(kempton_taylor(&uniform), 0.0);
        assert!(kempton_is_degenerate(&uniform));

        // [1,1,1,9]: ranks 1 and 3 both have abundance 1.
        let skewed = hist(&[(0, 1), (1, 1), (2, 1), (3, 9)]);
        assert_eq!(kempton_taylor(&skewed), 0.0);
        assert!(kempton_is_degenerate(&skewed));
    }

    #[test]
    fn kempton_taylor_toy() {
        // Sorted abundances [5,5,6]: R1 = 5 (rank 1), R2 = 6 (rank 3),
        // two species at R1, one at R2, none between.
        assert_relative_eq!(
            kempton_taylor(&toy()),
            1.5 / (6f64 / 5.0).ln(),
            max_relative = 1e-12
        );
    }

    #[test]
    fn mcintosh_values() {
        assert_relative_eq!(
            mcintosh_evenness(&toy()),
            (86.0f64 / 198.0).sqrt(),
            max_relative = 1e-12
        );
        assert_eq!(mcintosh_evenness(&hist(&[(7, 9)])), 1.0);
        let distinct = hist(&[(1, 1), (2, 1), (3, 1), (4, 1)]);
        assert_eq!(mcintosh_evenness(&distinct), 1.0);
    }

    #[test]
    fn shannon_values() {
        assert_relative_eq!(
            shannon_wiener(&toy()),
            1.094780226007948,
            max_relative = 1e-12
        );
        let single = shannon_wiener(&hist(&[(3, 5)]));
        assert_eq!(single, 0.0);
        assert!(single.is_sign_positive());
        let uniform = hist(&[(0, 5), (1, 5), (2, 5), (3, 5)]);
        assert_relative_eq!(shannon_wiener(&uniform), 4f64.ln(), epsilon = 1e-12);
    }

    #[test]
    fn compute_assembles_all_indices() {
        let all = BiodiversityIndices::compute(&toy()).unwrap();
        assert_eq!(all.d_mg, margalef(&toy()).unwrap());
        assert_eq!(all.d_sw, shannon_wiener(&toy()));
        assert_eq!(all.to_array().len(), BiodiversityIndices::COUNT);
    }

    fn arb_histogram() -> impl Strategy<Value = SpeciesHistogram> {
        proptest::collection::btree_map(any::<u8>(), 1u64..1000, 1..40)
            .prop_map(|m| SpeciesHistogram::from_counts(m).unwrap())
    }

    proptest! {
        #[test]
        fn shannon_bounded_by_ln_richness(h in arb_histogram()) {
            let sw = shannon_wiener(&h);
            prop_assert!(sw >= 0.0);
            prop_assert!(sw <= (h.richness() as f64).ln() + 1e-12);
        }

        #[test]
        fn uniform_histogram_maximizes_shannon(
            levels in proptest::collection::btree_set(any::<u8>(), 2..40),
            count in 1u64..500,
        ) {
            let h = SpeciesHistogram::from_counts(levels.iter().map(|&l| (l, count))).unwrap();
            let expected = (h.richness() as f64).ln();
            prop_assert!((shannon_wiener(&h) - expected).abs() < 1e-12);
        }

        #[test]
        fn berger_parker_bounds(h in arb_histogram()) {
            let bp = berger_parker(&h);
            prop_assert!(bp <= 1.0);
            prop_assert!(bp >= 1.0 / h.richness() as f64 - 1e-15);
        }

        #[test]
        fn fisher_residual_bound_holds(h in arb_histogram()) {
            let s = h.richness() as u64;
            let n = h.total();
            prop_assume!(s < n);
            let a = fisher_alpha(&h).unwrap();
            let tol = 1e-6 * (s as f64).max(1.0);
            prop_assert!(fisher_residual(a, s as f64, n as f64).abs() < tol);
        }

        // Doubling every count keeps S and doubles N; the implementations must
        // agree with direct re-evaluation of the defining formulas.
        #[test]
        fn richness_indices_match_naive_reevaluation(h in arb_histogram()) {
            let doubled = SpeciesHistogram::from_counts(
                h.entries().iter().map(|&(l, c)| (l, 2 * c)),
            ).unwrap();
            let s = h.richness() as f64;
            let n2 = doubled.total() as f64;
            if doubled.richness() > 1 {
                let naive_mg = (s - 1.0) / n2.ln();
                prop_assert!((margalef(&doubled).unwrap() - naive_mg).abs() <= 1e-12 * naive_mg.abs());
            }
            let naive_mn = s / n2;
            prop_assert!((menhinick(&doubled) - naive_mn).abs() <= 1e-12 * naive_mn.abs());
            prop_assert_eq!(doubled.richness(), h.richness());
        }

        #[test]
        fn mcintosh_nonnegative(h in arb_histogram()) {
            prop_assert!(mcintosh_evenness(&h) >= 0.0);
        }
    }
}
