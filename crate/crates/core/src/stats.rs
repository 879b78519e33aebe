//! Sampling statistics for the eliminations and the trap predicates.
//!
//! Each sampled divisor draws from its own stream `(seed, label/j)`, so the
//! reports are identical for any thread count.

use rayon::prelude::*;
use serde::Serialize;

use crate::divisor::Divisor;
use crate::error::Result;
use crate::model::Model;
use crate::policy::Policy;
use crate::rng::{self, Rng};
use crate::{elim32, elim43};

/// A binomial proportion with its 95% Wilson score interval.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Band {
    pub successes: u64,
    pub trials: u64,
    pub rate: f64,
    pub lo: f64,
    pub hi: f64,
}

impl Band {
    pub fn new(successes: u64, trials: u64) -> Band {
        if trials == 0 {
            return Band { successes, trials, rate: 0.0, lo: 0.0, hi: 1.0 };
        }
        let z = 1.959_963_984_540_054_f64;
        let n = trials as f64;
        let p = successes as f64 / n;
        let denom = 1.0 + z * z / n;
        let centre = (p + z * z / (2.0 * n)) / denom;
        let half = z * (p * (1.0 - p) / n + z * z / (4.0 * n * n)).sqrt() / denom;
        Band { successes, trials, rate: p, lo: (centre - half).max(0.0), hi: (centre + half).min(1.0) }
    }
}

/// Lower median of a sample.
pub fn median(v: &[u64]) -> Option<u64> {
    let mut s = v.to_vec();
    s.sort_unstable();
    (!s.is_empty()).then(|| s[(s.len() - 1) / 2])
}

/// A random degree-`deg` place over the level field that is not a trap,
/// with the number of trap draws skipped.
fn non_trap_place(
    m: &Model,
    level: usize,
    deg: usize,
    policy: &Policy,
    rng: &mut Rng,
) -> (Divisor, u64) {
    let kd = m.level_field(level).degree();
    let mut skipped = 0;
    loop {
        let d = Divisor::random_place(&m.curve, kd, deg, rng);
        let trap = match deg {
            3 => elim32::trap3_check(m, &d, level, policy).is_trap(),
            _ => elim43::trap4_check(m, &d, level, policy).is_trap(),
        };
        if !trap {
            return (d, skipped);
        }
        skipped += 1;
    }
}

/// 3→2 statistics at one level.
#[derive(Clone, Debug, Serialize)]
pub struct Split32Stats {
    pub q: u128,
    pub level: usize,
    pub divisors: usize,
    pub traps_skipped: u64,
    pub expected_exceptional: usize,
    /// Divisors whose exceptional-point count equals the expected value.
    pub exceptional_exact: Band,
    pub exceptional_counts: Vec<usize>,
    /// Admissible `P` with a one-dimensional `X₀` kernel.
    pub kernel_dim_one: Band,
    /// Divisors that split within the trial budget.
    pub split_found: Band,
    pub samples: Vec<u64>,
    pub median_samples: Option<u64>,
    pub bound: u64,
}

/// Samples `divisors` non-trap degree-3 places over `F_{q^{2^level}}`. With
/// `kernel_points = None` every point of `E(k)` is tested for the kernel
/// dimension; otherwise that many random points per divisor. Splitting is
/// only timed when `split` is set.
pub fn split32(
    m: &Model,
    level: usize,
    divisors: usize,
    kernel_points: Option<usize>,
    split: bool,
    seed: u64,
    policy: &Policy,
) -> Result<Split32Stats> {
    let k = m.level_field(level);
    let q = m.q();
    let bound = policy.trials(q);
    let expected = if m.p() == 2 { 12 } else { 24 };
    let all_points = if kernel_points.is_none() { m.curve.points(&k)? } else { Vec::new() };
    let per: Vec<Result<(u64, usize, u64, u64, Option<u64>)>> = (0..divisors)
        .into_par_iter()
        .map(|j| {
            let mut r = rng::stream(seed, &format!("stats32/{level}/{j}"));
            let (d, skipped) = non_trap_place(m, level, 3, policy, &mut r);
            let (_, ex) = elim32::exceptional_points32(m, &d)?;
            let pts: Vec<_> = match kernel_points {
                None => all_points.iter().filter(|p| !p.inf).copied().collect(),
                Some(c) => (0..c).map(|_| m.curve.random_affine(&k, &mut r)).collect(),
            };
            let (mut adm, mut one) = (0u64, 0u64);
            for pt in &pts {
                if let Ok(dim) = elim32::x0_kernel_dim(m, &k, &d, pt) {
                    adm += 1;
                    one += u64::from(dim == 1);
                }
            }
            let s = if split { elim32::first_split32(m, level, &d, &mut r, bound).map(|(n, _, _)| n) } else { None };
            Ok((skipped, ex.len(), adm, one, s))
        })
        .collect();
    let mut st = Split32Stats {
        q,
        level,
        divisors,
        traps_skipped: 0,
        expected_exceptional: expected,
        exceptional_exact: Band::new(0, 0),
        exceptional_counts: Vec::new(),
        kernel_dim_one: Band::new(0, 0),
        split_found: Band::new(0, 0),
        samples: Vec::new(),
        median_samples: None,
        bound,
    };
    let (mut adm, mut one) = (0, 0);
    for item in per {
        let (skipped, nex, a, o, s) = item?;
        st.traps_skipped += skipped;
        st.exceptional_counts.push(nex);
        adm += a;
        one += o;
        st.samples.extend(s);
    }
    let exact = st.exceptional_counts.iter().filter(|&&c| c == expected).count() as u64;
    st.exceptional_exact = Band::new(exact, divisors as u64);
    st.kernel_dim_one = Band::new(one, adm);
    if split {
        st.split_found = Band::new(st.samples.len() as u64, divisors as u64);
    }
    st.median_samples = median(&st.samples);
    Ok(st)
}

/// 4→3 statistics at one level.
#[derive(Clone, Debug, Serialize)]
pub struct Split43Stats {
    pub q: u128,
    pub level: usize,
    pub divisors: usize,
    pub traps_skipped: u64,
    /// Divisors whose six exceptional pairs have exactly the prescribed
    /// eight alignments.
    pub alignments_exact: Band,
    /// `t₀` draws where the specialized curve has degree `2q + 2`.
    pub cprime_degree: Band,
    pub split_found: Band,
    pub samples: Vec<u64>,
    pub median_samples: Option<u64>,
    pub bound: u64,
}

/// Samples `divisors` non-trap degree-4 places over `F_{q^{2^level}}`, with
/// `t0_draws` specializations each.
pub fn split43(
    m: &Model,
    level: usize,
    divisors: usize,
    t0_draws: usize,
    split: bool,
    seed: u64,
    policy: &Policy,
) -> Result<Split43Stats> {
    let k = m.level_field(level);
    let q = m.q();
    let bound = policy.trials(q);
    let want = 2 * q as usize + 3;
    let per: Vec<Result<(u64, bool, u64, Option<u64>)>> = (0..divisors)
        .into_par_iter()
        .map(|j| {
            let mut r = rng::stream(seed, &format!("stats43/{level}/{j}"));
            let (d, skipped) = non_trap_place(m, level, 4, policy, &mut r);
            let aligned = elim43::exceptional_pairs43(m, &d)?.alignments_as_expected();
            let h = elim43::hyperplane_from_divisor(m, &d)?;
            let mut good = 0;
            for _ in 0..t0_draws {
                let t0 = k.random(&mut r);
                good += u64::from(elim43::cprime_poly(m, &k, &h, &t0).len() == want);
            }
            let s = if split { elim43::first_split43(m, level, &d, &mut r, bound)?.map(|(n, _, _)| n) } else { None };
            Ok((skipped, aligned, good, s))
        })
        .collect();
    let mut st = Split43Stats {
        q,
        level,
        divisors,
        traps_skipped: 0,
        alignments_exact: Band::new(0, 0),
        cprime_degree: Band::new(0, 0),
        split_found: Band::new(0, 0),
        samples: Vec::new(),
        median_samples: None,
        bound,
    };
    let (mut aligned, mut good) = (0, 0);
    for item in per {
        let (skipped, a, g, s) = item?;
        st.traps_skipped += skipped;
        aligned += u64::from(a);
        good += g;
        st.samples.extend(s);
    }
    st.alignments_exact = Band::new(aligned, divisors as u64);
    st.cprime_degree = Band::new(good, (divisors * t0_draws) as u64);
    if split {
        st.split_found = Band::new(st.samples.len() as u64, divisors as u64);
    }
    st.median_samples = median(&st.samples);
    Ok(st)
}

/// Trap densities among uniformly random places of degree 3 and 4.
#[derive(Clone, Debug, Serialize)]
pub struct TrapStats {
    pub q: u128,
    pub level: usize,
    pub samples: usize,
    pub non_trap3: Band,
    pub non_trap4: Band,
    /// Hits per 3→2 condition: repeated, `T₃¹`, `T₃²`, rank, leveled.
    pub trap3_hits: [u64; 5],
    /// Hits per 4→3 condition: repeated, base locus, `T₄⁰`..`T₄⁵`, leveled.
    pub trap4_hits: [u64; 9],
}

pub fn traps(m: &Model, level: usize, samples: usize, seed: u64, policy: &Policy) -> TrapStats {
    let kd = m.level_field(level).degree();
    let per: Vec<(elim32::Trap3Report, elim43::Trap4Report)> = (0..samples)
        .into_par_iter()
        .map(|j| {
            let mut r = rng::stream(seed, &format!("traps/{level}/{j}"));
            let d3 = Divisor::random_place(&m.curve, kd, 3, &mut r);
            let d4 = Divisor::random_place(&m.curve, kd, 4, &mut r);
            (elim32::trap3_check(m, &d3, level, policy), elim43::trap4_check(m, &d4, level, policy))
        })
        .collect();
    let mut st = TrapStats {
        q: m.q(),
        level,
        samples,
        non_trap3: Band::new(0, 0),
        non_trap4: Band::new(0, 0),
        trap3_hits: [0; 5],
        trap4_hits: [0; 9],
    };
    let (mut ok3, mut ok4) = (0, 0);
    for (t3, t4) in &per {
        ok3 += u64::from(!t3.is_trap());
        ok4 += u64::from(!t4.is_trap());
        let f3 = [t3.t0, t3.t1, t3.t2, t3.t3 == Some(true), t3.leveled == Some(true)];
        for (h, f) in st.trap3_hits.iter_mut().zip(f3) {
            *h += u64::from(f);
        }
        let f4 = [
            t4.repeated,
            t4.base_locus,
            t4.t0,
            t4.t1,
            t4.t2,
            t4.t3,
            t4.t4,
            t4.t5 == Some(true),
            t4.leveled == Some(true),
        ];
        for (h, f) in st.trap4_hits.iter_mut().zip(f4) {
            *h += u64::from(f);
        }
    }
    st.non_trap3 = Band::new(ok3, samples as u64);
    st.non_trap4 = Band::new(ok4, samples as u64);
    st
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_band_brackets_the_rate() {
        let b = Band::new(50, 100);
        assert!((b.rate - 0.5).abs() < 1e-12);
        assert!((b.lo - 0.4038).abs() < 1e-3 && (b.hi - 0.5962).abs() < 1e-3);
        let z = Band::new(0, 10);
        assert_eq!(z.lo, 0.0);
        assert!(z.hi > 0.2);
    }

    #[test]
    fn lower_median() {
        assert_eq!(median(&[5, 1, 3]), Some(3));
        assert_eq!(median(&[4, 1, 3, 2]), Some(2));
        assert_eq!(median(&[]), None);
    }

    #[test]
    fn stats_are_thread_independent() {
        let m = Model::build(5, 5, Some(1)).unwrap();
        let pol = Policy::default();
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let a = one.install(|| traps(&m, 2, 16, 3, &pol));
        let b = traps(&m, 2, 16, 3, &pol);
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}
