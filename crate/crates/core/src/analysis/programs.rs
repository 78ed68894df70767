//! Sampling-based falsification of the two worst-case optimization programs.
//!
//! Each program lower-bounds the approximation factor: any assignment of its
//! variables that satisfies the feasibility constraints forces the objective
//! `alpha` to at least the proven constant. The samplers draw random and
//! grid points, compute the minimal feasible `alpha` at each point, and
//! report the smallest value seen; dense sampling cannot prove the bound but
//! reliably catches transcription errors in the constraints, which would
//! open up feasible points below it.

use crate::analysis::constants::Constants;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Smallest feasible objective found and where it was attained.
#[derive(Clone, Debug)]
pub struct ProgramMinimum {
    pub alpha: f64,
    pub point: Vec<f64>,
    pub samples: u64,
}

/// Minimal `alpha` satisfying the main program's constraints at a fixed
/// `x = (x1..x6)`, or `None` when `x` itself is infeasible.
///
/// Boundary semantics mirror the dummy-element convention: a ratio with a
/// zero-cost denominator is the limit of the expression, so `x2/x5` terms
/// vanish when `x2 = 0` and the exponent `(x4+x6-1)/x4` collapses to 0 when
/// both numerator and `x4` vanish.
pub fn main_program_alpha(x: &[f64; 6], one_minus_inv_e: f64) -> Option<f64> {
    let [x1, x2, x3, x4, x5, x6] = *x;
    // Feasibility constraints without alpha.
    if x1 < 1.0 - (-x4).exp() {
        return None;
    }
    if x1 + x2 + x3 < 1.0 {
        return None;
    }
    let sub2 = if x5 > 0.0 {
        x1 + x2 / x5
    } else if x2 == 0.0 {
        x1
    } else {
        f64::INFINITY
    };
    if sub2 < 1.0 {
        return None;
    }
    if x4 + x5 < 1.0 {
        return None;
    }

    // Lower bounds on alpha.
    let mut alpha = x1.max(x2).max(0.0);

    let exponent = if x4 > 0.0 {
        (x4 + x6 - 1.0) / x4
    } else if x4 + x6 - 1.0 < 0.0 {
        f64::NEG_INFINITY
    } else {
        0.0
    };
    alpha = alpha.max(x1 + (1.0 - exponent.exp()) * x3);

    // x1 >= (1 - 1/e)(1 - 2a) + (x4 + x5 + x6 - 1) * x2 / x5, rearranged.
    let k = x4 + x5 + x6 - 1.0;
    let coupling = if x5 > 0.0 {
        k * x2 / x5
    } else if x2 == 0.0 {
        0.0
    } else if x4 + x6 - 1.0 > 0.0 {
        f64::INFINITY
    } else if x4 + x6 - 1.0 < 0.0 {
        f64::NEG_INFINITY
    } else {
        // k collapses to x5, so k * x2 / x5 limits to x2.
        x2
    };
    alpha = alpha.max((one_minus_inv_e - x1 + coupling) / (2.0 * one_minus_inv_e));

    if alpha <= 1.0 {
        Some(alpha)
    } else {
        None
    }
}

/// Minimal `alpha` for the simplified three-variable program, or `None` when
/// `x` is infeasible.
pub fn simple_program_alpha(x: &[f64; 3]) -> Option<f64> {
    let [x1, x2, x3] = *x;
    if x1 < 1.0 - (-x3).exp() {
        return None;
    }
    let mut alpha = x1.max(1.0 - x1 - x2).max(0.0);
    let linear = if x3 < 1.0 {
        x1 + (1.0 - x3 / (1.0 - x3)) * x2
    } else if x2 == 0.0 {
        x1
    } else {
        f64::NEG_INFINITY
    };
    alpha = alpha.max(linear);
    if alpha <= 1.0 {
        Some(alpha)
    } else {
        None
    }
}

fn track<const D: usize>(
    best: &mut Option<(f64, [f64; D])>,
    candidate: Option<f64>,
    point: [f64; D],
) {
    if let Some(a) = candidate {
        if best.is_none_or(|(b, _)| a < b) {
            *best = Some((a, point));
        }
    }
}

/// Random + grid + local-refinement sweep of the six-variable program.
pub fn falsify_program_main(samples: u64, seed: u64, constants: &Constants) -> ProgramMinimum {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(f64, [f64; 6])> = None;
    let mut used = 0u64;

    for _ in 0..samples {
        let point = [(); 6].map(|_| rng.gen::<f64>());
        track(
            &mut best,
            main_program_alpha(&point, constants.one_minus_inv_e),
            point,
        );
        used += 1;
    }

    // Coarse grid, boundaries included: exponent and ratio corner cases live
    // on the faces of the cube.
    let grid: Vec<f64> = (0..=8).map(|i| i as f64 / 8.0).collect();
    for &x1 in &grid {
        for &x2 in &grid {
            for &x3 in &grid {
                for &x4 in &grid {
                    for &x5 in &grid {
                        for &x6 in &grid {
                            let point = [x1, x2, x3, x4, x5, x6];
                            track(
                                &mut best,
                                main_program_alpha(&point, constants.one_minus_inv_e),
                                point,
                            );
                            used += 1;
                        }
                    }
                }
            }
        }
    }

    // Shrinking jitter around the best point sharpens the reported minimum.
    if let Some((_, mut center)) = best {
        let mut radius = 0.25;
        for round in 0..40 {
            for _ in 0..2000 {
                let point = center.map(|c| (c + rng.gen_range(-radius..=radius)).clamp(0.0, 1.0));
                track(
                    &mut best,
                    main_program_alpha(&point, constants.one_minus_inv_e),
                    point,
                );
                used += 1;
            }
            center = best.expect("refinement starts from a feasible point").1;
            if round % 4 == 3 {
                radius *= 0.5;
            }
        }
    }

    let (alpha, point) = best.expect("grid sampling always finds a feasible point");
    ProgramMinimum {
        alpha,
        point: point.to_vec(),
        samples: used,
    }
}

/// Random + grid + local-refinement sweep of the three-variable program.
pub fn falsify_program_simple(samples: u64, seed: u64) -> ProgramMinimum {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(f64, [f64; 3])> = None;
    let mut used = 0u64;

    for _ in 0..samples {
        let point = [(); 3].map(|_| rng.gen::<f64>());
        track(&mut best, simple_program_alpha(&point), point);
        used += 1;
    }

    let grid: Vec<f64> = (0..=100).map(|i| i as f64 / 100.0).collect();
    for &x1 in &grid {
        for &x2 in &grid {
            for &x3 in &grid {
                let point = [x1, x2, x3];
                track(&mut best, simple_program_alpha(&point), point);
                used += 1;
            }
        }
    }

    if let Some((_, mut center)) = best {
        let mut radius = 0.25;
        for round in 0..40 {
            for _ in 0..2000 {
                let point = center.map(|c| (c + rng.gen_range(-radius..=radius)).clamp(0.0, 1.0));
                track(&mut best, simple_program_alpha(&point), point);
                used += 1;
            }
            center = best.expect("refinement starts from a feasible point").1;
            if round % 4 == 3 {
                radius *= 0.5;
            }
        }
    }

    let (alpha, point) = best.expect("grid sampling always finds a feasible point");
    ProgramMinimum {
        alpha,
        point: point.to_vec(),
        samples: used,
    }
}
