//! The approximation constants, each obtained by bisection on a bracketed
//! monotone segment of its defining equation, with sign-change certificates.

use crate::error::{Error, Result};

/// `(1-a)ln(1-a) + (2 - 1/e)(1 - 2a)`; its root in (0.3, 0.5) is the
/// worst-case factor of the greedy-with-safeguard algorithm.
pub fn factor_main_equation(a: f64) -> f64 {
    (1.0 - a) * (1.0 - a).ln() + (2.0 - (-1.0f64).exp()) * (1.0 - 2.0 * a)
}

/// `(1-a)(ln(1-a) + 2) - 1`; its root in (0.2, 0.5) governs the guaranteed
/// ratio between the solution value and the upper bound `lambda`.
pub fn bound_ratio_equation(a: f64) -> f64 {
    (1.0 - a) * ((1.0 - a).ln() + 2.0) - 1.0
}

/// `e^x - (2 - x)`; its unique root relates the two historical forms of the
/// bound-ratio constant: `alpha_prime = 1 - e^(-beta)`.
pub fn beta_equation(x: f64) -> f64 {
    x.exp() - (2.0 - x)
}

/// Bisection on `[lo, hi]`; requires a sign change and shrinks the bracket to
/// `tolerance` (or machine precision, whichever is reached first).
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tolerance: f64) -> Result<f64> {
    let (flo, fhi) = (f(lo), f(hi));
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::Bracketing { lo, hi });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi || hi - lo <= tolerance {
            break;
        }
        let fmid = f(mid);
        if fmid == 0.0 {
            return Ok(mid);
        }
        if fmid.signum() == flo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// The solved constants plus derived closed forms.
#[derive(Clone, Copy, Debug)]
pub struct Constants {
    /// Worst-case approximation factor of the greedy-with-safeguard run.
    pub alpha_bot: f64,
    /// Guaranteed ratio between the solution value and the bound `lambda`.
    pub alpha_prime: f64,
    /// Root of `e^x = 2 - x`.
    pub beta: f64,
    pub one_minus_inv_sqrt_e: f64,
    pub one_minus_inv_e: f64,
}

impl Constants {
    /// Solve all constants to at least `tolerance` (which must be in
    /// `(0, 1e-6]`); bisection runs to machine precision internally, the
    /// tolerance is the width of the sign-change certificate.
    pub fn solve(tolerance: f64) -> Result<Constants> {
        if !(tolerance > 0.0 && tolerance <= 1e-6) {
            return Err(Error::InvalidParameter(format!(
                "tolerance {tolerance} outside (0, 1e-6]"
            )));
        }
        let alpha_bot = bisect(factor_main_equation, 0.3, 0.5, 0.0)?;
        let alpha_prime = bisect(bound_ratio_equation, 0.2, 0.5, 0.0)?;
        let beta = bisect(beta_equation, 0.0, 1.0, 0.0)?;
        let constants = Constants {
            alpha_bot,
            alpha_prime,
            beta,
            one_minus_inv_sqrt_e: 1.0 - (-0.5f64).exp(),
            one_minus_inv_e: 1.0 - (-1.0f64).exp(),
        };
        constants.certify(tolerance)?;
        Ok(constants)
    }

    /// Sign-change certificates at `root ± tolerance` for each solved root,
    /// plus the algebraic identity `alpha_prime = 1 - e^(-beta)`.
    pub fn certify(&self, tolerance: f64) -> Result<()> {
        let certify_one = |f: &dyn Fn(f64) -> f64, root: f64, name: &'static str| -> Result<()> {
            let (below, above) = (f(root - tolerance), f(root + tolerance));
            if below.signum() == above.signum() {
                return Err(Error::InequalityViolated {
                    name,
                    slack: below.abs().min(above.abs()),
                    context: format!("no sign change around root {root}"),
                });
            }
            Ok(())
        };
        certify_one(&factor_main_equation, self.alpha_bot, "factor_main_root")?;
        certify_one(&bound_ratio_equation, self.alpha_prime, "bound_ratio_root")?;
        certify_one(&beta_equation, self.beta, "beta_root")?;
        let identity = (self.alpha_prime - (1.0 - (-self.beta).exp())).abs();
        if identity >= 1e-9 {
            return Err(Error::InequalityViolated {
                name: "alpha_prime_beta_identity",
                slack: identity,
                context: "alpha_prime must equal 1 - e^(-beta)".into(),
            });
        }
        Ok(())
    }
}

/// Solve every constant with sign-change certificates at `tolerance`.
pub fn solve_constants(tolerance: f64) -> Result<Constants> {
    Constants::solve(tolerance)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_land_in_their_windows() {
        let c = solve_constants(1e-9).unwrap();
        assert!(
            c.alpha_bot > 0.405 && c.alpha_bot < 0.406,
            "{}",
            c.alpha_bot
        );
        assert!((c.alpha_bot - 0.4053).abs() < 5e-4);
        assert!(
            c.alpha_prime > 0.357 && c.alpha_prime < 0.358,
            "{}",
            c.alpha_prime
        );
        assert!((c.alpha_prime - 0.3578).abs() < 5e-4);
        assert!(c.one_minus_inv_sqrt_e > 0.393 && c.one_minus_inv_sqrt_e < 0.394);
        assert!((c.one_minus_inv_sqrt_e - 0.393469).abs() < 1e-6);
    }

    #[test]
    fn identity_between_ratio_forms() {
        let c = solve_constants(1e-9).unwrap();
        assert!((c.alpha_prime - (1.0 - (-c.beta).exp())).abs() < 1e-9);
    }

    #[test]
    fn bisect_rejects_unbracketed_intervals() {
        assert!(matches!(
            bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-9),
            Err(Error::Bracketing { .. })
        ));
    }

    #[test]
    fn tolerance_domain_is_enforced() {
        assert!(solve_constants(0.0).is_err());
        assert!(solve_constants(1e-3).is_err());
        assert!(solve_constants(1e-7).is_ok());
    }
}
