use crate::analytic::{exp_p, in_exp_domain};
use crate::error::{Error, Result};
use crate::padic::{PadicNumber, Valuation};

/// Membership in `D = S(0,1) ∩ B(1, p^(-1/(p-1)))`: a unit congruent to 1 mod p.
pub fn in_domain_d(x: &PadicNumber) -> bool {
    x.is_unit() && x.digits()[0] == 1
}

/// One factor map `f(x) = (a x + b) / (c + x)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoebiusFactor {
    a: PadicNumber,
    b: PadicNumber,
    c: PadicNumber,
    params: Option<[PadicNumber; 3]>,
}

impl MoebiusFactor {
    /// `a = exp_p(alpha)`, `b = exp_p(beta)`, `c = exp_p(gamma)`.
    pub fn from_params(alpha: &PadicNumber, beta: &PadicNumber, gamma: &PadicNumber) -> Result<Self> {
        for (name, x) in [("alpha", alpha), ("beta", beta), ("gamma", gamma)] {
            if !in_exp_domain(x) {
                return Err(Error::domain(format!(
                    "parameter condition v({name}) >= 1 violated: v({name}) = {}",
                    x.valuation()
                )));
            }
        }
        Ok(MoebiusFactor {
            a: exp_p(alpha)?,
            b: exp_p(beta)?,
            c: exp_p(gamma)?,
            params: Some([alpha.clone(), beta.clone(), gamma.clone()]),
        })
    }

    /// Coefficients given directly; each must lie in `D`.
    pub fn from_coefficients(a: PadicNumber, b: PadicNumber, c: PadicNumber) -> Result<Self> {
        for (name, x) in [("a", &a), ("b", &b), ("c", &c)] {
            if !in_domain_d(x) {
                return Err(Error::domain(format!("coefficient {name} = {x} is not in D")));
            }
        }
        Ok(MoebiusFactor { a, b, c, params: None })
    }

    pub fn a(&self) -> &PadicNumber {
        &self.a
    }

    pub fn b(&self) -> &PadicNumber {
        &self.b
    }

    pub fn c(&self) -> &PadicNumber {
        &self.c
    }

    /// `(alpha, beta, gamma)` when built by [`MoebiusFactor::from_params`].
    pub fn params(&self) -> Option<&[PadicNumber; 3]> {
        self.params.as_ref()
    }

    /// `a c - b`; `f(x) - f(y) = (x - y)(a c - b) / ((c + x)(c + y))`.
    pub fn determinant(&self) -> PadicNumber {
        self.a.mul(&self.c).and_then(|ac| ac.sub(&self.b)).expect("coefficients share a context")
    }

    /// Digits of contraction per application, `v(a c - b)`.
    pub fn lipschitz_valuation(&self) -> Valuation {
        self.determinant().valuation()
    }

    pub fn apply(&self, x: &PadicNumber) -> Result<PadicNumber> {
        if !in_domain_d(x) {
            return Err(Error::domain(format!("factor argument {x} is not in D")));
        }
        let num = self.a.mul(x)?.add(&self.b)?;
        let den = self.c.add(x)?;
        num.div(&den)
    }
}

/// `v(f(x) - f(y)) - v(x - y)` for `x != y` in `D`.
///
/// When `f(x) - f(y)` vanishes at the working precision the gain is only
/// bounded below and comes back as [`Valuation::AtLeast`].
pub fn contraction_ratio(f: &MoebiusFactor, x: &PadicNumber, y: &PadicNumber) -> Result<Valuation> {
    let dx = x.sub(y)?;
    let Some(e) = dx.valuation().finite() else {
        return Err(Error::usage("contraction ratio is undefined for x = y at working precision"));
    };
    let df = f.apply(x)?.sub(&f.apply(y)?)?;
    Ok(match df.valuation() {
        Valuation::Finite(g) => Valuation::Finite(g - e),
        Valuation::AtLeast(k) => Valuation::AtLeast(k - e),
        Valuation::Infinite => Valuation::Infinite,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::PadicContext;

    fn ctx() -> PadicContext {
        PadicContext::new(5, 8).unwrap()
    }

    fn int(n: i128) -> PadicNumber {
        PadicNumber::from_integer(n, ctx())
    }

    #[test]
    fn zero_params_give_identity_coefficients() {
        let f = MoebiusFactor::from_params(&int(0), &int(0), &int(0)).unwrap();
        assert_eq!(f.a(), &int(1));
        assert_eq!(f.b(), &int(1));
        assert_eq!(f.c(), &int(1));
        for x in [1, 6, 11, 26] {
            assert_eq!(f.apply(&int(x)).unwrap(), int(1));
        }
        let gain = contraction_ratio(&f, &int(6), &int(1)).unwrap();
        assert!(matches!(gain, Valuation::AtLeast(k) if k >= 8 - 1));
    }

    #[test]
    fn factor_from_five_ten_five() {
        // exp_5(5) and exp_5(10) mod 5^8, exact-fraction partial sums
        let f = MoebiusFactor::from_params(&int(5), &int(10), &int(5)).unwrap();
        assert_eq!(f.a().digits(), &[1, 1, 3, 3, 4, 1, 2, 4]);
        assert_eq!(f.b().digits(), &[1, 2, 2, 3, 0, 3, 0, 1]);
        assert_eq!(f.c(), f.a());
        // alpha + gamma = beta, so a c = b and f is the constant a
        assert!(f.lipschitz_valuation().is_at_least(8));
        assert_eq!(f.apply(&int(1)).unwrap().digits(), &[1, 1, 3, 3, 4, 1, 2, 4]);
    }

    #[test]
    fn rejects_out_of_domain() {
        assert!(matches!(MoebiusFactor::from_params(&int(1), &int(0), &int(0)), Err(Error::Domain(_))));
        let f = MoebiusFactor::from_params(&int(5), &int(0), &int(0)).unwrap();
        assert!(matches!(f.apply(&int(2)), Err(Error::Domain(_))));
        assert!(matches!(f.apply(&int(5)), Err(Error::Domain(_))));
        assert!(MoebiusFactor::from_coefficients(int(2), int(1), int(1)).is_err());
        assert!(matches!(contraction_ratio(&f, &int(6), &int(6)), Err(Error::Usage(_))));
    }

    #[test]
    fn gain_matches_determinant() {
        let f = MoebiusFactor::from_params(&int(5), &int(0), &int(25)).unwrap();
        assert_eq!(f.lipschitz_valuation(), Valuation::Finite(1));
        assert_eq!(contraction_ratio(&f, &int(6), &int(1)).unwrap(), Valuation::Finite(1));
        assert_eq!(contraction_ratio(&f, &int(26), &int(1)).unwrap(), Valuation::Finite(1));
    }
}
