use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::{PadicContext, PadicNumber};
use crate::recursion::factor::MoebiusFactor;

/// A sequence indexed from 1: a finite preamble, then a period repeated forever.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventuallyPeriodic {
    preamble: Vec<PadicNumber>,
    period: Vec<PadicNumber>,
}

impl EventuallyPeriodic {
    pub fn new(preamble: Vec<PadicNumber>, period: Vec<PadicNumber>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::usage("period must be nonempty"));
        }
        Ok(EventuallyPeriodic { preamble, period })
    }

    pub fn constant(value: PadicNumber) -> Self {
        EventuallyPeriodic { preamble: Vec::new(), period: vec![value] }
    }

    pub fn preamble(&self) -> &[PadicNumber] {
        &self.preamble
    }

    pub fn period(&self) -> &[PadicNumber] {
        &self.period
    }

    /// Entry `k` for `k >= 1`.
    pub fn get(&self, k: u64) -> &PadicNumber {
        assert!(k >= 1, "sequences are indexed from 1");
        let i = (k - 1) as usize;
        if i < self.preamble.len() {
            &self.preamble[i]
        } else {
            &self.period[(i - self.preamble.len()) % self.period.len()]
        }
    }

    /// First index `k >= 1` at which `pred` fails, scanning one period past the preamble.
    fn first_violation(&self, pred: impl Fn(&PadicNumber) -> bool) -> Option<(u64, &PadicNumber)> {
        self.preamble.iter().chain(&self.period).enumerate().find(|(_, x)| !pred(x)).map(|(i, x)| (i as u64 + 1, x))
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Parameter sequences `alpha, beta, gamma` and the factor maps they induce.
///
/// The three sequences are jointly eventually periodic with preamble
/// `max` of the preambles and period `lcm` of the periods; the factor maps
/// for one joint preamble plus one joint period are computed once.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    ctx: PadicContext,
    alpha: EventuallyPeriodic,
    beta: EventuallyPeriodic,
    gamma: EventuallyPeriodic,
    preamble_len: usize,
    period_len: usize,
    factors: Vec<MoebiusFactor>,
}

impl ProblemSpec {
    /// Every parameter must have valuation at least one; the error names the
    /// first offending sequence and index.
    pub fn new(
        ctx: PadicContext,
        alpha: EventuallyPeriodic,
        beta: EventuallyPeriodic,
        gamma: EventuallyPeriodic,
    ) -> Result<Self> {
        for (name, seq) in [("alpha", &alpha), ("beta", &beta), ("gamma", &gamma)] {
            if let Some(bad) = seq.preamble.iter().chain(&seq.period).find(|x| x.p() != ctx.p()) {
                return Err(Error::usage(format!("{name} entry {bad} is not in Q_{}", ctx.p())));
            }
            if let Some((k, x)) = seq.first_violation(|x| x.valuation().is_at_least(1)) {
                return Err(Error::domain(format!(
                    "parameter condition v({name}_k) >= 1 violated at k={k}: v = {}",
                    x.valuation()
                )));
            }
        }
        let preamble_len = alpha.preamble.len().max(beta.preamble.len()).max(gamma.preamble.len());
        let period_len =
            [alpha.period.len(), beta.period.len(), gamma.period.len()].into_iter().fold(1, |l, n| l / gcd(l, n) * n);
        let factors = (1..=(preamble_len + period_len) as u64)
            .map(|k| MoebiusFactor::from_params(alpha.get(k), beta.get(k), gamma.get(k)))
            .collect::<Result<Vec<_>>>()?;
        Ok(ProblemSpec { ctx, alpha, beta, gamma, preamble_len, period_len, factors })
    }

    /// `alpha_k = alpha`, `beta_k = beta`, `gamma_k = gamma` for all `k`.
    pub fn constant(alpha: PadicNumber, beta: PadicNumber, gamma: PadicNumber) -> Result<Self> {
        let ctx = alpha.context();
        ProblemSpec::new(
            ctx,
            EventuallyPeriodic::constant(alpha),
            EventuallyPeriodic::constant(beta),
            EventuallyPeriodic::constant(gamma),
        )
    }

    pub fn context(&self) -> PadicContext {
        self.ctx
    }

    pub fn alpha(&self) -> &EventuallyPeriodic {
        &self.alpha
    }

    pub fn beta(&self) -> &EventuallyPeriodic {
        &self.beta
    }

    pub fn gamma(&self) -> &EventuallyPeriodic {
        &self.gamma
    }

    /// Length of the joint preamble.
    pub fn preamble_len(&self) -> usize {
        self.preamble_len
    }

    /// Length of the joint period.
    pub fn period_len(&self) -> usize {
        self.period_len
    }

    /// The factor map `f_k`, `k >= 1`.
    pub fn factor(&self, k: u64) -> &MoebiusFactor {
        assert!(k >= 1, "factor maps are indexed from 1");
        let i = (k - 1) as usize;
        if i < self.preamble_len {
            &self.factors[i]
        } else {
            &self.factors[self.preamble_len + (i - self.preamble_len) % self.period_len]
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ProblemFile = serde_json::from_str(text).map_err(|e| Error::parse(format!("problem spec: {e}")))?;
        file.to_spec()
    }
}

/// A sequence in a problem file: rationals as `"num/den"` strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceFile {
    #[serde(default)]
    pub preamble: Vec<String>,
    pub period: Vec<String>,
}

/// On-disk problem description:
/// `{"p": 5, "precision": 30, "alpha": {"preamble": [...], "period": [...]}, ...}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemFile {
    pub p: u32,
    pub precision: u32,
    pub alpha: SequenceFile,
    pub beta: SequenceFile,
    pub gamma: SequenceFile,
}

impl SequenceFile {
    fn to_sequence(&self, name: &str, ctx: PadicContext) -> Result<EventuallyPeriodic> {
        let convert = |items: &[String], offset: usize| {
            items
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    let x = PadicNumber::parse_literal(s, ctx)
                        .map_err(|e| Error::parse(format!("{name} at k={}: {e}", offset + i + 1)))?;
                    if !x.valuation().is_at_least(1) {
                        return Err(Error::domain(format!(
                            "parameter condition v({name}_k) >= 1 violated at k={}: {name}_k = {s}",
                            offset + i + 1
                        )));
                    }
                    Ok(x)
                })
                .collect::<Result<Vec<_>>>()
        };
        let preamble = convert(&self.preamble, 0)?;
        let period = convert(&self.period, self.preamble.len())?;
        EventuallyPeriodic::new(preamble, period).map_err(|_| Error::usage(format!("{name}: period must be nonempty")))
    }
}

impl ProblemFile {
    pub fn to_spec(&self) -> Result<ProblemSpec> {
        let ctx = PadicContext::new(self.p, self.precision)?;
        ProblemSpec::new(
            ctx,
            self.alpha.to_sequence("alpha", ctx)?,
            self.beta.to_sequence("beta", ctx)?,
            self.gamma.to_sequence("gamma", ctx)?,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CASE1: &str = r#"{
        "p": 5, "precision": 12,
        "alpha": {"preamble": ["5/1"], "period": ["10/3", "25/1"]},
        "beta":  {"period": ["0"]},
        "gamma": {"preamble": ["5/1"], "period": ["10/3", "25/1"]}
    }"#;

    #[test]
    fn loads_rational_sequences() {
        let spec = ProblemSpec::from_json(CASE1).unwrap();
        assert_eq!(spec.preamble_len(), 1);
        assert_eq!(spec.period_len(), 2);
        let ctx = spec.context();
        assert_eq!(spec.alpha().get(4), &PadicNumber::from_rational(10, 3, ctx).unwrap());
        assert_eq!(spec.alpha().get(5), &PadicNumber::from_integer(25, ctx));
        assert_eq!(spec.factor(2), spec.factor(4));
        assert_eq!(spec.factor(3), spec.factor(101));
    }

    #[test]
    fn rejects_unit_parameters_with_index() {
        let bad = CASE1.replace("\"25/1\"", "\"2/5\"");
        let err = ProblemSpec::from_json(&bad).unwrap_err();
        assert!(matches!(&err, Error::Domain(m) if m.contains("alpha") && m.contains("k=3")), "{err}");
        let bad = CASE1.replace("\"0\"", "\"1/x\"");
        assert!(matches!(ProblemSpec::from_json(&bad), Err(Error::Parse(_))));
        let bad = CASE1.replace("\"p\": 5", "\"p\": 4");
        assert!(matches!(ProblemSpec::from_json(&bad), Err(Error::Usage(_))));
    }

    #[test]
    fn joint_period_is_lcm() {
        let ctx = PadicContext::new(3, 6).unwrap();
        let seq = |n: usize| {
            EventuallyPeriodic::new(vec![], (1..=n).map(|i| PadicNumber::from_integer(3 * i as i128, ctx)).collect())
                .unwrap()
        };
        let spec = ProblemSpec::new(ctx, seq(2), seq(3), seq(4)).unwrap();
        assert_eq!(spec.period_len(), 12);
        assert!(EventuallyPeriodic::new(vec![], vec![]).is_err());
    }
}
