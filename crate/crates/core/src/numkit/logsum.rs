use super::Real;
use crate::error::{Error, Result};

/// Terms `exp(log_mag) * (1, payload...)` summed without leaving log space.
#[derive(Clone, Debug, Default)]
pub struct LogSumAccumulator {
    terms: Vec<(Real, Vec<Real>)>,
}

#[derive(Clone, Debug)]
pub struct LogSum {
    pub log_total: Real,
    /// `sum_j w_j * payload_j[k]` with softmax weights `w_j`.
    pub weighted_means: Vec<Real>,
}

impl LogSumAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, log_mag: Real, payload: Vec<Real>) {
        self.terms.push((log_mag, payload));
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(Real, Vec<Real>)] {
        &self.terms
    }
}

impl FromIterator<(Real, Vec<Real>)> for LogSumAccumulator {
    fn from_iter<I: IntoIterator<Item = (Real, Vec<Real>)>>(iter: I) -> Self {
        LogSumAccumulator {
            terms: iter.into_iter().collect(),
        }
    }
}

/// Max-shifted log-sum-exp with softmax-weighted payload means.
pub fn log_sum_exp(acc: &LogSumAccumulator) -> Result<LogSum> {
    let Some((first_log, first_payload)) = acc.terms.first() else {
        return Err(Error::Domain("log-sum-exp of an empty sum".into()));
    };
    let width = first_payload.len();
    if acc.terms.iter().any(|(_, p)| p.len() != width) {
        return Err(Error::Dimension("payload lengths differ between terms".into()));
    }
    let shift = acc
        .terms
        .iter()
        .skip(1)
        .fold(first_log.clone(), |m, (l, _)| if *l > m { l.clone() } else { m });

    let mut total = Real::zero();
    let mut moments = vec![Real::zero(); width];
    for (log_mag, payload) in &acc.terms {
        let w = (log_mag - &shift).exp();
        for (acc_k, p) in moments.iter_mut().zip(payload) {
            *acc_k += &w * p;
        }
        total += w;
    }
    let weighted_means = moments.into_iter().map(|m| m / &total).collect();
    Ok(LogSum {
        log_total: shift + total.ln(),
        weighted_means,
    })
}

/// `ln(sum exp(l_j))` for payload-free terms.
pub fn log_sum_exp_values<'a, I>(logs: I) -> Result<Real>
where
    I: IntoIterator<Item = &'a Real>,
    I::IntoIter: Clone,
{
    let it = logs.into_iter();
    let shift = it
        .clone()
        .fold(None::<&Real>, |m, l| match m {
            Some(m) if m >= l => Some(m),
            _ => Some(l),
        })
        .ok_or_else(|| Error::Domain("log-sum-exp of an empty sum".into()))?
        .clone();
    let total: Real = it.map(|l| (l - &shift).exp()).sum();
    Ok(shift + total.ln())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn acc(logs: &[i64]) -> LogSumAccumulator {
        logs.iter()
            .map(|&l| (Real::from_i64(l), vec![Real::from_i64(l)]))
            .collect()
    }

    #[test]
    fn single_and_pair() {
        let r = log_sum_exp(&acc(&[0])).unwrap();
        assert!(r.log_total.is_zero());
        let r = log_sum_exp(&acc(&[0, 0])).unwrap();
        assert_eq!(r.log_total, Real::ln2());
    }

    #[test]
    fn huge_gap_does_not_overflow() {
        let r = log_sum_exp(&acc(&[1000, 0])).unwrap();
        // oracle: 1000 + ln(1 + e^-1000), with e^-1000 far below 2^-256 relative
        let tail = Real::from_i64(-1000).exp();
        let expected = Real::from_i64(1000) + (Real::one() + tail).ln();
        assert_eq!(r.log_total, expected);
        assert!(Real::rel_diff(&r.weighted_means[0], &Real::from_i64(1000), &Real::zero())
            < Real::parse("1e-70").unwrap());
    }

    #[test]
    fn empty_is_domain_error() {
        assert!(matches!(
            log_sum_exp(&LogSumAccumulator::new()),
            Err(Error::Domain(_))
        ));
        assert!(log_sum_exp_values(std::iter::empty::<&Real>()).is_err());
    }

    #[test]
    fn payload_width_mismatch() {
        let mut a = LogSumAccumulator::new();
        a.push(Real::zero(), vec![Real::one()]);
        a.push(Real::zero(), vec![]);
        assert!(matches!(log_sum_exp(&a), Err(Error::Dimension(_))));
    }

    #[test]
    fn values_variant_matches() {
        let logs: Vec<Real> = [3, -2, 7].iter().map(|&v| Real::from_i64(v)).collect();
        let a: LogSumAccumulator = logs.iter().map(|l| (l.clone(), vec![])).collect();
        assert_eq!(
            log_sum_exp_values(&logs).unwrap(),
            log_sum_exp(&a).unwrap().log_total
        );
    }
}
