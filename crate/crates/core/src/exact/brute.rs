//! Explicit enumeration of plans, scored with the evaluator.

use super::{ExactError, Solution};
use crate::evaluator::expected_value_single;
use crate::mission::{Mission, Plan, BASE};

pub const BRUTE_MAX_N: usize = 6;
pub const BRUTE_MAX_LEN: usize = 10;
/// Length limit for [`reduced_enumerate`]; covers `n^2 - 1` for `n <= 6`.
pub const REDUCED_MAX_LEN: usize = 35;

struct Search<'a> {
    mission: &'a Mission,
    max_len: usize,
    route: Vec<usize>,
    send: Vec<bool>,
    best: Option<Solution>,
}

impl Search<'_> {
    fn offer(&mut self) {
        let mut plan = Plan::new(self.route.clone(), self.send.clone());
        *plan.send.last_mut().expect("non-empty") = true;
        let value = expected_value_single(self.mission, &plan)
            .expect("enumerated plans are valid")
            .expected_value;
        if self.best.as_ref().is_none_or(|b| value > b.value) {
            self.best = Some(Solution { plan, value });
        }
    }

    /// Every walk prefix and every send vector (first bit 0).
    fn all(&mut self) {
        let pos = *self.route.last().expect("non-empty");
        if pos == BASE {
            self.offer();
        }
        if self.route.len() > self.max_len {
            return;
        }
        for &j in self.mission.neighbors(pos) {
            self.route.push(j);
            for bit in [false, true] {
                self.send.push(bit);
                self.all();
                self.send.pop();
            }
            self.route.pop();
        }
    }

    /// Same space restricted to plans where every interior send carries
    /// something and no closed sub-walk passes without a new positive-weight
    /// observation or a transmission. Removing such a sub-walk (moving its
    /// closing send to its opening vertex) never lowers the value and only
    /// shortens the walk, so the optimum is unchanged.
    ///
    /// `since_event` holds the vertices visited since the last event;
    /// `observed` the vertices seen so far; `carrying` whether anything is
    /// held.
    fn reduced(&mut self, since_event: &mut Vec<usize>, observed: &mut [bool], carrying: bool) {
        let pos = *self.route.last().expect("non-empty");
        if pos == BASE {
            self.offer();
        }
        if self.route.len() > self.max_len {
            return;
        }
        for &j in self.mission.neighbors(pos) {
            let fresh = !observed[j];
            let gains = fresh && self.mission.info(j) > 0.0;
            if !gains && since_event.contains(&j) {
                continue;
            }
            observed[j] = true;
            self.route.push(j);
            let now_carrying = carrying || gains;

            // keep carrying
            self.send.push(false);
            if gains {
                let mut reset = vec![j];
                self.reduced(&mut reset, observed, now_carrying);
            } else {
                since_event.push(j);
                self.reduced(since_event, observed, now_carrying);
                since_event.pop();
            }
            self.send.pop();

            if now_carrying {
                self.send.push(true);
                let mut reset = vec![j];
                self.reduced(&mut reset, observed, false);
                self.send.pop();
            }

            self.route.pop();
            observed[j] = !fresh;
        }
    }
}

fn check_limits(m: &Mission, max_len: usize, max_n: usize, limit: usize) -> Result<(), ExactError> {
    m.validate()?;
    if m.n() > max_n || max_len > limit {
        return Err(ExactError::EnumerationLimits {
            n: m.n(),
            len: max_len,
            max_n,
            max_len: limit,
        });
    }
    Ok(())
}

/// Exhaustive search over every base-to-base walk with at most `max_len`
/// crossings and every send vector on it. Exponential: meant for `n <= 6`
/// and `max_len <= 10`.
pub fn brute_force_enumerate(m: &Mission, max_len: usize) -> Result<Solution, ExactError> {
    check_limits(m, max_len, BRUTE_MAX_N, BRUTE_MAX_LEN)?;
    let mut search = Search {
        mission: m,
        max_len,
        route: vec![BASE],
        send: vec![false],
        best: None,
    };
    search.all();
    Ok(search.best.expect("staying home is always enumerated"))
}

/// Exhaustive search over the dominance-reduced plan space (see
/// `Search::reduced`), which makes horizons up to `n^2 - 1` reachable for
/// `n <= 6` on sparse or small graphs.
pub fn reduced_enumerate(m: &Mission, max_len: usize) -> Result<Solution, ExactError> {
    check_limits(m, max_len, BRUTE_MAX_N, REDUCED_MAX_LEN)?;
    let mut search = Search {
        mission: m,
        max_len,
        route: vec![BASE],
        send: vec![false],
        best: None,
    };
    let mut observed = vec![false; m.n()];
    observed[BASE] = true;
    search.reduced(&mut vec![BASE], &mut observed, false);
    Ok(search.best.expect("staying home is always enumerated"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances;
    use approx::assert_abs_diff_eq;

    #[test]
    fn fig1_seven_crossings() {
        let m = instances::fig1();
        let sol = brute_force_enumerate(&m, 7).unwrap();
        assert_abs_diff_eq!(sol.value, 1.666494, epsilon = 1e-12);
        let sol = reduced_enumerate(&m, 7).unwrap();
        assert_abs_diff_eq!(sol.value, 1.666494, epsilon = 1e-12);
    }

    #[test]
    fn carry_home_beats_risky_send() {
        let m = Mission::new(2, &[(0, 1, 0.8)], vec![1.0, 0.5], vec![0.0, 1.0]).unwrap();
        let sol = brute_force_enumerate(&m, 4).unwrap();
        assert_abs_diff_eq!(sol.value, 0.64, epsilon = 1e-15);
        assert_eq!(sol.plan, Plan::from_bits(&[0, 1, 0], &[0, 0, 1]));
    }

    #[test]
    fn zero_weights() {
        let m = Mission::new(3, &[(0, 1, 0.8), (1, 2, 0.9)], vec![1.0; 3], vec![0.0; 3]).unwrap();
        assert_eq!(brute_force_enumerate(&m, 6).unwrap().value, 0.0);
        assert_eq!(reduced_enumerate(&m, 8).unwrap().value, 0.0);
    }

    #[test]
    fn limits() {
        let m = instances::k10();
        assert!(matches!(brute_force_enumerate(&m, 3), Err(ExactError::EnumerationLimits { .. })));
        let m = instances::fig1();
        assert!(matches!(brute_force_enumerate(&m, 11), Err(ExactError::EnumerationLimits { .. })));
        assert!(matches!(reduced_enumerate(&m, 36), Err(ExactError::EnumerationLimits { .. })));
    }
}
