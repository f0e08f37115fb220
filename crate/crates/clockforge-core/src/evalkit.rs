//! Accuracy metrics over (prediction, ground-truth) pairs.
//!
//! Overall correctness uses class circular distance ≤ 1, which is exactly
//! "hour correct and minute within ±1" once the :59/:00 hour-carry cases are
//! included — the carry interpretation keeps the metric self-consistent at
//! hour boundaries. Hour accuracy is strict hour equality; minute accuracy
//! is the cyclic ±1 margin on the minute alone.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::timecore::{circular_distance, decode_class, encode_time, ClockTime, TimeClass};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("cannot evaluate an empty dataset")]
    EmptyDataset,
    #[error("candidate lists are limited to 3 entries, got {0}")]
    TooManyCandidates(usize),
    #[error("candidate lists must not repeat a class")]
    DuplicateCandidate,
}

/// Ground truth plus up to three ranked candidates; an empty candidate list
/// records a reader failure and counts as incorrect everywhere.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledPrediction {
    pub truth: TimeClass,
    pub candidates: Vec<TimeClass>,
}

impl LabeledPrediction {
    pub fn new(truth: TimeClass, candidates: Vec<TimeClass>) -> Result<Self, EvalError> {
        if candidates.len() > 3 {
            return Err(EvalError::TooManyCandidates(candidates.len()));
        }
        for (i, c) in candidates.iter().enumerate() {
            if candidates[..i].contains(c) {
                return Err(EvalError::DuplicateCandidate);
            }
        }
        Ok(Self { truth, candidates })
    }
}

/// Aggregate accuracies; `top1 ≤ top2 ≤ top3` by construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub n: usize,
    pub top1: f64,
    pub top2: f64,
    pub top3: f64,
    pub hour_top1: f64,
    pub minute_top1: f64,
}

/// Cyclic minute distance ≤ 1, ignoring the hour.
pub fn minute_correct(pred: ClockTime, truth: ClockTime) -> bool {
    let d = (pred.minute() as i16 - truth.minute() as i16).unsigned_abs() as u16;
    d.min(60 - d) <= 1
}

/// Both hour and minute correct, minute within ±1, hour-carry included:
/// equivalently class circular distance ≤ 1.
pub fn overall_correct(pred: ClockTime, truth: ClockTime) -> bool {
    circular_distance(encode_time(pred), encode_time(truth)) <= 1
}

/// Computes the report. Top-k counts an item when any of its first k
/// candidates is overall-correct; hour/minute accuracies look only at the
/// rank-1 candidate.
pub fn evaluate(items: &[LabeledPrediction]) -> Result<EvalReport, EvalError> {
    if items.is_empty() {
        return Err(EvalError::EmptyDataset);
    }
    let n = items.len();
    let mut top = [0usize; 3];
    let mut hour = 0usize;
    let mut minute = 0usize;
    for item in items {
        let truth = decode_class(item.truth);
        for k in 0..3 {
            if item
                .candidates
                .iter()
                .take(k + 1)
                .any(|&c| overall_correct(decode_class(c), truth))
            {
                top[k] += 1;
            }
        }
        if let Some(&first) = item.candidates.first() {
            let p = decode_class(first);
            if p.hour() == truth.hour() {
                hour += 1;
            }
            if minute_correct(p, truth) {
                minute += 1;
            }
        }
    }
    let frac = |c: usize| c as f64 / n as f64;
    Ok(EvalReport {
        n,
        top1: frac(top[0]),
        top2: frac(top[1]),
        top3: frac(top[2]),
        hour_top1: frac(hour),
        minute_top1: frac(minute),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::timecore::all_classes;

    fn t(h: u8, m: u8) -> ClockTime {
        ClockTime::new(h, m).unwrap()
    }

    fn cls(h: u8, m: u8) -> TimeClass {
        encode_time(t(h, m))
    }

    #[test]
    fn minute_correct_examples() {
        assert!(minute_correct(t(5, 59), t(7, 0)));
        assert!(!minute_correct(t(3, 30), t(3, 32)));
        assert!(minute_correct(t(9, 41), t(2, 41)));
    }

    #[test]
    fn overall_correct_examples() {
        assert!(overall_correct(t(2, 59), t(3, 0)));
        assert!(!overall_correct(t(3, 0), t(3, 2)));
        assert!(overall_correct(t(11, 59), t(0, 0)));
        assert!(!overall_correct(t(2, 59), t(3, 1)));
    }

    #[test]
    fn overall_correct_is_symmetric_and_implies_minute() {
        for a in all_classes().step_by(7) {
            for b in all_classes().step_by(13) {
                let (p, q) = (decode_class(a), decode_class(b));
                assert_eq!(overall_correct(p, q), overall_correct(q, p));
                if overall_correct(p, q) {
                    assert!(minute_correct(p, q));
                }
            }
        }
    }

    #[test]
    fn evaluate_all_exact() {
        let items: Vec<LabeledPrediction> = (0..50u16)
            .map(|i| {
                let c = TimeClass::new(i * 14).unwrap();
                LabeledPrediction::new(c, vec![c]).unwrap()
            })
            .collect();
        let r = evaluate(&items).unwrap();
        assert_eq!(
            (r.top1, r.top2, r.top3, r.hour_top1, r.minute_top1),
            (1.0, 1.0, 1.0, 1.0, 1.0)
        );
    }

    #[test]
    fn evaluate_rank2_only() {
        let items: Vec<LabeledPrediction> = (0..40u16)
            .map(|i| {
                let truth = TimeClass::new(i * 17).unwrap();
                let wrong = TimeClass::wrap(truth.index() as i64 + 300);
                LabeledPrediction::new(truth, vec![wrong, truth]).unwrap()
            })
            .collect();
        let r = evaluate(&items).unwrap();
        assert_eq!(r.top1, 0.0);
        assert_eq!(r.top2, 1.0);
        assert_eq!(r.top3, 1.0);
    }

    #[test]
    fn empty_candidates_count_as_wrong() {
        let items = vec![
            LabeledPrediction::new(cls(1, 0), vec![]).unwrap(),
            LabeledPrediction::new(cls(2, 0), vec![cls(2, 0)]).unwrap(),
        ];
        let r = evaluate(&items).unwrap();
        assert_eq!(r.top1, 0.5);
        assert_eq!(r.hour_top1, 0.5);
        assert_eq!(r.minute_top1, 0.5);
    }

    #[test]
    fn report_ordering_holds() {
        let r = evaluate(&[
            LabeledPrediction::new(cls(0, 0), vec![cls(6, 0), cls(0, 1)]).unwrap(),
            LabeledPrediction::new(cls(4, 30), vec![cls(4, 30)]).unwrap(),
            LabeledPrediction::new(cls(9, 15), vec![cls(3, 0), cls(1, 1), cls(9, 16)]).unwrap(),
        ])
        .unwrap();
        assert!(r.top1 <= r.top2 && r.top2 <= r.top3);
    }

    #[test]
    fn evaluate_rejects_empty_dataset() {
        assert!(matches!(evaluate(&[]), Err(EvalError::EmptyDataset)));
    }

    #[test]
    fn construction_rejects_bad_candidate_lists() {
        assert!(LabeledPrediction::new(cls(0, 0), vec![cls(1, 0); 4]).is_err());
        assert!(LabeledPrediction::new(cls(0, 0), vec![cls(1, 0), cls(1, 0)]).is_err());
    }
}
