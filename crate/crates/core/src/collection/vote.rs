use super::CollectionError;
use crate::evaluation::Grade;

/// Final grade for one (topic, document) pair from its evaluators' grades.
///
/// The most frequent grade wins. When several grades tie for the mode, the
/// median of all grades (rounded down) picks the tied grade closest to it,
/// and an equidistant pair resolves to the lower grade. The result does not
/// depend on input order.
pub fn majority_vote(grades: &[Grade]) -> Result<Grade, CollectionError> {
    if grades.is_empty() {
        return Err(CollectionError::EmptyJudgments);
    }
    let mut counts = [0usize; Grade::MAX as usize + 1];
    for g in grades {
        counts[g.value() as usize] += 1;
    }
    let top = *counts.iter().max().expect("non-empty");
    let modes: Vec<u8> = (0..=Grade::MAX).filter(|g| counts[*g as usize] == top).collect();
    if let [only] = modes.as_slice() {
        return Ok(Grade::new(i64::from(*only)).expect("in range"));
    }

    let mut sorted: Vec<u8> = grades.iter().map(|g| g.value()).collect();
    sorted.sort_unstable();
    let n = sorted.len();
    let median = if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2
    };
    // modes ascend, so min_by_key keeps the lower grade on equal distance
    let chosen = modes
        .into_iter()
        .min_by_key(|m| m.abs_diff(median))
        .expect("at least two modes");
    Ok(Grade::new(i64::from(chosen)).expect("in range"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(values: &[i64]) -> Vec<Grade> {
        values.iter().map(|v| Grade::new(*v).unwrap()).collect()
    }

    fn vote(values: &[i64]) -> u8 {
        majority_vote(&g(values)).unwrap().value()
    }

    #[test]
    fn clear_mode() {
        assert_eq!(vote(&[2, 2, 3, 1, 2]), 2);
        assert_eq!(vote(&[3, 3, 3, 3, 3]), 3);
        assert_eq!(vote(&[0]), 0);
    }

    #[test]
    fn tied_modes_use_median_then_lower() {
        // median 2, modes 1 and 3 equidistant
        assert_eq!(vote(&[1, 1, 3, 3, 2]), 1);
        // median 1, modes 0 and 3 → 0 is closer
        assert_eq!(vote(&[0, 0, 3, 3, 1]), 0);
        // median of [1,2,3,3] = floor(2.5) = 2; modes 3 only → 3
        assert_eq!(vote(&[1, 2, 3, 3]), 3);
        // [0,0,2,2,3,3]: modes 0,2,3; median floor((2+2)/2) = 2 → 2
        assert_eq!(vote(&[0, 0, 2, 2, 3, 3]), 2);
        // [1,2]: median floor(1.5) = 1 → 1
        assert_eq!(vote(&[2, 1]), 1);
        // all four grades once: median floor((1+2)/2) = 1 → 1
        assert_eq!(vote(&[3, 0, 2, 1]), 1);
    }

    #[test]
    fn empty_is_an_error() {
        assert!(matches!(majority_vote(&[]), Err(CollectionError::EmptyJudgments)));
    }
}
